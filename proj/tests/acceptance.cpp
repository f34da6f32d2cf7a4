// Acceptance run: one line per criterion, exact comparisons throughout.
// Exit status is nonzero when any criterion fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "qq/qq.hpp"

using namespace qq;

namespace {

struct Outcome {
    std::vector<std::string> failed; // names of failing sub-checks
    std::size_t checks = 0;

    void expect(bool ok, const std::string &what) {
        ++checks;
        if (!ok) {
            failed.push_back(what);
        }
    }
    void suite(const CheckReport &rep) {
        checks += rep.checks_run;
        std::string tag = rep.suite;
        if (rep.params.r) {
            tag += " r=" + std::to_string(*rep.params.r);
        }
        for (const auto &f : rep.failures) {
            failed.push_back(tag + ": " + f.id + " [" + f.instantiation + "]");
        }
    }
};

struct Criterion {
    int id;
    std::string title;
    double limit_s;
    std::function<void(Outcome &)> run;
};

QLaurent qp(int e) { return QLaurent::q(e); }
NCExpr Mw(std::vector<int> idx, const QLaurent &c = 1) { return NCExpr::m_word(idx, c); }

UKernel K(int arity, std::initializer_list<std::pair<UKernel::Exponents, QLaurent>> terms) {
    UKernel out(arity);
    for (const auto &[e, c] : terms) {
        out.add_term(e, c);
    }
    return out;
}

// ---------------------------------------------------------------------------

void golden_expansions(Outcome &o) {
    const QLaurent one_minus_q = QLaurent(1) - qp(1);
    for (int n = -3; n <= 3; ++n) {
        const std::string at = " n=" + std::to_string(n);
        const NCExpr two = Mw({n, n}) - Mw({n + 1, n - 1}, qp(1));
        const NCExpr three = Mw({n, n, n}) - Mw({n + 1, n - 1, n}, qp(1)) -
                             Mw({n + 1, n, n - 1}, one_minus_q * qp(1)) - Mw({n, n + 1, n - 1}, qp(1)) +
                             Mw({n + 2, n - 1, n - 1}, qp(2)) + Mw({n + 1, n + 1, n - 2}, qp(2)) -
                             Mw({n + 2, n, n - 2}, qp(3));
        o.expect(ct_realize_formal(qvandermonde(2), n).collected() == two.collected(), "M_2 terms" + at);
        o.expect(ct_realize_formal(qvandermonde(3), n).collected() == three.collected(), "M_3 terms" + at);
        o.expect(m_alpha(2, n) == normal_form(two), "M_2 normal form" + at);
        o.expect(m_alpha(3, n) == normal_form(three), "M_3 normal form" + at);
    }

    o.expect(qvandermonde(2) == K(2, {{{0, 0}, 1}, {{-1, 1}, -qp(1)}}), "Delta_q(u1,u2)");
    o.expect(qvandermonde(3) == K(3, {{{0, 0, 0}, 1},
                                      {{-1, 1, 0}, -qp(1)},
                                      {{-1, 0, 1}, -(one_minus_q * qp(1))},
                                      {{0, -1, 1}, -qp(1)},
                                      {{-2, 1, 1}, qp(2)},
                                      {{-1, -1, 2}, qp(2)},
                                      {{-2, 0, 2}, -qp(3)}}),
             "Delta_q(u1,u2,u3)");

    o.expect(p_kernel(1) == UKernel::one(1), "P_1");
    o.expect(p_kernel(2) == K(2, {{{1, -1}, 1}, {{-1, 1}, -qp(2)}}), "P_2");
    o.expect(p_kernel(3) == K(3, {{{2, 0, -2}, 1}, {{2, -2, 0}, -qp(2)}, {{0, -2, 2}, -qp(3)}, {{-2, 0, 2}, qp(5)}}),
             "P_3");
    o.expect(p_kernel(4) == K(4, {{{3, 1, -1, -3}, 1},
                                  {{3, 1, -3, -1}, -qp(2)},
                                  {{3, -1, -3, 1}, -qp(3)},
                                  {{3, -3, -1, 1}, qp(5)},
                                  {{1, -1, -3, 3}, -qp(4)},
                                  {{1, -3, -1, 3}, qp(6)},
                                  {{-1, -3, 1, 3}, qp(7)},
                                  {{-3, -1, 1, 3}, -qp(9)}}),
             "P_4");

    // nested expansions exactly as printed, with their printed left-hand sides
    const QLaurent qm1 = qp(1) - QLaurent(1);
    for (int n = -1; n <= 1; ++n) {
        const std::string at = " n=" + std::to_string(n);
        const NCExpr two = Mw({n - 1, n + 1}) - Mw({n + 1, n - 1}, qp(2));
        const NCExpr three = Mw({n - 2, n, n + 2}) - Mw({n - 2, n + 2, n}, qp(2)) - Mw({n, n + 2, n - 2}, qp(3)) +
                             Mw({n + 2, n, n - 2}, qp(5));
        const NCExpr four = Mw({n - 3, n - 1, n + 1, n + 3}) - Mw({n - 3, n - 1, n + 3, n + 1}, qp(2)) -
                            Mw({n - 3, n + 1, n + 3, n - 1}, qp(3)) + Mw({n - 3, n + 3, n + 1, n - 1}, qp(5)) -
                            Mw({n - 1, n + 1, n + 3, n - 3}, qp(4)) + Mw({n - 1, n + 3, n + 1, n - 3}, qp(6)) -
                            Mw({n + 1, n + 3, n - 1, n - 3}, qp(7)) + Mw({n + 3, n + 1, n - 1, n - 3}, qp(9));
        const std::vector<std::pair<int, const NCExpr *>> printed = {{2, &two}, {3, &three}, {4, &four}};
        const std::vector<QLaurent> lhs = {qm1, -qm1.pow(2), -qm1.pow(3)};
        for (std::size_t i = 0; i < printed.size(); ++i) {
            const auto [a, expr] = printed[i];
            const std::string name = "nested alpha=" + std::to_string(a) + at;
            o.expect(normal_form(*expr) == m_alpha_nested(a, n), name + " vs m_alpha_nested");
            o.expect(normal_form(*expr) == m_alpha(a, n).scaled(lhs[i]), name + " vs printed left side");
        }
    }
}

void rank_one_example(Outcome &o) {
    const NCPoly dinv = NCPoly::Delta(-1);
    const std::vector<NCExpr> printed = {Mw({0, 0}) - Mw({1, -1}, qp(1)), Mw({1, 0}) - Mw({2, -1}, qp(1)),
                                         Mw({1, 1}) - Mw({2, 0}, qp(1))};
    const std::vector<ShiftOp> images = {ShiftOp::identity(1), ShiftOp::mult(1, sym_e(2, 1)),
                                         ShiftOp::mult(1, XPoly::monomial(2, std::vector<int>{1, 1}))};
    for (int m = 0; m <= 2; ++m) {
        const std::string at = " m=" + std::to_string(m);
        const NCPoly c = c_m_defect(1, m);
        o.expect(c == nc_mul(normal_form(printed[static_cast<std::size_t>(m)]), dinv), "c_m" + at);
        o.expect(nc_to_op(1, c) == images[static_cast<std::size_t>(m)], "image" + at);
    }
}

void symbolic_suites(Outcome &o) {
    SuiteParams grid;
    grid.alpha = IntRange{1, 5};
    grid.n = IntRange{-3, 3};
    o.suite(run_suite("msystem", grid));
    o.suite(run_suite("mcom", grid));
    SuiteParams ex;
    ex.k = IntRange{-2, 2};
    o.suite(run_suite("exchange", ex));
    SuiteParams nested;
    nested.alpha = IntRange{1, 4};
    o.suite(run_suite("qdet-nested", nested));
    for (int a = 1; a <= 4; ++a) {
        o.expect(nested_sign(a) == ((a * (a + 1) / 2 - 1) % 2 == 0 ? 1 : -1), "s(alpha)");
    }
}

void representation_suites(Outcome &o) {
    for (int r = 1; r <= 3; ++r) {
        SuiteParams p;
        p.r = r;
        p.n = IntRange{-2, 2};
        o.suite(run_suite("rank", p));
        SuiteParams c = p;
        c.k = IntRange{1, 3};
        o.suite(run_suite("conserved", c));
        o.suite(run_suite("defect-qdet", p));
    }
}

void drinfeld(Outcome &o) {
    for (int r = 1; r <= 2; ++r) {
        SuiteParams p;
        p.r = r;
        p.n = IntRange{-1, 1};
        p.order = r + 3;
        o.suite(run_suite("drinfeld", p));
        const XPoly prod = x_product(r + 1, 1);
        const QLaurent qm1 = qp(1) - QLaurent(1);
        const int sign = r % 2 == 0 ? 1 : -1;
        for (int n = -1; n <= 1; ++n) {
            const std::string at = " r=" + std::to_string(r) + " n=" + std::to_string(n);
            o.expect(detail::rho_tilde(r, n, r + 1) ==
                         ShiftOp::mult(r, prod.scaled(qm1 * qp(-(r + 1)) * sign)),
                     "rho(r+1)" + at);
            o.expect(detail::rho_tilde(r, n, -r - 1) == ShiftOp::mult(r, x_product(r + 1, -1).scaled(qm1 * -sign)),
                     "rho(-r-1)" + at);
        }
    }
}

void ct_lemmas(Outcome &o) {
    SuiteParams p;
    p.alpha = IntRange{1, 4};
    o.suite(run_suite("ct-lemmas", p));
}

void automorphisms(Outcome &o) {
    for (int r = 1; r <= 2; ++r) {
        SuiteParams p;
        p.r = r;
        p.samples = 50;
        o.suite(run_suite("automorphisms", p));
    }
    o.expect(detail::tau_relation_instances().size() == 50, "50 relation instances");
}

void confluence(Outcome &o) {
    SuiteParams p;
    p.samples = 1000;
    p.max_length = 5;
    p.n = IntRange{-4, 4};
    p.strategies = 4;
    const CheckReport rep = run_suite("confluence", p);
    o.expect(rep.checks_run == 1000, "1000 words");
    o.suite(rep);
}

void qt_leading(Outcome &o) {
    for (int r = 1; r <= 2; ++r) {
        for (int a = 1; a <= r + 1; ++a) {
            for (int n = -1; n <= 1; ++n) {
                o.expect(op_m_qt_leading(r, a, n) == op_m(r, a, n), "r=" + std::to_string(r) + " alpha=" +
                                                                        std::to_string(a) + " n=" + std::to_string(n));
            }
        }
    }
}

} // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {1, "golden expansions", 1, golden_expansions},
        {2, "rank-one conserved quantities", 1, rank_one_example},
        {3, "symbolic suites", 300, symbolic_suites},
        {4, "representation suites r=1..3", 600, representation_suites},
        {5, "drinfeld r=1,2", 300, drinfeld},
        {6, "constant-term lemmas", 120, ct_lemmas},
        {7, "automorphisms", 120, automorphisms},
        {8, "confluence", 60, confluence},
        {9, "(q,t) leading coefficient", 60, qt_leading},
    };
    int failures = 0;
    for (const auto &c : criteria) {
        Outcome o;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            c.run(o);
        } catch (const std::exception &e) {
            o.failed.push_back(std::string("exception: ") + e.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const bool in_time = secs <= c.limit_s;
        const bool ok = o.failed.empty() && in_time;
        failures += ok ? 0 : 1;
        std::printf("criterion %d %-32s %s  %zu checks  %.3f s (limit %.0f s)\n", c.id, c.title.c_str(),
                    ok ? "PASS" : "FAIL", o.checks, secs, c.limit_s);
        if (!in_time) {
            std::printf("    over time limit\n");
        }
        for (const auto &f : o.failed) {
            std::printf("    failed: %s\n", f.c_str());
        }
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
