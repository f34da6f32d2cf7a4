#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qq/ctengine.hpp"
#include "qq/errors.hpp"
#include "qq/ncalgebra.hpp"
#include "qq/repdiff.hpp"
#include "qq/serialize.hpp"
#include "qq/verify.hpp"

namespace qq::cli {

enum ExitCode { kOk = 0, kSuiteFailed = 1, kUsage = 2 };

class UsageError : public std::runtime_error {
  public:
    explicit UsageError(const std::string &what) : std::runtime_error(what) {}
};

enum class Format { Text, Json };

struct Command {
    std::string verb;
    std::optional<int> r;
    std::optional<int> alpha;
    std::optional<int> n;
    std::optional<int> m;
    std::optional<int> p;
    std::optional<int> order;
    std::optional<int> samples;
    std::string suite;
    std::string type;
    std::string alpha_range;
    std::string n_range;
    std::string p_range;
    std::string k_range;
    std::uint64_t seed = 0;
    Format format = Format::Text;
    std::string out;
    bool raw = false;
    bool qt = false;
    std::string help; // set when --help was requested
};

namespace detail {

/// "lo:hi", or a single value v meaning default_lo:v (or -v:v when symmetric).
inline IntRange parse_range(const std::string &s, int default_lo, bool symmetric) {
    try {
        if (auto colon = s.find(':'); colon != std::string::npos) {
            std::size_t used = 0;
            const int lo = std::stoi(s.substr(0, colon), &used);
            if (used != colon) {
                throw std::invalid_argument(s);
            }
            const std::string rest = s.substr(colon + 1);
            const int hi = std::stoi(rest, &used);
            if (used != rest.size()) {
                throw std::invalid_argument(s);
            }
            return {lo, hi};
        }
        std::size_t used = 0;
        const int v = std::stoi(s, &used);
        if (used != s.size()) {
            throw std::invalid_argument(s);
        }
        return symmetric ? IntRange{-v, v} : IntRange{default_lo, v};
    } catch (const std::logic_error &) {
        throw UsageError("bad range '" + s + "' (expected lo:hi or a single integer)");
    }
}

} // namespace detail

/// Parses argv (without the program name). --help yields a Command whose
/// help field holds the usage text.
inline Command parse(const std::vector<std::string> &args) {
    Command c;
    CLI::App app{"Exact computations in the quantum Q-system algebra", "qq"};
    app.require_subcommand(1);
    std::string format = "text";
    const auto fmt = CLI::IsMember({"text", "json"});

    auto common = [&](CLI::App *sub) {
        sub->add_option("--format", format, "Output format")->check(fmt);
        sub->add_option("--out", c.out, "Write the payload to this file");
    };

    auto *malpha = app.add_subcommand("m-alpha", "M_{alpha,n} as a normal-ordered polynomial in the M_n");
    malpha->add_option("--alpha", c.alpha, "Node alpha")->required()->check(CLI::NonNegativeNumber);
    malpha->add_option("--n", c.n, "Time index n");
    malpha->add_flag("--raw", c.raw, "Print the unreduced constant-term expansion");
    common(malpha);

    auto *kernel = app.add_subcommand("kernel", "Constant-term kernels in u_1..u_alpha");
    kernel->add_option("--type", c.type, "Kernel")
        ->required()
        ->check(CLI::IsMember({"vandermonde", "p", "defect"}));
    kernel->add_option("--alpha", c.alpha, "Arity (vandermonde, p)")->check(CLI::NonNegativeNumber);
    kernel->add_option("--r", c.r, "Rank (defect)")->check(CLI::PositiveNumber);
    kernel->add_option("--m", c.m, "Index m (defect)")->check(CLI::NonNegativeNumber);
    common(kernel);

    auto *conserved = app.add_subcommand("conserved", "Conserved quantity C_m and its operator image");
    conserved->add_option("--r", c.r, "Rank")->required()->check(CLI::Range(1, 3));
    conserved->add_option("--m", c.m, "Index m in [0, r+1]")->required()->check(CLI::NonNegativeNumber);
    conserved->add_flag("--raw", c.raw, "Print the unreduced constant-term expansion");
    common(conserved);

    auto *op = app.add_subcommand("op", "Difference-operator images");
    op->add_option("--type", c.type, "Operator (default m)")
        ->check(CLI::IsMember({"m", "e", "p", "h", "psi-plus", "psi-minus", "f"}));
    op->add_option("--r", c.r, "Rank")->required()->check(CLI::Range(1, 7));
    op->add_option("--alpha", c.alpha, "Node alpha (m)")->check(CLI::NonNegativeNumber);
    op->add_option("--n", c.n, "Time index n (m, f)");
    op->add_option("--m", c.m, "Degree (e, p, h)")->check(CLI::NonNegativeNumber);
    op->add_option("--p", c.p, "Mode (psi-plus, psi-minus)");
    op->add_flag("--qt", c.qt, "Macdonald (q,t) version of M_{alpha,n}");
    common(op);

    auto *verify = app.add_subcommand("verify", "Run a verification suite");
    verify->add_option("--suite", c.suite, "Suite")->required()->check(CLI::IsMember(suite_names()));
    verify->add_option("--r", c.r, "Rank")->check(CLI::PositiveNumber);
    verify->add_option("--alpha", c.alpha_range, "alpha range lo:hi, or max");
    verify->add_option("--n", c.n_range, "n range lo:hi, or N for -N:N");
    verify->add_option("--p", c.p_range, "p range lo:hi, or P for -P:P");
    verify->add_option("--k", c.k_range, "k range lo:hi, or K for -K:K");
    verify->add_option("--order", c.order, "Series order N")->check(CLI::NonNegativeNumber);
    verify->add_option("--samples", c.samples, "Random sample count")->check(CLI::NonNegativeNumber);
    verify->add_option("--seed", c.seed, "RNG seed");
    common(verify);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp &) {
        c.verb = "help";
        std::ostringstream os;
        const auto subs = app.get_subcommands();
        os << (subs.empty() ? app.help() : subs.front()->help());
        c.help = os.str();
        return c;
    } catch (const CLI::ParseError &e) {
        throw UsageError(e.what());
    }
    c.verb = app.get_subcommands().front()->get_name();
    // verify reports are machine artifacts: JSON unless text was asked for.
    const bool format_given = app.get_subcommands().front()->count("--format") > 0;
    c.format = format == "json" || (c.verb == "verify" && !format_given) ? Format::Json : Format::Text;

    if (c.verb == "kernel") {
        if ((c.type == "vandermonde" || c.type == "p") && !c.alpha) {
            throw UsageError("kernel --type " + c.type + " needs --alpha");
        }
        if (c.type == "p" && *c.alpha < 1) {
            throw UsageError("kernel --type p needs --alpha >= 1");
        }
        if (c.type == "defect" && (!c.r || !c.m)) {
            throw UsageError("kernel --type defect needs --r and --m");
        }
    }
    if ((c.verb == "conserved" || (c.verb == "kernel" && c.type == "defect")) && *c.m > *c.r + 1) {
        throw UsageError("--m must lie in [0, r+1]");
    }
    if (c.raw && c.format == Format::Json) {
        throw UsageError("--raw output has no JSON form");
    }
    if (c.verb == "op") {
        if (c.type.empty()) {
            c.type = "m";
        }
        if (c.type == "m" && !c.alpha) {
            throw UsageError("op --type m needs --alpha");
        }
        if ((c.type == "e" || c.type == "p" || c.type == "h") && !c.m) {
            throw UsageError("op --type " + c.type + " needs --m");
        }
        if ((c.type == "psi-plus" || c.type == "psi-minus") && !c.p) {
            throw UsageError("op --type " + c.type + " needs --p");
        }
        if (c.qt && c.type != "m") {
            throw UsageError("--qt applies to --type m only");
        }
    }
    if (c.verb == "verify") {
        for (const auto *s : {&c.alpha_range, &c.n_range, &c.p_range, &c.k_range}) {
            if (!s->empty()) {
                detail::parse_range(*s, 0, true);
            }
        }
    }
    return c;
}

namespace detail {

/// NCPoly text, written term by term.
inline void write_poly(std::ostream &os, const NCPoly &p) {
    if (p.is_zero()) {
        os << "0\n";
        return;
    }
    bool first = true;
    for (const auto &[w, c] : p.terms()) {
        std::ostringstream term;
        const bool unit = w.m.empty() && w.a == 0 && w.d == 0;
        qq::append_term(term, first, c, word_to_string(w), unit);
        os << term.str();
        first = false;
    }
    os << '\n';
}

/// Multiplication operators print as mult(f); everything else as a shift sum.
inline std::string op_text(const ShiftOp &op) {
    if (op.size() == 1) {
        const auto &[eps, c] = *op.terms().begin();
        if (std::all_of(eps.begin(), eps.end(), [](int e) { return e == 0; }) && c.is_polynomial()) {
            return "mult(" + c.numerator().to_string() + ")";
        }
    }
    return op.is_zero() ? "0" : op.to_string();
}

inline void write_report_text(std::ostream &os, const CheckReport &r) {
    os << "suite " << r.suite << ": " << r.checks_run << " checks, " << r.failures.size() << " failures ("
       << (r.passed() ? "pass" : "FAIL") << ")\n";
    for (const auto &f : r.failures) {
        os << "  " << f.id << " [" << f.instantiation << "]: ";
        std::visit(
            [&](const auto &w) {
                if constexpr (std::is_same_v<std::decay_t<decltype(w)>, ShiftOp>) {
                    os << op_text(w);
                } else {
                    os << w;
                }
            },
            f.witness);
        os << '\n';
    }
    for (const auto &n : r.notes) {
        os << "  note: " << n << '\n';
    }
}

inline SuiteParams suite_params(const Command &c) {
    SuiteParams p;
    p.r = c.r;
    p.order = c.order;
    p.samples = c.samples;
    p.seed = c.seed;
    if (!c.alpha_range.empty()) {
        p.alpha = parse_range(c.alpha_range, 1, false);
    }
    if (!c.n_range.empty()) {
        p.n = parse_range(c.n_range, 0, true);
    }
    if (!c.p_range.empty()) {
        p.p = parse_range(c.p_range, 0, true);
    }
    if (!c.k_range.empty()) {
        p.k = parse_range(c.k_range, 0, true);
    }
    return p;
}

inline int run(const Command &c, std::ostream &out) {
    const bool js = c.format == Format::Json;
    if (c.verb == "m-alpha") {
        const int n = c.n.value_or(0);
        if (c.raw) {
            out << ct_realize_formal(qvandermonde(*c.alpha), n).to_string() << '\n';
        } else if (js) {
            out << json(m_alpha(*c.alpha, n)).dump() << '\n';
        } else {
            write_poly(out, m_alpha(*c.alpha, n));
        }
        return kOk;
    }
    if (c.verb == "kernel") {
        const UKernel k = c.type == "vandermonde" ? qvandermonde(*c.alpha)
                          : c.type == "p"         ? p_kernel(*c.alpha)
                                                  : defect_kernel(*c.r, *c.m);
        out << (js ? json(k).dump() : k.to_string()) << '\n';
        return kOk;
    }
    if (c.verb == "conserved") {
        const int r = *c.r;
        const int m = *c.m;
        const NCPoly cm = c_m_defect(r, m);
        const ShiftOp rep = nc_to_op(r, cm);
        if (js) {
            out << json{{"r", r}, {"m", m}, {"defect", cm}, {"rep", rep}}.dump() << '\n';
            return kOk;
        }
        if (c.raw) {
            const NCExpr formal = ct_realize_formal(defect_kernel(r, m), 0) * NCExpr::Delta(-1);
            out << formal.to_string() << '\n';
        } else {
            write_poly(out, cm);
        }
        out << "rep: " << op_text(rep) << '\n';
        return kOk;
    }
    if (c.verb == "op") {
        const int r = *c.r;
        ShiftOp o(r);
        if (c.type == "m") {
            o = c.qt ? op_m_qt(r, *c.alpha, c.n.value_or(0)) : op_m(r, *c.alpha, c.n.value_or(0));
        } else if (c.type == "f") {
            o = op_f(r, c.n.value_or(0));
        } else if (c.type == "psi-plus") {
            o = op_psi_plus(r, *c.p);
        } else if (c.type == "psi-minus") {
            o = op_psi_minus(r, *c.p);
        } else {
            const auto kind = c.type == "e"   ? SymSpec::Kind::E
                              : c.type == "p" ? SymSpec::Kind::P
                                              : SymSpec::Kind::H;
            o = op_sym(r, {kind, *c.m});
        }
        out << (js ? json(o).dump() : op_text(o)) << '\n';
        return kOk;
    }
    // verify
    const CheckReport report = run_suite(c.suite, suite_params(c));
    if (js) {
        out << json(report).dump(2) << '\n';
    } else {
        write_report_text(out, report);
    }
    return report.passed() ? kOk : kSuiteFailed;
}

} // namespace detail

/// Runs a parsed command; the payload goes to `out` (or --out), diagnostics
/// to `err`. Returns the process exit code.
inline int execute(const Command &c, std::ostream &out, std::ostream &err) {
    if (c.verb == "help") {
        out << c.help;
        return kOk;
    }
    try {
        if (!c.out.empty()) {
            std::ofstream file(c.out);
            if (!file) {
                err << "qq: cannot open '" << c.out << "' for writing\n";
                return kUsage;
            }
            const int code = detail::run(c, file);
            file.flush();
            if (!file) {
                err << "qq: write to '" << c.out << "' failed\n";
                return kUsage;
            }
            return code;
        }
        return detail::run(c, out);
    } catch (const UsageError &e) {
        err << "qq: " << e.what() << '\n';
    } catch (const UnsupportedParams &e) {
        err << "qq: " << e.what() << '\n';
    } catch (const std::exception &e) {
        err << "qq: " << e.what() << '\n';
    }
    return kUsage;
}

/// parse + execute with usage errors mapped to exit code 2.
inline int main(int argc, char **argv, std::ostream &out = std::cout, std::ostream &err = std::cerr) {
    std::vector<std::string> args(argv + 1, argv + argc);
    try {
        return execute(parse(args), out, err);
    } catch (const UsageError &e) {
        err << "qq: " << e.what() << "\nRun 'qq --help' for usage.\n";
        return kUsage;
    }
}

} // namespace qq::cli
