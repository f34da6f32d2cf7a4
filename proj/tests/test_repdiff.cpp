#include <random>

#include <gtest/gtest.h>

#include "qq/ctengine.hpp"
#include "qq/repdiff.hpp"

using namespace qq;

namespace {

XPoly x(int nx, int i, int k = 1) { return XPoly::var(nx, i, k); }
XPoly cst(int nx, const QLaurent &c) { return XPoly::constant(nx, c); }
ShiftOp D(int r, std::vector<int> eps) { return ShiftOp::shift(r, std::move(eps)); }

/// Truncated power series in z (or z^-1) with XPoly coefficients; the q slot
/// of the coefficients holds powers of s = q^{1/2}.
using Series = std::vector<XPoly>;

Series mul_series(const Series &a, const Series &b, int nx) {
    Series out(a.size(), XPoly(nx));
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; i + j < a.size(); ++j) {
            out[i + j] = out[i + j] + a[i] * b[j];
        }
    }
    return out;
}

/// sum_k (c * x_i)^k w^k, truncated
Series geometric(int nx, int i, int s_exp, int x_sign, std::size_t order) {
    Series out(order, XPoly(nx));
    for (std::size_t k = 0; k < order; ++k) {
        const int kk = static_cast<int>(k);
        out[k] = cst(nx, QLaurent::q(s_exp * kk)) * x(nx, i, x_sign * kk);
    }
    return out;
}

/// Replace s^{2k} by q^k; every s exponent must be even.
XPoly halve_q(const XPoly &p) {
    XPoly out(p.nvars());
    for (const auto &[m, c] : p.terms()) {
        EXPECT_EQ(m.q() % 2, 0);
        Mono mm = m;
        mm.e[Mono::kQ] = m.q() / 2;
        out = out + XPoly::from_mono(p.nvars(), mm, c);
    }
    return out;
}

/// q^{-p/2} [z^p] of (-s^{-1} z)^{r+1} A prod_i 1/(1 - s z x_i) 1/(1 - s^{-1} z x_i)
XPoly psi_plus_oracle(int r, int p) {
    const int nx = r + 1;
    const auto order = static_cast<std::size_t>(p - r);
    Series acc(order, XPoly(nx));
    acc[0] = XPoly::one(nx);
    for (int i = 0; i < nx; ++i) {
        acc = mul_series(acc, geometric(nx, i, 1, 1, order), nx);
        acc = mul_series(acc, geometric(nx, i, -1, 1, order), nx);
    }
    XPoly coeff = acc[static_cast<std::size_t>(p - r - 1)];
    coeff = coeff * x_product(nx, 1) * cst(nx, QLaurent::q(-(r + 1)) * QLaurent(nx % 2 == 0 ? 1 : -1));
    return halve_q(coeff * cst(nx, QLaurent::q(-p)));
}

/// Same for psi^-: (-s z)^{-r-1} A prod_i (s z)/(1 - s z x_i) (s^-1 z)/(1 - s^-1 z x_i),
/// each factor expanded at z = infinity as -x_i^-1 sum_k (c z x_i)^{-k}.
XPoly psi_minus_oracle(int r, int p) {
    const int nx = r + 1;
    const auto order = static_cast<std::size_t>(-p - r);
    Series acc(order, XPoly(nx)); // index = power of z^-1
    acc[0] = XPoly::one(nx);
    for (int i = 0; i < nx; ++i) {
        acc = mul_series(acc, geometric(nx, i, -1, -1, order), nx);
        acc = mul_series(acc, geometric(nx, i, 1, -1, order), nx);
    }
    // prod of 2(r+1) factors -x_i^-1 is A^-2; prefactor (-s)^{-r-1} z^{-r-1} A
    XPoly coeff = acc[static_cast<std::size_t>(-p - r - 1)];
    coeff = coeff * x_product(nx, -1) * cst(nx, QLaurent::q(-(r + 1)) * QLaurent(nx % 2 == 0 ? 1 : -1));
    return halve_q(coeff * cst(nx, QLaurent::q(-p)));
}

NCPoly random_poly(std::mt19937_64 &rng, int r) {
    std::uniform_int_distribution<int> idx(-2, 2);
    std::uniform_int_distribution<int> len(0, 2);
    std::uniform_int_distribution<int> ad(-1, 1);
    NCExpr e;
    for (int k = 0; k < 2; ++k) {
        std::vector<Letter> w;
        for (int l = len(rng); l > 0; --l) {
            w.push_back(Letter::M(idx(rng)));
        }
        w.push_back(Letter::A(ad(rng)));
        w.push_back(Letter::Delta(ad(rng)));
        e += NCExpr::word(w, QLaurent::monomial(static_cast<long long>(rng() % 3) + 1, idx(rng)));
    }
    return normal_form(e, r);
}

} // namespace

TEST(ShiftOp, GeneratorsAsPrinted) {
    const ShiftOp m = op_m(1, 1, 0);
    ShiftOp expected = ShiftOp::shift(1, {1, 0}, XRat::over_linear(x(2, 0), 0, 1)) +
                       ShiftOp::shift(1, {0, 1}, XRat::over_linear(x(2, 1), 1, 0));
    EXPECT_EQ(m, expected);
    EXPECT_EQ(op_m(1, 2, 0), D(1, {1, 1}));
    EXPECT_EQ(op_m(2, 0, 5), ShiftOp::identity(2));
    EXPECT_TRUE(op_m(1, 3, 0).is_zero());
    EXPECT_EQ(op_m(2, 3, 2), ShiftOp::a_power(2, 2) * ShiftOp::delta(2, 1));
}

TEST(ShiftOp, SignNormalizedCoefficientsCompareEqual) {
    const XRat a = XRat::over_linear(x(2, 0), 0, 1);
    const XRat b = XRat::over_linear(-x(2, 0), 1, 0);
    EXPECT_EQ(ShiftOp::mult(1, a), ShiftOp::mult(1, b));
}

TEST(ShiftOp, CompositionTwist) {
    EXPECT_EQ(D(1, {1, 0}) * ShiftOp::mult(1, x(2, 0)), ShiftOp::shift(1, {1, 0}, cst(2, QLaurent::q()) * x(2, 0)));
    const ShiftOp m = op_m(2, 1, 1);
    EXPECT_EQ(ShiftOp::identity(2) * m, m);
    EXPECT_EQ(m * ShiftOp::identity(2), m);
    EXPECT_EQ(op_m(1, 1, 0) * op_m(1, 1, 1), (op_m(1, 1, 1) * op_m(1, 1, 0)).scaled(QLaurent::q()));
}

TEST(ShiftOp, CompositionIsAssociative) {
    const ShiftOp a = op_m(2, 1, -1);
    const ShiftOp b = op_m(2, 2, 1) + ShiftOp::mult(2, sym_e(3, 1));
    const ShiftOp c = op_f(2, 1);
    EXPECT_EQ((a * b) * c, a * (b * c));
}

TEST(ShiftOp, ApplyExamples) {
    EXPECT_EQ(op_m(1, 1, 0).apply_polynomial(XPoly::one(2)), XPoly::one(2));
    EXPECT_EQ(op_m(1, 1, 1).apply_polynomial(XPoly::one(2)), x(2, 0) + x(2, 1));
    EXPECT_EQ(D(1, {1, 1}).apply_polynomial(x(2, 0) * x(2, 1)), cst(2, QLaurent::q(2)) * x(2, 0) * x(2, 1));
    EXPECT_THROW((void)op_m(1, 1, 0).apply_polynomial(x(2, 0)), NotDivisible);
}

TEST(ShiftOp, ApplyingACompositionAppliesInTurn) {
    const int nx = 3;
    const std::vector<XPoly> fs = {XPoly::one(nx), sym_e(nx, 2), sym_p(nx, 2) + sym_e(nx, 3),
                                   x(nx, 0) * x(nx, 1, 2) - x(nx, 2)};
    const std::vector<ShiftOp> ops = {op_m(2, 1, 0), op_m(2, 2, -1), op_f(2, 1), op_m_qt(2, 1, 1)};
    for (const auto &a : ops) {
        for (const auto &b : ops) {
            for (const auto &f : fs) {
                EXPECT_EQ((a * b).apply(f), a.apply(b.apply(f)));
            }
        }
    }
}

TEST(ShiftOp, SymmetricInputGivesPolynomials) {
    const int nx = 3;
    const NCPoly w = NCPoly::M(2) + NCPoly::word(NCWord{{-1, 0, 3}, 0, 0}, QLaurent::q(2));
    const ShiftOp op = nc_to_op(2, w);
    for (const XPoly &f : {XPoly::one(nx), sym_e(nx, 2), sym_h(nx, 3) * sym_e(nx, 1)}) {
        EXPECT_NO_THROW((void)op.apply_polynomial(f));
    }
}

TEST(QtOperators, AsPrintedAndLeadingCoefficient) {
    const XPoly t = XPoly::t_power(2, 1);
    const ShiftOp expected = ShiftOp::shift(1, {1, 0}, XRat::over_linear(t * x(2, 0) - x(2, 1), 0, 1)) +
                             ShiftOp::shift(1, {0, 1}, XRat::over_linear(t * x(2, 1) - x(2, 0), 1, 0));
    EXPECT_EQ(op_m_qt(1, 1, 0), expected);
    for (int r = 1; r <= 2; ++r) {
        for (int a = 0; a <= r + 1; ++a) {
            for (int n = -1; n <= 1; ++n) {
                EXPECT_EQ(op_m_qt_leading(r, a, n), op_m(r, a, n)) << r << ' ' << a << ' ' << n;
            }
        }
        EXPECT_EQ(op_m_qt(r, r + 1, 2), op_m(r, r + 1, 2));
    }
}

TEST(QtOperators, MacdonaldWeightsAtTEqualsOne) {
    // every weight (t x_i - x_j)/(x_i - x_j) becomes 1: the sum of D_I over |I| = alpha
    for (int a = 0; a <= 3; ++a) {
        ShiftOp expected(2);
        detail::for_each_subset(3, a, [&](unsigned mask) {
            expected += D(2, {static_cast<int>(mask & 1U), static_cast<int>((mask >> 1U) & 1U),
                              static_cast<int>((mask >> 2U) & 1U)});
        });
        EXPECT_EQ(op_m_qt(2, a, 0).t_to_one(), expected);
    }
}

TEST(SymOps, Examples) {
    EXPECT_EQ(op_sym(1, {SymSpec::Kind::E, 1}), ShiftOp::mult(1, x(2, 0) + x(2, 1)));
    EXPECT_EQ(op_sym(1, {SymSpec::Kind::P, 2}), ShiftOp::mult(1, x(2, 0, 2) + x(2, 1, 2)));
    EXPECT_EQ(op_sym(1, {SymSpec::Kind::H, 2}), ShiftOp::mult(1, x(2, 0, 2) + x(2, 0) * x(2, 1) + x(2, 1, 2)));
    EXPECT_EQ(op_sym(2, {SymSpec::Kind::APower, -1}), ShiftOp::mult(2, x(3, 0, -1) * x(3, 1, -1) * x(3, 2, -1)));
    for (int r = 1; r <= 2; ++r) {
        const QLaurent sign = r % 2 == 0 ? -1 : 1;
        EXPECT_EQ(op_sym(r, {SymSpec::Kind::PsiPlus, r + 1}),
                  ShiftOp::a_power(r, 1).scaled(sign * QLaurent::q(-(r + 1))));
    }
    EXPECT_THROW((void)op_sym(1, {SymSpec::Kind::PsiPlus, 1}), std::invalid_argument);
    EXPECT_THROW((void)op_sym(1, {SymSpec::Kind::PsiMinus, -1}), std::invalid_argument);
}

TEST(SymOps, CartanCoefficientsMatchSeriesExpansion) {
    for (int r = 1; r <= 2; ++r) {
        for (int p = r + 1; p <= r + 4; ++p) {
            EXPECT_EQ(psi_plus_coeff(r, p), psi_plus_oracle(r, p)) << r << ' ' << p;
            EXPECT_EQ(psi_minus_coeff(r, -p), psi_minus_oracle(r, -p)) << r << ' ' << -p;
        }
    }
}

TEST(SymOps, ElementaryGeneratingFunction) {
    // sum_j (-1)^j e_j h_{m-j} = 0 for m >= 1
    for (int m = 1; m <= 4; ++m) {
        XPoly s(3);
        for (int j = 0; j <= m; ++j) {
            s = s + (sym_e(3, j) * sym_h(3, m - j)).scaled(j % 2 == 0 ? 1 : -1);
        }
        EXPECT_TRUE(s.is_zero()) << m;
    }
}

TEST(Fcurrent, MatchesClosedForm) {
    // f~_n = sum_i x_i^-n prod_{j != i} x_j/(x_j - x_i) D_i^-1
    for (int r = 1; r <= 2; ++r) {
        const int nx = r + 1;
        for (int n = -1; n <= 1; ++n) {
            ShiftOp expected(r);
            for (int i = 0; i < nx; ++i) {
                XRat c(x(nx, i, -n));
                for (int j = 0; j < nx; ++j) {
                    if (j != i) {
                        c *= XRat::over_linear(x(nx, j), j, i);
                    }
                }
                std::vector<int> eps(static_cast<std::size_t>(nx), 0);
                eps[static_cast<std::size_t>(i)] = -1;
                expected.add_term(eps, c);
            }
            EXPECT_EQ(op_f(r, n), expected) << r << ' ' << n;
        }
    }
    EXPECT_EQ(op_f(1, 0), op_m(1, 1, 0) * D(1, {-1, -1}));
}

TEST(NcToOp, Examples) {
    EXPECT_EQ(nc_to_op(2, NCPoly::A()), ShiftOp::mult(2, x(3, 0) * x(3, 1) * x(3, 2)));
    EXPECT_EQ(nc_to_op(1, NCPoly::Delta()), D(1, {1, 1}));
    for (int r = 1; r <= 2; ++r) {
        EXPECT_EQ(nc_to_op(r, normal_form(NCExpr::M(0) * NCExpr::M(0) - NCExpr::M(1) * NCExpr::M(-1).scaled(QLaurent::q()))),
                  op_m(r, 2, 0));
    }
}

TEST(NcToOp, MAlphaMapsToSubsetOperators) {
    for (int r = 1; r <= 2; ++r) {
        for (int a = 1; a <= r + 1; ++a) {
            for (int n = -1; n <= 1; ++n) {
                EXPECT_EQ(nc_to_op(r, m_alpha(a, n)), op_m(r, a, n)) << r << ' ' << a << ' ' << n;
            }
        }
    }
}

TEST(NcToOp, RankQuotient) {
    for (int r = 1; r <= 2; ++r) {
        for (int n = -2; n <= 2; ++n) {
            const NCPoly m = m_alpha(r + 2, n);
            EXPECT_FALSE(m.is_zero());
            EXPECT_TRUE(nc_to_op(r, m).is_zero()) << r << ' ' << n;
        }
    }
}

TEST(NcToOp, Homomorphism) {
    std::mt19937_64 rng(11);
    for (int r = 1; r <= 2; ++r) {
        for (int k = 0; k < 8; ++k) {
            const NCPoly a = random_poly(rng, r);
            const NCPoly b = random_poly(rng, r);
            EXPECT_EQ(nc_to_op(r, nc_mul(a, b, r)), nc_to_op(r, a) * nc_to_op(r, b));
        }
    }
}

TEST(OperatorIdentities, MSystemAndCommutation) {
    const QLaurent q = QLaurent::q();
    // q M_{1,1} M_{1,-1} = M_{1,0}^2 - M_{2,0} at r = 1
    EXPECT_EQ((op_m(1, 1, 1) * op_m(1, 1, -1)).scaled(q), op_m(1, 1, 0) * op_m(1, 1, 0) - op_m(1, 2, 0));
    for (int r = 1; r <= 2; ++r) {
        for (int a = 1; a <= r + 1; ++a) {
            for (int n = -1; n <= 1; ++n) {
                const ShiftOp lhs = (op_m(r, a, n + 1) * op_m(r, a, n - 1)).scaled(QLaurent::q(a));
                const ShiftOp rhs = op_m(r, a, n) * op_m(r, a, n) - op_m(r, a + 1, n) * op_m(r, a - 1, n);
                EXPECT_EQ(lhs, rhs) << r << ' ' << a << ' ' << n;
                for (int b = 1; b <= r + 1; ++b) {
                    for (int eps = 0; eps <= 1; ++eps) {
                        EXPECT_EQ(op_m(r, a, n) * op_m(r, b, n + eps),
                                  (op_m(r, b, n + eps) * op_m(r, a, n)).scaled(QLaurent::q(std::min(a, b) * eps)));
                    }
                }
            }
        }
    }
}

TEST(RankGuard, Unsupported) {
    EXPECT_THROW((void)op_m(0, 1, 0), UnsupportedParams);
    EXPECT_THROW((void)op_m(kMaxXVars, 1, 0), UnsupportedParams);
}
