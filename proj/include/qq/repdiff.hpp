#pragma once

// Skew shift operators sum_eps c_eps(x) D^eps acting on Laurent polynomials
// in x_1..x_{r+1}, where D^eps substitutes x_i -> q^{eps_i} x_i. Composition
// follows (R D^e)(S D^f) = R S(q^e x) D^{e+f}.

#include <bit>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qq/ncalgebra.hpp"
#include "qq/xrat.hpp"

namespace qq {

class ShiftOp {
  public:
    using Shift = std::vector<int>;
    using Map = std::map<Shift, XRat>;

    ShiftOp() = default;
    explicit ShiftOp(int r) : r_(r) {
        if (r < 0 || r + 1 > kMaxXVars) {
            throw UnsupportedParams("rank " + std::to_string(r));
        }
    }

    static ShiftOp identity(int r) { return shift(r, Shift(static_cast<std::size_t>(r + 1), 0)); }
    static ShiftOp shift(int r, Shift eps, const XRat &c) {
        ShiftOp out(r);
        out.add_term(std::move(eps), c);
        return out;
    }
    static ShiftOp shift(int r, Shift eps) { return shift(r, std::move(eps), XPoly::one(r + 1)); }
    /// Multiplication by a fraction (shift vector 0).
    static ShiftOp mult(int r, const XRat &c) {
        return shift(r, Shift(static_cast<std::size_t>(r + 1), 0), c);
    }
    /// Multiplication by (x_1 ... x_{r+1})^k.
    static ShiftOp a_power(int r, int k) {
        return mult(r, XPoly::monomial(r + 1, std::vector<int>(static_cast<std::size_t>(r + 1), k)));
    }
    /// (D_1 ... D_{r+1})^k
    static ShiftOp delta(int r, int k) { return shift(r, Shift(static_cast<std::size_t>(r + 1), k)); }

    int rank() const { return r_; }
    int nvars() const { return r_ + 1; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }
    const Map &terms() const { return terms_; }

    void add_term(Shift eps, const XRat &c) {
        if (c.is_zero()) {
            return;
        }
        auto it = terms_.find(eps);
        if (it == terms_.end()) {
            terms_.emplace(std::move(eps), c);
            return;
        }
        it->second += c;
        if (it->second.is_zero()) {
            terms_.erase(it);
        }
    }

    ShiftOp &operator+=(const ShiftOp &o) {
        check(o);
        for (const auto &[e, c] : o.terms_) {
            add_term(e, c);
        }
        return *this;
    }
    ShiftOp &operator-=(const ShiftOp &o) {
        check(o);
        for (const auto &[e, c] : o.terms_) {
            add_term(e, -c);
        }
        return *this;
    }
    friend ShiftOp operator+(ShiftOp a, const ShiftOp &b) { return a += b; }
    friend ShiftOp operator-(ShiftOp a, const ShiftOp &b) { return a -= b; }
    ShiftOp operator-() const { return scaled(-1); }

    ShiftOp scaled(const QLaurent &c) const {
        ShiftOp out(r_);
        if (c.is_zero()) {
            return out;
        }
        for (const auto &[e, v] : terms_) {
            out.terms_.emplace_hint(out.terms_.end(), e, v.scaled(c));
        }
        return out;
    }

    /// Composition a o b.
    friend ShiftOp operator*(const ShiftOp &a, const ShiftOp &b) {
        a.check(b);
        Accumulator acc(a.r_);
        for (const auto &[e, ca] : a.terms_) {
            for (const auto &[f, cb] : b.terms_) {
                Shift g = e;
                for (std::size_t i = 0; i < g.size(); ++i) {
                    g[i] += f[i];
                }
                acc.add(std::move(g), ca * cb.q_shifted(e));
            }
        }
        return acc.finish();
    }

    /// Collects terms per shift and sums each slot once over a common
    /// denominator; much cheaper than repeated pairwise addition.
    class Accumulator {
      public:
        explicit Accumulator(int r) : r_(r) {}
        void add(Shift eps, XRat c) {
            if (!c.is_zero()) {
                slots_[std::move(eps)].push_back(std::move(c));
            }
        }
        void add(const ShiftOp &op, const QLaurent &scale = 1) {
            for (const auto &[e, c] : op.terms_) {
                add(e, scale.is_one() ? c : c.scaled(scale));
            }
        }
        ShiftOp finish() {
            ShiftOp out(r_);
            for (auto &[e, cs] : slots_) {
                XRat c = cs.size() == 1 ? std::move(cs.front()) : XRat::sum(cs);
                if (!c.is_zero()) {
                    out.terms_.emplace_hint(out.terms_.end(), e, std::move(c));
                }
            }
            slots_.clear();
            return out;
        }

      private:
        int r_;
        std::map<Shift, std::vector<XRat>> slots_;
    };

    /// Coefficient-wise equality; coefficients compare by cross-multiplication.
    friend bool operator==(const ShiftOp &a, const ShiftOp &b) {
        if (a.r_ != b.r_ || a.terms_.size() != b.terms_.size()) {
            return false;
        }
        auto ia = a.terms_.begin();
        auto ib = b.terms_.begin();
        for (; ia != a.terms_.end(); ++ia, ++ib) {
            if (ia->first != ib->first || ia->second != ib->second) {
                return false;
            }
        }
        return true;
    }
    friend bool operator!=(const ShiftOp &a, const ShiftOp &b) { return !(a == b); }

    /// sum_eps c_eps * f(q^eps x)
    XRat apply(const XRat &f) const {
        XRat out(nvars());
        for (const auto &[e, c] : terms_) {
            out += c * f.q_shifted(e);
        }
        return out;
    }
    XRat apply(const XPoly &f) const { return apply(XRat(f)); }
    /// apply() when the result must be a Laurent polynomial; NotDivisible otherwise.
    XPoly apply_polynomial(const XPoly &f) const { return apply(f).as_polynomial(); }

    ShiftOp t_coefficient(int k) const { return map_coeffs([&](const XRat &c) { return c.t_coefficient(k); }); }
    ShiftOp t_to_one() const { return map_coeffs([](const XRat &c) { return c.t_to_one(); }); }

    std::string to_string() const {
        if (terms_.empty()) {
            return "0";
        }
        std::ostringstream os;
        bool first = true;
        for (const auto &[e, c] : terms_) {
            if (!first) {
                os << " + ";
            }
            first = false;
            os << '[' << c.to_string() << ']';
            for (std::size_t i = 0; i < e.size(); ++i) {
                if (e[i] == 0) {
                    continue;
                }
                os << "*D" << i + 1;
                if (e[i] != 1) {
                    os << '^' << e[i];
                }
            }
        }
        return os.str();
    }

  private:
    template <typename F> ShiftOp map_coeffs(F &&f) const {
        ShiftOp out(r_);
        for (const auto &[e, c] : terms_) {
            out.add_term(e, f(c));
        }
        return out;
    }

    void check(const ShiftOp &o) const {
        if (r_ != o.r_) {
            throw std::invalid_argument("shift operators of different rank");
        }
    }

    int r_ = 0;
    Map terms_;
};

inline std::ostream &operator<<(std::ostream &os, const ShiftOp &op) { return os << op.to_string(); }

inline bool op_equal(const ShiftOp &a, const ShiftOp &b) { return a == b; }
inline ShiftOp op_mul(const ShiftOp &a, const ShiftOp &b) { return a * b; }
inline XRat op_apply(const ShiftOp &op, const XPoly &f) { return op.apply(f); }

namespace detail {

inline void check_rank(int r) {
    if (r < 1 || r + 1 > kMaxXVars) {
        throw UnsupportedParams("rank must be in [1, " + std::to_string(kMaxXVars - 1) + "]");
    }
}

/// Calls f(subset mask) for each subset of {0..nx-1} of size k.
template <typename F> void for_each_subset(int nx, int k, F &&f) {
    for (unsigned mask = 0; mask < (1U << static_cast<unsigned>(nx)); ++mask) {
        if (std::popcount(mask) == k) {
            f(mask);
        }
    }
}

inline bool in(unsigned mask, int i) { return ((mask >> static_cast<unsigned>(i)) & 1U) != 0; }

/// Subset sum over |I| = alpha of x_I^n * prod_{i in I, j not in I} w(i, j) D_I,
/// with w(i, j) = (t x_i - x_j)/(x_i - x_j) when with_t, else x_i/(x_i - x_j).
inline ShiftOp subset_operator(int r, int alpha, int n, bool with_t) {
    check_rank(r);
    const int nx = r + 1;
    ShiftOp out(r);
    if (alpha < 0 || alpha > nx) {
        return out;
    }
    for_each_subset(nx, alpha, [&](unsigned mask) {
        std::vector<int> xe(static_cast<std::size_t>(nx), 0);
        ShiftOp::Shift eps(static_cast<std::size_t>(nx), 0);
        for (int i = 0; i < nx; ++i) {
            if (in(mask, i)) {
                xe[static_cast<std::size_t>(i)] = n;
                eps[static_cast<std::size_t>(i)] = 1;
            }
        }
        XRat c(XPoly::monomial(nx, xe));
        for (int i = 0; i < nx; ++i) {
            for (int j = 0; j < nx; ++j) {
                if (!in(mask, i) || in(mask, j)) {
                    continue;
                }
                XPoly num = with_t ? XPoly::t_power(nx, 1) * XPoly::var(nx, i) - XPoly::var(nx, j)
                                   : XPoly::var(nx, i);
                c *= XRat::over_linear(std::move(num), i, j);
            }
        }
        out.add_term(std::move(eps), c);
    });
    return out;
}

} // namespace detail

/// sum_{|I| = alpha} x_I^n prod_{i in I, j not in I} x_i/(x_i - x_j) D_I
inline ShiftOp op_m(int r, int alpha, int n) { return detail::subset_operator(r, alpha, n, false); }

/// The (q,t) version with weights (t x_i - x_j)/(x_i - x_j).
inline ShiftOp op_m_qt(int r, int alpha, int n) { return detail::subset_operator(r, alpha, n, true); }

/// Top t-coefficient of op_m_qt, i.e. the t^{alpha(r+1-alpha)} coefficient.
inline ShiftOp op_m_qt_leading(int r, int alpha, int n) {
    return op_m_qt(r, alpha, n).t_coefficient(alpha * (r + 1 - alpha));
}

// ---------------------------------------------------------------------------
// Symmetric functions as multiplication operators

inline XPoly sym_e(int nx, int m) {
    XPoly out(nx);
    if (m < 0 || m > nx) {
        return out;
    }
    detail::for_each_subset(nx, m, [&](unsigned mask) {
        std::vector<int> xe(static_cast<std::size_t>(nx), 0);
        for (int i = 0; i < nx; ++i) {
            xe[static_cast<std::size_t>(i)] = detail::in(mask, i) ? 1 : 0;
        }
        out = out + XPoly::monomial(nx, xe);
    });
    return out;
}

inline XPoly sym_p(int nx, int k) {
    XPoly out(nx);
    for (int i = 0; i < nx; ++i) {
        out = out + XPoly::var(nx, i, k);
    }
    return out;
}

/// Complete homogeneous h_m(x), or h_m(1/x) when inverted.
inline XPoly sym_h(int nx, int m, bool inverted = false) {
    if (m < 0) {
        return XPoly(nx);
    }
    // h_m(x_1..x_k) = sum_j x_k^j h_{m-j}(x_1..x_{k-1})
    std::vector<XPoly> prev(static_cast<std::size_t>(m + 1), XPoly(nx));
    prev[0] = XPoly::one(nx);
    for (int k = 0; k < nx; ++k) {
        std::vector<XPoly> cur(static_cast<std::size_t>(m + 1), XPoly(nx));
        for (int d = 0; d <= m; ++d) {
            for (int j = 0; j <= d; ++j) {
                cur[static_cast<std::size_t>(d)] =
                    cur[static_cast<std::size_t>(d)] +
                    XPoly::var(nx, k, inverted ? -j : j) * prev[static_cast<std::size_t>(d - j)];
            }
        }
        prev = std::move(cur);
    }
    return prev[static_cast<std::size_t>(m)];
}

inline XPoly x_product(int nx, int k) {
    return XPoly::monomial(nx, std::vector<int>(static_cast<std::size_t>(nx), k));
}

/// Rescaled Cartan coefficient q^{-p/2} [z^p] psi^+(z), p >= r+1:
/// (-1)^{r+1} A sum_{a+b = p-r-1} h_a h_b q^{-(b+r+1)}.
inline XPoly psi_plus_coeff(int r, int p) {
    const int nx = r + 1;
    if (p < r + 1) {
        throw std::invalid_argument("psi+ coefficient needs p >= r+1");
    }
    XPoly sum(nx);
    const int s = p - r - 1;
    for (int b = 0; b <= s; ++b) {
        sum = sum + (sym_h(nx, s - b) * sym_h(nx, b)).scaled(QLaurent::q(-(b + r + 1)));
    }
    return (x_product(nx, 1) * sum).scaled(nx % 2 == 0 ? 1 : -1);
}

/// Rescaled Cartan coefficient q^{-p/2} [z^p] psi^-(z), p <= -(r+1):
/// (-1)^{r+1} A^-1 sum_{a+b = -p-r-1} h_a(1/x) h_b(1/x) q^b.
inline XPoly psi_minus_coeff(int r, int p) {
    const int nx = r + 1;
    if (p > -(r + 1)) {
        throw std::invalid_argument("psi- coefficient needs p <= -(r+1)");
    }
    XPoly sum(nx);
    const int s = -p - r - 1;
    for (int b = 0; b <= s; ++b) {
        sum = sum + (sym_h(nx, s - b, true) * sym_h(nx, b, true)).scaled(QLaurent::q(b));
    }
    return (x_product(nx, -1) * sum).scaled(nx % 2 == 0 ? 1 : -1);
}

struct SymSpec {
    enum class Kind { E, P, H, APower, PsiPlus, PsiMinus };
    Kind kind;
    int index;
};

inline ShiftOp op_sym(int r, SymSpec spec) {
    detail::check_rank(r);
    const int nx = r + 1;
    switch (spec.kind) {
    case SymSpec::Kind::E:
        return ShiftOp::mult(r, sym_e(nx, spec.index));
    case SymSpec::Kind::P:
        return ShiftOp::mult(r, sym_p(nx, spec.index));
    case SymSpec::Kind::H:
        if (spec.index < 0) {
            throw std::invalid_argument("h_m needs m >= 0");
        }
        return ShiftOp::mult(r, sym_h(nx, spec.index));
    case SymSpec::Kind::APower:
        return ShiftOp::a_power(r, spec.index);
    case SymSpec::Kind::PsiPlus:
        return ShiftOp::mult(r, psi_plus_coeff(r, spec.index));
    case SymSpec::Kind::PsiMinus:
        return ShiftOp::mult(r, psi_minus_coeff(r, spec.index));
    }
    throw std::invalid_argument("unknown symmetric function");
}

/// Rescaled psi~_p: the psi+ coefficient for p >= r+1, the psi- one for
/// p <= -(r+1), zero in between (both series have valuation r+1).
inline ShiftOp op_psi_plus(int r, int p) {
    return p >= r + 1 ? op_sym(r, {SymSpec::Kind::PsiPlus, p}) : ShiftOp(r);
}
inline ShiftOp op_psi_minus(int r, int p) {
    return p <= -(r + 1) ? op_sym(r, {SymSpec::Kind::PsiMinus, p}) : ShiftOp(r);
}

/// f~_n = A^-n M_{r,n} Delta^-1
inline ShiftOp op_f(int r, int n) {
    return ShiftOp::a_power(r, -n) * op_m(r, r, n) * ShiftOp::delta(r, -1);
}

// ---------------------------------------------------------------------------
// The representation of the normal-form algebra

namespace detail {

inline const ShiftOp &cached_generator(int r, int n) {
    static std::mutex mu;
    static std::map<std::pair<int, int>, ShiftOp> cache;
    std::lock_guard lock(mu);
    auto it = cache.find({r, n});
    if (it == cache.end()) {
        it = cache.emplace(std::make_pair(r, n), op_m(r, 1, n)).first;
    }
    return it->second; // std::map nodes are stable
}

} // namespace detail

/// M_n -> op_m(r,1,n), A^a -> (prod x)^a, Delta^d -> (prod D)^d. Words are
/// visited in lexicographic order so shared M-prefixes are composed once.
inline ShiftOp nc_to_op(int r, const NCPoly &p) {
    detail::check_rank(r);
    ShiftOp::Accumulator acc(r);
    std::vector<std::pair<int, ShiftOp>> stack; // (letter, prefix product)
    const std::vector<int> *prev = nullptr;
    for (const auto &[w, c] : p.terms()) {
        std::size_t common = 0;
        if (prev != nullptr) {
            while (common < prev->size() && common < w.m.size() && (*prev)[common] == w.m[common] &&
                   common < stack.size()) {
                ++common;
            }
        }
        stack.resize(common);
        for (std::size_t i = common; i < w.m.size(); ++i) {
            const ShiftOp &g = detail::cached_generator(r, w.m[i]);
            stack.emplace_back(w.m[i], stack.empty() ? g : stack.back().second * g);
        }
        prev = &w.m;
        ShiftOp term = stack.empty() ? ShiftOp::identity(r) : stack.back().second;
        if (w.a != 0) {
            term = term * ShiftOp::a_power(r, w.a);
        }
        if (w.d != 0) {
            term = term * ShiftOp::delta(r, w.d);
        }
        acc.add(term, c);
    }
    return acc.finish();
}

} // namespace qq
