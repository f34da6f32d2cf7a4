#pragma once

// Constant-term calculus. A kernel K(u_1..u_a) stands for the generating
// function identity CT_u( K * m(u_1) ... m(u_a) * delta(u_1...u_a / z) ); its
// z^n coefficient sends the monomial prod u_i^{e_i} to M_{n-e_1} ... M_{n-e_a}.

#include <bit>
#include <map>
#include <mutex>
#include <numeric>
#include <string>
#include <vector>

#include "qq/ncalgebra.hpp"

namespace qq {

/// Laurent polynomial in commuting u_1..u_arity over Z[q, q^-1].
class UKernel {
  public:
    using Exponents = std::vector<int>;
    using Map = std::map<Exponents, QLaurent>;

    UKernel() = default;
    explicit UKernel(int arity) : arity_(arity) {}

    static UKernel one(int arity) { return monomial(Exponents(static_cast<std::size_t>(arity), 0)); }
    static UKernel monomial(Exponents e, const QLaurent &c = 1) {
        UKernel out(static_cast<int>(e.size()));
        out.add_term(std::move(e), c);
        return out;
    }
    /// u_i^k, 0-based slot i.
    static UKernel power(int arity, int i, int k, const QLaurent &c = 1) {
        Exponents e(static_cast<std::size_t>(arity), 0);
        e[static_cast<std::size_t>(i)] = k;
        return monomial(std::move(e), c);
    }
    static UKernel scalar(int arity, const QLaurent &c) { return one(arity).scaled(c); }

    int arity() const { return arity_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }
    const Map &terms() const { return terms_; }
    QLaurent coeff(const Exponents &e) const {
        auto it = terms_.find(e);
        return it == terms_.end() ? QLaurent{} : it->second;
    }

    void add_term(Exponents e, const QLaurent &c) {
        if (c.is_zero()) {
            return;
        }
        auto [it, inserted] = terms_.try_emplace(std::move(e), c);
        if (!inserted) {
            it->second += c;
            if (it->second.is_zero()) {
                terms_.erase(it);
            }
        }
    }

    UKernel &operator+=(const UKernel &o) {
        check(o);
        for (const auto &[e, c] : o.terms_) {
            add_term(e, c);
        }
        return *this;
    }
    UKernel &operator-=(const UKernel &o) {
        check(o);
        for (const auto &[e, c] : o.terms_) {
            add_term(e, -c);
        }
        return *this;
    }
    friend UKernel operator+(UKernel a, const UKernel &b) { return a += b; }
    friend UKernel operator-(UKernel a, const UKernel &b) { return a -= b; }

    friend UKernel operator*(const UKernel &a, const UKernel &b) {
        a.check(b);
        UKernel out(a.arity_);
        for (const auto &[ea, ca] : a.terms_) {
            for (const auto &[eb, cb] : b.terms_) {
                Exponents e = ea;
                for (std::size_t i = 0; i < e.size(); ++i) {
                    e[i] += eb[i];
                }
                out.add_term(std::move(e), ca * cb);
            }
        }
        return out;
    }

    UKernel scaled(const QLaurent &c) const {
        UKernel out(arity_);
        if (c.is_zero()) {
            return out;
        }
        for (const auto &[e, ce] : terms_) {
            out.terms_.emplace_hint(out.terms_.end(), e, ce * c);
        }
        return out;
    }

    /// Re-seat the variables: slot i of this kernel becomes slot slots[i] of a
    /// kernel of the given arity.
    UKernel embedded(int arity, const std::vector<int> &slots) const {
        UKernel out(arity);
        for (const auto &[e, c] : terms_) {
            Exponents f(static_cast<std::size_t>(arity), 0);
            for (std::size_t i = 0; i < e.size(); ++i) {
                f[static_cast<std::size_t>(slots[i])] += e[i];
            }
            out.add_term(std::move(f), c);
        }
        return out;
    }

    friend bool operator==(const UKernel &a, const UKernel &b) {
        return a.arity_ == b.arity_ && a.terms_ == b.terms_;
    }

    std::string to_string() const {
        if (terms_.empty()) {
            return "0";
        }
        std::ostringstream os;
        bool first = true;
        for (const auto &[e, c] : terms_) {
            std::ostringstream mono;
            bool mfirst = true;
            for (std::size_t i = 0; i < e.size(); ++i) {
                if (e[i] == 0) {
                    continue;
                }
                if (!mfirst) {
                    mono << '*';
                }
                mfirst = false;
                mono << 'u' << i + 1;
                if (e[i] != 1) {
                    mono << '^' << e[i];
                }
            }
            append_term(os, first, c, mono.str(), mfirst);
            first = false;
        }
        return os.str();
    }

  private:
    void check(const UKernel &o) const {
        if (arity_ != o.arity_ && !terms_.empty() && !o.terms_.empty()) {
            throw std::invalid_argument("kernel arity mismatch");
        }
    }

    int arity_ = 0;
    Map terms_;
};

/// prod_{a<b} (1 - q u_b / u_a), collected after each factor.
inline UKernel qvandermonde(int alpha) {
    if (alpha < 0) {
        throw std::invalid_argument("qvandermonde needs alpha >= 0");
    }
    UKernel out = UKernel::one(alpha);
    for (int a = 0; a < alpha; ++a) {
        for (int b = a + 1; b < alpha; ++b) {
            UKernel::Exponents e(static_cast<std::size_t>(alpha), 0);
            e[static_cast<std::size_t>(a)] = -1;
            e[static_cast<std::size_t>(b)] = 1;
            UKernel factor = UKernel::one(alpha);
            factor.add_term(std::move(e), QLaurent::monomial(-1, 1));
            out = out * factor;
        }
    }
    return out;
}

/// P_1 = 1,
/// P_{a+1}(u_1..u_{a+1}) = u_1^a / (u_2...u_{a+1}) P_a(u_2..u_{a+1})
///                         - q^{a+1} u_{a+1}^a / (u_1...u_a) P_a(u_1..u_a).
inline UKernel p_kernel(int alpha) {
    if (alpha < 1) {
        throw std::invalid_argument("p_kernel needs alpha >= 1");
    }
    UKernel p = UKernel::one(1);
    for (int a = 1; a < alpha; ++a) {
        const int n = a + 1;
        std::vector<int> tail(static_cast<std::size_t>(a));
        std::vector<int> head(static_cast<std::size_t>(a));
        std::iota(tail.begin(), tail.end(), 1);
        std::iota(head.begin(), head.end(), 0);
        UKernel::Exponents left(static_cast<std::size_t>(n), -1);
        left[0] = a;
        UKernel::Exponents right(static_cast<std::size_t>(n), -1);
        right[static_cast<std::size_t>(a)] = a;
        p = UKernel::monomial(left) * p.embedded(n, tail) -
            UKernel::monomial(right, QLaurent::q(a + 1)) * p.embedded(n, head);
    }
    return p;
}

/// qvandermonde(r+1) / (u_1 ... u_m)
inline UKernel defect_kernel(int r, int m) {
    if (r < 1 || m < 0 || m > r + 1) {
        throw std::invalid_argument("defect_kernel needs r >= 1 and 0 <= m <= r+1");
    }
    UKernel::Exponents e(static_cast<std::size_t>(r + 1), 0);
    for (int i = 0; i < m; ++i) {
        e[static_cast<std::size_t>(i)] = -1;
    }
    return qvandermonde(r + 1) * UKernel::monomial(e);
}

/// Elementary symmetric polynomial e_k(u_1..u_arity), or e_k(1/u) when inverted.
inline UKernel elementary_u(int arity, int k, bool inverted = false) {
    UKernel out(arity);
    if (k < 0 || k > arity) {
        return out;
    }
    for (unsigned mask = 0; mask < (1U << static_cast<unsigned>(arity)); ++mask) {
        if (std::popcount(mask) != k) {
            continue;
        }
        UKernel::Exponents e(static_cast<std::size_t>(arity), 0);
        for (int i = 0; i < arity; ++i) {
            if ((mask >> static_cast<unsigned>(i)) & 1U) {
                e[static_cast<std::size_t>(i)] = inverted ? -1 : 1;
            }
        }
        out.add_term(std::move(e), 1);
    }
    return out;
}

/// The formal sum of words M_{n-e_1} ... M_{n-e_a}, unreduced.
inline NCExpr ct_realize_formal(const UKernel &k, int n) {
    NCExpr out;
    for (const auto &[e, c] : k.terms()) {
        std::vector<int> idx(e.size());
        for (std::size_t i = 0; i < e.size(); ++i) {
            idx[i] = n - e[i];
        }
        out += NCExpr::m_word(idx, c);
    }
    return out;
}

inline NCPoly ct_realize(const UKernel &k, int n) {
    NCPoly out;
    auto &reducer = detail::MWordReducer::local();
    std::vector<int> idx;
    for (const auto &[e, c] : k.terms()) {
        idx.resize(e.size());
        for (std::size_t i = 0; i < e.size(); ++i) {
            idx[i] = n - e[i];
        }
        for (auto &[w, cw] : reducer.normal_form(idx)) {
            out.add_term(NCWord{std::move(w), 0, 0}, cw * c);
        }
    }
    return out;
}

/// M_{alpha,n} as a normal-ordered polynomial in the M_n. Translation in n is
/// an automorphism of the rewrite rules, so only n = 0 is expanded.
inline NCPoly m_alpha(int alpha, int n) {
    if (alpha < 0) {
        throw std::invalid_argument("m_alpha needs alpha >= 0");
    }
    static std::mutex mu;
    static std::map<int, NCPoly> cache;
    {
        std::lock_guard lock(mu);
        if (auto it = cache.find(alpha); it != cache.end()) {
            return it->second.translated(n);
        }
    }
    NCPoly base = ct_realize(qvandermonde(alpha), 0);
    std::lock_guard lock(mu);
    auto [it, inserted] = cache.emplace(alpha, std::move(base));
    return it->second.translated(n);
}

enum class Nesting {
    Left,  // [...[[M_{n-a+1}, M_{n-a+3}]_{q^2}, M_{n-a+5}]_{q^3}, ..., M_{n+a-1}]_{q^a}
    Right, // [M_{n-a+1}, [M_{n-a+3}, ..., [M_{n+a-3}, M_{n+a-1}]_{q^2} ...]_{q^{a-1}}]_{q^a}
};

inline NCExpr q_comm_formal(const NCExpr &a, const NCExpr &b, int k) {
    return a * b - (b * a).scaled(QLaurent::q(k));
}

/// Iterated q-commutator of M_{n-a+1}, M_{n-a+3}, ..., M_{n+a-1}, unreduced.
inline NCExpr m_alpha_nested_formal(int alpha, int n, Nesting nesting = Nesting::Left) {
    if (alpha < 1) {
        throw std::invalid_argument("m_alpha_nested needs alpha >= 1");
    }
    if (nesting == Nesting::Left) {
        NCExpr acc = NCExpr::M(n - alpha + 1);
        for (int k = 2; k <= alpha; ++k) {
            acc = q_comm_formal(acc, NCExpr::M(n - alpha + 2 * k - 1), k);
        }
        return acc;
    }
    NCExpr acc = NCExpr::M(n + alpha - 1);
    for (int k = 2; k <= alpha; ++k) {
        acc = q_comm_formal(NCExpr::M(n + alpha + 1 - 2 * k), acc, k);
    }
    return acc;
}

inline NCPoly m_alpha_nested(int alpha, int n, Nesting nesting = Nesting::Left) {
    return normal_form(m_alpha_nested_formal(alpha, n, nesting));
}

/// Sign s with nested(alpha) = s * (q-1)^{alpha-1} * M_{alpha,n}.
inline int nested_sign(int alpha) { return ((alpha * (alpha + 1) / 2 - 1) % 2 == 0) ? 1 : -1; }

/// The prefactor (-1)^{alpha(alpha-1)/2} printed with the nested formula.
inline int printed_nested_sign(int alpha) { return ((alpha * (alpha - 1) / 2) % 2 == 0) ? 1 : -1; }

/// Representative of C_m: CT of the defect kernel at z^0, times Delta^-1.
inline NCPoly c_m_defect(int r, int m) {
    return nc_mul(ct_realize(defect_kernel(r, m), 0), NCPoly::Delta(-1));
}

/// sigma(M_n) = A^-n M_{r,n} Delta^-1, normal-ordered.
inline NCPoly sigma_image(int r, int n) {
    if (r < 1) {
        throw std::invalid_argument("sigma_image needs r >= 1");
    }
    return nc_mul(nc_mul(NCPoly::A(-n), m_alpha(r, n)), NCPoly::Delta(-1));
}

/// sigma extended multiplicatively: M_n -> sigma_image, A -> A^-1,
/// Delta -> Delta^-1. Its relations only hold modulo the rank ideal, so
/// results are meaningful through the representation.
inline NCPoly apply_sigma(const NCPoly &p, int r) {
    NCPoly out;
    std::map<int, NCPoly> images;
    for (const auto &[w, c] : p.terms()) {
        NCPoly acc = NCPoly::scalar(c);
        for (int n : w.m) {
            auto it = images.find(n);
            if (it == images.end()) {
                it = images.emplace(n, sigma_image(r, n)).first;
            }
            acc = nc_mul(acc, it->second, r);
        }
        acc = nc_mul(acc, NCPoly::word(NCWord{{}, -w.a, -w.d}), r);
        out += acc;
    }
    return out;
}

} // namespace qq
