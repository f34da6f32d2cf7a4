#pragma once

// Multivariate Laurent polynomials in x_1..x_k with coefficients in
// Z[q, q^-1] (optionally Z[q^+-1, t^+-1]). Terms are stored flattened: the q
// and t exponents sit in the monomial next to the x exponents, which keeps
// multiplication and the substitution x_i -> q^e x_i cheap.

#include <algorithm>
#include <array>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "qq/errors.hpp"
#include "qq/qlaurent.hpp"

namespace qq {

inline constexpr int kMaxXVars = 8;

/// Exponents of (q, t, x_1, ..., x_kMaxXVars).
struct Mono {
    static constexpr int kQ = 0;
    static constexpr int kT = 1;
    static constexpr int kX0 = 2;

    std::array<std::int32_t, kX0 + kMaxXVars> e{};

    std::int32_t q() const { return e[kQ]; }
    std::int32_t t() const { return e[kT]; }
    std::int32_t x(int i) const { return e[static_cast<std::size_t>(kX0 + i)]; }
    std::int32_t &x(int i) { return e[static_cast<std::size_t>(kX0 + i)]; }

    friend Mono operator+(Mono a, const Mono &b) {
        for (std::size_t k = 0; k < a.e.size(); ++k) {
            a.e[k] += b.e[k];
        }
        return a;
    }
    auto operator<=>(const Mono &) const = default;
};

namespace modp {

inline constexpr std::uint64_t kP = (std::uint64_t{1} << 61) - 1;

inline std::uint64_t mul(std::uint64_t a, std::uint64_t b) {
    const unsigned __int128 z = static_cast<unsigned __int128>(a) * b;
    const std::uint64_t lo = static_cast<std::uint64_t>(z & kP);
    const std::uint64_t hi = static_cast<std::uint64_t>(z >> 61);
    const std::uint64_t s = lo + hi;
    return s >= kP ? s - kP : s;
}

inline std::uint64_t pow(std::uint64_t b, std::uint64_t e) {
    std::uint64_t r = 1;
    while (e != 0) {
        if ((e & 1U) != 0) {
            r = mul(r, b);
        }
        b = mul(b, b);
        e >>= 1U;
    }
    return r;
}

inline std::uint64_t inv(std::uint64_t b) { return pow(b, kP - 2); }

inline std::uint64_t reduce(const BigInt &c) {
    if (c >= std::numeric_limits<std::int64_t>::min() && c <= std::numeric_limits<std::int64_t>::max()) {
        const auto v = static_cast<std::int64_t>(c);
        const auto m = static_cast<std::uint64_t>(v < 0 ? -(v + 1) : v) % kP; // no overflow at INT64_MIN
        return v < 0 ? (kP - m + kP - 1) % kP : m;
    }
    BigInt m = c % BigInt(kP);
    if (m < 0) {
        m += kP;
    }
    return static_cast<std::uint64_t>(m);
}

/// Base point and its inverse for (q, t, x_1, ...).
struct Point {
    std::array<std::uint64_t, 2 + kMaxXVars> v{};
    std::array<std::uint64_t, 2 + kMaxXVars> vinv{};
};

inline const Point &base_point() {
    static const Point pt = [] {
        Point p;
        std::uint64_t seed = 0x9e3779b97f4a7c15ULL;
        for (std::size_t k = 0; k < p.v.size(); ++k) {
            seed = seed * 6364136223846793005ULL + 1442695040888963407ULL;
            p.v[k] = 2 + (seed >> 4U) % (kP - 3);
            p.vinv[k] = inv(p.v[k]);
        }
        return p;
    }();
    return pt;
}

/// Powers b^e of each base-point coordinate for |e| <= kRange.
struct PowerTable {
    static constexpr int kRange = 256;
    std::array<std::vector<std::uint64_t>, 2 + kMaxXVars> pw;

    std::uint64_t get(std::size_t k, std::int64_t e) const {
        if (e >= -kRange && e <= kRange) {
            return pw[k][static_cast<std::size_t>(e + kRange)];
        }
        const Point &p = base_point();
        return e >= 0 ? pow(p.v[k], static_cast<std::uint64_t>(e)) : pow(p.vinv[k], static_cast<std::uint64_t>(-e));
    }
};

inline const PowerTable &power_table() {
    static const PowerTable table = [] {
        PowerTable t;
        const Point &p = base_point();
        for (std::size_t k = 0; k < t.pw.size(); ++k) {
            auto &row = t.pw[k];
            row.assign(2 * PowerTable::kRange + 1, 1);
            for (int e = 1; e <= PowerTable::kRange; ++e) {
                row[static_cast<std::size_t>(PowerTable::kRange + e)] =
                    mul(row[static_cast<std::size_t>(PowerTable::kRange + e - 1)], p.v[k]);
                row[static_cast<std::size_t>(PowerTable::kRange - e)] =
                    mul(row[static_cast<std::size_t>(PowerTable::kRange - e + 1)], p.vinv[k]);
            }
        }
        return t;
    }();
    return table;
}

/// Value of sum c*mono at the base point with x_j replaced by q^s x_i.
template <typename Terms>
std::uint64_t eval_substituted(const Terms &terms, int i, int j, int s) {
    const PowerTable &tb = power_table();
    const auto xi = static_cast<std::size_t>(Mono::kX0 + i);
    const auto xj = static_cast<std::size_t>(Mono::kX0 + j);
    std::uint64_t acc = 0;
    for (const auto &[m, c] : terms) {
        std::uint64_t val = reduce(c);
        const std::int64_t d = m.e[xj];
        for (std::size_t k = 0; k < m.e.size() && val != 0; ++k) {
            std::int64_t e = m.e[k];
            if (k == xj) {
                continue;
            }
            if (k == xi) {
                e += d;
            } else if (k == Mono::kQ) {
                e += static_cast<std::int64_t>(s) * d;
            }
            if (e != 0) {
                val = mul(val, tb.get(k, e));
            }
        }
        acc += val;
        if (acc >= kP) {
            acc -= kP;
        }
    }
    return acc;
}

} // namespace modp

class XPoly {
  public:
    using Term = std::pair<Mono, BigInt>;

    XPoly() = default;
    explicit XPoly(int nx) : nx_(nx) {
        if (nx < 0 || nx > kMaxXVars) {
            throw UnsupportedParams("XPoly supports at most " + std::to_string(kMaxXVars) +
                                    " variables");
        }
    }

    static XPoly constant(int nx, const QLaurent &c) {
        XPoly out(nx);
        c.for_each_term([&](int e, const BigInt &v) {
            Mono m;
            m.e[Mono::kQ] = e;
            out.terms_.emplace_back(m, v);
        });
        return out;
    }
    static XPoly one(int nx) { return constant(nx, 1); }

    /// c * x^xexp (q- and t-free monomial times an integer)
    static XPoly monomial(int nx, std::span<const int> xexp, const QLaurent &c = 1) {
        XPoly out = constant(nx, c);
        for (auto &[m, v] : out.terms_) {
            for (int i = 0; i < nx; ++i) {
                m.x(i) += xexp[static_cast<std::size_t>(i)];
            }
        }
        return out;
    }
    static XPoly from_mono(int nx, const Mono &m, const BigInt &c) {
        XPoly out(nx);
        if (c != 0) {
            out.terms_.emplace_back(m, c);
        }
        return out;
    }
    /// x_i (0-based) raised to power k
    static XPoly var(int nx, int i, int k = 1) {
        Mono m;
        m.x(i) = k;
        return from_mono(nx, m, 1);
    }
    static XPoly t_power(int nx, int k) {
        Mono m;
        m.e[Mono::kT] = k;
        return from_mono(nx, m, 1);
    }

    int nvars() const { return nx_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }
    const std::vector<Term> &terms() const { return terms_; }

    bool is_constant() const {
        return std::all_of(terms_.begin(), terms_.end(), [&](const Term &tm) {
            for (int i = 0; i < nx_; ++i) {
                if (tm.first.x(i) != 0) {
                    return false;
                }
            }
            return tm.first.t() == 0;
        });
    }

    /// Coefficients grouped by (t exponent, x exponents).
    std::map<std::pair<int, std::vector<int>>, QLaurent> grouped() const {
        std::map<std::pair<int, std::vector<int>>, QLaurent> out;
        for (const auto &[m, c] : terms_) {
            std::vector<int> xs(static_cast<std::size_t>(nx_));
            for (int i = 0; i < nx_; ++i) {
                xs[static_cast<std::size_t>(i)] = m.x(i);
            }
            out[{m.t(), xs}] += QLaurent::monomial(c, m.q());
        }
        return out;
    }

    /// Coefficient of x^xexp (t-exponent zero) as a Laurent polynomial in q.
    QLaurent coefficient(std::span<const int> xexp) const {
        QLaurent out;
        for (const auto &[m, c] : terms_) {
            if (m.t() != 0) {
                continue;
            }
            bool match = true;
            for (int i = 0; i < nx_ && match; ++i) {
                match = m.x(i) == xexp[static_cast<std::size_t>(i)];
            }
            if (match) {
                out += QLaurent::monomial(c, m.q());
            }
        }
        return out;
    }

    XPoly operator-() const {
        XPoly out = *this;
        for (auto &tm : out.terms_) {
            tm.second = -tm.second;
        }
        return out;
    }

    XPoly &operator+=(const XPoly &o) {
        *this = merge(*this, o, false);
        return *this;
    }
    XPoly &operator-=(const XPoly &o) {
        *this = merge(*this, o, true);
        return *this;
    }
    friend XPoly operator+(const XPoly &a, const XPoly &b) { return merge(a, b, false); }
    friend XPoly operator-(const XPoly &a, const XPoly &b) { return merge(a, b, true); }

    friend XPoly operator*(const XPoly &a, const XPoly &b) {
        const int nx = std::max(a.nx_, b.nx_);
        XPoly out(nx);
        if (a.is_zero() || b.is_zero()) {
            return out;
        }
        if (b.terms_.size() == 1) {
            return a.times_term(b.terms_[0].first, b.terms_[0].second).with_nx(nx);
        }
        if (a.terms_.size() == 1) {
            return b.times_term(a.terms_[0].first, a.terms_[0].second).with_nx(nx);
        }
        std::vector<Term> raw;
        raw.reserve(a.terms_.size() * b.terms_.size());
        for (const auto &[ma, ca] : a.terms_) {
            for (const auto &[mb, cb] : b.terms_) {
                raw.emplace_back(ma + mb, ca * cb);
            }
        }
        out.terms_ = collect(std::move(raw));
        return out;
    }
    XPoly &operator*=(const XPoly &o) {
        *this = *this * o;
        return *this;
    }

    XPoly scaled(const QLaurent &c) const { return *this * constant(nx_, c); }

    /// Multiply by the monomial c * m.
    XPoly times_term(const Mono &m, const BigInt &c) const {
        XPoly out(nx_);
        if (c == 0) {
            return out;
        }
        out.terms_.reserve(terms_.size());
        for (const auto &[mm, cc] : terms_) {
            out.terms_.emplace_back(mm + m, cc * c);
        }
        return out; // translation preserves the order
    }

    XPoly pow(unsigned k) const {
        XPoly out = one(nx_);
        for (unsigned i = 0; i < k; ++i) {
            out *= *this;
        }
        return out;
    }

    /// Substitution x_i -> q^{eps_i} x_i.
    XPoly q_shifted(std::span<const int> eps) const {
        XPoly out(nx_);
        out.terms_.reserve(terms_.size());
        for (const auto &[m, c] : terms_) {
            Mono mm = m;
            for (int i = 0; i < nx_; ++i) {
                mm.e[Mono::kQ] += eps[static_cast<std::size_t>(i)] * m.x(i);
            }
            out.terms_.emplace_back(mm, c);
        }
        out.terms_ = collect(std::move(out.terms_));
        return out;
    }

    /// Substitution t -> 1.
    XPoly t_to_one() const {
        std::vector<Term> raw = terms_;
        for (auto &tm : raw) {
            tm.first.e[Mono::kT] = 0;
        }
        XPoly out(nx_);
        out.terms_ = collect(std::move(raw));
        return out;
    }

    /// Largest t exponent present (0 for the zero polynomial).
    int t_degree() const {
        int d = 0;
        bool any = false;
        for (const auto &[m, c] : terms_) {
            d = any ? std::max(d, m.t()) : m.t();
            any = true;
        }
        return d;
    }

    /// Coefficient of t^k, as a t-free polynomial.
    XPoly t_coefficient(int k) const {
        XPoly out(nx_);
        for (const auto &[m, c] : terms_) {
            if (m.t() == k) {
                Mono mm = m;
                mm.e[Mono::kT] = 0;
                out.terms_.emplace_back(mm, c);
            }
        }
        return out; // filtered and translated uniformly, still sorted
    }

    /// Multiply by (q^s x_i - x_j), i != j, 0-based.
    XPoly times_linear(int i, int j, int s) const {
        Mono mi;
        mi.x(i) = 1;
        mi.e[Mono::kQ] = s;
        Mono mj;
        mj.x(j) = 1;
        return times_term(mi, 1) - times_term(mj, 1);
    }

    /// Exact quotient by (q^s x_i - x_j). Division is synthetic division in
    /// x_j, treating the other variables as parameters; the divisor is monic
    /// in x_j up to sign, so the quotient exists iff the remainder
    /// p|_{x_j = q^s x_i} vanishes.
    std::optional<XPoly> try_div_linear(int i, int j, int s = 0) const {
        if (i == j) {
            throw std::invalid_argument("div_linear needs distinct variables");
        }
        XPoly out(nx_);
        if (is_zero()) {
            return out;
        }
        if (!vanishes_at(i, j, s)) {
            return std::nullopt;
        }
        // Group terms by the x_j exponent; key = monomial with x_j removed.
        std::map<int, std::vector<Term>> by_deg;
        for (const auto &[m, c] : terms_) {
            Mono mm = m;
            const int d = mm.x(j);
            mm.x(j) = 0;
            by_deg[d].emplace_back(mm, c);
        }
        Mono root; // c = q^s x_i
        root.x(i) = 1;
        root.e[Mono::kQ] = s;
        // p = sum_d P_d x_j^d, d in [lo, hi]; divide by (x_j - c):
        // Q_{hi-1} = P_hi, Q_{d-1} = P_d + c Q_d, remainder P_lo + c Q_lo.
        const int lo = by_deg.begin()->first;
        const int hi = by_deg.rbegin()->first;
        std::vector<Term> carry;
        std::vector<Term> quotient;
        for (auto &[d, bucket] : by_deg) {
            std::sort(bucket.begin(), bucket.end(), [](const Term &a, const Term &b) { return a.first < b.first; });
        }
        for (int d = hi; d >= lo; --d) {
            // Both inputs are sorted and shifting by root keeps the order.
            static const std::vector<Term> kEmpty;
            auto it = by_deg.find(d);
            const std::vector<Term> &bucket = it == by_deg.end() ? kEmpty : it->second;
            for (auto &t : carry) {
                t.first = t.first + root;
            }
            std::vector<Term> cur;
            cur.reserve(bucket.size() + carry.size());
            std::size_t ia = 0;
            std::size_t ib = 0;
            while (ia < bucket.size() || ib < carry.size()) {
                if (ib == carry.size() || (ia < bucket.size() && bucket[ia].first < carry[ib].first)) {
                    cur.push_back(bucket[ia++]);
                } else if (ia == bucket.size() || carry[ib].first < bucket[ia].first) {
                    cur.push_back(std::move(carry[ib++]));
                } else {
                    BigInt c = bucket[ia++].second + carry[ib].second;
                    if (c != 0) {
                        cur.emplace_back(carry[ib].first, std::move(c));
                    }
                    ++ib;
                }
            }
            if (d == lo) {
                if (!cur.empty()) {
                    return std::nullopt;
                }
                break;
            }
            // cur is Q_{d-1}
            for (const auto &[m, c] : cur) {
                Mono mm = m;
                mm.x(j) = d - 1;
                quotient.emplace_back(mm, -c); // (q^s x_i - x_j) = -(x_j - c)
            }
            carry = std::move(cur);
        }
        out.terms_ = collect(std::move(quotient));
        return out;
    }

    XPoly div_linear(int i, int j, int s = 0) const {
        auto out = try_div_linear(i, j, s);
        if (!out) {
            std::ostringstream os;
            os << to_string() << " by (";
            if (s != 0) {
                os << "q^" << s << "*";
            }
            os << "x" << i + 1 << " - x" << j + 1 << ")";
            throw NotDivisible(os.str());
        }
        return *out;
    }

    friend bool operator==(const XPoly &a, const XPoly &b) { return a.terms_ == b.terms_; }
    friend bool operator!=(const XPoly &a, const XPoly &b) { return !(a == b); }
    friend bool operator<(const XPoly &a, const XPoly &b) { return a.terms_ < b.terms_; }

    /// Text form: terms grouped by x-monomial, e.g. "(1 - q)*x1*x2^-1 + x2".
    std::string to_string() const {
        if (is_zero()) {
            return "0";
        }
        std::ostringstream os;
        bool first = true;
        const auto groups = grouped();
        for (auto it = groups.rbegin(); it != groups.rend(); ++it) {
            const auto &[key, c] = *it;
            const auto &[te, xs] = key;
            std::ostringstream mono;
            bool mfirst = true;
            auto emit = [&](const std::string &name, int e) {
                if (e == 0) {
                    return;
                }
                if (!mfirst) {
                    mono << '*';
                }
                mfirst = false;
                mono << name;
                if (e != 1) {
                    mono << '^' << e;
                }
            };
            emit("t", te);
            for (std::size_t i = 0; i < xs.size(); ++i) {
                emit("x" + std::to_string(i + 1), xs[i]);
            }
            const std::string ms = mono.str();
            std::string cs = c.to_string();
            const bool neg_mono = c.is_monomial() && c.coeff(c.low()) < 0;
            if (!first) {
                os << (neg_mono ? " - " : " + ");
            } else if (neg_mono) {
                os << '-';
            }
            if (neg_mono) {
                cs = (-c).to_string();
            }
            first = false;
            if (ms.empty()) {
                os << (c.is_monomial() ? cs : "(" + cs + ")");
            } else if (cs == "1") {
                os << ms;
            } else if (c.is_monomial()) {
                os << cs << '*' << ms;
            } else {
                os << '(' << cs << ")*" << ms;
            }
        }
        return os.str();
    }

  private:
    /// Whether p|_{x_j = q^s x_i} is zero. A nonzero value at a fixed point
    /// mod 2^61-1 settles the negative case without collecting terms.
    bool vanishes_at(int i, int j, int s) const {
        if (modp::eval_substituted(terms_, i, j, s) != 0) {
            return false;
        }
        std::vector<Term> sub;
        sub.reserve(terms_.size());
        for (const auto &[m, c] : terms_) {
            Mono mm = m;
            const int d = mm.x(j);
            mm.x(j) = 0;
            mm.x(i) += d;
            mm.e[Mono::kQ] += s * d;
            sub.emplace_back(mm, c);
        }
        return collect(std::move(sub)).empty();
    }

    XPoly with_nx(int nx) && {
        nx_ = nx;
        return std::move(*this);
    }

    static std::vector<Term> collect(std::vector<Term> raw) {
        std::sort(raw.begin(), raw.end(),
                  [](const Term &a, const Term &b) { return a.first < b.first; });
        std::vector<Term> out;
        out.reserve(raw.size());
        for (auto &tm : raw) {
            if (!out.empty() && out.back().first == tm.first) {
                out.back().second += tm.second;
            } else {
                if (!out.empty() && out.back().second == 0) {
                    out.pop_back();
                }
                out.push_back(std::move(tm));
            }
        }
        if (!out.empty() && out.back().second == 0) {
            out.pop_back();
        }
        return out;
    }

    static XPoly merge(const XPoly &a, const XPoly &b, bool subtract) {
        XPoly out(std::max(a.nx_, b.nx_));
        out.terms_.reserve(a.terms_.size() + b.terms_.size());
        auto ia = a.terms_.begin();
        auto ib = b.terms_.begin();
        while (ia != a.terms_.end() || ib != b.terms_.end()) {
            if (ib == b.terms_.end() || (ia != a.terms_.end() && ia->first < ib->first)) {
                out.terms_.push_back(*ia++);
            } else if (ia == a.terms_.end() || ib->first < ia->first) {
                out.terms_.emplace_back(ib->first, subtract ? BigInt(-ib->second) : ib->second);
                ++ib;
            } else {
                BigInt c = subtract ? BigInt(ia->second - ib->second) : BigInt(ia->second + ib->second);
                if (c != 0) {
                    out.terms_.emplace_back(ia->first, std::move(c));
                }
                ++ia;
                ++ib;
            }
        }
        return out;
    }

    int nx_ = 0;
    std::vector<Term> terms_;
};

/// Exact quotient p / (x_i - x_j); NotDivisible when p does not vanish on x_i = x_j.
inline XPoly xp_divlinear(const XPoly &p, int i, int j) { return p.div_linear(i, j, 0); }

inline std::ostream &operator<<(std::ostream &os, const XPoly &p) { return os << p.to_string(); }

} // namespace qq
