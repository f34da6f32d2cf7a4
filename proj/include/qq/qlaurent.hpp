#pragma once

// Laurent polynomials in q with arbitrary-precision integer coefficients.
// Coefficients live in 64-bit words while they fit; any operation that would
// overflow is redone in multiprecision, so results are always exact.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "qq/errors.hpp"

namespace qq {

using BigInt = boost::multiprecision::cpp_int;

/// Element of Z[q, q^-1], stored densely from the lowest to the highest
/// nonzero power. The zero polynomial has no coefficients.
class QLaurent {
  public:
    QLaurent() = default;
    QLaurent(long long value) { // NOLINT: implicit integer constants are convenient
        if (value != 0) {
            small_.push_back(value);
        }
    }
    QLaurent(const BigInt &value) { // NOLINT
        if (value != 0) {
            big_.push_back(value);
            normalize();
        }
    }

    /// c * q^e
    static QLaurent monomial(const BigInt &c, int e) {
        QLaurent out(c);
        out.low_ = c == 0 ? 0 : e;
        return out;
    }
    static QLaurent monomial(long long c, int e) {
        QLaurent out(c);
        out.low_ = c == 0 ? 0 : e;
        return out;
    }
    static QLaurent monomial(int c, int e) { return monomial(static_cast<long long>(c), e); }
    static QLaurent q(int e = 1) { return monomial(1LL, e); }

    /// Build from (exponent, coefficient) pairs; repeated exponents accumulate.
    static QLaurent from_terms(const std::vector<std::pair<int, BigInt>> &terms) {
        QLaurent out;
        for (const auto &[e, c] : terms) {
            out += monomial(c, e);
        }
        return out;
    }

    bool is_zero() const { return small_.empty() && big_.empty(); }
    bool is_one() const { return low_ == 0 && small_.size() == 1 && small_[0] == 1; }
    /// True when this is +-q^e for some e.
    bool is_unit() const { return small_.size() == 1 && (small_[0] == 1 || small_[0] == -1); }
    bool is_monomial() const { return width() == 1; }
    int low() const { return low_; }
    int high() const { return low_ + static_cast<int>(width()) - 1; }
    std::size_t num_terms() const {
        std::size_t n = 0;
        for (std::size_t k = 0; k < width(); ++k) {
            n += at_is_zero(k) ? 0 : 1;
        }
        return n;
    }

    BigInt coeff(int e) const {
        if (is_zero() || e < low_ || e > high()) {
            return 0;
        }
        return at(static_cast<std::size_t>(e - low_));
    }
    /// Sign of the coefficient of q^e.
    int coeff_sign(int e) const {
        if (is_zero() || e < low_ || e > high()) {
            return 0;
        }
        const auto k = static_cast<std::size_t>(e - low_);
        if (big_.empty()) {
            return (small_[k] > 0) - (small_[k] < 0);
        }
        return big_[k].sign();
    }

    /// Nonzero (exponent, coefficient) pairs in increasing exponent order.
    std::vector<std::pair<int, BigInt>> terms() const {
        std::vector<std::pair<int, BigInt>> out;
        for_each_term([&](int e, const BigInt &c) { out.emplace_back(e, c); });
        return out;
    }

    template <typename F> void for_each_term(F &&f) const {
        for (std::size_t k = 0; k < width(); ++k) {
            if (!at_is_zero(k)) {
                f(low_ + static_cast<int>(k), at(k));
            }
        }
    }

    /// Multiply by q^e in place.
    QLaurent &shift(int e) {
        if (!is_zero()) {
            low_ += e;
        }
        return *this;
    }
    QLaurent shifted(int e) const {
        QLaurent out = *this;
        return out.shift(e);
    }

    QLaurent operator-() const {
        QLaurent out = *this;
        if (!out.big_.empty()) {
            for (auto &c : out.big_) {
                c = -c;
            }
            out.normalize();
            return out;
        }
        for (auto &c : out.small_) {
            if (c == std::numeric_limits<std::int64_t>::min()) {
                out.promote();
                for (auto &b : out.big_) {
                    b = -b;
                }
                out.normalize();
                return out;
            }
            c = -c;
        }
        return out;
    }

    QLaurent &operator+=(const QLaurent &o) { return add_scaled(o, false); }
    QLaurent &operator-=(const QLaurent &o) { return add_scaled(o, true); }

    QLaurent &operator*=(const QLaurent &o) {
        *this = *this * o;
        return *this;
    }

    friend QLaurent operator+(QLaurent a, const QLaurent &b) { return a += b; }
    friend QLaurent operator-(QLaurent a, const QLaurent &b) { return a -= b; }

    friend QLaurent operator*(const QLaurent &a, const QLaurent &b) {
        QLaurent out;
        if (a.is_zero() || b.is_zero()) {
            return out;
        }
        out.low_ = a.low_ + b.low_;
        if (a.big_.empty() && b.big_.empty()) {
            const std::size_t na = a.small_.size();
            const std::size_t nb = b.small_.size();
            out.small_.assign(na + nb - 1, 0);
            bool ok = true;
            for (std::size_t k = 0; k + 1 < na + nb && ok; ++k) {
                __int128 acc = 0;
                const std::size_t lo = k + 1 > nb ? k + 1 - nb : 0;
                const std::size_t hi = std::min(k, na - 1);
                for (std::size_t i = lo; i <= hi; ++i) {
                    const __int128 prod = static_cast<__int128>(a.small_[i]) * b.small_[k - i];
                    if (__builtin_add_overflow(acc, prod, &acc)) {
                        ok = false;
                        break;
                    }
                }
                if (acc > std::numeric_limits<std::int64_t>::max() ||
                    acc < std::numeric_limits<std::int64_t>::min()) {
                    ok = false;
                }
                out.small_[k] = static_cast<std::int64_t>(acc);
            }
            if (ok) {
                out.trim_small();
                return out;
            }
            out.small_.clear();
        }
        const auto ab = a.as_big();
        const auto bb = b.as_big();
        out.big_.assign(ab.size() + bb.size() - 1, BigInt(0));
        for (std::size_t i = 0; i < ab.size(); ++i) {
            if (ab[i] == 0) {
                continue;
            }
            for (std::size_t j = 0; j < bb.size(); ++j) {
                out.big_[i + j] += ab[i] * bb[j];
            }
        }
        out.normalize();
        return out;
    }

    friend bool operator==(const QLaurent &a, const QLaurent &b) {
        return a.small_ == b.small_ && a.big_ == b.big_ && (a.is_zero() || a.low_ == b.low_);
    }
    friend bool operator!=(const QLaurent &a, const QLaurent &b) { return !(a == b); }

    /// Total order used only for canonical sorting of containers.
    friend bool operator<(const QLaurent &a, const QLaurent &b) {
        if (a.low_ != b.low_) {
            return a.low_ < b.low_;
        }
        if (a.big_.empty() && b.big_.empty()) {
            return a.small_ < b.small_;
        }
        return a.as_big() < b.as_big();
    }

    QLaurent pow(unsigned k) const {
        QLaurent out(1);
        QLaurent base = *this;
        while (k != 0) {
            if (k & 1U) {
                out *= base;
            }
            base *= base;
            k >>= 1U;
        }
        return out;
    }

    /// Exact quotient a / b in Z[q, q^-1]; throws NotDivisible otherwise.
    friend QLaurent divexact(const QLaurent &a, const QLaurent &b) {
        if (b.is_zero()) {
            throw NotDivisible("division by the zero Laurent polynomial");
        }
        if (a.is_zero()) {
            return {};
        }
        // Long division from the top degree. Both operands have nonzero
        // constant terms once their q-valuation is factored out.
        std::vector<BigInt> rem = a.as_big();
        const std::vector<BigInt> den = b.as_big();
        if (rem.size() < den.size()) {
            throw NotDivisible(a.to_string() + " by " + b.to_string());
        }
        std::vector<BigInt> quot(rem.size() - den.size() + 1);
        for (std::size_t k = quot.size(); k-- > 0;) {
            const BigInt &top = rem[k + den.size() - 1];
            if (top == 0) {
                continue;
            }
            BigInt qk;
            BigInt rk;
            boost::multiprecision::divide_qr(top, den.back(), qk, rk);
            if (rk != 0) {
                throw NotDivisible(a.to_string() + " by " + b.to_string());
            }
            for (std::size_t j = 0; j < den.size(); ++j) {
                rem[k + j] -= qk * den[j];
            }
            quot[k] = qk;
        }
        if (std::any_of(rem.begin(), rem.end(), [](const BigInt &c) { return c != 0; })) {
            throw NotDivisible(a.to_string() + " by " + b.to_string());
        }
        QLaurent out;
        out.low_ = a.low_ - b.low_;
        out.big_ = std::move(quot);
        out.normalize();
        return out;
    }

    /// Sorted-sum text form, e.g. "-q^-1 + 2 + q^3".
    std::string to_string() const {
        if (is_zero()) {
            return "0";
        }
        std::ostringstream os;
        bool first = true;
        for_each_term([&](int e, const BigInt &c) {
            BigInt mag = c < 0 ? BigInt(-c) : c;
            if (first) {
                if (c < 0) {
                    os << '-';
                }
            } else {
                os << (c < 0 ? " - " : " + ");
            }
            first = false;
            if (e == 0) {
                os << mag;
                return;
            }
            if (mag != 1) {
                os << mag << '*';
            }
            os << 'q';
            if (e != 1) {
                os << '^' << e;
            }
        });
        return os.str();
    }

  private:
    std::size_t width() const { return big_.empty() ? small_.size() : big_.size(); }
    bool at_is_zero(std::size_t k) const { return big_.empty() ? small_[k] == 0 : big_[k] == 0; }
    BigInt at(std::size_t k) const { return big_.empty() ? BigInt(small_[k]) : big_[k]; }

    std::vector<BigInt> as_big() const {
        if (!big_.empty()) {
            return big_;
        }
        return {small_.begin(), small_.end()};
    }

    void promote() {
        big_.assign(small_.begin(), small_.end());
        small_.clear();
    }

    QLaurent &add_scaled(const QLaurent &o, bool subtract) {
        if (o.is_zero()) {
            return *this;
        }
        if (is_zero()) {
            *this = subtract ? -o : o;
            return *this;
        }
        const int lo = std::min(low_, o.low_);
        const int hi = std::max(high(), o.high());
        if (big_.empty() && o.big_.empty()) {
            if (lo < low_) {
                small_.insert(small_.begin(), static_cast<std::size_t>(low_ - lo), 0);
                low_ = lo;
            }
            if (hi > high()) {
                small_.resize(static_cast<std::size_t>(hi - low_ + 1), 0);
            }
            const auto off = static_cast<std::size_t>(o.low_ - low_);
            for (std::size_t k = 0; k < o.small_.size(); ++k) {
                std::int64_t &dst = small_[off + k];
                std::int64_t sum = 0;
                const bool overflow = subtract ? __builtin_sub_overflow(dst, o.small_[k], &sum)
                                               : __builtin_add_overflow(dst, o.small_[k], &sum);
                if (!overflow) {
                    dst = sum;
                } else {
                    // undo the partial update, then redo everything exactly
                    for (std::size_t u = 0; u < k; ++u) {
                        if (subtract) {
                            small_[off + u] += o.small_[u];
                        } else {
                            small_[off + u] -= o.small_[u];
                        }
                    }
                    promote();
                    return add_big(o, subtract);
                }
            }
            trim_small();
            return *this;
        }
        if (big_.empty()) {
            promote();
        }
        return add_big(o, subtract);
    }

    QLaurent &add_big(const QLaurent &o, bool subtract) {
        const int lo = std::min(low_, o.low_);
        const int hi = std::max(high(), o.high());
        if (lo < low_) {
            big_.insert(big_.begin(), static_cast<std::size_t>(low_ - lo), BigInt(0));
            low_ = lo;
        }
        if (hi > high()) {
            big_.resize(static_cast<std::size_t>(hi - low_ + 1), BigInt(0));
        }
        const auto off = static_cast<std::size_t>(o.low_ - low_);
        const auto ob = o.as_big();
        for (std::size_t k = 0; k < ob.size(); ++k) {
            if (subtract) {
                big_[off + k] -= ob[k];
            } else {
                big_[off + k] += ob[k];
            }
        }
        normalize();
        return *this;
    }

    void trim_small() {
        std::size_t head = 0;
        while (head < small_.size() && small_[head] == 0) {
            ++head;
        }
        if (head == small_.size()) {
            small_.clear();
            low_ = 0;
            return;
        }
        while (small_.back() == 0) {
            small_.pop_back();
        }
        if (head > 0) {
            small_.erase(small_.begin(), small_.begin() + static_cast<std::ptrdiff_t>(head));
            low_ += static_cast<int>(head);
        }
    }

    /// Trim zeros and move back to 64-bit storage when everything fits.
    void normalize() {
        std::size_t head = 0;
        while (head < big_.size() && big_[head] == 0) {
            ++head;
        }
        if (head == big_.size()) {
            big_.clear();
            small_.clear();
            low_ = 0;
            return;
        }
        while (big_.back() == 0) {
            big_.pop_back();
        }
        if (head > 0) {
            big_.erase(big_.begin(), big_.begin() + static_cast<std::ptrdiff_t>(head));
            low_ += static_cast<int>(head);
        }
        const BigInt lo = std::numeric_limits<std::int64_t>::min();
        const BigInt hi = std::numeric_limits<std::int64_t>::max();
        if (std::all_of(big_.begin(), big_.end(),
                        [&](const BigInt &c) { return c >= lo && c <= hi; })) {
            small_.clear();
            small_.reserve(big_.size());
            for (const auto &c : big_) {
                small_.push_back(static_cast<std::int64_t>(c));
            }
            big_.clear();
        }
    }

    int low_ = 0;
    std::vector<std::int64_t> small_;
    std::vector<BigInt> big_;
};

inline std::ostream &operator<<(std::ostream &os, const QLaurent &p) { return os << p.to_string(); }

} // namespace qq
