#pragma once

// Fractions N / D where D is a product of linear factors (q^s x_i - x_j).
// Such denominators are closed under the substitutions x_i -> q^e x_i, so
// they cover every coefficient of a composed shift operator.

#include <algorithm>
#include <map>
#include <span>
#include <sstream>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "qq/xpoly.hpp"

namespace qq {

/// The linear form q^shift * x_i - x_j with i < j (0-based).
struct LinFactor {
    int i = 0;
    int j = 1;
    int shift = 0;
    auto operator<=>(const LinFactor &) const = default;
};

class XRat {
  public:
    using Den = std::vector<std::pair<LinFactor, int>>; // sorted, positive powers

    XRat() = default;
    explicit XRat(int nx) : num_(nx) {}
    XRat(XPoly num) : num_(std::move(num)) {} // NOLINT: polynomials are fractions

    /// num / (q^s x_i - x_j)^pow for arbitrary distinct i, j.
    static XRat over_linear(XPoly num, int i, int j, int s = 0, int pow = 1) {
        const int nx = num.nvars();
        if (i > j) {
            // q^s x_i - x_j = -q^s (q^-s x_j - x_i)
            QLaurent unit = QLaurent::q(-s * pow);
            if (pow % 2 != 0) {
                unit = -unit;
            }
            num = num.scaled(unit);
            std::swap(i, j);
            s = -s;
        }
        XRat out(std::move(num));
        out.num_ = XPoly(std::max(nx, j + 1)) + out.num_;
        out.den_.push_back({LinFactor{i, j, s}, pow});
        out.reduce();
        return out;
    }

    int nvars() const { return num_.nvars(); }
    const XPoly &numerator() const { return num_; }
    const Den &denominator() const { return den_; }
    bool is_zero() const { return num_.is_zero(); }
    bool is_polynomial() const { return den_.empty(); }

    XPoly denominator_poly() const {
        XPoly d = XPoly::one(nvars());
        for (const auto &[f, p] : den_) {
            for (int k = 0; k < p; ++k) {
                d = d.times_linear(f.i, f.j, f.shift);
            }
        }
        return d;
    }

    /// Numerator when the fraction is a polynomial; otherwise NotDivisible.
    XPoly as_polynomial() const {
        if (!den_.empty()) {
            throw NotDivisible(to_string() + " is not a Laurent polynomial");
        }
        return num_;
    }

    XRat operator-() const {
        XRat out = *this;
        out.num_ = -out.num_;
        return out;
    }

    friend XRat operator+(const XRat &a, const XRat &b) { return combine(a, b, false); }
    friend XRat operator-(const XRat &a, const XRat &b) { return combine(a, b, true); }
    XRat &operator+=(const XRat &o) { return *this = *this + o; }
    XRat &operator-=(const XRat &o) { return *this = *this - o; }

    /// Sum over a common denominator, reduced once at the end.
    static XRat sum(std::span<const XRat> xs) {
        std::map<Den, XPoly> by_den;
        int nx = 0;
        for (const auto &x : xs) {
            if (x.is_zero()) {
                continue;
            }
            nx = std::max(nx, x.nvars());
            auto [it, inserted] = by_den.try_emplace(x.den_, x.num_);
            if (!inserted) {
                it->second = it->second + x.num_;
            }
        }
        XRat out(nx);
        if (by_den.size() == 1) {
            out.num_ = std::move(by_den.begin()->second);
            out.den_ = by_den.begin()->first;
            out.reduce();
            return out;
        }
        std::map<LinFactor, int> lcm;
        for (const auto &[den, num] : by_den) {
            if (num.is_zero()) {
                continue;
            }
            for (const auto &[f, p] : den) {
                int &have = lcm[f];
                have = std::max(have, p);
            }
        }
        for (const auto &[den, num] : by_den) {
            if (num.is_zero()) {
                continue;
            }
            XPoly n = num;
            for (const auto &[f, p] : lcm) {
                int have = 0;
                for (const auto &[g, pg] : den) {
                    if (g == f) {
                        have = pg;
                    }
                }
                for (int k = have; k < p; ++k) {
                    n = n.times_linear(f.i, f.j, f.shift);
                }
            }
            out.num_ = out.num_ + n;
        }
        if (!out.num_.is_zero()) {
            out.den_.assign(lcm.begin(), lcm.end());
        }
        out.reduce();
        return out;
    }

    /// Both operands are reduced and the linear factors are irreducible, so
    /// only cross cancellations (a's numerator against b's denominator and
    /// vice versa) can occur; those are done on the smaller polynomials.
    friend XRat operator*(const XRat &a, const XRat &b) {
        XRat out;
        if (a.is_zero() || b.is_zero()) {
            out.num_ = XPoly(std::max(a.nvars(), b.nvars()));
            return out;
        }
        XPoly na = a.num_;
        XPoly nb = b.num_;
        Den da = a.den_;
        Den db = b.den_;
        cancel(na, db);
        cancel(nb, da);
        out.num_ = na * nb;
        out.den_ = std::move(da);
        for (const auto &[f, p] : db) {
            out.add_factor(f, p);
        }
        std::erase_if(out.den_, [](const auto &fp) { return fp.second == 0; });
        return out;
    }
    XRat &operator*=(const XRat &o) { return *this = *this * o; }

    XRat scaled(const QLaurent &c) const {
        XRat out = *this;
        out.num_ = out.num_.scaled(c);
        if (out.num_.is_zero()) {
            out.den_.clear();
        }
        return out;
    }

    /// Substitution x_i -> q^{eps_i} x_i. The factor (q^s x_i - x_j) becomes
    /// q^{eps_j} (q^{s + eps_i - eps_j} x_i - x_j).
    XRat q_shifted(std::span<const int> eps) const {
        XRat out;
        out.num_ = num_.q_shifted(eps);
        int unit = 0;
        for (const auto &[f, p] : den_) {
            const int ei = eps[static_cast<std::size_t>(f.i)];
            const int ej = eps[static_cast<std::size_t>(f.j)];
            out.den_.push_back({LinFactor{f.i, f.j, f.shift + ei - ej}, p});
            unit += ej * p;
        }
        std::sort(out.den_.begin(), out.den_.end());
        if (unit != 0) {
            out.num_ = out.num_.scaled(QLaurent::q(-unit));
        }
        return out; // the substitution is an automorphism: still reduced
    }

    XRat t_to_one() const {
        XRat out;
        out.num_ = num_.t_to_one();
        out.den_ = den_;
        out.reduce();
        return out;
    }
    XRat t_coefficient(int k) const {
        XRat out;
        out.num_ = num_.t_coefficient(k);
        out.den_ = den_;
        out.reduce();
        return out;
    }
    int t_degree() const { return num_.t_degree(); }

    /// Equality by cross-multiplication num_a * den_b == num_b * den_a.
    friend bool operator==(const XRat &a, const XRat &b) {
        if (a.den_ == b.den_) {
            return a.num_ == b.num_;
        }
        return a.num_ * b.denominator_poly() == b.num_ * a.denominator_poly();
    }
    friend bool operator!=(const XRat &a, const XRat &b) { return !(a == b); }

    std::string to_string() const {
        if (den_.empty()) {
            return num_.to_string();
        }
        std::ostringstream os;
        os << '(' << num_.to_string() << ")/(";
        bool first = true;
        for (const auto &[f, p] : den_) {
            if (!first) {
                os << '*';
            }
            first = false;
            os << '(';
            if (f.shift != 0) {
                os << "q^" << f.shift << '*';
            }
            os << 'x' << f.i + 1 << " - x" << f.j + 1 << ')';
            if (p != 1) {
                os << '^' << p;
            }
        }
        os << ')';
        return os.str();
    }

    /// Cancel every denominator factor that divides the numerator.
    void reduce() {
        if (num_.is_zero()) {
            den_.clear();
            return;
        }
        cancel(num_, den_);
        std::erase_if(den_, [](const auto &fp) { return fp.second == 0; });
    }

  private:
    static void cancel(XPoly &num, Den &den) {
        for (auto &[f, p] : den) {
            while (p > 0) {
                auto quotient = num.try_div_linear(f.i, f.j, f.shift);
                if (!quotient) {
                    break;
                }
                num = std::move(*quotient);
                --p;
            }
        }
    }

    void add_factor(const LinFactor &f, int p) {
        auto it = std::lower_bound(den_.begin(), den_.end(), f,
                                   [](const auto &fp, const LinFactor &g) { return fp.first < g; });
        if (it != den_.end() && it->first == f) {
            it->second += p;
        } else {
            den_.insert(it, {f, p});
        }
    }

    static XRat combine(const XRat &a, const XRat &b, bool subtract) {
        if (b.is_zero()) {
            return a;
        }
        if (a.is_zero()) {
            return subtract ? -b : b;
        }
        XRat out;
        if (a.den_ == b.den_) {
            out.num_ = subtract ? a.num_ - b.num_ : a.num_ + b.num_;
            out.den_ = a.den_;
            out.reduce();
            return out;
        }
        // lcm of the two factored denominators
        Den lcm;
        std::size_t ia = 0;
        std::size_t ib = 0;
        while (ia < a.den_.size() || ib < b.den_.size()) {
            if (ib == b.den_.size() || (ia < a.den_.size() && a.den_[ia].first < b.den_[ib].first)) {
                lcm.push_back(a.den_[ia++]);
            } else if (ia == a.den_.size() || b.den_[ib].first < a.den_[ia].first) {
                lcm.push_back(b.den_[ib++]);
            } else {
                lcm.push_back({a.den_[ia].first, std::max(a.den_[ia].second, b.den_[ib].second)});
                ++ia;
                ++ib;
            }
        }
        auto lift = [&](const XRat &x) {
            XPoly n = x.num_;
            for (const auto &[f, p] : lcm) {
                int have = 0;
                for (const auto &[g, pg] : x.den_) {
                    if (g == f) {
                        have = pg;
                    }
                }
                for (int k = have; k < p; ++k) {
                    n = n.times_linear(f.i, f.j, f.shift);
                }
            }
            return n;
        };
        out.num_ = subtract ? lift(a) - lift(b) : lift(a) + lift(b);
        out.den_ = std::move(lcm);
        out.reduce();
        return out;
    }

    XPoly num_;
    Den den_;
};

} // namespace qq
