#pragma once

// Normal-ordered noncommutative polynomials in M_n, A^{+-1}, Delta^{+-1}
// over Z[q, q^-1], and the rewriting that brings products to normal order.
//
// Rewrite rules (letters move toward "M indices ascending, then A, then
// Delta"):
//   M_{a+1} M_a -> q^-1 M_a M_{a+1}
//   M_b M_a     -> q^-1 (M_a M_b + M_{b-1} M_{a+1} - q M_{a+1} M_{b-1}),  b >= a+2
//   A M_n       -> q^-1 M_n A
//   Delta M_n   -> q^n M_n Delta
//   Delta A     -> q^{r+1} A Delta      (needs the rank r)

#include <algorithm>
#include <compare>
#include <cstdint>
#include <limits>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "qq/errors.hpp"
#include "qq/qlaurent.hpp"

namespace qq {

using Rank = std::optional<int>;

/// M_{m[0]} ... M_{m[k-1]} A^a Delta^d with m weakly increasing.
struct NCWord {
    std::vector<int> m;
    int a = 0;
    int d = 0;

    int grade() const { return std::accumulate(m.begin(), m.end(), 0); }
    auto operator<=>(const NCWord &) const = default;
};

namespace detail {

using Word = std::vector<int>;
using WordTerms = std::vector<std::pair<Word, QLaurent>>;

struct WordHash {
    std::size_t operator()(const Word &w) const noexcept {
        std::size_t h = w.size();
        for (int v : w) {
            h ^= static_cast<std::size_t>(v) + 0x9e3779b97f4a7c15ULL + (h << 6U) + (h >> 2U);
        }
        return h;
    }
};

/// Normal form of M_b M_a for b - a = gap >= 0, as pairs (j, c) meaning
/// c * M_{a+j} M_{b-j} with a + j <= b - j.
inline const std::vector<std::pair<int, QLaurent>> &swap_table(int gap) {
    thread_local std::vector<std::vector<std::pair<int, QLaurent>>> table;
    while (static_cast<int>(table.size()) <= gap) {
        const int g = static_cast<int>(table.size());
        std::vector<std::pair<int, QLaurent>> row;
        if (g == 0) {
            row.emplace_back(0, QLaurent(1));
        } else if (g == 1) {
            row.emplace_back(0, QLaurent::q(-1));
        } else {
            std::map<int, QLaurent> acc;
            acc[0] += QLaurent::q(-1);
            acc[1] += QLaurent(-1);
            for (const auto &[j, c] : table[static_cast<std::size_t>(g - 2)]) {
                acc[j + 1] += c.shifted(-1);
            }
            for (auto &[j, c] : acc) {
                if (!c.is_zero()) {
                    row.emplace_back(j, std::move(c));
                }
            }
        }
        table.push_back(std::move(row));
    }
    return table[static_cast<std::size_t>(gap)];
}

class MWordReducer {
  public:
    /// Calls f(word, coeff) for each term of the normal form of w * M_k, w
    /// weakly increasing. The word reference is only valid during the call.
    template <typename F> void insert_each(const Word &w, int k, F &&f) {
        if (w.empty() || w.back() <= k) {
            Word out = w;
            out.push_back(k);
            f(out, QLaurent(1));
            return;
        }
        const int s = std::min(w.front(), k);
        Word key(w.size() + 1);
        for (std::size_t i = 0; i < w.size(); ++i) {
            key[i] = w[i] - s;
        }
        key.back() = k - s;
        const auto base = lookup(key);
        Word shifted(key.size());
        for (const auto &[word, c] : *base) {
            for (std::size_t i = 0; i < word.size(); ++i) {
                shifted[i] = word[i] + s;
            }
            f(shifted, c);
        }
    }

    WordTerms insert(const Word &w, int k) {
        WordTerms out;
        insert_each(w, k, [&](const Word &v, const QLaurent &c) { out.emplace_back(v, c); });
        return out;
    }

    /// Normal form of an arbitrary M-word.
    WordTerms normal_form(const Word &letters) {
        std::map<Word, QLaurent> cur{{Word{}, QLaurent(1)}};
        for (int k : letters) {
            cur = right_multiply(cur, k);
        }
        return to_terms(cur);
    }

    /// Normal form of u * v for normal words u, v. Results are memoized up
    /// to a common translation of u and v.
    std::shared_ptr<const WordTerms> product_shared(const Word &u, const Word &v, int &shift) {
        if (u.empty() || v.empty() || u.back() <= v.front()) {
            Word w = u;
            w.insert(w.end(), v.begin(), v.end());
            shift = 0;
            return std::make_shared<const WordTerms>(WordTerms{{std::move(w), QLaurent(1)}});
        }
        shift = std::min(u.front(), v.front());
        Word key;
        key.reserve(u.size() + v.size() + 1);
        for (int x : u) {
            key.push_back(x - shift);
        }
        key.push_back(kSeparator);
        for (int x : v) {
            key.push_back(x - shift);
        }
        if (auto it = products_.find(key); it != products_.end()) {
            return it->second;
        }
        Word u0(u.size());
        Word v0(v.size());
        for (std::size_t i = 0; i < u.size(); ++i) {
            u0[i] = u[i] - shift;
        }
        for (std::size_t i = 0; i < v.size(); ++i) {
            v0[i] = v[i] - shift;
        }
        std::map<Word, QLaurent> cur{{u0, QLaurent(1)}};
        for (int k : v0) {
            cur = right_multiply(cur, k);
        }
        auto value = std::make_shared<const WordTerms>(to_terms(cur));
        products_.emplace(std::move(key), value);
        return value;
    }

    WordTerms product(const Word &u, const Word &v) {
        int s = 0;
        auto base = product_shared(u, v, s);
        WordTerms out = *base;
        if (s != 0) {
            for (auto &[w, c] : out) {
                for (int &x : w) {
                    x += s;
                }
            }
        }
        return out;
    }

    std::size_t cache_size() const { return cache_.size() + products_.size(); }
    void clear() {
        cache_.clear();
        products_.clear();
    }

    static MWordReducer &local() {
        thread_local MWordReducer reducer;
        return reducer;
    }

  private:
    static constexpr int kSeparator = std::numeric_limits<int>::min();

    std::map<Word, QLaurent> right_multiply(const std::map<Word, QLaurent> &cur, int k) {
        std::map<Word, QLaurent> next;
        for (const auto &[w, c] : cur) {
            insert_each(w, k, [&](const Word &v, const QLaurent &c2) {
                auto it = next.find(v);
                if (it == next.end()) {
                    next.emplace(v, c * c2);
                } else {
                    it->second += c * c2;
                }
            });
        }
        std::erase_if(next, [](const auto &kv) { return kv.second.is_zero(); });
        return next;
    }

    static WordTerms to_terms(std::map<Word, QLaurent> &m) {
        WordTerms out;
        out.reserve(m.size());
        for (auto &[w, c] : m) {
            if (!c.is_zero()) {
                out.emplace_back(w, std::move(c));
            }
        }
        return out;
    }

    std::shared_ptr<const WordTerms> lookup(const Word &key) {
        if (auto it = cache_.find(key); it != cache_.end()) {
            return it->second;
        }
        auto value = std::make_shared<const WordTerms>(compute(key));
        cache_.emplace(key, value);
        return value;
    }

    // key = w ++ [k] with w.back() > k
    WordTerms compute(const Word &key) {
        const int k = key.back();
        const int b = key[key.size() - 2];
        const Word prefix(key.begin(), key.end() - 2);
        std::map<Word, QLaurent> acc;
        for (const auto &[j, c] : swap_table(b - k)) {
            const int x = k + j;
            const int y = b - j;
            for (const auto &[u, c1] : insert(prefix, x)) {
                const QLaurent cc = c * c1;
                insert_each(u, y, [&](const Word &v, const QLaurent &c2) { acc[v] += cc * c2; });
            }
        }
        return to_terms(acc);
    }

    std::unordered_map<Word, std::shared_ptr<const WordTerms>, WordHash> cache_;
    std::unordered_map<Word, std::shared_ptr<const WordTerms>, WordHash> products_;
};

} // namespace detail

/// Canonical element of the algebra: a map from normal words to nonzero
/// coefficients.
class NCPoly {
  public:
    using Map = std::map<NCWord, QLaurent>;

    NCPoly() = default;

    static NCPoly scalar(const QLaurent &c) { return word(NCWord{}, c); }
    static NCPoly word(NCWord w, const QLaurent &c = 1) {
        NCPoly out;
        out.add_term(std::move(w), c);
        return out;
    }
    /// A single generator M_n.
    static NCPoly M(int n) { return word(NCWord{{n}, 0, 0}); }
    static NCPoly A(int power = 1) { return word(NCWord{{}, power, 0}); }
    static NCPoly Delta(int power = 1) { return word(NCWord{{}, 0, power}); }

    bool is_zero() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }
    const Map &terms() const { return terms_; }

    QLaurent coeff(const NCWord &w) const {
        auto it = terms_.find(w);
        return it == terms_.end() ? QLaurent{} : it->second;
    }

    /// Adds c * w; w.m must already be weakly increasing.
    void add_term(NCWord w, const QLaurent &c) {
        if (c.is_zero()) {
            return;
        }
        auto [it, inserted] = terms_.try_emplace(std::move(w), c);
        if (!inserted) {
            it->second += c;
            if (it->second.is_zero()) {
                terms_.erase(it);
            }
        }
    }

    NCPoly operator-() const { return scaled(-1); }
    NCPoly &operator+=(const NCPoly &o) {
        for (const auto &[w, c] : o.terms_) {
            add_term(w, c);
        }
        return *this;
    }
    NCPoly &operator-=(const NCPoly &o) {
        for (const auto &[w, c] : o.terms_) {
            add_term(w, -c);
        }
        return *this;
    }
    friend NCPoly operator+(NCPoly a, const NCPoly &b) { return a += b; }
    friend NCPoly operator-(NCPoly a, const NCPoly &b) { return a -= b; }

    NCPoly scaled(const QLaurent &c) const {
        NCPoly out;
        if (c.is_zero()) {
            return out;
        }
        for (const auto &[w, cw] : terms_) {
            out.terms_.emplace_hint(out.terms_.end(), w, cw * c);
        }
        return out;
    }

    /// Shift every M index by s. The rewrite rules only see index
    /// differences, so this maps normal forms to normal forms.
    NCPoly translated(int s) const {
        NCPoly out;
        for (const auto &[w, c] : terms_) {
            NCWord v = w;
            for (int &i : v.m) {
                i += s;
            }
            out.terms_.emplace_hint(out.terms_.end(), std::move(v), c);
        }
        return out;
    }

    friend bool operator==(const NCPoly &a, const NCPoly &b) { return a.terms_ == b.terms_; }
    friend bool operator!=(const NCPoly &a, const NCPoly &b) { return !(a == b); }

    /// Text form "<coeff> * M[n1] M[n2] ... A^a D^d" joined by +/-.
    std::string to_string() const;

  private:
    Map terms_;
};

inline std::string word_to_string(const NCWord &w) {
    std::ostringstream os;
    bool first = true;
    auto sep = [&] {
        if (!first) {
            os << ' ';
        }
        first = false;
    };
    for (int n : w.m) {
        sep();
        os << "M[" << n << ']';
    }
    if (w.a != 0) {
        sep();
        os << "A^" << w.a;
    }
    if (w.d != 0) {
        sep();
        os << "D^" << w.d;
    }
    if (first) {
        os << '1';
    }
    return os.str();
}

/// Shared term formatting for the NCPoly / formal-expression text grammar.
inline void append_term(std::ostringstream &os, bool first, const QLaurent &c,
                        const std::string &word, bool is_unit_word) {
    const bool neg = c.is_monomial() && c.coeff(c.low()) < 0;
    const QLaurent mag = neg ? -c : c;
    if (first) {
        if (neg) {
            os << '-';
        }
    } else {
        os << (neg ? " - " : " + ");
    }
    if (is_unit_word) {
        os << (mag.is_monomial() ? mag.to_string() : "(" + mag.to_string() + ")");
        return;
    }
    if (!mag.is_one()) {
        if (mag.is_monomial()) {
            os << mag.to_string() << " * ";
        } else {
            os << '(' << mag.to_string() << ") * ";
        }
    }
    os << word;
}

inline std::string NCPoly::to_string() const {
    if (terms_.empty()) {
        return "0";
    }
    std::ostringstream os;
    bool first = true;
    for (const auto &[w, c] : terms_) {
        const bool unit = w.m.empty() && w.a == 0 && w.d == 0;
        append_term(os, first, c, word_to_string(w), unit);
        first = false;
    }
    return os.str();
}

inline std::ostream &operator<<(std::ostream &os, const NCPoly &p) { return os << p.to_string(); }

// ---------------------------------------------------------------------------
// Formal (unreduced) expressions

struct Letter {
    enum class Kind : std::uint8_t { M, A, Delta };
    Kind kind = Kind::M;
    int value = 0; // index for M, exponent for A / Delta

    static Letter M(int n) { return {Kind::M, n}; }
    static Letter A(int k = 1) { return {Kind::A, k}; }
    static Letter Delta(int k = 1) { return {Kind::Delta, k}; }
    auto operator<=>(const Letter &) const = default;
};

struct FormalTerm {
    QLaurent coeff;
    std::vector<Letter> letters;
};

/// A finite sum of coefficient-weighted words in the generators, in any
/// order. Nothing is reduced; normal_form() does that.
class NCExpr {
  public:
    NCExpr() = default;
    static NCExpr letter(Letter l) { return word({l}); }
    static NCExpr M(int n) { return letter(Letter::M(n)); }
    static NCExpr A(int k = 1) { return letter(Letter::A(k)); }
    static NCExpr Delta(int k = 1) { return letter(Letter::Delta(k)); }
    static NCExpr scalar(const QLaurent &c) { return word({}, c); }
    static NCExpr word(std::vector<Letter> letters, const QLaurent &c = 1) {
        NCExpr out;
        if (!c.is_zero()) {
            out.terms_.push_back({c, std::move(letters)});
        }
        return out;
    }
    static NCExpr m_word(const std::vector<int> &indices, const QLaurent &c = 1) {
        std::vector<Letter> ls;
        ls.reserve(indices.size());
        for (int n : indices) {
            ls.push_back(Letter::M(n));
        }
        return word(std::move(ls), c);
    }
    /// The formal word spelled by a normal word.
    static NCExpr from_word(const NCWord &w, const QLaurent &c = 1) {
        std::vector<Letter> ls;
        for (int n : w.m) {
            ls.push_back(Letter::M(n));
        }
        if (w.a != 0) {
            ls.push_back(Letter::A(w.a));
        }
        if (w.d != 0) {
            ls.push_back(Letter::Delta(w.d));
        }
        return word(std::move(ls), c);
    }
    static NCExpr from_poly(const NCPoly &p) {
        NCExpr out;
        for (const auto &[w, c] : p.terms()) {
            out += from_word(w, c);
        }
        return out;
    }

    const std::vector<FormalTerm> &terms() const { return terms_; }
    bool empty() const { return terms_.empty(); }

    NCExpr &operator+=(const NCExpr &o) {
        terms_.insert(terms_.end(), o.terms_.begin(), o.terms_.end());
        return *this;
    }
    NCExpr &operator-=(const NCExpr &o) { return *this += o.scaled(-1); }
    friend NCExpr operator+(NCExpr a, const NCExpr &b) { return a += b; }
    friend NCExpr operator-(NCExpr a, const NCExpr &b) { return a -= b; }
    NCExpr operator-() const { return scaled(-1); }

    NCExpr scaled(const QLaurent &c) const {
        NCExpr out;
        if (c.is_zero()) {
            return out;
        }
        for (const auto &t : terms_) {
            out.terms_.push_back({t.coeff * c, t.letters});
        }
        return out;
    }

    friend NCExpr operator*(const NCExpr &a, const NCExpr &b) {
        NCExpr out;
        for (const auto &ta : a.terms_) {
            for (const auto &tb : b.terms_) {
                FormalTerm t{ta.coeff * tb.coeff, ta.letters};
                t.letters.insert(t.letters.end(), tb.letters.begin(), tb.letters.end());
                out.terms_.push_back(std::move(t));
            }
        }
        return out;
    }

    /// Same words and coefficients after merging duplicates, order-insensitive.
    /// This is comparison of formal expansions, not algebra equality.
    std::map<std::vector<Letter>, QLaurent> collected() const {
        std::map<std::vector<Letter>, QLaurent> out;
        for (const auto &t : terms_) {
            out[t.letters] += t.coeff;
        }
        std::erase_if(out, [](const auto &kv) { return kv.second.is_zero(); });
        return out;
    }

    std::string to_string() const {
        const auto col = collected();
        if (col.empty()) {
            return "0";
        }
        std::ostringstream os;
        bool first = true;
        for (const auto &[ls, c] : col) {
            std::ostringstream w;
            for (std::size_t i = 0; i < ls.size(); ++i) {
                if (i > 0) {
                    w << ' ';
                }
                switch (ls[i].kind) {
                case Letter::Kind::M:
                    w << "M[" << ls[i].value << ']';
                    break;
                case Letter::Kind::A:
                    w << "A^" << ls[i].value;
                    break;
                case Letter::Kind::Delta:
                    w << "D^" << ls[i].value;
                    break;
                }
            }
            append_term(os, first, c, w.str(), ls.empty());
            first = false;
        }
        return os.str();
    }

  private:
    std::vector<FormalTerm> terms_;
};

// ---------------------------------------------------------------------------
// Normal ordering

namespace detail {

inline QLaurent delta_a_twist(int d, int e, const Rank &rank) {
    if (d == 0 || e == 0) {
        return 1;
    }
    if (!rank) {
        throw RankRequired("reordering Delta^" + std::to_string(d) + " past A^" +
                           std::to_string(e));
    }
    return QLaurent::q((*rank + 1) * d * e);
}

/// p * (single letter), p canonical.
inline NCPoly right_multiply(const NCPoly &p, const Letter &l, const Rank &rank) {
    NCPoly out;
    auto &reducer = MWordReducer::local();
    for (const auto &[w, c] : p.terms()) {
        switch (l.kind) {
        case Letter::Kind::M: {
            // M-word A^a Delta^d M_k = q^{d k - a} (M-word M_k) A^a Delta^d
            const QLaurent cc = c.shifted(w.d * l.value - w.a);
            for (auto &[v, cv] : reducer.insert(w.m, l.value)) {
                out.add_term(NCWord{std::move(v), w.a, w.d}, cc * cv);
            }
            break;
        }
        case Letter::Kind::A:
            out.add_term(NCWord{w.m, w.a + l.value, w.d}, c * delta_a_twist(w.d, l.value, rank));
            break;
        case Letter::Kind::Delta:
            out.add_term(NCWord{w.m, w.a, w.d + l.value}, c);
            break;
        }
    }
    return out;
}

} // namespace detail

/// Canonical normal form of a formal expression.
inline NCPoly normal_form(const NCExpr &e, const Rank &rank = std::nullopt) {
    NCPoly out;
    for (const auto &t : e.terms()) {
        NCPoly cur = NCPoly::scalar(t.coeff);
        for (const auto &l : t.letters) {
            cur = detail::right_multiply(cur, l, rank);
        }
        out += cur;
    }
    return out;
}

/// Normal form of a plain M-word M_{idx[0]} ... M_{idx[k-1]} (any order).
inline NCPoly normal_form_mword(const std::vector<int> &indices, const QLaurent &c = 1) {
    NCPoly out;
    for (auto &[w, cw] : detail::MWordReducer::local().normal_form(indices)) {
        out.add_term(NCWord{std::move(w), 0, 0}, cw * c);
    }
    return out;
}

/// Product in the algebra, returned in normal form.
inline NCPoly nc_mul(const NCPoly &a, const NCPoly &b, const Rank &rank = std::nullopt) {
    NCPoly out;
    auto &reducer = detail::MWordReducer::local();
    // Group right factors by their M-part so each M-product is formed once.
    std::map<std::vector<int>, std::vector<std::pair<const NCWord *, const QLaurent *>>> right;
    for (const auto &[w, c] : b.terms()) {
        right[w.m].emplace_back(&w, &c);
    }
    for (const auto &[w1, c1] : a.terms()) {
        for (const auto &[m2, entries] : right) {
            const int len2 = static_cast<int>(m2.size());
            const int grade2 = std::accumulate(m2.begin(), m2.end(), 0);
            int shift = 0;
            const auto prod = reducer.product_shared(w1.m, m2, shift);
            for (const auto &[w2, c2] : entries) {
                // A^{a1} Delta^{d1} (M-word2) A^{a2} Delta^{d2}
                QLaurent cc = (c1 * *c2).shifted(w1.d * grade2 - w1.a * len2);
                cc *= detail::delta_a_twist(w1.d, w2->a, rank);
                for (const auto &[v, cv] : *prod) {
                    std::vector<int> m = v;
                    for (int &x : m) {
                        x += shift;
                    }
                    out.add_term(NCWord{std::move(m), w1.a + w2->a, w1.d + w2->d}, cc * cv);
                }
            }
        }
    }
    return out;
}

inline NCPoly operator*(const NCPoly &a, const NCPoly &b) { return nc_mul(a, b); }

/// normal_form(a b - q^k b a)
inline NCPoly q_comm(const NCPoly &a, const NCPoly &b, int k, const Rank &rank = std::nullopt) {
    return nc_mul(a, b, rank) - nc_mul(b, a, rank).scaled(QLaurent::q(k));
}

/// Plain commutator ab - ba.
inline NCPoly commutator(const NCPoly &a, const NCPoly &b, const Rank &rank = std::nullopt) {
    return q_comm(a, b, 0, rank);
}

inline NCPoly power(const NCPoly &p, unsigned k, const Rank &rank = std::nullopt) {
    NCPoly out = NCPoly::scalar(1);
    for (unsigned i = 0; i < k; ++i) {
        out = nc_mul(out, p, rank);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Time reversal: anti-automorphism with M_n -> q^-n M_-n, A -> A^-1,
// Delta -> Delta.

/// tau on a formal expression; letters are reversed, nothing is reduced.
inline NCExpr tau_formal(const NCExpr &e) {
    NCExpr out;
    for (const auto &t : e.terms()) {
        std::vector<Letter> ls;
        ls.reserve(t.letters.size());
        int qpow = 0;
        for (auto it = t.letters.rbegin(); it != t.letters.rend(); ++it) {
            switch (it->kind) {
            case Letter::Kind::M:
                qpow -= it->value;
                ls.push_back(Letter::M(-it->value));
                break;
            case Letter::Kind::A:
                ls.push_back(Letter::A(-it->value));
                break;
            case Letter::Kind::Delta:
                ls.push_back(*it);
                break;
            }
        }
        out += NCExpr::word(std::move(ls), t.coeff.shifted(qpow));
    }
    return out;
}

/// tau on a canonical polynomial. The image of a normal word is
/// Delta^d A^-a q^{-grade} M_{-n_k} ... M_{-n_1}, whose M-part is again
/// ascending, so only q-powers from reordering Delta, A and the M's appear.
inline NCPoly apply_tau(const NCPoly &p, const Rank &rank = std::nullopt) {
    NCPoly out;
    for (const auto &[w, c] : p.terms()) {
        NCWord v;
        v.m.reserve(w.m.size());
        for (auto it = w.m.rbegin(); it != w.m.rend(); ++it) {
            v.m.push_back(-*it);
        }
        v.a = -w.a;
        v.d = w.d;
        const int g = w.grade();
        const int len = static_cast<int>(w.m.size());
        // Delta^d A^-a (M-word) = q^{-(r+1) a d} A^-a Delta^d (M-word)
        //                       = q^{-(r+1) a d} q^{-d g} q^{a len} (M-word) A^-a Delta^d
        QLaurent cc = c.shifted(-g - w.d * g + w.a * len);
        cc *= detail::delta_a_twist(w.d, -w.a, rank);
        out.add_term(std::move(v), cc);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Confluence probing: single-step letter rewriting under different redex
// selection strategies.

enum class Strategy { Leftmost, Rightmost, Random };

namespace detail {

using LetterWord = std::vector<Letter>;

/// Rewrites for the adjacent pair (x, y), or empty when (x, y) is not a redex.
inline std::vector<std::pair<QLaurent, LetterWord>> pair_rewrite(const Letter &x, const Letter &y,
                                                                 const Rank &rank) {
    using K = Letter::Kind;
    std::vector<std::pair<QLaurent, LetterWord>> out;
    if (x.kind == K::M && y.kind == K::M && x.value > y.value) {
        const int b = x.value;
        const int a = y.value;
        if (b == a + 1) {
            out.push_back({QLaurent::q(-1), {Letter::M(a), Letter::M(b)}});
        } else {
            out.push_back({QLaurent::q(-1), {Letter::M(a), Letter::M(b)}});
            out.push_back({QLaurent::q(-1), {Letter::M(b - 1), Letter::M(a + 1)}});
            out.push_back({QLaurent(-1), {Letter::M(a + 1), Letter::M(b - 1)}});
        }
    } else if (x.kind == K::A && y.kind == K::M) {
        out.push_back({QLaurent::q(-x.value), {y, x}});
    } else if (x.kind == K::Delta && y.kind == K::M) {
        out.push_back({QLaurent::q(x.value * y.value), {y, x}});
    } else if (x.kind == K::Delta && y.kind == K::A) {
        out.push_back({delta_a_twist(x.value, y.value, rank), {y, x}});
    } else if ((x.kind == K::A || x.kind == K::Delta) && y.kind == x.kind &&
               ((x.value > 0) != (y.value > 0))) {
        const int sum = x.value + y.value;
        if (sum == 0) {
            out.push_back({QLaurent(1), {}});
        } else {
            out.push_back({QLaurent(1), {Letter{x.kind, sum}}});
        }
    }
    return out;
}

inline std::vector<std::size_t> redexes(const LetterWord &w, const Rank &rank) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i + 1 < w.size(); ++i) {
        if (!pair_rewrite(w[i], w[i + 1], rank).empty()) {
            out.push_back(i);
        }
    }
    return out;
}

inline void rewrite_at(std::map<LetterWord, QLaurent> &state, const LetterWord &w,
                       const QLaurent &c, std::size_t pos, const Rank &rank) {
    for (auto &[cr, rhs] : pair_rewrite(w[pos], w[pos + 1], rank)) {
        LetterWord v(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(pos));
        v.insert(v.end(), rhs.begin(), rhs.end());
        v.insert(v.end(), w.begin() + static_cast<std::ptrdiff_t>(pos + 2), w.end());
        auto &slot = state[v];
        slot += c * cr;
        if (slot.is_zero()) {
            state.erase(v);
        }
    }
}

/// Irreducible letter word -> normal word.
inline NCWord irreducible_to_word(const LetterWord &w) {
    NCWord out;
    for (const auto &l : w) {
        switch (l.kind) {
        case Letter::Kind::M:
            out.m.push_back(l.value);
            break;
        case Letter::Kind::A:
            out.a += l.value;
            break;
        case Letter::Kind::Delta:
            out.d += l.value;
            break;
        }
    }
    return out;
}

} // namespace detail

/// Fully rewrites a formal expression one redex at a time, choosing the
/// redex by the given strategy.
inline NCPoly rewrite_with_strategy(const NCExpr &e, Strategy strategy, std::uint64_t seed,
                                    const Rank &rank = std::nullopt) {
    using detail::LetterWord;
    std::mt19937_64 rng(seed);
    std::map<LetterWord, QLaurent> state;
    NCPoly done;
    for (const auto &t : e.terms()) {
        auto &slot = state[t.letters];
        slot += t.coeff;
    }
    std::erase_if(state, [](const auto &kv) { return kv.second.is_zero(); });
    while (true) {
        // move irreducible words out of the work set
        for (auto it = state.begin(); it != state.end();) {
            if (detail::redexes(it->first, rank).empty()) {
                done.add_term(detail::irreducible_to_word(it->first), it->second);
                it = state.erase(it);
            } else {
                ++it;
            }
        }
        if (state.empty()) {
            break;
        }
        auto it = state.begin();
        if (strategy == Strategy::Rightmost) {
            it = std::prev(state.end());
        } else if (strategy == Strategy::Random) {
            std::uniform_int_distribution<std::size_t> pick(0, state.size() - 1);
            std::advance(it, static_cast<std::ptrdiff_t>(pick(rng)));
        }
        const LetterWord w = it->first;
        const QLaurent c = it->second;
        state.erase(it);
        const auto pos = detail::redexes(w, rank);
        std::size_t chosen = pos.front();
        if (strategy == Strategy::Rightmost) {
            chosen = pos.back();
        } else if (strategy == Strategy::Random) {
            std::uniform_int_distribution<std::size_t> pick(0, pos.size() - 1);
            chosen = pos[pick(rng)];
        }
        detail::rewrite_at(state, w, c, chosen, rank);
    }
    return done;
}

struct ConfluenceOutcome {
    bool confluent = true;
    NCPoly reference;            // normal_form() of the input
    std::vector<NCPoly> results; // one per tested reduction order
    std::string witness;         // description of the first disagreement
};

/// Reduces the word under: every possible first rewrite step followed by
/// normal ordering, leftmost-first, rightmost-first, and (strategies - 2)
/// seeded random orders. Confluent iff all results agree.
inline ConfluenceOutcome confluence_check(const std::vector<Letter> &w, int strategies,
                                          std::uint64_t seed, const Rank &rank = std::nullopt) {
    ConfluenceOutcome out;
    const NCExpr e = NCExpr::word(w);
    out.reference = normal_form(e, rank);
    auto record = [&](NCPoly p, const std::string &label) {
        if (out.confluent && p != out.reference) {
            out.confluent = false;
            out.witness = label + ": " + p.to_string() + " vs " + out.reference.to_string();
        }
        out.results.push_back(std::move(p));
    };
    for (std::size_t pos : detail::redexes(w, rank)) {
        std::map<detail::LetterWord, QLaurent> one;
        detail::rewrite_at(one, w, 1, pos, rank);
        NCExpr step;
        for (const auto &[v, c] : one) {
            step += NCExpr::word(v, c);
        }
        record(normal_form(step, rank), "first step at " + std::to_string(pos));
    }
    for (int s = 0; s < strategies; ++s) {
        const Strategy st = s == 0 ? Strategy::Leftmost
                            : s == 1 ? Strategy::Rightmost
                                     : Strategy::Random;
        record(rewrite_with_strategy(e, st, seed + static_cast<std::uint64_t>(s), rank),
               "strategy " + std::to_string(s));
    }
    return out;
}

inline bool confluence_probe(const std::vector<Letter> &w, int strategies, std::uint64_t seed = 0,
                             const Rank &rank = std::nullopt) {
    return confluence_check(w, strategies, seed, rank).confluent;
}

} // namespace qq
