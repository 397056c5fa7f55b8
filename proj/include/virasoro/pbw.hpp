#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "virasoro/errors.hpp"
#include "virasoro/lie_core.hpp"
#include "virasoro/order.hpp"

namespace virasoro {

/* Basis monomial of the enveloping algebra: a run-length encoded word of
 * indexed generators times a power of the central element. The word is
 * rank-increasing under the order of the element that owns the monomial. */
struct PBWMonomial {
    std::vector<std::pair<std::int64_t, std::uint32_t>> word;  // (index, multiplicity)
    std::uint32_t central_exp = 0;

    static PBWMonomial one() { return {}; }

    bool is_scalar() const { return word.empty() && central_exp == 0; }

    std::int64_t degree() const {
        std::int64_t d = 0;
        for (const auto& [i, e] : word) d += i * std::int64_t(e);
        return d;
    }

    std::uint32_t length() const {
        std::uint32_t n = 0;
        for (const auto& [i, e] : word) n += e;
        return n;
    }

    bool contains_index(std::int64_t g) const {
        for (const auto& [i, e] : word)
            if (i == g) return true;
        return false;
    }

    std::vector<std::int64_t> letters() const {
        std::vector<std::int64_t> out;
        out.reserve(length());
        for (const auto& [i, e] : word)
            for (std::uint32_t k = 0; k < e; ++k) out.push_back(i);
        return out;
    }

    // deterministic map-key order; display order is separate (see display_less)
    friend auto operator<=>(const PBWMonomial&, const PBWMonomial&) = default;
};

// one summand of an unordered input: a plain word with a scalar in front
struct RawWord {
    std::vector<std::int64_t> letters;
    std::uint32_t central_exp = 0;
    Rational coeff = Rational(1);
};

class UEAElement {
public:
    explicit UEAElement(OrderSpec order) : order_(std::move(order)) {}

    static UEAElement zero(OrderSpec order) { return UEAElement(std::move(order)); }
    static UEAElement scalar(const Rational& value, OrderSpec order) {
        UEAElement u(std::move(order));
        u.add_term(PBWMonomial::one(), value);
        return u;
    }
    static UEAElement one(OrderSpec order) { return scalar(Rational(1), std::move(order)); }
    static UEAElement generator(std::int64_t i, OrderSpec order) {
        UEAElement u(std::move(order));
        u.add_term(PBWMonomial{{{i, 1}}, 0}, Rational(1));
        return u;
    }
    static UEAElement central(OrderSpec order) {
        UEAElement u(std::move(order));
        u.add_term(PBWMonomial{{}, 1}, Rational(1));
        return u;
    }

    const OrderSpec& order() const { return order_; }
    const std::map<PBWMonomial, Rational>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t term_count() const { return terms_.size(); }

    Rational coeff(const PBWMonomial& m) const {
        auto it = terms_.find(m);
        return it == terms_.end() ? Rational(0) : it->second;
    }

    void add_term(PBWMonomial m, const Rational& coefficient) {
        if (coefficient == 0) return;
        auto [it, inserted] = terms_.try_emplace(std::move(m), coefficient);
        if (!inserted) {
            it->second += coefficient;
            if (it->second == 0) terms_.erase(it);
        }
    }

    UEAElement& operator+=(const UEAElement& other) {
        require_same_order(other);
        for (const auto& [m, co] : other.terms_) add_term(m, co);
        return *this;
    }
    UEAElement& operator-=(const UEAElement& other) {
        require_same_order(other);
        for (const auto& [m, co] : other.terms_) add_term(m, -co);
        return *this;
    }
    UEAElement& operator*=(const Rational& s) {
        if (s == 0) {
            terms_.clear();
            return *this;
        }
        for (auto& [m, co] : terms_) co *= s;
        return *this;
    }

    friend UEAElement operator+(UEAElement a, const UEAElement& b) { return a += b; }
    friend UEAElement operator-(UEAElement a, const UEAElement& b) { return a -= b; }
    friend UEAElement operator*(const Rational& s, UEAElement a) { return a *= s; }
    friend UEAElement operator-(UEAElement a) { return a *= Rational(-1); }

    // equal = same order and identical term maps
    friend bool operator==(const UEAElement& a, const UEAElement& b) {
        return a.order_ == b.order_ && a.terms_ == b.terms_;
    }

private:
    void require_same_order(const UEAElement& other) const {
        if (order_ != other.order_)
            throw std::invalid_argument("mixed orders: '" + order_.name + "' vs '" +
                                        other.order_.name + "'");
    }

    OrderSpec order_;
    std::map<PBWMonomial, Rational> terms_;  // zero coefficients never stored
};

namespace detail {

// collapse a normal (rank-sorted) letter sequence into run-length form
inline PBWMonomial rle_word(const std::vector<std::int64_t>& letters, std::uint32_t central_exp) {
    PBWMonomial m;
    m.central_exp = central_exp;
    for (std::int64_t x : letters) {
        if (!m.word.empty() && m.word.back().first == x)
            ++m.word.back().second;
        else
            m.word.push_back({x, 1});
    }
    return m;
}

}  // namespace detail

/* Normal ordering by adjacent transposition: the leftmost out-of-order pair
 * e_a e_b is replaced by e_b e_a + [e_a, e_b] until every word is sorted.
 * Each swap strictly lowers the inversion count at fixed length and the
 * bracket terms are strictly shorter, so the rewriting terminates; the
 * confluence battery checks the result is strategy-independent. */
inline void normal_form_into(UEAElement& out, const RawWord& input,
                             const StructureConstants& sc = {}) {
    struct Item {
        std::vector<std::int64_t> w;
        std::uint32_t ce;
        Rational co;
    };
    const OrderSpec& ord = out.order();
    std::vector<Item> stack;
    stack.push_back({input.letters, input.central_exp, input.coeff});
    while (!stack.empty()) {
        Item item = std::move(stack.back());
        stack.pop_back();
        if (item.co == 0) continue;
        std::size_t pos = item.w.size();
        for (std::size_t p = 0; p + 1 < item.w.size(); ++p) {
            if (item.w[p] != item.w[p + 1] && ord.less(item.w[p + 1], item.w[p])) {
                pos = p;
                break;
            }
        }
        if (pos == item.w.size()) {
            out.add_term(detail::rle_word(item.w, item.ce), item.co);
            continue;
        }
        const std::int64_t a = item.w[pos], b = item.w[pos + 1];
        LieElement br = sc.bracket_gen(a, b);
        for (const auto& [g, bc] : br.terms()) {
            Item t;
            t.co = item.co * bc;
            t.ce = item.ce;
            t.w.reserve(item.w.size() - 1);
            t.w.assign(item.w.begin(), item.w.begin() + std::ptrdiff_t(pos));
            if (g.is_central())
                ++t.ce;
            else
                t.w.push_back(g.index());
            t.w.insert(t.w.end(), item.w.begin() + std::ptrdiff_t(pos) + 2, item.w.end());
            stack.push_back(std::move(t));
        }
        std::swap(item.w[pos], item.w[pos + 1]);
        stack.push_back(std::move(item));
    }
}

inline UEAElement normal_form(const RawWord& word, const OrderSpec& order,
                              const StructureConstants& sc = {}) {
    UEAElement out(order);
    normal_form_into(out, word, sc);
    return out;
}

inline UEAElement normal_form(std::span<const std::int64_t> letters, const OrderSpec& order,
                              const StructureConstants& sc = {}) {
    return normal_form(RawWord{{letters.begin(), letters.end()}, 0, Rational(1)}, order, sc);
}

inline UEAElement normal_form(std::initializer_list<std::int64_t> letters, const OrderSpec& order,
                              const StructureConstants& sc = {}) {
    return normal_form(RawWord{std::vector<std::int64_t>(letters), 0, Rational(1)}, order, sc);
}

inline UEAElement normal_form(const std::vector<RawWord>& words, const OrderSpec& order,
                              const StructureConstants& sc = {}) {
    UEAElement out(order);
    for (const RawWord& w : words) normal_form_into(out, w, sc);
    return out;
}

// rewrite u in the target order; identity when target equals u's order
inline UEAElement change_order(const UEAElement& u, const OrderSpec& target,
                               const StructureConstants& sc = {}) {
    UEAElement out(target);
    for (const auto& [m, co] : u.terms())
        normal_form_into(out, RawWord{m.letters(), m.central_exp, co}, sc);
    return out;
}

inline UEAElement multiply(const UEAElement& u, const UEAElement& v, const OrderSpec& target,
                           const StructureConstants& sc = {}) {
    UEAElement out(target);
    for (const auto& [mu, cu] : u.terms()) {
        std::vector<std::int64_t> base = mu.letters();
        for (const auto& [mv, cv] : v.terms()) {
            RawWord w;
            w.letters = base;
            std::vector<std::int64_t> tail = mv.letters();
            w.letters.insert(w.letters.end(), tail.begin(), tail.end());
            w.central_exp = mu.central_exp + mv.central_exp;
            w.coeff = cu * cv;
            normal_form_into(out, w, sc);
        }
    }
    return out;
}

inline UEAElement multiply(const UEAElement& u, const UEAElement& v,
                           const StructureConstants& sc = {}) {
    return multiply(u, v, u.order(), sc);
}

inline UEAElement operator*(const UEAElement& u, const UEAElement& v) { return multiply(u, v); }

/* Coset representative of u modulo the left ideal generated by e_g: in the
 * ann(g) order every monomial of the ideal keeps a factor e_g, so dropping
 * those monomials after reordering is an exact projection. */
inline UEAElement reduce_mod_left_ideal(const UEAElement& u, std::int64_t g,
                                        const StructureConstants& sc = {}) {
    if (g == 0)
        throw std::invalid_argument("reduce_mod_left_ideal: e_0 generates no proper reduction (g = 0 rejected)");
    UEAElement nf = change_order(u, OrderSpec::ann(g), sc);
    UEAElement out(nf.order());
    for (const auto& [m, co] : nf.terms())
        if (!m.contains_index(g)) out.add_term(m, co);
    return out;
}

// split into homogeneous pieces; degree of a word is the sum of its indices
inline std::map<std::int64_t, UEAElement> degree_components(const UEAElement& u) {
    std::map<std::int64_t, UEAElement> out;
    for (const auto& [m, co] : u.terms()) {
        auto [it, inserted] = out.try_emplace(m.degree(), UEAElement::zero(u.order()));
        it->second.add_term(m, co);
    }
    return out;
}

inline bool is_supported_on(const UEAElement& u,
                            const std::function<bool(std::int64_t)>& allowed_index,
                            bool allow_central = false) {
    for (const auto& [m, co] : u.terms()) {
        if (!allow_central && m.central_exp != 0) return false;
        for (const auto& [i, e] : m.word)
            if (!allowed_index(i)) return false;
    }
    return true;
}

// algebra automorphism induced by e_i -> -e_{-i}, c -> -c
inline UEAElement involution_uea(const UEAElement& u, const StructureConstants& sc = {}) {
    UEAElement out(u.order());
    for (const auto& [m, co] : u.terms()) {
        RawWord w;
        w.letters = m.letters();
        for (std::int64_t& x : w.letters) x = -x;
        w.central_exp = m.central_exp;
        w.coeff = ((w.letters.size() + m.central_exp) % 2 == 0) ? co : -co;
        normal_form_into(out, w, sc);
    }
    return out;
}

/* Substitute the trailing Cartan block of every monomial: e_0^a c^b becomes
 * h^a chi^b. Only legal when e_0 never stands left of another generator,
 * i.e. after reduction in an order that promotes e_0. */
inline UEAElement eval_cartan_tail(const UEAElement& u, const Rational& h, const Rational& chi);

// ---------------------------------------------------------------- display --

/* Fixed display key: degree (high first), then the word entry-by-entry with
 * indices in rank order and higher powers first, longer words before their
 * prefixes, then higher central powers. */
inline bool display_less(const PBWMonomial& a, const PBWMonomial& b, const OrderSpec& order) {
    std::int64_t da = a.degree(), db = b.degree();
    if (da != db) return da > db;
    std::size_t n = std::min(a.word.size(), b.word.size());
    for (std::size_t k = 0; k < n; ++k) {
        const auto& [ia, ea] = a.word[k];
        const auto& [ib, eb] = b.word[k];
        if (ia != ib) return order.less(ia, ib);
        if (ea != eb) return ea > eb;
    }
    if (a.word.size() != b.word.size()) return a.word.size() > b.word.size();
    return a.central_exp > b.central_exp;
}

inline std::vector<std::pair<PBWMonomial, Rational>> display_terms(const UEAElement& u) {
    std::vector<std::pair<PBWMonomial, Rational>> out(u.terms().begin(), u.terms().end());
    std::sort(out.begin(), out.end(), [&](const auto& x, const auto& y) {
        return display_less(x.first, y.first, u.order());
    });
    return out;
}

inline std::string format(const PBWMonomial& m) {
    if (m.is_scalar()) return "1";
    std::string out;
    for (const auto& [i, e] : m.word) {
        if (!out.empty()) out += '*';
        out += "e(" + std::to_string(i) + ")";
        if (e > 1) out += "^" + std::to_string(e);
    }
    if (m.central_exp > 0) {
        if (!out.empty()) out += '*';
        out += "c";
        if (m.central_exp > 1) out += "^" + std::to_string(m.central_exp);
    }
    return out;
}

// round-trips through the expression grammar: parse(format(u)) rebuilds u
inline std::string format(const UEAElement& u) {
    if (u.is_zero()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [m, co] : display_terms(u)) {
        Rational mag = co < 0 ? Rational(-co) : co;
        if (first) {
            if (co < 0) out += '-';
            first = false;
        } else {
            out += co < 0 ? " - " : " + ";
        }
        if (m.is_scalar())
            out += rational_str(mag);
        else if (mag == 1)
            out += format(m);
        else
            out += rational_str(mag) + "*" + format(m);
    }
    return out;
}

inline UEAElement eval_cartan_tail(const UEAElement& u, const Rational& h, const Rational& chi) {
    UEAElement out(u.order());
    for (const auto& [m, co] : u.terms()) {
        PBWMonomial stripped;
        Rational factor = co;
        for (std::size_t k = 0; k < m.word.size(); ++k) {
            const auto& [i, e] = m.word[k];
            if (i == 0) {
                if (k + 1 != m.word.size())
                    throw DomainError("eval_cartan_tail: e_0 is not trailing in " + format(m));
                factor *= rational_pow(h, e);
            } else {
                stripped.word.push_back({i, e});
            }
        }
        factor *= rational_pow(chi, m.central_exp);
        out.add_term(std::move(stripped), factor);
    }
    return out;
}

// embedding of the algebra into its enveloping algebra
inline UEAElement to_uea(const LieElement& x, const OrderSpec& order) {
    UEAElement out(order);
    for (const auto& [g, co] : x.terms()) {
        if (g.is_central())
            out.add_term(PBWMonomial{{}, 1}, co);
        else
            out.add_term(PBWMonomial{{{g.index(), 1}}, 0}, co);
    }
    return out;
}

}  // namespace virasoro
