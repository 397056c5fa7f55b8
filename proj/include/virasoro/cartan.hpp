#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "virasoro/errors.hpp"
#include "virasoro/pbw.hpp"
#include "virasoro/rational.hpp"

namespace virasoro {

// polynomial in the commuting pair (e_0, c)
class CartanPolynomial {
public:
    using Key = std::pair<std::uint32_t, std::uint32_t>;  // (e_0 power, c power)

    static CartanPolynomial zero() { return {}; }

    const std::map<Key, Rational>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    Rational coeff(std::uint32_t e0_pow, std::uint32_t c_pow) const {
        auto it = terms_.find({e0_pow, c_pow});
        return it == terms_.end() ? Rational(0) : it->second;
    }

    void add_term(std::uint32_t e0_pow, std::uint32_t c_pow, const Rational& co) {
        if (co == 0) return;
        auto [it, inserted] = terms_.try_emplace({e0_pow, c_pow}, co);
        if (!inserted) {
            it->second += co;
            if (it->second == 0) terms_.erase(it);
        }
    }

    bool depends_on_central() const {
        for (const auto& [k, co] : terms_)
            if (k.second != 0) return true;
        return false;
    }

    std::uint32_t degree_e0() const {
        std::uint32_t d = 0;
        for (const auto& [k, co] : terms_) d = std::max(d, k.first);
        return d;
    }

    friend bool operator==(const CartanPolynomial&, const CartanPolynomial&) = default;

private:
    std::map<Key, Rational> terms_;
};

// u must be supported on e_0 and c alone; offenders are named in the error
inline CartanPolynomial cartan_polynomial(const UEAElement& u) {
    std::string offenders;
    CartanPolynomial p;
    for (const auto& [m, co] : u.terms()) {
        bool pure = m.word.empty() || (m.word.size() == 1 && m.word[0].first == 0);
        if (!pure) {
            if (!offenders.empty()) offenders += ", ";
            offenders += format(m);
            continue;
        }
        std::uint32_t e0_pow = m.word.empty() ? 0 : m.word[0].second;
        p.add_term(e0_pow, m.central_exp, co);
    }
    if (!offenders.empty())
        throw DomainError("not a Cartan polynomial; non-Cartan monomials: " + offenders);
    return p;
}

inline Rational eval_cartan(const CartanPolynomial& p, const Rational& h, const Rational& chi) {
    Rational out(0);
    for (const auto& [k, co] : p.terms())
        out += co * rational_pow(h, k.first) * rational_pow(chi, k.second);
    return out;
}

namespace detail {

// all positive divisors, via trial division; bounded so bad input fails loudly
inline std::vector<Int> positive_divisors(Int n) {
    if (n < 0) n = -n;
    std::map<Int, int> factors;
    Int d = 2;
    std::int64_t steps = 0;
    while (d * d <= n) {
        if (++steps > 20'000'000)
            throw DomainError("rational_roots: coefficient too large to factor exactly");
        if (n % d == 0) {
            int e = 0;
            while (n % d == 0) {
                n /= d;
                ++e;
            }
            factors[d] = e;
        }
        ++d;
    }
    if (n > 1) factors[n] += 1;
    std::vector<Int> divs{Int(1)};
    for (const auto& [prime, mult] : factors) {
        std::size_t base = divs.size();
        Int pk(1);
        for (int k = 1; k <= mult; ++k) {
            pk *= prime;
            for (std::size_t t = 0; t < base; ++t) divs.push_back(divs[t] * pk);
        }
    }
    return divs;
}

}  // namespace detail

/* Exact rational roots of a univariate polynomial given by coefficients
 * (coeff[k] multiplies x^k). Denominators are cleared, powers of the
 * variable split off (root 0), and every candidate +-p/q with p | trailing
 * and q | leading coefficient is tested by exact evaluation, so the returned
 * set is complete over the rationals. */
inline std::set<Rational> rational_roots(const std::vector<Rational>& coeff) {
    std::uint32_t deg = 0;
    bool nonzero = false;
    for (std::size_t k = 0; k < coeff.size(); ++k)
        if (coeff[k] != 0) {
            deg = std::uint32_t(k);
            nonzero = true;
        }
    if (!nonzero)
        throw DomainError("rational_roots: zero polynomial has every rational as a root");

    Int denom_lcm(1);
    for (const Rational& c : coeff)
        if (c != 0) denom_lcm = boost::multiprecision::lcm(denom_lcm, Int(denominator(c)));
    std::vector<Int> a(deg + 1);
    for (std::uint32_t k = 0; k <= deg; ++k)
        a[k] = Int(numerator(coeff[k])) * (denom_lcm / Int(denominator(coeff[k])));

    std::set<Rational> roots;
    std::uint32_t low = 0;
    while (low <= deg && a[low] == 0) ++low;
    if (low > 0) roots.insert(Rational(0));
    if (low == deg) return roots;  // a_low * x^low: only the root 0

    std::vector<Int> b(a.begin() + low, a.end());  // b[0] != 0, b.back() != 0
    auto value_at = [&](const Rational& x) {
        Rational acc(0);
        for (std::size_t k = b.size(); k-- > 0;) acc = acc * x + Rational(b[k]);
        return acc;
    };
    std::vector<Int> ps = detail::positive_divisors(b.front());
    std::vector<Int> qs = detail::positive_divisors(b.back());
    for (const Int& num : ps)
        for (const Int& den : qs) {
            if (boost::multiprecision::gcd(num, den) != 1) continue;
            Rational cand = make_rational(num, den);
            if (value_at(cand) == 0) roots.insert(cand);
            if (value_at(-cand) == 0) roots.insert(-cand);
        }
    return roots;
}

inline std::set<Rational> rational_roots(const CartanPolynomial& p) {
    if (p.depends_on_central())
        throw DomainError("rational_roots: polynomial depends on c; univariate input required");
    std::vector<Rational> coeff(std::size_t(p.degree_e0()) + 1, Rational(0));
    for (const auto& [k, co] : p.terms()) coeff[k.first] = co;
    return rational_roots(coeff);
}

}  // namespace virasoro
