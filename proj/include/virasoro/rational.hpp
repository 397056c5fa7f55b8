#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace virasoro {

using Int = boost::multiprecision::cpp_int;

// Exact rational scalar. cpp_rational keeps lowest terms and a positive
// denominator as a class invariant, which is exactly the contract we need.
using Rational = boost::multiprecision::cpp_rational;

inline Rational make_rational(Int num, Int den) {
    if (den == 0) throw std::domain_error("rational: zero denominator");
    // the (num, den) constructor rejects negative denominators, so divide
    return Rational(std::move(num)) / Rational(std::move(den));
}

inline Rational rational_pow(const Rational& base, std::uint32_t exp) {
    Rational acc(1);
    Rational b = base;
    for (std::uint32_t e = exp; e != 0; e >>= 1) {
        if (e & 1) acc *= b;
        if (e > 1) b *= b;
    }
    return acc;
}

// "p" or "p/q", optional leading '-'; no whitespace, no floats.
inline Rational parse_rational(std::string_view text) {
    auto bad = [&] {
        return std::invalid_argument("not a rational: '" + std::string(text) + "'");
    };
    std::size_t i = 0;
    bool neg = false;
    if (i < text.size() && (text[i] == '-' || text[i] == '+')) {
        neg = text[i] == '-';
        ++i;
    }
    std::size_t num_begin = i;
    while (i < text.size() && text[i] >= '0' && text[i] <= '9') ++i;
    if (i == num_begin) throw bad();
    Int num(std::string(text.substr(num_begin, i - num_begin)));
    Int den(1);
    if (i < text.size()) {
        if (text[i] != '/') throw bad();
        ++i;
        std::size_t den_begin = i;
        while (i < text.size() && text[i] >= '0' && text[i] <= '9') ++i;
        if (i == den_begin || i != text.size()) throw bad();
        den = Int(std::string(text.substr(den_begin, i - den_begin)));
        if (den == 0) throw std::domain_error("not a rational: zero denominator in '" + std::string(text) + "'");
    }
    if (neg) num = -num;
    return make_rational(std::move(num), std::move(den));
}

// canonical text form: "p" when the denominator is 1, else "p/q"
inline std::string rational_str(const Rational& r) {
    std::string s = numerator(r).str();
    if (denominator(r) != 1) {
        s += '/';
        s += denominator(r).str();
    }
    return s;
}

inline bool is_integer(const Rational& r) { return denominator(r) == 1; }

}  // namespace virasoro
