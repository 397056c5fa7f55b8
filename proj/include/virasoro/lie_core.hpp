#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "virasoro/rational.hpp"

namespace virasoro {

// Basis symbol of the algebra: an indexed generator e_i or the central c.
class Generator {
public:
    static Generator indexed(std::int64_t i) { return Generator(false, i); }
    static Generator central() { return Generator(true, 0); }

    bool is_central() const { return central_; }
    std::int64_t index() const {
        if (central_) throw std::logic_error("central generator has no index");
        return index_;
    }

    // indexed generators by index, central sorts last
    friend auto operator<=>(const Generator& a, const Generator& b) {
        if (a.central_ != b.central_) return a.central_ <=> b.central_;
        return a.index_ <=> b.index_;
    }
    friend bool operator==(const Generator&, const Generator&) = default;

private:
    Generator(bool central, std::int64_t i) : central_(central), index_(i) {}
    bool central_;
    std::int64_t index_;
};

// Finite rational linear combination of basis symbols.
class LieElement {
public:
    LieElement() = default;

    static LieElement zero() { return {}; }
    static LieElement gen(std::int64_t i) {
        LieElement x;
        x.terms_[Generator::indexed(i)] = 1;
        return x;
    }
    static LieElement central() {
        LieElement x;
        x.terms_[Generator::central()] = 1;
        return x;
    }

    const std::map<Generator, Rational>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    Rational coeff(const Generator& g) const {
        auto it = terms_.find(g);
        return it == terms_.end() ? Rational(0) : it->second;
    }

    void add_term(const Generator& g, const Rational& coefficient) {
        if (coefficient == 0) return;
        auto [it, inserted] = terms_.try_emplace(g, coefficient);
        if (!inserted) {
            it->second += coefficient;
            if (it->second == 0) terms_.erase(it);
        }
    }

    LieElement& operator+=(const LieElement& other) {
        for (const auto& [g, co] : other.terms_) add_term(g, co);
        return *this;
    }
    LieElement& operator-=(const LieElement& other) {
        for (const auto& [g, co] : other.terms_) add_term(g, -co);
        return *this;
    }
    LieElement& operator*=(const Rational& s) {
        if (s == 0) {
            terms_.clear();
            return *this;
        }
        for (auto& [g, co] : terms_) co *= s;
        return *this;
    }

    friend LieElement operator+(LieElement a, const LieElement& b) { return a += b; }
    friend LieElement operator-(LieElement a, const LieElement& b) { return a -= b; }
    friend LieElement operator*(const Rational& s, LieElement a) { return a *= s; }
    friend LieElement operator-(LieElement a) { return a *= Rational(-1); }
    friend bool operator==(const LieElement&, const LieElement&) = default;

private:
    std::map<Generator, Rational> terms_;  // zero coefficients never stored
};

// Additive patch on one ordered bracket pair; used by the verification
// suite's negative controls to knock a single structure constant askew.
struct BracketPatch {
    std::int64_t i = 0;
    std::int64_t j = 0;
    Rational delta;  // added to the coefficient of e_{i+j} in [e_i, e_j]
};

struct StructureConstants {
    std::optional<BracketPatch> patch;

    // [e_i, e_j] = (j - i) e_{i+j} + delta_{i,-j} (i^3 - i)/12 c
    LieElement bracket_gen(std::int64_t i, std::int64_t j) const {
        LieElement out;
        Rational lin(j - i);
        if (patch && patch->i == i && patch->j == j) lin += patch->delta;
        out.add_term(Generator::indexed(i + j), lin);
        if (i == -j) {
            Int i3 = Int(i) * i * i;
            out.add_term(Generator::central(), make_rational(i3 - i, 12));
        }
        return out;
    }

    LieElement bracket(const LieElement& x, const LieElement& y) const {
        LieElement out;
        for (const auto& [gx, cx] : x.terms()) {
            if (gx.is_central()) continue;
            for (const auto& [gy, cy] : y.terms()) {
                if (gy.is_central()) continue;
                LieElement b = bracket_gen(gx.index(), gy.index());
                b *= cx * cy;
                out += b;
            }
        }
        return out;
    }
};

inline LieElement bracket_gen(std::int64_t i, std::int64_t j) {
    return StructureConstants{}.bracket_gen(i, j);
}

inline LieElement bracket(const LieElement& x, const LieElement& y,
                          const StructureConstants& sc = {}) {
    return sc.bracket(x, y);
}

// [x,[y,z]] + [y,[z,x]] + [z,[x,y]]; identically zero for the true constants
inline LieElement jacobi_defect(const LieElement& x, const LieElement& y, const LieElement& z,
                                const StructureConstants& sc = {}) {
    LieElement out = sc.bracket(x, sc.bracket(y, z));
    out += sc.bracket(y, sc.bracket(z, x));
    out += sc.bracket(z, sc.bracket(x, y));
    return out;
}

// e_i -> -e_{-i}, c -> -c; an automorphism of the algebra
inline LieElement involution(const LieElement& x) {
    LieElement out;
    for (const auto& [g, co] : x.terms()) {
        Generator img = g.is_central() ? Generator::central() : Generator::indexed(-g.index());
        out.add_term(img, -co);
    }
    return out;
}

inline std::string format(const LieElement& x) {
    if (x.is_zero()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [g, co] : x.terms()) {
        Rational mag = co < 0 ? Rational(-co) : co;
        if (first) {
            if (co < 0) out += '-';
            first = false;
        } else {
            out += co < 0 ? " - " : " + ";
        }
        std::string sym = g.is_central() ? "c" : "e(" + std::to_string(g.index()) + ")";
        if (mag == 1)
            out += sym;
        else
            out += rational_str(mag) + "*" + sym;
    }
    return out;
}

}  // namespace virasoro
