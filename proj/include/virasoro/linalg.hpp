#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

#include "virasoro/rational.hpp"

namespace virasoro {

using RatVec = std::vector<Rational>;

class RationalMatrix {
public:
    RationalMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols, Rational(0)) {}

    static RationalMatrix identity(std::size_t n) {
        RationalMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
        return m;
    }

    static RationalMatrix from_rows(const std::vector<RatVec>& rows) {
        std::size_t cols = rows.empty() ? 0 : rows.front().size();
        RationalMatrix m(rows.size(), cols);
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (rows[r].size() != cols) throw std::invalid_argument("ragged rows");
            for (std::size_t c = 0; c < cols; ++c) m.at(r, c) = rows[r][c];
        }
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    Rational& at(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const Rational& at(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    RatVec apply(const RatVec& x) const {
        if (x.size() != cols_) throw std::invalid_argument("dimension mismatch in apply");
        RatVec y(rows_, Rational(0));
        for (std::size_t r = 0; r < rows_; ++r)
            for (std::size_t c = 0; c < cols_; ++c)
                if (data_[r * cols_ + c] != 0) y[r] += data_[r * cols_ + c] * x[c];
        return y;
    }

    RationalMatrix operator*(const RationalMatrix& other) const {
        if (cols_ != other.rows_) throw std::invalid_argument("dimension mismatch in product");
        RationalMatrix out(rows_, other.cols_);
        for (std::size_t r = 0; r < rows_; ++r)
            for (std::size_t k = 0; k < cols_; ++k) {
                const Rational& a = at(r, k);
                if (a == 0) continue;
                for (std::size_t c = 0; c < other.cols_; ++c)
                    if (other.at(k, c) != 0) out.at(r, c) += a * other.at(k, c);
            }
        return out;
    }

    friend bool operator==(const RationalMatrix&, const RationalMatrix&) = default;

private:
    std::size_t rows_, cols_;
    std::vector<Rational> data_;
};

struct EchelonForm {
    RationalMatrix rref;                   // reduced row echelon form
    std::vector<std::size_t> pivot_cols;   // one per pivot row
    std::size_t rank = 0;
};

namespace detail {

// exact integer division; the Bareiss identity guarantees zero remainder
inline Int exact_div(const Int& a, const Int& b) {
    Int q, r;
    boost::multiprecision::divide_qr(a, b, q, r);
    if (r != 0) throw std::logic_error("fraction-free elimination: inexact division");
    return q;
}

}  // namespace detail

/* Fraction-free (Bareiss) forward elimination: rows are scaled to integers
 * once, and each cross-multiplication step divides exactly by the previous
 * pivot (every entry stays a minor of the scaled matrix), so no intermediate
 * fractions appear and entry growth stays polynomial. The integer echelon
 * form is then normalized to the reduced echelon form over the rationals,
 * which makes kernels and solved coordinates canonical. */
inline EchelonForm reduced_echelon(const RationalMatrix& input) {
    const std::size_t rows = input.rows(), cols = input.cols();
    std::vector<std::vector<Int>> m(rows, std::vector<Int>(cols));
    for (std::size_t r = 0; r < rows; ++r) {
        Int scale(1);
        for (std::size_t c = 0; c < cols; ++c)
            scale = boost::multiprecision::lcm(scale, Int(denominator(input.at(r, c))));
        for (std::size_t c = 0; c < cols; ++c) {
            const Rational& v = input.at(r, c);
            m[r][c] = Int(numerator(v)) * (scale / Int(denominator(v)));
        }
    }

    std::vector<std::size_t> pivot_cols;
    Int prev(1);
    std::size_t lead = 0;
    for (std::size_t col = 0; col < cols && lead < rows; ++col) {
        std::size_t sel = lead;  // first nonzero below; no pivot-size heuristics
        while (sel < rows && m[sel][col] == 0) ++sel;
        if (sel == rows) continue;
        std::swap(m[sel], m[lead]);
        const Int pivot = m[lead][col];
        for (std::size_t r = lead + 1; r < rows; ++r) {
            const Int factor = m[r][col];
            for (std::size_t c = 0; c < cols; ++c)
                m[r][c] = detail::exact_div(m[r][c] * pivot - factor * m[lead][c], prev);
        }
        prev = pivot;
        pivot_cols.push_back(col);
        ++lead;
    }

    // normalize: unit pivots, zeros above them (plain rational arithmetic)
    EchelonForm out{RationalMatrix(rows, cols), pivot_cols, pivot_cols.size()};
    for (std::size_t r = 0; r < out.rank; ++r) {
        const Int& pivot = m[r][pivot_cols[r]];
        for (std::size_t c = pivot_cols[r]; c < cols; ++c)
            if (m[r][c] != 0) out.rref.at(r, c) = make_rational(m[r][c], pivot);
    }
    for (std::size_t r = out.rank; r-- > 0;) {
        for (std::size_t above = 0; above < r; ++above) {
            const Rational factor = out.rref.at(above, pivot_cols[r]);
            if (factor == 0) continue;
            for (std::size_t c = pivot_cols[r]; c < cols; ++c)
                out.rref.at(above, c) -= factor * out.rref.at(r, c);
        }
    }
    return out;
}

inline std::size_t rank(const RationalMatrix& m) { return reduced_echelon(m).rank; }

// canonical kernel basis: one vector per free column, unit at that column
inline std::vector<RatVec> nullspace_basis(const RationalMatrix& m) {
    EchelonForm ef = reduced_echelon(m);
    std::vector<bool> is_pivot(m.cols(), false);
    for (std::size_t c : ef.pivot_cols) is_pivot[c] = true;
    std::vector<RatVec> basis;
    for (std::size_t f = 0; f < m.cols(); ++f) {
        if (is_pivot[f]) continue;
        RatVec v(m.cols(), Rational(0));
        v[f] = 1;
        for (std::size_t r = 0; r < ef.rank; ++r) v[ef.pivot_cols[r]] = -ef.rref.at(r, f);
        basis.push_back(std::move(v));
    }
    return basis;
}

// one exact solution of M x = rhs, or nullopt when inconsistent
inline std::optional<RatVec> solve(const RationalMatrix& m, const RatVec& rhs) {
    if (rhs.size() != m.rows()) throw std::invalid_argument("dimension mismatch in solve");
    RationalMatrix aug(m.rows(), m.cols() + 1);
    for (std::size_t r = 0; r < m.rows(); ++r) {
        for (std::size_t c = 0; c < m.cols(); ++c) aug.at(r, c) = m.at(r, c);
        aug.at(r, m.cols()) = rhs[r];
    }
    EchelonForm ef = reduced_echelon(aug);
    for (std::size_t r = 0; r < ef.rank; ++r)
        if (ef.pivot_cols[r] == m.cols()) return std::nullopt;
    RatVec x(m.cols(), Rational(0));
    for (std::size_t r = 0; r < ef.rank; ++r) x[ef.pivot_cols[r]] = ef.rref.at(r, m.cols());
    return x;
}

// monic characteristic polynomial by the Faddeev-LeVerrier recursion;
// coeff[k] multiplies lambda^k
inline RatVec char_poly(const RationalMatrix& a) {
    if (a.rows() != a.cols()) throw std::invalid_argument("char_poly: square matrix required");
    const std::size_t n = a.rows();
    RatVec coeff(n + 1, Rational(0));
    coeff[n] = 1;
    RationalMatrix m = RationalMatrix::identity(n);
    for (std::size_t k = 1; k <= n; ++k) {
        m = a * m;
        Rational tr(0);
        for (std::size_t i = 0; i < n; ++i) tr += m.at(i, i);
        Rational ck = -tr / Rational(Int(k));
        coeff[n - k] = ck;
        for (std::size_t i = 0; i < n; ++i) m.at(i, i) += ck;
    }
    return coeff;
}

// canonical ray representative: integer entries, content 1, leading entry > 0
inline RatVec primitive_scale(const RatVec& v) {
    Int den_lcm(1), num_gcd(0);
    for (const Rational& x : v)
        if (x != 0) den_lcm = boost::multiprecision::lcm(den_lcm, Int(denominator(x)));
    std::vector<Int> ints;
    ints.reserve(v.size());
    for (const Rational& x : v) {
        Int n = Int(numerator(x)) * (den_lcm / Int(denominator(x)));
        num_gcd = boost::multiprecision::gcd(num_gcd, n);
        ints.push_back(std::move(n));
    }
    if (num_gcd == 0) return RatVec(v.size(), Rational(0));
    int sign = 0;
    for (const Int& n : ints)
        if (n != 0) {
            sign = n > 0 ? 1 : -1;
            break;
        }
    RatVec out;
    out.reserve(v.size());
    for (Int& n : ints) {
        Int q = n / num_gcd;
        if (sign < 0) q = -q;
        out.push_back(Rational(std::move(q)));
    }
    return out;
}

}  // namespace virasoro
