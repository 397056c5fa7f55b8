#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "virasoro/cartan.hpp"
#include "virasoro/errors.hpp"
#include "virasoro/linalg.hpp"
#include "virasoro/pbw.hpp"

namespace virasoro {

using Partition = std::vector<std::uint32_t>;  // parts weakly decreasing

// partitions of n in reverse-lexicographic order: [n], [n-1,1], ..., [1,...,1]
inline std::vector<Partition> partitions(std::uint32_t n) {
    std::vector<Partition> out;
    Partition cur;
    auto rec = [&](auto&& self, std::uint32_t left, std::uint32_t max_part) -> void {
        if (left == 0) {
            out.push_back(cur);
            return;
        }
        for (std::uint32_t p = std::min(left, max_part); p >= 1; --p) {
            cur.push_back(p);
            self(self, left - p, p);
            cur.pop_back();
        }
    };
    rec(rec, n, n == 0 ? 1 : n);
    return out;
}

/* Element of one weight space, as sparse coordinates over that space's basis.
 * The owning module interprets the positions; vectors are value objects. */
class WeightVector {
public:
    explicit WeightVector(Rational weight) : weight_(std::move(weight)) {}

    static WeightVector zero_at(Rational weight) { return WeightVector(std::move(weight)); }

    static WeightVector unit(Rational weight, std::size_t position) {
        WeightVector v(std::move(weight));
        v.coords_[position] = 1;
        return v;
    }

    static WeightVector from_coords(Rational weight, const RatVec& coords) {
        WeightVector v(std::move(weight));
        for (std::size_t i = 0; i < coords.size(); ++i)
            if (coords[i] != 0) v.coords_[i] = coords[i];
        return v;
    }

    const Rational& weight() const { return weight_; }
    const std::map<std::size_t, Rational>& coords() const { return coords_; }
    bool is_zero() const { return coords_.empty(); }

    Rational coord(std::size_t position) const {
        auto it = coords_.find(position);
        return it == coords_.end() ? Rational(0) : it->second;
    }

    RatVec dense(std::size_t dim) const {
        RatVec out(dim, Rational(0));
        for (const auto& [p, co] : coords_) out[p] = co;
        return out;
    }

    void add_coord(std::size_t position, const Rational& co) {
        if (co == 0) return;
        auto [it, inserted] = coords_.try_emplace(position, co);
        if (!inserted) {
            it->second += co;
            if (it->second == 0) coords_.erase(it);
        }
    }

    WeightVector& operator+=(const WeightVector& other) {
        if (weight_ != other.weight_)
            throw std::invalid_argument("weight mismatch: " + rational_str(weight_) + " vs " +
                                        rational_str(other.weight_));
        for (const auto& [p, co] : other.coords_) add_coord(p, co);
        return *this;
    }
    WeightVector& operator*=(const Rational& s) {
        if (s == 0) {
            coords_.clear();
            return *this;
        }
        for (auto& [p, co] : coords_) co *= s;
        return *this;
    }

    friend WeightVector operator+(WeightVector a, const WeightVector& b) { return a += b; }
    friend WeightVector operator-(WeightVector a, const WeightVector& b) {
        WeightVector nb = b;
        nb *= Rational(-1);
        return a += nb;
    }
    friend WeightVector operator*(const Rational& s, WeightVector v) { return v *= s; }
    friend bool operator==(const WeightVector&, const WeightVector&) = default;

private:
    Rational weight_;
    std::map<std::size_t, Rational> coords_;  // zero coordinates never stored
};

// solution of the paired singular-vector conditions found by eq10_pair_search:
// e_{-1} y = 0, x = e_{-2} y != 0, e_1 x = 0, e_2 x = tau * y
struct Eq10Pair {
    WeightVector x;
    WeightVector y;
    Rational tau;
};

/* Finite window of a weight module with exact generator action. Two
 * families: a highest-weight (Verma-type) truncation down to a fixed depth
 * below h, and the two-parameter intermediate series on an index window.
 * Action matrices are built eagerly at construction; instances are immutable
 * afterwards, so concurrent reads are safe. Any action that would leave the
 * window raises BoundaryError instead of inventing a zero. */
class TruncatedWeightModule {
public:
    enum class Family { verma, intermediate_series };

    static TruncatedWeightModule verma(const Rational& h, const Rational& chi,
                                       std::uint32_t depth, const StructureConstants& sc = {}) {
        TruncatedWeightModule m;
        m.family_ = Family::verma;
        m.h_ = h;
        m.chi_ = chi;
        m.depth_ = depth;
        m.build_verma(sc);
        return m;
    }

    static TruncatedWeightModule intermediate_series(const Rational& a, const Rational& b,
                                                     std::int64_t k_min, std::int64_t k_max) {
        if (k_min > k_max) throw std::invalid_argument("intermediate_series: empty index window");
        TruncatedWeightModule m;
        m.family_ = Family::intermediate_series;
        m.a_ = a;
        m.b_ = b;
        m.k_min_ = k_min;
        m.k_max_ = k_max;
        return m;
    }

    Family family() const { return family_; }
    const Rational& highest_weight() const { return h_; }
    const Rational& central_charge() const { return chi_; }
    std::uint32_t depth() const { return depth_; }
    const Rational& shift() const { return a_; }
    const Rational& slope() const { return b_; }
    std::int64_t k_min() const { return k_min_; }
    std::int64_t k_max() const { return k_max_; }

    // ---------------------------------------------------------- structure --

    std::size_t dim(const Rational& weight) const {
        auto slot = classify(weight);
        if (slot.kind == Slot::outside_window)
            throw BoundaryError("weight " + rational_str(weight) + " lies outside the window");
        if (slot.kind == Slot::known_zero) return 0;
        return family_ == Family::verma ? verma_basis_[slot.level].size() : 1;
    }

    std::map<Rational, std::size_t> weight_dims() const {
        std::map<Rational, std::size_t> out;
        if (family_ == Family::verma) {
            for (std::uint32_t n = 0; n <= depth_; ++n) out[h_ - n] = verma_basis_[n].size();
        } else {
            for (std::int64_t k = k_min_; k <= k_max_; ++k) out[a_ + k] = 1;
        }
        return out;
    }

    std::set<Rational> support() const {
        std::set<Rational> out;
        for (const auto& [w, d] : weight_dims())
            if (d > 0) out.insert(w);
        return out;
    }

    std::vector<std::string> basis_labels(const Rational& weight) const {
        std::vector<std::string> out;
        if (family_ == Family::verma) {
            std::uint32_t n = level_of(weight);
            for (const Partition& p : verma_basis_[n]) out.push_back(partition_label(p));
        } else {
            out.push_back("(" + std::to_string(index_of(weight)) + ")");
        }
        return out;
    }

    WeightVector basis_vector(const Rational& weight, std::size_t position) const {
        if (position >= dim(weight))
            throw std::invalid_argument("basis position out of range at weight " +
                                        rational_str(weight));
        return WeightVector::unit(weight, position);
    }

    // ------------------------------------------------------------- action --

    WeightVector act(const Generator& g, const WeightVector& v) const {
        check_vector(v);
        if (g.is_central()) {
            WeightVector out = v;
            out *= family_ == Family::verma ? chi_ : Rational(0);
            return out;
        }
        const std::int64_t j = g.index();
        const Rational target = v.weight() + j;
        if (family_ == Family::verma) {
            auto slot = classify(target);
            if (slot.kind == Slot::outside_window)
                throw BoundaryError("action of e(" + std::to_string(j) + ") leaves the window: " +
                                    rational_str(v.weight()) + " -> " + rational_str(target));
            if (slot.kind == Slot::known_zero) return WeightVector::zero_at(target);
            // a vector at a known-zero weight is the zero vector; its image is too
            if (classify(v.weight()).kind != Slot::in_window)
                return WeightVector::zero_at(target);
            const RationalMatrix& mat = verma_matrix(j, level_of(v.weight()));
            return WeightVector::from_coords(target,
                                             mat.apply(v.dense(mat.cols())));
        }
        if (classify(v.weight()).kind != Slot::in_window)
            return WeightVector::zero_at(target);
        const std::int64_t k = index_of(v.weight());
        if (k + j < k_min_ || k + j > k_max_)
            throw BoundaryError("action of e(" + std::to_string(j) + ") leaves the window: v(" +
                                std::to_string(k) + ") -> v(" + std::to_string(k + j) + ")");
        WeightVector out(target);
        out.add_coord(0, (a_ + k + Rational(j) * b_) * v.coord(0));
        return out;
    }

    // every summand must land at one common weight (brackets always do)
    WeightVector act(const LieElement& x, const WeightVector& v) const {
        check_vector(v);
        std::optional<Rational> target;
        for (const auto& [g, co] : x.terms()) {
            Rational t = g.is_central() ? v.weight() : v.weight() + g.index();
            if (target && *target != t)
                throw std::invalid_argument(
                    "act: element maps one weight to several; split it first");
            target = t;
        }
        if (!target) return WeightVector::zero_at(v.weight());
        WeightVector out(*target);
        for (const auto& [g, co] : x.terms()) {
            WeightVector part = act(g, v);
            part *= co;
            out += part;
        }
        return out;
    }

    /* Monomial words act letter by letter, rightmost factor first; the input
     * must be degree-homogeneous so every term lands at the same weight. */
    WeightVector act_element(const UEAElement& u, const WeightVector& v) const {
        check_vector(v);
        std::optional<std::int64_t> deg;
        for (const auto& [m, co] : u.terms()) {
            if (deg && *deg != m.degree())
                throw std::invalid_argument(
                    "act_element: mixed degrees (use degree_components first)");
            deg = m.degree();
        }
        WeightVector out = WeightVector::zero_at(v.weight() + deg.value_or(0));
        for (const auto& [m, co] : u.terms()) {
            WeightVector cur = v;
            for (std::uint32_t b = 0; b < m.central_exp; ++b)
                cur = act(Generator::central(), cur);
            std::vector<std::int64_t> letters = m.letters();
            for (std::size_t k = letters.size(); k-- > 0;)
                cur = act(Generator::indexed(letters[k]), cur);
            cur *= co;
            out += cur;
        }
        return out;
    }

    // ------------------------------------------------------------ queries --

    std::vector<WeightVector> kernel(const Rational& weight,
                                     const std::vector<Generator>& probes) const {
        const std::size_t d = dim(weight);
        std::vector<RatVec> rows;
        for (const Generator& g : probes) {
            std::vector<WeightVector> images;
            std::size_t target_dim = 0;
            for (std::size_t i = 0; i < d; ++i) {
                WeightVector img = act(g, basis_vector(weight, i));
                for (const auto& [p, co] : img.coords())
                    target_dim = std::max(target_dim, p + 1);
                images.push_back(std::move(img));
            }
            for (std::size_t r = 0; r < target_dim; ++r) {
                RatVec row(d, Rational(0));
                for (std::size_t i = 0; i < d; ++i) row[i] = images[i].coord(r);
                rows.push_back(std::move(row));
            }
        }
        RationalMatrix stacked = rows.empty() ? RationalMatrix(0, d)
                                              : RationalMatrix::from_rows(rows);
        std::vector<WeightVector> out;
        for (const RatVec& v : nullspace_basis(stacked))
            out.push_back(WeightVector::from_coords(weight, v));
        return out;
    }

    bool hw_detector(const WeightVector& v) const {
        return act(Generator::indexed(1), v).is_zero() &&
               act(Generator::indexed(2), v).is_zero();
    }

    bool lw_detector(const WeightVector& v) const {
        return act(Generator::indexed(-1), v).is_zero() &&
               act(Generator::indexed(-2), v).is_zero();
    }

    std::vector<Eq10Pair> eq10_pair_search(const Rational& mu) const;

    // ------------------------------------------------------------ display --

    std::string format(const WeightVector& v) const {
        if (v.is_zero()) return "0";
        std::vector<std::string> labels = basis_labels(v.weight());
        std::string out;
        bool first = true;
        for (const auto& [p, co] : v.coords()) {
            Rational mag = co < 0 ? Rational(-co) : co;
            if (first) {
                if (co < 0) out += '-';
                first = false;
            } else {
                out += co < 0 ? " - " : " + ";
            }
            std::string sym = "v" + labels.at(p);
            if (mag == 1)
                out += sym;
            else
                out += rational_str(mag) + "*" + sym;
        }
        return out;
    }

private:
    TruncatedWeightModule() = default;

    struct Slot {
        enum Kind { in_window, known_zero, outside_window } kind;
        std::uint32_t level = 0;  // verma only
    };

    // Verma weights live on h - n; anything above h or off the lattice is an
    // exact zero of the untruncated module, only depths beyond the window err
    Slot classify(const Rational& weight) const {
        if (family_ == Family::verma) {
            Rational n = h_ - weight;
            if (!is_integer(n)) return {Slot::known_zero};
            Int level = Int(numerator(n));
            if (level < 0) return {Slot::known_zero};
            if (level > depth_) return {Slot::outside_window};
            return {Slot::in_window, level.convert_to<std::uint32_t>()};
        }
        Rational k = weight - a_;
        if (!is_integer(k)) return {Slot::known_zero};
        Int idx = numerator(k);
        if (idx < k_min_ || idx > k_max_) return {Slot::outside_window};
        return {Slot::in_window};
    }

    std::uint32_t level_of(const Rational& weight) const {
        auto slot = classify(weight);
        if (slot.kind != Slot::in_window)
            throw BoundaryError("weight " + rational_str(weight) + " lies outside the window");
        return slot.level;
    }

    std::int64_t index_of(const Rational& weight) const {
        auto slot = classify(weight);
        if (slot.kind != Slot::in_window)
            throw BoundaryError("weight " + rational_str(weight) + " lies outside the window");
        Rational k = weight - a_;
        return Int(numerator(k)).convert_to<std::int64_t>();
    }

    void check_vector(const WeightVector& v) const {
        std::size_t d = dim(v.weight());
        if (!v.coords().empty() && v.coords().rbegin()->first >= d)
            throw std::invalid_argument("vector coordinates exceed the weight space dimension");
    }

    static std::string partition_label(const Partition& p) {
        std::string out = "[";
        for (std::size_t i = 0; i < p.size(); ++i) {
            if (i) out += ',';
            out += std::to_string(p[i]);
        }
        return out + "]";
    }

    const RationalMatrix& verma_matrix(std::int64_t j, std::uint32_t level) const {
        auto it = action_cache_.find({j, level});
        if (it == action_cache_.end())
            throw std::logic_error("missing action matrix");  // cache covers the window
        return it->second;
    }

    /* The action on a basis word e_{-p1}...e_{-pk} v is read off the normal
     * form of e_j e_{-p1}...e_{-pk}: words with a positive tail annihilate
     * the cyclic vector, trailing e_0^a c^b evaluate to h^a chi^b, and the
     * remaining all-negative words are again basis vectors. */
    void build_verma(const StructureConstants& sc) {
        verma_basis_.resize(depth_ + 1);
        verma_index_.resize(depth_ + 1);
        for (std::uint32_t n = 0; n <= depth_; ++n) {
            verma_basis_[n] = partitions(n);
            for (std::size_t i = 0; i < verma_basis_[n].size(); ++i)
                verma_index_[n][verma_basis_[n][i]] = i;
        }
        const OrderSpec hw = OrderSpec::hw();
        for (std::uint32_t n = 0; n <= depth_; ++n) {
            for (std::int64_t j = std::int64_t(n) - depth_; j <= std::int64_t(n); ++j) {
                const std::uint32_t target = std::uint32_t(std::int64_t(n) - j);
                RationalMatrix mat(verma_basis_[target].size(), verma_basis_[n].size());
                for (std::size_t col = 0; col < verma_basis_[n].size(); ++col) {
                    RawWord w;
                    w.letters.push_back(j);
                    for (std::uint32_t part : verma_basis_[n][col])
                        w.letters.push_back(-std::int64_t(part));
                    const UEAElement nf = normal_form(w, hw, sc);
                    for (const auto& [m, co] : nf.terms()) {
                        Rational value = co;
                        Partition p;
                        bool kills = false;
                        for (const auto& [idx, exp] : m.word) {
                            if (idx > 0) {
                                kills = true;  // positive tail reaches the cyclic vector first
                                break;
                            }
                            if (idx == 0)
                                value *= rational_pow(h_, exp);
                            else
                                for (std::uint32_t t = 0; t < exp; ++t)
                                    p.push_back(std::uint32_t(-idx));
                        }
                        if (kills) continue;
                        value *= rational_pow(chi_, m.central_exp);
                        std::sort(p.rbegin(), p.rend());
                        mat.at(verma_index_[target].at(p), col) += value;
                    }
                }
                action_cache_.emplace(std::make_pair(j, n), std::move(mat));
            }
        }
    }

    Family family_ = Family::verma;
    Rational h_, chi_;       // verma parameters
    std::uint32_t depth_ = 0;
    Rational a_, b_;         // intermediate series parameters
    std::int64_t k_min_ = 0, k_max_ = 0;

    std::vector<std::vector<Partition>> verma_basis_;              // per level
    std::vector<std::map<Partition, std::size_t>> verma_index_;    // partition -> position
    std::map<std::pair<std::int64_t, std::uint32_t>, RationalMatrix> action_cache_;
};

/* Searches one weight for the paired singular-vector pattern: y with
 * e_{-1} y = 0 at mu+1, x = e_{-2} y, e_1 x = 0 and e_2 x proportional to y.
 * The proportionality condition is solved exactly: the candidate space is
 * shrunk to the largest subspace invariant under T = e_2 e_{-2}, and the
 * rational eigenvalues of T there give one canonical representative per
 * solution ray (tau = eigenvalue). Rays with x = 0 are skipped; the
 * lowest-weight detector already reports those. */
inline std::vector<Eq10Pair> TruncatedWeightModule::eq10_pair_search(const Rational& mu) const {
    std::vector<Eq10Pair> out;
    const Rational up = mu + 1;
    if (dim(up) == 0) return out;

    std::vector<WeightVector> ker = kernel(up, {Generator::indexed(-1)});
    if (ker.empty()) return out;
    const std::size_t D = dim(up);

    // columns span the running candidate subspace S at weight mu+1
    auto to_matrix = [&](const std::vector<RatVec>& cols) {
        RationalMatrix m(D, cols.size());
        for (std::size_t c = 0; c < cols.size(); ++c)
            for (std::size_t r = 0; r < D; ++r) m.at(r, c) = cols[c][r];
        return m;
    };
    auto image_col = [&](const RatVec& col, const Generator& g1,
                         const std::optional<Generator>& g2) {
        WeightVector v = WeightVector::from_coords(up, col);
        WeightVector img = act(g1, v);
        if (g2) img = act(*g2, img);
        return img;
    };

    std::vector<RatVec> S;
    for (const WeightVector& y : ker) S.push_back(y.dense(D));

    // cut by the linear condition e_1 e_{-2} y = 0
    {
        std::size_t rows_dim = dim(mu);
        RationalMatrix cond(rows_dim, S.size());
        for (std::size_t c = 0; c < S.size(); ++c) {
            WeightVector img = image_col(S[c], Generator::indexed(-2), Generator::indexed(1));
            for (const auto& [p, co] : img.coords()) cond.at(p, c) = co;
        }
        std::vector<RatVec> coords = nullspace_basis(cond);
        std::vector<RatVec> next;
        for (const RatVec& cvec : coords) {
            RatVec ambient(D, Rational(0));
            for (std::size_t c = 0; c < S.size(); ++c)
                for (std::size_t r = 0; r < D; ++r) ambient[r] += cvec[c] * S[c][r];
            next.push_back(std::move(ambient));
        }
        S = std::move(next);
    }

    // shrink S until T(S) stays inside span(S)
    while (!S.empty()) {
        RationalMatrix smat = to_matrix(S);
        RationalMatrix tmat(D, S.size());
        for (std::size_t c = 0; c < S.size(); ++c) {
            WeightVector img = image_col(S[c], Generator::indexed(-2), Generator::indexed(2));
            for (const auto& [p, co] : img.coords()) tmat.at(p, c) = co;
        }
        // pairs (d, c) with S d = T c; the c-part spans the stable cut
        RationalMatrix paired(D, 2 * S.size());
        for (std::size_t r = 0; r < D; ++r) {
            for (std::size_t c = 0; c < S.size(); ++c) {
                paired.at(r, c) = smat.at(r, c);
                paired.at(r, S.size() + c) = -tmat.at(r, c);
            }
        }
        std::vector<RatVec> pairs = nullspace_basis(paired);
        RationalMatrix cpart(S.size(), pairs.size());
        for (std::size_t c = 0; c < pairs.size(); ++c)
            for (std::size_t r = 0; r < S.size(); ++r) cpart.at(r, c) = pairs[c][S.size() + r];
        if (rank(cpart) == S.size()) {
            // stable: express T in S-coordinates and take rational eigen-rays
            RationalMatrix b(S.size(), S.size());
            for (std::size_t c = 0; c < S.size(); ++c) {
                RatVec t(D, Rational(0));
                for (std::size_t r = 0; r < D; ++r) t[r] = tmat.at(r, c);
                auto coords = solve(smat, t);
                if (!coords) throw std::logic_error("stable subspace failed to solve");
                for (std::size_t r = 0; r < S.size(); ++r) b.at(r, c) = (*coords)[r];
            }
            for (const Rational& tau : rational_roots(char_poly(b))) {
                RationalMatrix shifted = b;
                for (std::size_t i = 0; i < S.size(); ++i) shifted.at(i, i) -= tau;
                for (const RatVec& xi : nullspace_basis(shifted)) {
                    RatVec ambient(D, Rational(0));
                    for (std::size_t c = 0; c < S.size(); ++c)
                        for (std::size_t r = 0; r < D; ++r) ambient[r] += xi[c] * S[c][r];
                    WeightVector y = WeightVector::from_coords(up, primitive_scale(ambient));
                    WeightVector x = act(Generator::indexed(-2), y);
                    if (x.is_zero()) continue;
                    out.push_back({std::move(x), std::move(y), tau});
                }
            }
            break;
        }
        // otherwise cut S down to the column space of the c-part; row-reducing
        // the transpose yields a canonical basis of that space
        std::vector<RatVec> next;
        RationalMatrix transpose(cpart.cols(), cpart.rows());
        for (std::size_t r = 0; r < cpart.rows(); ++r)
            for (std::size_t c = 0; c < cpart.cols(); ++c) transpose.at(c, r) = cpart.at(r, c);
        EchelonForm eft = reduced_echelon(transpose);
        for (std::size_t r = 0; r < eft.rank; ++r) {
            RatVec ambient(D, Rational(0));
            for (std::size_t cc = 0; cc < S.size(); ++cc)
                for (std::size_t rr = 0; rr < D; ++rr)
                    ambient[rr] += eft.rref.at(r, cc) * S[cc][rr];
            next.push_back(std::move(ambient));
        }
        if (next.size() >= S.size())
            throw std::logic_error("eq10 search failed to shrink");  // must terminate
        S = std::move(next);
    }
    std::sort(out.begin(), out.end(),
              [](const Eq10Pair& p, const Eq10Pair& q) { return p.tau < q.tau; });
    return out;
}

}  // namespace virasoro
