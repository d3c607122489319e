/**
 * Tropical toric varieties and weighted complexes inside them: extended
 * cells with sedentarity, closures across strata, balancing, the
 * product-form condition at infinity, and star fans.
 *
 * Coordinates on a stratum N_sigma are fixed once per cone by an adapted
 * lattice basis (first rows = ray generators of sigma); the quotient maps
 * between strata are then plain coordinate projections.
 */
#ifndef TROPICOH_TROPTORIC_HPP
#define TROPICOH_TROPTORIC_HPP

#include <algorithm>
#include <cstddef>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "tropicoh/complex.hpp"
#include "tropicoh/polyhedron.hpp"
#include "tropicoh/snf.hpp"

namespace tropicoh {

struct AmbientFan {
    Fan fan;
    bool complete = false;
    bool unimodular = false;

    static AmbientFan make(Fan f) {
        AmbientFan a;
        a.complete = f.is_complete();
        a.unimodular = f.is_unimodular();
        a.fan = std::move(f);
        return a;
    }
};

/// A cell of a complex in Trop(T_Sigma): its sedentarity cone and its
/// finite part, a polyhedron in the stratum coordinates N_sigma.
struct ExtendedCell {
    std::size_t sigma;        ///< cone index into the ambient fan
    Polyhedron finite_part;   ///< in quotient coordinates (rank n - dim sigma)

    std::string key() const { return std::to_string(sigma) + "#" + finite_part.key(); }
};

namespace detail {

/// Projection matrix from stratum coords of cone `small` to stratum coords
/// of cone `big` (small must be a face of big).
inline QMat stratum_projection(const Fan& fan, std::size_t small, std::size_t big) {
    std::size_t n = fan.ambient_dim();
    std::size_t k = static_cast<std::size_t>(fan.dim_of(small));
    const ZMat& b = fan.adapted_basis(small);
    // section of the quotient: stratum coords c -> sum c_t * b_{k+t}
    QMat section(n, n - k);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t t = 0; t < n - k; ++t) section(i, t) = Rat(b[k + t][i]);
    return fan.quotient_projection(big) * section;
}

/// Does cone-shaped `rec` meet the relative interior of cone `c`?
/// (Both in the same coordinates; c must not be the zero cone.)
inline bool meets_relint(const Polyhedron& rec, const Polyhedron& c) {
    Polyhedron cap = rec.intersect(c);
    if (cap.is_empty() || cap.dim() <= 0) return false;
    QVec z = cap.rel_interior_point();
    if (!c.contains(z)) return false;
    for (const auto& f : c.facets())
        if (dot(to_qvec(f.a), z) == f.b) return false;
    return true;
}

}  // namespace detail

/// A weighted polyhedral complex in Trop(T_Sigma): pure dimension d, with
/// positive integer weights on the d-cells, closed under faces across all
/// sedentarity strata.
class WeightedComplex {
public:
    WeightedComplex() : d_(-1) {}

    /// Build from maximal sedentarity-zero cells with weights.  When
    /// `compactify` is set, boundary cells at deeper strata (the closure in
    /// Trop(T_Sigma)) are included; otherwise the complex stays in N_R.
    static WeightedComplex build(const AmbientFan& amb, const std::vector<Polyhedron>& max_cells,
                                 const std::vector<Int>& weights, bool compactify = true) {
        if (max_cells.size() != weights.size())
            throw std::invalid_argument("WeightedComplex: one weight per maximal cell required");
        WeightedComplex x;
        x.amb_ = amb;
        std::size_t n = amb.fan.ambient_dim();
        std::size_t origin = 0;  // cones are sorted by dimension; 0 is the apex
        // breadth-first closure over faces and boundary images
        std::vector<ExtendedCell> queue;
        for (const auto& p : max_cells) {
            if (p.ambient_dim() != n)
                throw std::invalid_argument("WeightedComplex: cell in wrong ambient rank");
            queue.push_back(ExtendedCell{origin, p});
        }
        for (std::size_t h = 0; h < queue.size(); ++h) {
            ExtendedCell c = queue[h];
            if (x.index_.count(c.key())) continue;
            x.index_[c.key()] = x.cells_.size();
            x.cells_.push_back(c);
            for (const auto& f : c.finite_part.faces())
                if (!(f == c.finite_part)) queue.push_back(ExtendedCell{c.sigma, f});
            if (!compactify) continue;
            Polyhedron rec = c.finite_part.recession_cone();
            if (rec.dim() <= 0) continue;
            const QMat& ps = amb.fan.quotient_projection(c.sigma);
            for (std::size_t big : amb.fan.cones_above(c.sigma)) {
                if (big == c.sigma) continue;
                Polyhedron image_cone = amb.fan.cell(big).linear_image(ps);
                if (!detail::meets_relint(rec, image_cone)) continue;
                QMat pi = detail::stratum_projection(amb.fan, c.sigma, big);
                queue.push_back(ExtendedCell{big, c.finite_part.linear_image(pi)});
            }
        }
        x.finish(max_cells, weights, compactify);
        return x;
    }

    const AmbientFan& ambient() const { return amb_; }
    std::size_t size() const { return cells_.size(); }
    const ExtendedCell& cell(std::size_t i) const { return cells_[i]; }
    int dim_of(std::size_t i) const { return dims_[i]; }
    int dim() const { return d_; }
    bool is_maximal(std::size_t i) const { return maximal_[i]; }
    bool compactified() const { return compactified_; }

    /// child lies in the closure of parent (reflexive).
    bool is_face(std::size_t child, std::size_t parent) const { return face_[parent][child]; }

    std::size_t index_of(const ExtendedCell& c) const {
        auto it = index_.find(c.key());
        if (it == index_.end()) throw std::invalid_argument("cell not in complex");
        return it->second;
    }
    bool has_weight(std::size_t i) const { return weights_.count(i) != 0; }
    const Int& weight(std::size_t i) const {
        auto it = weights_.find(i);
        if (it == weights_.end()) throw std::invalid_argument("cell carries no weight");
        return it->second;
    }

    /// Indices of sedentarity-zero cells.
    std::vector<std::size_t> finite_cells() const {
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < size(); ++i)
            if (dim_sed(i) == 0) out.push_back(i);
        return out;
    }

    int dim_sed(std::size_t i) const { return amb_.fan.dim_of(cells_[i].sigma); }

    /// Balancing at every (d-1)-cell against cofaces of equal sedentarity.
    std::pair<bool, std::vector<std::string>> check_balancing() const {
        std::vector<std::string> witnesses;
        for (std::size_t qi = 0; qi < size(); ++qi) {
            if (dims_[qi] != d_ - 1) continue;
            std::vector<std::size_t> cofaces;
            for (std::size_t pi = 0; pi < size(); ++pi)
                if (pi != qi && dims_[pi] == d_ && cells_[pi].sigma == cells_[qi].sigma &&
                    face_[pi][qi])
                    cofaces.push_back(pi);
            if (cofaces.empty()) continue;
            const Polyhedron& q = cells_[qi].finite_part;
            std::size_t m = q.ambient_dim();
            ZMat tan = saturated_basis(q.tangent_basis(), m);
            ZMat basis = complete_to_basis(tan, m);
            QMat bq(m, m);
            for (std::size_t a = 0; a < m; ++a)
                for (std::size_t b = 0; b < m; ++b) bq(a, b) = Rat(basis[a][b]);
            QMat binv_t = inverse(bq.transpose());
            std::size_t quot = m - tan.size();
            QMat rho(quot, m);
            for (std::size_t a = 0; a < quot; ++a)
                for (std::size_t b = 0; b < m; ++b) rho(a, b) = binv_t(tan.size() + a, b);
            QVec x0 = q.rel_interior_point();
            QVec sum(quot, Rat(0));
            for (std::size_t pi : cofaces) {
                QVec y = cells_[pi].finite_part.rel_interior_point();
                QVec w(m);
                for (std::size_t t = 0; t < m; ++t) w[t] = y[t] - x0[t];
                ZVec prim = primitive_of_rat(rho * w);
                const Int& wp = weight(pi);
                for (std::size_t t = 0; t < quot; ++t) sum[t] += Rat(wp) * Rat(prim[t]);
            }
            bool zero = true;
            for (const auto& s : sum)
                if (s != 0) zero = false;
            if (!zero) {
                std::ostringstream os;
                os << "balancing fails at cell " << qi << " (sedentarity cone "
                   << cells_[qi].sigma << ")";
                witnesses.push_back(os.str());
            }
        }
        return {witnesses.empty(), witnesses};
    }

    /// Product-form condition at infinity.  A cell P reaches the stratum of
    /// a cone tau exactly when rel.int(tau) meets rec(P); near each boundary
    /// point, P is locally the product (R u {inf})^{dim tau} x image(P) if
    /// and only if the whole cone tau sits inside rec(P).  (If some ray of
    /// tau escapes rec(P), walking deeper along that ray leaves P, which is
    /// exactly the product-form violation.)
    std::pair<bool, std::vector<std::string>> check_regular_at_infinity() const {
        if (!amb_.unimodular)
            throw std::invalid_argument("regular-at-infinity check needs a unimodular ambient fan");
        std::vector<std::string> witnesses;
        for (std::size_t ci = 0; ci < size(); ++ci) {
            const ExtendedCell& c = cells_[ci];
            Polyhedron rec = c.finite_part.recession_cone();
            if (rec.dim() <= 0) continue;
            const QMat& ps = amb_.fan.quotient_projection(c.sigma);
            for (std::size_t big : amb_.fan.cones_above(c.sigma)) {
                if (big == c.sigma) continue;
                Polyhedron image_cone = amb_.fan.cell(big).linear_image(ps);
                if (!detail::meets_relint(rec, image_cone)) continue;
                if (!rec.contains_poly(image_cone)) {
                    std::ostringstream os;
                    os << "cell " << ci << " is not a local product toward cone " << big;
                    witnesses.push_back(os.str());
                }
            }
        }
        return {witnesses.empty(), witnesses};
    }

    /// Star fan of a cell: images of its cofaces of equal sedentarity under
    /// the quotient by the cell's tangent lattice.  Returned as a weighted
    /// fan complex (its own cones serve as the ambient fan).
    WeightedComplex star_fan(std::size_t ci) const {
        if (ci >= size()) throw std::invalid_argument("star_fan: cell not in complex");
        const ExtendedCell& c = cells_[ci];
        std::size_t m = c.finite_part.ambient_dim();
        ZMat tan = saturated_basis(c.finite_part.tangent_basis(), m);
        ZMat basis = complete_to_basis(tan, m);
        QMat bq(m, m);
        for (std::size_t a = 0; a < m; ++a)
            for (std::size_t b = 0; b < m; ++b) bq(a, b) = Rat(basis[a][b]);
        QMat binv_t = inverse(bq.transpose());
        std::size_t quot = m - tan.size();
        QMat rho(quot, m);
        for (std::size_t a = 0; a < quot; ++a)
            for (std::size_t b = 0; b < m; ++b) rho(a, b) = binv_t(tan.size() + a, b);
        QVec q0 = c.finite_part.rel_interior_point();
        std::vector<Polyhedron> top;
        std::vector<Int> wts;
        std::vector<Polyhedron> all_cones;
        for (std::size_t pi = 0; pi < size(); ++pi) {
            if (cells_[pi].sigma != c.sigma || !face_[pi][ci]) continue;
            const Polyhedron& p = cells_[pi].finite_part;
            std::vector<QVec> gens;
            for (const auto& v : p.vertices()) {
                QVec d(m);
                for (std::size_t t = 0; t < m; ++t) d[t] = v[t] - q0[t];
                QVec img = rho * d;
                bool zero = true;
                for (const auto& x : img)
                    if (x != 0) zero = false;
                if (!zero) gens.push_back(img);
            }
            for (const auto& r : p.rays()) {
                QVec img = rho * r;
                bool zero = true;
                for (const auto& x : img)
                    if (x != 0) zero = false;
                if (!zero) gens.push_back(img);
            }
            Polyhedron cone = Polyhedron::cone_from_rays(quot, gens);
            all_cones.push_back(cone);
            if (dims_[pi] == d_) {
                top.push_back(cone);
                wts.push_back(weight(pi));
            }
        }
        AmbientFan star_amb = AmbientFan::make(Fan::from_cones(quot, all_cones));
        return build(star_amb, top, wts, /*compactify=*/false);
    }

private:
    void finish(const std::vector<Polyhedron>& max_cells, const std::vector<Int>& weights,
                bool compactify) {
        compactified_ = compactify;
        dims_.clear();
        for (const auto& c : cells_) dims_.push_back(c.finite_part.dim());
        d_ = -1;
        for (int d : dims_) d_ = std::max(d_, d);
        // face relation: reflexive-transitive closure of direct descents
        std::size_t n = cells_.size();
        face_.assign(n, std::vector<bool>(n, false));
        std::vector<std::vector<std::size_t>> direct(n);
        for (std::size_t i = 0; i < n; ++i) {
            const ExtendedCell& c = cells_[i];
            for (const auto& f : c.finite_part.faces()) {
                if (f == c.finite_part) continue;
                direct[i].push_back(index_.at(ExtendedCell{c.sigma, f}.key()));
            }
            if (!compactify) continue;
            Polyhedron rec = c.finite_part.recession_cone();
            if (rec.dim() <= 0) continue;
            const QMat& ps = amb_.fan.quotient_projection(c.sigma);
            for (std::size_t big : amb_.fan.cones_above(c.sigma)) {
                if (big == c.sigma) continue;
                Polyhedron image_cone = amb_.fan.cell(big).linear_image(ps);
                if (!detail::meets_relint(rec, image_cone)) continue;
                QMat pi = detail::stratum_projection(amb_.fan, c.sigma, big);
                direct[i].push_back(
                    index_.at(ExtendedCell{big, c.finite_part.linear_image(pi)}.key()));
            }
        }
        for (std::size_t i = 0; i < n; ++i) {
            std::vector<std::size_t> stack = {i};
            while (!stack.empty()) {
                std::size_t j = stack.back();
                stack.pop_back();
                if (face_[i][j]) continue;
                face_[i][j] = true;
                for (auto k : direct[j]) stack.push_back(k);
            }
        }
        maximal_.assign(n, true);
        for (std::size_t child = 0; child < n; ++child)
            for (std::size_t parent = 0; parent < n; ++parent)
                if (parent != child && face_[parent][child]) { maximal_[child] = false; break; }
        // weights on the declared maximal cells
        weights_.clear();
        for (std::size_t t = 0; t < max_cells.size(); ++t) {
            if (weights[t] <= 0) throw std::invalid_argument("weights must be positive");
            std::size_t idx = index_.at(ExtendedCell{0, max_cells[t]}.key());
            if (weights_.count(idx))
                throw std::invalid_argument("duplicate maximal cell");
            weights_[idx] = weights[t];
        }
        // purity: every maximal cell must be a weighted d-cell
        for (std::size_t i = 0; i < n; ++i) {
            if (!maximal_[i]) continue;
            if (dims_[i] != d_ || !weights_.count(i))
                throw std::invalid_argument(
                    "complex is not pure of top dimension with weighted maximal cells");
        }
        // per-stratum complex property
        std::map<std::size_t, std::vector<Polyhedron>> by_sigma;
        for (const auto& c : cells_) by_sigma[c.sigma].push_back(c.finite_part);
        for (auto& [sigma, cs] : by_sigma) {
            std::vector<Polyhedron> closed = detail::close_and_verify(cs, "WeightedComplex stratum");
            for (const auto& p : closed)
                if (!index_.count(ExtendedCell{sigma, p}.key()))
                    throw std::logic_error("stratum closure produced an unknown cell");
        }
    }

    AmbientFan amb_;
    std::vector<ExtendedCell> cells_;
    std::vector<int> dims_;
    std::vector<bool> maximal_;
    std::vector<std::vector<bool>> face_;  ///< face_[parent][child]
    std::map<std::string, std::size_t> index_;
    std::map<std::size_t, Int> weights_;
    int d_;
    bool compactified_ = true;
};

/// All faces of the closure of a single polyhedron (sedentarity zero) in
/// Trop(T_Sigma), as extended cells.
inline std::vector<ExtendedCell> closure_cells(const Polyhedron& q, const AmbientFan& amb) {
    if (q.is_empty()) throw std::invalid_argument("closure_cells: empty polyhedron");
    WeightedComplex w = WeightedComplex::build(amb, {q}, {Int(1)}, true);
    std::vector<ExtendedCell> out;
    for (std::size_t i = 0; i < w.size(); ++i) out.push_back(w.cell(i));
    return out;
}

}  // namespace tropicoh

#endif  // TROPICOH_TROPTORIC_HPP
