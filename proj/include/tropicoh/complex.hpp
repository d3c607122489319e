/**
 * Polyhedral complexes and fans: collections of polyhedra closed under
 * faces whose pairwise intersections are common faces.  Fans additionally
 * carry per-cone adapted lattice bases and quotient projections.
 */
#ifndef TROPICOH_COMPLEX_HPP
#define TROPICOH_COMPLEX_HPP

#include <algorithm>
#include <cstddef>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "tropicoh/polyhedron.hpp"
#include "tropicoh/snf.hpp"

namespace tropicoh {

namespace detail {

/// Close a list of polyhedra under faces, dedup, sort by (dim, key), and
/// verify the complex property (pairwise intersections are common faces).
inline std::vector<Polyhedron> close_and_verify(const std::vector<Polyhedron>& gens,
                                                const char* what) {
    std::map<std::string, Polyhedron> seen;
    for (const auto& p : gens) {
        if (p.is_empty()) throw std::invalid_argument(std::string(what) + ": empty cell");
        for (const auto& f : p.faces()) seen.emplace(f.key(), f);
    }
    std::vector<Polyhedron> cells;
    for (auto& [k, p] : seen) cells.push_back(p);
    std::sort(cells.begin(), cells.end(), [](const Polyhedron& a, const Polyhedron& b) {
        if (a.dim() != b.dim()) return a.dim() < b.dim();
        return a.key() < b.key();
    });
    for (std::size_t i = 0; i < cells.size(); ++i)
        for (std::size_t j = i + 1; j < cells.size(); ++j) {
            Polyhedron cap = cells[i].intersect(cells[j]);
            if (cap.is_empty()) continue;
            if (!cells[i].has_face(cap) || !cells[j].has_face(cap))
                throw std::invalid_argument(std::string(what) +
                                            ": cells " + std::to_string(i) + " and " +
                                            std::to_string(j) +
                                            " intersect in a non-face");
            if (!seen.count(cap.key()))
                throw std::logic_error(std::string(what) + ": intersection missing from closure");
        }
    return cells;
}

}  // namespace detail

/// A finite polyhedral complex in R^n.
class PolyComplex {
public:
    PolyComplex() : n_(0) {}

    static PolyComplex from_cells(std::size_t n, const std::vector<Polyhedron>& gens) {
        PolyComplex c;
        c.n_ = n;
        c.cells_ = detail::close_and_verify(gens, "PolyComplex");
        c.finish();
        return c;
    }

    std::size_t ambient_dim() const { return n_; }
    std::size_t size() const { return cells_.size(); }
    const Polyhedron& cell(std::size_t i) const { return cells_[i]; }
    const std::vector<Polyhedron>& cells() const { return cells_; }
    int dim_of(std::size_t i) const { return dims_[i]; }
    int dim() const { return cells_.empty() ? -1 : dims_.back(); }
    bool is_maximal(std::size_t i) const { return maximal_[i]; }

    /// child is a face of parent (reflexive).
    bool is_face(std::size_t child, std::size_t parent) const {
        return face_[parent][child];
    }
    /// All (child, parent) pairs with child a proper face of parent.
    std::vector<std::pair<std::size_t, std::size_t>> face_relation() const {
        std::vector<std::pair<std::size_t, std::size_t>> out;
        for (std::size_t p = 0; p < size(); ++p)
            for (std::size_t c = 0; c < size(); ++c)
                if (c != p && face_[p][c]) out.emplace_back(c, p);
        return out;
    }

    std::size_t index_of(const Polyhedron& p) const {
        auto it = index_.find(p.key());
        if (it == index_.end()) throw std::invalid_argument("cell not in complex");
        return it->second;
    }
    bool has_cell(const Polyhedron& p) const { return index_.count(p.key()) != 0; }

    bool is_compact() const {
        for (const auto& c : cells_)
            if (!c.rays().empty()) return false;
        return true;
    }

    /// Does x lie in the support?
    bool supports(const QVec& x) const {
        for (const auto& c : cells_)
            if (c.contains(x)) return true;
        return false;
    }

protected:
    void finish() {
        dims_.clear();
        index_.clear();
        for (std::size_t i = 0; i < cells_.size(); ++i) {
            dims_.push_back(cells_[i].dim());
            index_[cells_[i].key()] = i;
        }
        face_.assign(size(), std::vector<bool>(size(), false));
        for (std::size_t p = 0; p < size(); ++p)
            for (std::size_t c = 0; c < size(); ++c)
                face_[p][c] = (c == p) || (dims_[c] < dims_[p] && cells_[p].has_face(cells_[c]));
        maximal_.assign(size(), true);
        for (std::size_t c = 0; c < size(); ++c)
            for (std::size_t p = 0; p < size(); ++p)
                if (p != c && face_[p][c]) { maximal_[c] = false; break; }
    }

    std::size_t n_;
    std::vector<Polyhedron> cells_;
    std::vector<int> dims_;
    std::vector<bool> maximal_;
    std::vector<std::vector<bool>> face_;  ///< face_[parent][child]
    std::map<std::string, std::size_t> index_;
};

/// The face lattice of one polyhedron as a complex.
inline PolyComplex face_lattice(const Polyhedron& p) {
    if (p.is_empty()) throw std::invalid_argument("face_lattice of empty polyhedron");
    return PolyComplex::from_cells(p.ambient_dim(), {p});
}

/// A fan: a polyhedral complex of strongly convex cones with apex 0.
/// Carries an adapted Z-basis per cone when the fan is unimodular.
class Fan : public PolyComplex {
public:
    Fan() = default;

    static Fan from_cones(std::size_t n, const std::vector<Polyhedron>& gens) {
        Fan f;
        f.n_ = n;
        std::vector<Polyhedron> with_origin = gens;
        with_origin.push_back(Polyhedron::point(QVec(n, Rat(0))));
        f.cells_ = detail::close_and_verify(with_origin, "Fan");
        QVec zero(n, Rat(0));
        for (const auto& c : f.cells_)
            if (c.vertices().size() != 1 || c.vertices()[0] != zero)
                throw std::invalid_argument("Fan: cell is not a cone with apex 0");
        f.finish();
        f.build_ray_data();
        return f;
    }

    static Fan from_rays_and_cones(std::size_t n, const std::vector<ZVec>& rays,
                                   const std::vector<std::vector<std::size_t>>& cones) {
        std::vector<Polyhedron> gens;
        for (const auto& c : cones) {
            std::vector<QVec> rs;
            for (auto i : c) rs.push_back(to_qvec(rays.at(i)));
            gens.push_back(Polyhedron::cone_from_rays(n, rs));
        }
        if (gens.empty()) gens.push_back(Polyhedron::point(QVec(n, Rat(0))));
        return from_cones(n, gens);
    }

    /// Primitive generators of the rays (1-dim cones), indexed like ray_cone_ids().
    const std::vector<ZVec>& ray_generators() const { return ray_gens_; }
    const std::vector<std::size_t>& ray_cone_ids() const { return ray_cones_; }

    /// Ray indices (into ray_generators) spanning cone i; requires simplicial.
    std::vector<std::size_t> rays_of(std::size_t i) const {
        std::vector<std::size_t> out;
        for (std::size_t r = 0; r < ray_cones_.size(); ++r)
            if (face_[i][ray_cones_[r]]) out.push_back(r);
        return out;
    }

    bool is_simplicial() const {
        for (std::size_t i = 0; i < size(); ++i)
            if (static_cast<int>(rays_of(i).size()) != dims_[i]) return false;
        return true;
    }

    bool is_unimodular() const {
        if (!is_simplicial()) return false;
        for (std::size_t i = 0; i < size(); ++i) {
            ZMat m;
            for (auto r : rays_of(i)) m.push_back(ray_gens_[r]);
            if (m.empty()) continue;
            SmithResult s = smith_normal_form(m);
            if (s.divisors.size() != m.size()) return false;
            for (const auto& d : s.divisors)
                if (d != 1) return false;
        }
        return true;
    }

    /// Complete: support is all of R^n.  Sound for fans: requires a
    /// full-dimensional cone, all maximal cones full-dimensional, and every
    /// (n-1)-cone to be a facet of exactly two n-cones.
    bool is_complete() const {
        if (n_ == 0) return size() == 1;
        bool has_full = false;
        for (std::size_t i = 0; i < size(); ++i) {
            if (dims_[i] == static_cast<int>(n_)) has_full = true;
            else if (maximal_[i]) return false;
        }
        if (!has_full) return false;
        for (std::size_t i = 0; i < size(); ++i) {
            if (dims_[i] != static_cast<int>(n_) - 1) continue;
            int cofaces = 0;
            for (std::size_t p = 0; p < size(); ++p)
                if (p != i && dims_[p] == static_cast<int>(n_) && face_[p][i]) ++cofaces;
            if (cofaces != 2) return false;
        }
        return true;
    }

    /// Unimodular adapted basis for cone i: an n x n integer matrix with
    /// |det| = 1 whose first dim(i) rows are the primitive ray generators.
    const ZMat& adapted_basis(std::size_t i) const {
        if (bases_.empty()) build_bases();
        return bases_[i];
    }

    /// Coordinates on the quotient N/N_sigma for cone i: the last
    /// n - dim(i) coordinate functionals of the adapted basis, as a matrix
    /// acting on ambient column vectors.
    const QMat& quotient_projection(std::size_t i) const {
        if (bases_.empty()) build_bases();
        return projections_[i];
    }

    /// The index of the unique cone containing x in its relative interior,
    /// or size() if x is outside the support.
    std::size_t which_cone(const QVec& x) const {
        for (std::size_t i = 0; i < size(); ++i) {
            const Polyhedron& c = cells_[i];
            if (!c.contains(x)) continue;
            bool interior = true;
            for (const auto& f : c.facets())
                if (dot(to_qvec(f.a), x) == f.b) { interior = false; break; }
            if (interior) return i;
        }
        return size();
    }

    /// Cones of this fan that contain cone i as a face (including i).
    std::vector<std::size_t> cones_above(std::size_t i) const {
        std::vector<std::size_t> out;
        for (std::size_t p = 0; p < size(); ++p)
            if (face_[p][i]) out.push_back(p);
        return out;
    }

private:
    void build_ray_data() {
        ray_gens_.clear();
        ray_cones_.clear();
        for (std::size_t i = 0; i < size(); ++i) {
            if (dims_[i] != 1) continue;
            ray_cones_.push_back(i);
            ray_gens_.push_back(primitive_of_rat(cells_[i].rays()[0]));
        }
    }

    void build_bases() const {
        bases_.resize(size());
        projections_.resize(size());
        for (std::size_t i = 0; i < size(); ++i) {
            ZMat rows;
            for (auto r : rays_of(i)) rows.push_back(ray_gens_[r]);
            if (static_cast<int>(rows.size()) != dims_[i])
                throw std::invalid_argument("adapted_basis: cone is not simplicial");
            bases_[i] = complete_to_basis(rows, n_);
            // coordinates w.r.t. basis rows b_t: x = sum c_t b_t, i.e.
            // c = (B^T)^{-1} x; keep the last n-k functionals.
            QMat bq(n_, n_);
            for (std::size_t a = 0; a < n_; ++a)
                for (std::size_t b = 0; b < n_; ++b) bq(a, b) = Rat(bases_[i][a][b]);
            QMat binv_t = inverse(bq.transpose());
            std::size_t k = static_cast<std::size_t>(dims_[i]);
            QMat proj(n_ - k, n_);
            for (std::size_t a = k; a < n_; ++a)
                for (std::size_t b = 0; b < n_; ++b) proj(a - k, b) = binv_t(a, b);
            projections_[i] = proj;
        }
    }

    std::vector<ZVec> ray_gens_;
    std::vector<std::size_t> ray_cones_;
    mutable std::vector<ZMat> bases_;
    mutable std::vector<QMat> projections_;
};

}  // namespace tropicoh

#endif  // TROPICOH_COMPLEX_HPP
