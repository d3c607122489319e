#pragma once
/**
 * Dual stratification of N_R attached to a complete unimodular fan.
 *
 * For a radius r > 0 the compact core rQ_{0} is the union, over maximal
 * cones, of the simplices Conv({0} u {r*v_l}).  Its barycentric cells are
 * indexed by flags of cones; grouping them by the smallest cone of the
 * flag yields half-open strata rP_sigma with
 *
 *     rQ_{0} = disjoint union of rP_sigma,
 *     N_R    = disjoint union of (rP_sigma + sigma).
 *
 * A half-open stratum is stored as its closed barycentric cells plus the
 * list of cells excluded from it (those belonging to deeper strata).
 * verify_stratification checks that a complex X in N_R decomposes as
 * X = disjoint union of (X n rP_tau) + tau, sampling one rational point in
 * the relative interior of every piece of a hyperplane arrangement that
 * refines the decomposition; failures come with an exact witness point.
 */

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "tropicoh/complex.hpp"
#include "tropicoh/polyhedron.hpp"

namespace tropicoh {

/// A finite union of closed polyhedra minus another such union.
struct HalfOpenRegion {
    std::vector<Polyhedron> closed;
    std::vector<Polyhedron> excluded;

    bool contains(const QVec& x) const {
        bool in = false;
        for (const auto& c : closed)
            if (c.contains(x)) { in = true; break; }
        if (!in) return false;
        for (const auto& e : excluded)
            if (e.contains(x)) return false;
        return true;
    }
};

namespace detail {

/// Canonical string for the hyperplane {a.x = b} (sign-normalized).
inline std::string hyperplane_key(ZVec a, Rat b) {
    std::size_t first = a.size();
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] != 0) { first = i; break; }
    if (first == a.size()) throw std::logic_error("degenerate hyperplane");
    if (a[first] < 0) {
        for (auto& c : a) c = -c;
        b = -b;
    }
    std::ostringstream os;
    for (const auto& c : a) os << c.get_str() << ",";
    os << ";" << rat_str(b);
    return os.str();
}

/// Closed half of `w` on the side a.x <= b (or >= with flip).  Assembled
/// from w's own H-representation so no free-standing halfspace (which is
/// not strongly convex) is ever constructed.
inline Polyhedron halfspace_cut(const Polyhedron& w, const ZVec& a, const Rat& b, bool flip) {
    if (w.is_empty()) return w;
    std::size_t n = w.ambient_dim();
    std::vector<QVec> rows;
    std::vector<Rat> rhs;
    auto add = [&](const ZVec& c, const Rat& d, bool neg) {
        QVec row(n);
        for (std::size_t i = 0; i < n; ++i) row[i] = neg ? Rat(-c[i]) : Rat(c[i]);
        rows.push_back(row);
        rhs.push_back(neg ? -d : d);
    };
    for (const auto& f : w.facets()) add(f.a, f.b, false);
    for (const auto& e : w.hull_equations()) {
        add(e.a, e.b, false);
        add(e.a, e.b, true);
    }
    add(a, b, flip);
    return Polyhedron::from_inequalities(n, rows, rhs);
}

/// Collect facet and hull-equation hyperplanes of `p` into `out` (dedup by key).
inline void collect_hyperplanes(const Polyhedron& p, std::map<std::string, std::pair<ZVec, Rat>>& out) {
    if (p.is_empty()) return;
    auto add = [&](const ZVec& a, const Rat& b) {
        bool zero = true;
        for (const auto& c : a)
            if (c != 0) { zero = false; break; }
        if (zero) return;
        out.emplace(hyperplane_key(a, b), std::make_pair(a, b));
    };
    for (const auto& f : p.facets()) add(f.a, f.b);
    for (const auto& e : p.hull_equations()) add(e.a, e.b);
}

/// True iff hyperplane j properly cuts w (both strict sides full-dimensional in w).
inline bool proper_cut(const Polyhedron& w, const Polyhedron& le, const Polyhedron& ge) {
    int d = w.dim();
    if (le.is_empty() || ge.is_empty()) return false;
    return le.dim() == d && ge.dim() == d && !(le == w) && !(ge == w);
}

/// Exact test: w subset of the union of `cover`.  Recursively splits w along
/// the boundary hyperplanes of the cover members; once no hyperplane cuts a
/// piece, membership of one relative-interior point decides the whole piece.
inline bool subset_of_union_rec(const Polyhedron& w,
                                const std::vector<std::pair<ZVec, Rat>>& hyps, std::size_t from,
                                const std::vector<Polyhedron>& cover) {
    if (w.is_empty()) return true;
    for (std::size_t j = from; j < hyps.size(); ++j) {
        Polyhedron le = halfspace_cut(w, hyps[j].first, hyps[j].second, false);
        Polyhedron ge = halfspace_cut(w, hyps[j].first, hyps[j].second, true);
        if (!proper_cut(w, le, ge)) continue;
        return subset_of_union_rec(le, hyps, j + 1, cover) &&
               subset_of_union_rec(ge, hyps, j + 1, cover);
    }
    QVec x = w.rel_interior_point();
    for (const auto& c : cover)
        if (c.contains(x)) return true;
    return false;
}

}  // namespace detail

/// Exact test whether the polyhedron `w` is contained in the union of `cover`.
inline bool subset_of_union(const Polyhedron& w, const std::vector<Polyhedron>& cover) {
    if (w.is_empty()) return true;
    std::map<std::string, std::pair<ZVec, Rat>> hs;
    for (const auto& c : cover) detail::collect_hyperplanes(c, hs);
    std::vector<std::pair<ZVec, Rat>> hyps;
    for (auto& kv : hs) hyps.push_back(kv.second);
    return detail::subset_of_union_rec(w, hyps, 0, cover);
}

/// The dual stratification of N_R for a complete unimodular fan and radius r.
class DualStratification {
public:
    /// Build the stratification.  Throws unless the fan is complete and
    /// unimodular and r > 0.
    static DualStratification build(const Fan& fan, const Rat& r) {
        if (r <= 0) throw std::invalid_argument("DualStratification: radius must be positive");
        if (!fan.is_complete()) throw std::invalid_argument("DualStratification: fan must be complete");
        if (!fan.is_unimodular()) throw std::invalid_argument("DualStratification: fan must be unimodular");
        DualStratification s;
        s.fan_ = fan;
        s.r_ = r;
        std::size_t n = fan.ambient_dim();
        std::size_t m = fan.size();

        // barycentric vertex of each cone: (r/dim) * sum of primitive ray generators
        s.bary_.assign(m, QVec(n, Rat(0)));
        for (std::size_t i = 1; i < m; ++i) {
            auto rays = fan.rays_of(i);
            Rat c = r / Rat(static_cast<long>(fan.dim_of(i)));
            for (std::size_t l : rays)
                for (std::size_t j = 0; j < n; ++j)
                    s.bary_[i][j] += c * Rat(fan.ray_generators()[l][j]);
        }

        // boundary cells rQ_sigma = Conv{ r*v_l : l in sigma } for sigma != 0
        s.q_cells_.assign(m, Polyhedron::empty_set(n));
        s.q_cells_[0] = Polyhedron::point(QVec(n, Rat(0)));  // placeholder; rQ_{0} is a union
        for (std::size_t i = 1; i < m; ++i) {
            std::vector<QVec> vs;
            for (std::size_t l : fan.rays_of(i)) {
                QVec v(n);
                for (std::size_t j = 0; j < n; ++j) v[j] = r * Rat(fan.ray_generators()[l][j]);
                vs.push_back(v);
            }
            s.q_cells_[i] = Polyhedron::from_generators(n, vs, {});
        }

        // flag cells Conv{b(sigma_1), ..., b(sigma_s)} grouped by sigma_1,
        // enumerated by DFS over ascending chains in the cone poset
        s.flag_cells_.assign(m, {});
        std::vector<std::size_t> chain;
        for (std::size_t start = 0; start < m; ++start) {
            chain = {start};
            s.emit_flags(chain);
        }

        // half-open strata
        s.regions_.assign(m, HalfOpenRegion{});
        for (std::size_t i = 0; i < m; ++i) {
            s.regions_[i].closed = s.flag_cells_[i];
            for (std::size_t j = 1; j < m; ++j) {
                bool deeper = (i == 0) ? true : (j != i && fan.is_face(i, j));
                if (!deeper) continue;
                for (const auto& f : s.flag_cells_[j]) s.regions_[i].excluded.push_back(f);
            }
        }

        s.check_partition();
        return s;
    }

    const Fan& fan() const { return fan_; }
    const Rat& radius() const { return r_; }
    /// rQ_sigma for a nonzero cone index (the boundary cell of the core).
    const Polyhedron& q_cell(std::size_t cone) const {
        if (cone == 0) throw std::invalid_argument("q_cell: the core rQ_{0} is a union; use core_cells()");
        return q_cells_.at(cone);
    }
    /// Top barycentric simplices covering the core rQ_{0}.
    const std::vector<Polyhedron>& core_cells() const { return flag_cells_[0]; }
    /// Barycentric cells of flags starting at the given cone.
    const std::vector<Polyhedron>& flag_cells(std::size_t cone) const { return flag_cells_.at(cone); }
    /// The half-open stratum rP_sigma.
    const HalfOpenRegion& region(std::size_t cone) const { return regions_.at(cone); }
    const QVec& barycenter(std::size_t cone) const { return bary_.at(cone); }

    /// Exact membership x in rP_tau + tau.
    bool in_shifted_region(std::size_t tau, const QVec& x) const {
        Polyhedron back = backward_cone(tau, x);
        for (const auto& f : regions_[tau].closed) {
            Polyhedron w = back.intersect(f);
            if (w.is_empty()) continue;
            if (!subset_of_union(w, regions_[tau].excluded)) return true;
        }
        return false;
    }

    /// Exact membership x in (S n rP_tau) + tau where S is the union of `cells`.
    bool in_shifted_restriction(std::size_t tau, const QVec& x,
                                const std::vector<Polyhedron>& cells) const {
        Polyhedron back = backward_cone(tau, x);
        for (const auto& c : cells) {
            Polyhedron bc = back.intersect(c);
            if (bc.is_empty()) continue;
            for (const auto& f : regions_[tau].closed) {
                Polyhedron w = bc.intersect(f);
                if (w.is_empty()) continue;
                if (!subset_of_union(w, regions_[tau].excluded)) return true;
            }
        }
        return false;
    }

private:
    /// {x} - tau, the set of points that reach x by moving along tau.
    Polyhedron backward_cone(std::size_t tau, const QVec& x) const {
        std::size_t n = fan_.ambient_dim();
        std::vector<QVec> rays;
        for (std::size_t l : fan_.rays_of(tau)) {
            QVec v(n);
            for (std::size_t j = 0; j < n; ++j) v[j] = -Rat(fan_.ray_generators()[l][j]);
            rays.push_back(v);
        }
        return Polyhedron::from_generators(n, {x}, rays);
    }

    void emit_flags(std::vector<std::size_t>& chain) {
        std::vector<QVec> vs;
        for (std::size_t c : chain) vs.push_back(bary_[c]);
        flag_cells_[chain.front()].push_back(
            Polyhedron::from_generators(fan_.ambient_dim(), vs, {}));
        for (std::size_t next = 1; next < fan_.size(); ++next) {
            if (next == chain.back()) continue;
            if (chain.back() != 0 && !fan_.is_face(chain.back(), next)) continue;
            if (chain.back() == 0 && next == 0) continue;
            chain.push_back(next);
            emit_flags(chain);
            chain.pop_back();
        }
    }

    /// Sanity check of rQ_{0} = disjoint union of rP_sigma on the barycentric
    /// samples: the relative-interior point of every flag cell must lie in
    /// exactly one stratum.
    void check_partition() const {
        for (std::size_t i = 0; i < fan_.size(); ++i)
            for (const auto& f : flag_cells_[i]) {
                QVec x = f.rel_interior_point();
                std::size_t cnt = 0;
                for (const auto& rg : regions_)
                    if (rg.contains(x)) ++cnt;
                if (cnt != 1)
                    throw std::logic_error("DualStratification: strata fail to partition the core");
            }
    }

    Fan fan_;
    Rat r_;
    std::vector<QVec> bary_;
    std::vector<Polyhedron> q_cells_;
    std::vector<std::vector<Polyhedron>> flag_cells_;
    std::vector<HalfOpenRegion> regions_;
};

/// Result of verify_stratification: a failure carries an exact witness point.
struct StratificationCheck {
    bool ok = true;
    QVec witness;
    std::string message;
};

/// Checks X = disjoint union over tau of (X n rP_tau) + tau, where X is the
/// union of the given maximal cells in N_R.  Sample points are the relative
/// interiors of the pieces of a hyperplane arrangement refining all the sets
/// involved; each sample is tested exactly.
inline StratificationCheck verify_stratification(const DualStratification& strat,
                                                 const std::vector<Polyhedron>& max_cells) {
    const Fan& fan = strat.fan();
    std::size_t m = fan.size();

    // hyperplanes of the candidate pieces ((C n F) + tau and (C n F n E) + tau)
    std::map<std::string, std::pair<ZVec, Rat>> hs;
    for (std::size_t tau = 0; tau < m; ++tau) {
        std::vector<QVec> tau_rays;
        for (std::size_t l : fan.rays_of(tau)) {
            QVec v(fan.ambient_dim());
            for (std::size_t j = 0; j < fan.ambient_dim(); ++j)
                v[j] = Rat(fan.ray_generators()[l][j]);
            tau_rays.push_back(v);
        }
        Polyhedron tau_cone = Polyhedron::from_generators(fan.ambient_dim(),
                                                          {QVec(fan.ambient_dim(), Rat(0))}, tau_rays);
        const auto& rg = strat.region(tau);
        for (const auto& c : max_cells)
            for (const auto& f : rg.closed) {
                Polyhedron base = c.intersect(f);
                if (base.is_empty()) continue;
                detail::collect_hyperplanes(base.minkowski_sum(tau_cone), hs);
                for (const auto& e : rg.excluded) {
                    Polyhedron cut = base.intersect(e);
                    if (cut.is_empty()) continue;
                    detail::collect_hyperplanes(cut.minkowski_sum(tau_cone), hs);
                }
            }
    }
    std::vector<std::pair<ZVec, Rat>> hyps;
    for (auto& kv : hs) hyps.push_back(kv.second);

    // recursive arrangement subdivision of one cell; samples every piece
    StratificationCheck res;
    auto covered_count = [&](const QVec& x) {
        std::size_t cnt = 0;
        for (std::size_t tau = 0; tau < m; ++tau)
            if (strat.in_shifted_restriction(tau, x, max_cells)) ++cnt;
        return cnt;
    };
    for (const auto& cell : max_cells) {
        if (cell.is_empty()) continue;
        // pieces paired with the index of the next hyperplane to try
        std::vector<std::pair<Polyhedron, std::size_t>> work{{cell, 0}};
        while (!work.empty()) {
            auto [w, from] = work.back();
            work.pop_back();
            bool split = false;
            for (std::size_t j = from; j < hyps.size(); ++j) {
                Polyhedron le = detail::halfspace_cut(w, hyps[j].first, hyps[j].second, false);
                Polyhedron ge = detail::halfspace_cut(w, hyps[j].first, hyps[j].second, true);
                if (!detail::proper_cut(w, le, ge)) continue;
                work.push_back({le, j + 1});
                work.push_back({ge, j + 1});
                work.push_back({le.intersect(ge), j + 1});
                split = true;
                break;
            }
            if (split) continue;
            QVec x = w.rel_interior_point();
            std::size_t cnt = covered_count(x);
            if (cnt == 1) continue;
            res.ok = false;
            res.witness = x;
            std::ostringstream os;
            os << "point (";
            for (std::size_t j = 0; j < x.size(); ++j) os << (j ? "," : "") << rat_str(x[j]);
            os << ") lies in " << cnt << " shifted strata (expected exactly 1)";
            res.message = os.str();
            return res;
        }
    }
    return res;
}

/// Doubles the radius until verify_stratification passes (at most 20 times).
inline std::pair<DualStratification, StratificationCheck>
fit_stratification(const Fan& fan, const std::vector<Polyhedron>& max_cells, Rat r0 = Rat(1)) {
    for (int round = 0; round <= 20; ++round) {
        DualStratification s = DualStratification::build(fan, r0);
        StratificationCheck c = verify_stratification(s, max_cells);
        if (c.ok) return {s, c};
        r0 *= 2;
    }
    throw std::runtime_error("fit_stratification: no valid radius after 20 doublings");
}

}  // namespace tropicoh
