// Degeneration of a tropical variety over the cone of its polyhedral
// structure: the fan over the structure in N_R x R, the cone complex it
// carries, and the special-fibre strata X_J indexed by subsets of the
// height-one rays (one ray per vertex of the structure).
//
// The total space lives over the last coordinate (the "height"); the open
// part at height > 0 is a cylinder on the input, and the union of the
// strata over the height-one rays is a strictly semi-stable model of it.
#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "tropicoh/linalg.hpp"
#include "tropicoh/polyhedron.hpp"
#include "tropicoh/complex.hpp"
#include "tropicoh/rat.hpp"
#include "tropicoh/snf.hpp"
#include "tropicoh/troptoric.hpp"

namespace tropicoh {

/// The cone construction over a weighted complex X in N_R = R^n: the fan
/// over its finite cells in R^{n+1}, the weighted cone complex it supports,
/// and the distinguished height-one rays (one per vertex of X, in the
/// vertex order of X, which fixes every sign downstream).
struct ConeData {
    WeightedComplex base;             ///< the input complex
    Fan restricted;                   ///< fan over the finite cells in R^{n+1}
    WeightedComplex total;            ///< weighted cone complex, compactified
    std::vector<std::size_t> rays_I;  ///< height-one ray indices, vertex order
    std::vector<QVec> vertices;       ///< vertex of the base under each ray
};

/// One closed stratum X_J of the special fibre: the compactified star fan
/// of the cone spanned by the rays in J, with weights inherited from the
/// top cells of the cone complex.
struct ReductionStratum {
    std::vector<std::size_t> J;  ///< sorted positions into ConeData::rays_I
    std::size_t sigma = 0;       ///< cone index of sigma_J in the restricted fan
    WeightedComplex xj;          ///< compactified star-fan realization
    std::vector<Int> weights;    ///< weights of its maximal cells, build order
};

struct SemistableReduction {
    std::vector<ReductionStratum> strata;  ///< every nonempty J
    std::vector<std::size_t> x_infinity;   ///< strata with #J = 1 (their union
                                           ///< is the whole special fibre)
};

namespace detail {

/// The cone over cell x {1}: generated by (v, 1) over the vertices and
/// (r, 0) over the recession rays.
inline Polyhedron cone_over(const Polyhedron& p) {
    std::size_t n = p.ambient_dim();
    std::vector<QVec> gens;
    for (const auto& v : p.vertices()) {
        QVec g(v);
        g.push_back(Rat(1));
        gens.push_back(g);
    }
    for (const auto& r : p.rays()) {
        QVec g(r);
        g.push_back(Rat(0));
        gens.push_back(g);
    }
    return Polyhedron::cone_from_rays(n + 1, gens);
}

/// The cell embedded at height one in R^{n+1}.
inline Polyhedron at_height_one(const Polyhedron& p) {
    std::size_t n = p.ambient_dim();
    std::vector<QVec> verts, rays;
    for (const auto& v : p.vertices()) {
        QVec g(v);
        g.push_back(Rat(1));
        verts.push_back(g);
    }
    for (const auto& r : p.rays()) {
        QVec g(r);
        g.push_back(Rat(0));
        rays.push_back(g);
    }
    return Polyhedron::from_generators(n + 1, verts, rays);
}

/// Slice a polyhedron in R^{n+1} with the hyperplane {last coordinate = 1}.
inline Polyhedron height_one_slice(const Polyhedron& p) {
    std::size_t n1 = p.ambient_dim();
    std::vector<QVec> rows;
    std::vector<Rat> rhs;
    for (const auto& f : p.facets()) {
        QVec row;
        for (const auto& a : f.a) row.emplace_back(a);
        rows.push_back(row);
        rhs.push_back(f.b);
    }
    for (const auto& e : p.hull_equations()) {
        QVec row;
        for (const auto& a : e.a) row.emplace_back(a);
        rows.push_back(row);
        rhs.push_back(e.b);
        for (auto& a : row) a = -a;
        rows.push_back(row);
        rhs.push_back(-e.b);
    }
    QVec h(n1, Rat(0));
    h[n1 - 1] = 1;
    rows.push_back(h);
    rhs.push_back(Rat(1));
    h[n1 - 1] = -1;
    rows.push_back(h);
    rhs.push_back(Rat(-1));
    return Polyhedron::from_inequalities(n1, rows, rhs);
}

}  // namespace detail

/// Builds the fan over the finite cells of x in R^{n+1} together with the
/// weighted cone complex on it.  Requires the recession cones of the finite
/// cells to form a fan (checked, with a witness pair on failure), pure
/// dimension, and a unimodular structure (the fan over it is checked to be
/// unimodular, which fails exactly when the input structure is not).
inline ConeData fan_over(const WeightedComplex& x) {
    const Fan& fan = x.ambient().fan;
    std::size_t n = fan.ambient_dim();
    std::vector<std::size_t> finite = x.finite_cells();
    if (finite.empty()) throw std::invalid_argument("fan_over: no finite cells");
    for (std::size_t i : finite)
        if (x.is_maximal(i) && x.dim_of(i) != x.dim())
            throw std::invalid_argument("fan_over: complex is not pure-dimensional");

    // recession cones must pairwise meet in common faces
    std::vector<Polyhedron> recs;
    for (std::size_t i : finite) recs.push_back(x.cell(i).finite_part.recession_cone());
    for (std::size_t a = 0; a < recs.size(); ++a)
        for (std::size_t b = a + 1; b < recs.size(); ++b) {
            Polyhedron k = recs[a].intersect(recs[b]);
            auto is_face_of = [&](const Polyhedron& big) {
                for (const auto& f : big.faces())
                    if (f == k) return true;
                return false;
            };
            if (!is_face_of(recs[a]) || !is_face_of(recs[b])) {
                std::ostringstream os;
                os << "fan_over: recession cones of cells " << finite[a] << " and "
                   << finite[b] << " do not form a fan";
                throw std::invalid_argument(os.str());
            }
        }

    ConeData cd;
    cd.base = x;
    std::vector<Polyhedron> cones;
    for (std::size_t idx = 0; idx < finite.size(); ++idx) {
        std::size_t i = finite[idx];
        Polyhedron c = detail::cone_over(x.cell(i).finite_part);
        // the defining property: slicing the cone at height one gives the cell back
        if (!(detail::height_one_slice(c) == detail::at_height_one(x.cell(i).finite_part)))
            throw std::logic_error("fan_over: height-one slice does not recover the cell");
        cones.push_back(c);
        std::vector<QVec> rec0;
        for (const auto& r : recs[idx].rays()) {
            QVec g(r);
            g.push_back(Rat(0));
            rec0.push_back(g);
        }
        cones.push_back(Polyhedron::cone_from_rays(n + 1, rec0));
    }
    cd.restricted = Fan::from_cones(n + 1, cones);
    if (!cd.restricted.is_unimodular())
        throw std::invalid_argument(
            "fan_over: the fan over the structure is not unimodular (refine the input "
            "structure first)");

    // every cone not lying at height zero is the cone over a unique finite cell
    {
        std::map<std::string, std::size_t> over;
        for (std::size_t i : finite) over[detail::cone_over(x.cell(i).finite_part).key()] = i;
        std::size_t positive = 0;
        for (std::size_t c = 0; c < cd.restricted.size(); ++c) {
            bool at_zero = true;
            for (const auto& v : cd.restricted.cell(c).rays())
                if (v[n] != 0) at_zero = false;
            if (cd.restricted.dim_of(c) == 0) at_zero = true;
            if (at_zero) continue;
            ++positive;
            if (!over.count(cd.restricted.cell(c).key()))
                throw std::logic_error("fan_over: a positive-height cone is not the cone "
                                       "over a cell of the input");
        }
        if (positive != finite.size())
            throw std::logic_error("fan_over: cells do not biject with positive-height cones");
    }

    std::vector<Polyhedron> max_cells;
    std::vector<Int> weights;
    for (std::size_t i : finite)
        if (x.is_maximal(i)) {
            max_cells.push_back(detail::cone_over(x.cell(i).finite_part));
            weights.push_back(x.weight(i));
        }
    cd.total = WeightedComplex::build(AmbientFan::make(cd.restricted), max_cells, weights, true);

    // height-one rays, in the vertex order of the input complex
    const std::vector<ZVec>& rg = cd.restricted.ray_generators();
    for (std::size_t i : finite) {
        if (x.dim_of(i) != 0) continue;
        QVec v = x.cell(i).finite_part.vertices()[0];
        QVec lifted(v);
        lifted.push_back(Rat(1));
        ZVec prim = primitive_of_rat(lifted);
        std::size_t found = rg.size();
        for (std::size_t t = 0; t < rg.size(); ++t)
            if (rg[t] == prim) found = t;
        if (found == rg.size())
            throw std::logic_error("fan_over: missing ray over a vertex");
        cd.rays_I.push_back(found);
        cd.vertices.push_back(v);
    }
    std::size_t positive_rays = 0;
    for (const auto& r : rg)
        if (r[n] > 0) ++positive_rays;
    if (positive_rays != cd.rays_I.size())
        throw std::logic_error("fan_over: height-one rays do not biject with vertices");
    return cd;
}

/// All nonempty special-fibre strata X_J of the cone complex, each realized
/// as the compactified star fan of sigma_J with inherited weights, checked
/// to be balanced, regular at infinity, and of dimension dim X - #J + 1.
inline SemistableReduction semistable_reduction(const ConeData& cd) {
    const Fan& fan = cd.restricted;
    std::size_t ni = cd.rays_I.size();
    if (ni > 8 * sizeof(unsigned long) - 1)
        throw std::invalid_argument("semistable_reduction: too many vertices");
    std::map<std::vector<std::size_t>, std::size_t> cone_of_rays;
    for (std::size_t c = 0; c < fan.size(); ++c) {
        std::vector<std::size_t> rc = fan.rays_of(c);
        std::sort(rc.begin(), rc.end());
        cone_of_rays[rc] = c;
    }
    int dtop = cd.total.dim();

    SemistableReduction out;
    for (unsigned long mask = 1; mask < (1ul << ni); ++mask) {
        std::vector<std::size_t> J;
        std::vector<std::size_t> rays;
        for (std::size_t i = 0; i < ni; ++i)
            if (mask & (1ul << i)) {
                J.push_back(i);
                rays.push_back(cd.rays_I[i]);
            }
        std::sort(rays.begin(), rays.end());
        auto it = cone_of_rays.find(rays);
        if (it == cone_of_rays.end()) continue;  // X_J empty
        ReductionStratum st;
        st.J = J;
        st.sigma = it->second;
        const QMat& proj = fan.quotient_projection(st.sigma);
        std::size_t m = fan.ambient_dim() - J.size();
        std::vector<Polyhedron> star_cones;
        for (std::size_t tau : fan.cones_above(st.sigma))
            star_cones.push_back(fan.cell(tau).linear_image(proj));
        Fan star = Fan::from_cones(m, star_cones);
        std::vector<Polyhedron> top;
        for (std::size_t tau : fan.cones_above(st.sigma)) {
            if (fan.dim_of(tau) != dtop) continue;
            std::size_t ci = cd.total.index_of(ExtendedCell{0, fan.cell(tau)});
            top.push_back(fan.cell(tau).linear_image(proj));
            st.weights.push_back(cd.total.weight(ci));
        }
        if (top.empty()) continue;
        st.xj = WeightedComplex::build(AmbientFan::make(star), top, st.weights, true);
        if (st.xj.dim() != dtop - static_cast<int>(J.size()))
            throw std::logic_error("semistable_reduction: stratum has wrong dimension");
        auto bal = st.xj.check_balancing();
        if (!bal.first)
            throw std::logic_error("semistable_reduction: stratum is not balanced: " +
                                   bal.second[0]);
        auto reg = st.xj.check_regular_at_infinity();
        if (!reg.first)
            throw std::logic_error("semistable_reduction: stratum not regular at infinity: " +
                                   reg.second[0]);
        if (J.size() == 1) out.x_infinity.push_back(out.strata.size());
        out.strata.push_back(std::move(st));
    }
    return out;
}

}  // namespace tropicoh
