#pragma once
/**
 * Multi-tangent coefficient spaces and cellular tropical cohomology.
 *
 * For a cell P of a weighted complex, working in the coordinates of its
 * stratum,
 *
 *     F_p(P) = sum over cofaces P' of P with the same sedentarity of
 *              wedge^p Tan_Q(P'),
 *
 * and the dual coefficient space is wedge^p of the stratum's character
 * lattice modulo the annihilator of F_p(P).  The cellular cochain complex
 * in bidegree (p, q) has one copy of the dual of F_p(P) per q-cell;
 * restriction maps are dual to the inclusions F_p(P) into F_p(Q) (equal
 * sedentarity) and to the stratum projections (sedentarity change), with
 * incidence signs derived from fixed per-cell orientations.  d*d = 0 is
 * asserted on assembly, never assumed.
 *
 * For a compact complex this computes the tropical Hodge numbers h^{p,q};
 * relative cohomology against a closed subcomplex D uses the subcomplex of
 * cochains supported on cells having a face in D.
 */

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "tropicoh/chain.hpp"
#include "tropicoh/linalg.hpp"
#include "tropicoh/stratification.hpp"
#include "tropicoh/subquotient.hpp"
#include "tropicoh/troptoric.hpp"
#include "tropicoh/wedge.hpp"

namespace tropicoh {

/// The multi-tangent space of one cell: F_p(P) inside the wedge power of
/// its stratum's coordinates, plus the dual space as a quotient.
struct FStalk {
    std::size_t cell = 0;
    std::size_t p = 0;
    std::size_t wedge_dim = 0;        ///< binom(stratum rank, p)
    std::vector<QVec> basis;          ///< RREF basis of F_p(P)
    Subquotient dual_space;           ///< wedge^p(M_sigma) / ann(F_p(P))
    std::size_t dim() const { return basis.size(); }
};

/// F_p(P) and its dual for one cell of the complex.
inline FStalk multitangent(const WeightedComplex& x, std::size_t ci, std::size_t p) {
    if (ci >= x.size()) throw std::invalid_argument("multitangent: cell index out of range");
    std::size_t m = x.cell(ci).finite_part.ambient_dim();
    FStalk st;
    st.cell = ci;
    st.p = p;
    st.wedge_dim = (p <= m) ? binom(m, p) : 0;
    std::vector<QVec> gens;
    for (std::size_t pj = 0; pj < x.size(); ++pj) {
        if (x.cell(pj).sigma != x.cell(ci).sigma || !x.is_face(ci, pj)) continue;
        std::vector<QVec> tb = x.cell(pj).finite_part.tangent_basis();
        if (p > tb.size()) continue;
        for (const auto& idx : multi_indices(tb.size(), p)) {
            std::vector<QVec> rows;
            for (std::size_t t : idx) rows.push_back(tb[t]);
            gens.push_back(wedge_of_rows(rows, m));
        }
    }
    st.basis = rowspace_basis(from_rows(gens, st.wedge_dim));
    std::vector<QVec> ann = kernel_basis(from_rows(st.basis, st.wedge_dim));
    std::vector<QVec> full;
    for (std::size_t i = 0; i < st.wedge_dim; ++i) {
        QVec e(st.wedge_dim, Rat(0));
        e[i] = 1;
        full.push_back(e);
    }
    st.dual_space = Subquotient(st.wedge_dim, full, ann);
    return st;
}

namespace detail {

/// Coordinates of `v` in the row basis `basis`; throws with `what` if v is
/// outside the span (an upstream invariant violation, not user error).
inline QVec coords_in(const std::vector<QVec>& basis, std::size_t n, const QVec& v,
                      const char* what) {
    QVec c;
    if (!solve(from_rows(basis, n).transpose(), v, c))
        throw std::logic_error(std::string("cohomology: vector escapes its span in ") + what);
    return c;
}

inline int sign_of_det(QMat m) {
    Rat d = det(m);
    if (d == 0) throw std::logic_error("cohomology: degenerate orientation comparison");
    return d > 0 ? 1 : -1;
}

/// Incidence sign for a facet Q of P in the same stratum: the determinant
/// sign of (inward vector, orientation of Q) written in P's orientation,
/// where the orientations are the deterministic RREF tangent bases.
inline int incidence_sign_equal(const Polyhedron& pfin, const Polyhedron& qfin) {
    std::vector<QVec> op = pfin.tangent_basis();
    std::vector<QVec> oq = qfin.tangent_basis();
    std::size_t m = pfin.ambient_dim();
    QVec u = pfin.rel_interior_point();
    QVec qr = qfin.rel_interior_point();
    for (std::size_t j = 0; j < m; ++j) u[j] -= qr[j];
    std::vector<QVec> all = {u};
    for (const auto& r : oq) all.push_back(r);
    QMat coeff(all.size(), op.size());
    for (std::size_t i = 0; i < all.size(); ++i) {
        QVec c = coords_in(op, m, all[i], "incidence (equal sedentarity)");
        for (std::size_t j = 0; j < op.size(); ++j) coeff(i, j) = c[j];
    }
    return sign_of_det(coeff);
}

/// Incidence sign for a facet Q of P one stratum deeper: the kernel vector
/// of the stratum projection restricted to Tan(P), oriented toward
/// infinity (into the recession cone), followed by lifts of Q's
/// orientation, written in P's orientation.
inline int incidence_sign_deep(const Polyhedron& pfin, const Polyhedron& qfin, const QMat& proj) {
    std::vector<QVec> op = pfin.tangent_basis();
    std::vector<QVec> oq = qfin.tangent_basis();
    std::size_t mp = pfin.ambient_dim();
    // proj restricted to Tan(P) in the op-basis
    QMat restr(proj.rows(), op.size());
    for (std::size_t j = 0; j < op.size(); ++j) {
        QVec img(proj.rows(), Rat(0));
        for (std::size_t r = 0; r < proj.rows(); ++r)
            for (std::size_t c = 0; c < proj.cols(); ++c) img[r] += proj(r, c) * op[j][c];
        for (std::size_t r = 0; r < proj.rows(); ++r) restr(r, j) = img[r];
    }
    std::vector<QVec> ker = kernel_basis(restr);
    if (ker.size() != 1)
        throw std::logic_error("cohomology: infinity facet with kernel rank != 1");
    QVec w(mp, Rat(0));
    for (std::size_t j = 0; j < op.size(); ++j)
        for (std::size_t c = 0; c < mp; ++c) w[c] += ker[0][j] * op[j][c];
    Polyhedron rec = pfin.recession_cone();
    QVec wc = ker[0];
    if (!rec.contains(w)) {
        for (auto& c : w) c = -c;
        for (auto& c : wc) c = -c;
        if (!rec.contains(w))
            throw std::logic_error("cohomology: infinity facet direction escapes recession cone");
    }
    QMat coeff(oq.size() + 1, op.size());
    for (std::size_t j = 0; j < op.size(); ++j) coeff(0, j) = wc[j];
    for (std::size_t i = 0; i < oq.size(); ++i) {
        QVec c;
        if (!solve(restr, oq[i], c))
            throw std::logic_error("cohomology: cannot lift facet orientation across strata");
        for (std::size_t j = 0; j < op.size(); ++j) coeff(i + 1, j) = c[j];
    }
    return sign_of_det(coeff);
}

}  // namespace detail

/// The cellular cochain complex computing H^q(X, dual of F_p), together
/// with the per-degree cell offsets (cells listed in index order).
struct CellularCochainComplex {
    std::size_t p = 0;
    CochainComplex complex;
    std::vector<std::vector<std::size_t>> cells_by_dim;  ///< cell indices per degree
    std::vector<std::size_t> offset;                     ///< summand offset per cell index
    std::vector<FStalk> stalks;                          ///< per cell index
};

/// Assembles the cellular complex for a fixed p, restricted to the cells in
/// `support` (all cells when empty).  The support must be closed under
/// taking cofaces so that the restriction is a subcomplex; this is the
/// caller's responsibility (checked for relative cohomology).
inline CellularCochainComplex cellular_complex(const WeightedComplex& x, std::size_t p,
                                               const std::vector<bool>& support = {}) {
    if (x.dim() < 0) throw std::invalid_argument("cellular_complex: empty complex");
    auto in_support = [&](std::size_t i) { return support.empty() || support[i]; };
    CellularCochainComplex cc;
    cc.p = p;
    std::size_t top = static_cast<std::size_t>(x.dim());
    cc.cells_by_dim.assign(top + 1, {});
    cc.offset.assign(x.size(), 0);
    cc.stalks.reserve(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) cc.stalks.push_back(multitangent(x, i, p));

    cc.complex.lo = 0;
    cc.complex.dims.assign(top + 1, 0);
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!in_support(i)) continue;
        std::size_t q = static_cast<std::size_t>(x.dim_of(i));
        cc.offset[i] = cc.complex.dims[q];
        cc.complex.dims[q] += cc.stalks[i].dim();
        cc.cells_by_dim[q].push_back(i);
    }

    cc.complex.d.clear();
    for (std::size_t q = 0; q < top; ++q)
        cc.complex.d.push_back(QMat(cc.complex.dims[q + 1], cc.complex.dims[q]));

    for (std::size_t pi = 0; pi < x.size(); ++pi) {
        if (!in_support(pi)) continue;
        std::size_t qdim = static_cast<std::size_t>(x.dim_of(pi));
        if (qdim == 0) continue;
        const FStalk& sp = cc.stalks[pi];
        if (sp.dim() == 0) continue;
        for (std::size_t qi = 0; qi < x.size(); ++qi) {
            if (!in_support(qi) || qi == pi) continue;
            if (x.dim_of(qi) != static_cast<int>(qdim) - 1 || !x.is_face(qi, pi)) continue;
            const FStalk& sq = cc.stalks[qi];
            if (sq.dim() == 0) continue;
            int sign;
            QMat a(sp.dim(), sq.dim());
            if (x.cell(qi).sigma == x.cell(pi).sigma) {
                sign = detail::incidence_sign_equal(x.cell(pi).finite_part,
                                                    x.cell(qi).finite_part);
                for (std::size_t i = 0; i < sp.dim(); ++i) {
                    QVec c = detail::coords_in(sq.basis, sq.wedge_dim, sp.basis[i],
                                               "restriction (equal sedentarity)");
                    for (std::size_t j = 0; j < sq.dim(); ++j) a(i, j) = c[j];
                }
            } else {
                QMat proj = detail::stratum_projection(x.ambient().fan, x.cell(pi).sigma,
                                                       x.cell(qi).sigma);
                sign = detail::incidence_sign_deep(x.cell(pi).finite_part,
                                                   x.cell(qi).finite_part, proj);
                QMat wproj = induced_wedge_map(proj, p);
                for (std::size_t i = 0; i < sp.dim(); ++i) {
                    QVec img(wproj.rows(), Rat(0));
                    for (std::size_t r = 0; r < wproj.rows(); ++r)
                        for (std::size_t c2 = 0; c2 < wproj.cols(); ++c2)
                            img[r] += wproj(r, c2) * sp.basis[i][c2];
                    QVec c = detail::coords_in(sq.basis, sq.wedge_dim, img,
                                               "restriction (sedentarity change)");
                    for (std::size_t j = 0; j < sq.dim(); ++j) a(i, j) = c[j];
                }
            }
            QMat& d = cc.complex.d[qdim - 1];
            for (std::size_t i = 0; i < sp.dim(); ++i)
                for (std::size_t j = 0; j < sq.dim(); ++j)
                    d(cc.offset[pi] + i, cc.offset[qi] + j) += Rat(sign) * a(i, j);
        }
    }
    return cc;
}

/// True iff the closure of the complex is compact: it was compactified and
/// every escaping direction of every cell ends on a stratum at infinity.
inline bool is_compact_complex(const WeightedComplex& x) {
    if (!x.compactified()) return false;
    const Fan& fan = x.ambient().fan;
    for (std::size_t i = 0; i < x.size(); ++i) {
        Polyhedron rec = x.cell(i).finite_part.recession_cone();
        if (rec.dim() <= 0) continue;
        const QMat& ps = fan.quotient_projection(x.cell(i).sigma);
        std::vector<Polyhedron> images;
        for (std::size_t big : fan.cones_above(x.cell(i).sigma)) {
            if (big == x.cell(i).sigma) continue;
            images.push_back(fan.cell(big).linear_image(ps));
        }
        if (!subset_of_union(rec, images)) return false;
    }
    return true;
}

/// Tropical Hodge numbers h^{p,q} for 0 <= p <= pmax, 0 <= q <= qmax.
/// Requires a compact complex; use the fan resolution for open supports.
inline std::vector<std::vector<std::size_t>> hodge_table(const WeightedComplex& x,
                                                         std::size_t pmax, std::size_t qmax) {
    if (!is_compact_complex(x))
        throw std::invalid_argument(
            "hodge_table: complex is not compact; use the fan resolution (apresolution) "
            "for open supports");
    std::vector<std::vector<std::size_t>> h(pmax + 1, std::vector<std::size_t>(qmax + 1, 0));
    for (std::size_t p = 0; p <= pmax; ++p) {
        CellularCochainComplex cc = cellular_complex(x, p);
        CohomologyResult res = complex_cohomology(cc.complex);
        for (std::size_t q = 0; q <= qmax; ++q)
            h[p][q] = res.dim_at(static_cast<int>(q));
    }
    return h;
}

/// dim H^{p,q} of X relative to the closed subcomplex D (given as cell
/// indices, closed under faces): cohomology of the cochains supported on
/// cells having a face in D.
inline std::size_t relative_hodge(const WeightedComplex& x, const std::vector<std::size_t>& d_cells,
                                  std::size_t p, std::size_t q) {
    std::vector<bool> in_d(x.size(), false);
    for (std::size_t i : d_cells) {
        if (i >= x.size()) throw std::invalid_argument("relative_hodge: cell index out of range");
        in_d[i] = true;
    }
    for (std::size_t i : d_cells)
        for (std::size_t f = 0; f < x.size(); ++f)
            if (x.is_face(f, i) && !in_d[f])
                throw std::invalid_argument("relative_hodge: D is not closed under faces");
    std::vector<bool> support(x.size(), false);
    bool any = false;
    for (std::size_t i = 0; i < x.size(); ++i)
        for (std::size_t f = 0; f < x.size(); ++f)
            if (in_d[f] && x.is_face(f, i)) {
                support[i] = true;
                any = true;
                break;
            }
    if (!any) return 0;
    CellularCochainComplex cc = cellular_complex(x, p, support);
    return complex_cohomology(cc.complex).dim_at(static_cast<int>(q));
}

/// Product of two polyhedra in the product of their ambient spaces.
inline Polyhedron product_polyhedron(const Polyhedron& a, const Polyhedron& b) {
    std::size_t n1 = a.ambient_dim(), n2 = b.ambient_dim();
    auto pad = [&](const QVec& v, bool first) {
        QVec w(n1 + n2, Rat(0));
        for (std::size_t i = 0; i < v.size(); ++i) w[first ? i : n1 + i] = v[i];
        return w;
    };
    std::vector<QVec> verts, rays;
    for (const auto& va : a.vertices())
        for (const auto& vb : b.vertices()) {
            QVec w = pad(va, true);
            for (std::size_t i = 0; i < n2; ++i) w[n1 + i] = vb[i];
            verts.push_back(w);
        }
    for (const auto& r : a.rays()) rays.push_back(pad(r, true));
    for (const auto& r : b.rays()) rays.push_back(pad(r, false));
    return Polyhedron::from_generators(n1 + n2, verts, rays);
}

/// Product fan (cones are products of cones).
inline Fan product_fan(const Fan& a, const Fan& b) {
    std::vector<Polyhedron> cones;
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j)
            cones.push_back(product_polyhedron(a.cell(i), b.cell(j)));
    return Fan::from_cones(a.ambient_dim() + b.ambient_dim(), cones);
}

/// Product weighted complex: products of maximal cells with product weights.
inline WeightedComplex product_complex(const WeightedComplex& x, const WeightedComplex& y) {
    AmbientFan amb = AmbientFan::make(product_fan(x.ambient().fan, y.ambient().fan));
    std::vector<Polyhedron> cells;
    std::vector<Int> weights;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!x.is_maximal(i) || x.cell(i).sigma != 0) continue;
        for (std::size_t j = 0; j < y.size(); ++j) {
            if (!y.is_maximal(j) || y.cell(j).sigma != 0) continue;
            cells.push_back(product_polyhedron(x.cell(i).finite_part, y.cell(j).finite_part));
            weights.push_back(x.weight(i) * y.weight(j));
        }
    }
    return WeightedComplex::build(amb, cells, weights, x.compactified() || y.compactified());
}

/// Both sides of the Kunneth dimension identity, computed independently.
struct KunnethReport {
    bool ok = true;
    std::vector<std::vector<std::size_t>> product;   ///< h^{r,u}(X x Y)
    std::vector<std::vector<std::size_t>> expected;  ///< convolution of factors
};

inline KunnethReport kunneth_check(const WeightedComplex& x, const WeightedComplex& y) {
    WeightedComplex xy = product_complex(x, y);
    std::size_t dx = static_cast<std::size_t>(std::max(x.dim(), 0));
    std::size_t dy = static_cast<std::size_t>(std::max(y.dim(), 0));
    auto hx = hodge_table(x, dx, dx);
    auto hy = hodge_table(y, dy, dy);
    KunnethReport rep;
    rep.product = hodge_table(xy, dx + dy, dx + dy);
    rep.expected.assign(dx + dy + 1, std::vector<std::size_t>(dx + dy + 1, 0));
    for (std::size_t p = 0; p <= dx; ++p)
        for (std::size_t s = 0; s <= dx; ++s)
            for (std::size_t q = 0; q <= dy; ++q)
                for (std::size_t t = 0; t <= dy; ++t)
                    rep.expected[p + q][s + t] += hx[p][s] * hy[q][t];
    rep.ok = (rep.product == rep.expected);
    return rep;
}

}  // namespace tropicoh
