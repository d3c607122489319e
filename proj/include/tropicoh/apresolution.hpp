#pragma once
/**
 * Stratumwise resolution of compactified tropical fans, Gysin maps, and the
 * weight spectral sequence of an open pair.
 *
 * For a compactified tropical fan X regular at infinity in the toric variety
 * of a unimodular fan Sigma, the resolution complex has, in degree r + q,
 * one summand per q-dimensional cone sigma with a nonempty stratum part:
 * the dual multi-tangent space of the stratum fan X cap N_sigma at its
 * origin, in wedge degree r - q.  Differentials contract by the image of
 * the primitive generator of the added ray; d*d = 0 holds because
 * contractions anticommute, and is asserted on assembly.  Its cohomology in
 * degree r + q is H^{r,q}(X) (validated against the cellular model in the
 * tests).
 *
 * Gysin maps are induced by the identity inclusions of the summands over
 * cones containing a fixed sigma, with a degree shift of twice dim sigma.
 *
 * For a set I of rays with D the union of the corresponding boundary
 * divisor parts of X and U = X minus D, the weight filtration on forms with
 * log poles along D produces a spectral sequence whose first page is a sum
 * of cohomologies of the closed strata D_J (J subset of I) and whose d1 is
 * signed Gysin maps.  We realize the whole filtered complex explicitly and
 * compute every page until stabilization; the abutment H^{r,*}(U) is
 * computed independently on the subfan avoiding I and equality of totals is
 * reported, not assumed.
 */

#include <algorithm>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "tropicoh/chain.hpp"
#include "tropicoh/cohomology.hpp"
#include "tropicoh/linalg.hpp"
#include "tropicoh/subquotient.hpp"
#include "tropicoh/troptoric.hpp"
#include "tropicoh/wedge.hpp"

namespace tropicoh {

/// The resolution complex of X (or of a closed stratum of X), with the
/// per-cone layout needed to build maps between such complexes.
struct APComplex {
    int r = 0;                ///< wedge degree at the base cone
    std::size_t base = 0;     ///< ambient cone: 0 for X itself
    CochainComplex complex;   ///< lo = r; degree r + (dim tau - dim base)
    std::vector<std::size_t> cones;          ///< cones present (contain base)
    std::map<std::size_t, std::size_t> offset;  ///< per cone, within its degree
    std::map<std::size_t, Subquotient> term;    ///< dual space per cone
};

namespace detail {

/// Dual multi-tangent space of the stratum fan X cap N_tau at its origin in
/// wedge degree p: wedge^p of the stratum covectors modulo the annihilator
/// of the span of wedge powers of the stratum cells' tangent spaces.
inline Subquotient stratum_origin_term(const WeightedComplex& x, std::size_t tau, std::size_t p) {
    std::size_t m = x.ambient().fan.ambient_dim() -
                    static_cast<std::size_t>(x.ambient().fan.dim_of(tau));
    std::size_t wd = binom(m, p);
    std::vector<QVec> gens;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x.cell(i).sigma != tau) continue;
        std::vector<QVec> tb = x.cell(i).finite_part.tangent_basis();
        if (p > tb.size()) continue;
        for (const auto& idx : multi_indices(tb.size(), p)) {
            std::vector<QVec> rows;
            for (std::size_t t : idx) rows.push_back(tb[t]);
            gens.push_back(wedge_of_rows(rows, m));
        }
    }
    std::vector<QVec> f = rowspace_basis(from_rows(gens, wd));
    std::vector<QVec> ann = kernel_basis(from_rows(f, wd));
    std::vector<QVec> full;
    for (std::size_t i = 0; i < wd; ++i) {
        QVec e(wd, Rat(0));
        e[i] = 1;
        full.push_back(e);
    }
    return Subquotient(wd, full, ann);
}

/// Contraction block tau -> sigma = tau + l in ambient wedge coordinates:
/// contract covector p-wedges on N_tau by the image of the primitive
/// generator of l, then rewrite in the covector coordinates of N_sigma.
inline QMat ap_block_ambient(const Fan& fan, std::size_t tau, std::size_t sigma, std::size_t p) {
    std::vector<std::size_t> rt = fan.rays_of(tau), rs = fan.rays_of(sigma);
    std::size_t l = fan.ray_generators().size();
    for (std::size_t cand : rs)
        if (std::find(rt.begin(), rt.end(), cand) == rt.end()) {
            if (l != fan.ray_generators().size())
                throw std::logic_error("ap_block: facet pair differs by more than one ray");
            l = cand;
        }
    if (l == fan.ray_generators().size())
        throw std::logic_error("ap_block: no added ray found");
    QVec vl;
    for (const auto& c : fan.ray_generators()[l]) vl.emplace_back(c);
    QVec vbar = fan.quotient_projection(tau) * vl;
    QMat c = contraction_map(vbar, p);
    QMat w = induced_wedge_map(detail::stratum_projection(fan, tau, sigma).transpose(), p - 1);
    QMat t;
    if (!solve_matrix(w, c, t))
        throw std::logic_error("ap_block: contraction image escapes the deeper stratum");
    return t;
}

/// The resolution complex over cones containing `base`, with wedge degree
/// r at the base cone.  Shared by the absolute complex, Gysin maps, and the
/// strata of the weight spectral sequence.
inline APComplex build_ap_at(const WeightedComplex& x, int r, std::size_t base) {
    const Fan& fan = x.ambient().fan;
    if (r < 0) throw std::invalid_argument("build_ap_at: negative wedge degree");
    APComplex ap;
    ap.r = r;
    ap.base = base;
    std::size_t dbase = static_cast<std::size_t>(fan.dim_of(base));
    std::vector<char> nonempty(fan.size(), 0);
    for (std::size_t i = 0; i < x.size(); ++i) nonempty[x.cell(i).sigma] = 1;
    for (std::size_t tau : fan.cones_above(base)) {
        if (!nonempty[tau]) continue;
        std::size_t q = static_cast<std::size_t>(fan.dim_of(tau)) - dbase;
        if (static_cast<int>(q) > r) continue;
        ap.cones.push_back(tau);
    }
    std::sort(ap.cones.begin(), ap.cones.end(), [&](std::size_t a, std::size_t b) {
        if (fan.dim_of(a) != fan.dim_of(b)) return fan.dim_of(a) < fan.dim_of(b);
        return a < b;
    });
    std::size_t qmax = 0;
    for (std::size_t tau : ap.cones)
        qmax = std::max(qmax, static_cast<std::size_t>(fan.dim_of(tau)) - dbase);
    ap.complex.lo = r;
    ap.complex.dims.assign(qmax + 1, 0);
    for (std::size_t tau : ap.cones) {
        std::size_t q = static_cast<std::size_t>(fan.dim_of(tau)) - dbase;
        ap.term[tau] = stratum_origin_term(x, tau, static_cast<std::size_t>(r) - q);
        ap.offset[tau] = ap.complex.dims[q];
        ap.complex.dims[q] += ap.term[tau].dim();
    }
    for (std::size_t q = 0; q < qmax; ++q)
        ap.complex.d.push_back(QMat(ap.complex.dims[q + 1], ap.complex.dims[q]));
    for (std::size_t tau : ap.cones) {
        std::size_t q = static_cast<std::size_t>(fan.dim_of(tau)) - dbase;
        std::size_t p = static_cast<std::size_t>(r) - q;
        if (p == 0 || ap.term[tau].dim() == 0) continue;
        for (std::size_t sigma : ap.cones) {
            if (fan.dim_of(sigma) != fan.dim_of(tau) + 1 ||
                !fan.cell(sigma).contains_poly(fan.cell(tau)))
                continue;
            if (ap.term[sigma].dim() == 0) continue;
            QMat amb = ap_block_ambient(fan, tau, sigma, p);
            QMat block = subquotient_map(ap.term[tau], ap.term[sigma], amb, "ap differential");
            QMat& d = ap.complex.d[q];
            for (std::size_t i = 0; i < block.rows(); ++i)
                for (std::size_t j = 0; j < block.cols(); ++j)
                    d(ap.offset[sigma] + i, ap.offset[tau] + j) += block(i, j);
        }
    }
    return ap;
}

/// Scatter a cochain of `src` (at src degree `deg_src`) into the
/// coordinates of `dst` (at `deg_dst`): identity on shared cone summands.
/// Every cone of src must be present in dst with a term of equal dimension.
inline QVec ap_scatter(const APComplex& src, int deg_src, const QVec& v, const APComplex& dst,
                       int deg_dst, const Fan& fan) {
    QVec out(dst.complex.dim_at(deg_dst), Rat(0));
    std::size_t dsrc = static_cast<std::size_t>(fan.dim_of(src.base));
    std::size_t ddst = static_cast<std::size_t>(fan.dim_of(dst.base));
    for (std::size_t tau : src.cones) {
        std::size_t q = static_cast<std::size_t>(fan.dim_of(tau)) - dsrc;
        if (src.r + static_cast<int>(q) != deg_src) continue;
        const Subquotient& ts = src.term.at(tau);
        if (ts.dim() == 0) continue;
        auto it = dst.term.find(tau);
        if (it == dst.term.end() || it->second.dim() != ts.dim())
            throw std::logic_error("ap_scatter: summand mismatch between complexes");
        if (dst.r + static_cast<int>(fan.dim_of(tau)) - static_cast<int>(ddst) != deg_dst)
            throw std::logic_error("ap_scatter: degree bookkeeping mismatch");
        for (std::size_t i = 0; i < ts.dim(); ++i)
            out[dst.offset.at(tau) + i] = v[src.offset.at(tau) + i];
    }
    return out;
}

}  // namespace detail

/// The resolution complex of a compactified tropical fan regular at
/// infinity.  Degree r + q computes H^{r,q}(X).
inline APComplex build_ap(const WeightedComplex& x, std::size_t r) {
    if (!x.compactified())
        throw std::invalid_argument("build_ap: complex must be compactified");
    if (!x.ambient().fan.is_unimodular())
        throw std::invalid_argument("build_ap: ambient fan must be unimodular");
    QVec zero(x.ambient().fan.ambient_dim(), Rat(0));
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x.cell(i).sigma != 0) continue;
        const auto& verts = x.cell(i).finite_part.vertices();
        if (verts.size() != 1 || verts[0] != zero)
            throw std::invalid_argument("build_ap: support is not the closure of a fan");
    }
    if (!x.check_regular_at_infinity().first)
        throw std::invalid_argument("build_ap: complex is not regular at infinity");
    return detail::build_ap_at(x, static_cast<int>(r), 0);
}

/// h^{r,q} for q = 0..dim X, via the resolution complex.
inline std::vector<std::size_t> ap_hodge(const WeightedComplex& x, std::size_t r) {
    APComplex ap = build_ap(x, r);
    CohomologyResult res = complex_cohomology(ap.complex, "ap complex");
    std::vector<std::size_t> h;
    for (int q = 0; q <= x.dim(); ++q) h.push_back(res.dim_at(static_cast<int>(r) + q));
    return h;
}

/// Gysin map H^{r,p}(X cap closure of the sigma-stratum) -> H^{r+s,p+s}(X)
/// for s = dim sigma, as a matrix on the chosen cohomology representatives.
inline QMat gysin(const WeightedComplex& x, std::size_t sigma, std::size_t r, std::size_t p) {
    const Fan& fan = x.ambient().fan;
    if (sigma >= fan.size()) throw std::invalid_argument("gysin: cone index out of range");
    bool nonempty = false;
    for (std::size_t i = 0; i < x.size() && !nonempty; ++i)
        for (std::size_t up : fan.cones_above(sigma))
            if (x.cell(i).sigma == up) {
                nonempty = true;
                break;
            }
    if (!nonempty) throw std::invalid_argument("gysin: empty stratum");
    std::size_t s = static_cast<std::size_t>(fan.dim_of(sigma));
    APComplex apy = detail::build_ap_at(x, static_cast<int>(r), sigma);
    APComplex apx = detail::build_ap_at(x, static_cast<int>(r + s), 0);
    CohomologyResult ry = complex_cohomology(apy.complex, "ap complex (stratum)");
    CohomologyResult rx = complex_cohomology(apx.complex, "ap complex");
    int degy = static_cast<int>(r + p);
    int degx = static_cast<int>(r + p + 2 * s);
    const auto& reps = ry.at(degy).reps;
    QMat out(rx.dim_at(degx), reps.size());
    for (std::size_t j = 0; j < reps.size(); ++j) {
        QVec img = detail::ap_scatter(apy, degy, reps[j], apx, degx, fan);
        QVec c = rx.reduce(degx, img);
        for (std::size_t i = 0; i < c.size(); ++i) out(i, j) = c[i];
    }
    return out;
}

/// The weight spectral sequence of the open pair (X, X minus the boundary
/// parts over the rays in I): first page, signed-Gysin d1, every page of
/// the realized filtered complex until stabilization, and the
/// independently computed abutment.
struct WeightSS {
    std::size_t r = 0;
    std::map<std::pair<int, int>, std::size_t> e1;  ///< (p,q) -> dim
    std::map<std::pair<int, int>, QMat> d1;         ///< keyed by source (p,q)
    bool d1_squared_zero = true;
    std::map<std::pair<int, int>, std::size_t> e2;
    std::vector<std::map<std::pair<int, int>, std::size_t>> pages;  ///< E_1, E_2, ...
    std::size_t stable_page = 1;                    ///< first page equal to all later ones
    std::map<std::pair<int, int>, std::size_t> einf;
    std::vector<std::size_t> abutment;              ///< h^{r,q}(U), q = 0..dim X
    std::vector<std::size_t> einf_totals;           ///< sum of E_inf over p+q = r+q'
    bool abutment_ok = false;
};

namespace detail {

/// dim of the subspace {x in rowspan(f) : d x in rowspan(s)}, with a basis.
inline std::vector<QVec> preimage_in(const std::vector<QVec>& f, const QMat& d,
                                     const std::vector<QVec>& s, std::size_t src_dim,
                                     std::size_t dst_dim) {
    std::vector<QVec> ann = kernel_basis(from_rows(s, dst_dim));
    QMat cond(ann.size(), src_dim);
    for (std::size_t i = 0; i < ann.size(); ++i) {
        // row i = ann[i]^T d
        for (std::size_t j = 0; j < src_dim; ++j) {
            Rat acc(0);
            for (std::size_t k = 0; k < dst_dim; ++k) acc += ann[i][k] * d(k, j);
            cond(i, j) = acc;
        }
    }
    std::vector<QVec> ker = kernel_basis(cond);
    return rowspace_intersection(f, ker, src_dim);
}

inline std::vector<QVec> image_of(const std::vector<QVec>& s, const QMat& d) {
    std::vector<QVec> out;
    for (const auto& v : s) out.push_back(d * v);
    return rowspace_basis(from_rows(out, d.rows()));
}

}  // namespace detail

inline WeightSS weight_ss_open(const WeightedComplex& x, const std::vector<std::size_t>& rays_I,
                               std::size_t r) {
    const Fan& fan = x.ambient().fan;
    build_ap(x, r);  // validate preconditions loudly
    for (std::size_t l : rays_I)
        if (l >= fan.ray_generators().size())
            throw std::invalid_argument("weight_ss_open: ray index out of range");
    std::vector<std::size_t> rays = rays_I;
    std::sort(rays.begin(), rays.end());
    rays.erase(std::unique(rays.begin(), rays.end()), rays.end());
    std::size_t ni = rays.size();
    if (ni > 8 * sizeof(unsigned long) - 1)
        throw std::invalid_argument("weight_ss_open: too many rays");

    // cone index of sigma_J for each subset (by sorted ray set), when present
    std::vector<char> nonempty(fan.size(), 0);
    for (std::size_t i = 0; i < x.size(); ++i)
        for (std::size_t up = 0; up < fan.size(); ++up)
            if (fan.cell(x.cell(i).sigma).contains_poly(fan.cell(up))) nonempty[up] = 1;
    std::map<std::vector<std::size_t>, std::size_t> cone_of_rays;
    for (std::size_t c = 0; c < fan.size(); ++c) {
        std::vector<std::size_t> rc = fan.rays_of(c);
        std::sort(rc.begin(), rc.end());
        cone_of_rays[rc] = c;
    }

    struct Stratum {
        std::vector<std::size_t> J;  ///< sorted ray indices
        std::size_t sigma = 0;
        APComplex ap;
        CohomologyResult res;
    };
    std::vector<Stratum> strata;
    std::map<std::vector<std::size_t>, std::size_t> stratum_of;
    for (unsigned long mask = 0; mask < (1ul << ni); ++mask) {
        std::vector<std::size_t> J;
        for (std::size_t i = 0; i < ni; ++i)
            if (mask & (1ul << i)) J.push_back(rays[i]);
        if (J.size() > r) continue;  // wedge degree would be negative
        auto it = cone_of_rays.find(J);
        if (it == cone_of_rays.end() || !nonempty[it->second]) continue;
        Stratum st;
        st.J = J;
        st.sigma = it->second;
        st.ap = detail::build_ap_at(x, static_cast<int>(r) - static_cast<int>(J.size()),
                                    st.sigma);
        if (st.ap.cones.empty()) continue;
        st.res = complex_cohomology(st.ap.complex, "ap complex (weight stratum)");
        stratum_of[J] = strata.size();
        strata.push_back(std::move(st));
    }

    WeightSS ss;
    ss.r = r;

    // ---- E1 and d1 from the strata ----------------------------------------
    // E1^{p,q} = sum over #J = -p of H at stratum degree q + 2p.
    std::map<std::pair<int, int>, std::vector<std::size_t>> groups;  // (p,q) -> strata
    std::map<std::pair<int, int>, std::map<std::size_t, std::size_t>> class_offset;
    for (std::size_t si = 0; si < strata.size(); ++si) {
        const Stratum& st = strata[si];
        int p = -static_cast<int>(st.J.size());
        for (int deg = st.res.lo; deg < st.res.lo + static_cast<int>(st.res.degrees.size());
             ++deg) {
            std::size_t d = st.res.dim_at(deg);
            if (d == 0) continue;
            int q = deg - 2 * p;  // deg = q + 2p
            auto key = std::make_pair(p, q);
            class_offset[key][si] = ss.e1[key];
            ss.e1[key] += d;
            groups[key].push_back(si);
        }
    }
    for (const auto& [key, sis] : groups) {
        auto [p, q] = key;
        auto dst_key = std::make_pair(p + 1, q);
        std::size_t rows = ss.e1.count(dst_key) ? ss.e1[dst_key] : 0;
        QMat block(rows, ss.e1[key]);
        if (rows > 0) {
            for (std::size_t si : sis) {
                const Stratum& st = strata[si];
                int deg_src = q + 2 * p;
                const auto& reps = st.res.at(deg_src).reps;
                for (std::size_t jsub = 0; jsub < st.J.size(); ++jsub) {
                    std::vector<std::size_t> jp = st.J;
                    std::size_t removed = jp[jsub];
                    jp.erase(jp.begin() + static_cast<long>(jsub));
                    auto pit = stratum_of.find(jp);
                    if (pit == stratum_of.end()) continue;
                    const Stratum& dst = strata[pit->second];
                    auto off_it = class_offset[dst_key].find(pit->second);
                    if (off_it == class_offset[dst_key].end()) continue;
                    // sign: (-1)^p times the sign of sorting (o(J'), removed)
                    std::size_t greater = 0;
                    for (std::size_t v : jp)
                        if (v > removed) ++greater;
                    int sgn = (greater % 2 == 0) ? 1 : -1;
                    if ((static_cast<std::size_t>(-p)) % 2 == 1) sgn = -sgn;
                    int deg_dst = q + 2 * (p + 1);
                    for (std::size_t jrep = 0; jrep < reps.size(); ++jrep) {
                        QVec img = detail::ap_scatter(st.ap, deg_src, reps[jrep], dst.ap,
                                                      deg_dst, fan);
                        QVec c = dst.res.reduce(deg_dst, img);
                        for (std::size_t i = 0; i < c.size(); ++i)
                            block(off_it->second + i, class_offset[key][si] + jrep) +=
                                Rat(sgn) * c[i];
                    }
                }
            }
        }
        ss.d1[key] = block;
    }
    // d1 squared and E2
    for (const auto& [key, m] : ss.d1) {
        auto next = std::make_pair(key.first + 1, key.second);
        auto it = ss.d1.find(next);
        if (it != ss.d1.end() && it->second.rows() > 0 && m.cols() > 0 &&
            it->second.cols() == m.rows()) {
            if (!(it->second * m).is_zero()) ss.d1_squared_zero = false;
        }
    }
    for (const auto& [key, dim] : ss.e1) {
        auto out_it = ss.d1.find(key);
        std::size_t kdim = dim;
        if (out_it != ss.d1.end() && out_it->second.rows() > 0)
            kdim = kernel_basis(out_it->second).size();
        auto in_key = std::make_pair(key.first - 1, key.second);
        std::size_t irank = 0;
        auto in_it = ss.d1.find(in_key);
        if (in_it != ss.d1.end() && in_it->second.rows() > 0 && in_it->second.cols() > 0)
            irank = rank(in_it->second);
        if (kdim > irank) ss.e2[key] = kdim - irank;
    }

    // ---- the realized filtered complex ------------------------------------
    // summand (J, tau): degree r + dim tau - #J; filtration F^p = (#J <= -p).
    struct Summand {
        std::size_t si = 0;    ///< stratum index
        std::size_t tau = 0;
        std::size_t dim = 0;
        int degree = 0;
    };
    std::vector<Summand> summands;
    std::map<std::pair<std::size_t, std::size_t>, std::size_t> sum_index;
    int lo = static_cast<int>(r), hi = static_cast<int>(r);
    for (std::size_t si = 0; si < strata.size(); ++si)
        for (std::size_t tau : strata[si].ap.cones) {
            Summand s;
            s.si = si;
            s.tau = tau;
            s.dim = strata[si].ap.term.at(tau).dim();
            s.degree = static_cast<int>(r) + fan.dim_of(tau) -
                       static_cast<int>(strata[si].J.size());
            lo = std::min(lo, s.degree);
            hi = std::max(hi, s.degree);
            sum_index[{si, tau}] = summands.size();
            summands.push_back(s);
        }
    CochainComplex total;
    total.lo = lo;
    total.dims.assign(static_cast<std::size_t>(hi - lo + 1), 0);
    std::vector<std::size_t> toffset(summands.size(), 0);
    for (std::size_t i = 0; i < summands.size(); ++i) {
        std::size_t di = static_cast<std::size_t>(summands[i].degree - lo);
        toffset[i] = total.dims[di];
        total.dims[di] += summands[i].dim;
    }
    for (std::size_t di = 0; di + 1 < total.dims.size(); ++di)
        total.d.push_back(QMat(total.dims[di + 1], total.dims[di]));
    for (std::size_t i = 0; i < summands.size(); ++i) {
        const Summand& s = summands[i];
        if (s.dim == 0 || s.degree == hi) continue;
        const Stratum& st = strata[s.si];
        QMat& d = total.d[static_cast<std::size_t>(s.degree - lo)];
        // contraction part within the same J, sign (-1)^{#J} from the shift
        int apsign = (st.J.size() % 2 == 0) ? 1 : -1;
        int qrel = fan.dim_of(s.tau) - fan.dim_of(st.sigma);
        const QMat* apd = st.ap.complex.d_at(st.ap.r + qrel);
        if (apd)
            for (std::size_t sigma : st.ap.cones) {
                if (fan.dim_of(sigma) != fan.dim_of(s.tau) + 1) continue;
                auto jt = sum_index.find({s.si, sigma});
                if (jt == sum_index.end() || summands[jt->second].dim == 0) continue;
                for (std::size_t a = 0; a < summands[jt->second].dim; ++a)
                    for (std::size_t b = 0; b < s.dim; ++b)
                        d(toffset[jt->second] + a, toffset[i] + b) +=
                            Rat(apsign) * (*apd)(st.ap.offset.at(sigma) + a,
                                                 st.ap.offset.at(s.tau) + b);
            }
        // residue part: identity to each J' = J minus one element,
        // sign (-1)^{#J} times the order sign
        for (std::size_t jsub = 0; jsub < st.J.size(); ++jsub) {
            std::vector<std::size_t> jp = st.J;
            std::size_t removed = jp[jsub];
            jp.erase(jp.begin() + static_cast<long>(jsub));
            auto pit = stratum_of.find(jp);
            if (pit == stratum_of.end()) continue;
            auto jt = sum_index.find({pit->second, s.tau});
            if (jt == sum_index.end()) continue;
            if (summands[jt->second].dim != s.dim)
                throw std::logic_error("weight_ss_open: shared summand dimension mismatch");
            std::size_t greater = 0;
            for (std::size_t v : jp)
                if (v > removed) ++greater;
            int sgn = (greater % 2 == 0) ? 1 : -1;
            if (st.J.size() % 2 == 1) sgn = -sgn;
            for (std::size_t a = 0; a < s.dim; ++a)
                d(toffset[jt->second] + a, toffset[i] + a) += Rat(sgn);
        }
    }
    CohomologyResult tres = complex_cohomology(total, "weight log complex");

    // ---- all pages of the filtered complex --------------------------------
    int pmin = -static_cast<int>(ni), pmax = 0;
    auto filt = [&](int p, int m) {
        std::vector<QVec> basis;
        if (m < lo || m > hi) return basis;
        std::size_t n = total.dim_at(m);
        for (std::size_t i = 0; i < summands.size(); ++i) {
            if (summands[i].degree != m) continue;
            if (static_cast<int>(strata[summands[i].si].J.size()) > -p) continue;
            for (std::size_t a = 0; a < summands[i].dim; ++a) {
                QVec e(n, Rat(0));
                e[toffset[i] + a] = 1;
                basis.push_back(e);
            }
        }
        return basis;
    };
    auto dmat = [&](int m) -> QMat {
        const QMat* d = total.d_at(m);
        if (d) return *d;
        return QMat(0, total.dim_at(m));
    };
    // Z[k][p][m]
    auto zspace = [&](int k, int p, int m) {
        int pc = std::max(std::min(p, pmax + 1), pmin);
        std::vector<QVec> f = filt(pc, m);
        if (p > pmax + 1) f.clear();
        QMat d = dmat(m);
        int pk = p + k;
        std::vector<QVec> s;
        if (pk <= pmax + 1) s = filt(std::max(pk, pmin), m + 1);
        if (total.dim_at(m + 1) == 0) {
            // d is the zero map into nothing: whole f qualifies
            return rowspace_basis(from_rows(f, total.dim_at(m)));
        }
        return detail::preimage_in(f, d, s, total.dim_at(m), total.dim_at(m + 1));
    };
    std::size_t width = static_cast<std::size_t>(pmax - pmin + 2);
    for (std::size_t k = 1; k <= width + 1; ++k) {
        std::map<std::pair<int, int>, std::size_t> page;
        for (int m = lo; m <= hi; ++m)
            for (int p = pmin; p <= pmax; ++p) {
                std::vector<QVec> z = zspace(static_cast<int>(k), p, m);
                std::vector<QVec> den = zspace(static_cast<int>(k) - 1, p + 1, m);
                std::vector<QVec> prev =
                    zspace(static_cast<int>(k) - 1, p - static_cast<int>(k) + 1, m - 1);
                std::vector<QVec> img;
                if (m > lo && !prev.empty()) img = detail::image_of(prev, dmat(m - 1));
                for (auto& v : img) den.push_back(v);
                std::vector<QVec> deninz =
                    rowspace_intersection(den, z, total.dim_at(m));
                std::size_t dim = z.size() - deninz.size();
                if (dim > 0) page[{p, m - p}] = dim;
            }
        ss.pages.push_back(page);
        if (ss.pages.size() >= 2 && ss.pages.back() == ss.pages[ss.pages.size() - 2]) break;
    }
    ss.einf = ss.pages.back();
    ss.stable_page = ss.pages.size() >= 2 && ss.pages.back() == ss.pages[ss.pages.size() - 2]
                         ? ss.pages.size() - 1
                         : ss.pages.size();
    // cross-checks between the two realizations
    if (ss.pages[0] != ss.e1)
        throw std::logic_error("weight_ss_open: first page disagrees with stratum cohomology");
    if (ss.pages.size() >= 2 && ss.pages[1] != ss.e2)
        throw std::logic_error("weight_ss_open: second page disagrees with d1 cohomology");
    std::map<std::pair<int, int>, std::size_t> einf_check;
    for (int m = lo; m <= hi; ++m) {
        std::size_t tot = 0;
        for (const auto& [key, dim] : ss.einf)
            if (key.first + key.second == m) tot += dim;
        if (tot != tres.dim_at(m))
            throw std::logic_error("weight_ss_open: stable page does not add up to the "
                                   "cohomology of the realized complex");
    }

    // ---- independent abutment ---------------------------------------------
    std::vector<Polyhedron> ucones;
    for (std::size_t c = 0; c < fan.size(); ++c) {
        std::vector<std::size_t> rc = fan.rays_of(c);
        bool hit = false;
        for (std::size_t v : rc)
            if (std::binary_search(rays.begin(), rays.end(), v)) hit = true;
        if (!hit) ucones.push_back(fan.cell(c));
    }
    Fan ufan = Fan::from_cones(fan.ambient_dim(), ucones);
    AmbientFan uamb = AmbientFan::make(ufan);
    std::vector<Polyhedron> umax;
    std::vector<Int> uw;
    for (std::size_t i = 0; i < x.size(); ++i)
        if (x.is_maximal(i) && x.cell(i).sigma == 0) {
            umax.push_back(x.cell(i).finite_part);
            uw.push_back(x.weight(i));
        }
    WeightedComplex u = WeightedComplex::build(uamb, umax, uw, true);
    APComplex apu = detail::build_ap_at(u, static_cast<int>(r), 0);
    CohomologyResult ures = complex_cohomology(apu.complex, "ap complex (open part)");
    ss.abutment_ok = true;
    for (int q = 0; q <= x.dim(); ++q) {
        std::size_t hu = ures.dim_at(static_cast<int>(r) + q);
        std::size_t tot = 0;
        for (const auto& [key, dim] : ss.einf)
            if (key.first + key.second == static_cast<int>(r) + q) tot += dim;
        ss.abutment.push_back(hu);
        ss.einf_totals.push_back(tot);
        if (hu != tot) ss.abutment_ok = false;
    }
    return ss;
}

}  // namespace tropicoh
