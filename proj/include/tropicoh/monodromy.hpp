// The weight spectral sequence of the cone degeneration and the eigenwave
// maps it carries.
//
// For the cone complex over a structure with vertex rays I, the first page
// at (p, q) is the direct sum over pairs (u, J) with J a nonempty subset of
// I, #J = -p + 2(u - r) + 1 and max{0, p} <= u - r, of the cohomology
// H^{u+1-#J, p+q-u} of the stratum X_J.  The differential is a signed sum
// of restriction maps to one-larger strata (which raise u by one) and
// identity-block Gysin maps to one-smaller strata (which keep u).  All
// cohomology is computed on the based resolution complexes of the total
// cone complex, so the Gysin blocks are literal identity maps of summands.
//
// Pages beyond the second come from a realized filtered complex assembled
// from the same summands, cross-checked against the block first and second
// pages.  The eigenwave from level r to level r - 1 is the identity on the
// (u, J) summands that survive the index shift.
#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "tropicoh/apresolution.hpp"
#include "tropicoh/chain.hpp"
#include "tropicoh/cohomology.hpp"
#include "tropicoh/complex.hpp"
#include "tropicoh/linalg.hpp"
#include "tropicoh/reduction.hpp"
#include "tropicoh/subquotient.hpp"
#include "tropicoh/troptoric.hpp"
#include "tropicoh/wedge.hpp"

namespace tropicoh {

/// One (u, J) summand of a first-page entry.  J holds sorted positions
/// into ConeData::rays_I; the vertex order of the base fixes all signs.
struct MonodromySummand {
    std::size_t u = 0;
    std::vector<std::size_t> J;
    std::size_t dim = 0;
    std::size_t offset = 0;  ///< within the concatenated (p, q) entry
};

struct MonodromySS {
    using Key = std::pair<int, int>;  ///< (p, q)

    std::size_t r = 0;
    std::map<Key, std::vector<MonodromySummand>> summands;
    std::map<Key, std::size_t> e1;
    bool has_d1 = false;
    std::map<Key, QMat> d1;  ///< keyed by source (p, q)
    bool d1_squared_zero = true;
    std::map<Key, std::size_t> e2;
    std::vector<std::map<Key, std::size_t>> pages;  ///< E_1, E_2, ...
    std::size_t stable_page = 1;
    std::map<Key, std::size_t> einf;
    std::vector<std::size_t> abutment;     ///< filled by abutment_check
    std::vector<std::size_t> einf_totals;  ///< filled by abutment_check
    bool abutment_ok = false;

    /// internal realization data (one resolution complex per (u, J))
    struct Piece {
        std::size_t u = 0;
        unsigned long mask = 0;
        std::vector<std::size_t> J;
        std::size_t sigma = 0;
        std::size_t a = 0;  ///< wedge degree at the base cone, u + 1 - #J
        APComplex ap;
        CohomologyResult res;
    };
    std::vector<Piece> pieces;
    std::map<std::pair<std::size_t, unsigned long>, std::size_t> piece_of;
    ConeData cone;
};

namespace detail {

/// Restriction of the coefficient space at tau to the deeper stratum at
/// taup = tau + one ray, in ambient wedge coordinates: precompose covectors
/// with a lattice section of the stratum projection.  Covector monomials
/// carrying the collapsed direction die; pulled-back covectors survive
/// unchanged.  Well-definedness on the subquotient terms is checked by
/// subquotient_map at the call sites.
inline QMat restriction_block_ambient(const Fan& fan, std::size_t tau, std::size_t taup,
                                      std::size_t s) {
    QMat pi = stratum_projection(fan, tau, taup);
    QMat id(pi.rows(), pi.rows());
    for (std::size_t i = 0; i < pi.rows(); ++i) id(i, i) = 1;
    QMat section;
    if (!solve_matrix(pi, id, section))
        throw std::logic_error("restriction block: stratum projection has no section");
    return induced_wedge_map(section.transpose(), s);
}

/// Parity sign of inserting/removing `elt` against the retained sorted set.
inline int order_sign(const std::vector<std::size_t>& retained, std::size_t elt) {
    std::size_t greater = 0;
    for (std::size_t v : retained)
        if (v > elt) ++greater;
    return greater % 2 == 0 ? 1 : -1;
}

/// The full chain map of restriction blocks from the complex based at
/// sigma_J to the one based at sigma_{J + y}, one matrix per shared degree.
/// Both complexes start at the same wedge degree a.  Verified to commute
/// with the differentials.
inline std::vector<QMat> restriction_chain_map(const Fan& fan, const APComplex& src,
                                               const APComplex& dst, std::size_t ray_y) {
    if (src.r != dst.r) throw std::logic_error("restriction chain map: degree mismatch");
    std::map<std::vector<std::size_t>, std::size_t> cone_of_rays;
    for (std::size_t c = 0; c < fan.size(); ++c) {
        std::vector<std::size_t> rc = fan.rays_of(c);
        std::sort(rc.begin(), rc.end());
        cone_of_rays[rc] = c;
    }
    std::size_t width =
        std::max(src.complex.dims.size(), dst.complex.dims.size());
    std::vector<QMat> phi;
    for (std::size_t k = 0; k < width; ++k)
        phi.emplace_back(dst.complex.dim_at(dst.r + static_cast<int>(k)),
                         src.complex.dim_at(src.r + static_cast<int>(k)));
    for (std::size_t tau : src.cones) {
        if (src.term.at(tau).dim() == 0) continue;
        std::vector<std::size_t> rc = fan.rays_of(tau);
        if (std::find(rc.begin(), rc.end(), ray_y) != rc.end()) continue;
        rc.push_back(ray_y);
        std::sort(rc.begin(), rc.end());
        auto it = cone_of_rays.find(rc);
        if (it == cone_of_rays.end()) continue;
        std::size_t taup = it->second;
        auto jt = dst.term.find(taup);
        if (jt == dst.term.end() || jt->second.dim() == 0) continue;
        std::size_t qsrc = static_cast<std::size_t>(fan.dim_of(tau)) -
                           static_cast<std::size_t>(fan.dim_of(src.base));
        std::size_t s = static_cast<std::size_t>(src.r) - qsrc;
        QMat amb = restriction_block_ambient(fan, tau, taup, s);
        QMat block = subquotient_map(src.term.at(tau), jt->second, amb, "restriction");
        QMat& m = phi[qsrc];
        for (std::size_t i = 0; i < block.rows(); ++i)
            for (std::size_t j = 0; j < block.cols(); ++j)
                m(dst.offset.at(taup) + i, src.offset.at(tau) + j) += block(i, j);
    }
    for (std::size_t k = 0; k + 1 < width; ++k) {
        const QMat* ds = src.complex.d_at(src.r + static_cast<int>(k));
        const QMat* dd = dst.complex.d_at(dst.r + static_cast<int>(k));
        QMat lhs = ds ? phi[k + 1] * (*ds)
                      : QMat(phi[k + 1].rows(), phi[k].cols());
        QMat rhs = dd ? (*dd) * phi[k]
                      : QMat(phi[k + 1].rows(), phi[k].cols());
        if (!(lhs + scale(rhs, Rat(-1))).is_zero())
            throw std::logic_error("restriction chain map does not commute with the "
                                   "differentials");
    }
    return phi;
}

}  // namespace detail

/// First page of the weight spectral sequence at level r, with (u, J)
/// summand bookkeeping.
inline MonodromySS monodromy_e1(const ConeData& cd, std::size_t r) {
    const Fan& fan = cd.restricted;
    std::size_t ni = cd.rays_I.size();
    if (ni > 8 * sizeof(unsigned long) - 1)
        throw std::invalid_argument("monodromy_e1: too many vertices");
    std::map<std::vector<std::size_t>, std::size_t> cone_of_rays;
    for (std::size_t c = 0; c < fan.size(); ++c) {
        std::vector<std::size_t> rc = fan.rays_of(c);
        std::sort(rc.begin(), rc.end());
        cone_of_rays[rc] = c;
    }
    MonodromySS ss;
    ss.r = r;
    ss.cone = cd;
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
        if (it == cone_of_rays.end()) continue;  // empty stratum
        std::size_t j = J.size();
        for (std::size_t u = r; u + 1 <= r + j; ++u) {
            if (u + 1 < j) continue;  // negative wedge degree
            std::size_t a = u + 1 - j;
            MonodromySS::Piece pc;
            pc.u = u;
            pc.mask = mask;
            pc.J = J;
            pc.sigma = it->second;
            pc.a = a;
            pc.ap = detail::build_ap_at(cd.total, static_cast<int>(a), pc.sigma);
            if (pc.ap.cones.empty()) continue;
            pc.res = complex_cohomology(pc.ap.complex, "weight stratum complex");
            int p = 2 * (static_cast<int>(u) - static_cast<int>(r)) + 1 -
                    static_cast<int>(j);
            for (int deg = pc.res.lo;
                 deg < pc.res.lo + static_cast<int>(pc.res.degrees.size()); ++deg) {
                std::size_t dim = pc.res.dim_at(deg);
                if (dim == 0) continue;
                int b = deg - static_cast<int>(a);
                int q = static_cast<int>(u) + b - p;
                auto key = std::make_pair(p, q);
                MonodromySummand sm;
                sm.u = u;
                sm.J = J;
                sm.dim = dim;
                sm.offset = ss.e1[key];
                ss.e1[key] += dim;
                ss.summands[key].push_back(sm);
            }
            ss.piece_of[{u, mask}] = ss.pieces.size();
            ss.pieces.push_back(std::move(pc));
        }
    }
    return ss;
}

/// Assembles d1 from the two signed families of maps, checks d1^2 = 0,
/// computes the second page, and turns all further pages of the realized
/// filtered complex.  Throws on any sign incoherence.
inline MonodromySS& monodromy_d1(MonodromySS& ss) {
    if (ss.has_d1) return ss;
    const Fan& fan = ss.cone.restricted;
    std::size_t ni = ss.cone.rays_I.size();
    int r = static_cast<int>(ss.r);

    auto mask_of = [](const std::vector<std::size_t>& J) {
        unsigned long m = 0;
        for (std::size_t i : J) m |= 1ul << i;
        return m;
    };
    auto find_summand = [&](const MonodromySS::Key& key, std::size_t u,
                            const std::vector<std::size_t>& J) -> const MonodromySummand* {
        auto it = ss.summands.find(key);
        if (it == ss.summands.end()) return nullptr;
        for (const auto& sm : it->second)
            if (sm.u == u && sm.J == J) return &sm;
        return nullptr;
    };

    // cached restriction chain maps, keyed by (source piece, added position)
    std::map<std::pair<std::size_t, std::size_t>, std::vector<QMat>> chain;

    for (const auto& [key, sms] : ss.e1) {
        auto [p, q] = key;
        (void)sms;
        auto dst_key = std::make_pair(p + 1, q);
        std::size_t rows = ss.e1.count(dst_key) ? ss.e1.at(dst_key) : 0;
        QMat block(rows, ss.e1.at(key));
        if (rows > 0) {
            for (const MonodromySummand& sm : ss.summands.at(key)) {
                const MonodromySS::Piece& src =
                    ss.pieces[ss.piece_of.at({sm.u, mask_of(sm.J)})];
                int b = p + q - static_cast<int>(sm.u);
                int deg = static_cast<int>(src.a) + b;
                const auto& reps = src.res.at(deg).reps;
                // Gysin family: drop one element of J, keep u
                for (std::size_t drop = 0; drop < sm.J.size(); ++drop) {
                    std::vector<std::size_t> jp = sm.J;
                    std::size_t removed = jp[drop];
                    jp.erase(jp.begin() + static_cast<long>(drop));
                    if (jp.empty()) continue;
                    const MonodromySummand* tgt = find_summand(dst_key, sm.u, jp);
                    if (!tgt) continue;
                    const MonodromySS::Piece& dst =
                        ss.pieces[ss.piece_of.at({sm.u, mask_of(jp)})];
                    int sgn = detail::order_sign(jp, removed);
                    if (((p % 2) + 2) % 2 == 1) sgn = -sgn;
                    int deg_dst = deg + 2;
                    for (std::size_t jr = 0; jr < reps.size(); ++jr) {
                        QVec img = detail::ap_scatter(src.ap, deg, reps[jr], dst.ap,
                                                      deg_dst, fan);
                        QVec c = dst.res.reduce(deg_dst, img);
                        for (std::size_t i = 0; i < c.size(); ++i)
                            block(tgt->offset + i, sm.offset + jr) += Rat(sgn) * c[i];
                    }
                }
                // restriction family: add one element to J, raise u by one
                for (std::size_t y = 0; y < ni; ++y) {
                    if (mask_of(sm.J) & (1ul << y)) continue;
                    std::vector<std::size_t> j2 = sm.J;
                    j2.push_back(y);
                    std::sort(j2.begin(), j2.end());
                    const MonodromySummand* tgt = find_summand(dst_key, sm.u + 1, j2);
                    if (!tgt) continue;
                    const MonodromySS::Piece& dst =
                        ss.pieces[ss.piece_of.at({sm.u + 1, mask_of(j2)})];
                    std::size_t src_idx = ss.piece_of.at({sm.u, mask_of(sm.J)});
                    auto ck = std::make_pair(src_idx, y);
                    if (!chain.count(ck))
                        chain[ck] = detail::restriction_chain_map(
                            fan, src.ap, dst.ap, ss.cone.rays_I[y]);
                    const std::vector<QMat>& phi = chain[ck];
                    int sgn = detail::order_sign(sm.J, y);
                    if (((p % 2) + 2) % 2 == 0) sgn = -sgn;  // (-1)^{p+1}
                    for (std::size_t jr = 0; jr < reps.size(); ++jr) {
                        QVec img = phi[static_cast<std::size_t>(b)] * reps[jr];
                        QVec c = dst.res.reduce(deg, img);
                        for (std::size_t i = 0; i < c.size(); ++i)
                            block(tgt->offset + i, sm.offset + jr) += Rat(sgn) * c[i];
                    }
                }
            }
        }
        ss.d1[key] = block;
    }
    for (const auto& [key, m] : ss.d1) {
        auto next = std::make_pair(key.first + 1, key.second);
        auto it = ss.d1.find(next);
        if (it != ss.d1.end() && it->second.rows() > 0 && m.cols() > 0 &&
            it->second.cols() == m.rows()) {
            if (!(it->second * m).is_zero()) {
                ss.d1_squared_zero = false;
                std::ostringstream os;
                os << "monodromy_d1: d1 squared is nonzero from (" << key.first << ","
                   << key.second << ")";
                throw std::logic_error(os.str());
            }
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
    // summand (piece, tau): degree u + dim tau - #J; filtration level of a
    // piece is 2(u - r) + 1 - #J and F^p keeps levels >= p.
    struct Summand {
        std::size_t pc = 0;
        std::size_t tau = 0;
        std::size_t dim = 0;
        int degree = 0;
        int level = 0;
    };
    std::vector<Summand> summands;
    std::map<std::pair<std::size_t, std::size_t>, std::size_t> sum_index;
    int lo = 0, hi = 0;
    bool first = true;
    for (std::size_t pi = 0; pi < ss.pieces.size(); ++pi) {
        const MonodromySS::Piece& pc = ss.pieces[pi];
        for (std::size_t tau : pc.ap.cones) {
            Summand s;
            s.pc = pi;
            s.tau = tau;
            s.dim = pc.ap.term.at(tau).dim();
            s.degree = static_cast<int>(pc.u) + fan.dim_of(tau) -
                       static_cast<int>(pc.J.size());
            s.level = 2 * (static_cast<int>(pc.u) - r) + 1 -
                      static_cast<int>(pc.J.size());
            if (first || s.degree < lo) lo = s.degree;
            if (first || s.degree > hi) hi = s.degree;
            first = false;
            sum_index[{pi, tau}] = summands.size();
            summands.push_back(s);
        }
    }
    if (first) {  // empty spectral sequence
        ss.has_d1 = true;
        ss.pages.push_back({});
        ss.stable_page = 1;
        return ss;
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
    std::map<std::vector<std::size_t>, std::size_t> cone_of_rays;
    for (std::size_t c = 0; c < fan.size(); ++c) {
        std::vector<std::size_t> rc = fan.rays_of(c);
        std::sort(rc.begin(), rc.end());
        cone_of_rays[rc] = c;
    }
    for (std::size_t i = 0; i < summands.size(); ++i) {
        const Summand& s = summands[i];
        if (s.dim == 0 || s.degree == hi) continue;
        const MonodromySS::Piece& pc = ss.pieces[s.pc];
        QMat& d = total.d[static_cast<std::size_t>(s.degree - lo)];
        // contraction part within the same (u, J), sign (-1)^u from the shift
        int apsign = (pc.u % 2 == 0) ? 1 : -1;
        int qrel = fan.dim_of(s.tau) - fan.dim_of(pc.sigma);
        const QMat* apd = pc.ap.complex.d_at(pc.ap.r + qrel);
        if (apd)
            for (std::size_t sigma : pc.ap.cones) {
                if (fan.dim_of(sigma) != fan.dim_of(s.tau) + 1) continue;
                auto jt = sum_index.find({s.pc, sigma});
                if (jt == sum_index.end() || summands[jt->second].dim == 0) continue;
                for (std::size_t a2 = 0; a2 < summands[jt->second].dim; ++a2)
                    for (std::size_t b2 = 0; b2 < s.dim; ++b2)
                        d(toffset[jt->second] + a2, toffset[i] + b2) +=
                            Rat(apsign) * (*apd)(pc.ap.offset.at(sigma) + a2,
                                                 pc.ap.offset.at(s.tau) + b2);
            }
        int plevel = s.level;
        // Gysin part: identity onto (u, J minus one), extra sign (-1)^{dim tau}
        for (std::size_t drop = 0; drop < pc.J.size(); ++drop) {
            std::vector<std::size_t> jp = pc.J;
            std::size_t removed = jp[drop];
            jp.erase(jp.begin() + static_cast<long>(drop));
            if (jp.empty()) continue;
            unsigned long m2 = 0;
            for (std::size_t v : jp) m2 |= 1ul << v;
            auto pit = ss.piece_of.find({pc.u, m2});
            if (pit == ss.piece_of.end()) continue;
            auto jt = sum_index.find({pit->second, s.tau});
            if (jt == sum_index.end()) continue;
            if (summands[jt->second].dim != s.dim)
                throw std::logic_error("monodromy: shared summand dimension mismatch");
            int sgn = detail::order_sign(jp, removed);
            if (((plevel % 2) + 2) % 2 == 1) sgn = -sgn;
            if (fan.dim_of(s.tau) % 2 == 1) sgn = -sgn;
            for (std::size_t a2 = 0; a2 < s.dim; ++a2)
                d(toffset[jt->second] + a2, toffset[i] + a2) += Rat(sgn);
        }
        // restriction part: blocks onto (u + 1, J plus one) at tau + ray
        for (std::size_t y = 0; y < ni; ++y) {
            unsigned long m0 = 0;
            for (std::size_t v : pc.J) m0 |= 1ul << v;
            if (m0 & (1ul << y)) continue;
            std::vector<std::size_t> j2 = pc.J;
            j2.push_back(y);
            std::sort(j2.begin(), j2.end());
            auto pit = ss.piece_of.find({pc.u + 1, m0 | (1ul << y)});
            if (pit == ss.piece_of.end()) continue;
            const MonodromySS::Piece& dst = ss.pieces[pit->second];
            std::vector<std::size_t> rc = fan.rays_of(s.tau);
            if (std::find(rc.begin(), rc.end(), ss.cone.rays_I[y]) != rc.end()) continue;
            rc.push_back(ss.cone.rays_I[y]);
            std::sort(rc.begin(), rc.end());
            auto cit = cone_of_rays.find(rc);
            if (cit == cone_of_rays.end()) continue;
            std::size_t taup = cit->second;
            auto jt = sum_index.find({pit->second, taup});
            if (jt == sum_index.end() || summands[jt->second].dim == 0) continue;
            std::size_t sdeg = static_cast<std::size_t>(pc.a) -
                               static_cast<std::size_t>(qrel);
            QMat amb = detail::restriction_block_ambient(fan, s.tau, taup, sdeg);
            QMat blk = subquotient_map(pc.ap.term.at(s.tau), dst.ap.term.at(taup), amb,
                                       "restriction");
            int sgn = detail::order_sign(pc.J, y);
            if (((plevel % 2) + 2) % 2 == 0) sgn = -sgn;  // (-1)^{level+1}
            for (std::size_t a2 = 0; a2 < blk.rows(); ++a2)
                for (std::size_t b2 = 0; b2 < blk.cols(); ++b2)
                    d(toffset[jt->second] + a2, toffset[i] + b2) += Rat(sgn) * blk(a2, b2);
        }
    }
    CohomologyResult tres = complex_cohomology(total, "weight total complex");

    // ---- all pages of the filtered complex --------------------------------
    int pmin = 0, pmax = 0;
    for (const Summand& s : summands) {
        pmin = std::min(pmin, s.level);
        pmax = std::max(pmax, s.level);
    }
    auto filt = [&](int p, int m) {
        std::vector<QVec> basis;
        if (m < lo || m > hi) return basis;
        std::size_t n = total.dim_at(m);
        for (std::size_t i = 0; i < summands.size(); ++i) {
            if (summands[i].degree != m || summands[i].level < p) continue;
            for (std::size_t a2 = 0; a2 < summands[i].dim; ++a2) {
                QVec e(n, Rat(0));
                e[toffset[i] + a2] = 1;
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
    auto zspace = [&](int k, int p, int m) {
        std::vector<QVec> f = filt(p, m);
        QMat d = dmat(m);
        std::vector<QVec> s = filt(p + k, m + 1);
        if (total.dim_at(m + 1) == 0)
            return rowspace_basis(from_rows(f, total.dim_at(m)));
        return detail::preimage_in(f, d, s, total.dim_at(m), total.dim_at(m + 1));
    };
    std::size_t width = static_cast<std::size_t>(pmax - pmin + 2);
    for (std::size_t k = 1; k <= width + 1; ++k) {
        std::map<MonodromySS::Key, std::size_t> page;
        for (int m = lo; m <= hi; ++m)
            for (int p = pmin; p <= pmax; ++p) {
                std::vector<QVec> z = zspace(static_cast<int>(k), p, m);
                std::vector<QVec> den = zspace(static_cast<int>(k) - 1, p + 1, m);
                std::vector<QVec> prev =
                    zspace(static_cast<int>(k) - 1, p - static_cast<int>(k) + 1, m - 1);
                std::vector<QVec> img;
                if (m > lo && !prev.empty()) img = detail::image_of(prev, dmat(m - 1));
                for (auto& v : img) den.push_back(v);
                std::vector<QVec> deninz = rowspace_intersection(den, z, total.dim_at(m));
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
    if (ss.pages[0] != ss.e1)
        throw std::logic_error("monodromy: first page disagrees with stratum cohomology");
    if (ss.pages.size() >= 2 && ss.pages[1] != ss.e2)
        throw std::logic_error("monodromy: second page disagrees with d1 cohomology");
    for (int m = lo; m <= hi; ++m) {
        std::size_t tot = 0;
        for (const auto& [key, dim] : ss.einf)
            if (key.first + key.second == m) tot += dim;
        if (tot != tres.dim_at(m))
            throw std::logic_error("monodromy: stable page does not add up to the "
                                   "cohomology of the realized complex");
    }
    ss.has_d1 = true;
    return ss;
}

/// Compares the stable-page antidiagonal totals against independently
/// computed cellular Hodge numbers h^{r,s}(x); x must be the base of the
/// degeneration the spectral sequence was built from.
inline bool abutment_check(MonodromySS& ss, const WeightedComplex& x) {
    if (!ss.has_d1) monodromy_d1(ss);
    std::size_t d = static_cast<std::size_t>(std::max(0, x.dim()));
    std::vector<std::vector<std::size_t>> h = hodge_table(x, ss.r, d);
    ss.abutment.clear();
    ss.einf_totals.clear();
    ss.abutment_ok = true;
    for (std::size_t s = 0; s <= d; ++s) {
        std::size_t hs = h[ss.r][s];
        std::size_t tot = 0;
        for (const auto& [key, dim] : ss.einf)
            if (key.first + key.second == static_cast<int>(ss.r + s)) tot += dim;
        ss.abutment.push_back(hs);
        ss.einf_totals.push_back(tot);
        if (hs != tot) ss.abutment_ok = false;
    }
    return ss.abutment_ok;
}

/// The eigenwave from level r to level r - 1: identity on the (u, J)
/// summands with u <= r + #J - 2, checked to commute with d1, plus the
/// induced map on second pages.
struct EigenwaveMap {
    std::size_t r = 0;
    std::map<MonodromySS::Key, QMat> nu_e1;  ///< keyed by source (p, q)
    std::map<MonodromySS::Key, QMat> nu_e2;
    std::map<MonodromySS::Key, std::size_t> rank_e2;
    std::size_t total_rank_e2 = 0;
};

/// True when no summand of the first page survives the eigenwave shift
/// (always the case at r = 0).
inline bool eigenwave_vanishes_structurally(const MonodromySS& ss) {
    for (const auto& [key, sms] : ss.summands) {
        (void)key;
        for (const auto& sm : sms)
            if (sm.u + 2 <= ss.r + sm.J.size()) return false;
    }
    return true;
}

inline EigenwaveMap eigenwave(MonodromySS& hi, MonodromySS& lo) {
    if (hi.r != lo.r + 1)
        throw std::invalid_argument("eigenwave: levels must be r and r - 1");
    if (hi.cone.rays_I != lo.cone.rays_I)
        throw std::invalid_argument("eigenwave: spectral sequences from different cones");
    if (!hi.has_d1) monodromy_d1(hi);
    if (!lo.has_d1) monodromy_d1(lo);
    EigenwaveMap ew;
    ew.r = hi.r;
    // identity blocks on matching (u, J) labels
    for (const auto& [key, sms] : hi.summands) {
        auto tgt_key = std::make_pair(key.first + 2, key.second - 2);
        std::size_t rows = lo.e1.count(tgt_key) ? lo.e1.at(tgt_key) : 0;
        QMat m(rows, hi.e1.at(key));
        for (const auto& sm : sms) {
            bool in_range = sm.u + 2 <= hi.r + sm.J.size();
            const MonodromySummand* tgt = nullptr;
            if (lo.summands.count(tgt_key))
                for (const auto& cand : lo.summands.at(tgt_key))
                    if (cand.u == sm.u && cand.J == sm.J) tgt = &cand;
            if (in_range != (tgt != nullptr))
                throw std::logic_error("eigenwave: printed index range disagrees with "
                                       "the summand bookkeeping");
            if (!tgt) continue;
            if (tgt->dim != sm.dim)
                throw std::logic_error("eigenwave: matching summands differ in dimension");
            for (std::size_t i = 0; i < sm.dim; ++i)
                m(tgt->offset + i, sm.offset + i) = 1;
        }
        ew.nu_e1[key] = m;
    }
    // commutation with d1
    for (const auto& [key, m] : ew.nu_e1) {
        auto next_key = std::make_pair(key.first + 1, key.second);
        auto tgt_key = std::make_pair(key.first + 2, key.second - 2);
        auto tgt_next = std::make_pair(key.first + 3, key.second - 2);
        std::size_t rows = lo.e1.count(tgt_next) ? lo.e1.at(tgt_next) : 0;
        QMat lhs(rows, m.cols()), rhs(rows, m.cols());
        if (lo.d1.count(tgt_key) && lo.d1.at(tgt_key).rows() > 0 && m.rows() > 0)
            lhs = lo.d1.at(tgt_key) * m;
        if (ew.nu_e1.count(next_key) && hi.d1.count(key) && hi.d1.at(key).rows() > 0 &&
            ew.nu_e1.at(next_key).rows() > 0)
            rhs = ew.nu_e1.at(next_key) * hi.d1.at(key);
        if (!(lhs + scale(rhs, Rat(-1))).is_zero())
            throw std::logic_error("eigenwave: nu does not commute with d1");
    }
    // induced map on second pages
    auto e2_space = [](const MonodromySS& s, const MonodromySS::Key& key) {
        std::size_t n = s.e1.count(key) ? s.e1.at(key) : 0;
        std::vector<QVec> z;
        auto out_it = s.d1.find(key);
        if (out_it != s.d1.end() && out_it->second.rows() > 0)
            z = kernel_basis(out_it->second);
        else
            for (std::size_t i = 0; i < n; ++i) {
                QVec e(n, Rat(0));
                e[i] = 1;
                z.push_back(e);
            }
        std::vector<QVec> bnd;
        auto in_it = s.d1.find({key.first - 1, key.second});
        if (in_it != s.d1.end() && in_it->second.rows() > 0 && in_it->second.cols() > 0)
            for (std::size_t c = 0; c < in_it->second.cols(); ++c) {
                QVec col(in_it->second.rows());
                for (std::size_t rr = 0; rr < in_it->second.rows(); ++rr)
                    col[rr] = in_it->second(rr, c);
                bnd.push_back(col);
            }
        return Subquotient(n, z, bnd);
    };
    for (const auto& [key, m] : ew.nu_e1) {
        Subquotient src = e2_space(hi, key);
        if (src.dim() == 0) continue;
        auto tgt_key = std::make_pair(key.first + 2, key.second - 2);
        Subquotient dst = e2_space(lo, tgt_key);
        QMat out(dst.dim(), src.dim());
        for (std::size_t j = 0; j < src.dim(); ++j) {
            QVec img = m * src.representatives()[j];
            QVec c = dst.coords(img);
            for (std::size_t i = 0; i < c.size(); ++i) out(i, j) = c[i];
        }
        std::size_t rk = (out.rows() > 0 && out.cols() > 0) ? rank(out) : 0;
        ew.nu_e2[key] = out;
        if (rk > 0) ew.rank_e2[key] = rk;
        ew.total_rank_e2 += rk;
    }
    return ew;
}

/// For a smooth (locally matroidal) base, the first page is concentrated
/// in q = 2r.  Returns the offending (p, q, J) witnesses otherwise.
inline std::pair<bool, std::vector<std::string>> smoothness_vanishing_check(
    const MonodromySS& ss) {
    std::vector<std::string> witnesses;
    for (const auto& [key, sms] : ss.summands) {
        if (key.second == 2 * static_cast<int>(ss.r)) continue;
        for (const auto& sm : sms) {
            std::ostringstream os;
            os << "E1^{" << key.first << "," << key.second << "} has a dim-" << sm.dim
               << " summand at u=" << sm.u << ", J={";
            for (std::size_t i = 0; i < sm.J.size(); ++i)
                os << (i ? "," : "") << sm.J[i];
            os << "}";
            witnesses.push_back(os.str());
        }
    }
    return {witnesses.empty(), witnesses};
}

}  // namespace tropicoh
