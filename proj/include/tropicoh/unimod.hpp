#pragma once
/**
 * (1/k)N-unimodular structures on polyhedral complexes.
 *
 * A polyhedron P of dimension d is (1/k)N-unimodular when its vertices lie
 * in (1/k)N, its recession cone is a cone of the reference fan with
 * primitive generators u_j, and the d integer vectors
 * { k(v_i - v_0) } u { u_j } extend to a basis of Z^n (all elementary
 * divisors of the assembled matrix equal 1).
 *
 * unimodularize_compact subdivides a compact complex until every maximal
 * simplex is certified: a globally consistent pulling triangulation
 * followed by stellar subdivisions at non-vertex (1/k)-lattice points,
 * doubling k when no such point exists.  The routine is best-effort with
 * an iteration cap; success is always certified, never assumed.
 *
 * extend_structure implements the extension of a certified core structure
 * along the dual stratification: the cells U + tau for core cells U
 * contained in the closed stratum of tau.  certify_structure re-checks the
 * three defining properties of the result from scratch.
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
#include "tropicoh/snf.hpp"
#include "tropicoh/stratification.hpp"
#include "tropicoh/troptoric.hpp"

namespace tropicoh {

namespace detail {

/// Rows { k(v_i - v_0) } u { primitive recession generators }; empty optional
/// when some k*v_i is not integral.
inline bool unimodular_rows(const Polyhedron& p, long k, ZMat& rows) {
    if (p.is_empty() || k <= 0) return false;
    std::size_t n = p.ambient_dim();
    const auto& vs = p.vertices();
    for (const auto& v : vs)
        for (const auto& c : v)
            if (Rat(Rat(k) * c).get_den() != 1) return false;
    rows.clear();
    for (std::size_t i = 1; i < vs.size(); ++i) {
        ZVec row(n);
        for (std::size_t j = 0; j < n; ++j) {
            Rat d = Rat(k) * (vs[i][j] - vs[0][j]);
            row[j] = d.get_num();
        }
        rows.push_back(row);
    }
    for (const auto& r : p.rays()) {
        ZVec row(n);
        for (std::size_t j = 0; j < n; ++j) row[j] = r[j].get_num();
        rows.push_back(row);
    }
    return true;
}

}  // namespace detail

/// Certificate for one cell: vertices in (1/k)N, recession cone equal to a
/// cone of `sigma_bar`, and the assembled lattice vectors extending to a
/// basis of Z^n.
inline bool is_unimodular_cell(const Polyhedron& p, long k, const Fan& sigma_bar) {
    if (p.is_empty()) return false;
    Polyhedron rec = p.recession_cone();
    if (rec.dim() > 0) {
        bool found = false;
        for (std::size_t i = 0; i < sigma_bar.size(); ++i)
            if (sigma_bar.cell(i) == rec) { found = true; break; }
        if (!found) return false;
    }
    ZMat rows;
    if (!detail::unimodular_rows(p, k, rows)) return false;
    if (rows.size() != static_cast<std::size_t>(p.dim())) return false;
    if (rows.empty()) return true;
    for (const auto& d : smith_normal_form(rows).divisors)
        if (d != 1) return false;
    return true;
}

/// Compact-cell overload (no reference fan needed: the recession cone must
/// be trivial).
inline bool is_unimodular_cell(const Polyhedron& p, long k) {
    if (p.is_empty() || !p.rays().empty()) return false;
    ZMat rows;
    if (!detail::unimodular_rows(p, k, rows)) return false;
    if (rows.size() != static_cast<std::size_t>(p.dim())) return false;
    if (rows.empty()) return true;
    for (const auto& d : smith_normal_form(rows).divisors)
        if (d != 1) return false;
    return true;
}

namespace detail {

/// Globally consistent pulling triangulation: cone from the lex-min vertex
/// over the triangulated facets avoiding it.  Memoized by canonical key so
/// shared faces triangulate identically.
inline const std::vector<Polyhedron>& pulling_triangulation(
    const Polyhedron& p, std::map<std::string, std::vector<Polyhedron>>& memo) {
    auto it = memo.find(p.key());
    if (it != memo.end()) return it->second;
    std::vector<Polyhedron> out;
    if (p.dim() <= 0) {
        out.push_back(p);
    } else {
        QVec w = p.vertices().front();
        for (const auto& v : p.vertices())
            if (lex_less(v, w)) w = v;
        int d = p.dim();
        for (const auto& f : p.faces()) {
            if (f.dim() != d - 1 || f.contains(w)) continue;
            for (const auto& s : pulling_triangulation(f, memo)) {
                std::vector<QVec> vs = s.vertices();
                vs.push_back(w);
                out.push_back(Polyhedron::from_generators(p.ambient_dim(), vs, {}));
            }
        }
    }
    return memo.emplace(p.key(), std::move(out)).first->second;
}

/// A point of (1/k)Z^n inside `s` that is not one of its vertices, if any.
/// Preference goes to points in the lowest-dimensional face available, so
/// stellar subdivision stays compatible across neighboring cells.
inline bool lattice_point_in(const Polyhedron& s, long k, QVec& out) {
    std::size_t n = s.ambient_dim();
    auto floor_of = [](const Rat& c) {
        mpz_class f;
        mpz_fdiv_q(f.get_mpz_t(), c.get_num_mpz_t(), c.get_den_mpz_t());
        return static_cast<long>(f.get_si());
    };
    std::vector<long> lo(n), hi(n);
    for (std::size_t j = 0; j < n; ++j) {
        bool first = true;
        for (const auto& v : s.vertices()) {
            long f = floor_of(Rat(k) * v[j]);
            if (first || f < lo[j]) lo[j] = f;
            if (first || f + 1 > hi[j]) hi[j] = f + 1;
            first = false;
        }
    }
    std::set<QVec> vertex_set(s.vertices().begin(), s.vertices().end());
    bool found = false;
    int best_dim = 0;
    QVec best;
    std::vector<long> idx(lo);
    while (true) {
        QVec x(n);
        for (std::size_t j = 0; j < n; ++j) x[j] = Rat(idx[j]) / Rat(k);
        if (s.contains(x) && !vertex_set.count(x)) {
            int fd = s.dim();
            for (const auto& f : s.faces())
                if (f.contains(x)) fd = std::min(fd, f.dim());
            if (!found || fd < best_dim) {
                found = true;
                best_dim = fd;
                best = x;
            }
        }
        std::size_t j = 0;
        while (j < n && ++idx[j] > hi[j]) idx[j] = lo[j], ++j;
        if (j == n) break;
    }
    if (found) out = best;
    return found;
}

/// Stellar subdivision of a list of maximal simplices at the point q: every
/// simplex containing q (other than as a vertex) is replaced by cones from
/// q over its facets missing q.
inline void stellar_subdivide(std::vector<Polyhedron>& sims, const QVec& q) {
    std::vector<Polyhedron> next;
    for (const auto& s : sims) {
        if (!s.contains(q)) {
            next.push_back(s);
            continue;
        }
        bool is_vertex = false;
        for (const auto& v : s.vertices())
            if (v == q) { is_vertex = true; break; }
        if (is_vertex) {
            next.push_back(s);
            continue;
        }
        for (const auto& f : s.faces()) {
            if (f.dim() != s.dim() - 1 || f.contains(q)) continue;
            std::vector<QVec> vs = f.vertices();
            vs.push_back(q);
            next.push_back(Polyhedron::from_generators(s.ambient_dim(), vs, {}));
        }
    }
    sims = std::move(next);
}

}  // namespace detail

struct UnimodularizeResult {
    long k = 1;
    PolyComplex complex;
};

/// Certified best-effort (1/k)N-unimodular subdivision of a compact complex.
/// Throws when the iteration cap is exceeded; otherwise every maximal cell
/// of the result passes is_unimodular_cell(cell, k).
inline UnimodularizeResult unimodularize_compact(const PolyComplex& c, int cap = 200) {
    std::size_t n = c.ambient_dim();
    std::vector<Polyhedron> sims;
    std::map<std::string, std::vector<Polyhedron>> memo;
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (!c.is_maximal(i)) continue;
        if (!c.cell(i).rays().empty())
            throw std::invalid_argument("unimodularize_compact: complex is not compact");
        for (const auto& s : detail::pulling_triangulation(c.cell(i), memo)) sims.push_back(s);
    }
    long k = 1;
    for (int it = 0; it <= cap; ++it) {
        std::vector<std::size_t> failing;
        for (std::size_t i = 0; i < sims.size(); ++i)
            if (!is_unimodular_cell(sims[i], k)) failing.push_back(i);
        if (failing.empty()) {
            UnimodularizeResult res;
            res.k = k;
            res.complex = PolyComplex::from_cells(n, sims);
            for (std::size_t i = 0; i < res.complex.size(); ++i)
                if (res.complex.is_maximal(i) && !is_unimodular_cell(res.complex.cell(i), k))
                    throw std::logic_error("unimodularize_compact: certificate failed after assembly");
            return res;
        }
        bool progress = false;
        for (std::size_t i : failing) {
            QVec q;
            if (detail::lattice_point_in(sims[i], k, q)) {
                detail::stellar_subdivide(sims, q);
                progress = true;
                break;
            }
        }
        if (!progress) k *= 2;
    }
    throw std::runtime_error("unimodularize_compact: iteration cap exceeded (partial subdivision of " +
                             std::to_string(sims.size()) + " simplices, k=" + std::to_string(k) + ")");
}

/// Extension of a certified core structure along the dual stratification:
/// the cells U + tau over core cells U contained in the closed stratum of
/// tau (tau running over the cones of the fan; tau = {0} contributes the
/// core itself).  Returns the part of the structure inside N_R; its closure
/// is the whole complex.
inline PolyComplex extend_structure(const WeightedComplex& x, const DualStratification& strat,
                                    const PolyComplex& core, long k) {
    std::size_t n = strat.fan().ambient_dim();
    if (core.ambient_dim() != n || x.ambient().fan.ambient_dim() != n)
        throw std::invalid_argument("extend_structure: ambient dimension mismatch");

    std::vector<Polyhedron> xmax;
    for (std::size_t i = 0; i < x.size(); ++i)
        if (x.is_maximal(i) && x.cell(i).sigma == 0) xmax.push_back(x.cell(i).finite_part);
    StratificationCheck chk = verify_stratification(strat, xmax);
    if (!chk.ok)
        throw std::invalid_argument("extend_structure: stratification not verified: " + chk.message);

    for (std::size_t i = 0; i < core.size(); ++i)
        if (core.is_maximal(i) && !is_unimodular_cell(core.cell(i), k))
            throw std::invalid_argument("extend_structure: core cell " + core.cell(i).key() +
                                        " is not (1/" + std::to_string(k) + ")N-unimodular");

    const Fan& fan = strat.fan();
    std::map<std::string, Polyhedron> out;
    for (std::size_t u = 0; u < core.size(); ++u) {
        const Polyhedron& cell = core.cell(u);
        out.emplace(cell.key(), cell);
        for (std::size_t tau = 1; tau < fan.size(); ++tau) {
            if (!subset_of_union(cell, strat.region(tau).closed)) continue;
            Polyhedron sum = cell.minkowski_sum(fan.cell(tau));
            out.emplace(sum.key(), sum);
        }
    }
    std::vector<Polyhedron> cells;
    for (auto& kv : out) cells.push_back(kv.second);
    return PolyComplex::from_cells(n, cells);
}

/// Report of certify_structure; all three properties re-checked from scratch.
struct StructureReport {
    bool support_ok = true;
    bool unimodular_ok = true;
    bool finer_ok = true;
    std::vector<std::string> support_failures;
    std::vector<std::string> unimodular_failures;
    std::vector<std::string> finer_failures;
    bool all_ok() const { return support_ok && unimodular_ok && finer_ok; }
};

/// Checks that `lambda` is a (1/k)N-unimodular structure of the finite part
/// of `x` whose cells are each contained in a cone of `sigma_bar`.
inline StructureReport certify_structure(const WeightedComplex& x, const PolyComplex& lambda,
                                         long k, const Fan& sigma_bar) {
    StructureReport rep;
    std::vector<Polyhedron> xmax;
    for (std::size_t i = 0; i < x.size(); ++i)
        if (x.is_maximal(i) && x.cell(i).sigma == 0) xmax.push_back(x.cell(i).finite_part);
    std::vector<Polyhedron> lmax;
    for (std::size_t i = 0; i < lambda.size(); ++i)
        if (lambda.is_maximal(i)) lmax.push_back(lambda.cell(i));

    for (const auto& c : lmax)
        if (!subset_of_union(c, xmax)) {
            rep.support_ok = false;
            rep.support_failures.push_back("structure cell not inside the complex: " + c.key());
        }
    for (const auto& c : xmax)
        if (!subset_of_union(c, lmax)) {
            rep.support_ok = false;
            rep.support_failures.push_back("complex cell not covered by the structure: " + c.key());
        }

    for (const auto& c : lmax)
        if (!is_unimodular_cell(c, k, sigma_bar)) {
            rep.unimodular_ok = false;
            rep.unimodular_failures.push_back(c.key());
        }

    for (const auto& c : lmax) {
        bool inside = false;
        for (std::size_t i = 0; i < sigma_bar.size() && !inside; ++i)
            inside = sigma_bar.cell(i).contains_poly(c);
        if (!inside) {
            rep.finer_ok = false;
            rep.finer_failures.push_back(c.key());
        }
    }
    return rep;
}

}  // namespace tropicoh
