/**
 * Exact rational polyhedra (strongly convex), with V- and H-representations
 * kept in a canonical form.
 *
 * Conversions are done by deterministic subset enumeration, which is exact
 * and entirely adequate at the problem sizes this library targets:
 *  - vertices are intersections of dim-many linearly independent tight
 *    inequalities, extreme rays have dim-1 tight inequalities;
 *  - facets are hyperplanes spanned by dim(hull)-many generators with all
 *    other generators on one side.
 * All polyhedra are assumed strongly convex (no lines); constructors throw
 * if a line is detected.
 */
#ifndef TROPICOH_POLYHEDRON_HPP
#define TROPICOH_POLYHEDRON_HPP

#include <algorithm>
#include <cstddef>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "tropicoh/linalg.hpp"
#include "tropicoh/rat.hpp"
#include "tropicoh/snf.hpp"

namespace tropicoh {

/// One inequality <a, x> <= b with primitive integer normal.
struct HalfSpace {
    ZVec a;
    Rat b;
    bool operator==(const HalfSpace& o) const { return a == o.a && b == o.b; }
    bool operator<(const HalfSpace& o) const {
        if (a != o.a) return a < o.a;
        return b < o.b;
    }
};

class Polyhedron {
public:
    Polyhedron() : n_(0), empty_(true) {}

    static Polyhedron empty_set(std::size_t n) {
        Polyhedron p;
        p.n_ = n;
        p.empty_ = true;
        return p;
    }

    /// Convex hull of vertices plus cone of ray directions.
    static Polyhedron from_generators(std::size_t n, std::vector<QVec> verts,
                                      std::vector<QVec> rays) {
        if (verts.empty()) {
            if (!rays.empty())
                throw std::invalid_argument("Polyhedron: rays without a vertex");
            return empty_set(n);
        }
        Polyhedron p;
        p.n_ = n;
        p.empty_ = false;
        p.vertices_ = std::move(verts);
        p.rays_.clear();
        for (const auto& r : rays) p.rays_.push_back(to_qvec(primitive_of_rat(r)));
        p.compute_hrep_from_gens();
        p.recompute_gens_from_hrep();
        p.sort_canonical();
        return p;
    }

    static Polyhedron cone_from_rays(std::size_t n, const std::vector<QVec>& rays) {
        return from_generators(n, {QVec(n, Rat(0))}, rays);
    }

    static Polyhedron point(const QVec& v) { return from_generators(v.size(), {v}, {}); }

    /// {x : A x <= b} given as general rational rows.
    static Polyhedron from_inequalities(std::size_t n, const std::vector<QVec>& rows,
                                        const std::vector<Rat>& rhs) {
        Polyhedron p;
        p.n_ = n;
        p.enumerate_gens(rows, rhs);
        if (p.empty_) return p;
        p.compute_hrep_from_gens();
        p.recompute_gens_from_hrep();
        p.sort_canonical();
        return p;
    }

    std::size_t ambient_dim() const { return n_; }
    bool is_empty() const { return empty_; }
    const std::vector<QVec>& vertices() const { return vertices_; }
    const std::vector<QVec>& rays() const { return rays_; }
    const std::vector<HalfSpace>& facets() const { return facets_; }
    /// Affine hull equations <a,x> = b.
    const std::vector<HalfSpace>& hull_equations() const { return equations_; }

    /// Dimension of the polyhedron (-1 for empty).
    int dim() const {
        if (empty_) return -1;
        return static_cast<int>(tangent_basis().size());
    }

    /// Basis (RREF rows) of the linear span of P - p0 ("tangent space").
    std::vector<QVec> tangent_basis() const {
        QMat dirs;
        for (std::size_t i = 1; i < vertices_.size(); ++i) {
            QVec d(n_);
            for (std::size_t j = 0; j < n_; ++j) d[j] = vertices_[i][j] - vertices_[0][j];
            dirs.push_row(d);
        }
        for (const auto& r : rays_) dirs.push_row(r);
        if (dirs.rows() == 0) return {};
        return rowspace_basis(dirs);
    }

    bool contains(const QVec& x) const {
        if (empty_) return false;
        for (const auto& e : equations_)
            if (dot(to_qvec(e.a), x) != e.b) return false;
        for (const auto& f : facets_)
            if (dot(to_qvec(f.a), x) > f.b) return false;
        return true;
    }

    bool contains_poly(const Polyhedron& q) const {
        if (q.empty_) return true;
        if (empty_) return false;
        for (const auto& v : q.vertices_)
            if (!contains(v)) return false;
        for (const auto& r : q.rays_) {
            // ray containment: direction must satisfy all homogeneous parts
            for (const auto& e : equations_)
                if (dot(to_qvec(e.a), r) != 0) return false;
            for (const auto& f : facets_)
                if (dot(to_qvec(f.a), r) > 0) return false;
        }
        return true;
    }

    /// A point in the relative interior (average of vertices plus ray sum).
    QVec rel_interior_point() const {
        if (empty_) throw std::logic_error("rel_interior_point of empty polyhedron");
        QVec p(n_, Rat(0));
        for (const auto& v : vertices_)
            for (std::size_t j = 0; j < n_; ++j) p[j] += v[j];
        Rat inv = Rat(1) / Rat(static_cast<long>(vertices_.size()));
        for (auto& x : p) x *= inv;
        for (const auto& r : rays_)
            for (std::size_t j = 0; j < n_; ++j) p[j] += r[j];
        return p;
    }

    Polyhedron recession_cone() const {
        if (empty_) return empty_set(n_);
        std::vector<QVec> rows;
        std::vector<Rat> rhs;
        for (const auto& e : equations_) {
            rows.push_back(to_qvec(e.a));
            rhs.push_back(Rat(0));
            QVec neg = to_qvec(e.a);
            for (auto& x : neg) x = -x;
            rows.push_back(neg);
            rhs.push_back(Rat(0));
        }
        for (const auto& f : facets_) {
            rows.push_back(to_qvec(f.a));
            rhs.push_back(Rat(0));
        }
        if (rows.empty()) {
            // no constraints: would be all of Q^n, not strongly convex
            if (n_ == 0) return from_generators(0, {QVec{}}, {});
            throw std::logic_error("recession of full space is not strongly convex");
        }
        return from_inequalities(n_, rows, rhs);
    }

    Polyhedron intersect(const Polyhedron& q) const {
        if (empty_ || q.empty_) return empty_set(n_);
        std::vector<QVec> rows;
        std::vector<Rat> rhs;
        auto add = [&](const Polyhedron& p) {
            for (const auto& e : p.equations_) {
                rows.push_back(to_qvec(e.a));
                rhs.push_back(e.b);
                QVec neg = to_qvec(e.a);
                for (auto& x : neg) x = -x;
                rows.push_back(neg);
                rhs.push_back(-e.b);
            }
            for (const auto& f : p.facets_) {
                rows.push_back(to_qvec(f.a));
                rhs.push_back(f.b);
            }
        };
        add(*this);
        add(q);
        return from_inequalities(n_, rows, rhs);
    }

    Polyhedron minkowski_sum(const Polyhedron& q) const {
        if (empty_ || q.empty_) return empty_set(n_);
        std::vector<QVec> verts;
        for (const auto& v : vertices_)
            for (const auto& w : q.vertices_) {
                QVec s(n_);
                for (std::size_t j = 0; j < n_; ++j) s[j] = v[j] + w[j];
                verts.push_back(s);
            }
        std::vector<QVec> rays = rays_;
        rays.insert(rays.end(), q.rays_.begin(), q.rays_.end());
        return from_generators(n_, verts, rays);
    }

    /// Image under a linear map given by matrix m (rows x n_).
    Polyhedron linear_image(const QMat& m) const {
        if (empty_) return empty_set(m.rows());
        std::vector<QVec> verts, rays;
        for (const auto& v : vertices_) verts.push_back(m * v);
        for (const auto& r : rays_) {
            QVec img = m * r;
            bool zero = true;
            for (const auto& x : img)
                if (x != 0) { zero = false; break; }
            if (!zero) rays.push_back(img);
        }
        return from_generators(m.rows(), verts, rays);
    }

    /// The face of P where the given facet inequality is tight.
    Polyhedron face_of_halfspace(const HalfSpace& h) const {
        std::vector<QVec> all_rows;
        std::vector<Rat> all_rhs;
        auto push_eq = [&](const ZVec& a, const Rat& b) {
            all_rows.push_back(to_qvec(a));
            all_rhs.push_back(b);
            QVec ne = to_qvec(a);
            for (auto& x : ne) x = -x;
            all_rows.push_back(ne);
            all_rhs.push_back(-b);
        };
        for (const auto& e : equations_) push_eq(e.a, e.b);
        for (const auto& f : facets_) {
            all_rows.push_back(to_qvec(f.a));
            all_rhs.push_back(f.b);
        }
        push_eq(h.a, h.b);
        return from_inequalities(n_, all_rows, all_rhs);
    }

    /// All nonempty faces, including P itself (no empty face).
    std::vector<Polyhedron> faces() const {
        std::vector<Polyhedron> out;
        if (empty_) return out;
        std::map<std::string, Polyhedron> seen;
        std::vector<Polyhedron> frontier = {*this};
        seen[key()] = *this;
        while (!frontier.empty()) {
            std::vector<Polyhedron> next;
            for (const auto& f : frontier) {
                for (const auto& h : f.facets_) {
                    Polyhedron g = f.face_of_halfspace(h);
                    if (g.is_empty()) continue;
                    std::string k = g.key();
                    if (!seen.count(k)) {
                        seen[k] = g;
                        next.push_back(g);
                    }
                }
            }
            frontier = std::move(next);
        }
        for (auto& [k, f] : seen) out.push_back(f);
        return out;
    }

    /// Is q a face of this polyhedron?
    bool has_face(const Polyhedron& q) const {
        if (q.empty_ || empty_) return false;
        if (!contains_poly(q)) return false;
        // q is a face iff it equals the intersection of P with the facet
        // hyperplanes (and hull equations) tight on q.
        QVec p = q.rel_interior_point();
        std::vector<QVec> rows;
        std::vector<Rat> rhs;
        auto push_eq = [&](const ZVec& a, const Rat& b) {
            rows.push_back(to_qvec(a));
            rhs.push_back(b);
            QVec neg = to_qvec(a);
            for (auto& x : neg) x = -x;
            rows.push_back(neg);
            rhs.push_back(-b);
        };
        for (const auto& e : equations_) push_eq(e.a, e.b);
        for (const auto& f : facets_) {
            if (dot(to_qvec(f.a), p) == f.b) push_eq(f.a, f.b);
            else {
                rows.push_back(to_qvec(f.a));
                rhs.push_back(f.b);
            }
        }
        Polyhedron tight = from_inequalities(n_, rows, rhs);
        return tight == q;
    }

    bool operator==(const Polyhedron& o) const {
        return n_ == o.n_ && empty_ == o.empty_ && vertices_ == o.vertices_ && rays_ == o.rays_;
    }
    bool operator!=(const Polyhedron& o) const { return !(*this == o); }

    /// Canonical string key (sorted extreme vertices and primitive rays).
    std::string key() const {
        std::ostringstream os;
        os << n_ << (empty_ ? "E" : "P");
        for (const auto& v : vertices_) {
            os << "|v";
            for (const auto& x : v) os << " " << rat_str(x);
        }
        for (const auto& r : rays_) {
            os << "|r";
            for (const auto& x : r) os << " " << rat_str(x);
        }
        return os.str();
    }

private:
    void sort_canonical() {
        std::sort(vertices_.begin(), vertices_.end(), lex_less);
        std::sort(rays_.begin(), rays_.end(), lex_less);
        std::sort(facets_.begin(), facets_.end());
        std::sort(equations_.begin(), equations_.end());
    }

    static HalfSpace normalize_row(QVec a, Rat b) {
        Int den = 1;
        for (const auto& x : a) den = lcm(den, x.get_den());
        den = lcm(den, b.get_den());
        ZVec ai(a.size());
        Int g = 0;
        for (std::size_t i = 0; i < a.size(); ++i) {
            Rat s = a[i] * Rat(den);
            ai[i] = s.get_num();
            g = gcd(g, ai[i]);
        }
        Rat bs = b * Rat(den);
        g = gcd(g, bs.get_num());
        g = abs(g);
        if (g > 1) {
            for (auto& x : ai) x /= g;
            bs /= Rat(g);
        }
        return HalfSpace{ai, bs};
    }

    /// V-rep -> canonical H-rep (facets + hull equations).
    void compute_hrep_from_gens() {
        facets_.clear();
        equations_.clear();
        // Affine hull
        const QVec& p0 = vertices_[0];
        std::vector<QVec> dirs;
        for (std::size_t i = 1; i < vertices_.size(); ++i) {
            QVec d(n_);
            for (std::size_t j = 0; j < n_; ++j) d[j] = vertices_[i][j] - p0[j];
            dirs.push_back(d);
        }
        for (const auto& r : rays_) dirs.push_back(r);
        std::vector<QVec> tbasis = dirs.empty() ? std::vector<QVec>{}
                                                : rowspace_basis(from_rows(dirs, n_));
        std::size_t k = tbasis.size();
        // hull equations: kernel of tangent basis as row constraints
        {
            std::vector<QVec> normals = kernel_basis(from_rows(tbasis, n_));
            for (const auto& a : normals) equations_.push_back(normalize_row(a, dot(a, p0)));
        }
        if (k == 0) return;  // single point: no facets
        // Work in hull coordinates: x = p0 + B^T y with B rows = tbasis.
        QMat b = from_rows(tbasis, n_);
        auto to_hull = [&](const QVec& x, bool is_point) {
            QVec d(n_);
            for (std::size_t j = 0; j < n_; ++j) d[j] = is_point ? x[j] - p0[j] : x[j];
            QVec y;
            if (!solve(b.transpose(), d, y))
                throw std::logic_error("generator escapes affine hull");
            return y;
        };
        std::vector<QVec> pv, pr;
        for (const auto& v : vertices_) pv.push_back(to_hull(v, true));
        for (const auto& r : rays_) pr.push_back(to_hull(r, false));
        // enumerate k-subsets of generators as candidate facet hyperplanes
        std::size_t total = pv.size() + pr.size();
        std::set<HalfSpace> found;
        std::vector<std::size_t> comb(k);
        for (std::size_t i = 0; i < k; ++i) comb[i] = i;
        bool done = total < k;
        while (!done) {
            // build system for (a, c): a . pv = c, a . pr = 0
            QMat sys(k, k + 1);
            for (std::size_t i = 0; i < k; ++i) {
                std::size_t g = comb[i];
                if (g < pv.size()) {
                    for (std::size_t j = 0; j < k; ++j) sys(i, j) = pv[g][j];
                    sys(i, k) = -1;
                } else {
                    for (std::size_t j = 0; j < k; ++j) sys(i, j) = pr[g - pv.size()][j];
                    sys(i, k) = 0;
                }
            }
            std::vector<QVec> sol = kernel_basis(sys);
            if (sol.size() == 1) {
                QVec a(sol[0].begin(), sol[0].begin() + k);
                Rat c = sol[0][k];
                bool a_zero = true;
                for (const auto& x : a)
                    if (x != 0) a_zero = false;
                if (!a_zero) {
                    int side = 0;  // +1: all <=, -1: all >=
                    bool valid = true;
                    for (std::size_t g = 0; g < pv.size() && valid; ++g) {
                        int s = sgn(dot(a, pv[g]) - c);
                        if (s != 0) {
                            if (side == 0) side = s;
                            else if (side != s) valid = false;
                        }
                    }
                    for (std::size_t g = 0; g < pr.size() && valid; ++g) {
                        Rat s = dot(a, pr[g]);
                        int sg = sgn(s);
                        if (sg != 0) {
                            if (side == 0) side = sg;
                            else if (side != sg) valid = false;
                        }
                    }
                    if (valid && side != 0) {
                        // orient so that all generators satisfy a.y <= c
                        if (side > 0) {
                            for (auto& x : a) x = -x;
                            c = -c;
                        }
                        // lift to ambient coordinates
                        QVec a_amb;
                        if (!solve(b, a, a_amb))
                            throw std::logic_error("facet lift failed");
                        Rat c_amb = c + dot(a_amb, p0);
                        found.insert(normalize_row(a_amb, c_amb));
                    }
                }
            }
            // next combination
            std::size_t i = k;
            done = true;
            while (i > 0) {
                --i;
                if (comb[i] != i + total - k) {
                    ++comb[i];
                    for (std::size_t j = i + 1; j < k; ++j) comb[j] = comb[j - 1] + 1;
                    done = false;
                    break;
                }
            }
        }
        facets_.assign(found.begin(), found.end());
    }

    static int sgn(const Rat& x) { return x > 0 ? 1 : (x < 0 ? -1 : 0); }

    /// H-rep (canonical) -> extreme vertices and rays.
    void recompute_gens_from_hrep() {
        std::vector<QVec> rows;
        std::vector<Rat> rhs;
        for (const auto& e : equations_) {
            rows.push_back(to_qvec(e.a));
            rhs.push_back(e.b);
            QVec neg = to_qvec(e.a);
            for (auto& x : neg) x = -x;
            rows.push_back(neg);
            rhs.push_back(-e.b);
        }
        for (const auto& f : facets_) {
            rows.push_back(to_qvec(f.a));
            rhs.push_back(f.b);
        }
        enumerate_gens(rows, rhs);
    }

    /// Enumerate extreme vertices/rays of {rows . x <= rhs}; sets empty_.
    void enumerate_gens(const std::vector<QVec>& rows, const std::vector<Rat>& rhs) {
        vertices_.clear();
        rays_.clear();
        std::size_t m = rows.size();
        QMat a = from_rows(rows, n_);
        auto feasible_pt = [&](const QVec& x) {
            for (std::size_t i = 0; i < m; ++i)
                if (dot(rows[i], x) > rhs[i]) return false;
            return true;
        };
        auto feasible_dir = [&](const QVec& x) {
            for (std::size_t i = 0; i < m; ++i)
                if (dot(rows[i], x) > 0) return false;
            return true;
        };
        std::set<std::string> seen;
        auto vkey = [&](const QVec& v) {
            std::string s;
            for (const auto& x : v) s += rat_str(x) + ",";
            return s;
        };
        if (n_ == 0) {
            // zero-dimensional ambient: the only candidate point is ()
            bool ok = true;
            for (std::size_t i = 0; i < m; ++i)
                if (rhs[i] < 0) ok = false;
            empty_ = !ok;
            if (ok) vertices_.push_back(QVec{});
            return;
        }
        // vertices: n tight independent constraints
        std::vector<std::size_t> comb(n_);
        if (m >= n_) {
            for (std::size_t i = 0; i < n_; ++i) comb[i] = i;
            bool done = false;
            while (!done) {
                QMat sub(n_, n_);
                QVec sb(n_);
                for (std::size_t i = 0; i < n_; ++i) {
                    for (std::size_t j = 0; j < n_; ++j) sub(i, j) = rows[comb[i]][j];
                    sb[i] = rhs[comb[i]];
                }
                if (det(sub) != 0) {
                    QVec x;
                    if (solve(sub, sb, x) && feasible_pt(x)) {
                        std::string k = vkey(x);
                        if (seen.insert(k).second) vertices_.push_back(x);
                    }
                }
                std::size_t i = n_;
                done = true;
                while (i > 0) {
                    --i;
                    if (comb[i] != i + m - n_) {
                        ++comb[i];
                        for (std::size_t j = i + 1; j < n_; ++j) comb[j] = comb[j - 1] + 1;
                        done = false;
                        break;
                    }
                }
            }
        }
        if (vertices_.empty()) {
            if (rank(a) < n_)
                throw std::invalid_argument(
                    "Polyhedron: constraint matrix is rank deficient (not strongly convex "
                    "or unbounded without vertex)");
            empty_ = true;
            return;
        }
        empty_ = false;
        std::sort(vertices_.begin(), vertices_.end(), lex_less);
        // extreme rays: n-1 tight independent homogeneous constraints
        std::set<std::string> rseen;
        if (n_ >= 1 && m >= n_ - 1) {
            std::size_t kk = n_ - 1;
            std::vector<std::size_t> rcomb(kk);
            for (std::size_t i = 0; i < kk; ++i) rcomb[i] = i;
            bool done = (m < kk);
            if (kk == 0) {
                // 1-dimensional ambient: candidate directions +-1
                for (int s : {1, -1}) {
                    QVec r{Rat(s)};
                    if (feasible_dir(r)) {
                        std::string k = vkey(r);
                        if (rseen.insert(k).second) rays_.push_back(r);
                    }
                }
                done = true;
            }
            while (!done) {
                QMat sub(kk, n_);
                for (std::size_t i = 0; i < kk; ++i)
                    for (std::size_t j = 0; j < n_; ++j) sub(i, j) = rows[rcomb[i]][j];
                std::vector<QVec> ker = kernel_basis(sub);
                if (ker.size() == 1) {
                    for (int s : {1, -1}) {
                        QVec r = ker[0];
                        if (s < 0)
                            for (auto& x : r) x = -x;
                        if (feasible_dir(r)) {
                            QVec rp = to_qvec(primitive_of_rat(r));
                            std::string k = vkey(rp);
                            if (rseen.insert(k).second) rays_.push_back(rp);
                        }
                    }
                }
                std::size_t i = kk;
                done = true;
                while (i > 0) {
                    --i;
                    if (rcomb[i] != i + m - kk) {
                        ++rcomb[i];
                        for (std::size_t j = i + 1; j < kk; ++j) rcomb[j] = rcomb[j - 1] + 1;
                        done = false;
                        break;
                    }
                }
            }
        }
        // guard against lines: +r and -r both feasible
        for (const auto& r : rays_) {
            QVec neg = r;
            for (auto& x : neg) x = -x;
            if (feasible_dir(neg))
                throw std::invalid_argument("Polyhedron: contains a line (not strongly convex)");
        }
        std::sort(rays_.begin(), rays_.end(), lex_less);
    }

    std::size_t n_;
    bool empty_;
    std::vector<QVec> vertices_;  ///< extreme points, lex sorted
    std::vector<QVec> rays_;      ///< primitive extreme rays, lex sorted
    std::vector<HalfSpace> facets_;
    std::vector<HalfSpace> equations_;
};

}  // namespace tropicoh

#endif  // TROPICOH_POLYHEDRON_HPP
