/**
 * Integer matrix normal forms: Smith normal form with unimodular
 * transforms, primitive vectors, and lattice basis completion.
 */
#ifndef TROPICOH_SNF_HPP
#define TROPICOH_SNF_HPP

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "tropicoh/linalg.hpp"
#include "tropicoh/rat.hpp"

namespace tropicoh {

/// Dense integer matrix as rows of ZVec.
using ZMat = std::vector<ZVec>;

struct SmithResult {
    ZMat u;             ///< rows x rows, unimodular
    ZMat v;             ///< cols x cols, unimodular
    ZMat d;             ///< u * m * v, diagonal with divisibility chain
    std::vector<Int> divisors;  ///< nonzero elementary divisors, each dividing the next
};

namespace detail {

inline ZMat zident(std::size_t n) {
    ZMat m(n, ZVec(n, Int(0)));
    for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
    return m;
}

inline ZMat zmul(const ZMat& a, const ZMat& b) {
    std::size_t r = a.size(), k = b.size(), c = k ? b[0].size() : 0;
    ZMat z(r, ZVec(c, Int(0)));
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t t = 0; t < k; ++t) {
            if (a[i][t] == 0) continue;
            for (std::size_t j = 0; j < c; ++j) z[i][j] += a[i][t] * b[t][j];
        }
    return z;
}

}  // namespace detail

/// Smith normal form: returns U, V unimodular with U m V = D diagonal,
/// nonnegative, and D[i][i] | D[i+1][i+1].  Works for any shape.
inline SmithResult smith_normal_form(ZMat m) {
    std::size_t r = m.size(), c = r ? m[0].size() : 0;
    ZMat u = detail::zident(r), v = detail::zident(c);

    auto row_op = [&](std::size_t i, std::size_t j, const Int& q) {
        // row_i -= q * row_j
        for (std::size_t t = 0; t < c; ++t) m[i][t] -= q * m[j][t];
        for (std::size_t t = 0; t < r; ++t) u[i][t] -= q * u[j][t];
    };
    auto col_op = [&](std::size_t i, std::size_t j, const Int& q) {
        // col_i -= q * col_j
        for (std::size_t t = 0; t < r; ++t) m[t][i] -= q * m[t][j];
        for (std::size_t t = 0; t < c; ++t) v[t][i] -= q * v[t][j];
    };
    auto row_swap = [&](std::size_t i, std::size_t j) {
        std::swap(m[i], m[j]);
        std::swap(u[i], u[j]);
    };
    auto col_swap = [&](std::size_t i, std::size_t j) {
        for (std::size_t t = 0; t < r; ++t) std::swap(m[t][i], m[t][j]);
        for (std::size_t t = 0; t < c; ++t) std::swap(v[t][i], v[t][j]);
    };
    auto row_negate = [&](std::size_t i) {
        for (std::size_t t = 0; t < c; ++t) m[i][t] = -m[i][t];
        for (std::size_t t = 0; t < r; ++t) u[i][t] = -u[i][t];
    };

    std::size_t t = 0;
    while (t < r && t < c) {
        // Find a nonzero pivot with minimal absolute value in the trailing block.
        std::size_t pi = r, pj = c;
        Int best = 0;
        for (std::size_t i = t; i < r; ++i)
            for (std::size_t j = t; j < c; ++j) {
                if (m[i][j] == 0) continue;
                Int a = abs(m[i][j]);
                if (best == 0 || a < best) { best = a; pi = i; pj = j; }
            }
        if (pi == r) break;  // trailing block is zero
        row_swap(t, pi);
        col_swap(t, pj);

        bool clean = false;
        while (!clean) {
            clean = true;
            for (std::size_t i = t + 1; i < r; ++i) {
                if (m[i][t] == 0) continue;
                Int q;
                mpz_fdiv_q(q.get_mpz_t(), m[i][t].get_mpz_t(), m[t][t].get_mpz_t());
                row_op(i, t, q);
                if (m[i][t] != 0) { row_swap(t, i); clean = false; }
            }
            for (std::size_t j = t + 1; j < c; ++j) {
                if (m[t][j] == 0) continue;
                Int q;
                mpz_fdiv_q(q.get_mpz_t(), m[t][j].get_mpz_t(), m[t][t].get_mpz_t());
                col_op(j, t, q);
                if (m[t][j] != 0) { col_swap(t, j); clean = false; }
            }
        }
        if (m[t][t] < 0) row_negate(t);
        // Enforce divisibility: if some later entry is not divisible by the
        // pivot, fold its column into column t and redo this position.
        bool redo = false;
        for (std::size_t i = t + 1; i < r && !redo; ++i)
            for (std::size_t j = t + 1; j < c && !redo; ++j)
                if (m[i][j] % m[t][t] != 0) {
                    col_op(t, j, Int(-1));  // col_t += col_j
                    redo = true;
                }
        if (!redo) ++t;
    }

    SmithResult res;
    res.u = u;
    res.v = v;
    res.d = m;
    for (std::size_t i = 0; i < r && i < c; ++i)
        if (m[i][i] != 0) res.divisors.push_back(m[i][i]);
    return res;
}

/// gcd of all entries of a vector (nonnegative; 0 for the zero vector).
inline Int content(const ZVec& v) {
    Int g = 0;
    for (const auto& x : v) g = gcd(g, x);
    return abs(g);
}

/// v / gcd(entries).  Throws on the zero vector, which has no primitive form.
inline ZVec primitive_vector(const ZVec& v) {
    Int g = content(v);
    if (g == 0) throw std::invalid_argument("primitive_vector of zero vector");
    ZVec r(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) r[i] = v[i] / g;
    return r;
}

/// Scale a rational direction vector to its primitive integer form.
inline ZVec primitive_of_rat(const QVec& v) {
    Int l = 1;
    for (const auto& x : v) l = lcm(l, x.get_den());
    ZVec z(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        Rat s = v[i] * Rat(l);
        z[i] = s.get_num();
    }
    return primitive_vector(z);
}

/// Given k independent integer row vectors in Z^n that span a saturated
/// sublattice (all elementary divisors 1), return an n x n unimodular
/// matrix whose first k rows are the given vectors ("adapted basis").
/// Throws if the rows do not form part of a Z-basis.
inline ZMat complete_to_basis(const ZMat& rows, std::size_t n) {
    std::size_t k = rows.size();
    if (k == 0) return detail::zident(n);
    SmithResult s = smith_normal_form(rows);
    if (s.divisors.size() != k)
        throw std::invalid_argument("complete_to_basis: rows not independent");
    for (const auto& d : s.divisors)
        if (d != 1) throw std::invalid_argument("complete_to_basis: rows not primitive part of a basis");
    // U * rows * V = [I_k | 0]  =>  rows = U^{-1} [I_k | 0] V^{-1}.
    // V^{-1}'s rows: first k rows of V^{-1} = (U * rows) padded; simpler:
    // rows * V = U^{-1} [I_k|0], so the lattice spanned by rows has
    // complement spanned by the last n-k rows of V^{-1}.
    // Build V^{-1} exactly over Q and check integrality.
    QMat vq(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) vq(i, j) = Rat(s.v[i][j]);
    QMat vinv = inverse(vq);
    ZMat basis;
    for (std::size_t i = 0; i < k; ++i) basis.push_back(rows[i]);
    for (std::size_t i = k; i < n; ++i) {
        ZVec row(n);
        for (std::size_t j = 0; j < n; ++j) {
            if (vinv(i, j).get_den() != 1)
                throw std::logic_error("complete_to_basis: V^{-1} not integral");
            row[j] = vinv(i, j).get_num();
        }
        basis.push_back(row);
    }
    // Sanity: determinant must be a unit.
    QMat bq(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) bq(i, j) = Rat(basis[i][j]);
    Rat dt = det(bq);
    if (dt != 1 && dt != -1) throw std::logic_error("complete_to_basis: completion not unimodular");
    return basis;
}

/// Integer basis of span(rows) ∩ Z^n (the saturation of the lattice the
/// rational rows span).  Returned rows always extend to a Z-basis of Z^n.
inline ZMat saturated_basis(const std::vector<QVec>& rows, std::size_t n) {
    // x lies in the subspace iff it is killed by a basis of the orthogonal
    // complement; integer points of that kernel come out of the SNF of the
    // (integer-cleared) normal matrix.
    std::vector<QVec> normals = kernel_basis(from_rows(rows, n));
    if (normals.empty()) return detail::zident(n);
    ZMat a;
    for (const auto& v : normals) a.push_back(primitive_of_rat(v));
    SmithResult s = smith_normal_form(a);
    std::size_t r = s.divisors.size();
    ZMat basis;
    for (std::size_t j = r; j < n; ++j) {
        ZVec col(n);
        for (std::size_t i = 0; i < n; ++i) col[i] = s.v[i][j];
        basis.push_back(col);
    }
    return basis;
}

}  // namespace tropicoh

#endif  // TROPICOH_SNF_HPP
