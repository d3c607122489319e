/**
 * Exterior powers in lexicographic multi-index coordinates.
 *
 * For a linear map given by a matrix m (columns = source basis, rows =
 * target basis), induced_wedge_map(m, p) is the matrix of wedge^p m in the
 * lexicographic bases e_{i1} ^ ... ^ e_{ip}, i1 < ... < ip.  wedge^0 is the
 * 1 x 1 identity, making the construction functorial in degree 0 as well.
 */
#ifndef TROPICOH_WEDGE_HPP
#define TROPICOH_WEDGE_HPP

#include <cstddef>
#include <vector>

#include "tropicoh/linalg.hpp"
#include "tropicoh/rat.hpp"

namespace tropicoh {

/// All p-element subsets of {0..n-1} in lexicographic order.
inline std::vector<std::vector<std::size_t>> multi_indices(std::size_t n, std::size_t p) {
    std::vector<std::vector<std::size_t>> out;
    if (p > n) return out;
    std::vector<std::size_t> idx(p);
    for (std::size_t i = 0; i < p; ++i) idx[i] = i;
    while (true) {
        out.push_back(idx);
        if (p == 0) break;
        // advance
        std::size_t i = p;
        while (i > 0) {
            --i;
            if (idx[i] != i + n - p) {
                ++idx[i];
                for (std::size_t j = i + 1; j < p; ++j) idx[j] = idx[j - 1] + 1;
                break;
            }
            if (i == 0) return out;
        }
    }
    return out;
}

inline std::size_t binom(std::size_t n, std::size_t k) {
    if (k > n) return 0;
    std::size_t r = 1;
    for (std::size_t i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
    return r;
}

/// Matrix of wedge^p m: entry (I, J) = det of the submatrix m[I][J].
inline QMat induced_wedge_map(const QMat& m, std::size_t p) {
    auto rows_idx = multi_indices(m.rows(), p);
    auto cols_idx = multi_indices(m.cols(), p);
    QMat w(rows_idx.size(), cols_idx.size());
    for (std::size_t a = 0; a < rows_idx.size(); ++a)
        for (std::size_t b = 0; b < cols_idx.size(); ++b) {
            QMat sub(p, p);
            for (std::size_t i = 0; i < p; ++i)
                for (std::size_t j = 0; j < p; ++j)
                    sub(i, j) = m(rows_idx[a][i], cols_idx[b][j]);
            w(a, b) = (p == 0) ? Rat(1) : det(sub);
        }
    return w;
}

/// Contraction iota_v : wedge^p -> wedge^{p-1} where c[i] = <v, basis_i>.
/// iota_v(e_{i1}^...^e_{ip}) = sum_j (-1)^{j-1} c[i_j] e_{..without i_j..}.
inline QMat contraction_map(const QVec& c, std::size_t p) {
    std::size_t n = c.size();
    auto src = multi_indices(n, p);
    auto dst = multi_indices(n, p - 1);
    // index lookup for destination multi-indices
    auto find_dst = [&](const std::vector<std::size_t>& key) -> std::size_t {
        std::size_t lo = 0, hi = dst.size();
        while (lo < hi) {
            std::size_t mid = (lo + hi) / 2;
            if (dst[mid] < key) lo = mid + 1; else hi = mid;
        }
        return lo;
    };
    QMat m(dst.size(), src.size());
    for (std::size_t b = 0; b < src.size(); ++b) {
        for (std::size_t j = 0; j < p; ++j) {
            if (c[src[b][j]] == 0) continue;
            std::vector<std::size_t> rem;
            for (std::size_t t = 0; t < p; ++t)
                if (t != j) rem.push_back(src[b][t]);
            std::size_t a = find_dst(rem);
            Rat sgn = (j % 2 == 0) ? 1 : -1;
            m(a, b) += sgn * c[src[b][j]];
        }
    }
    return m;
}

/// Wedge of a list of vectors (given as rows) into lex coordinates of
/// wedge^p of the ambient space.
inline QVec wedge_of_rows(const std::vector<QVec>& rows, std::size_t n) {
    std::size_t p = rows.size();
    auto idx = multi_indices(n, p);
    QVec out(idx.size(), Rat(0));
    for (std::size_t a = 0; a < idx.size(); ++a) {
        QMat sub(p, p);
        for (std::size_t i = 0; i < p; ++i)
            for (std::size_t j = 0; j < p; ++j) sub(i, j) = rows[i][idx[a][j]];
        out[a] = (p == 0) ? Rat(1) : det(sub);
    }
    return out;
}

}  // namespace tropicoh

#endif  // TROPICOH_WEDGE_HPP
