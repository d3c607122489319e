/**
 * Dense exact linear algebra over the rationals.
 *
 * Everything is deliberately dense and deterministic: reduced row echelon
 * form always picks the first nonzero entry in column order, so bases of
 * kernels, images and quotients are reproducible across runs.  Problem
 * sizes in this library are small (desk scale), so no sparsity or
 * pivoting heuristics are needed.
 */
#ifndef TROPICOH_LINALG_HPP
#define TROPICOH_LINALG_HPP

#include <cassert>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "tropicoh/rat.hpp"

namespace tropicoh {

/// Dense rational matrix (row major).
class QMat {
public:
    QMat() : rows_(0), cols_(0) {}
    QMat(std::size_t r, std::size_t c) : rows_(r), cols_(c), a_(r, QVec(c, Rat(0))) {}
    explicit QMat(std::vector<QVec> rows) : a_(std::move(rows)) {
        rows_ = a_.size();
        cols_ = rows_ ? a_[0].size() : 0;
        for (const auto& r : a_)
            if (r.size() != cols_) throw std::invalid_argument("ragged matrix");
    }

    static QMat identity(std::size_t n) {
        QMat m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    Rat& operator()(std::size_t i, std::size_t j) { return a_[i][j]; }
    const Rat& operator()(std::size_t i, std::size_t j) const { return a_[i][j]; }
    QVec& row(std::size_t i) { return a_[i]; }
    const QVec& row(std::size_t i) const { return a_[i]; }
    const std::vector<QVec>& data() const { return a_; }

    void push_row(QVec r) {
        if (rows_ == 0 && cols_ == 0) cols_ = r.size();
        if (r.size() != cols_) throw std::invalid_argument("row size mismatch");
        a_.push_back(std::move(r));
        ++rows_;
    }

    QMat transpose() const {
        QMat t(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) t(j, i) = a_[i][j];
        return t;
    }

    bool is_zero() const {
        for (const auto& r : a_)
            for (const auto& x : r)
                if (x != 0) return false;
        return true;
    }

    bool operator==(const QMat& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_;
    }

private:
    std::size_t rows_, cols_;
    std::vector<QVec> a_;
};

inline QMat operator*(const QMat& x, const QMat& y) {
    if (x.cols() != y.rows()) throw std::invalid_argument("matmul shape mismatch");
    QMat z(x.rows(), y.cols());
    for (std::size_t i = 0; i < x.rows(); ++i)
        for (std::size_t k = 0; k < x.cols(); ++k) {
            if (x(i, k) == 0) continue;
            for (std::size_t j = 0; j < y.cols(); ++j) z(i, j) += x(i, k) * y(k, j);
        }
    return z;
}

inline QVec operator*(const QMat& m, const QVec& v) {
    if (m.cols() != v.size()) throw std::invalid_argument("matvec shape mismatch");
    QVec r(m.rows(), Rat(0));
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) r[i] += m(i, j) * v[j];
    return r;
}

inline QMat operator+(const QMat& x, const QMat& y) {
    if (x.rows() != y.rows() || x.cols() != y.cols())
        throw std::invalid_argument("matadd shape mismatch");
    QMat z = x;
    for (std::size_t i = 0; i < x.rows(); ++i)
        for (std::size_t j = 0; j < x.cols(); ++j) z(i, j) += y(i, j);
    return z;
}

inline QMat scale(const QMat& x, const Rat& c) {
    QMat z = x;
    for (std::size_t i = 0; i < x.rows(); ++i)
        for (std::size_t j = 0; j < x.cols(); ++j) z(i, j) *= c;
    return z;
}

/// In-place reduced row echelon form; returns pivot column indices.
/// Deterministic: scans columns left to right, takes the first nonzero row.
inline std::vector<std::size_t> rref(QMat& m) {
    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
        std::size_t sel = m.rows();
        for (std::size_t i = r; i < m.rows(); ++i)
            if (m(i, c) != 0) { sel = i; break; }
        if (sel == m.rows()) continue;
        std::swap(m.row(r), m.row(sel));
        Rat inv = 1 / m(r, c);
        for (std::size_t j = c; j < m.cols(); ++j) m(r, j) *= inv;
        for (std::size_t i = 0; i < m.rows(); ++i) {
            if (i == r || m(i, c) == 0) continue;
            Rat f = m(i, c);
            for (std::size_t j = c; j < m.cols(); ++j) m(i, j) -= f * m(r, j);
        }
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

inline std::size_t rank(QMat m) { return rref(m).size(); }

/// Basis of the right kernel {x : m x = 0}, in deterministic RREF form
/// (one basis vector per free column, -1-normalized free coordinate... the
/// usual convention: free column gets coefficient 1).
inline std::vector<QVec> kernel_basis(QMat m) {
    std::size_t n = m.cols();
    std::vector<std::size_t> piv = rref(m);
    std::vector<bool> is_pivot(n, false);
    for (auto c : piv) is_pivot[c] = true;
    std::vector<QVec> basis;
    for (std::size_t f = 0; f < n; ++f) {
        if (is_pivot[f]) continue;
        QVec v(n, Rat(0));
        v[f] = 1;
        for (std::size_t i = 0; i < piv.size(); ++i) v[piv[i]] = -m(i, f);
        basis.push_back(std::move(v));
    }
    return basis;
}

/// Row-space basis in RREF form (canonical representation of a subspace).
inline std::vector<QVec> rowspace_basis(QMat m) {
    std::vector<std::size_t> piv = rref(m);
    std::vector<QVec> basis;
    for (std::size_t i = 0; i < piv.size(); ++i) basis.push_back(m.row(i));
    return basis;
}

inline QMat from_rows(const std::vector<QVec>& rows, std::size_t cols_hint = 0) {
    if (rows.empty()) return QMat(0, cols_hint);
    return QMat(rows);
}

/// Solve m x = b; returns true and writes a particular solution into x.
inline bool solve(const QMat& m, const QVec& b, QVec& x) {
    QMat aug(m.rows(), m.cols() + 1);
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) aug(i, j) = m(i, j);
        aug(i, m.cols()) = b[i];
    }
    std::vector<std::size_t> piv = rref(aug);
    if (!piv.empty() && piv.back() == m.cols()) return false;  // inconsistent
    x.assign(m.cols(), Rat(0));
    for (std::size_t i = 0; i < piv.size(); ++i) x[piv[i]] = aug(i, m.cols());
    return true;
}

/// Solve M X = B columnwise; returns false if any column is inconsistent.
inline bool solve_matrix(const QMat& m, const QMat& b, QMat& x) {
    x = QMat(m.cols(), b.cols());
    for (std::size_t j = 0; j < b.cols(); ++j) {
        QVec col(b.rows());
        for (std::size_t i = 0; i < b.rows(); ++i) col[i] = b(i, j);
        QVec sol;
        if (!solve(m, col, sol)) return false;
        for (std::size_t i = 0; i < m.cols(); ++i) x(i, j) = sol[i];
    }
    return true;
}

/// Is v in the row span of m?
inline bool in_rowspan(const QMat& m, const QVec& v) {
    QVec dummy;
    return solve(m.transpose(), v, dummy);
}

inline QMat inverse(const QMat& m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("inverse of non-square");
    std::size_t n = m.rows();
    QMat aug(n, 2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) aug(i, j) = m(i, j);
        aug(i, n + i) = 1;
    }
    std::vector<std::size_t> piv = rref(aug);
    if (piv.size() != n || piv.back() != n - 1) throw std::invalid_argument("singular matrix");
    QMat inv(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) inv(i, j) = aug(i, n + j);
    return inv;
}

inline Rat det(QMat m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("det of non-square");
    std::size_t n = m.rows();
    Rat d = 1;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t sel = n;
        for (std::size_t i = c; i < n; ++i)
            if (m(i, c) != 0) { sel = i; break; }
        if (sel == n) return Rat(0);
        if (sel != c) { std::swap(m.row(c), m.row(sel)); d = -d; }
        d *= m(c, c);
        for (std::size_t i = c + 1; i < n; ++i) {
            if (m(i, c) == 0) continue;
            Rat f = m(i, c) / m(c, c);
            for (std::size_t j = c; j < n; ++j) m(i, j) -= f * m(c, j);
        }
    }
    return d;
}

/// Intersection of two row spaces, canonical (RREF) basis.
inline std::vector<QVec> rowspace_intersection(const std::vector<QVec>& u,
                                               const std::vector<QVec>& v,
                                               std::size_t dim) {
    // x in span(u) cap span(v)  <=>  x = a.u = b.v; solve [U^T | -V^T] (a,b)^T = 0.
    QMat m(dim, u.size() + v.size());
    for (std::size_t j = 0; j < u.size(); ++j)
        for (std::size_t i = 0; i < dim; ++i) m(i, j) = u[j][i];
    for (std::size_t j = 0; j < v.size(); ++j)
        for (std::size_t i = 0; i < dim; ++i) m(i, u.size() + j) = -v[j][i];
    std::vector<QVec> ker = kernel_basis(m);
    QMat res;
    for (const auto& k : ker) {
        QVec x(dim, Rat(0));
        for (std::size_t j = 0; j < u.size(); ++j)
            for (std::size_t i = 0; i < dim; ++i) x[i] += k[j] * u[j][i];
        res.push_row(x);
    }
    if (res.rows() == 0) return {};
    return rowspace_basis(res);
}

}  // namespace tropicoh

#endif  // TROPICOH_LINALG_HPP
