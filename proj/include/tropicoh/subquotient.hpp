/**
 * Subquotients of Q^n: a span V together with a subspace W <= V to kill,
 * with deterministic representative bases and induced maps.
 */
#ifndef TROPICOH_SUBQUOTIENT_HPP
#define TROPICOH_SUBQUOTIENT_HPP

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "tropicoh/linalg.hpp"
#include "tropicoh/rat.hpp"

namespace tropicoh {

class Subquotient {
public:
    Subquotient() : n_(0) {}

    /// span rows generate V, kill rows generate W; W must lie in V.
    Subquotient(std::size_t ambient_dim, const std::vector<QVec>& span,
                const std::vector<QVec>& kill)
        : n_(ambient_dim) {
        v_ = rowspace_basis(from_rows(span, n_));
        w_ = rowspace_basis(from_rows(kill, n_));
        QMat vt = from_rows(v_, n_).transpose();
        for (const auto& w : w_) {
            QVec c;
            if (!solve(vt, w, c))
                throw std::invalid_argument("Subquotient: kill space not inside span");
        }
        // Deterministic representatives: extend a basis of W by rows of the
        // RREF basis of V, greedily keeping those that enlarge the span.
        std::vector<QVec> acc = w_;
        for (const auto& r : v_) {
            QMat test = from_rows(acc, n_);
            test.push_row(r);
            if (rank(test) > acc.size()) {
                acc.push_back(r);
                reps_.push_back(r);
            }
        }
    }

    /// Full space modulo nothing.
    static Subquotient full(std::size_t n) {
        std::vector<QVec> id;
        for (std::size_t i = 0; i < n; ++i) {
            QVec e(n, Rat(0));
            e[i] = 1;
            id.push_back(e);
        }
        return Subquotient(n, id, {});
    }

    std::size_t ambient_dim() const { return n_; }
    std::size_t dim() const { return reps_.size(); }
    const std::vector<QVec>& representatives() const { return reps_; }
    const std::vector<QVec>& span_basis() const { return v_; }
    const std::vector<QVec>& kill_basis() const { return w_; }

    bool contains(const QVec& x) const {
        QVec c;
        return solve(from_rows(v_, n_).transpose(), x, c);
    }

    /// Coordinates of the class of x in the representative basis.
    /// Throws if x is not in the span.
    QVec coords(const QVec& x) const {
        std::vector<QVec> cols = reps_;
        for (const auto& w : w_) cols.push_back(w);
        QMat m = from_rows(cols, n_).transpose();
        QVec full;
        if (!solve(m, x, full))
            throw std::invalid_argument("Subquotient::coords: vector not in span");
        return QVec(full.begin(), full.begin() + reps_.size());
    }

    /// Lift class coordinates back to a representative ambient vector.
    QVec lift(const QVec& c) const {
        QVec x(n_, Rat(0));
        for (std::size_t i = 0; i < reps_.size(); ++i)
            for (std::size_t j = 0; j < n_; ++j) x[j] += c[i] * reps_[i][j];
        return x;
    }

private:
    std::size_t n_;
    std::vector<QVec> v_, w_, reps_;
};

/// Matrix (in representative coordinates) of the map induced by the ambient
/// linear map `amb` (target_ambient x source_ambient).  Errors if the map
/// does not send span to span or kill to kill; the report names the first
/// violating generator so upstream bugs surface loudly.
inline QMat subquotient_map(const Subquotient& src, const Subquotient& dst, const QMat& amb,
                            const std::string& what = "subquotient_map") {
    if (amb.cols() != src.ambient_dim() || amb.rows() != dst.ambient_dim())
        throw std::invalid_argument(what + ": ambient shape mismatch");
    for (std::size_t i = 0; i < src.kill_basis().size(); ++i) {
        QVec y = amb * src.kill_basis()[i];
        bool in_kill = false;
        {
            QVec c;
            in_kill = solve(from_rows(dst.kill_basis(), dst.ambient_dim()).transpose(), y, c);
        }
        if (!in_kill)
            throw std::invalid_argument(what + ": ill defined, kill generator " +
                                        std::to_string(i) + " not sent into kill space");
    }
    QMat out(dst.dim(), src.dim());
    for (std::size_t j = 0; j < src.dim(); ++j) {
        QVec y = amb * src.representatives()[j];
        if (!dst.contains(y))
            throw std::invalid_argument(what + ": image of representative " +
                                        std::to_string(j) + " escapes target span");
        QVec c = dst.coords(y);
        for (std::size_t i = 0; i < dst.dim(); ++i) out(i, j) = c[i];
    }
    return out;
}

}  // namespace tropicoh

#endif  // TROPICOH_SUBQUOTIENT_HPP
