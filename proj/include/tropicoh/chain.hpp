/**
 * Finite cochain complexes of Q-vector spaces with exact cohomology,
 * including representative cocycle bases and reduction of cocycles to
 * cohomology coordinates.
 */
#ifndef TROPICOH_CHAIN_HPP
#define TROPICOH_CHAIN_HPP

#include <cstddef>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "tropicoh/linalg.hpp"
#include "tropicoh/rat.hpp"

namespace tropicoh {

/// A bounded cochain complex; degree m has dimension dims[m - lo] and the
/// differential d[m - lo] maps degree m to degree m+1.
struct CochainComplex {
    int lo = 0;
    std::vector<std::size_t> dims;  ///< dims[i] = dim C^{lo+i}
    std::vector<QMat> d;            ///< d[i] : C^{lo+i} -> C^{lo+i+1}; size dims.size()-1 (or with trailing zero maps)

    int hi() const { return lo + static_cast<int>(dims.size()) - 1; }
    std::size_t dim_at(int m) const {
        if (m < lo || m > hi()) return 0;
        return dims[static_cast<std::size_t>(m - lo)];
    }
    const QMat* d_at(int m) const {
        if (m < lo || m >= hi()) return nullptr;
        return &d[static_cast<std::size_t>(m - lo)];
    }
};

struct CohomologyDegree {
    std::size_t dim = 0;
    std::vector<QVec> reps;      ///< representative cocycles
    std::vector<QVec> cycle_basis;    ///< basis of ker d
    std::vector<QVec> boundary_basis; ///< basis of im d_{prev}
};

struct CohomologyResult {
    int lo = 0;
    std::vector<CohomologyDegree> degrees;

    const CohomologyDegree& at(int m) const {
        static const CohomologyDegree empty;
        if (m < lo || m >= lo + static_cast<int>(degrees.size())) return empty;
        return degrees[static_cast<std::size_t>(m - lo)];
    }
    std::size_t dim_at(int m) const { return at(m).dim; }

    /// Coordinates of a cocycle's class in the representative basis.
    QVec reduce(int m, const QVec& cocycle) const {
        const CohomologyDegree& cd = at(m);
        std::vector<QVec> cols = cd.reps;
        for (const auto& b : cd.boundary_basis) cols.push_back(b);
        QMat mat = from_rows(cols, cocycle.size()).transpose();
        QVec full;
        if (!solve(mat, cocycle, full))
            throw std::invalid_argument("CohomologyResult::reduce: not a cocycle class");
        return QVec(full.begin(), full.begin() + cd.reps.size());
    }
};

/// Cohomology of a complex.  Throws if d^2 != 0, reporting the offending
/// degree, as required: a broken differential is an upstream bug.
inline CohomologyResult complex_cohomology(const CochainComplex& c,
                                           const std::string& what = "complex") {
    for (int m = c.lo; m + 1 < c.hi(); ++m) {
        const QMat* d0 = c.d_at(m);
        const QMat* d1 = c.d_at(m + 1);
        if (d0 && d1 && !(*d1 * *d0).is_zero())
            throw std::logic_error(what + ": d^2 != 0 at degree " + std::to_string(m));
    }
    CohomologyResult res;
    res.lo = c.lo;
    for (int m = c.lo; m <= c.hi(); ++m) {
        CohomologyDegree cd;
        std::size_t n = c.dim_at(m);
        // kernel of outgoing differential
        std::vector<QVec> ker;
        if (const QMat* d = c.d_at(m)) {
            ker = kernel_basis(*d);
        } else {
            for (std::size_t i = 0; i < n; ++i) {
                QVec e(n, Rat(0));
                e[i] = 1;
                ker.push_back(e);
            }
        }
        // image of incoming differential
        std::vector<QVec> im;
        if (m > c.lo) {
            if (const QMat* dprev = c.d_at(m - 1)) im = rowspace_basis(dprev->transpose());
        }
        cd.cycle_basis = ker;
        cd.boundary_basis = im;
        // representatives: extend im-basis inside ker, greedily and
        // deterministically over the RREF kernel basis.
        std::vector<QVec> acc = im;
        for (const auto& k : ker) {
            QMat test = from_rows(acc, n);
            test.push_row(k);
            if (rank(test) > acc.size()) {
                acc.push_back(k);
                cd.reps.push_back(k);
            }
        }
        cd.dim = cd.reps.size();
        res.degrees.push_back(std::move(cd));
    }
    return res;
}

}  // namespace tropicoh

#endif  // TROPICOH_CHAIN_HPP
