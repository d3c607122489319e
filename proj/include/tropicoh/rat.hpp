/**
 * Exact rational scalars for all core computations.
 *
 * Rat is an arbitrary-precision rational kept in lowest terms with a
 * positive denominator (GMP guarantees the canonical form).  No floating
 * point is used anywhere in the library.
 */
#ifndef TROPICOH_RAT_HPP
#define TROPICOH_RAT_HPP

#include <gmpxx.h>

#include <cstdlib>
#include <stdexcept>
#include <string>
#include <vector>

namespace tropicoh {

using Int = mpz_class;
using Rat = mpq_class;

/// Parse "a/b" or "a" into a rational; throws std::invalid_argument on junk.
inline Rat parse_rat(const std::string& s) {
    if (s.empty()) throw std::invalid_argument("empty rational literal");
    for (char c : s) {
        if (!(c == '-' || c == '/' || (c >= '0' && c <= '9')))
            throw std::invalid_argument("bad rational literal: " + s);
    }
    Rat q;
    if (q.set_str(s, 10) != 0) throw std::invalid_argument("bad rational literal: " + s);
    if (q.get_den() == 0) throw std::invalid_argument("zero denominator: " + s);
    q.canonicalize();
    return q;
}

/// Render canonically: "a" when the denominator is 1, otherwise "a/b".
inline std::string rat_str(const Rat& q) {
    if (q.get_den() == 1) return q.get_num().get_str();
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

using QVec = std::vector<Rat>;
using ZVec = std::vector<Int>;

inline Rat dot(const QVec& a, const QVec& b) {
    Rat s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline QVec to_qvec(const ZVec& v) {
    QVec r(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) r[i] = Rat(v[i]);
    return r;
}

/// Lexicographic comparison, used for canonical orderings throughout.
inline bool lex_less(const QVec& a, const QVec& b) {
    for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) {
        int c = cmp(a[i], b[i]);
        if (c != 0) return c < 0;
    }
    return a.size() < b.size();
}

}  // namespace tropicoh

#endif  // TROPICOH_RAT_HPP
