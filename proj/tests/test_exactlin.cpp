// Exact linear algebra layer.  Oracle values in this file were derived by
// hand (row reductions, minors, Smith chains) before the implementation
// and are frozen here.
#include <doctest.h>

#include <tropicoh/chain.hpp>
#include <tropicoh/linalg.hpp>
#include <tropicoh/rat.hpp>
#include <tropicoh/snf.hpp>
#include <tropicoh/subquotient.hpp>
#include <tropicoh/wedge.hpp>

using namespace tropicoh;

TEST_CASE("rational parsing and canonical form") {
    CHECK(parse_rat("2/4") == Rat(1, 2));
    CHECK(parse_rat("-6/4") == Rat(-3, 2));
    CHECK(rat_str(parse_rat("-6/4")) == "-3/2");
    CHECK(rat_str(Rat(5)) == "5");
    CHECK_THROWS(parse_rat("1/0"));
    CHECK_THROWS(parse_rat("x"));
    CHECK_THROWS(parse_rat(""));
    // denominator stays positive in canonical form
    Rat q(Int(3), Int(-6));
    q.canonicalize();
    CHECK(q == Rat(-1, 2));
}

TEST_CASE("rref, rank, kernel") {
    // [[1,2,3],[2,4,6],[1,1,1]] has rank 2; kernel spanned by (1,-2,1).
    QMat m({{Rat(1), Rat(2), Rat(3)}, {Rat(2), Rat(4), Rat(6)}, {Rat(1), Rat(1), Rat(1)}});
    CHECK(rank(m) == 2);
    auto ker = kernel_basis(m);
    REQUIRE(ker.size() == 1);
    // deterministic RREF kernel convention: free coordinate = 1
    CHECK(ker[0] == QVec{Rat(1), Rat(-2), Rat(1)});
}

TEST_CASE("solve and inverse") {
    QMat m({{Rat(2), Rat(1)}, {Rat(1), Rat(3)}});
    QVec x;
    REQUIRE(solve(m, {Rat(3), Rat(5)}, x));
    CHECK(x == QVec{Rat(4, 5), Rat(7, 5)});
    QMat inv = inverse(m);
    CHECK(inv * m == QMat::identity(2));
    CHECK(det(m) == Rat(5));
    // inconsistent system
    QMat s({{Rat(1), Rat(1)}, {Rat(2), Rat(2)}});
    CHECK_FALSE(solve(s, {Rat(0), Rat(1)}, x));
}

TEST_CASE("rowspace intersection") {
    // span{(1,0,0),(0,1,0)} cap span{(0,1,0),(0,0,1)} = span{(0,1,0)}
    auto r = rowspace_intersection({{Rat(1), Rat(0), Rat(0)}, {Rat(0), Rat(1), Rat(0)}},
                                   {{Rat(0), Rat(1), Rat(0)}, {Rat(0), Rat(0), Rat(1)}}, 3);
    REQUIRE(r.size() == 1);
    CHECK(r[0] == QVec{Rat(0), Rat(1), Rat(0)});
}

TEST_CASE("smith normal form reference example") {
    // The worked example: [[2,4],[6,8]] has divisor chain (2, 4):
    // det = -8, gcd of entries 2, so divisors are 2 and 8/2 = 4.
    SmithResult s = smith_normal_form({{Int(2), Int(4)}, {Int(6), Int(8)}});
    REQUIRE(s.divisors.size() == 2);
    CHECK(s.divisors[0] == 2);
    CHECK(s.divisors[1] == 4);
    // U m V = D and unimodularity
    ZMat umv = detail::zmul(detail::zmul(s.u, {{Int(2), Int(4)}, {Int(6), Int(8)}}), s.v);
    CHECK(umv == s.d);
    QMat uq(2, 2), vq(2, 2);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            uq(i, j) = Rat(s.u[i][j]);
            vq(i, j) = Rat(s.v[i][j]);
        }
    CHECK(abs(det(uq)) == Rat(1));
    CHECK(abs(det(vq)) == Rat(1));
}

TEST_CASE("smith normal form shapes and divisibility") {
    // 2x3 of rank 2: [[1,0,0],[0,2,0]] style outcomes
    SmithResult s = smith_normal_form({{Int(2), Int(0), Int(0)}, {Int(0), Int(3), Int(0)}});
    REQUIRE(s.divisors.size() == 2);
    CHECK(s.divisors[0] == 1);
    CHECK(s.divisors[1] == 6);
    // zero matrix
    SmithResult z = smith_normal_form({{Int(0), Int(0)}});
    CHECK(z.divisors.empty());
}

TEST_CASE("primitive vector") {
    CHECK(primitive_vector({Int(4), Int(-6), Int(8)}) == ZVec{Int(2), Int(-3), Int(4)});
    CHECK_THROWS(primitive_vector({Int(0), Int(0)}));
    CHECK(primitive_of_rat({Rat(1, 2), Rat(-3, 4)}) == ZVec{Int(2), Int(-3)});
}

TEST_CASE("basis completion") {
    // (1,2,3) completes to a basis of Z^3.
    ZMat b = complete_to_basis({{Int(1), Int(2), Int(3)}}, 3);
    REQUIRE(b.size() == 3);
    CHECK(b[0] == ZVec{Int(1), Int(2), Int(3)});
    QMat bq(3, 3);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) bq(i, j) = Rat(b[i][j]);
    CHECK(abs(det(bq)) == Rat(1));
    // (2,4) is not part of a basis of Z^2
    CHECK_THROWS(complete_to_basis({{Int(2), Int(4)}}, 2));
}

TEST_CASE("wedge powers") {
    // wedge^0 is the 1x1 identity regardless of the matrix
    QMat m({{Rat(1), Rat(2)}, {Rat(3), Rat(4)}});
    QMat w0 = induced_wedge_map(m, 0);
    CHECK(w0 == QMat::identity(1));
    // wedge^2 of a 2x2 matrix is the determinant
    QMat w2 = induced_wedge_map(m, 2);
    REQUIRE(w2.rows() == 1);
    CHECK(w2(0, 0) == Rat(-2));
    // functoriality: wedge^p(AB) = wedge^p(A) wedge^p(B) on a 3x3 pair
    QMat a({{Rat(1), Rat(1), Rat(0)}, {Rat(0), Rat(1), Rat(2)}, {Rat(1), Rat(0), Rat(1)}});
    QMat b({{Rat(2), Rat(0), Rat(1)}, {Rat(1), Rat(1), Rat(0)}, {Rat(0), Rat(3), Rat(1)}});
    for (std::size_t p = 0; p <= 3; ++p)
        CHECK(induced_wedge_map(a * b, p) == induced_wedge_map(a, p) * induced_wedge_map(b, p));
}

TEST_CASE("contraction anticommutes") {
    // iota_u iota_v = -iota_v iota_u on wedge^2 of Q^3
    QVec u{Rat(1), Rat(2), Rat(0)}, v{Rat(0), Rat(1), Rat(1)};
    QMat iu2 = contraction_map(u, 2), iv2 = contraction_map(v, 2);
    QMat iu1 = contraction_map(u, 1), iv1 = contraction_map(v, 1);
    QMat lhs = iu1 * iv2;  // wedge^2 -> wedge^1 -> wedge^0
    QMat rhs = scale(iv1 * iu2, Rat(-1));
    CHECK(lhs == rhs);
}

TEST_CASE("wedge of rows") {
    // e1 ^ e2 in wedge^2 Q^3 has lex coordinates (1,0,0)
    QVec w = wedge_of_rows({{Rat(1), Rat(0), Rat(0)}, {Rat(0), Rat(1), Rat(0)}}, 3);
    CHECK(w == QVec{Rat(1), Rat(0), Rat(0)});
}

TEST_CASE("subquotient basics") {
    // V = Q^2 inside Q^3 (xy-plane), W = x-axis: quotient has dim 1.
    Subquotient s(3, {{Rat(1), Rat(0), Rat(0)}, {Rat(0), Rat(1), Rat(0)}},
                  {{Rat(1), Rat(0), Rat(0)}});
    CHECK(s.dim() == 1);
    // class of (3, 5, 0) is 5 * [e2]
    QVec c = s.coords({Rat(3), Rat(5), Rat(0)});
    REQUIRE(c.size() == 1);
    CHECK(c[0] == Rat(5));
    CHECK_THROWS(s.coords({Rat(0), Rat(0), Rat(1)}));
    // kill must lie inside span
    CHECK_THROWS(Subquotient(3, {{Rat(1), Rat(0), Rat(0)}}, {{Rat(0), Rat(1), Rat(0)}}));
}

TEST_CASE("subquotient map and ill-definedness detection") {
    Subquotient src(2, {{Rat(1), Rat(0)}, {Rat(0), Rat(1)}}, {{Rat(1), Rat(0)}});
    Subquotient dst(2, {{Rat(1), Rat(0)}, {Rat(0), Rat(1)}}, {{Rat(0), Rat(1)}});
    // swap map sends kill(src)=e1 to e2=kill(dst): well defined, and it is
    // an isomorphism on the quotients.
    QMat swp({{Rat(0), Rat(1)}, {Rat(1), Rat(0)}});
    QMat f = subquotient_map(src, dst, swp);
    REQUIRE(f.rows() == 1);
    CHECK(f(0, 0) == Rat(1));
    // identity map does NOT send kill(src) into kill(dst): must throw.
    CHECK_THROWS(subquotient_map(src, dst, QMat::identity(2)));
}

TEST_CASE("complex cohomology of a circle") {
    // Simplicial circle: 3 vertices, 3 edges; H^0 = H^1 = Q.
    // d(v) over edges e01, e12, e02 with boundary signs.
    CochainComplex c;
    c.lo = 0;
    c.dims = {3, 3};
    QMat d(3, 3);
    // rows: e01, e12, e02; cols: v0, v1, v2; d(f)(e) = f(head) - f(tail)
    d(0, 0) = -1; d(0, 1) = 1;
    d(1, 1) = -1; d(1, 2) = 1;
    d(2, 0) = -1; d(2, 2) = 1;
    c.d = {d};
    CohomologyResult h = complex_cohomology(c);
    CHECK(h.dim_at(0) == 1);
    CHECK(h.dim_at(1) == 1);
    // reduce a cocycle: the coboundary of (1,0,0) reduces to zero coords
    QVec cob = d * QVec{Rat(1), Rat(0), Rat(0)};
    QVec r = h.reduce(1, cob);
    REQUIRE(r.size() == 1);
    CHECK(r[0] == Rat(0));
}

TEST_CASE("complex cohomology rejects broken differentials") {
    CochainComplex c;
    c.lo = 0;
    c.dims = {1, 1, 1};
    QMat d0(1, 1), d1(1, 1);
    d0(0, 0) = 1;
    d1(0, 0) = 1;  // d1 * d0 = 1 != 0
    c.d = {d0, d1};
    CHECK_THROWS_WITH_AS(complex_cohomology(c, "bad"),
                         doctest::Contains("degree 0"), std::logic_error);
}
