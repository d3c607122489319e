#include <doctest.h>

#include "tropicoh/apresolution.hpp"
#include "tropicoh/cohomology.hpp"
#include "tropicoh/complex.hpp"
#include "tropicoh/reduction.hpp"
#include "tropicoh/troptoric.hpp"

using namespace tropicoh;

static QVec qv(std::vector<long> v) {
    QVec out;
    for (long x : v) out.emplace_back(x);
    return out;
}
static ZVec zv(std::vector<long> v) {
    ZVec out;
    for (long x : v) out.emplace_back(x);
    return out;
}

static Fan p1_fan() { return Fan::from_rays_and_cones(1, {zv({1}), zv({-1})}, {{0}, {1}}); }

// the projective line with its one-vertex structure: {0}, [0, inf), (-inf, 0]
static WeightedComplex p1_one_vertex() {
    AmbientFan amb = AmbientFan::make(p1_fan());
    Polyhedron left = Polyhedron::from_generators(1, {qv({0})}, {qv({-1})});
    Polyhedron right = Polyhedron::from_generators(1, {qv({0})}, {qv({1})});
    return WeightedComplex::build(amb, {left, right}, {1, 1});
}

// the projective line with vertices {0, 1}
static WeightedComplex p1_two_vertices() {
    AmbientFan amb = AmbientFan::make(p1_fan());
    Polyhedron left = Polyhedron::from_generators(1, {qv({0})}, {qv({-1})});
    Polyhedron mid = Polyhedron::from_generators(1, {qv({0}), qv({1})}, {});
    Polyhedron right = Polyhedron::from_generators(1, {qv({1})}, {qv({1})});
    return WeightedComplex::build(amb, {left, mid, right}, {1, 1, 1});
}

TEST_CASE("fan over the one-vertex projective line") {
    ConeData cd = fan_over(p1_one_vertex());
    // rays (0,1), (1,0), (-1,0) and the two 2-cones spanned with (0,1)
    const auto& rg = cd.restricted.ray_generators();
    REQUIRE(rg.size() == 3);
    bool up = false, right = false, left = false;
    for (const auto& r : rg) {
        if (r == zv({0, 1})) up = true;
        if (r == zv({1, 0})) right = true;
        if (r == zv({-1, 0})) left = true;
    }
    CHECK(up);
    CHECK(right);
    CHECK(left);
    std::size_t two_cones = 0;
    for (std::size_t c = 0; c < cd.restricted.size(); ++c)
        if (cd.restricted.dim_of(c) == 2) ++two_cones;
    CHECK(two_cones == 2);
    REQUIRE(cd.rays_I.size() == 1);
    CHECK(rg[cd.rays_I[0]] == zv({0, 1}));
    CHECK(cd.vertices[0] == qv({0}));
    CHECK(cd.restricted.is_unimodular());
    CHECK(cd.total.dim() == 2);
    // the total space is generally not balanced along its height-zero
    // boundary rays (only the strata are required to be), but it is a
    // regular-at-infinity fan-closure complex
    CHECK(cd.total.check_regular_at_infinity().first);
}

TEST_CASE("semi-stable reduction of the one-vertex projective line") {
    ConeData cd = fan_over(p1_one_vertex());
    SemistableReduction red = semistable_reduction(cd);
    REQUIRE(red.strata.size() == 1);
    REQUIRE(red.x_infinity.size() == 1);
    const ReductionStratum& st = red.strata[0];
    CHECK(st.J == std::vector<std::size_t>{0});
    CHECK(st.xj.dim() == 1);
    CHECK(st.weights == std::vector<Int>{1, 1});
    // X_infinity is a projective line again
    std::vector<std::vector<std::size_t>> h = hodge_table(st.xj, 1, 1);
    CHECK(h[0][0] == 1);
    CHECK(h[1][1] == 1);
    CHECK(h[0][1] == 0);
    CHECK(h[1][0] == 0);
}

TEST_CASE("fan over the two-vertex projective line") {
    ConeData cd = fan_over(p1_two_vertices());
    const auto& rg = cd.restricted.ray_generators();
    REQUIRE(rg.size() == 4);
    bool v0 = false, v1 = false, right = false, left = false;
    for (const auto& r : rg) {
        if (r == zv({0, 1})) v0 = true;
        if (r == zv({1, 1})) v1 = true;
        if (r == zv({1, 0})) right = true;
        if (r == zv({-1, 0})) left = true;
    }
    CHECK(v0);
    CHECK(v1);
    CHECK(right);
    CHECK(left);
    REQUIRE(cd.rays_I.size() == 2);
    CHECK(rg[cd.rays_I[0]] == zv({0, 1}));
    CHECK(rg[cd.rays_I[1]] == zv({1, 1}));
    CHECK(cd.vertices[0] == qv({0}));
    CHECK(cd.vertices[1] == qv({1}));
}

TEST_CASE("semi-stable reduction of the two-vertex projective line") {
    ConeData cd = fan_over(p1_two_vertices());
    SemistableReduction red = semistable_reduction(cd);
    REQUIRE(red.strata.size() == 3);
    REQUIRE(red.x_infinity.size() == 2);
    std::size_t lines = 0, points = 0;
    for (const ReductionStratum& st : red.strata) {
        CHECK(st.xj.dim() == 2 - static_cast<int>(st.J.size()));
        CHECK(st.xj.check_balancing().first);
        if (st.J.size() == 1) {
            ++lines;
            std::vector<std::vector<std::size_t>> h = hodge_table(st.xj, 1, 1);
            CHECK(h[0][0] == 1);
            CHECK(h[1][1] == 1);
        } else {
            ++points;
            std::vector<std::vector<std::size_t>> h = hodge_table(st.xj, 0, 0);
            CHECK(h[0][0] == 1);
        }
    }
    CHECK(lines == 2);
    CHECK(points == 1);
}

TEST_CASE("reduction of a point") {
    // a single point at the origin of a rank-one ambient with only the
    // trivial fan structure available: use the complete fan on R^1 and the
    // cell {0}
    AmbientFan amb = AmbientFan::make(p1_fan());
    WeightedComplex x = WeightedComplex::build(amb, {Polyhedron::point(qv({0}))}, {1});
    ConeData cd = fan_over(x);
    // the fan over a point is {0, one ray}
    REQUIRE(cd.restricted.ray_generators().size() == 1);
    CHECK(cd.restricted.ray_generators()[0] == zv({0, 1}));
    REQUIRE(cd.rays_I.size() == 1);
    SemistableReduction red = semistable_reduction(cd);
    REQUIRE(red.strata.size() == 1);
    CHECK(red.strata[0].xj.dim() == 0);
    std::vector<std::vector<std::size_t>> h = hodge_table(red.strata[0].xj, 0, 0);
    CHECK(h[0][0] == 1);
}

TEST_CASE("overlapping recession cones are rejected with a witness") {
    // two disjoint two-dimensional cells in R^3 whose recession cones fail
    // to meet in a common face: the quadrant <e1,e2> at height zero and a
    // strip at height one receding along the interior direction (1,1,0)
    Fan amb2 = Fan::from_cones(3, {Polyhedron::point(qv({0, 0, 0}))});
    AmbientFan amb = AmbientFan::make(amb2);
    Polyhedron c1 = Polyhedron::from_generators(
        3, {qv({0, 0, 0})}, {qv({1, 0, 0}), qv({0, 1, 0})});
    Polyhedron c2 = Polyhedron::from_generators(3, {qv({0, 0, 1}), qv({-1, 1, 1})},
                                                {qv({1, 1, 0})});
    WeightedComplex bad = WeightedComplex::build(amb, {c1, c2}, {1, 1}, false);
    CHECK_THROWS_WITH_AS(fan_over(bad), doctest::Contains("do not form a fan"),
                         std::invalid_argument);
}

TEST_CASE("strata agree with the based resolution complexes of the total space") {
    // the cohomology of X_J computed on its own star-fan realization equals
    // the cohomology of the resolution complex of the cone complex based at
    // sigma_J, for every stratum and every wedge degree
    for (const WeightedComplex& x : {p1_one_vertex(), p1_two_vertices()}) {
        ConeData cd = fan_over(x);
        SemistableReduction red = semistable_reduction(cd);
        for (const ReductionStratum& st : red.strata) {
            for (std::size_t a = 0; a <= static_cast<std::size_t>(st.xj.dim()); ++a) {
                std::vector<std::size_t> own = ap_hodge(st.xj, a);
                APComplex based =
                    detail::build_ap_at(cd.total, static_cast<int>(a), st.sigma);
                CohomologyResult res = complex_cohomology(based.complex, "based");
                for (int q = 0; q <= st.xj.dim(); ++q)
                    CHECK(own[static_cast<std::size_t>(q)] ==
                          res.dim_at(static_cast<int>(a) + q));
            }
        }
    }
}
