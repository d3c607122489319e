#include <doctest.h>

#include <algorithm>
#include <vector>

#include "tropicoh/cohomology.hpp"
#include "tropicoh/monodromy.hpp"
#include "tropicoh/reduction.hpp"

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

static WeightedComplex p1_one_vertex() {
    AmbientFan amb = AmbientFan::make(p1_fan());
    Polyhedron left = Polyhedron::from_generators(1, {qv({0})}, {qv({-1})});
    Polyhedron right = Polyhedron::from_generators(1, {qv({0})}, {qv({1})});
    return WeightedComplex::build(amb, {left, right}, {1, 1});
}

static WeightedComplex p1_two_vertices() {
    AmbientFan amb = AmbientFan::make(p1_fan());
    Polyhedron left = Polyhedron::from_generators(1, {qv({0})}, {qv({-1})});
    Polyhedron mid = Polyhedron::from_generators(1, {qv({0}), qv({1})}, {});
    Polyhedron right = Polyhedron::from_generators(1, {qv({1})}, {qv({1})});
    return WeightedComplex::build(amb, {left, mid, right}, {1, 1, 1});
}

static Fan nine_fan() {
    std::vector<ZVec> rays = {zv({2, -1}), zv({1, 0}),   zv({0, 1}),  zv({-1, 2}), zv({-1, 1}),
                              zv({-1, 0}), zv({-1, -1}), zv({0, -1}), zv({1, -1})};
    std::vector<std::vector<std::size_t>> cones;
    for (std::size_t i = 0; i < 9; ++i) cones.push_back({i, (i + 1) % 9});
    return Fan::from_rays_and_cones(2, rays, cones);
}

static WeightedComplex plane_cubic() {
    AmbientFan amb = AmbientFan::make(nine_fan());
    auto seg = [&](std::vector<long> a, std::vector<long> b) {
        return Polyhedron::from_generators(2, {qv(a), qv(b)}, {});
    };
    auto tail = [&](std::vector<long> a, std::vector<long> d) {
        return Polyhedron::from_generators(2, {qv(a)}, {qv(d)});
    };
    std::vector<Polyhedron> cells = {seg({0, 0}, {1, 0}),   seg({1, 0}, {0, 1}),
                                     seg({0, 1}, {0, 0}),   tail({0, 0}, {-1, -1}),
                                     tail({1, 0}, {2, -1}), tail({0, 1}, {-1, 2})};
    return WeightedComplex::build(amb, cells, {1, 1, 1, 1, 1, 1});
}

static std::size_t e1_total(const MonodromySS& ss) {
    std::size_t t = 0;
    for (const auto& [k, d] : ss.e1) {
        (void)k;
        t += d;
    }
    return t;
}

TEST_CASE("weight spectral sequence of the one-vertex projective line") {
    ConeData cd = fan_over(p1_one_vertex());
    WeightedComplex base = p1_one_vertex();

    // level 1: the single summand is (u, J) = (1, {0}) contributing
    // H^{1,b}(X_infinity) at p = 0; only b = 1 is nonzero, at (0, 2)
    MonodromySS ss1 = monodromy_e1(cd, 1);
    REQUIRE(ss1.e1.size() == 1);
    CHECK(ss1.e1.at({0, 2}) == 1);
    REQUIRE(ss1.summands.at({0, 2}).size() == 1);
    CHECK(ss1.summands.at({0, 2})[0].u == 1);
    CHECK(ss1.summands.at({0, 2})[0].J == std::vector<std::size_t>{0});
    monodromy_d1(ss1);
    CHECK(ss1.d1_squared_zero);
    CHECK(ss1.e2 == ss1.e1);  // d1 vanishes: single column
    CHECK(ss1.einf == ss1.e1);
    CHECK(abutment_check(ss1, base));
    CHECK(ss1.abutment == std::vector<std::size_t>{0, 1});
    CHECK(ss1.einf_totals == std::vector<std::size_t>{0, 1});

    // level 0: u = 0, J = {0}, a = 0, p = 0; H^{0,b} of a projective line
    MonodromySS ss0 = monodromy_e1(cd, 0);
    CHECK(ss0.e1.at({0, 0}) == 1);
    CHECK(e1_total(ss0) == 1);
    monodromy_d1(ss0);
    CHECK(abutment_check(ss0, base));
    CHECK(eigenwave_vanishes_structurally(ss0));

    // the eigenwave from level 1 to level 0 has no surviving summands here
    CHECK(eigenwave_vanishes_structurally(ss1));
    EigenwaveMap ew = eigenwave(ss1, ss0);
    CHECK(ew.total_rank_e2 == 0);

    // concentration in q = 2r for a smooth base
    CHECK(smoothness_vanishing_check(ss0).first);
    CHECK(smoothness_vanishing_check(ss1).first);
}

TEST_CASE("weight spectral sequence of the two-vertex projective line") {
    ConeData cd = fan_over(p1_two_vertices());
    WeightedComplex base = p1_two_vertices();
    MonodromySS ss = monodromy_e1(cd, 1);
    monodromy_d1(ss);
    CHECK(ss.d1_squared_zero);
    // singleton strata are projective lines (u = 1, p = 0, only b = 1
    // survives) and the pair stratum is a point (u = 1, p = -1, b = 0);
    // the u = 2 pair summand is H^{1, *} of a point and vanishes
    CHECK(ss.e1.at({0, 2}) == 2);   // H^{1,1} of each line
    CHECK(ss.e1.at({-1, 2}) == 1);  // H^{0,0} of the point, shifted
    CHECK(e1_total(ss) == 3);
    // d1 must kill one of the three classes in total degree two
    CHECK(abutment_check(ss, base));
    CHECK(ss.abutment == std::vector<std::size_t>{0, 1});
    CHECK(smoothness_vanishing_check(ss).first);

    // the pair summand survives the eigenwave index shift, but the induced
    // map on second pages is zero: a projective line has no monodromy
    CHECK(!eigenwave_vanishes_structurally(ss));
    MonodromySS ss0 = monodromy_e1(cd, 0);
    monodromy_d1(ss0);
    EigenwaveMap ew = eigenwave(ss, ss0);
    CHECK(ew.total_rank_e2 == 0);
}

TEST_CASE("weight spectral sequence of a product of projective lines") {
    WeightedComplex p1 = p1_one_vertex();
    WeightedComplex sq = product_complex(p1, p1);
    ConeData cd = fan_over(sq);
    MonodromySS ss = monodromy_e1(cd, 1);
    monodromy_d1(ss);
    CHECK(abutment_check(ss, sq));
    CHECK(ss.abutment == std::vector<std::size_t>{0, 2, 0});
    CHECK(smoothness_vanishing_check(ss).first);
}

TEST_CASE("weight spectral sequence of the smooth plane cubic") {
    WeightedComplex cubic = plane_cubic();
    ConeData cd = fan_over(cubic);
    MonodromySS ss1 = monodromy_e1(cd, 1);
    monodromy_d1(ss1);
    CHECK(ss1.d1_squared_zero);
    CHECK(abutment_check(ss1, cubic));
    CHECK(ss1.abutment == std::vector<std::size_t>{1, 1});

    MonodromySS ss0 = monodromy_e1(cd, 0);
    monodromy_d1(ss0);
    CHECK(abutment_check(ss0, cubic));
    CHECK(ss0.abutment == std::vector<std::size_t>{1, 1});
    CHECK(eigenwave_vanishes_structurally(ss0));

    // the genus-one monodromy: the eigenwave has rank one on the second
    // page, realizing the isomorphism H^{1,0} -> H^{0,1}
    CHECK(!eigenwave_vanishes_structurally(ss1));
    EigenwaveMap ew = eigenwave(ss1, ss0);
    CHECK(ew.total_rank_e2 == 1);
    CHECK(ew.rank_e2.count({-1, 2}) == 1);
    CHECK(ew.rank_e2.at({-1, 2}) == 1);

    CHECK(smoothness_vanishing_check(ss0).first);
    CHECK(smoothness_vanishing_check(ss1).first);
}

TEST_CASE("weight spectral sequence of a point") {
    AmbientFan amb = AmbientFan::make(p1_fan());
    WeightedComplex pt = WeightedComplex::build(amb, {Polyhedron::point(qv({0}))}, {1});
    ConeData cd = fan_over(pt);
    MonodromySS ss = monodromy_e1(cd, 0);
    monodromy_d1(ss);
    CHECK(e1_total(ss) == 1);
    CHECK(abutment_check(ss, pt));
    CHECK(ss.abutment == std::vector<std::size_t>{1});
    MonodromySS ss1 = monodromy_e1(cd, 1);
    monodromy_d1(ss1);
    CHECK(abutment_check(ss1, pt));
    CHECK(ss1.abutment == std::vector<std::size_t>{0});
}

TEST_CASE("spectral sequence pages are invariant under vertex reordering") {
    ConeData cd = fan_over(p1_two_vertices());
    ConeData cd2 = cd;
    std::reverse(cd2.rays_I.begin(), cd2.rays_I.end());
    std::reverse(cd2.vertices.begin(), cd2.vertices.end());
    for (std::size_t r = 0; r <= 1; ++r) {
        MonodromySS a = monodromy_e1(cd, r);
        MonodromySS b = monodromy_e1(cd2, r);
        monodromy_d1(a);
        monodromy_d1(b);
        CHECK(a.e1 == b.e1);
        CHECK(a.e2 == b.e2);
        CHECK(a.einf == b.einf);
    }
    // the eigenwave rank is order-invariant too
    WeightedComplex cubic = plane_cubic();
    ConeData cc = fan_over(cubic);
    ConeData cc2 = cc;
    std::reverse(cc2.rays_I.begin(), cc2.rays_I.end());
    std::reverse(cc2.vertices.begin(), cc2.vertices.end());
    MonodromySS h1 = monodromy_e1(cc2, 1);
    MonodromySS l0 = monodromy_e1(cc2, 0);
    EigenwaveMap ew = eigenwave(h1, l0);
    CHECK(ew.total_rank_e2 == 1);
}

TEST_CASE("non-smooth structures fail the concentration check with witnesses") {
    // the cone over a square-shaped circle: not locally matroidal at the
    // apex (the link is a cycle), and the compactified apex star has the
    // off-diagonal class h^{2,1} = 1, which lands off the q = 2r line
    std::vector<ZVec> rays = {zv({1, 0}),  zv({1, 1}),   zv({0, 1}),
                              zv({-1, 0}), zv({-1, -1}), zv({0, -1})};
    std::vector<std::vector<std::size_t>> cones;
    for (std::size_t i = 0; i < 6; ++i) cones.push_back({i, (i + 1) % 6});
    AmbientFan amb = AmbientFan::make(Fan::from_rays_and_cones(2, rays, cones));
    auto seg = [&](std::vector<long> a, std::vector<long> b) {
        return Polyhedron::from_generators(2, {qv(a), qv(b)}, {});
    };
    std::vector<Polyhedron> cells = {seg({0, 0}, {1, 0}), seg({1, 0}, {1, 1}),
                                     seg({1, 1}, {0, 1}), seg({0, 1}, {0, 0})};
    WeightedComplex square = WeightedComplex::build(amb, cells, {1, 1, 1, 1});
    WeightedComplex y = fan_over(square).total;
    std::vector<std::vector<std::size_t>> h = hodge_table(y, 2, 2);
    REQUIRE(h[2][1] == 1);  // the off-diagonal class

    ConeData cd = fan_over(y);
    MonodromySS ss = monodromy_e1(cd, 2);
    auto [ok, witnesses] = smoothness_vanishing_check(ss);
    CHECK(!ok);
    REQUIRE(!witnesses.empty());
    CHECK(witnesses[0].find("E1^{0,3}") == 0);

    // levels 0 and 1 are still concentrated correctly
    MonodromySS ss1 = monodromy_e1(cd, 1);
    CHECK(smoothness_vanishing_check(ss1).first);
}
