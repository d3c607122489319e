#include <doctest.h>

#include "tropicoh/unimod.hpp"

using namespace tropicoh;

namespace {

QVec qv(std::initializer_list<long> xs) {
    QVec v;
    for (long x : xs) v.push_back(Rat(x));
    return v;
}

ZVec zv(std::initializer_list<long> xs) {
    ZVec v;
    for (long x : xs) v.push_back(Int(x));
    return v;
}

Fan p1_fan() {
    return Fan::from_rays_and_cones(1, {zv({1}), zv({-1})}, {{0}, {1}});
}

Fan quad_fan() {
    return Fan::from_rays_and_cones(2, {zv({1, 0}), zv({0, 1}), zv({-1, 0}), zv({0, -1})},
                                    {{0, 1}, {1, 2}, {2, 3}, {3, 0}});
}

Fan p2_fan() {
    return Fan::from_rays_and_cones(2, {zv({1, 0}), zv({0, 1}), zv({-1, -1})},
                                    {{0, 1}, {1, 2}, {2, 0}});
}

std::size_t max_cell_count(const PolyComplex& c) {
    std::size_t n = 0;
    for (std::size_t i = 0; i < c.size(); ++i)
        if (c.is_maximal(i)) ++n;
    return n;
}

}  // namespace

TEST_CASE("unimodular cells: lattice certificates") {
    Polyhedron unit = Polyhedron::from_generators(2, {qv({0, 0}), qv({1, 0})}, {});
    CHECK(is_unimodular_cell(unit, 1));

    // a length-2 segment is never unimodular: the difference vector is
    // imprimitive in every refinement (1/k)Z^2
    Polyhedron twice = Polyhedron::from_generators(2, {qv({0, 0}), qv({2, 0})}, {});
    CHECK(!is_unimodular_cell(twice, 1));
    CHECK(!is_unimodular_cell(twice, 2));

    // half-integral vertices need k = 2
    Polyhedron half = Polyhedron::from_generators(
        2, {QVec{Rat(1, 2), Rat(0)}, qv({1, 0})}, {});
    CHECK(!is_unimodular_cell(half, 1));
    CHECK(is_unimodular_cell(half, 2));

    // triangle of normalized volume 2
    Polyhedron fat = Polyhedron::from_generators(2, {qv({0, 0}), qv({1, 0}), qv({0, 2})}, {});
    CHECK(!is_unimodular_cell(fat, 1));
    Polyhedron slim = Polyhedron::from_generators(2, {qv({0, 0}), qv({1, 0}), qv({0, 1})}, {});
    CHECK(is_unimodular_cell(slim, 1));

    // points: integrality of the vertex is all that matters
    CHECK(is_unimodular_cell(Polyhedron::point(qv({3, -2})), 1));
    CHECK(!is_unimodular_cell(Polyhedron::point(QVec{Rat(1, 2), Rat(0)}), 1));
}

TEST_CASE("unimodular cells with recession directions") {
    Fan diag = Fan::from_rays_and_cones(2, {zv({1, 1})}, {{0}});
    Polyhedron p = Polyhedron::from_generators(2, {qv({0, 0}), qv({1, 0})}, {qv({1, 1})});
    CHECK(is_unimodular_cell(p, 1, diag));           // rows (1,0),(1,1): det 1
    CHECK(!is_unimodular_cell(p, 1, quad_fan()));    // recession cone not in the fan
    CHECK(!is_unimodular_cell(p, 1));                // compact overload rejects rays

    Polyhedron bad = Polyhedron::from_generators(2, {qv({0, 0}), qv({2, 0})}, {qv({1, 1})});
    CHECK(!is_unimodular_cell(bad, 1, diag));        // rows (2,0),(1,1): index 2

    Fan q = quad_fan();
    Polyhedron ray = Polyhedron::from_generators(2, {qv({5, 0})}, {qv({1, 0})});
    CHECK(is_unimodular_cell(ray, 1, q));
    Polyhedron strip = Polyhedron::from_generators(2, {qv({0, 0}), qv({0, 1})}, {qv({1, 0})});
    CHECK(is_unimodular_cell(strip, 1, q));
}

TEST_CASE("unimodular certificate is invariant under lattice automorphisms") {
    QMat m(2, 2);  // shear: det 1
    m(0, 0) = 1; m(0, 1) = 1;
    m(1, 0) = 0; m(1, 1) = 1;
    std::vector<Polyhedron> cells = {
        Polyhedron::from_generators(2, {qv({0, 0}), qv({1, 0}), qv({0, 1})}, {}),
        Polyhedron::from_generators(2, {qv({0, 0}), qv({1, 0}), qv({0, 2})}, {}),
        Polyhedron::from_generators(2, {qv({0, 0}), qv({2, 0})}, {}),
        Polyhedron::from_generators(2, {QVec{Rat(1, 2), Rat(0)}, qv({1, 0})}, {}),
    };
    for (const auto& c : cells)
        for (long k : {1L, 2L})
            CHECK(is_unimodular_cell(c, k) == is_unimodular_cell(c.linear_image(m), k));
}

TEST_CASE("unimodularize_compact splits and certifies") {
    // the length-2 segment splits at its midpoint with k = 1
    Polyhedron twice = Polyhedron::from_generators(2, {qv({0, 0}), qv({2, 0})}, {});
    auto res = unimodularize_compact(face_lattice(twice));
    CHECK(res.k == 1);
    CHECK(max_cell_count(res.complex) == 2);
    for (std::size_t i = 0; i < res.complex.size(); ++i)
        if (res.complex.is_maximal(i))
            CHECK(is_unimodular_cell(res.complex.cell(i), res.k));

    // the unit simplex is already unimodular
    Polyhedron slim = Polyhedron::from_generators(2, {qv({0, 0}), qv({1, 0}), qv({0, 1})}, {});
    auto res2 = unimodularize_compact(face_lattice(slim));
    CHECK(res2.k == 1);
    CHECK(res2.complex.size() == 7);  // triangle, 3 edges, 3 vertices

    // normalized-volume-2 triangle splits into two unimodular triangles
    Polyhedron fat = Polyhedron::from_generators(2, {qv({0, 0}), qv({1, 0}), qv({0, 2})}, {});
    auto res3 = unimodularize_compact(face_lattice(fat));
    CHECK(max_cell_count(res3.complex) >= 2);
    for (std::size_t i = 0; i < res3.complex.size(); ++i)
        if (res3.complex.is_maximal(i))
            CHECK(is_unimodular_cell(res3.complex.cell(i), res3.k));

    // a square triangulates consistently
    Polyhedron sq = Polyhedron::from_generators(
        2, {qv({0, 0}), qv({1, 0}), qv({0, 1}), qv({1, 1})}, {});
    auto res4 = unimodularize_compact(face_lattice(sq));
    CHECK(res4.k == 1);
    CHECK(max_cell_count(res4.complex) == 2);

    // non-compact input is rejected
    Polyhedron ray = Polyhedron::from_generators(2, {qv({0, 0})}, {qv({1, 0})});
    CHECK_THROWS(unimodularize_compact(face_lattice(ray)));
}

TEST_CASE("extend_structure on the real line inside the projective line") {
    Fan f = p1_fan();
    AmbientFan amb = AmbientFan::make(f);
    std::vector<Polyhedron> halves = {
        Polyhedron::from_generators(1, {qv({0})}, {qv({1})}),
        Polyhedron::from_generators(1, {qv({0})}, {qv({-1})})};
    WeightedComplex x = WeightedComplex::build(amb, halves, {Int(1), Int(1)});

    DualStratification strat = DualStratification::build(f, Rat(1));
    PolyComplex core = PolyComplex::from_cells(
        1, {Polyhedron::from_generators(1, {qv({-1}), qv({0})}, {}),
            Polyhedron::from_generators(1, {qv({0}), qv({1})}, {})});

    PolyComplex lambda = extend_structure(x, strat, core, 1);
    // cells: [-1,0], [0,1], [1,inf), (-inf,-1] and the three finite points
    CHECK(lambda.size() == 7);
    CHECK(max_cell_count(lambda) == 4);

    StructureReport rep = certify_structure(x, lambda, 1, f);
    CHECK(rep.support_ok);
    CHECK(rep.unimodular_ok);
    CHECK(rep.finer_ok);
    CHECK(rep.all_ok());
}

TEST_CASE("extend_structure on the tropical line") {
    Fan f = p2_fan();
    AmbientFan amb = AmbientFan::make(f);
    std::vector<Polyhedron> rays = {
        Polyhedron::from_generators(2, {qv({0, 0})}, {qv({1, 0})}),
        Polyhedron::from_generators(2, {qv({0, 0})}, {qv({0, 1})}),
        Polyhedron::from_generators(2, {qv({0, 0})}, {qv({-1, -1})})};
    WeightedComplex x = WeightedComplex::build(amb, rays, {Int(1), Int(1), Int(1)});

    auto [strat, chk] = fit_stratification(f, rays, Rat(1));
    REQUIRE(chk.ok);

    // core: the part of the line inside the dual polytope, unimodularized
    Rat r = strat.radius();
    std::vector<Polyhedron> segs;
    for (const auto& ray : rays) {
        QVec tip = ray.rays()[0];
        for (auto& c : tip) c *= r;
        segs.push_back(Polyhedron::from_generators(2, {qv({0, 0}), tip}, {}));
    }
    auto core = unimodularize_compact(PolyComplex::from_cells(2, segs));
    PolyComplex lambda = extend_structure(x, strat, core.complex, core.k);

    StructureReport rep = certify_structure(x, lambda, core.k, f);
    CHECK(rep.all_ok());

    // every unbounded cell of the structure is a translated fan ray
    for (std::size_t i = 0; i < lambda.size(); ++i)
        if (!lambda.cell(i).rays().empty()) CHECK(lambda.cell(i).vertices().size() == 1);

    // rejected when the core is not unimodular for the claimed k
    std::vector<Polyhedron> coarse = {
        Polyhedron::from_generators(2, {qv({0, 0}), qv({2, 0})}, {}),
        Polyhedron::from_generators(2, {qv({0, 0}), qv({0, 2})}, {}),
        Polyhedron::from_generators(2, {qv({0, 0}), qv({-2, -2})}, {})};
    Fan q2 = p2_fan();
    DualStratification s2 = DualStratification::build(q2, Rat(2));
    CHECK_THROWS(extend_structure(x, s2, PolyComplex::from_cells(2, coarse), 1));
}

TEST_CASE("certify_structure failure modes") {
    Fan q = quad_fan();
    AmbientFan amb = AmbientFan::make(q);

    // lattice-index-2 cell: unimodularity fails with the cell listed
    Polyhedron twice = Polyhedron::from_generators(2, {qv({0, 0}), qv({2, 0})}, {});
    WeightedComplex xseg = WeightedComplex::build(amb, {twice}, {Int(1)}, false);
    StructureReport r1 = certify_structure(xseg, face_lattice(twice), 1, q);
    CHECK(r1.support_ok);
    CHECK(!r1.unimodular_ok);
    CHECK(r1.unimodular_failures.size() == 1);
    CHECK(r1.finer_ok);

    // cell crossing a wall of the fan: finer-than fails
    Polyhedron across = Polyhedron::from_generators(2, {qv({-1, 0}), qv({1, 0})}, {});
    WeightedComplex xacr = WeightedComplex::build(amb, {across}, {Int(1)}, false);
    StructureReport r2 = certify_structure(xacr, face_lattice(across), 1, q);
    CHECK(!r2.finer_ok);
    CHECK(r2.finer_failures.size() == 1);

    // structure covering only half the complex: support fails both ways round
    Polyhedron rightseg = Polyhedron::from_generators(2, {qv({0, 0}), qv({1, 0})}, {});
    StructureReport r3 = certify_structure(xacr, face_lattice(rightseg), 1, q);
    CHECK(!r3.support_ok);
}

TEST_CASE("balancing verdict survives subdivision of the tropical line") {
    Fan f = p2_fan();
    AmbientFan amb = AmbientFan::make(f);
    std::vector<Polyhedron> cells = {
        Polyhedron::from_generators(2, {qv({0, 0}), qv({1, 0})}, {}),
        Polyhedron::from_generators(2, {qv({1, 0})}, {qv({1, 0})}),
        Polyhedron::from_generators(2, {qv({0, 0}), qv({0, 1})}, {}),
        Polyhedron::from_generators(2, {qv({0, 1})}, {qv({0, 1})}),
        Polyhedron::from_generators(2, {qv({0, 0}), qv({-1, -1})}, {}),
        Polyhedron::from_generators(2, {qv({-1, -1})}, {qv({-1, -1})})};
    WeightedComplex x = WeightedComplex::build(
        amb, cells, std::vector<Int>(6, Int(1)));
    auto [ok, wit] = x.check_balancing();
    CHECK(ok);
    CHECK(wit.empty());
}
