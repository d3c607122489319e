// Acceptance gate: one pass/fail line per criterion, exit nonzero on any
// failure.  Every check recomputes its oracle from scratch; nothing is
// shared with the unit suite beyond the fixture definitions.
#include <algorithm>
#include <cstddef>
#include <iostream>
#include <string>
#include <vector>

#include "tropicoh/apresolution.hpp"
#include "tropicoh/cohomology.hpp"
#include "tropicoh/monodromy.hpp"
#include "tropicoh/reduction.hpp"
#include "tropicoh/stratification.hpp"
#include "tropicoh/unimod.hpp"

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
static Fan p2_fan() {
    return Fan::from_rays_and_cones(2, {zv({1, 0}), zv({0, 1}), zv({-1, -1})},
                                    {{0, 1}, {1, 2}, {2, 0}});
}

static WeightedComplex trop_p1() {
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

static WeightedComplex line_in_p2() {
    AmbientFan amb = AmbientFan::make(p2_fan());
    std::vector<Polyhedron> rays = {Polyhedron::cone_from_rays(2, {qv({1, 0})}),
                                    Polyhedron::cone_from_rays(2, {qv({0, 1})}),
                                    Polyhedron::cone_from_rays(2, {qv({-1, -1})})};
    return WeightedComplex::build(amb, rays, {1, 1, 1});
}

static WeightedComplex whole_p2() {
    AmbientFan amb = AmbientFan::make(p2_fan());
    std::vector<Polyhedron> cones;
    std::vector<Int> w;
    for (std::size_t i = 0; i < amb.fan.size(); ++i)
        if (amb.fan.dim_of(i) == 2) {
            cones.push_back(amb.fan.cell(i));
            w.push_back(1);
        }
    return WeightedComplex::build(amb, cones, w);
}

static WeightedComplex plane_in_r3() {
    std::vector<ZVec> rays = {zv({1, 0, 0}), zv({0, 1, 0}), zv({0, 0, 1}), zv({-1, -1, -1})};
    std::vector<std::vector<std::size_t>> cones = {{0, 1}, {0, 2}, {0, 3},
                                                   {1, 2}, {1, 3}, {2, 3}};
    Fan f = Fan::from_rays_and_cones(3, rays, cones);
    AmbientFan amb = AmbientFan::make(f);
    std::vector<Polyhedron> top;
    std::vector<Int> w;
    for (std::size_t i = 0; i < f.size(); ++i)
        if (f.dim_of(i) == 2) {
            top.push_back(f.cell(i));
            w.push_back(1);
        }
    return WeightedComplex::build(amb, top, w);
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

static int failures = 0;
static void report(int n, const std::string& what, bool ok, const std::string& note = "") {
    std::cout << (ok ? "PASS" : "FAIL") << " criterion " << n << ": " << what;
    if (!ok && !note.empty()) std::cout << " [" << note << "]";
    std::cout << "\n";
    if (!ok) ++failures;
}

template <typename F>
static void criterion(int n, const std::string& what, F body) {
    bool ok = false;
    std::string note;
    try {
        ok = body();
    } catch (const std::exception& e) {
        note = e.what();
    }
    report(n, what, ok, note);
}

int main() {
    criterion(1, "relative cohomology of the half-compactified line", [] {
        Fan half = Fan::from_rays_and_cones(1, {zv({1})}, {{0}});
        AmbientFan amb = AmbientFan::make(half);
        Polyhedron left = Polyhedron::from_generators(1, {qv({0})}, {qv({-1})});
        Polyhedron right = Polyhedron::from_generators(1, {qv({0})}, {qv({1})});
        WeightedComplex x = WeightedComplex::build(amb, {left, right}, {1, 1});
        std::size_t inf = x.size();
        for (std::size_t i = 0; i < x.size(); ++i)
            if (x.dim_sed(i) > 0) inf = i;
        if (inf >= x.size()) return false;
        return relative_hodge(x, {inf}, 1, 1) == 1 && relative_hodge(x, {inf}, 1, 0) == 0 &&
               relative_hodge(x, {inf}, 0, 0) == 0 && relative_hodge(x, {inf}, 0, 1) == 0;
    });

    criterion(2, "resolution-complex dims equal cellular dims on five fixtures", [] {
        std::vector<WeightedComplex> fixtures;
        fixtures.push_back(line_in_p2());
        fixtures.push_back(trop_p1());
        fixtures.push_back(whole_p2());
        fixtures.push_back(product_complex(trop_p1(), trop_p1()));
        fixtures.push_back(plane_in_r3());
        for (const auto& x : fixtures) {
            std::size_t d = static_cast<std::size_t>(x.dim());
            auto h = hodge_table(x, d, d);
            for (std::size_t r = 0; r <= d; ++r) {
                auto ha = ap_hodge(x, r);
                for (std::size_t q = 0; q <= d; ++q)
                    if (ha[q] != h[r][q]) return false;
            }
        }
        return true;
    });

    criterion(3, "Kunneth convolution on three products", [] {
        std::vector<std::pair<WeightedComplex, WeightedComplex>> pairs;
        pairs.emplace_back(trop_p1(), trop_p1());
        pairs.emplace_back(trop_p1(), line_in_p2());
        pairs.emplace_back(p1_two_vertices(), trop_p1());
        for (const auto& [x, y] : pairs)
            if (!kunneth_check(x, y).ok) return false;
        return true;
    });

    criterion(4, "open-pair weight spectral sequence abutment on three fixtures", [] {
        {
            WeightSS ss = weight_ss_open(trop_p1(), {0}, 1);
            if (!ss.d1_squared_zero || !ss.abutment_ok) return false;
        }
        {
            WeightSS ss = weight_ss_open(trop_p1(), {0, 1}, 1);
            if (!ss.d1_squared_zero || !ss.abutment_ok) return false;
        }
        WeightedComplex sq = product_complex(trop_p1(), trop_p1());
        std::vector<std::size_t> first_factor;
        for (std::size_t i = 0; i < sq.ambient().fan.ray_generators().size(); ++i)
            if (sq.ambient().fan.ray_generators()[i][1] == 0) first_factor.push_back(i);
        if (first_factor.size() != 2) return false;
        for (std::size_t r = 0; r <= 2; ++r) {
            WeightSS ss = weight_ss_open(sq, first_factor, r);
            if (!ss.d1_squared_zero || !ss.abutment_ok) return false;
        }
        return true;
    });

    criterion(5, "semi-stable reduction sanity on every degeneration fixture", [] {
        std::vector<WeightedComplex> fixtures = {trop_p1(), p1_two_vertices(),
                                                 product_complex(trop_p1(), trop_p1()),
                                                 plane_cubic()};
        for (const auto& x : fixtures) {
            ConeData cd = fan_over(x);  // slice identity asserted inside
            SemistableReduction red = semistable_reduction(cd);
            for (const ReductionStratum& st : red.strata) {
                if (st.xj.dim() != x.dim() - static_cast<int>(st.J.size()) + 1) return false;
                if (!st.xj.check_balancing().first) return false;
                if (!st.xj.check_regular_at_infinity().first) return false;
            }
        }
        return true;
    });

    criterion(6, "monodromy-weight abutment on the four degeneration fixtures", [] {
        std::vector<WeightedComplex> fixtures = {trop_p1(), p1_two_vertices(),
                                                 product_complex(trop_p1(), trop_p1()),
                                                 plane_cubic()};
        for (const auto& x : fixtures) {
            ConeData cd = fan_over(x);
            for (std::size_t r = 0; r <= static_cast<std::size_t>(x.dim()); ++r) {
                MonodromySS ss = monodromy_e1(cd, r);
                if (!abutment_check(ss, x)) return false;
            }
        }
        return true;
    });

    criterion(7, "sign coherence: d1 squared zero and order-invariant pages", [] {
        std::vector<WeightedComplex> fixtures = {trop_p1(), p1_two_vertices(),
                                                 product_complex(trop_p1(), trop_p1()),
                                                 plane_cubic()};
        for (const auto& x : fixtures) {
            ConeData cd = fan_over(x);
            ConeData cd2 = cd;
            std::reverse(cd2.rays_I.begin(), cd2.rays_I.end());
            std::reverse(cd2.vertices.begin(), cd2.vertices.end());
            if (cd2.rays_I.size() > 2)
                std::swap(cd2.rays_I[0], cd2.rays_I[1]), std::swap(cd2.vertices[0], cd2.vertices[1]);
            for (std::size_t r = 0; r <= static_cast<std::size_t>(x.dim()); ++r) {
                MonodromySS a = monodromy_e1(cd, r);
                MonodromySS b = monodromy_e1(cd2, r);
                monodromy_d1(a);  // throws if d1^2 != 0 or pages disagree
                monodromy_d1(b);
                if (!a.d1_squared_zero || !b.d1_squared_zero) return false;
                if (a.e1 != b.e1 || a.e2 != b.e2 || a.einf != b.einf) return false;
            }
        }
        return true;
    });

    criterion(8, "eigenwave: commutes with d1; rank 1 on the cubic, 0 on lines", [] {
        {
            WeightedComplex cubic = plane_cubic();
            ConeData cd = fan_over(cubic);
            MonodromySS hi = monodromy_e1(cd, 1);
            MonodromySS lo = monodromy_e1(cd, 0);
            EigenwaveMap ew = eigenwave(hi, lo);  // commutation asserted inside
            if (ew.total_rank_e2 != 1) return false;
            if (!ew.rank_e2.count({-1, 2}) || ew.rank_e2.at({-1, 2}) != 1) return false;
        }
        for (const WeightedComplex& x : {trop_p1(), p1_two_vertices()}) {
            ConeData cd = fan_over(x);
            MonodromySS hi = monodromy_e1(cd, 1);
            MonodromySS lo = monodromy_e1(cd, 0);
            EigenwaveMap ew = eigenwave(hi, lo);
            if (ew.total_rank_e2 != 0) return false;
        }
        return true;
    });

    criterion(9, "smoothness concentration q = 2r; non-matroidal fixture flagged", [] {
        std::vector<WeightedComplex> smooth = {trop_p1(), p1_two_vertices(),
                                               product_complex(trop_p1(), trop_p1()),
                                               plane_cubic()};
        for (const auto& x : smooth) {
            ConeData cd = fan_over(x);
            for (std::size_t r = 0; r <= static_cast<std::size_t>(x.dim()); ++r) {
                MonodromySS ss = monodromy_e1(cd, r);
                if (!smoothness_vanishing_check(ss).first) return false;
            }
        }
        // the cone over a square-shaped circle is not locally matroidal;
        // its compactified apex star has h^{2,1} = 1
        std::vector<ZVec> rays = {zv({1, 0}),  zv({1, 1}),   zv({0, 1}),
                                  zv({-1, 0}), zv({-1, -1}), zv({0, -1})};
        std::vector<std::vector<std::size_t>> cones;
        for (std::size_t i = 0; i < 6; ++i) cones.push_back({i, (i + 1) % 6});
        AmbientFan amb = AmbientFan::make(Fan::from_rays_and_cones(2, rays, cones));
        auto seg = [&](std::vector<long> a, std::vector<long> b) {
            return Polyhedron::from_generators(2, {qv(a), qv(b)}, {});
        };
        WeightedComplex square = WeightedComplex::build(
            amb,
            {seg({0, 0}, {1, 0}), seg({1, 0}, {1, 1}), seg({1, 1}, {0, 1}), seg({0, 1}, {0, 0})},
            {1, 1, 1, 1});
        ConeData cd = fan_over(fan_over(square).total);
        MonodromySS ss = monodromy_e1(cd, 2);
        auto [ok, witnesses] = smoothness_vanishing_check(ss);
        return !ok && !witnesses.empty();
    });

    criterion(10, "structure extension certified; model stratification sets exact", [] {
        // real line in the projective line
        {
            Fan f = p1_fan();
            AmbientFan amb = AmbientFan::make(f);
            std::vector<Polyhedron> halves = {Polyhedron::from_generators(1, {qv({0})}, {qv({1})}),
                                              Polyhedron::from_generators(1, {qv({0})}, {qv({-1})})};
            WeightedComplex x = WeightedComplex::build(amb, halves, {1, 1});
            DualStratification strat = DualStratification::build(f, Rat(1));
            PolyComplex core = PolyComplex::from_cells(
                1, {Polyhedron::from_generators(1, {qv({-1}), qv({0})}, {}),
                    Polyhedron::from_generators(1, {qv({0}), qv({1})}, {})});
            PolyComplex lambda = extend_structure(x, strat, core, 1);
            if (!certify_structure(x, lambda, 1, f).all_ok()) return false;
        }
        // tropical line
        {
            Fan f = p2_fan();
            WeightedComplex x = line_in_p2();
            std::vector<Polyhedron> rays = {
                Polyhedron::from_generators(2, {qv({0, 0})}, {qv({1, 0})}),
                Polyhedron::from_generators(2, {qv({0, 0})}, {qv({0, 1})}),
                Polyhedron::from_generators(2, {qv({0, 0})}, {qv({-1, -1})})};
            auto [strat, chk] = fit_stratification(f, rays, Rat(1));
            if (!chk.ok) return false;
            Rat r = strat.radius();
            std::vector<Polyhedron> segs;
            for (const auto& ray : rays) {
                QVec tip = ray.rays()[0];
                for (auto& c : tip) c *= r;
                segs.push_back(Polyhedron::from_generators(2, {qv({0, 0}), tip}, {}));
            }
            auto core = unimodularize_compact(PolyComplex::from_cells(2, segs));
            PolyComplex lambda = extend_structure(x, strat, core.complex, core.k);
            if (!certify_structure(x, lambda, core.k, f).all_ok()) return false;
        }
        // two-vertex projective line
        {
            Fan f = p1_fan();
            WeightedComplex x = p1_two_vertices();
            std::vector<Polyhedron> cells = {
                Polyhedron::from_generators(1, {qv({0})}, {qv({-1})}),
                Polyhedron::from_generators(1, {qv({0}), qv({1})}, {}),
                Polyhedron::from_generators(1, {qv({1})}, {qv({1})})};
            auto [strat, chk] = fit_stratification(f, cells, Rat(1));
            if (!chk.ok) return false;
            PolyComplex core = PolyComplex::from_cells(
                1, {Polyhedron::from_generators(1, {qv({-1}), qv({0})}, {}),
                    Polyhedron::from_generators(1, {qv({0}), qv({1})}, {})});
            PolyComplex lambda = extend_structure(x, strat, core, 1);
            if (!certify_structure(x, lambda, 1, f).all_ok()) return false;
        }
        // model stratification sets in the positive quadrant, as exact polyhedra
        {
            Fan f = Fan::from_rays_and_cones(2,
                                             {zv({1, 0}), zv({0, 1}), zv({-1, 0}), zv({0, -1})},
                                             {{0, 1}, {1, 2}, {2, 3}, {3, 0}});
            DualStratification s = DualStratification::build(f, Rat(2));
            std::size_t sigma = f.which_cone(qv({1, 1}));
            std::size_t l1 = f.which_cone(qv({1, 0}));
            std::size_t l2 = f.which_cone(qv({0, 1}));
            if (s.q_cell(sigma) != Polyhedron::from_generators(2, {qv({2, 0}), qv({0, 2})}, {}))
                return false;
            if (s.barycenter(sigma) != qv({1, 1})) return false;
            for (int i = 0; i <= 8; ++i) {
                Rat x1 = Rat(i, 4);
                x1.canonicalize();
                QVec x = {x1, Rat(2) - x1};
                if (s.region(l1).contains(x) != (x1 > 1 && x1 <= 2)) return false;
                if (s.region(l2).contains(x) != (Rat(2) - x1 > 1 && Rat(2) - x1 <= 2)) return false;
                if (s.region(sigma).contains(x) != (x1 == 1)) return false;
            }
        }
        return true;
    });

    if (failures == 0)
        std::cout << "all 10 acceptance criteria passed\n";
    else
        std::cout << failures << " acceptance criteria failed\n";
    return failures == 0 ? 0 : 1;
}
