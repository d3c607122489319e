// Batch front-end: parses JSON descriptions of weighted polyhedral
// complexes in tropical toric varieties and runs the library pipelines.
//
// Exit codes: 0 all checks passed; 2 input error (schema, indices,
// unsatisfiable preconditions); 3 invariant failure on valid input
// (unbalanced complex, failed certification, abutment mismatch);
// 4 internal assertion.
#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "tropicoh/apresolution.hpp"
#include "tropicoh/cohomology.hpp"
#include "tropicoh/monodromy.hpp"
#include "tropicoh/reduction.hpp"
#include "tropicoh/unimod.hpp"

using json = nlohmann::ordered_json;
using namespace tropicoh;

namespace {

struct InputError : std::runtime_error {
    InputError(const std::string& path, const std::string& msg)
        : std::runtime_error(path + ": " + msg) {}
};

struct InvariantFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

Rat parse_rat(const json& v, const std::string& path) {
    if (v.is_number_integer()) return Rat(static_cast<long>(v.get<long long>()));
    if (!v.is_string())
        throw InputError(path, "expected an integer or a \"num/den\" string");
    std::string s = v.get<std::string>();
    try {
        mpq_class q(s);
        q.canonicalize();
        if (q.get_den() == 0) throw std::invalid_argument("zero denominator");
        return q;
    } catch (const std::exception&) {
        throw InputError(path, "not a valid rational: \"" + s + "\"");
    }
}

QVec parse_qvec(const json& v, std::size_t n, const std::string& path) {
    if (!v.is_array() || v.size() != n)
        throw InputError(path, "expected a tuple of length " + std::to_string(n));
    QVec out;
    for (std::size_t i = 0; i < n; ++i)
        out.push_back(parse_rat(v[i], path + "[" + std::to_string(i) + "]"));
    return out;
}

ZVec parse_zvec(const json& v, std::size_t n, const std::string& path) {
    if (!v.is_array() || v.size() != n)
        throw InputError(path, "expected an integer tuple of length " + std::to_string(n));
    ZVec out;
    for (std::size_t i = 0; i < n; ++i) {
        if (!v[i].is_number_integer())
            throw InputError(path + "[" + std::to_string(i) + "]", "expected an integer");
        out.emplace_back(static_cast<long>(v[i].get<long long>()));
    }
    return out;
}

struct Document {
    std::size_t n = 0;
    Fan fan;
    std::vector<Polyhedron> cells;
    std::vector<Int> weights;
    std::vector<std::size_t> removed_rays;  // optional, for weight-ss
    bool has_structure = false;
    long k = 1;
    std::vector<Polyhedron> structure_cells;
    bool declared_smooth = false;
};

Document parse_document(const json& doc) {
    Document d;
    if (!doc.is_object()) throw InputError("$", "expected a JSON object");
    if (!doc.contains("lattice_rank") || !doc["lattice_rank"].is_number_integer() ||
        doc["lattice_rank"].get<long long>() <= 0)
        throw InputError("$.lattice_rank", "expected a positive integer");
    d.n = doc["lattice_rank"].get<std::size_t>();

    if (!doc.contains("fan") || !doc["fan"].is_object())
        throw InputError("$.fan", "expected an object with \"rays\" and \"cones\"");
    const json& jf = doc["fan"];
    if (!jf.contains("rays") || !jf["rays"].is_array())
        throw InputError("$.fan.rays", "expected an array of integer tuples");
    std::vector<ZVec> rays;
    for (std::size_t i = 0; i < jf["rays"].size(); ++i)
        rays.push_back(parse_zvec(jf["rays"][i], d.n, "$.fan.rays[" + std::to_string(i) + "]"));
    if (!jf.contains("cones") || !jf["cones"].is_array())
        throw InputError("$.fan.cones", "expected an array of ray-index lists");
    std::vector<std::vector<std::size_t>> cones;
    for (std::size_t i = 0; i < jf["cones"].size(); ++i) {
        const json& jc = jf["cones"][i];
        std::string path = "$.fan.cones[" + std::to_string(i) + "]";
        if (!jc.is_array()) throw InputError(path, "expected a list of ray indices");
        std::vector<std::size_t> c;
        for (std::size_t t = 0; t < jc.size(); ++t) {
            if (!jc[t].is_number_integer() || jc[t].get<long long>() < 0 ||
                jc[t].get<std::size_t>() >= rays.size())
                throw InputError(path + "[" + std::to_string(t) + "]", "ray index out of range");
            c.push_back(jc[t].get<std::size_t>());
        }
        cones.push_back(c);
    }
    try {
        d.fan = Fan::from_rays_and_cones(d.n, rays, cones);
    } catch (const std::exception& e) {
        throw InputError("$.fan", e.what());
    }

    if (!doc.contains("cells") || !doc["cells"].is_array() || doc["cells"].empty())
        throw InputError("$.cells", "expected a non-empty array of cells");
    for (std::size_t i = 0; i < doc["cells"].size(); ++i) {
        const json& jc = doc["cells"][i];
        std::string path = "$.cells[" + std::to_string(i) + "]";
        if (!jc.is_object()) throw InputError(path, "expected an object");
        if (jc.contains("sedentarity") &&
            (!jc["sedentarity"].is_number_integer() || jc["sedentarity"].get<long long>() != 0))
            throw InputError(path + ".sedentarity",
                             "only sedentarity 0 cells may be listed; the boundary is "
                             "generated by compactification");
        std::vector<QVec> verts;
        if (jc.contains("vertices"))
            for (std::size_t t = 0; t < jc["vertices"].size(); ++t)
                verts.push_back(parse_qvec(jc["vertices"][t], d.n,
                                           path + ".vertices[" + std::to_string(t) + "]"));
        std::vector<QVec> crays;
        if (jc.contains("rays"))
            for (std::size_t t = 0; t < jc["rays"].size(); ++t) {
                ZVec z = parse_zvec(jc["rays"][t], d.n, path + ".rays[" + std::to_string(t) + "]");
                QVec q;
                for (const auto& c : z) q.emplace_back(c);
                crays.push_back(q);
            }
        if (verts.empty()) throw InputError(path + ".vertices", "a cell needs at least one vertex");
        try {
            d.cells.push_back(Polyhedron::from_generators(d.n, verts, crays));
        } catch (const std::exception& e) {
            throw InputError(path, e.what());
        }
    }

    if (!doc.contains("weights")) throw InputError("$.weights", "missing");
    const json& jw = doc["weights"];
    d.weights.assign(d.cells.size(), Int(1));
    auto set_weight = [&](std::size_t idx, const json& v, const std::string& path) {
        if (idx >= d.cells.size()) throw InputError(path, "cell index out of range");
        if (!v.is_number_integer() || v.get<long long>() <= 0)
            throw InputError(path, "weights must be positive integers");
        d.weights[idx] = Int(static_cast<long>(v.get<long long>()));
    };
    if (jw.is_array()) {
        if (jw.size() != d.cells.size())
            throw InputError("$.weights", "expected one weight per cell");
        for (std::size_t i = 0; i < jw.size(); ++i)
            set_weight(i, jw[i], "$.weights[" + std::to_string(i) + "]");
    } else if (jw.is_object()) {
        for (auto it = jw.begin(); it != jw.end(); ++it) {
            std::size_t idx = 0;
            try {
                idx = std::stoul(it.key());
            } catch (const std::exception&) {
                throw InputError("$.weights." + it.key(), "keys must be cell indices");
            }
            set_weight(idx, it.value(), "$.weights." + it.key());
        }
    } else {
        throw InputError("$.weights", "expected an array or an index -> weight object");
    }

    if (doc.contains("removed_rays")) {
        for (std::size_t i = 0; i < doc["removed_rays"].size(); ++i) {
            const json& v = doc["removed_rays"][i];
            std::string path = "$.removed_rays[" + std::to_string(i) + "]";
            if (!v.is_number_integer() || v.get<long long>() < 0 ||
                v.get<std::size_t>() >= d.fan.ray_generators().size())
                throw InputError(path, "ray index out of range");
            d.removed_rays.push_back(v.get<std::size_t>());
        }
    }
    if (doc.contains("structure")) {
        const json& js = doc["structure"];
        if (!js.is_object()) throw InputError("$.structure", "expected an object");
        d.has_structure = true;
        if (js.contains("k")) {
            if (!js["k"].is_number_integer() || js["k"].get<long long>() <= 0)
                throw InputError("$.structure.k", "expected a positive integer");
            d.k = js["k"].get<long>();
        }
        if (!js.contains("cells") || !js["cells"].is_array())
            throw InputError("$.structure.cells", "expected an array of cells");
        for (std::size_t i = 0; i < js["cells"].size(); ++i) {
            const json& jc = js["cells"][i];
            std::string path = "$.structure.cells[" + std::to_string(i) + "]";
            std::vector<QVec> verts;
            if (jc.contains("vertices"))
                for (std::size_t t = 0; t < jc["vertices"].size(); ++t)
                    verts.push_back(parse_qvec(jc["vertices"][t], d.n,
                                               path + ".vertices[" + std::to_string(t) + "]"));
            std::vector<QVec> crays;
            if (jc.contains("rays"))
                for (std::size_t t = 0; t < jc["rays"].size(); ++t) {
                    ZVec z =
                        parse_zvec(jc["rays"][t], d.n, path + ".rays[" + std::to_string(t) + "]");
                    QVec q;
                    for (const auto& c : z) q.emplace_back(c);
                    crays.push_back(q);
                }
            try {
                d.structure_cells.push_back(Polyhedron::from_generators(d.n, verts, crays));
            } catch (const std::exception& e) {
                throw InputError(path, e.what());
            }
        }
    }
    if (doc.contains("smooth")) d.declared_smooth = doc["smooth"].is_boolean() && doc["smooth"].get<bool>();
    return d;
}

WeightedComplex build_complex(const Document& d) {
    AmbientFan amb = AmbientFan::make(d.fan);
    try {
        return WeightedComplex::build(amb, d.cells, d.weights);
    } catch (const std::exception& e) {
        throw InputError("$.cells", e.what());
    }
}

std::string rat_str(const Rat& r) {
    if (r.get_den() == 1) return r.get_num().get_str();
    return r.get_num().get_str() + "/" + r.get_den().get_str();
}

json qvec_json(const QVec& v) {
    json a = json::array();
    for (const auto& c : v) a.push_back(rat_str(c));
    return a;
}

json zvec_json(const ZVec& v) {
    json a = json::array();
    for (const auto& c : v) a.push_back(c.get_si());
    return a;
}

json cell_json(const Polyhedron& p) {
    json c;
    c["sedentarity"] = 0;
    c["vertices"] = json::array();
    for (const auto& v : p.vertices()) c["vertices"].push_back(qvec_json(v));
    c["rays"] = json::array();
    for (const auto& r : p.rays()) c["rays"].push_back(zvec_json(primitive_of_rat(r)));
    return c;
}

/// An InputDocument-shaped description of a weighted complex, suitable for
/// re-parsing (round-trip of `reduce`).
json complex_json(const WeightedComplex& x) {
    json doc;
    const Fan& fan = x.ambient().fan;
    doc["lattice_rank"] = fan.ambient_dim();
    json jf;
    jf["rays"] = json::array();
    for (const auto& r : fan.ray_generators()) jf["rays"].push_back(zvec_json(r));
    jf["cones"] = json::array();
    for (std::size_t c = 0; c < fan.size(); ++c) {
        json jc = json::array();
        for (std::size_t t : fan.rays_of(c)) jc.push_back(t);
        jf["cones"].push_back(jc);
    }
    doc["fan"] = jf;
    doc["cells"] = json::array();
    json w = json::array();
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!x.is_maximal(i) || x.cell(i).sigma != 0) continue;
        doc["cells"].push_back(cell_json(x.cell(i).finite_part));
        w.push_back(static_cast<long>(x.weight(i).get_si()));
    }
    doc["weights"] = w;
    return doc;
}

json pages_json(const std::vector<std::map<std::pair<int, int>, std::size_t>>& pages) {
    json out = json::array();
    for (const auto& page : pages) {
        json p = json::array();
        for (const auto& [key, dim] : page) {
            json e;
            e["p"] = key.first;
            e["q"] = key.second;
            e["dim"] = dim;
            p.push_back(e);
        }
        out.push_back(p);
    }
    return out;
}

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

void print_table(const json& rep) {
    std::cout << "command: " << rep["command"].get<std::string>() << "\n";
    if (rep.contains("hodge")) {
        const json& h = rep["hodge"];
        std::cout << "hodge table (rows p, cols q):\n";
        for (const auto& row : h) {
            for (const auto& v : row) std::cout << "  " << v.get<std::size_t>();
            std::cout << "\n";
        }
    }
    if (rep.contains("pages")) {
        const json& pages = rep["pages"];
        for (std::size_t i = 0; i < pages.size(); ++i) {
            std::cout << "page E_" << (i + 1) << ":";
            for (const auto& e : pages[i])
                std::cout << " (" << e["p"].get<int>() << "," << e["q"].get<int>()
                          << ")=" << e["dim"].get<std::size_t>();
            std::cout << "\n";
        }
    }
    if (rep.contains("abutment")) {
        std::cout << "abutment h^{r,s}:";
        for (const auto& v : rep["abutment"]) std::cout << " " << v.get<std::size_t>();
        std::cout << "\nstable-page totals:";
        for (const auto& v : rep["einf_totals"]) std::cout << " " << v.get<std::size_t>();
        std::cout << "\nabutment_ok: " << (rep["abutment_ok"].get<bool>() ? "yes" : "no") << "\n";
    }
    if (rep.contains("ok")) std::cout << "ok: " << (rep["ok"].get<bool>() ? "yes" : "no") << "\n";
    if (rep.contains("witnesses"))
        for (const auto& w : rep["witnesses"])
            std::cout << "witness: " << w.get<std::string>() << "\n";
    if (rep.contains("eigenwave_rank_e2"))
        std::cout << "eigenwave rank on the second page: "
                  << rep["eigenwave_rank_e2"].get<std::size_t>() << "\n";
    if (rep.contains("strata")) std::cout << "strata: " << rep["strata"].size() << "\n";
    if (rep.contains("k")) std::cout << "k: " << rep["k"].get<long>() << "\n";
}

json ss_json(MonodromySS& ss, const WeightedComplex& base) {
    abutment_check(ss, base);
    json rep;
    rep["r"] = ss.r;
    rep["pages"] = pages_json(ss.pages);
    rep["stable_page"] = ss.stable_page;
    rep["d1_squared_zero"] = ss.d1_squared_zero;
    json ab = json::array(), tot = json::array();
    for (std::size_t v : ss.abutment) ab.push_back(v);
    for (std::size_t v : ss.einf_totals) tot.push_back(v);
    rep["abutment"] = ab;
    rep["einf_totals"] = tot;
    rep["abutment_ok"] = ss.abutment_ok;
    return rep;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"tropical cohomology batch tool"};
    std::string command, file;
    long rlevel = 1;
    long pmax = -1, qmax = -1;
    long kflag = 0;
    long radius = 0;
    bool json_only = false;
    long seed = 0;
    app.add_option("command", command, "check | hodge | weight-ss | reduce | ss | eigenwave | unimodularize | certify")
        ->required();
    app.add_option("file", file, "input JSON document")->required();
    app.add_option("--r", rlevel, "cohomology / spectral-sequence level r");
    app.add_option("--pmax", pmax, "largest p in hodge tables");
    app.add_option("--qmax", qmax, "largest q in hodge tables");
    app.add_option("--k", kflag, "override the structure denominator k");
    app.add_option("--radius", radius, "reserved; accepted for compatibility");
    app.add_flag("--json-only", json_only, "suppress the human-readable table");
    app.add_option("--seed", seed, "reserved; all pipelines are deterministic");
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }
    (void)radius;
    (void)seed;

    json rep;
    rep["command"] = command;
    int status = 0;
    try {
        std::ifstream in(file);
        if (!in) throw InputError("$", "cannot open file: " + file);
        std::stringstream buf;
        buf << in.rdbuf();
        std::string text = buf.str();
        std::ostringstream dig;
        dig << std::hex << fnv1a(text);
        rep["input_digest"] = dig.str();
        json doc;
        try {
            doc = json::parse(text);
        } catch (const json::parse_error& e) {
            throw InputError("$", std::string("JSON parse error: ") + e.what());
        }
        Document d = parse_document(doc);

        if (command == "check") {
            WeightedComplex x = build_complex(d);
            auto bal = x.check_balancing();
            auto reg = x.check_regular_at_infinity();
            json witnesses = json::array();
            for (const auto& w : bal.second) witnesses.push_back("balancing: " + w);
            for (const auto& w : reg.second) witnesses.push_back("regularity: " + w);
            bool ok = bal.first && reg.first;
            rep["balanced"] = bal.first;
            rep["regular_at_infinity"] = reg.first;
            if (d.has_structure) {
                PolyComplex lambda = PolyComplex::from_cells(d.n, d.structure_cells);
                long k = kflag > 0 ? kflag : d.k;
                StructureReport sr = certify_structure(x, lambda, k, d.fan);
                rep["structure_ok"] = sr.all_ok();
                for (const auto& w : sr.support_failures) witnesses.push_back("support: " + w);
                for (const auto& w : sr.unimodular_failures)
                    witnesses.push_back("unimodular: " + w);
                for (const auto& w : sr.finer_failures) witnesses.push_back("finer: " + w);
                ok = ok && sr.all_ok();
            }
            rep["ok"] = ok;
            rep["witnesses"] = witnesses;
            if (!ok) status = 3;
        } else if (command == "hodge") {
            WeightedComplex x = build_complex(d);
            std::size_t dim = static_cast<std::size_t>(std::max(0, x.dim()));
            std::size_t pm = pmax >= 0 ? static_cast<std::size_t>(pmax) : dim;
            std::size_t qm = qmax >= 0 ? static_cast<std::size_t>(qmax) : dim;
            std::vector<std::vector<std::size_t>> h;
            try {
                h = hodge_table(x, pm, qm);
            } catch (const std::invalid_argument& e) {
                throw InputError("$.cells", e.what());
            }
            json jh = json::array();
            for (const auto& row : h) {
                json jr = json::array();
                for (std::size_t v : row) jr.push_back(v);
                jh.push_back(jr);
            }
            rep["hodge"] = jh;
        } else if (command == "weight-ss") {
            if (d.removed_rays.empty())
                throw InputError("$.removed_rays",
                                 "weight-ss needs the rays whose strata are removed");
            WeightedComplex x = build_complex(d);
            WeightSS ss = weight_ss_open(x, d.removed_rays, static_cast<std::size_t>(rlevel));
            rep["r"] = ss.r;
            rep["pages"] = pages_json(ss.pages);
            rep["stable_page"] = ss.stable_page;
            rep["d1_squared_zero"] = ss.d1_squared_zero;
            json ab = json::array(), tot = json::array();
            for (std::size_t v : ss.abutment) ab.push_back(v);
            for (std::size_t v : ss.einf_totals) tot.push_back(v);
            rep["abutment"] = ab;
            rep["einf_totals"] = tot;
            rep["abutment_ok"] = ss.abutment_ok;
            rep["ok"] = ss.abutment_ok && ss.d1_squared_zero;
            if (!rep["ok"].get<bool>()) status = 3;
        } else if (command == "reduce") {
            WeightedComplex x = build_complex(d);
            ConeData cd = fan_over(x);
            SemistableReduction red = semistable_reduction(cd);
            rep["strata"] = json::array();
            for (const ReductionStratum& st : red.strata) {
                json js = complex_json(st.xj);
                json jj = json::array();
                for (std::size_t v : st.J) jj.push_back(v);
                js["J"] = jj;
                rep["strata"].push_back(js);
            }
            json xi = json::array();
            for (std::size_t v : red.x_infinity) xi.push_back(v);
            rep["x_infinity"] = xi;
            rep["ok"] = true;
        } else if (command == "ss") {
            WeightedComplex x = build_complex(d);
            ConeData cd = fan_over(x);
            MonodromySS ss = monodromy_e1(cd, static_cast<std::size_t>(rlevel));
            monodromy_d1(ss);
            rep.update(ss_json(ss, x));
            auto [sok, switnesses] = smoothness_vanishing_check(ss);
            if (d.declared_smooth) {
                rep["smoothness_concentration"] = sok;
                json jw = json::array();
                for (const auto& w : switnesses) jw.push_back(w);
                rep["witnesses"] = jw;
            }
            bool ok = ss.abutment_ok && ss.d1_squared_zero && (!d.declared_smooth || sok);
            rep["ok"] = ok;
            if (!ok) status = 3;
        } else if (command == "eigenwave") {
            if (rlevel < 1) throw InputError("$", "--r must be at least 1 for eigenwave");
            WeightedComplex x = build_complex(d);
            ConeData cd = fan_over(x);
            MonodromySS hi = monodromy_e1(cd, static_cast<std::size_t>(rlevel));
            MonodromySS lo = monodromy_e1(cd, static_cast<std::size_t>(rlevel - 1));
            EigenwaveMap ew = eigenwave(hi, lo);
            rep["r"] = ew.r;
            rep["structurally_zero"] = eigenwave_vanishes_structurally(hi);
            rep["eigenwave_rank_e2"] = ew.total_rank_e2;
            json blocks = json::array();
            for (const auto& [key, rk] : ew.rank_e2) {
                json b;
                b["p"] = key.first;
                b["q"] = key.second;
                b["rank"] = rk;
                blocks.push_back(b);
            }
            rep["blocks"] = blocks;
            rep["ok"] = true;
        } else if (command == "unimodularize") {
            PolyComplex pc = PolyComplex::from_cells(d.n, d.cells);
            UnimodularizeResult res;
            try {
                res = unimodularize_compact(pc);
            } catch (const std::invalid_argument& e) {
                throw InputError("$.cells", e.what());
            }
            rep["k"] = res.k;
            rep["cells"] = json::array();
            for (std::size_t i = 0; i < res.complex.size(); ++i)
                if (res.complex.is_maximal(i))
                    rep["cells"].push_back(cell_json(res.complex.cell(i)));
            rep["ok"] = true;
        } else if (command == "certify") {
            if (!d.has_structure)
                throw InputError("$.structure", "certify needs a declared structure");
            WeightedComplex x = build_complex(d);
            PolyComplex lambda = PolyComplex::from_cells(d.n, d.structure_cells);
            long k = kflag > 0 ? kflag : d.k;
            StructureReport sr = certify_structure(x, lambda, k, d.fan);
            rep["support_ok"] = sr.support_ok;
            rep["unimodular_ok"] = sr.unimodular_ok;
            rep["finer_ok"] = sr.finer_ok;
            json witnesses = json::array();
            for (const auto& w : sr.support_failures) witnesses.push_back("support: " + w);
            for (const auto& w : sr.unimodular_failures) witnesses.push_back("unimodular: " + w);
            for (const auto& w : sr.finer_failures) witnesses.push_back("finer: " + w);
            rep["witnesses"] = witnesses;
            rep["ok"] = sr.all_ok();
            if (!sr.all_ok()) status = 3;
        } else {
            std::cerr << "unknown command: " << command << "\n";
            return 2;
        }
    } catch (const InputError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const InvariantFailure& e) {
        std::cerr << "invariant failure: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 4;
    }
    std::cout << rep.dump(2) << "\n";
    if (!json_only) print_table(rep);
    return status;
}
