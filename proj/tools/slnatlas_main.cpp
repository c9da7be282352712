// Command-line front end: parse field/action/graph files, compute invariants,
// classify actions, and decide equivalence.
//
// Exit codes: 0 success (or "equivalent"), 1 not equivalent, 2 invalid input
// or computation failure, 3 ambiguous match (inside the tolerance buffer).
// Stdout carries JSON (plus CSV samples on request); stderr carries
// diagnostics only.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <variant>

#include <CLI11.hpp>
#include <json.hpp>

#include "slnatlas/actions.hpp"
#include "slnatlas/errors.hpp"
#include "slnatlas/invariants.hpp"
#include "slnatlas/lattice.hpp"
#include "slnatlas/serialize.hpp"

namespace {

using nlohmann::json;
using namespace slnatlas;

constexpr int kCsvSamples = 1024;

double env_tol_match() {
    if (const char* s = std::getenv("SLN_ATLAS_TOL_MATCH")) {
        char* end = nullptr;
        const double v = std::strtod(s, &end);
        if (end != s && *end == '\0' && v > 0.0) return v;
        std::cerr << "ignoring unusable SLN_ATLAS_TOL_MATCH value\n";
    }
    return 1e-6;
}

void emit(const json& j) { std::cout << canonical_json(j) << "\n"; }

json circle_inv_json(const HitchinInvariants& inv) {
    json zeros = json::array();
    for (std::size_t i = 0; i < inv.zero_data.size(); ++i)
        zeros.push_back(json{{"theta", inv.thetas[i]},
                             {"m", inv.zero_data[i].order},
                             {"r", inv.zero_data[i].residue}});
    return json{
        {"k", inv.k}, {"sigma", inv.sigma}, {"zeros", zeros}, {"mu", inv.mu}};
}

json interval_inv_json(const IntervalInvariants& inv) {
    json zeros = json::array();
    for (std::size_t i = 0; i < inv.zero_data.size(); ++i)
        zeros.push_back(json{{"t", inv.positions[i]},
                             {"m", inv.zero_data[i].order},
                             {"r", inv.zero_data[i].residue}});
    return json{{"k", static_cast<int>(inv.zero_data.size())},
                {"zeros", zeros},
                {"gaps", inv.gap_integrals}};
}

json circle_key_json(const CanonicalKey& key) {
    json zeros = json::array();
    for (const ZeroInvariant& z : key.zero_data)
        zeros.push_back(json{{"m", z.order}, {"r", z.residue}});
    return json{{"k", key.k},
                {"sigma", key.sigma},
                {"zeros", zeros},
                {"mu", key.mu}};
}

const char* orbit_manifold(const OrbitType& o) {
    switch (o.tag) {
        case OrbitType::Tag::Point: return "point";
        case OrbitType::Tag::Sphere: return "S^{n-1}";
        case OrbitType::Tag::ProjSpace: return "RP^{n-1}";
        case OrbitType::Tag::PuncturedRn:
            return o.lambda == 0.0 ? "R^n minus origin" : "Hopf manifold";
        case OrbitType::Tag::Flag3: return "flag manifold (n=3)";
        case OrbitType::Tag::Gr24: return "Gr(2,4)";
    }
    return "?";
}

json classify_json(const ActionDescriptor& d) {
    json out;
    if (const auto* o = std::get_if<OrbitType>(&d.data)) {
        out["type"] = "transitive";
        std::string name = orbit_manifold(*o);
        if (o->finite_cover) name += " (finite cover)";
        out["manifold"] = name;
        if (o->tag == OrbitType::Tag::PuncturedRn) out["lambda"] = o->lambda;
    } else if (const auto* a = std::get_if<TypeIAction>(&d.data)) {
        const TypeIClass c = classify_type_I(*a);
        out["type"] = "I";
        out["case"] = c.case_id;
        out["manifold"] = c.label;
    } else {
        const auto& ii = std::get<TypeIIAction>(d.data);
        const TypeIIClass c = classify_type_II(ii);
        out["type"] = "II";
        out["manifold"] = c.projective ? "RP^n" : "S^n";
        out["fixed_points"] = c.fixed_points;
    }
    out["is_hopf"] = is_hopf(d);
    out["admits_projective"] = admits_projective(d);
    return out;
}

json graph_summary_json(const GluingGraph& g) {
    json comps = json::array();
    for (const TopologyComponent& c : summarize_topology(g).components)
        comps.push_back(
            json{{"nodes", c.nodes}, {"edges", c.edges}, {"label", c.label}});
    return json{{"level", level(g)},
                {"volume_preserving", is_volume_preserving(g)},
                {"components", comps}};
}

void print_csv_samples(const Artifact& art) {
    char buf[64];
    if (art.kind == Artifact::Kind::CircleField) {
        std::cout << "theta,f\n";
        for (int i = 0; i < kCsvSamples; ++i) {
            const double theta = kTwoPi * i / kCsvSamples;
            std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", theta,
                          art.circle.eval(theta));
            std::cout << buf;
        }
    } else {
        std::cout << "t,X\n";
        const double lo = art.interval.domain[0];
        const double hi = art.interval.domain[1];
        for (int i = 0; i < kCsvSamples; ++i) {
            const double t = lo + (hi - lo) * i / (kCsvSamples - 1);
            std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", t,
                          art.interval.eval(t));
            std::cout << buf;
        }
    }
}

int cmd_invariants(const std::string& path, double tol_zero, bool csv) {
    const Artifact art = load_artifact(path);
    if (art.kind == Artifact::Kind::CircleField) {
        emit(circle_inv_json(invariants(art.circle, tol_zero)));
    } else if (art.kind == Artifact::Kind::IntervalField) {
        emit(interval_inv_json(interval_invariants(art.interval, tol_zero)));
    } else {
        std::cerr << "invariants expects a field file, got a "
                  << artifact_kind_name(art.kind) << "\n";
        return 2;
    }
    if (csv) print_csv_samples(art);
    return 0;
}

// Shared by `equiv` and `lattice equiv`: decide, attach per-side detail,
// translate the verdict to the exit-code convention.
int equiv_verdict(const Artifact& a, const Artifact& b, double tol_zero,
                  double tol_match) {
    json out;
    out["kind"] = artifact_kind_name(a.kind);
    bool eq = false;
    try {
        switch (a.kind) {
            case Artifact::Kind::CircleField: {
                const HitchinInvariants ia = invariants(a.circle, tol_zero);
                const HitchinInvariants ib = invariants(b.circle, tol_zero);
                out["left"] = circle_key_json(canonical_key(ia, tol_match));
                out["right"] = circle_key_json(canonical_key(ib, tol_match));
                eq = equivalent_invariants(ia, ib, tol_match);
                break;
            }
            case Artifact::Kind::IntervalField: {
                out["left"] =
                    interval_inv_json(interval_invariants(a.interval, tol_zero));
                out["right"] =
                    interval_inv_json(interval_invariants(b.interval, tol_zero));
                eq = equivalent_interval(a.interval, b.interval, tol_match,
                                         /*allow_flip=*/false, tol_zero);
                break;
            }
            case Artifact::Kind::Action: {
                out["left"] = classify_json(a.action);
                out["right"] = classify_json(b.action);
                eq = equivalent_actions(a.action, b.action, tol_match);
                break;
            }
            case Artifact::Kind::Graph: {
                out["left"] = graph_summary_json(a.graph);
                out["right"] = graph_summary_json(b.graph);
                eq = equivalent_graphs(a.graph, b.graph, tol_match);
                break;
            }
        }
    } catch (const AmbiguousMatch& e) {
        out["equivalent"] = nullptr;
        emit(out);
        std::cerr << "ambiguous: " << e.what() << "\n";
        return 3;
    }
    out["equivalent"] = eq;
    emit(out);
    return eq ? 0 : 1;
}

int cmd_equiv(const std::string& path_a, const std::string& path_b,
              double tol_zero, double tol_match) {
    const Artifact a = load_artifact(path_a);
    const Artifact b = load_artifact(path_b);
    if (a.kind != b.kind) {
        std::cerr << "cannot compare a " << artifact_kind_name(a.kind)
                  << " with a " << artifact_kind_name(b.kind) << "\n";
        return 2;
    }
    return equiv_verdict(a, b, tol_zero, tol_match);
}

int cmd_classify(const std::string& path) {
    const Artifact art = load_artifact(path);
    if (art.kind != Artifact::Kind::Action) {
        std::cerr << "classify expects an action file, got a "
                  << artifact_kind_name(art.kind) << "\n";
        return 2;
    }
    emit(classify_json(art.action));
    return 0;
}

GluingGraph load_graph(const std::string& path) {
    const Artifact art = load_artifact(path);
    if (art.kind != Artifact::Kind::Graph)
        throw ParseError("\"" + path + "\" is not a graph file");
    return art.graph;
}

int cmd_lattice_check(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open \"" + path + "\"");
    std::ostringstream buf;
    buf << in.rdbuf();
    const json doc = parse_artifact_json(buf.str());
    if (doc.at("schema") != "graph/v1")
        throw ParseError("\"" + path + "\" is not a graph file");
    const auto diagnostics = validate_graph(graph_from_document(doc));
    emit(json{{"valid", diagnostics.empty()}, {"diagnostics", diagnostics}});
    for (const std::string& d : diagnostics) std::cerr << d << "\n";
    return diagnostics.empty() ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Invariant computation, classification, and equivalence decisions "
        "for analytic circle fields, interval fields, circle actions, and "
        "torus gluing graphs"};
    app.require_subcommand(1);
    const double default_tol_match = env_tol_match();

    std::string path_a, path_b;
    double tol_zero = 1e-9;
    double tol_match = default_tol_match;
    bool csv = false;
    bool json_flag = true;

    auto add_tols = [&](CLI::App* cmd, bool with_zero, bool with_match) {
        if (with_zero)
            cmd->add_option("--tol-zero", tol_zero,
                            "zero-detection tolerance (default 1e-9)");
        if (with_match)
            cmd->add_option("--tol-match", tol_match,
                            "equivalence tolerance (default 1e-6, or "
                            "SLN_ATLAS_TOL_MATCH)");
    };

    CLI::App* inv = app.add_subcommand(
        "invariants", "print the conjugacy invariants of a field file");
    inv->add_option("file", path_a, "field file")->required();
    add_tols(inv, true, true);
    inv->add_flag("--json", json_flag, "emit JSON (default)");
    inv->add_flag("--csv", csv, "append 1024 plot samples as CSV");

    CLI::App* eq = app.add_subcommand(
        "equiv", "decide equivalence of two artifacts of the same kind");
    eq->add_option("a", path_a, "first artifact file")->required();
    eq->add_option("b", path_b, "second artifact file")->required();
    add_tols(eq, true, true);

    CLI::App* cls =
        app.add_subcommand("classify", "classify an action file");
    cls->add_option("file", path_a, "action file")->required();

    CLI::App* lat =
        app.add_subcommand("lattice", "gluing-graph operations");
    lat->require_subcommand(1);
    CLI::App* lat_check =
        lat->add_subcommand("check", "validate a graph file");
    lat_check->add_option("file", path_a, "graph file")->required();
    CLI::App* lat_level =
        lat->add_subcommand("level", "congruence level of a graph");
    lat_level->add_option("file", path_a, "graph file")->required();
    CLI::App* lat_volume = lat->add_subcommand(
        "volume", "test whether the graph action preserves volume");
    lat_volume->add_option("file", path_a, "graph file")->required();
    add_tols(lat_volume, true, false);
    CLI::App* lat_topo = lat->add_subcommand(
        "topology", "connected components and connected-sum labels");
    lat_topo->add_option("file", path_a, "graph file")->required();
    CLI::App* lat_eq =
        lat->add_subcommand("equiv", "decide equivalence of two graphs");
    lat_eq->add_option("a", path_a, "first graph file")->required();
    lat_eq->add_option("b", path_b, "second graph file")->required();
    add_tols(lat_eq, true, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*inv) return cmd_invariants(path_a, tol_zero, csv);
        if (*eq) return cmd_equiv(path_a, path_b, tol_zero, tol_match);
        if (*cls) return cmd_classify(path_a);
        if (*lat_check) return cmd_lattice_check(path_a);
        if (*lat_level) {
            emit(json{{"level", level(load_graph(path_a))}});
            return 0;
        }
        if (*lat_volume) {
            emit(json{{"volume_preserving",
                       is_volume_preserving(load_graph(path_a), tol_zero)}});
            return 0;
        }
        if (*lat_topo) {
            json comps = json::array();
            for (const TopologyComponent& c :
                 summarize_topology(load_graph(path_a)).components)
                comps.push_back(json{{"nodes", c.nodes},
                                     {"edges", c.edges},
                                     {"label", c.label}});
            emit(json{{"components", comps}});
            return 0;
        }
        if (*lat_eq) {
            Artifact a, b;
            a.kind = b.kind = Artifact::Kind::Graph;
            a.graph = load_graph(path_a);
            b.graph = load_graph(path_b);
            return equiv_verdict(a, b, tol_zero, tol_match);
        }
    } catch (const AmbiguousMatch& e) {
        std::cerr << "ambiguous: " << e.what() << "\n";
        return 3;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
