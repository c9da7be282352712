#include "slnatlas/serialize.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "slnatlas/errors.hpp"

namespace slnatlas {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& msg) { throw ParseError(msg); }

double finite_number(const json& j, const std::string& what) {
    if (!j.is_number()) fail(what + " must be a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) fail(what + " must be finite");
    return v;
}

std::vector<double> finite_array(const json& j, const std::string& what) {
    if (!j.is_array()) fail(what + " must be an array");
    std::vector<double> out;
    out.reserve(j.size());
    for (const json& e : j) out.push_back(finite_number(e, what + " entry"));
    return out;
}

const json& require(const json& j, const char* key, const std::string& ctx) {
    const auto it = j.find(key);
    if (it == j.end()) fail(ctx + ": missing \"" + key + "\"");
    return *it;
}

// --- field/v1 ---------------------------------------------------------

json normalize_field(const json& j, const std::string& ctx) {
    const json& kind = require(j, "kind", ctx);
    if (kind == "trig") {
        json out;
        out["kind"] = "trig";
        out["a0"] = finite_number(require(j, "a0", ctx), ctx + ".a0");
        out["cos"] = finite_array(require(j, "cos", ctx), ctx + ".cos");
        out["sin"] = finite_array(require(j, "sin", ctx), ctx + ".sin");
        return out;
    }
    if (kind == "poly") {
        json out;
        out["kind"] = "poly";
        const auto dom =
            finite_array(require(j, "domain", ctx), ctx + ".domain");
        if (dom.size() != 2) fail(ctx + ".domain must have two entries");
        const bool unit = dom[0] == -1.0 && dom[1] == 1.0;
        const bool half = dom[0] == -1.0 && dom[1] == 0.0;
        if (!unit && !half)
            fail(ctx + ".domain must be [-1,1] or [-1,0]");
        out["domain"] = dom;
        out["coeffs"] =
            finite_array(require(j, "coeffs", ctx), ctx + ".coeffs");
        return out;
    }
    fail(ctx + ": unknown field kind");
}

CircleField circle_from_json(const json& j) {
    TrigPoly p;
    p.a0 = j.at("a0").get<double>();
    p.cos_coeffs = j.at("cos").get<std::vector<double>>();
    p.sin_coeffs = j.at("sin").get<std::vector<double>>();
    return make_trig_field(std::move(p));
}

IntervalField interval_from_json(const json& j) {
    const auto dom = j.at("domain").get<std::vector<double>>();
    return make_poly_field(j.at("coeffs").get<std::vector<double>>(), dom[0],
                           dom[1]);
}

// --- action/v1 --------------------------------------------------------

const char* orbit_name(OrbitType::Tag t) {
    switch (t) {
        case OrbitType::Tag::Point: return "point";
        case OrbitType::Tag::Sphere: return "sphere";
        case OrbitType::Tag::ProjSpace: return "proj_space";
        case OrbitType::Tag::PuncturedRn: return "punctured_rn";
        case OrbitType::Tag::Flag3: return "flag3";
        case OrbitType::Tag::Gr24: return "gr24";
    }
    return "?";
}

OrbitType::Tag orbit_tag(const std::string& s) {
    for (const auto t :
         {OrbitType::Tag::Point, OrbitType::Tag::Sphere,
          OrbitType::Tag::ProjSpace, OrbitType::Tag::PuncturedRn,
          OrbitType::Tag::Flag3, OrbitType::Tag::Gr24})
        if (s == orbit_name(t)) return t;
    fail("unknown orbit label \"" + s + "\"");
}

const char* involution_name(Involution::Kind k) {
    switch (k) {
        case Involution::Kind::Identity: return "identity";
        case Involution::Kind::ComponentSwap: return "component_swap";
        case Involution::Kind::FreeRotation: return "free_rotation";
        case Involution::Kind::Reflection: return "reflection";
    }
    return "?";
}

Involution::Kind involution_kind(const std::string& s) {
    for (const auto k :
         {Involution::Kind::Identity, Involution::Kind::ComponentSwap,
          Involution::Kind::FreeRotation, Involution::Kind::Reflection})
        if (s == involution_name(k)) return k;
    fail("unknown involution kind \"" + s + "\"");
}

int dimension_of(const json& j, const std::string& ctx) {
    const json& n = require(j, "n", ctx);
    if (!n.is_number_integer()) fail(ctx + ".n must be an integer");
    const auto v = n.get<std::int64_t>();
    if (v < 3 || v > 64) fail(ctx + ".n out of range");
    return static_cast<int>(v);
}

json normalize_action(const json& j) {
    json out;
    out["schema"] = "action/v1";
    const int n = dimension_of(j, "action");
    out["n"] = n;
    const json& type = require(j, "type", "action");
    if (type == "transitive") {
        out["type"] = "transitive";
        const json& orbit = require(j, "orbit", "action");
        if (!orbit.is_string()) fail("action.orbit must be a string");
        const OrbitType::Tag tag = orbit_tag(orbit.get<std::string>());
        if (tag == OrbitType::Tag::Flag3 && n != 3)
            fail("flag3 orbit requires n = 3");
        if (tag == OrbitType::Tag::Gr24 && n != 4)
            fail("gr24 orbit requires n = 4");
        out["orbit"] = orbit;
        double lambda = 0.0;
        if (j.contains("lambda"))
            lambda = finite_number(j["lambda"], "action.lambda");
        if (lambda != 0.0 && tag != OrbitType::Tag::PuncturedRn)
            fail("lambda applies to the punctured_rn orbit only");
        if (lambda != 0.0 && lambda <= 1.0)
            fail("action.lambda must be 0 or > 1");
        out["lambda"] = lambda;
        out["finite_cover"] =
            j.contains("finite_cover") ? j["finite_cover"].get<bool>() : false;
        return out;
    }
    if (type == "I") {
        out["type"] = "I";
        const json& comp = require(j, "components", "action");
        if (!comp.is_number_integer()) fail("action.components must be an integer");
        out["components"] = comp;
        const json& field = require(j, "field", "action");
        out["field"] = normalize_field(field, "action.field");
        if (out["field"]["kind"] != "trig")
            fail("Construction I requires a trig field");
        const json& tau = require(j, "involution", "action");
        const json& tk = require(tau, "kind", "action.involution");
        if (!tk.is_string()) fail("involution kind must be a string");
        involution_kind(tk.get<std::string>());  // validates
        json tout;
        tout["kind"] = tk;
        tout["axis"] = tau.contains("axis")
                           ? finite_number(tau["axis"], "involution.axis")
                           : 0.0;
        out["involution"] = tout;
        return out;
    }
    if (type == "II") {
        out["type"] = "II";
        out["quotient"] =
            j.contains("quotient") ? j["quotient"].get<bool>() : false;
        out["field"] = normalize_field(require(j, "field", "action"),
                                       "action.field");
        if (out["field"]["kind"] != "poly")
            fail("Construction II requires a poly field");
        return out;
    }
    fail("unknown action type");
}

ActionDescriptor action_from_json(const json& j) {
    ActionDescriptor d;
    const std::string type = j.at("type").get<std::string>();
    if (type == "transitive") {
        OrbitType o;
        o.tag = orbit_tag(j.at("orbit").get<std::string>());
        o.lambda = j.at("lambda").get<double>();
        o.finite_cover = j.at("finite_cover").get<bool>();
        d.data = o;
    } else if (type == "I") {
        TypeIAction a;
        a.n = j.at("n").get<int>();
        a.components = j.at("components").get<int>();
        a.field = circle_from_json(j.at("field"));
        a.tau.kind = involution_kind(j.at("involution").at("kind"));
        a.tau.axis = j.at("involution").at("axis").get<double>();
        d.data = a;
        classify_type_I(a);  // runs the validators; InvalidActionData escapes
    } else {
        TypeIIAction a;
        a.n = j.at("n").get<int>();
        a.quotient = j.at("quotient").get<bool>();
        a.field = interval_from_json(j.at("field"));
        d.data = a;
        classify_type_II(a);
    }
    return d;
}

// --- graph/v1 ---------------------------------------------------------

Rational fraction_from_string(const std::string& s) {
    std::int64_t num = 0, den = 1;
    const auto slash = s.find('/');
    try {
        std::size_t used = 0;
        if (slash == std::string::npos) {
            num = std::stoll(s, &used);
            if (used != s.size()) fail("bad fraction \"" + s + "\"");
        } else {
            num = std::stoll(s.substr(0, slash), &used);
            if (used != slash) fail("bad fraction \"" + s + "\"");
            const std::string d = s.substr(slash + 1);
            den = std::stoll(d, &used);
            if (used != d.size()) fail("bad fraction \"" + s + "\"");
        }
    } catch (const ParseError&) {
        throw;
    } catch (const std::exception&) {
        fail("bad fraction \"" + s + "\"");
    }
    const Rational r = make_rational(num, den);
    if (r.num != num || r.den != den)
        fail("fraction \"" + s + "\" is not reduced into [0,1)");
    return r;
}

std::string fraction_to_string(const Rational& r) {
    return std::to_string(r.num) + "/" + std::to_string(r.den);
}

const char* attachment_name(Attachment::Kind k) {
    switch (k) {
        case Attachment::Kind::Disk: return "disk";
        case Attachment::Kind::Tube: return "tube";
        case Attachment::Kind::BlowUp: return "blow_up";
        case Attachment::Kind::TwoSidedBlowUp: return "two_sided_blow_up";
    }
    return "?";
}

Attachment::Kind attachment_kind(const std::string& s) {
    for (const auto k :
         {Attachment::Kind::Disk, Attachment::Kind::Tube,
          Attachment::Kind::BlowUp, Attachment::Kind::TwoSidedBlowUp})
        if (s == attachment_name(k)) return k;
    fail("unknown attachment kind \"" + s + "\"");
}

json normalize_graph(const json& j) {
    json out;
    out["schema"] = "graph/v1";
    const int n = dimension_of(j, "graph");
    out["n"] = n;

    const json& nodes = require(j, "nodes", "graph");
    if (!nodes.is_array()) fail("graph.nodes must be an array");
    json nout = json::array();
    std::vector<std::size_t> point_counts;
    for (const json& node : nodes) {
        json nj;
        const json& id = require(node, "id", "node");
        if (!id.is_string()) fail("node.id must be a string");
        nj["id"] = id;
        const json& pts = require(node, "marked_points", "node");
        if (!pts.is_array()) fail("node.marked_points must be an array");
        json pout = json::array();
        for (const json& pt : pts) {
            if (!pt.is_array() || static_cast<int>(pt.size()) != n)
                fail("marked point must be an array of n fractions");
            json coords = json::array();
            for (const json& c : pt) {
                if (!c.is_string()) fail("fraction must be a string");
                coords.push_back(
                    fraction_to_string(fraction_from_string(c)));
            }
            pout.push_back(std::move(coords));
        }
        point_counts.push_back(pout.size());
        nj["marked_points"] = std::move(pout);
        nout.push_back(std::move(nj));
    }
    out["nodes"] = std::move(nout);

    const json& atts = require(j, "attachments", "graph");
    if (!atts.is_array()) fail("graph.attachments must be an array");
    json aout = json::array();
    for (const json& att : atts) {
        json aj;
        const json& kind = require(att, "kind", "attachment");
        if (!kind.is_string()) fail("attachment.kind must be a string");
        attachment_kind(kind.get<std::string>());  // validates
        aj["kind"] = kind;
        const json& sites = require(att, "sites", "attachment");
        if (!sites.is_array()) fail("attachment.sites must be an array");
        json sout = json::array();
        for (const json& site : sites) {
            if (!site.is_array() || site.size() != 2 ||
                !site[0].is_number_integer() || !site[1].is_number_integer())
                fail("site must be an integer pair [node, point]");
            const auto sn = site[0].get<std::int64_t>();
            const auto sp = site[1].get<std::int64_t>();
            if (sn < 0 || sn >= static_cast<std::int64_t>(point_counts.size()))
                fail("site references a missing node");
            if (sp < 0 ||
                sp >= static_cast<std::int64_t>(
                          point_counts[static_cast<std::size_t>(sn)]))
                fail("site references a missing marked point");
            sout.push_back(json::array({sn, sp}));
        }
        aj["sites"] = std::move(sout);
        aj["field"] =
            normalize_field(require(att, "field", "attachment"),
                            "attachment.field");
        if (aj["field"]["kind"] != "poly")
            fail("attachment fields must be poly fields");
        aout.push_back(std::move(aj));
    }
    out["attachments"] = std::move(aout);
    return out;
}

GluingGraph graph_from_json(const json& j) {
    GluingGraph g;
    g.n = j.at("n").get<int>();
    for (const json& node : j.at("nodes")) {
        MarkedTorus t;
        t.id = node.at("id").get<std::string>();
        t.n = g.n;
        for (const json& pt : node.at("marked_points")) {
            MarkedPoint p;
            for (const json& c : pt)
                p.push_back(fraction_from_string(c.get<std::string>()));
            t.marked_points.push_back(std::move(p));
        }
        g.nodes.push_back(std::move(t));
    }
    for (const json& att : j.at("attachments")) {
        Attachment a;
        a.kind = attachment_kind(att.at("kind").get<std::string>());
        for (const json& site : att.at("sites"))
            a.sites.push_back(
                Site{site[0].get<int>(), site[1].get<int>()});
        a.field = interval_from_json(att.at("field"));
        g.attachments.push_back(std::move(a));
    }
    return g;
}

// --- canonical writer --------------------------------------------------

void write_canonical(const json& j, std::string& out) {
    switch (j.type()) {
        case json::value_t::object: {
            out += '{';
            bool first = true;
            // nlohmann's object iteration is already key-sorted.
            for (auto it = j.begin(); it != j.end(); ++it) {
                if (!first) out += ',';
                first = false;
                out += json(it.key()).dump();
                out += ':';
                write_canonical(it.value(), out);
            }
            out += '}';
            break;
        }
        case json::value_t::array: {
            out += '[';
            bool first = true;
            for (const json& e : j) {
                if (!first) out += ',';
                first = false;
                write_canonical(e, out);
            }
            out += ']';
            break;
        }
        case json::value_t::number_float: {
            char buf[40];
            std::snprintf(buf, sizeof buf, "%.17g", j.get<double>());
            out += buf;
            break;
        }
        default:
            out += j.dump();
            break;
    }
}

}  // namespace

nlohmann::json parse_artifact_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        fail(std::string("malformed JSON: ") + e.what());
    }
    if (!j.is_object()) fail("artifact must be a JSON object");
    const json& schema = require(j, "schema", "artifact");
    try {
        if (schema == "field/v1") {
            json out = normalize_field(j, "field");
            out["schema"] = "field/v1";
            return out;
        }
        if (schema == "action/v1") return normalize_action(j);
        if (schema == "graph/v1") return normalize_graph(j);
    } catch (const json::exception& e) {
        fail(std::string("bad artifact value: ") + e.what());
    }
    fail("unknown schema tag");
}

Artifact artifact_from_json(const nlohmann::json& doc) {
    Artifact a;
    const std::string schema = doc.at("schema").get<std::string>();
    if (schema == "field/v1") {
        if (doc.at("kind") == "trig") {
            a.kind = Artifact::Kind::CircleField;
            a.circle = circle_from_json(doc);
        } else {
            a.kind = Artifact::Kind::IntervalField;
            a.interval = interval_from_json(doc);
        }
    } else if (schema == "action/v1") {
        a.kind = Artifact::Kind::Action;
        a.action = action_from_json(doc);
    } else {
        a.kind = Artifact::Kind::Graph;
        a.graph = graph_from_json(doc);
        const auto diagnostics = validate_graph(a.graph);
        if (!diagnostics.empty()) {
            std::string msg = "invalid graph:";
            for (const std::string& d : diagnostics) msg += "\n  " + d;
            throw ParseError(msg);
        }
    }
    return a;
}

GluingGraph graph_from_document(const nlohmann::json& doc) {
    return graph_from_json(doc);
}

Artifact load_artifact(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open \"" + path + "\"");
    std::ostringstream buf;
    buf << in.rdbuf();
    return artifact_from_json(parse_artifact_json(buf.str()));
}

std::string canonical_json(const nlohmann::json& j) {
    std::string out;
    write_canonical(j, out);
    return out;
}

const char* artifact_kind_name(Artifact::Kind k) {
    switch (k) {
        case Artifact::Kind::CircleField: return "circle field";
        case Artifact::Kind::IntervalField: return "interval field";
        case Artifact::Kind::Action: return "action";
        case Artifact::Kind::Graph: return "graph";
    }
    return "?";
}

}  // namespace slnatlas
