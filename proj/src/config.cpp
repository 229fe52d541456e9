#include "vtbem/config.hpp"

#include <json.hpp>
#include <set>

namespace vtbem {

using nlohmann::json;

namespace {

[[noreturn]] void schema_fail(const std::string& path, const std::string& what) {
    fail(Err::SchemaError, "config error at " + path + ": " + what);
}

void check_keys(const json& obj, const std::string& path, const std::set<std::string>& allowed) {
    if (!obj.is_object()) schema_fail(path, "expected an object");
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        if (!allowed.count(it.key()))
            fail(Err::UnknownKey, "unknown key \"" + it.key() + "\" at " + path);
    }
}

double need_number(const json& obj, const std::string& path, const std::string& key) {
    if (!obj.contains(key)) schema_fail(path, "missing \"" + key + "\"");
    if (!obj[key].is_number()) schema_fail(path + "." + key, "expected a number");
    return obj[key].get<double>();
}

double opt_number(const json& obj, const std::string& key, double dflt) {
    return obj.contains(key) ? obj[key].get<double>() : dflt;
}

Vec2 need_vec2(const json& obj, const std::string& path, const std::string& key) {
    if (!obj.contains(key) || !obj[key].is_array() || obj[key].size() != 2)
        schema_fail(path + "." + key, "expected [x, y]");
    return {obj[key][0].get<double>(), obj[key][1].get<double>()};
}

Complex get_complex(const json& v, const std::string& path) {
    if (!v.is_array() || v.size() != 2) schema_fail(path, "expected [re, im]");
    return {v[0].get<double>(), v[1].get<double>()};
}

std::vector<double> get_array(const json& obj, const std::string& key) {
    std::vector<double> out;
    if (obj.contains(key))
        for (const auto& v : obj[key]) out.push_back(v.get<double>());
    return out;
}

CurvePtr parse_curve(const json& c, const std::string& path) {
    check_keys(c, path,
               {"type", "center", "radius", "orientation", "from", "to", "theta0", "theta1", "r0",
                "cos", "sin", "x0", "x1", "points", "closed", "rotate", "shift", "reversed"});
    if (!c.contains("type")) schema_fail(path, "missing curve type");
    std::string type = c["type"].get<std::string>();
    CurvePtr curve;
    if (type == "circle") {
        bool ccw = true;
        if (c.contains("orientation")) {
            std::string o = c["orientation"].get<std::string>();
            if (o == "cw")
                ccw = false;
            else if (o != "ccw")
                schema_fail(path + ".orientation", "expected \"ccw\" or \"cw\"");
        }
        curve = make_circle(need_vec2(c, path, "center"), need_number(c, path, "radius"), ccw);
    } else if (type == "line") {
        curve = make_segment(need_vec2(c, path, "from"), need_vec2(c, path, "to"));
    } else if (type == "arc") {
        curve = make_arc(need_vec2(c, path, "center"), need_number(c, path, "radius"),
                         need_number(c, path, "theta0"), need_number(c, path, "theta1"));
    } else if (type == "polar-trig") {
        curve = make_polar_trig(need_vec2(c, path, "center"), need_number(c, path, "r0"),
                                get_array(c, "cos"), get_array(c, "sin"));
    } else if (type == "graph-trig") {
        curve = make_graph_trig(need_number(c, path, "x0"), need_number(c, path, "x1"),
                                get_array(c, "cos"), get_array(c, "sin"));
    } else if (type == "cubic-spline") {
        if (!c.contains("points")) schema_fail(path, "missing spline points");
        std::vector<Vec2> pts;
        for (const auto& p : c["points"]) pts.push_back({p[0].get<double>(), p[1].get<double>()});
        curve = make_cubic_spline(std::move(pts), c.contains("closed") && c["closed"].get<bool>());
    } else {
        schema_fail(path + ".type", "unknown curve type \"" + type + "\"");
    }
    if (c.contains("rotate") || c.contains("shift")) {
        Vec2 shift = c.contains("shift") ? need_vec2(c, path, "shift") : Vec2{0.0, 0.0};
        curve = make_transformed(curve, opt_number(c, "rotate", 0.0), shift);
    }
    if (c.contains("reversed") && c["reversed"].get<bool>()) curve = make_reversed(curve);
    return curve;
}

JobConfig::BcSpec parse_bc(const json& b, const std::string& path) {
    check_keys(b, path, {"type", "position", "value", "path"});
    JobConfig::BcSpec bc;
    std::string type = b.contains("type") ? b["type"].get<std::string>() : "zero";
    if (type == "zero") {
        bc.type = JobConfig::BcSpec::Type::Zero;
    } else if (type == "point-source") {
        bc.type = JobConfig::BcSpec::Type::PointSource;
        bc.source = need_vec2(b, path, "position");
    } else if (type == "constant") {
        bc.type = JobConfig::BcSpec::Type::Constant;
        bc.value = get_complex(b.at("value"), path + ".value");
    } else if (type == "file") {
        bc.type = JobConfig::BcSpec::Type::File;
        bc.path = b.at("path").get<std::string>();
    } else {
        schema_fail(path + ".type", "unknown bc type \"" + type + "\"");
    }
    return bc;
}

} // namespace

JobConfig::Mode JobConfig::mode() const {
    if (!regions.empty()) return Mode::DomainDecomposition;
    bool any_circ = false;
    for (const auto& c : components) any_circ |= !c.is_star;
    return any_circ ? Mode::CaseII : Mode::CaseI;
}

JobConfig parse_config(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const std::exception& e) {
        fail(Err::SchemaError, std::string("config is not valid JSON: ") + e.what());
    }
    check_keys(root, "$",
               {"physics", "robin", "components", "regions", "pairings", "discretization", "targets",
                "outputs"});
    JobConfig cfg;

    if (!root.contains("physics")) schema_fail("$", "missing \"physics\"");
    const auto& ph = root["physics"];
    check_keys(ph, "$.physics", {"wavelength", "deltaV", "deltaT", "gamma"});
    cfg.physics.wavelength = need_number(ph, "$.physics", "wavelength");
    cfg.physics.deltaV = need_number(ph, "$.physics", "deltaV");
    cfg.physics.deltaT = need_number(ph, "$.physics", "deltaT");
    cfg.physics.gamma = need_number(ph, "$.physics", "gamma");

    if (root.contains("robin")) {
        const auto& rb = root["robin"];
        check_keys(rb, "$.robin", {"a"});
        if (rb.contains("a")) {
            if (rb["a"].is_string()) {
                std::string s = rb["a"].get<std::string>();
                if (s == "incoming")
                    cfg.robin_incoming = true;
                else if (s == "outgoing")
                    cfg.robin_outgoing = true;
                else
                    schema_fail("$.robin.a", "expected \"incoming\", \"outgoing\" or [re, im]");
            } else {
                cfg.robin_a = get_complex(rb["a"], "$.robin.a");
            }
        }
    }

    if (!root.contains("components") || !root["components"].is_array() || root["components"].empty())
        schema_fail("$", "missing non-empty \"components\" array");
    int ci = 0;
    for (const auto& comp : root["components"]) {
        std::string path = "$.components[" + std::to_string(ci++) + "]";
        check_keys(comp, path, {"kind", "curve", "bc", "robin"});
        JobConfig::Component out;
        std::string kind = comp.contains("kind") ? comp["kind"].get<std::string>() : "star";
        if (kind == "star")
            out.is_star = true;
        else if (kind == "circ")
            out.is_star = false;
        else
            schema_fail(path + ".kind", "expected \"star\" or \"circ\"");
        if (!comp.contains("curve")) schema_fail(path, "missing \"curve\"");
        out.curve = parse_curve(comp["curve"], path + ".curve");
        if (comp.contains("bc")) out.bc = parse_bc(comp["bc"], path + ".bc");
        if (comp.contains("robin")) out.robin_override = get_complex(comp["robin"], path + ".robin");
        cfg.components.push_back(std::move(out));
    }

    if (root.contains("regions")) {
        int ri = 0;
        for (const auto& reg : root["regions"]) {
            std::string path = "$.regions[" + std::to_string(ri++) + "]";
            check_keys(reg, path, {"components", "interfaces"});
            JobConfig::RegionSpec rs;
            for (const auto& v : reg.at("components")) rs.components.push_back(v.get<int>());
            if (reg.contains("interfaces"))
                for (const auto& v : reg["interfaces"]) rs.interfaces.push_back(v.get<int>());
            cfg.regions.push_back(std::move(rs));
        }
        if (root.contains("pairings")) {
            int pi = 0;
            for (const auto& p : root["pairings"]) {
                std::string path = "$.pairings[" + std::to_string(pi++) + "]";
                if (!p.is_array() || p.size() != 4) schema_fail(path, "expected [ra, compa, rb, compb]");
                cfg.pairings.push_back({p[0].get<int>(), p[1].get<int>(), p[2].get<int>(), p[3].get<int>()});
            }
        }
    } else if (root.contains("pairings")) {
        schema_fail("$.pairings", "pairings given without regions");
    }

    if (root.contains("discretization")) {
        const auto& d = root["discretization"];
        check_keys(d, "$.discretization",
                   {"order", "panels-per-wavelength", "corner-depth", "circ-corner-depth", "fin-length"});
        cfg.order = int(opt_number(d, "order", 16));
        cfg.panels_per_wavelength = opt_number(d, "panels-per-wavelength", 4.0);
        cfg.corner_depth = int(opt_number(d, "corner-depth", 7));
        cfg.circ_corner_depth = int(opt_number(d, "circ-corner-depth", -1));
        cfg.fin_length = opt_number(d, "fin-length", 0.0);
        if (cfg.order < 4) schema_fail("$.discretization.order", "order must be at least 4");
    }

    if (root.contains("targets")) {
        const auto& t = root["targets"];
        check_keys(t, "$.targets", {"bounds", "nx", "ny"});
        if (!t.contains("bounds") || t["bounds"].size() != 4)
            schema_fail("$.targets.bounds", "expected [x0, y0, x1, y1]");
        for (int i = 0; i < 4; ++i) cfg.bounds[i] = t["bounds"][size_t(i)].get<double>();
        cfg.nx = int(need_number(t, "$.targets", "nx"));
        cfg.ny = int(need_number(t, "$.targets", "ny"));
        cfg.has_targets = true;
    }

    if (root.contains("outputs")) {
        const auto& o = root["outputs"];
        check_keys(o, "$.outputs", {"field", "density-dir", "diagnostics"});
        if (o.contains("field")) cfg.field_path = o["field"].get<std::string>();
        if (o.contains("density-dir")) cfg.density_dir = o["density-dir"].get<std::string>();
        if (o.contains("diagnostics")) cfg.diagnostics_path = o["diagnostics"].get<std::string>();
    }

    // mode must be unambiguous
    if (cfg.regions.empty()) {
        bool any_circ = false, any_open_star = false;
        for (const auto& c : cfg.components) {
            any_circ |= !c.is_star;
            any_open_star |= c.is_star && !c.curve->closed();
        }
        if (!any_circ && any_open_star)
            schema_fail("$", "open star components require circ caps or regions");
        if (!any_circ && cfg.components.size() != 1)
            schema_fail("$", "case I expects exactly one closed star component");
    }

    // canonical form: validated input with every default made explicit
    json norm = root;
    if (!norm.contains("robin")) norm["robin"] = {{"a", {0.0, 0.0}}};
    for (auto& comp : norm["components"]) {
        if (!comp.contains("kind")) comp["kind"] = "star";
        if (!comp.contains("bc")) comp["bc"] = {{"type", "zero"}};
        else if (!comp["bc"].contains("type")) comp["bc"]["type"] = "zero";
    }
    json disc = norm.contains("discretization") ? norm["discretization"] : json::object();
    if (!disc.contains("order")) disc["order"] = cfg.order;
    if (!disc.contains("panels-per-wavelength")) disc["panels-per-wavelength"] = cfg.panels_per_wavelength;
    if (!disc.contains("corner-depth")) disc["corner-depth"] = cfg.corner_depth;
    if (!disc.contains("circ-corner-depth")) disc["circ-corner-depth"] = cfg.circ_corner_depth;
    if (!disc.contains("fin-length")) disc["fin-length"] = cfg.fin_length;
    norm["discretization"] = disc;
    json outs = norm.contains("outputs") ? norm["outputs"] : json::object();
    if (!outs.contains("field")) outs["field"] = cfg.field_path;
    if (!outs.contains("density-dir")) outs["density-dir"] = cfg.density_dir;
    if (!outs.contains("diagnostics")) outs["diagnostics"] = cfg.diagnostics_path;
    norm["outputs"] = outs;
    cfg.canonical = norm.dump(2);
    return cfg;
}

std::string serialize_config(const JobConfig& cfg) { return cfg.canonical; }

} // namespace vtbem
