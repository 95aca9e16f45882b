#pragma once

#include <array>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "casq/errors.hpp"
#include "casq/quadrature.hpp"
#include "casq/vec3.hpp"

// Scenario files: JSON objects whose numeric keys carry their SI unit as a
// suffix ("h_m", "omega_cm_rad_per_s"). A known quantity given with another
// suffix is a UnitMismatch; an unknown key is a ParseError.

namespace casq::cli
{

enum class ScenarioKind
{
    QuasiStatic,
    MotionalMirror,
    Nonlocal,
    TotalMirror,
    Sagnac,
    SagnacStraightLine,
    SagnacSymmetric,
    DceClosed,
    DceNumeric,
};

inline constexpr std::array<std::pair<ScenarioKind, std::string_view>, 9> scenario_kind_names = {{
    {ScenarioKind::QuasiStatic, "QuasiStatic"},
    {ScenarioKind::MotionalMirror, "MotionalMirror"},
    {ScenarioKind::Nonlocal, "Nonlocal"},
    {ScenarioKind::TotalMirror, "TotalMirror"},
    {ScenarioKind::Sagnac, "Sagnac"},
    {ScenarioKind::SagnacStraightLine, "SagnacStraightLine"},
    {ScenarioKind::SagnacSymmetric, "SagnacSymmetric"},
    {ScenarioKind::DceClosed, "DceClosed"},
    {ScenarioKind::DceNumeric, "DceNumeric"},
}};

inline std::string to_string(ScenarioKind k)
{
    for (const auto& [kind, name] : scenario_kind_names)
        if (kind == k)
            return std::string(name);
    return "?";
}

inline bool is_mirror(ScenarioKind k)
{
    return k == ScenarioKind::QuasiStatic || k == ScenarioKind::MotionalMirror ||
           k == ScenarioKind::Nonlocal || k == ScenarioKind::TotalMirror;
}

inline bool is_sagnac(ScenarioKind k)
{
    return k == ScenarioKind::Sagnac || k == ScenarioKind::SagnacStraightLine ||
           k == ScenarioKind::SagnacSymmetric;
}

inline bool is_dce(ScenarioKind k) { return k == ScenarioKind::DceClosed || k == ScenarioKind::DceNumeric; }

struct WindowSpec
{
    double t_start_s = 0.0;
    double t_end_s = 0.0;
    bool improper = false;
    friend bool operator==(const WindowSpec&, const WindowSpec&) = default;
};

struct PathSpec
{
    std::string kind; // Constant | Linear | Harmonic | Sampled
    double h_m = 0.0;
    double v_m_per_s = 0.0;
    double amplitude_m = 0.0;
    double omega_rad_per_s = 0.0;
    double phase0_rad = 0.0;
    std::vector<double> t_s;
    std::vector<double> z_m;
    std::optional<double> parallel_velocity_m_per_s;
    friend bool operator==(const PathSpec&, const PathSpec&) = default;
};

struct Path3DSpec
{
    std::string kind; // StraightLine | Sampled
    Vec3 r0_m;
    Vec3 v_m_per_s;
    std::vector<double> t_s;
    std::vector<Vec3> r_m;
    friend bool operator==(const Path3DSpec&, const Path3DSpec&) = default;
};

struct ParticleSpec
{
    double alpha0_F_m2 = 0.0;
    double omega_s_rad_per_s = 0.0;
    double gamma_rad_per_s = 0.0;
    Vec3 omega_rad_per_s;
    double radius_m = 0.0;
    friend bool operator==(const ParticleSpec&, const ParticleSpec&) = default;
};

struct OscillationSpec
{
    double r_max_m = 0.0;
    double omega_cm_rad_per_s = 0.0;
    std::optional<double> alpha0_F_m2; // defaults to the species' static polarizability
    Vec3 direction{0.0, 0.0, 1.0};
    int angular_order = 6;
    int spectrum_points = 33;
    friend bool operator==(const OscillationSpec&, const OscillationSpec&) = default;
};

struct Scenario
{
    ScenarioKind kind = ScenarioKind::QuasiStatic;
    std::string species;
    std::optional<std::string> species_db;
    quad::QuadratureSpec quadrature;

    // mirror kinds
    std::optional<WindowSpec> window;
    std::vector<PathSpec> paths;
    int path_index = 0;
    double z_min_m = 1e-9;

    // Sagnac kinds
    std::optional<ParticleSpec> particle;
    std::optional<Path3DSpec> path3d;
    double y_m = 0.0;
    double y1_m = 0.0;

    // DCE kinds
    std::optional<OscillationSpec> oscillation;

    friend bool operator==(const Scenario&, const Scenario&) = default;
};

namespace detail
{

using nlohmann::json;

// One accepted key: its quantity stem and unit suffix ("" when unitless).
struct Field
{
    std::string_view stem;
    std::string_view unit;

    std::string key() const
    {
        return unit.empty() ? std::string(stem) : std::string(stem) + "_" + std::string(unit);
    }
};

inline std::string join_path(const std::string& where, const std::string& key)
{
    return where.empty() ? key : where + "." + key;
}

// Rejects unknown keys, naming wrong-unit variants of known quantities.
inline void check_keys(const json& obj, const std::string& where, std::initializer_list<Field> fields)
{
    if (!obj.is_object())
        throw ParseError((where.empty() ? std::string("scenario") : where) + ": expected an object");
    for (const auto& [key, value] : obj.items()) {
        bool known = false;
        const Field* best = nullptr;
        for (const auto& f : fields) {
            if (f.key() == key) {
                known = true;
                break;
            }
            const std::string stem(f.stem);
            if (key == stem || key.rfind(stem + "_", 0) == 0)
                if (!best || f.stem.size() > best->stem.size())
                    best = &f;
        }
        if (known)
            continue;
        if (best && !best->unit.empty())
            throw UnitMismatch(join_path(where, key) + ": expected unit-tagged key '" + best->key() + "'");
        throw ParseError(join_path(where, key) + ": unknown field");
    }
}

inline const json* find(const json& obj, const std::string& key)
{
    auto it = obj.find(key);
    return it == obj.end() ? nullptr : &*it;
}

inline const json& need(const json& obj, const std::string& key, const std::string& where)
{
    const json* v = find(obj, key);
    if (!v)
        throw ParseError(join_path(where, key) + ": missing required field");
    return *v;
}

inline double as_number(const json& v, const std::string& path)
{
    if (!v.is_number())
        throw ParseError(path + ": expected a number");
    return v.get<double>();
}

inline double number(const json& obj, const std::string& key, const std::string& where)
{
    return as_number(need(obj, key, where), join_path(where, key));
}

inline double number_or(const json& obj, const std::string& key, const std::string& where, double fallback)
{
    const json* v = find(obj, key);
    return v ? as_number(*v, join_path(where, key)) : fallback;
}

inline int integer_or(const json& obj, const std::string& key, const std::string& where, int fallback)
{
    const json* v = find(obj, key);
    if (!v)
        return fallback;
    if (!v->is_number_integer())
        throw ParseError(join_path(where, key) + ": expected an integer");
    return v->get<int>();
}

inline std::string string_field(const json& obj, const std::string& key, const std::string& where)
{
    const json& v = need(obj, key, where);
    if (!v.is_string())
        throw ParseError(join_path(where, key) + ": expected a string");
    return v.get<std::string>();
}

inline Vec3 vec3(const json& v, const std::string& path)
{
    if (!v.is_array() || v.size() != 3)
        throw ParseError(path + ": expected an array of three numbers");
    return {as_number(v[0], path + ".0"), as_number(v[1], path + ".1"), as_number(v[2], path + ".2")};
}

inline std::vector<double> number_list(const json& v, const std::string& path)
{
    if (!v.is_array())
        throw ParseError(path + ": expected an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i)
        out.push_back(as_number(v[i], path + "." + std::to_string(i)));
    return out;
}

inline json to_json(const Vec3& v) { return json::array({v.x, v.y, v.z}); }

inline WindowSpec parse_window(const json& obj, const std::string& where)
{
    check_keys(obj, where, {{"t_start", "s"}, {"t_end", "s"}, {"improper", ""}});
    WindowSpec w;
    if (const json* imp = find(obj, "improper")) {
        if (!imp->is_boolean())
            throw ParseError(where + ".improper: expected a boolean");
        w.improper = imp->get<bool>();
    }
    if (w.improper) {
        if (find(obj, "t_start_s") || find(obj, "t_end_s"))
            throw ParseError(where + ": an improper window takes no limits");
        return w;
    }
    w.t_start_s = number(obj, "t_start_s", where);
    w.t_end_s = number(obj, "t_end_s", where);
    if (!(w.t_start_s < w.t_end_s))
        throw ParseError(where + ": needs t_start_s < t_end_s");
    return w;
}

inline PathSpec parse_path(const json& obj, const std::string& where)
{
    check_keys(obj, where,
               {{"kind", ""}, {"h", "m"}, {"v", "m_per_s"}, {"amplitude", "m"}, {"omega", "rad_per_s"},
                {"phase0", "rad"}, {"t", "s"}, {"z", "m"}, {"parallel_velocity", "m_per_s"}});
    PathSpec p;
    p.kind = string_field(obj, "kind", where);
    if (p.kind == "Constant") {
        p.h_m = number(obj, "h_m", where);
    } else if (p.kind == "Linear") {
        p.h_m = number(obj, "h_m", where);
        p.v_m_per_s = number(obj, "v_m_per_s", where);
    } else if (p.kind == "Harmonic") {
        p.h_m = number(obj, "h_m", where);
        p.amplitude_m = number(obj, "amplitude_m", where);
        p.omega_rad_per_s = number(obj, "omega_rad_per_s", where);
        p.phase0_rad = number_or(obj, "phase0_rad", where, 0.0);
    } else if (p.kind == "Sampled") {
        p.t_s = number_list(need(obj, "t_s", where), join_path(where, "t_s"));
        p.z_m = number_list(need(obj, "z_m", where), join_path(where, "z_m"));
    } else {
        throw ParseError(where + ".kind: unknown path kind '" + p.kind + "'");
    }
    if (const json* vp = find(obj, "parallel_velocity_m_per_s"))
        p.parallel_velocity_m_per_s = as_number(*vp, join_path(where, "parallel_velocity_m_per_s"));
    return p;
}

inline json path_to_json(const PathSpec& p)
{
    json j = {{"kind", p.kind}};
    if (p.kind == "Constant") {
        j["h_m"] = p.h_m;
    } else if (p.kind == "Linear") {
        j["h_m"] = p.h_m;
        j["v_m_per_s"] = p.v_m_per_s;
    } else if (p.kind == "Harmonic") {
        j["h_m"] = p.h_m;
        j["amplitude_m"] = p.amplitude_m;
        j["omega_rad_per_s"] = p.omega_rad_per_s;
        j["phase0_rad"] = p.phase0_rad;
    } else {
        j["t_s"] = p.t_s;
        j["z_m"] = p.z_m;
    }
    if (p.parallel_velocity_m_per_s)
        j["parallel_velocity_m_per_s"] = *p.parallel_velocity_m_per_s;
    return j;
}

inline Path3DSpec parse_path3d(const json& obj, const std::string& where)
{
    check_keys(obj, where, {{"kind", ""}, {"r0", "m"}, {"v", "m_per_s"}, {"t", "s"}, {"r", "m"}});
    Path3DSpec p;
    p.kind = string_field(obj, "kind", where);
    if (p.kind == "StraightLine") {
        p.r0_m = vec3(need(obj, "r0_m", where), join_path(where, "r0_m"));
        p.v_m_per_s = vec3(need(obj, "v_m_per_s", where), join_path(where, "v_m_per_s"));
    } else if (p.kind == "Sampled") {
        p.t_s = number_list(need(obj, "t_s", where), join_path(where, "t_s"));
        const json& r = need(obj, "r_m", where);
        if (!r.is_array())
            throw ParseError(join_path(where, "r_m") + ": expected an array of 3-vectors");
        for (std::size_t i = 0; i < r.size(); ++i)
            p.r_m.push_back(vec3(r[i], join_path(where, "r_m") + "." + std::to_string(i)));
    } else {
        throw ParseError(where + ".kind: unknown path kind '" + p.kind + "'");
    }
    return p;
}

inline json path3d_to_json(const Path3DSpec& p)
{
    json j = {{"kind", p.kind}};
    if (p.kind == "StraightLine") {
        j["r0_m"] = to_json(p.r0_m);
        j["v_m_per_s"] = to_json(p.v_m_per_s);
    } else {
        j["t_s"] = p.t_s;
        json r = json::array();
        for (const auto& x : p.r_m)
            r.push_back(to_json(x));
        j["r_m"] = r;
    }
    return j;
}

inline ParticleSpec parse_particle(const json& obj, const std::string& where)
{
    check_keys(obj, where,
               {{"alpha0", "F_m2"}, {"omega_s", "rad_per_s"}, {"gamma", "rad_per_s"}, {"omega", "rad_per_s"},
                {"radius", "m"}});
    ParticleSpec p;
    p.alpha0_F_m2 = number(obj, "alpha0_F_m2", where);
    p.omega_s_rad_per_s = number(obj, "omega_s_rad_per_s", where);
    p.gamma_rad_per_s = number_or(obj, "gamma_rad_per_s", where, 0.0);
    p.omega_rad_per_s = vec3(need(obj, "omega_rad_per_s", where), join_path(where, "omega_rad_per_s"));
    p.radius_m = number_or(obj, "radius_m", where, 0.0);
    return p;
}

inline OscillationSpec parse_oscillation(const json& obj, const std::string& where)
{
    check_keys(obj, where,
               {{"r_max", "m"}, {"omega_cm", "rad_per_s"}, {"alpha0", "F_m2"}, {"direction", ""},
                {"angular_order", ""}, {"spectrum_points", ""}});
    OscillationSpec o;
    o.r_max_m = number(obj, "r_max_m", where);
    o.omega_cm_rad_per_s = number(obj, "omega_cm_rad_per_s", where);
    if (const json* a = find(obj, "alpha0_F_m2"))
        o.alpha0_F_m2 = as_number(*a, join_path(where, "alpha0_F_m2"));
    if (const json* d = find(obj, "direction"))
        o.direction = vec3(*d, join_path(where, "direction"));
    o.angular_order = integer_or(obj, "angular_order", where, 6);
    o.spectrum_points = integer_or(obj, "spectrum_points", where, 33);
    if (o.angular_order < 3 || o.angular_order > 64)
        throw ParseError(where + ".angular_order: must be between 3 and 64");
    if (o.spectrum_points < 1 || o.spectrum_points > 100000)
        throw ParseError(where + ".spectrum_points: must be between 1 and 100000");
    return o;
}

} // namespace detail

inline ScenarioKind parse_kind(const std::string& name)
{
    for (const auto& [kind, n] : scenario_kind_names)
        if (n == name)
            return kind;
    throw ParseError("kind: unknown scenario kind '" + name + "'");
}

/// Validate a scenario document and fill defaults.
inline Scenario parse_scenario_json(const nlohmann::json& doc)
{
    using namespace detail;
    check_keys(doc, "",
               {{"kind", ""}, {"species", ""}, {"species_db", ""}, {"quadrature", ""}, {"window", ""},
                {"paths", ""}, {"path_index", ""}, {"z_min", "m"}, {"particle", ""}, {"path3d", ""},
                {"y", "m"}, {"y1", "m"}, {"oscillation", ""}});

    Scenario s;
    s.kind = parse_kind(string_field(doc, "kind", ""));
    s.species = string_field(doc, "species", "");
    if (const json* db = find(doc, "species_db")) {
        if (!db->is_string())
            throw ParseError("species_db: expected a string");
        s.species_db = db->get<std::string>();
    }
    if (const json* q = find(doc, "quadrature")) {
        check_keys(*q, "quadrature", {{"rel_tol", ""}, {"abs_tol", ""}, {"max_subdivisions", ""}});
        s.quadrature.rel_tol = number_or(*q, "rel_tol", "quadrature", s.quadrature.rel_tol);
        s.quadrature.abs_tol = number_or(*q, "abs_tol", "quadrature", s.quadrature.abs_tol);
        s.quadrature.max_subdivisions =
            integer_or(*q, "max_subdivisions", "quadrature", s.quadrature.max_subdivisions);
        try {
            s.quadrature.validate();
        } catch (const InvalidArgument& e) {
            throw ParseError(std::string("quadrature: ") + e.message());
        }
    }

    auto forbid = [&](std::initializer_list<const char*> keys) {
        for (const char* k : keys)
            if (find(doc, k))
                throw ParseError(std::string(k) + ": not used by scenario kind " + to_string(s.kind));
    };

    if (is_mirror(s.kind)) {
        forbid({"particle", "path3d", "y_m", "y1_m", "oscillation"});
        s.window = parse_window(need(doc, "window", ""), "window");
        if (s.window->improper)
            throw ParseError("window: mirror scenarios need a bounded window");
        const json& paths = need(doc, "paths", "");
        if (!paths.is_array())
            throw ParseError("paths: expected an array");
        for (std::size_t i = 0; i < paths.size(); ++i)
            s.paths.push_back(parse_path(paths[i], "paths." + std::to_string(i)));
        const bool two = s.kind == ScenarioKind::Nonlocal || s.kind == ScenarioKind::TotalMirror;
        if (two && s.paths.size() != 2)
            throw ParseError("paths: scenario kind " + to_string(s.kind) + " needs exactly two paths");
        if (!two && (s.paths.empty() || s.paths.size() > 2))
            throw ParseError("paths: expected one or two paths");
        if (!two) {
            s.path_index = integer_or(doc, "path_index", "", 0);
            if (s.path_index < 0 || s.path_index >= static_cast<int>(s.paths.size()))
                throw ParseError("path_index: out of range");
        } else {
            forbid({"path_index"});
        }
        s.z_min_m = number_or(doc, "z_min_m", "", s.z_min_m);
    } else if (is_sagnac(s.kind)) {
        forbid({"paths", "path_index", "z_min_m", "oscillation"});
        s.particle = parse_particle(need(doc, "particle", ""), "particle");
        if (s.kind == ScenarioKind::Sagnac) {
            forbid({"y_m", "y1_m"});
            s.path3d = parse_path3d(need(doc, "path3d", ""), "path3d");
            if (const json* w = find(doc, "window"))
                s.window = parse_window(*w, "window");
            else if (s.path3d->kind == "StraightLine")
                s.window = WindowSpec{0.0, 0.0, true};
        } else {
            forbid({"path3d", "window"});
            if (s.kind == ScenarioKind::SagnacStraightLine) {
                forbid({"y1_m"});
                s.y_m = number(doc, "y_m", "");
            } else {
                forbid({"y_m"});
                s.y1_m = number(doc, "y1_m", "");
            }
        }
    } else {
        forbid({"paths", "path_index", "z_min_m", "particle", "path3d", "y_m", "y1_m", "window"});
        s.oscillation = parse_oscillation(need(doc, "oscillation", ""), "oscillation");
    }
    return s;
}

/// Canonical form: every field the kind uses, defaults included, keys sorted.
inline nlohmann::json scenario_to_json(const Scenario& s)
{
    using namespace detail;
    json j = {{"kind", to_string(s.kind)}, {"species", s.species}};
    if (s.species_db)
        j["species_db"] = *s.species_db;
    j["quadrature"] = {{"rel_tol", s.quadrature.rel_tol},
                       {"abs_tol", s.quadrature.abs_tol},
                       {"max_subdivisions", s.quadrature.max_subdivisions}};
    if (s.window) {
        if (s.window->improper)
            j["window"] = {{"improper", true}};
        else
            j["window"] = {{"t_start_s", s.window->t_start_s}, {"t_end_s", s.window->t_end_s}};
    }
    if (is_mirror(s.kind)) {
        json paths = json::array();
        for (const auto& p : s.paths)
            paths.push_back(path_to_json(p));
        j["paths"] = paths;
        if (s.kind == ScenarioKind::QuasiStatic || s.kind == ScenarioKind::MotionalMirror)
            j["path_index"] = s.path_index;
        j["z_min_m"] = s.z_min_m;
    }
    if (s.particle) {
        const auto& p = *s.particle;
        j["particle"] = {{"alpha0_F_m2", p.alpha0_F_m2},
                         {"omega_s_rad_per_s", p.omega_s_rad_per_s},
                         {"gamma_rad_per_s", p.gamma_rad_per_s},
                         {"omega_rad_per_s", to_json(p.omega_rad_per_s)},
                         {"radius_m", p.radius_m}};
    }
    if (s.path3d)
        j["path3d"] = path3d_to_json(*s.path3d);
    if (s.kind == ScenarioKind::SagnacStraightLine)
        j["y_m"] = s.y_m;
    if (s.kind == ScenarioKind::SagnacSymmetric)
        j["y1_m"] = s.y1_m;
    if (s.oscillation) {
        const auto& o = *s.oscillation;
        j["oscillation"] = {{"r_max_m", o.r_max_m},
                            {"omega_cm_rad_per_s", o.omega_cm_rad_per_s},
                            {"direction", to_json(o.direction)},
                            {"angular_order", o.angular_order},
                            {"spectrum_points", o.spectrum_points}};
        if (o.alpha0_F_m2)
            j["oscillation"]["alpha0_F_m2"] = *o.alpha0_F_m2;
    }
    return j;
}

inline nlohmann::json read_json_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open '" + path + "'");
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(path + ": " + e.what());
    }
}

inline Scenario parse_scenario(const std::string& path)
{
    const nlohmann::json doc = read_json_file(path);
    try {
        return parse_scenario_json(doc);
    } catch (const UnitMismatch& e) {
        throw UnitMismatch(path + ": " + e.message());
    } catch (const ParseError& e) {
        throw ParseError(path + ": " + e.message());
    }
}

} // namespace casq::cli
