#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "casq/errors.hpp"
#include "casq/report.hpp"
#include "casq/sweep.hpp"

namespace casq::cli
{

enum class Format
{
    csv,
    json,
    svg,
};

inline Format parse_format(const std::string& name)
{
    if (name == "csv")
        return Format::csv;
    if (name == "json")
        return Format::json;
    if (name == "svg-plotdata")
        return Format::svg;
    throw InvalidArgument("unknown output format '" + name + "' (csv, json, svg-plotdata)");
}

/// %.17g
inline std::string fmt17(double x)
{
    if (!std::isfinite(x))
        return std::isnan(x) ? "nan" : (x > 0 ? "inf" : "-inf");
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

namespace detail
{

inline void dump_into(const nlohmann::json& j, std::string& out, int indent, int depth)
{
    auto newline = [&](int d) {
        if (indent >= 0) {
            out += '\n';
            out.append(static_cast<std::size_t>(indent * d), ' ');
        }
    };
    switch (j.type()) {
    case nlohmann::json::value_t::object: {
        if (j.empty()) {
            out += "{}";
            return;
        }
        out += '{';
        bool first = true;
        for (const auto& [k, v] : j.items()) {
            if (!first)
                out += ',';
            first = false;
            newline(depth + 1);
            out += nlohmann::json(k).dump();
            out += indent >= 0 ? ": " : ":";
            dump_into(v, out, indent, depth + 1);
        }
        newline(depth);
        out += '}';
        return;
    }
    case nlohmann::json::value_t::array: {
        if (j.empty()) {
            out += "[]";
            return;
        }
        out += '[';
        for (std::size_t i = 0; i < j.size(); ++i) {
            if (i)
                out += ',';
            newline(depth + 1);
            dump_into(j[i], out, indent, depth + 1);
        }
        newline(depth);
        out += ']';
        return;
    }
    case nlohmann::json::value_t::number_float: {
        const double x = j.get<double>();
        out += std::isfinite(x) ? fmt17(x) : "null";
        return;
    }
    default:
        out += j.dump();
    }
}

} // namespace detail

/// JSON text with every float written to 17 significant digits. Keys come out
/// sorted, so equal documents give equal bytes.
inline std::string dump17(const nlohmann::json& j, int indent = -1)
{
    std::string out;
    detail::dump_into(j, out, indent, 0);
    return out;
}

inline nlohmann::json breakdown_to_json(const std::vector<std::pair<std::string, double>>& b)
{
    nlohmann::json j = nlohmann::json::object();
    for (const auto& [k, v] : b)
        j[k] = v;
    return j;
}

inline nlohmann::json report_to_json(const Report& r)
{
    nlohmann::json breakdown = nlohmann::json::array();
    for (const auto& [k, v] : r.breakdown)
        breakdown.push_back({{"name", k}, {"value", v}});
    nlohmann::json j = {{"scenario_kind", r.scenario_kind},
                        {"species", r.species},
                        {"operation", r.operation},
                        {"unit", r.unit},
                        {"value", r.value},
                        {"error_estimate", r.error_estimate},
                        {"converged", r.converged},
                        {"breakdown", breakdown},
                        {"warnings", r.warnings},
                        {"toolkit_version", r.toolkit_version},
                        {"constants_hash", r.constants_hash}};
    if (!r.spectrum.empty()) {
        nlohmann::json s = nlohmann::json::array();
        for (const auto& [w, d] : r.spectrum)
            s.push_back({w, d});
        j["spectrum"] = s;
    }
    if (r.wall_time_s)
        j["wall_time_s"] = *r.wall_time_s;
    return j;
}

inline Report report_from_json(const nlohmann::json& j)
{
    try {
        Report r;
        r.scenario_kind = j.at("scenario_kind").get<std::string>();
        r.species = j.at("species").get<std::string>();
        r.operation = j.at("operation").get<std::string>();
        r.unit = j.at("unit").get<std::string>();
        r.value = j.at("value").get<double>();
        r.error_estimate = j.at("error_estimate").get<double>();
        r.converged = j.at("converged").get<bool>();
        for (const auto& b : j.at("breakdown"))
            r.breakdown.emplace_back(b.at("name").get<std::string>(), b.at("value").get<double>());
        r.warnings = j.at("warnings").get<std::vector<std::string>>();
        r.toolkit_version = j.at("toolkit_version").get<std::string>();
        r.constants_hash = j.at("constants_hash").get<std::string>();
        if (j.contains("spectrum"))
            for (const auto& p : j.at("spectrum"))
                r.spectrum.emplace_back(p.at(0).get<double>(), p.at(1).get<double>());
        if (j.contains("wall_time_s"))
            r.wall_time_s = j.at("wall_time_s").get<double>();
        return r;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("report: ") + e.what());
    }
}

inline nlohmann::json table_to_json(const SweepTable& t)
{
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : t.rows) {
        nlohmann::json j = {{"param_value", row.param_value}};
        if (row.report)
            j["report"] = report_to_json(*row.report);
        else
            j["error"] = {{"name", row.error_name}, {"message", row.error_message}, {"exit_code", row.exit_code}};
        rows.push_back(j);
    }
    return {{"param_name", t.param_name},
            {"scale", t.scale == SweepScale::log ? "log" : "linear"},
            {"rows", rows}};
}

inline SweepTable table_from_json(const nlohmann::json& j)
{
    try {
        SweepTable t;
        t.param_name = j.at("param_name").get<std::string>();
        t.scale = j.at("scale").get<std::string>() == "log" ? SweepScale::log : SweepScale::linear;
        for (const auto& r : j.at("rows")) {
            SweepRow row;
            row.param_value = r.at("param_value").get<double>();
            if (r.contains("report")) {
                row.report = report_from_json(r.at("report"));
            } else {
                const auto& e = r.at("error");
                row.error_name = e.at("name").get<std::string>();
                row.error_message = e.at("message").get<std::string>();
                row.exit_code = e.at("exit_code").get<int>();
            }
            t.rows.push_back(std::move(row));
        }
        return t;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("sweep table: ") + e.what());
    }
}

inline constexpr const char* csv_header =
    "scenario_kind,species,param_name,param_value,value_rad_or_per_s,error_estimate,converged,breakdown_json";

inline std::string csv_field(const std::string& s)
{
    if (s.find_first_of(",\"\n\r") == std::string::npos)
        return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"')
            out += '"';
        out += c;
    }
    return out + '"';
}

namespace detail
{

inline std::string csv_row(const std::string& kind, const std::string& species, const std::string& param,
                           const std::string& param_value, const Report* r, const std::string& error)
{
    std::string line = csv_field(kind) + ',' + csv_field(species) + ',' + csv_field(param) + ',' + param_value;
    if (r) {
        line += ',' + fmt17(r->value) + ',' + fmt17(r->error_estimate) + ',' + (r->converged ? "true" : "false");
        line += ',' + csv_field(dump17(breakdown_to_json(r->breakdown)));
    } else {
        line += ",,,false," + csv_field(dump17(nlohmann::json{{"error", error}}));
    }
    return line + '\n';
}

} // namespace detail

inline std::string report_to_csv(const Report& r)
{
    return std::string(csv_header) + '\n' + detail::csv_row(r.scenario_kind, r.species, "", "", &r, "");
}

inline std::string table_to_csv(const SweepTable& t, const Scenario& base)
{
    std::string out = std::string(csv_header) + '\n';
    for (const auto& row : t.rows) {
        const Report* r = row.report ? &*row.report : nullptr;
        out += detail::csv_row(to_string(base.kind), base.species, t.param_name, fmt17(row.param_value), r,
                               row.error_message);
    }
    return out;
}

/// Minimal static SVG: one polyline (plus point markers) of value against the
/// swept parameter. Failed rows are skipped.
inline std::string table_to_svg(const SweepTable& t, const std::string& title)
{
    constexpr double width = 640, height = 400, margin = 60;
    const bool logx = t.scale == SweepScale::log;
    std::vector<std::pair<double, double>> pts;
    for (const auto& row : t.rows)
        if (row.report && std::isfinite(row.report->value) && (!logx || row.param_value > 0.0))
            pts.emplace_back(logx ? std::log10(row.param_value) : row.param_value, row.report->value);

    double x0 = 0, x1 = 1, y0 = 0, y1 = 1;
    if (!pts.empty()) {
        auto [xmin, xmax] = std::minmax_element(pts.begin(), pts.end());
        auto [ymin, ymax] = std::minmax_element(pts.begin(), pts.end(),
                                                [](const auto& a, const auto& b) { return a.second < b.second; });
        x0 = xmin->first, x1 = xmax->first, y0 = ymin->second, y1 = ymax->second;
        if (x1 == x0)
            x0 -= 0.5, x1 += 0.5;
        if (y1 == y0) {
            const double pad = y0 == 0.0 ? 1.0 : 0.5 * std::abs(y0);
            y0 -= pad, y1 += pad;
        }
    }
    auto sx = [&](double x) { return margin + (x - x0) / (x1 - x0) * (width - 2 * margin); };
    auto sy = [&](double y) { return height - margin - (y - y0) / (y1 - y0) * (height - 2 * margin); };
    auto esc = [](const std::string& s) {
        std::string o;
        for (char c : s) {
            if (c == '<')
                o += "&lt;";
            else if (c == '>')
                o += "&gt;";
            else if (c == '&')
                o += "&amp;";
            else if (c == '"')
                o += "&quot;";
            else
                o += c;
        }
        return o;
    };
    char buf[128];
    std::ostringstream svg;
    svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"400\" viewBox=\"0 0 640 400\">\n"
        << "<title>" << esc(title) << "</title>\n"
        << "<rect x=\"0\" y=\"0\" width=\"640\" height=\"400\" fill=\"white\"/>\n"
        << "<line x1=\"60\" y1=\"340\" x2=\"580\" y2=\"340\" stroke=\"black\"/>\n"
        << "<line x1=\"60\" y1=\"60\" x2=\"60\" y2=\"340\" stroke=\"black\"/>\n"
        << "<text x=\"320\" y=\"385\" text-anchor=\"middle\" font-size=\"12\">"
        << esc((logx ? "log10 " : "") + t.param_name) << "</text>\n";
    svg << "<text x=\"60\" y=\"355\" font-size=\"10\">" << fmt17(x0) << "</text>\n"
        << "<text x=\"580\" y=\"355\" text-anchor=\"end\" font-size=\"10\">" << fmt17(x1) << "</text>\n"
        << "<text x=\"55\" y=\"340\" text-anchor=\"end\" font-size=\"10\">" << fmt17(y0) << "</text>\n"
        << "<text x=\"55\" y=\"65\" text-anchor=\"end\" font-size=\"10\">" << fmt17(y1) << "</text>\n";
    svg << "<polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < pts.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%s%.3f,%.3f", i ? " " : "", sx(pts[i].first), sy(pts[i].second));
        svg << buf;
    }
    svg << "\"/>\n";
    for (const auto& [x, y] : pts) {
        std::snprintf(buf, sizeof buf, "<circle cx=\"%.3f\" cy=\"%.3f\" r=\"3\" fill=\"steelblue\"/>\n", sx(x),
                      sy(y));
        svg << buf;
    }
    svg << "</svg>\n";
    return svg.str();
}

/// A single report as a one-row table.
inline SweepTable single_row_table(const Report& r)
{
    SweepTable t;
    t.param_name = "run";
    SweepRow row;
    row.report = r;
    t.rows.push_back(row);
    return t;
}

inline std::string render(const Report& r, Format f)
{
    switch (f) {
    case Format::csv:
        return report_to_csv(r);
    case Format::json:
        return dump17(report_to_json(r), 2) + '\n';
    default:
        return table_to_svg(single_row_table(r), r.scenario_kind + " " + r.species);
    }
}

inline std::string render(const SweepTable& t, const Scenario& base, Format f)
{
    switch (f) {
    case Format::csv:
        return table_to_csv(t, base);
    case Format::json:
        return dump17(table_to_json(t), 2) + '\n';
    default:
        return table_to_svg(t, to_string(base.kind) + " " + base.species);
    }
}

inline void write_file(const std::string& path, const std::string& content)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw IoError("cannot write '" + path + "'");
    out << content;
    out.flush();
    if (!out)
        throw IoError("write to '" + path + "' failed");
}

} // namespace casq::cli
