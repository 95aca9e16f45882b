#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <string>
#include <thread>
#include <vector>

#include "casq/errors.hpp"
#include "casq/report.hpp"
#include "casq/scenario.hpp"

namespace casq::cli
{

enum class SweepScale
{
    linear,
    log,
};

struct SweepSpec
{
    std::string param;
    std::vector<double> values;
    SweepScale scale = SweepScale::linear;

    /// `points` values from `from` to `to`, endpoints exact.
    static SweepSpec range(std::string param, double from, double to, int points,
                           SweepScale scale = SweepScale::linear)
    {
        if (points < 2)
            throw InvalidArgument("a sweep range needs at least two points");
        if (!std::isfinite(from) || !std::isfinite(to))
            throw InvalidArgument("sweep endpoints must be finite");
        if (scale == SweepScale::log && !(from > 0.0 && to > 0.0))
            throw InvalidArgument("a log sweep needs positive endpoints");
        SweepSpec s{std::move(param), {}, scale};
        const double n = points - 1;
        for (int i = 0; i < points; ++i) {
            double v;
            if (i == 0)
                v = from;
            else if (i == points - 1)
                v = to;
            else if (scale == SweepScale::log)
                v = std::pow(10.0, std::log10(from) + (std::log10(to) - std::log10(from)) * (i / n));
            else
                v = from + (to - from) * (i / n);
            s.values.push_back(v);
        }
        return s;
    }

    static SweepSpec list(std::string param, std::vector<double> values)
    {
        if (values.empty())
            throw InvalidArgument("a sweep needs at least one value");
        return {std::move(param), std::move(values), SweepScale::linear};
    }
};

struct SweepRow
{
    double param_value = 0.0;
    std::optional<Report> report;
    std::string error_name; // set when the row failed
    std::string error_message;
    int exit_code = 0;

    friend bool operator==(const SweepRow&, const SweepRow&) = default;
};

struct SweepTable
{
    std::string param_name;
    SweepScale scale = SweepScale::linear;
    std::vector<SweepRow> rows;

    friend bool operator==(const SweepTable&, const SweepTable&) = default;
};

/// Copy of the canonical scenario document with the number at a dotted path
/// ("oscillation.r_max_m", "paths.1.h_m", "particle.omega_rad_per_s.2") set.
inline nlohmann::json with_parameter(const nlohmann::json& doc, const std::string& path, double value)
{
    nlohmann::json out = doc;
    nlohmann::json* node = &out;
    std::size_t start = 0;
    while (true) {
        const std::size_t dot = path.find('.', start);
        const std::string key = path.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
        if (key.empty())
            throw BadParameterPath("'" + path + "': empty path component");
        if (node->is_object()) {
            auto it = node->find(key);
            if (it == node->end())
                throw BadParameterPath("'" + path + "': no field '" + key + "'");
            node = &*it;
        } else if (node->is_array()) {
            if (key.find_first_not_of("0123456789") != std::string::npos)
                throw BadParameterPath("'" + path + "': '" + key + "' is not an array index");
            const std::size_t i = std::stoul(key);
            if (i >= node->size())
                throw BadParameterPath("'" + path + "': index " + key + " out of range");
            node = &(*node)[i];
        } else {
            throw BadParameterPath("'" + path + "': cannot descend into '" + key + "'");
        }
        if (dot == std::string::npos)
            break;
        start = dot + 1;
    }
    if (!node->is_number())
        throw BadParameterPath("'" + path + "' does not name a number");
    if (node->is_number_integer()) {
        if (value != std::floor(value))
            throw BadParameterPath("'" + path + "' is an integer field");
        *node = static_cast<long long>(value);
    } else {
        *node = value;
    }
    return out;
}

/// Run the scenario once per value on `jobs` workers. Rows come back sorted by
/// parameter value whatever order they finished in; a failing row records its
/// error instead of aborting the sweep.
inline SweepTable sweep(const Scenario& base, const SweepSpec& spec, const std::vector<AtomSpecies>& db,
                        int jobs = 1)
{
    const nlohmann::json doc = scenario_to_json(base);
    with_parameter(doc, spec.param, spec.values.empty() ? 0.0 : spec.values.front()); // path check

    std::vector<double> values = spec.values;
    std::stable_sort(values.begin(), values.end());

    SweepTable table{spec.param, spec.scale, std::vector<SweepRow>(values.size())};
    auto run_row = [&](std::size_t i) {
        SweepRow& row = table.rows[i];
        row.param_value = values[i];
        try {
            const Scenario s = parse_scenario_json(with_parameter(doc, spec.param, values[i]));
            row.report = run_scenario(s, db);
        } catch (const Error& e) {
            row.error_name = e.name();
            row.error_message = e.what();
            row.exit_code = e.exit_code();
        }
    };

    const std::size_t workers = std::clamp<std::size_t>(jobs < 1 ? 1 : static_cast<std::size_t>(jobs), 1,
                                                         std::max<std::size_t>(values.size(), 1));
    if (workers == 1) {
        for (std::size_t i = 0; i < values.size(); ++i)
            run_row(i);
        return table;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < values.size(); i = next++)
                run_row(i);
        });
    for (auto& t : pool)
        t.join();
    return table;
}

} // namespace casq::cli
