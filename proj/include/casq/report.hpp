#pragma once

#include <chrono>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "casq/constants.hpp"
#include "casq/dce.hpp"
#include "casq/errors.hpp"
#include "casq/mirror_phases.hpp"
#include "casq/sagnac.hpp"
#include "casq/scenario.hpp"
#include "casq/species.hpp"
#include "casq/trajectories.hpp"

namespace casq::cli
{

/// Result of one scenario run. `operation` names the compute function that
/// produced `value`.
struct Report
{
    std::string scenario_kind;
    std::string species;
    std::string operation;
    std::string unit; // "rad" or "1/s"
    double value = 0.0;
    double error_estimate = 0.0;
    bool converged = true;
    std::vector<std::pair<std::string, double>> breakdown;
    std::vector<std::string> warnings;
    std::vector<std::pair<double, double>> spectrum; // DceNumeric only
    std::string toolkit_version = constants::toolkit_version;
    std::string constants_hash = constants::table_hash();
    std::optional<double> wall_time_s;

    friend bool operator==(const Report&, const Report&) = default;
};

inline traj::TimeWindow to_window(const WindowSpec& w)
{
    return w.improper ? traj::TimeWindow::all_time() : traj::TimeWindow::bounded(w.t_start_s, w.t_end_s);
}

inline traj::Trajectory1D build_path(const PathSpec& p, const WindowSpec& w)
{
    traj::Kind1D kind;
    if (p.kind == "Constant")
        kind = traj::Constant{p.h_m};
    else if (p.kind == "Linear")
        kind = traj::Linear{p.h_m, p.v_m_per_s};
    else if (p.kind == "Harmonic")
        kind = traj::Harmonic{p.h_m, p.amplitude_m, p.omega_rad_per_s, p.phase0_rad};
    else
        kind = traj::Sampled1D{p.t_s, p.z_m};
    return traj::Trajectory1D(std::move(kind), to_window(w), p.parallel_velocity_m_per_s);
}

inline traj::Trajectory3D build_path3d(const Path3DSpec& p, const std::optional<WindowSpec>& w)
{
    if (p.kind == "StraightLine")
        return traj::Trajectory3D(traj::StraightLine{p.r0_m, p.v_m_per_s},
                                  w ? to_window(*w) : traj::TimeWindow::all_time());
    if (p.t_s.empty())
        throw InvalidArgument("sampled path needs at least two samples");
    const traj::TimeWindow win = w ? to_window(*w) : traj::TimeWindow::bounded(p.t_s.front(), p.t_s.back());
    return traj::Trajectory3D(traj::Sampled3D{p.t_s, p.r_m}, win);
}

inline sagnac::SpinningParticle build_particle(const ParticleSpec& p)
{
    sagnac::SpinningParticle out{p.alpha0_F_m2, p.omega_s_rad_per_s, p.gamma_rad_per_s, p.omega_rad_per_s,
                                 p.radius_m};
    out.validate();
    return out;
}

inline dce::OscillationParams build_oscillation(const OscillationSpec& o, const AtomSpecies& species)
{
    dce::OscillationParams p{o.r_max_m, o.omega_cm_rad_per_s,
                             o.alpha0_F_m2 ? *o.alpha0_F_m2 : alpha_static(species), o.direction};
    p.validate();
    return p;
}

namespace detail
{

inline Report from_phase(const PhaseResult& r, std::string operation)
{
    Report out;
    out.operation = std::move(operation);
    out.unit = "rad";
    out.value = r.value;
    out.error_estimate = r.error_estimate;
    out.converged = r.converged;
    out.breakdown = r.breakdown;
    out.warnings = r.warnings;
    return out;
}

inline Report dispatch(const Scenario& s, const AtomSpecies& species)
{
    if (is_mirror(s.kind)) {
        std::vector<traj::Trajectory1D> paths;
        for (const auto& p : s.paths)
            paths.push_back(build_path(p, *s.window));
        const mirror::MirrorScenario ms(species, std::move(paths), s.z_min_m);
        const auto idx = static_cast<std::size_t>(s.path_index);
        switch (s.kind) {
        case ScenarioKind::QuasiStatic:
            return from_phase(mirror::quasi_static_phase(ms, idx, s.quadrature), "mirror::quasi_static_phase");
        case ScenarioKind::MotionalMirror:
            return from_phase(mirror::motional_phase_mirror(ms, idx, s.quadrature),
                              "mirror::motional_phase_mirror");
        case ScenarioKind::Nonlocal:
            return from_phase(mirror::nonlocal_phase(ms, s.quadrature), "mirror::nonlocal_phase");
        default:
            return from_phase(mirror::total_phase_difference(ms, s.quadrature),
                              "mirror::total_phase_difference");
        }
    }
    if (is_sagnac(s.kind)) {
        const sagnac::SpinningParticle particle = build_particle(*s.particle);
        if (s.kind == ScenarioKind::Sagnac)
            return from_phase(sagnac::sagnac_phase(species, particle, build_path3d(*s.path3d, s.window),
                                                   s.quadrature),
                              "sagnac::sagnac_phase");
        if (s.kind == ScenarioKind::SagnacStraightLine) {
            PhaseResult r;
            r.value = sagnac::sagnac_phase_straightline(species, particle, s.y_m);
            r.breakdown = {{"ell_omega_m", sagnac::ell_omega(species, particle)}};
            return from_phase(r, "sagnac::sagnac_phase_straightline");
        }
        return from_phase(sagnac::sagnac_total_symmetric(species, particle, s.y1_m),
                          "sagnac::sagnac_total_symmetric");
    }

    const dce::OscillationParams p = build_oscillation(*s.oscillation, species);
    Report out;
    out.unit = "1/s";
    out.breakdown = {{"v_max_m_per_s", p.v_max()}, {"atomic_radius_m", p.atomic_radius()}};
    if (s.kind == ScenarioKind::DceClosed) {
        out.operation = "dce::dce_rate_closed";
        out.value = dce::dce_rate_closed(p);
        out.breakdown.emplace_back("coefficient", dce::closed_form_coefficient);
        return out;
    }
    dce::NumericOptions opt;
    opt.spec = s.quadrature;
    opt.angular_order = s.oscillation->angular_order;
    opt.spectrum_points = s.oscillation->spectrum_points;
    const dce::EmissionResult r = dce::dce_rate_numeric(p, opt);
    out.operation = "dce::dce_rate_numeric";
    out.value = r.gamma_total;
    out.error_estimate = r.error_estimate;
    out.converged = r.converged;
    out.breakdown.emplace_back("gamma_pairs", r.gamma_pairs);
    out.breakdown.emplace_back("coefficient", r.coefficient);
    out.spectrum = r.spectrum;
    return out;
}

} // namespace detail

/// Species database a scenario should use: explicit override, else the
/// scenario's species_db (relative to the scenario file), else the default.
inline std::string resolve_species_db(const Scenario& s, const std::string& scenario_path,
                                      const std::string& override_path = {})
{
    if (!override_path.empty())
        return override_path;
    if (s.species_db) {
        std::filesystem::path p(*s.species_db);
        if (p.is_relative() && !scenario_path.empty())
            p = std::filesystem::path(scenario_path).parent_path() / p;
        return p.string();
    }
    return default_species_db_path();
}

/// Run one scenario against a loaded species list.
inline Report run_scenario(const Scenario& s, const std::vector<AtomSpecies>& db, bool timing = false)
{
    const auto t0 = std::chrono::steady_clock::now();
    const AtomSpecies& species = find_species(db, s.species);
    Report out = detail::dispatch(s, species);
    out.scenario_kind = to_string(s.kind);
    out.species = s.species;
    if (timing)
        out.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return out;
}

} // namespace casq::cli
