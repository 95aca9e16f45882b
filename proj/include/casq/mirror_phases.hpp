#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "casq/constants.hpp"
#include "casq/errors.hpp"
#include "casq/phase_result.hpp"
#include "casq/quadrature.hpp"
#include "casq/species.hpp"
#include "casq/trajectories.hpp"

namespace casq::mirror
{

/// Default near-contact cutoff for paths above the mirror.
inline constexpr double default_z_min = 1e-9;

/// One or two interferometer paths above a perfect mirror at z = 0.
///
/// All paths share one bounded time window, taken from the paths themselves.
struct MirrorScenario
{
    AtomSpecies species;
    std::vector<traj::Trajectory1D> paths;
    double z_min = default_z_min;

    MirrorScenario(AtomSpecies s, std::vector<traj::Trajectory1D> p, double zmin = default_z_min)
        : species(std::move(s)), paths(std::move(p)), z_min(zmin)
    {
        if (paths.empty() || paths.size() > 2)
            throw InvalidArgument("mirror scenario needs one or two paths");
        if (!(z_min > 0.0))
            throw InvalidArgument("mirror scenario needs z_min > 0");
        for (const auto& path : paths) {
            if (path.window().improper)
                throw ImproperWindow("mirror phases need a bounded window");
            if (!(path.window() == paths.front().window()))
                throw InvalidArgument("mirror paths must share one time window");
        }
    }

    const traj::TimeWindow& window() const { return paths.front().window(); }
};

inline MirrorScenario reparametrize(const MirrorScenario& s, double lambda)
{
    std::vector<traj::Trajectory1D> p;
    for (const auto& path : s.paths)
        p.push_back(traj::reparametrize(path, lambda));
    return {s.species, std::move(p), s.z_min};
}

inline MirrorScenario reverse(const MirrorScenario& s)
{
    std::vector<traj::Trajectory1D> p;
    for (const auto& path : s.paths)
        p.push_back(traj::reverse(path));
    return {s.species, std::move(p), s.z_min};
}

/// C3 = <d^2> / (48 pi eps0), so that U(z) = -C3 / z^3.
inline double vdw_c3(const AtomSpecies& species)
{
    return mean_square_dipole(species) / (12.0 * constants::four_pi_eps0);
}

/// Nonretarded atom-mirror potential -<d^2> / (48 pi eps0 z^3) in J.
inline double vdw_potential(const AtomSpecies& species, double z)
{
    if (!(z > 0.0))
        throw NonPositiveDistance("vdw_potential needs z > 0");
    return -vdw_c3(species) / (z * z * z);
}

namespace detail
{

inline void check_clearance(const traj::Trajectory1D& path, double z_min)
{
    const double m = path.min_height();
    if (m < z_min) {
        char buf[128];
        std::snprintf(buf, sizeof buf, "path comes within %.6g m of the mirror (cutoff %.6g m)", m,
                      z_min);
        throw CollisionGuard(buf);
    }
}

inline const traj::Trajectory1D& path_at(const MirrorScenario& s, std::size_t index)
{
    if (index >= s.paths.size())
        throw InvalidArgument("path index " + std::to_string(index) + " out of range");
    return s.paths[index];
}

// Window split at the sample times of any sampled path, so that panels never
// straddle a kink.
inline std::vector<double> breakpoints(const MirrorScenario& s)
{
    const auto& w = s.window();
    std::vector<double> pts{w.t_start, w.t_end};
    for (const auto& path : s.paths)
        if (const auto* k = std::get_if<traj::Sampled1D>(&path.kind()))
            for (double t : k->t)
                if (t > w.t_start && t < w.t_end)
                    pts.push_back(t);
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return pts;
}

template<class F>
quad::IntegralResult integrate_split(F&& f, const std::vector<double>& pts,
                                     const quad::QuadratureSpec& spec)
{
    quad::IntegralResult total;
    quad::QuadratureSpec piece = spec;
    if (pts.size() > 2)
        piece.abs_tol = spec.abs_tol / static_cast<double>(pts.size() - 1);
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        quad::IntegralResult r = quad::integrate_adaptive(f, pts[i], pts[i + 1], piece);
        total.value += r.value;
        total.error_estimate += r.error_estimate;
        total.evaluations += r.evaluations;
        total.converged = total.converged && r.converged;
    }
    return total;
}

// Exact slope dz/dt: analytic derivative, or the piecewise-constant slope of
// a sampled path (evaluated only at panel interiors).
inline double slope(const traj::Trajectory1D& path, double t)
{
    if (const auto* k = std::get_if<traj::Sampled1D>(&path.kind())) {
        const std::size_t i = traj::detail::segment_of(k->t, t);
        return (k->z[i + 1] - k->z[i]) / (k->t[i + 1] - k->t[i]);
    }
    return path.velocity(t);
}

// (1/tau) int_0^tau [z^-3 - (z + dz(s))^-3] ds, without forming the difference
// of two nearly equal powers.
inline double coarse_grain_residual_scaled(const traj::Trajectory1D& path, double t,
                                           const quad::QuadratureSpec& spec,
                                           quad::IntegralResult* detail_out = nullptr)
{
    const double z = path.position(t);
    const double tau = traj::light_delay(z);
    auto integrand = [&](double s) {
        const double dz = path.displacement(t, s);
        const double zs = z + dz;
        if (!(zs > 0.0))
            throw CollisionGuard("coarse-graining window reaches the mirror");
        return dz * (3.0 * z * z + 3.0 * z * dz + dz * dz) / (z * z * z * zs * zs * zs);
    };
    quad::QuadratureSpec inner = spec;
    inner.rel_tol = 0.25 * spec.rel_tol;
    quad::IntegralResult r = quad::integrate_adaptive(integrand, 0.0, tau, inner);
    if (detail_out)
        *detail_out = r;
    return r.value / tau;
}

} // namespace detail

/// Quasi-static phase -(1/hbar) int U(z(t)) dt along one path.
inline PhaseResult quasi_static_phase(const MirrorScenario& s, std::size_t path_index,
                                      const quad::QuadratureSpec& spec = {})
{
    const auto& path = detail::path_at(s, path_index);
    detail::check_clearance(path, s.z_min);
    auto inv_cube = [&](double t) {
        const double z = path.position(t);
        return 1.0 / (z * z * z);
    };
    quad::IntegralResult r = detail::integrate_split(inv_cube, detail::breakpoints(s), spec);
    return PhaseResult::from(r, vdw_c3(s.species) / constants::hbar);
}

/// Potential averaged over the delay window [t, t + tau(t)], tau = 2 z(t) / c.
///
/// Analytic paths extrapolate past their window; sampled paths throw
/// OutOfWindow when t + tau leaves the sampled range.
inline double coarse_grained_potential(const AtomSpecies& species, const traj::Trajectory1D& path,
                                       double t, const quad::QuadratureSpec& spec = {})
{
    const double z = path.position(t);
    const double u = vdw_potential(species, z);
    // U(z + dz) - U(z) = C3 [z^-3 - (z + dz)^-3]
    return u + vdw_c3(species) * detail::coarse_grain_residual_scaled(path, t, spec);
}

/// Motional correction -(1/hbar) int (Ubar - U) dt along one path.
///
/// The breakdown also carries the first-order-in-velocity closed form
/// (3 C3 / 2 hbar c)(1/z_end^2 - 1/z_start^2) and the ratio of the two.
inline PhaseResult motional_phase_mirror(const MirrorScenario& s, std::size_t path_index,
                                         const quad::QuadratureSpec& spec = {})
{
    const auto& path = detail::path_at(s, path_index);
    detail::check_clearance(path, s.z_min);

    auto residual = [&](double t) { return detail::coarse_grain_residual_scaled(path, t, spec); };
    quad::IntegralResult r = detail::integrate_split(residual, detail::breakpoints(s), spec);

    const double c3 = vdw_c3(s.species);
    PhaseResult out = PhaseResult::from(r, -c3 / constants::hbar);

    const double zs = path.position(s.window().t_start);
    const double ze = path.position(s.window().t_end);
    const double first_order =
        1.5 * c3 / (constants::hbar * constants::speed_of_light) * (1.0 / (ze * ze) - 1.0 / (zs * zs));
    out.breakdown.emplace_back("first_order", first_order);
    out.breakdown.emplace_back("ratio_to_first_order",
                               first_order != 0.0 ? out.value / first_order : 0.0);
    return out;
}

/// Prefactor 3 w0 alpha(0) / (4 pi eps0 c) of the two-path phase, in m^3.
inline double nonlocal_prefactor(const AtomSpecies& species)
{
    if (!species.is_two_level())
        throw NotTwoLevel("nonlocal phase is defined for a two-level atom; '" + species.name() +
                          "' has " + std::to_string(species.transitions().size()) + " transitions");
    const double w0 = species.transitions().front().omega_eg;
    return 3.0 * w0 * alpha_static(species) / (constants::four_pi_eps0 * constants::speed_of_light);
}

/// Two-path phase K int (dz1/dt - dz2/dt) / (z1 + z2)^3 dt for a two-level atom.
inline PhaseResult nonlocal_phase(const MirrorScenario& s, const quad::QuadratureSpec& spec = {})
{
    if (s.paths.size() != 2)
        throw InvalidArgument("nonlocal phase needs exactly two paths");
    const double k = nonlocal_prefactor(s.species);
    const auto& p1 = s.paths[0];
    const auto& p2 = s.paths[1];
    detail::check_clearance(p1, s.z_min);
    detail::check_clearance(p2, s.z_min);

    auto integrand = [&](double t) {
        const double sum = p1.position(t) + p2.position(t);
        return (detail::slope(p1, t) - detail::slope(p2, t)) / (sum * sum * sum);
    };
    PhaseResult out = PhaseResult::from(detail::integrate_split(integrand, detail::breakpoints(s), spec), k);

    const auto& v1 = p1.parallel_velocity();
    const auto& v2 = p2.parallel_velocity();
    if (v1 && v2 && *v1 != *v2)
        out.warnings.emplace_back(
            "paths declare different velocities parallel to the mirror; the two-path formula assumes equal ones");
    return out;
}

/// Interferometer phase phi1 - phi2 + phi12, each local phase being the
/// quasi-static part plus its motional correction.
inline PhaseResult total_phase_difference(const MirrorScenario& s,
                                          const quad::QuadratureSpec& spec = {})
{
    if (s.paths.size() != 2)
        throw InvalidArgument("total phase difference needs exactly two paths");

    const PhaseResult qs1 = quasi_static_phase(s, 0, spec);
    const PhaseResult qs2 = quasi_static_phase(s, 1, spec);
    const PhaseResult mot1 = motional_phase_mirror(s, 0, spec);
    const PhaseResult mot2 = motional_phase_mirror(s, 1, spec);
    const PhaseResult nl = nonlocal_phase(s, spec);

    PhaseResult out;
    out.value = ((qs1.value + mot1.value) - (qs2.value + mot2.value)) + nl.value;
    out.error_estimate = qs1.error_estimate + qs2.error_estimate + mot1.error_estimate +
                         mot2.error_estimate + nl.error_estimate;
    out.converged = qs1.converged && qs2.converged && mot1.converged && mot2.converged && nl.converged;
    out.breakdown = {{"phi1_qs", qs1.value},
                     {"phi2_qs", qs2.value},
                     {"phi1_mot", mot1.value},
                     {"phi2_mot", mot2.value},
                     {"phi12", nl.value}};
    out.warnings = nl.warnings;
    return out;
}

} // namespace casq::mirror
