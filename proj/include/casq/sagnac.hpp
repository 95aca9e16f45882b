#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include "casq/constants.hpp"
#include "casq/errors.hpp"
#include "casq/line_integral.hpp"
#include "casq/phase_result.hpp"
#include "casq/species.hpp"
#include "casq/trajectories.hpp"
#include "casq/vec3.hpp"

namespace casq::sagnac
{

/// Small polarizable sphere at the origin spinning with angular velocity
/// `rotation`. Its rest response is a single Lorentz resonance.
struct SpinningParticle
{
    double alpha0 = 0.0;  ///< static polarizability, F m^2
    double omega_s = 0.0; ///< resonance, rad/s
    double gamma = 0.0;   ///< damping, rad/s
    Vec3 rotation;        ///< angular velocity Omega, rad/s
    double radius = 0.0;  ///< m; doubles as the collision guard

    void validate() const
    {
        if (!(alpha0 > 0.0))
            throw InvalidArgument("particle alpha0 must be positive");
        if (!(omega_s > 0.0))
            throw InvalidArgument("particle omega_s must be positive");
        if (!(gamma >= 0.0))
            throw InvalidArgument("particle gamma must be non-negative");
        if (!(radius >= 0.0))
            throw InvalidArgument("particle radius must be non-negative");
    }

    friend bool operator==(const SpinningParticle&, const SpinningParticle&) = default;
};

inline constexpr double pole_guard = 1e-6;

namespace detail
{

inline void check_pole(const SpinningParticle& p, double omega)
{
    if (p.gamma == 0.0 && std::abs(omega - p.omega_s) < pole_guard * p.omega_s)
        throw PoleProximity("undamped particle response evaluated at its resonance");
}

} // namespace detail

/// Rest polarizability alpha0 ws^2 / (ws^2 - w^2 - i gamma w).
inline std::complex<double> alpha_s(const SpinningParticle& p, double omega)
{
    p.validate();
    if (!(omega >= 0.0))
        throw InvalidArgument("alpha_s needs omega >= 0");
    detail::check_pole(p, omega);
    const std::complex<double> denom((p.omega_s - omega) * (p.omega_s + omega), -p.gamma * omega);
    return p.alpha0 * p.omega_s * p.omega_s / denom;
}

/// Re d^2 alpha_s / d omega^2.
///
/// With D = ws^2 - w^2 - i gamma w, alpha'' = A (2 D'^2 - D D'') / D^3
/// where A = alpha0 ws^2, D' = -2w - i gamma, D'' = -2.
inline double re_alpha_second(const SpinningParticle& p, double omega)
{
    p.validate();
    if (!(omega >= 0.0))
        throw InvalidArgument("re_alpha_second needs omega >= 0");
    detail::check_pole(p, omega);
    const std::complex<double> d((p.omega_s - omega) * (p.omega_s + omega), -p.gamma * omega);
    const std::complex<double> d1(-2.0 * omega, -p.gamma);
    const double a = p.alpha0 * p.omega_s * p.omega_s;
    const std::complex<double> second = a * (2.0 * d1 * d1 + 2.0 * d) / (d * d * d);
    return second.real();
}

/// Transition-weighted sum  sum_e 3 |d_eg|^2 Re alpha_s''(w_eg) / ((4 pi eps0)^2 hbar).
inline double phase_prefactor(const AtomSpecies& species, const SpinningParticle& p)
{
    double s = 0.0;
    for (const auto& t : species.transitions())
        s += t.d2 * re_alpha_second(p, t.omega_eg);
    return 3.0 * s / (constants::four_pi_eps0 * constants::four_pi_eps0 * constants::hbar);
}

/// l_Omega^6 = sum_e |d_eg|^2 Re alpha_s''(w_eg) |Omega| / ((4 pi eps0)^2 hbar), signed.
inline double ell_omega_sixth(const AtomSpecies& species, const SpinningParticle& p)
{
    return phase_prefactor(species, p) / 3.0 * norm(p.rotation);
}

/// Characteristic length l_Omega (m). Throws NegativeRadicand when the
/// transition-weighted sum of Re alpha_s'' is negative.
inline double ell_omega(const AtomSpecies& species, const SpinningParticle& p)
{
    const double l6 = ell_omega_sixth(species, p);
    if (l6 < 0.0) {
        char buf[128];
        std::snprintf(buf, sizeof buf, "l_Omega^6 = %.6g m^6 is negative", l6);
        throw NegativeRadicand(buf);
    }
    return std::pow(l6, 1.0 / 6.0);
}

/// The vector potential (Omega x r) / r^8 whose circulation gives the phase.
inline Vec3 sagnac_field(const Vec3& rotation, const Vec3& r)
{
    const double r2 = dot(r, r);
    const double r8 = (r2 * r2) * (r2 * r2);
    return cross(rotation, r) * (1.0 / r8);
}

/// Local quantum Sagnac phase
///   phi = sum_e [3 |d_eg|^2 Re alpha_s''(w_eg) / ((4 pi eps0)^2 hbar)] int dr . (Omega x r) / r^8.
///
/// Sign convention: the literal line integral. For Omega along +z and a
/// straight path along +x at y > 0 this is negative; the closed form in
/// sagnac_phase_straightline matches it for travel along -x.
inline PhaseResult sagnac_phase(const AtomSpecies& species, const SpinningParticle& p,
                                const traj::Trajectory3D& path, const quad::QuadratureSpec& spec = {})
{
    p.validate();
    const double prefactor = phase_prefactor(species, p);
    const Vec3 omega = p.rotation;
    auto field = [omega](const Vec3& r) { return sagnac_field(omega, r); };
    quad::IntegralResult r = quad::line_integral(field, path, spec, p.radius);

    PhaseResult out = PhaseResult::from(r, prefactor);
    out.breakdown.emplace_back("line_integral", r.value);
    out.breakdown.emplace_back("prefactor", prefactor);

    const double closest = path.min_distance();
    const double retardation = species.lowest_transition() * closest / constants::speed_of_light;
    if (retardation > 0.1) {
        char buf[160];
        std::snprintf(buf, sizeof buf,
                      "near-field condition violated: w_eg d / c = %.3g > 0.1 at closest approach %.3g m",
                      retardation, closest);
        out.warnings.emplace_back(buf);
    }
    return out;
}

/// (15 pi / 16) (l_Omega / y)^6 sgn(y) for a straight path at impact parameter y
/// in the plane perpendicular to Omega.
inline double sagnac_phase_straightline(const AtomSpecies& species, const SpinningParticle& p, double y)
{
    if (y == 0.0 || !std::isfinite(y))
        throw ZeroImpactParameter("straight-line phase needs y != 0");
    const double l = ell_omega(species, p);
    const double ratio = l / std::abs(y);
    const double r3 = ratio * ratio * ratio;
    return 15.0 * std::numbers::pi / 16.0 * (r3 * r3) * (y > 0.0 ? 1.0 : -1.0);
}

/// Interferometer total for paths at y1 and -y1 around the particle, two-level atom:
/// (21 pi / 16) (l/y1)^6, of which (30 pi / 16) (l/y1)^6 is the local difference
/// phi1 - phi2 and -(9 pi / 16) (l/y1)^6 the two-path part.
inline PhaseResult sagnac_total_symmetric(const AtomSpecies& species, const SpinningParticle& p, double y1)
{
    if (!species.is_two_level())
        throw NotTwoLevel("symmetric Sagnac total is defined for a two-level atom");
    if (!(y1 > 0.0) || !std::isfinite(y1))
        throw InvalidArgument("symmetric Sagnac total needs y1 > 0");
    const double l = ell_omega(species, p);
    const double ratio = l / y1;
    const double r3 = ratio * ratio * ratio;
    const double x = r3 * r3;
    constexpr double pi16 = std::numbers::pi / 16.0;

    PhaseResult out;
    out.value = 21.0 * pi16 * x;
    out.breakdown = {{"local_difference", 30.0 * pi16 * x}, {"nonlocal", -9.0 * pi16 * x}};
    return out;
}

} // namespace casq::sagnac
