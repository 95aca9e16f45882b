#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <utility>
#include <vector>

#include "casq/constants.hpp"
#include "casq/errors.hpp"
#include "casq/quadrature.hpp"
#include "casq/species.hpp"
#include "casq/vec3.hpp"

// Photon pairs emitted by a ground-state atom oscillating as
// r(t) = r_max cos(omega_cm t) n in free space.
//
// The pair amplitude is the first-order matrix element of
//   H = -(alpha(0)/2) (E + v x B) . (E + v x B)
// between vacuum and |1_{k1 l1} 1_{k2 l2}>, kept to first order in r_max:
// the E.E term through the phase exp(-i K.r(t)), K = k1 + k2, and the
// E.(v x B) cross term through v(t). Picking the exp(-i omega_cm t) component
// (rotating wave) gives
//   M = -i alpha0 hbar sqrt(w1 w2) / (2 eps0) (r_max / 2) e1 . T . e2,
//   T = [K.n - (omega_cm/c)(n.k1^ + n.k2^)] 1 + (omega_cm/c)(k2^ n^T + n k1^^T),
// in continuum normalization (modes d^3k / (2 pi)^3 per polarization).
// The golden rule on the shell w1 + w2 = omega_cm then gives the pair rate,
// and every pair carries two photons.

namespace casq::dce
{

struct OscillationParams
{
    double r_max = 0.0;    ///< amplitude, m (0 means no motion)
    double omega_cm = 0.0; ///< rad/s
    double alpha0 = 0.0;   ///< static polarizability, F m^2
    Vec3 direction{0.0, 0.0, 1.0};

    void validate() const
    {
        if (!(r_max >= 0.0) || !std::isfinite(r_max))
            throw InvalidArgument("oscillation amplitude must be non-negative");
        if (!(omega_cm > 0.0) || !std::isfinite(omega_cm))
            throw InvalidArgument("oscillation frequency must be positive");
        if (!(alpha0 > 0.0) || !std::isfinite(alpha0))
            throw InvalidArgument("static polarizability must be positive");
        if (!(norm(direction) > 0.0))
            throw InvalidArgument("oscillation direction must be non-zero");
    }

    double v_max() const { return omega_cm * r_max; }
    double atomic_radius() const { return equivalent_radius(alpha0); }
    Vec3 unit_direction() const { return normalized(direction); }
};

/// 23 / (5670 pi)
inline constexpr double closed_form_coefficient = 23.0 / (5670.0 * std::numbers::pi);

/// (a / r_max)^6 (v_max / c)^8 omega_cm, the rate scale that the coefficient multiplies.
inline double rate_scale(const OscillationParams& p)
{
    p.validate();
    if (p.r_max == 0.0)
        return 0.0;
    const double log_scale = 6.0 * std::log(p.atomic_radius() / p.r_max) +
                             8.0 * std::log(p.v_max() / constants::speed_of_light) + std::log(p.omega_cm);
    return std::exp(log_scale);
}

/// Total photon emission rate (23 / 5670 pi)(a/r_max)^6 (v_max/c)^8 omega_cm, in 1/s.
inline double dce_rate_closed(const OscillationParams& p)
{
    p.validate();
    if (p.r_max == 0.0)
        return 0.0;
    const double log_rate = std::log(closed_form_coefficient) +
                            6.0 * std::log(p.atomic_radius() / p.r_max) +
                            8.0 * std::log(p.v_max() / constants::speed_of_light) + std::log(p.omega_cm);
    return std::exp(log_rate);
}

struct PhotonMode
{
    Vec3 k;               ///< wave vector, 1/m
    int polarization = 0; ///< 0 or 1, see polarization_vector
};

/// Real transverse basis vector for mode polarization 0 or 1; the pair
/// (e0, e1, k^) is right-handed.
inline Vec3 polarization_vector(const Vec3& k, int polarization)
{
    const Vec3 kh = normalized(k);
    const double ax = std::abs(kh.x);
    const double ay = std::abs(kh.y);
    const double az = std::abs(kh.z);
    const Vec3 axis = (ax <= ay && ax <= az) ? Vec3{1, 0, 0} : (ay <= az ? Vec3{0, 1, 0} : Vec3{0, 0, 1});
    const Vec3 e0 = normalized(cross(kh, axis));
    if (polarization == 0)
        return e0;
    if (polarization == 1)
        return cross(kh, e0);
    throw InvalidArgument("polarization index must be 0 or 1");
}

/// Coupling tensor T (1/m) with pair amplitude proportional to e1 . T . e2.
inline Mat3 pair_coupling_tensor(const OscillationParams& p, const Vec3& k1, const Vec3& k2)
{
    const Vec3 n = p.unit_direction();
    const Vec3 k1h = normalized(k1);
    const Vec3 k2h = normalized(k2);
    const double kv = p.omega_cm / constants::speed_of_light;
    Mat3 t = outer(k2h, n) + outer(n, k1h);
    for (double& x : t.m)
        x *= kv;
    const double diag = dot(k1 + k2, n) - kv * (dot(n, k1h) + dot(n, k2h));
    for (int i = 0; i < 3; ++i)
        t(i, i) += diag;
    return t;
}

/// Magnitude alpha0 hbar sqrt(w1 w2) / (2 eps0) (r_max / 2) multiplying e1 . T . e2.
inline double amplitude_scale(const OscillationParams& p, double omega1, double omega2)
{
    return p.alpha0 * constants::hbar * std::sqrt(omega1 * omega2) / (2.0 * constants::epsilon0) *
           (0.5 * p.r_max);
}

/// Polarization-summed |e1 . T . e2|^2 = Tr(P1 T P2 T^T) with transverse projectors.
inline double polarization_sum(const Mat3& t, const Vec3& k1, const Vec3& k2)
{
    const Mat3 p1 = transverse_projector(normalized(k1));
    const Mat3 p2 = transverse_projector(normalized(k2));
    return trace(p1 * t * p2 * transpose(t));
}

/// Relative tolerance on c(|k1| + |k2|) = omega_cm for standalone amplitudes.
inline constexpr double default_shell_tolerance = 1e-9;

/// First-order amplitude <1_{k1 l1} 1_{k2 l2}| H |0> at the pair resonance,
/// in J m^3 (continuum normalization).
///
/// Throws RWAViolation when the pair is off the energy shell by more than
/// `shell_tol` relative.
inline std::complex<double> pair_emission_amplitude(const OscillationParams& p, const PhotonMode& photon1,
                                                    const PhotonMode& photon2,
                                                    double shell_tol = default_shell_tolerance)
{
    p.validate();
    const double w1 = constants::speed_of_light * norm(photon1.k);
    const double w2 = constants::speed_of_light * norm(photon2.k);
    if (!(w1 > 0.0) || !(w2 > 0.0))
        throw InvalidArgument("photon wave vectors must be non-zero");
    if (std::abs(w1 + w2 - p.omega_cm) > shell_tol * p.omega_cm)
        throw RWAViolation("photon pair is off the energy shell w1 + w2 = omega_cm");

    const Vec3 e1 = polarization_vector(photon1.k, photon1.polarization);
    const Vec3 e2 = polarization_vector(photon2.k, photon2.polarization);
    const double q = dot(e1, pair_coupling_tensor(p, photon1.k, photon2.k) * e2);
    return {0.0, -amplitude_scale(p, w1, w2) * q};
}

enum class AngularMethod
{
    product_rule,     ///< exact spherical product rule for both photon directions
    reduced_iterated, ///< direction-averaged, one relative angle, integrate_iterated
};

struct NumericOptions
{
    quad::QuadratureSpec spec{1e-10, 1e-300, 2000};
    AngularMethod method = AngularMethod::product_rule;
    int angular_order = 6; ///< Gauss-Legendre nodes in cos(theta); 2x that in phi
    int spectrum_points = 33;
};

struct EmissionResult
{
    double gamma_total = 0.0; ///< photons per second (two per pair)
    double gamma_pairs = 0.0; ///< pairs per second
    double coefficient = 0.0; ///< gamma_total / ((a/r)^6 (v/c)^8 omega_cm)
    /// Photon spectral density dGamma/domega (photons s^-1 per rad/s) at
    /// interior frequencies; integrates to gamma_total over (0, omega_cm).
    std::vector<std::pair<double, double>> spectrum;
    double error_estimate = 0.0;
    bool converged = true;
};

namespace detail
{

struct SphereRule
{
    std::vector<Vec3> nodes;
    std::vector<double> weights;
};

// Gauss-Legendre in cos(theta) times the trapezoid rule in phi; exact for
// spherical polynomials of degree < 2 * order.
inline SphereRule sphere_rule(int order)
{
    if (order < 3)
        throw InvalidArgument("angular order must be at least 3");
    auto [x, w] = quad::gauss_legendre(order);
    const int nphi = 2 * order;
    SphereRule r;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double st = std::sqrt(1.0 - x[i] * x[i]);
        for (int j = 0; j < nphi; ++j) {
            const double phi = 2.0 * std::numbers::pi * (j + 0.5) / nphi;
            r.nodes.push_back({st * std::cos(phi), st * std::sin(phi), x[i]});
            r.weights.push_back(w[i] * 2.0 * std::numbers::pi / nphi);
        }
    }
    return r;
}

// Golden-rule photon spectral density once the angular integral of
// sum_pol |e1.T.e2|^2 (1/m^2) is known:
//   S(w1) = (2 pi / hbar^2) (2 pi)^-6 (w1^2 w2^2 / c^6) scale^2 * angular
inline double spectral_density(const OscillationParams& p, double w1, double angular)
{
    const double w2 = p.omega_cm - w1;
    const double c3 = constants::speed_of_light * constants::speed_of_light * constants::speed_of_light;
    const double scale = amplitude_scale(p, w1, w2);
    const double two_pi = 2.0 * std::numbers::pi;
    const double measure = (w1 * w1 / c3) * (w2 * w2 / c3) / std::pow(two_pi, 6);
    return two_pi / (constants::hbar * constants::hbar) * measure * scale * scale * angular;
}

inline double angular_product(const OscillationParams& p, const SphereRule& rule, double w1)
{
    const double w2 = p.omega_cm - w1;
    const double c = constants::speed_of_light;
    double total = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        const Vec3 k1 = rule.nodes[i] * (w1 / c);
        double inner = 0.0;
        for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
            const Vec3 k2 = rule.nodes[j] * (w2 / c);
            inner += rule.weights[j] * polarization_sum(pair_coupling_tensor(p, k1, k2), k1, k2);
        }
        total += rule.weights[i] * inner;
    }
    return total;
}

// Average over oscillation directions with k1 on the pole; the remaining
// dependence is on the relative angle only:
//   int dO1 dO2 f = (4 pi)(2 pi) int d(cos th) (1/3) sum_a f(n = e_a).
inline double angular_reduced_integrand(const OscillationParams& p, double w1, double cos12)
{
    const double w2 = p.omega_cm - w1;
    const double c = constants::speed_of_light;
    const double s12 = std::sqrt(std::max(0.0, 1.0 - cos12 * cos12));
    const Vec3 k1 = Vec3{0, 0, 1} * (w1 / c);
    const Vec3 k2 = Vec3{s12, 0, cos12} * (w2 / c);
    double f = 0.0;
    for (const Vec3 axis : {Vec3{1, 0, 0}, Vec3{0, 1, 0}, Vec3{0, 0, 1}}) {
        OscillationParams q = p;
        q.direction = axis;
        f += polarization_sum(pair_coupling_tensor(q, k1, k2), k1, k2);
    }
    return 8.0 * std::numbers::pi * std::numbers::pi * f / 3.0;
}

} // namespace detail

/// Photon spectral density at w1 in (0, omega_cm) with the exact product rule.
inline double spectral_density(const OscillationParams& p, double omega, int angular_order = 6)
{
    p.validate();
    if (!(omega > 0.0) || !(omega < p.omega_cm))
        return 0.0;
    const detail::SphereRule rule = detail::sphere_rule(angular_order);
    return detail::spectral_density(p, omega, detail::angular_product(p, rule, omega));
}

/// Golden-rule pair emission rate by integration over final two-photon states.
///
/// Photon directions are integrated either with an exact spherical product
/// rule for the given oscillation direction or, as an independent route,
/// reduced to one relative angle after averaging over directions; photon
/// frequency w1 in (0, omega_cm) adaptively with w2 = omega_cm - w1 fixed by
/// the energy shell. Unordered pairs are counted once (factor 1/2), and
/// gamma_total counts two photons per pair.
inline EmissionResult dce_rate_numeric(const OscillationParams& p, const NumericOptions& opt = {})
{
    p.validate();
    EmissionResult out;
    if (p.r_max == 0.0) {
        for (int i = 1; i <= opt.spectrum_points; ++i)
            out.spectrum.emplace_back(p.omega_cm * i / (opt.spectrum_points + 1.0), 0.0);
        return out;
    }

    quad::IntegralResult r;
    if (opt.method == AngularMethod::product_rule) {
        const detail::SphereRule rule = detail::sphere_rule(opt.angular_order);
        auto density = [&](double w1) {
            return detail::spectral_density(p, w1, detail::angular_product(p, rule, w1));
        };
        r = quad::integrate_adaptive(density, 0.0, p.omega_cm, opt.spec);
        for (int i = 1; i <= opt.spectrum_points; ++i) {
            const double w = p.omega_cm * i / (opt.spectrum_points + 1.0);
            out.spectrum.emplace_back(w, density(w));
        }
    } else {
        auto f = [&](std::span<const double> x) {
            return detail::spectral_density(p, x[0], detail::angular_reduced_integrand(p, x[0], x[1]));
        };
        r = quad::integrate_iterated(f, {quad::fixed_bounds(0.0, p.omega_cm), quad::fixed_bounds(-1.0, 1.0)},
                                     opt.spec);
        for (int i = 1; i <= opt.spectrum_points; ++i) {
            const double w = p.omega_cm * i / (opt.spectrum_points + 1.0);
            auto g = [&](double c) {
                return detail::spectral_density(p, w, detail::angular_reduced_integrand(p, w, c));
            };
            out.spectrum.emplace_back(w, quad::integrate_adaptive(g, -1.0, 1.0, opt.spec).value);
        }
    }

    out.gamma_total = r.value;
    out.gamma_pairs = 0.5 * r.value;
    out.error_estimate = r.error_estimate;
    out.converged = r.converged;
    out.coefficient = out.gamma_total / rate_scale(p);
    return out;
}

} // namespace casq::dce
