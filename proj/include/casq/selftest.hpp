#pragma once

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "casq/dce.hpp"
#include "casq/mirror_phases.hpp"
#include "casq/quadrature.hpp"
#include "casq/sagnac.hpp"
#include "casq/species.hpp"
#include "casq/trajectories.hpp"

// Acceptance checks 1-8, runnable from the command line.

namespace casq::selftest
{

struct CriterionResult
{
    int id = 0;
    std::string title;
    bool passed = false;
    std::string detail;
};

namespace detail
{

inline std::string format(const char* fmt, auto... args)
{
    char buf[512];
    std::snprintf(buf, sizeof buf, fmt, args...);
    return buf;
}

inline double rel_diff(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

// Rb-like two-level atom: D2 line with its reduced dipole.
inline AtomSpecies reference_atom()
{
    const double ea0 = constants::elementary_charge * constants::bohr_radius;
    return AtomSpecies::two_level("reference", 2.0 * constants::pi * 384.2304844685e12,
                                  (4.227 * ea0) * (4.227 * ea0));
}

inline double elapsed(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Least-squares slope of log|y| against log x.
inline double loglog_slope(const std::vector<double>& x, const std::vector<double>& y)
{
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double lx = std::log(x[i]), ly = std::log(std::abs(y[i]));
        sx += lx, sy += ly, sxx += lx * lx, sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

} // namespace detail

/// 1. Numeric straight-line Sagnac phase against (15 pi / 16)(l / y)^6.
inline CriterionResult straight_line_sagnac(int tuples = 12)
{
    using namespace detail;
    CriterionResult out{1, "straight-line Sagnac phase vs closed form", false, {}};
    std::mt19937_64 rng(20240611);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    auto log_uniform = [&](double lo, double hi) { return lo * std::pow(hi / lo, u(rng)); };

    double worst = 0.0, slowest = 0.0;
    out.passed = true;
    for (int i = 0; i < tuples; ++i) {
        const double w0 = log_uniform(1e15, 5e15);
        const AtomSpecies atom = AtomSpecies::two_level_from_alpha(
            "tuple", w0, constants::four_pi_eps0 * log_uniform(1e-30, 1e-29));
        sagnac::SpinningParticle p;
        p.alpha0 = constants::four_pi_eps0 * log_uniform(1e-27, 1e-24);
        p.omega_s = w0 * log_uniform(1.5, 20.0);
        p.gamma = p.omega_s * 0.01 * u(rng);
        const double spin = log_uniform(1e2, 1e7);
        const double y = log_uniform(5e-9, 5e-7) * (u(rng) < 0.5 ? -1.0 : 1.0);
        const double speed = log_uniform(0.1, 1e3);

        // Path along -x at impact parameter y about +z, then rigidly rotated.
        const Vec3 axis = normalized(Vec3{u(rng) - 0.5, u(rng) - 0.5, u(rng) - 0.5});
        const Mat3 rot = Mat3::rotation(axis, 2.0 * constants::pi * u(rng));
        p.rotation = rot * Vec3{0.0, 0.0, spin};
        p.radius = 1e-10;
        const traj::Trajectory3D path = traj::rotate(
            traj::Trajectory3D::straight_line({0.0, y, 0.0}, {-speed, 0.0, 0.0}), rot);

        const auto t0 = std::chrono::steady_clock::now();
        const PhaseResult numeric = sagnac::sagnac_phase(atom, p, path);
        const double dt = elapsed(t0);
        const double closed = sagnac::sagnac_phase_straightline(atom, p, y);
        const double err = rel_diff(numeric.value, closed);
        worst = std::max(worst, err);
        slowest = std::max(slowest, dt);
        if (!(err <= 1e-6) || !(dt < 1.0) || !numeric.converged)
            out.passed = false;
    }
    out.detail = format("%d tuples, worst relative error %.3g, slowest %.3g s", tuples, worst, slowest);
    return out;
}

struct BenchmarkIntegral
{
    std::string name;
    std::function<double(double)> f;
    double a, b; // a == b means the whole real line
    double exact;
};

inline std::vector<BenchmarkIntegral> benchmark_set()
{
    const double pi = std::numbers::pi;
    return {
        {"x^5 on [0,1]", [](double x) { return x * x * x * x * x; }, 0, 1, 1.0 / 6.0},
        {"exp on [0,1]", [](double x) { return std::exp(x); }, 0, 1, std::numbers::e - 1.0},
        {"sin on [0,pi]", [](double x) { return std::sin(x); }, 0, pi, 2.0},
        {"1/(1+x^2) on [0,1]", [](double x) { return 1.0 / (1.0 + x * x); }, 0, 1, pi / 4.0},
        {"sqrt on [0,1]", [](double x) { return std::sqrt(x); }, 0, 1, 2.0 / 3.0},
        {"log on [0,1]", [](double x) { return std::log(x); }, 0, 1, -1.0},
        {"x^-1/2 on [0,1]", [](double x) { return 1.0 / std::sqrt(x); }, 0, 1, 2.0},
        {"cos^2 on [0,2pi]", [](double x) { return std::cos(x) * std::cos(x); }, 0, 2 * pi, pi},
        {"1/(x+0.01) on [0,1]", [](double x) { return 1.0 / (x + 0.01); }, 0, 1, std::log(101.0)},
        {"|x| on [-1,1]", [](double x) { return std::abs(x); }, -1, 1, 1.0},
        {"exp(-x) on [0,10]", [](double x) { return std::exp(-x); }, 0, 10, 1.0 - std::exp(-10.0)},
        {"x^1.5 on [0,1]", [](double x) { return x * std::sqrt(x); }, 0, 1, 0.4},
        {"runge on [-1,1]", [](double x) { return 1.0 / (1.0 + 25.0 * x * x); }, -1, 1, 0.4 * std::atan(5.0)},
        {"x sin x on [0,pi]", [](double x) { return x * std::sin(x); }, 0, pi, pi},
        {"cos 20x on [0,1]", [](double x) { return std::cos(20.0 * x); }, 0, 1, std::sin(20.0) / 20.0},
        {"gaussian on R", [](double x) { return std::exp(-x * x); }, 0, 0, std::sqrt(pi)},
        {"lorentzian on R", [](double x) { return 1.0 / (1.0 + x * x); }, 0, 0, pi},
        {"(1+u^2)^-4 on R", [](double x) { const double q = 1.0 + x * x; return 1.0 / (q * q * q * q); }, 0, 0,
         5.0 * pi / 16.0},
        {"1/(1+u^4) on R", [](double x) { return 1.0 / (1.0 + x * x * x * x); }, 0, 0, pi / std::sqrt(2.0)},
        {"sech on R", [](double x) { return 1.0 / std::cosh(x); }, 0, 0, pi},
    };
}

/// 2. Improper-integral oracle and error-estimate soundness on the benchmark set.
inline CriterionResult quadrature_oracle()
{
    using namespace detail;
    CriterionResult out{2, "quadrature oracle and error-estimate soundness", false, {}};
    const quad::IntegralResult r = quad::integrate_improper(
        [](double x) { const double q = 1.0 + x * x; return 1.0 / (q * q * q * q); }, {});
    const double err = std::abs(r.value - 5.0 * std::numbers::pi / 16.0);

    int sound = 0;
    const auto set = benchmark_set();
    std::string failures;
    for (const auto& b : set) {
        const quad::IntegralResult q =
            b.a == b.b ? quad::integrate_improper(b.f, {}) : quad::integrate_adaptive(b.f, b.a, b.b, {});
        const double true_err = std::abs(q.value - b.exact);
        if (true_err <= 10.0 * q.error_estimate)
            ++sound;
        else
            failures += " [" + b.name + "]";
    }
    const double fraction = static_cast<double>(sound) / static_cast<double>(set.size());
    out.passed = err <= 1e-10 && fraction >= 0.95;
    out.detail = format("|I - 5pi/16| = %.3g; sound estimates %d/%zu", err, sound, set.size()) + failures;
    return out;
}

/// 3. Symmetric two-path Sagnac total over the local difference.
inline CriterionResult symmetric_sagnac()
{
    using namespace detail;
    CriterionResult out{3, "symmetric two-path Sagnac ratio 0.7", false, {}};
    const AtomSpecies atom = reference_atom();
    sagnac::SpinningParticle p{constants::four_pi_eps0 * 1e-24, 1e16, 1e13, {0.0, 0.0, 1e5}, 1e-9};
    double worst_ratio = 0.0, worst_nl = 0.0;
    for (double y1 : {2e-8, 5e-8, 1e-7}) {
        const PhaseResult total = sagnac::sagnac_total_symmetric(atom, p, y1);
        const double local = sagnac::sagnac_phase_straightline(atom, p, y1) -
                             sagnac::sagnac_phase_straightline(atom, p, -y1);
        const double x = std::pow(sagnac::ell_omega(atom, p) / y1, 6);
        worst_ratio = std::max(worst_ratio, std::abs(total.value / local - 0.7));
        worst_nl = std::max(worst_nl, rel_diff(total.term("nonlocal"), -9.0 * std::numbers::pi / 16.0 * x));
    }
    out.passed = worst_ratio <= 1e-14 && worst_nl <= 1e-14;
    out.detail = format("|ratio - 0.7| <= %.3g, nonlocal term relative error %.3g", worst_ratio, worst_nl);
    return out;
}

/// 4. Nonlocal mirror phase: counter-propagating oracle, closed cycle, swap.
inline CriterionResult nonlocal_mirror()
{
    using namespace detail;
    CriterionResult out{4, "nonlocal mirror phase", false, {}};
    const AtomSpecies atom = reference_atom();
    const double k = mirror::nonlocal_prefactor(atom);

    const double h = 1e-6, v = 0.5, T = 0.5 * h / v;
    const auto w = traj::TimeWindow::bounded(0.0, T);
    const mirror::MirrorScenario counter(atom, {traj::Trajectory1D(traj::Linear{h, v}, w),
                                                traj::Trajectory1D(traj::Linear{h, -v}, w)});
    const double phase = mirror::nonlocal_phase(counter).value;
    const double oracle = k * v * T / (4.0 * h * h * h);
    const double err_counter = rel_diff(phase, oracle);

    const double omega = 2.0 * constants::pi * 1e5;
    const auto cycle_w = traj::TimeWindow::bounded(0.0, 3.0 * 2.0 * constants::pi / omega);
    quad::QuadratureSpec tight{1e-12, 1e-15, 2000};
    const mirror::MirrorScenario cycle(atom, {traj::Trajectory1D(traj::Harmonic{h, 0.3 * h, omega, 0.4}, cycle_w),
                                              traj::Trajectory1D(traj::Constant{2e-6}, cycle_w)});
    const double closed = std::abs(mirror::nonlocal_phase(cycle, tight).value);

    const mirror::MirrorScenario a(atom, {traj::Trajectory1D(traj::Harmonic{h, 0.3 * h, omega, 0.4}, cycle_w),
                                          traj::Trajectory1D(traj::Linear{2e-6, 1.0}, cycle_w)});
    const mirror::MirrorScenario b(atom, {a.paths[1], a.paths[0]});
    const PhaseResult pa = mirror::nonlocal_phase(a), pb = mirror::nonlocal_phase(b);
    const double swap = std::abs(pa.value + pb.value);
    const double swap_tol = pa.error_estimate + pb.error_estimate + 1e-14 * std::abs(pa.value);

    out.passed = err_counter <= 1e-8 && closed <= 1e-15 && swap <= swap_tol;
    out.detail = format("counter-propagating relative error %.3g; closed cycle %.3g rad; swap residual %.3g "
                        "(tolerance %.3g)",
                        err_counter, closed, swap, swap_tol);
    return out;
}

/// 5. Motional phase: second-order residual against the first-order form.
inline CriterionResult motional_mirror()
{
    using namespace detail;
    CriterionResult out{5, "motional mirror phase scaling", false, {}};
    const AtomSpecies atom = reference_atom();
    const double c = constants::speed_of_light;
    const double h = 1e-6;

    std::vector<double> beta, residual;
    double worst_ratio = 0.0;
    for (double b : {1e-3, 2e-3, 4e-3, 7e-3, 1e-2}) {
        const double v = b * c;
        const double T = h / v; // z: h -> 2h
        const auto w = traj::TimeWindow::bounded(0.0, T);
        const mirror::MirrorScenario s(atom, {traj::Trajectory1D(traj::Linear{h, v}, w)});
        const PhaseResult mot = mirror::motional_phase_mirror(s, 0);
        const PhaseResult qs = mirror::quasi_static_phase(s, 0);
        beta.push_back(b);
        residual.push_back((mot.value - mot.term("first_order")) / qs.value);
        worst_ratio = std::max(worst_ratio, std::abs(mot.value / qs.value) / b);
    }
    const double slope = loglog_slope(beta, residual);
    // |z U'/U| = 3 for the 1/z^3 potential.
    out.passed = std::abs(slope - 2.0) <= 0.1 && worst_ratio <= 10.0 * 3.0;
    out.detail = format("residual slope %.4f over v/c in [1e-3, 1e-2]; max |phi_mot/phi_qs|/(v/c) = %.4f",
                        slope, worst_ratio);
    return out;
}

/// 6. DCE coefficient, scaling exponents and isotropy.
inline CriterionResult dce_emission()
{
    using namespace detail;
    CriterionResult out{6, "DCE rate coefficient, slopes and isotropy", false, {}};
    const double a = 3e-10;
    const double omega = 2.0 * constants::pi * 1e6;
    auto params = [&](double radius, double r_max, Vec3 dir) {
        return dce::OscillationParams{r_max, omega, constants::four_pi_eps0 * radius * radius * radius, dir};
    };

    const auto t0 = std::chrono::steady_clock::now();
    const dce::EmissionResult base = dce::dce_rate_numeric(params(a, 1e-6, {0, 0, 1}));
    const double coef_err = rel_diff(base.coefficient, dce::closed_form_coefficient);

    std::vector<double> xs, ys;
    for (double f : {1.0, 2.0, 4.0, 10.0}) {
        xs.push_back(a * f);
        ys.push_back(dce::dce_rate_numeric(params(a * f, 1e-6, {0, 0, 1})).gamma_total);
    }
    const double slope_a = loglog_slope(xs, ys);

    // v_max = omega r_max at fixed omega and fixed a / r_max.
    std::vector<double> vs, gs;
    for (double f : {1.0, 2.0, 4.0, 10.0}) {
        const auto p = params(a * f, 1e-6 * f, {0, 0, 1});
        vs.push_back(p.v_max());
        gs.push_back(dce::dce_rate_numeric(p).gamma_total);
    }
    const double slope_v = loglog_slope(vs, gs);

    double spread = 0.0;
    for (Vec3 d : {Vec3{1, 0, 0}, Vec3{0, 1, 0}, Vec3{1, 1, 1}, Vec3{-0.3, 0.8, 0.52}})
        spread = std::max(spread, rel_diff(dce::dce_rate_numeric(params(a, 1e-6, d)).gamma_total, base.gamma_total));
    const double dt = elapsed(t0);

    out.passed = coef_err <= 0.05 && std::abs(slope_a - 6.0) <= 0.01 && std::abs(slope_v - 8.0) <= 0.01 &&
                 spread <= 1e-8 && base.converged;
    out.detail = format("coefficient %.10g (target %.10g, relative error %.3g); slope in a %.6f; slope in v_max "
                        "%.6f; direction spread %.3g; %.2f s",
                        base.coefficient, dce::closed_form_coefficient, coef_err, slope_a, slope_v, spread, dt);
    return out;
}

/// 7. Reparametrization invariance, reversal and quasi-static 1/lambda scaling.
inline CriterionResult geometric_properties()
{
    using namespace detail;
    CriterionResult out{7, "reparametrization and reversal properties", false, {}};
    const AtomSpecies atom = reference_atom();

    const double omega = 2.0 * constants::pi * 1e5;
    const auto w = traj::TimeWindow::bounded(0.1e-5, 2.3e-5);
    const mirror::MirrorScenario ms(atom, {traj::Trajectory1D(traj::Harmonic{1e-6, 0.4e-6, omega, 0.2}, w),
                                           traj::Trajectory1D(traj::Linear{1.5e-6, 0.02}, w)});
    const double nl = mirror::nonlocal_phase(ms).value;
    const double qs = mirror::quasi_static_phase(ms, 0).value;

    sagnac::SpinningParticle p{constants::four_pi_eps0 * 1e-24, 1e16, 1e13, {0.2, -0.1, 1e5}, 1e-9};
    const traj::Trajectory3D path = traj::Trajectory3D::sampled(
        {0.0, 1.0, 2.5, 3.0, 4.2}, {{-1e-7, 3e-8, 0}, {-2e-8, 4e-8, 1e-9}, {1e-8, 5e-8, -2e-9},
                                    {6e-8, 2e-8, 0}, {1e-7, -3e-8, 1e-8}});
    const double sg = sagnac::sagnac_phase(atom, p, path).value;

    double worst_inv = 0.0, worst_qs = 0.0;
    for (double lambda : {0.5, 2.0, 10.0}) {
        const auto msl = mirror::reparametrize(ms, lambda);
        worst_inv = std::max(worst_inv, rel_diff(mirror::nonlocal_phase(msl).value, nl));
        worst_inv = std::max(worst_inv,
                             rel_diff(sagnac::sagnac_phase(atom, p, traj::reparametrize(path, lambda)).value, sg));
        worst_qs = std::max(worst_qs, rel_diff(mirror::quasi_static_phase(msl, 0).value, qs / lambda));
    }
    const double rev = std::max(rel_diff(mirror::nonlocal_phase(mirror::reverse(ms)).value, -nl),
                                rel_diff(sagnac::sagnac_phase(atom, p, traj::reverse(path)).value, -sg));

    out.passed = worst_inv <= 1e-8 && rev <= 1e-8 && worst_qs <= 1e-10;
    out.detail = format("reparametrize invariance %.3g; reversal %.3g; quasi-static 1/lambda %.3g", worst_inv,
                        rev, worst_qs);
    return out;
}

/// 8. Velocities and Re alpha_s'' against central finite differences.
inline CriterionResult gradient_checks(int points = 100)
{
    using namespace detail;
    CriterionResult out{8, "finite-difference gradient checks", false, {}};
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);

    // Relative error with a floor of 1e-3 of the kind's velocity scale.
    auto check_1d = [&](const traj::Trajectory1D& tr, double t_lo, double t_hi, double step, double vscale) {
        double worst = 0.0;
        for (int i = 0; i < points; ++i) {
            const double t = t_lo + (t_hi - t_lo) * u(rng);
            const double fd = (tr.position(t + step) - tr.position(t - step)) / (2.0 * step);
            worst = std::max(worst, std::abs(tr.velocity(t) - fd) / std::max(std::abs(fd), 1e-3 * vscale));
        }
        return worst;
    };
    const double omega = 2.0 * constants::pi * 1e5, amp = 0.3e-6;
    const auto w = traj::TimeWindow::bounded(0.0, 1e-4);
    double worst = 0.0;
    worst = std::max(worst, check_1d(traj::Trajectory1D(traj::Constant{1e-6}, w), 0, 1e-4, 1e-9, 1.0));
    worst = std::max(worst, check_1d(traj::Trajectory1D(traj::Linear{1e-6, 3e-3}, w), 0, 1e-4, 1e-9, 3e-3));
    worst = std::max(worst, check_1d(traj::Trajectory1D(traj::Harmonic{1e-6, amp, omega, 0.7}, w), 0, 1e-4,
                                     1e-4 / omega, amp * omega));

    // Sampled harmonic: finite-difference velocity against the analytic derivative.
    {
        std::vector<double> ts, zs;
        const double dt = 1e-4 / omega;
        for (double t = 0.0; t <= 1e-5; t += dt) {
            ts.push_back(t);
            zs.push_back(1e-6 + amp * std::sin(omega * t));
        }
        const auto tr = traj::Trajectory1D::sampled(ts, zs);
        for (int i = 0; i < points; ++i) {
            const double t = ts[1] + (ts[ts.size() - 2] - ts[1]) * u(rng);
            const double exact = amp * omega * std::cos(omega * t);
            worst = std::max(worst, std::abs(tr.velocity(t) - exact) / std::max(std::abs(exact), 1e-3 * amp * omega));
        }
    }

    // Straight line and sampled 3D path, component-wise.
    {
        const auto line = traj::Trajectory3D::straight_line({1e-7, 2e-8, -3e-8}, {4.0, -1.5, 0.5});
        std::vector<double> ts;
        std::vector<Vec3> rs;
        const double dt = 1e-4 / omega;
        for (double t = 0.0; t <= 1e-5; t += dt) {
            ts.push_back(t);
            rs.push_back({amp * std::cos(omega * t), amp * std::sin(omega * t), 1e-7});
        }
        const auto circle = traj::Trajectory3D::sampled(ts, rs);
        for (int i = 0; i < points; ++i) {
            const double t = 1e-5 * u(rng);
            const double step = 1e-12;
            const Vec3 fd = (line.position(t + step) - line.position(t - step)) * (0.5 / step);
            worst = std::max(worst, norm(line.velocity(t) - fd) / norm(fd));

            const double tc = ts[1] + (ts[ts.size() - 2] - ts[1]) * u(rng);
            const Vec3 exact{-amp * omega * std::sin(omega * tc), amp * omega * std::cos(omega * tc), 0.0};
            worst = std::max(worst, norm(circle.velocity(tc) - exact) / norm(exact));
        }
    }

    // Re alpha_s'' against a Richardson-extrapolated second difference of alpha_s.
    double worst_alpha = 0.0;
    for (int i = 0; i < points; ++i) {
        sagnac::SpinningParticle p{constants::four_pi_eps0 * 1e-24, 1e16 * (0.5 + u(rng)), 0.0, {0, 0, 1}, 0.0};
        p.gamma = p.omega_s * 0.05 * u(rng);
        const double w0 = p.omega_s * (0.05 + 0.5 * u(rng)) * (u(rng) < 0.5 ? 1.0 : 3.0);
        auto second = [&](double hh) {
            return (sagnac::alpha_s(p, w0 + hh).real() - 2.0 * sagnac::alpha_s(p, w0).real() +
                    sagnac::alpha_s(p, w0 - hh).real()) /
                   (hh * hh);
        };
        // step resolves the resonance feature, width ~ |w0 - ws| + gamma
        const double hh = 1e-3 * std::min(w0, std::abs(w0 - p.omega_s) + p.gamma);
        const double fd = (4.0 * second(0.5 * hh) - second(hh)) / 3.0;
        worst_alpha = std::max(worst_alpha, rel_diff(sagnac::re_alpha_second(p, w0), fd));
    }

    out.passed = worst <= 1e-6 && worst_alpha <= 1e-6;
    out.detail = format("worst velocity error %.3g over %d points per kind; worst Re alpha'' error %.3g", worst,
                        points, worst_alpha);
    return out;
}

inline std::vector<CriterionResult> run_all()
{
    std::vector<CriterionResult> out;
    for (const auto& check : std::vector<std::function<CriterionResult()>>{
             [] { return straight_line_sagnac(); }, quadrature_oracle, symmetric_sagnac, nonlocal_mirror,
             motional_mirror, dce_emission, geometric_properties, [] { return gradient_checks(); }}) {
        try {
            out.push_back(check());
        } catch (const std::exception& e) {
            out.push_back({static_cast<int>(out.size()) + 1, "exception", false, e.what()});
        }
    }
    return out;
}

inline std::string format_line(const CriterionResult& r)
{
    return detail::format("criterion %d: %s: %s (%s)", r.id, r.passed ? "PASS" : "FAIL", r.title.c_str(),
                          r.detail.c_str());
}

} // namespace casq::selftest
