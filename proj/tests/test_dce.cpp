#include <array>
#include <cmath>
#include <complex>
#include <numbers>

#include <gtest/gtest.h>

#include "casq/dce.hpp"

using namespace casq;
using namespace casq::dce;

namespace
{

constexpr double hbar = 1.054571817e-34;
constexpr double eps0 = 8.8541878128e-12;
constexpr double c = 299792458.0;
constexpr double pi = std::numbers::pi;

OscillationParams params(double a = 3e-10, double r_max = 1e-7, double omega = 2 * pi * 1e6, Vec3 n = {0, 0, 1})
{
    return OscillationParams{r_max, omega, 4 * pi * eps0 * a * a * a, n};
}

// Pair amplitude built from mode functions.
//   E^(-)_k(r) = -i sqrt(hbar w / 2 eps0) e exp(-i k.r),  B^(-) = k^ x E^(-) / c,
//   H = -(alpha0/2) (E + v x B)^2,
// with r(t) = r_max cos(W t) n and v = -W r_max sin(W t) n, first order in
// r_max, keeping the exp(-i W t) component.
std::complex<double> oracle_amplitude(const OscillationParams& p, const Vec3& k1, const Vec3& e1, const Vec3& k2,
                                      const Vec3& e2)
{
    using cd = std::complex<double>;
    const Vec3 n = normalized(p.direction);
    const double w1 = c * norm(k1), w2 = c * norm(k2);
    const cd f1 = cd(0, -1) * std::sqrt(hbar * w1 / (2 * eps0));
    const cd f2 = cd(0, -1) * std::sqrt(hbar * w2 / (2 * eps0));
    const Vec3 kh1 = normalized(k1), kh2 = normalized(k2);

    // E.E: 2 E1.E2 exp(-i K.r), linear part -i K.r, cos -> 1/2
    const Vec3 K = k1 + k2;
    const cd ee = 2.0 * f1 * f2 * dot(e1, e2) * cd(0, -1) * dot(K, n) * (0.5 * p.r_max);

    // 2 E.(v x B): sin -> i/2 on exp(-i W t), so v -> -W r_max n (i/2)
    const cd vfac = -p.omega_cm * p.r_max * cd(0, 0.5);
    const Vec3 b1 = cross(kh1, e1) * (1.0 / c);
    const Vec3 b2 = cross(kh2, e2) * (1.0 / c);
    const cd evb = 2.0 * f1 * f2 * vfac * (dot(e1, cross(n, b2)) + dot(e2, cross(n, b1)));

    return -0.5 * p.alpha0 * (ee + evb);
}

Vec3 direction(double ct, double phi)
{
    const double st = std::sqrt(1 - ct * ct);
    return {st * std::cos(phi), st * std::sin(phi), ct};
}

std::array<Vec3, 2> basis(const Vec3& kh)
{
    const Vec3 a = std::abs(kh.z) < 0.9 ? Vec3{0, 0, 1} : Vec3{1, 0, 0};
    const Vec3 u = normalized(cross(a, kh));
    return {u, cross(kh, u)};
}

// Photon rate from the mode-function amplitude, 4-point Gauss-Legendre in
// cos(theta), 8 points in phi, composite Simpson in frequency.
double oracle_gamma_total(const OscillationParams& p)
{
    const double gx[4] = {-0.8611363115940526, -0.3399810435848563, 0.3399810435848563, 0.8611363115940526};
    const double gw[4] = {0.3478548451374538, 0.6521451548625461, 0.6521451548625461, 0.3478548451374538};
    struct Node { Vec3 d; double w; };
    std::vector<Node> nodes;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 8; ++j)
            nodes.push_back({direction(gx[i], 2 * pi * (j + 0.25) / 8), gw[i] * 2 * pi / 8});

    auto density = [&](double w1) {
        const double w2 = p.omega_cm - w1;
        if (w1 <= 0 || w2 <= 0)
            return 0.0;
        double ang = 0.0;
        for (const auto& a : nodes)
            for (const auto& b : nodes) {
                const Vec3 k1 = a.d * (w1 / c), k2 = b.d * (w2 / c);
                const auto ea = basis(a.d), eb = basis(b.d);
                double s = 0.0;
                for (const auto& x : ea)
                    for (const auto& y : eb)
                        s += std::norm(oracle_amplitude(p, k1, x, k2, y));
                ang += a.w * b.w * s;
            }
        const double dos = w1 * w1 * w2 * w2 / std::pow(c, 6) / std::pow(2 * pi, 6);
        // golden rule 2 pi / hbar^2 per pair, unordered pairs counted once, two photons each
        return 2.0 * 0.5 * (2 * pi / (hbar * hbar)) * dos * ang;
    };

    const int n = 200;
    const double h = p.omega_cm / n;
    double sum = density(0) + density(p.omega_cm);
    for (int i = 1; i < n; ++i)
        sum += (i % 2 ? 4.0 : 2.0) * density(i * h);
    return sum * h / 3.0;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y)
{
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += std::log(x[i]);
        my += std::log(y[i]);
    }
    mx /= x.size();
    my /= y.size();
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (std::log(x[i]) - mx) * (std::log(y[i]) - my);
        sxx += (std::log(x[i]) - mx) * (std::log(x[i]) - mx);
    }
    return sxy / sxx;
}

} // namespace

TEST(Oscillation, Validation)
{
    EXPECT_THROW(params(3e-10, -1.0).validate(), InvalidArgument);
    EXPECT_THROW(params(3e-10, 1e-7, 0.0).validate(), InvalidArgument);
    EXPECT_THROW(params(3e-10, 1e-7, 1.0, {0, 0, 0}).validate(), InvalidArgument);
    OscillationParams p = params();
    p.alpha0 = 0.0;
    EXPECT_THROW(p.validate(), InvalidArgument);
}

TEST(ClosedForm, Coefficient)
{
    EXPECT_NEAR(closed_form_coefficient, 23.0 / (5670.0 * pi), 1e-18);
    EXPECT_NEAR(closed_form_coefficient, 1.2912e-3, 1e-7);
}

TEST(ClosedForm, Examples)
{
    // a = r_max and v_max = c: the rate is the coefficient times omega_cm.
    const double a = 1e-10;
    const OscillationParams unit = params(a, a, c / a);
    EXPECT_NEAR(unit.v_max() / c, 1.0, 1e-15);
    EXPECT_NEAR(dce_rate_closed(unit) / (closed_form_coefficient * c / a), 1.0, 1e-12);

    const OscillationParams p = params(1e-10, 1e-7, 2 * pi * 1e5);
    const double v = p.v_max();
    const double oracle = closed_form_coefficient * std::pow(1e-10 / 1e-7, 6) * std::pow(v / c, 8) * 2 * pi * 1e5;
    EXPECT_NEAR(dce_rate_closed(p) / oracle, 1.0, 1e-12);
    // doubling omega_cm doubles v_max: 2^8 * 2
    EXPECT_NEAR(dce_rate_closed(params(1e-10, 1e-7, 4 * pi * 1e5)) / dce_rate_closed(p), 512.0, 1e-9);
    EXPECT_EQ(dce_rate_closed(params(1e-10, 0.0)), 0.0);
}

TEST(ClosedForm, AtomicRadius)
{
    EXPECT_NEAR(params(3e-10).atomic_radius() / 3e-10, 1.0, 1e-14);
}

TEST(Amplitude, MatchesModeFunctionOracle)
{
    for (Vec3 n : {Vec3{0, 0, 1}, Vec3{1, 2, -0.5}}) {
        const OscillationParams p = params(3e-10, 1e-7, 2 * pi * 1e6, n);
        for (double f : {0.2, 0.5, 0.93}) {
            const double w1 = f * p.omega_cm, w2 = p.omega_cm - w1;
            const Vec3 k1 = normalized(Vec3{0.3, -0.7, 0.2}) * (w1 / c);
            const Vec3 k2 = normalized(Vec3{-0.1, 0.4, 0.9}) * (w2 / c);
            for (int l1 : {0, 1})
                for (int l2 : {0, 1}) {
                    const auto m = pair_emission_amplitude(p, {k1, l1}, {k2, l2});
                    const auto o = oracle_amplitude(p, k1, polarization_vector(k1, l1), k2, polarization_vector(k2, l2));
                    EXPECT_LE(std::abs(m - o), 1e-12 * std::abs(o))
                        << "f " << f << " l " << l1 << l2;
                }
        }
    }
}

TEST(Amplitude, ExchangeSymmetry)
{
    const OscillationParams p = params(3e-10, 1e-7, 2 * pi * 1e6, {0.3, 0.1, 1});
    const Vec3 k1 = normalized(Vec3{1, 2, 3}) * (0.3 * p.omega_cm / c);
    const Vec3 k2 = normalized(Vec3{-2, 0.5, 1}) * (0.7 * p.omega_cm / c);
    for (int l1 : {0, 1})
        for (int l2 : {0, 1}) {
            const auto a = pair_emission_amplitude(p, {k1, l1}, {k2, l2});
            const auto b = pair_emission_amplitude(p, {k2, l2}, {k1, l1});
            EXPECT_NEAR(std::abs(a - b), 0.0, 1e-13 * std::abs(a));
        }
}

TEST(Amplitude, Transversality)
{
    for (Vec3 k : {Vec3{0, 0, 1}, Vec3{1, 0, 0}, Vec3{0.3, -2, 0.1}, Vec3{-1, -1, -1}}) {
        const Vec3 e0 = polarization_vector(k, 0), e1 = polarization_vector(k, 1);
        EXPECT_NEAR(dot(e0, k), 0.0, 1e-15 * norm(k));
        EXPECT_NEAR(dot(e1, k), 0.0, 1e-15 * norm(k));
        EXPECT_NEAR(dot(e0, e1), 0.0, 1e-15);
        EXPECT_NEAR(norm(e0), 1.0, 1e-15);
        EXPECT_NEAR(dot(cross(e0, e1), normalized(k)), 1.0, 1e-15);
    }
    EXPECT_THROW(polarization_vector({0, 0, 1}, 2), InvalidArgument);
}

TEST(Amplitude, PolarizationSumMatchesBasis)
{
    const OscillationParams p = params(3e-10, 1e-7, 1.0, {1, 1, 0});
    const Vec3 k1{0.2, 0.5, -0.3}, k2{-0.4, 0.1, 0.6};
    const Mat3 t = pair_coupling_tensor(p, k1, k2);
    double s = 0.0;
    for (int a : {0, 1})
        for (int b : {0, 1}) {
            const double q = dot(polarization_vector(k1, a), t * polarization_vector(k2, b));
            s += q * q;
        }
    EXPECT_NEAR(polarization_sum(t, k1, k2) / s, 1.0, 1e-13);
}

TEST(Amplitude, NoMotionAndEnergyShell)
{
    const OscillationParams p = params(3e-10, 0.0);
    const Vec3 k1{0, 0, 0.5 * p.omega_cm / c}, k2{0, 0.5 * p.omega_cm / c, 0};
    EXPECT_EQ(pair_emission_amplitude(p, {k1, 0}, {k2, 1}), std::complex<double>(0.0, 0.0));

    const OscillationParams q = params();
    const Vec3 off{0, 0.6 * q.omega_cm / c, 0};
    EXPECT_THROW(pair_emission_amplitude(q, {Vec3{0, 0, 0.5 * q.omega_cm / c}, 0}, {off, 0}), RWAViolation);
    EXPECT_THROW(pair_emission_amplitude(q, {Vec3{}, 0}, {off, 0}), InvalidArgument);
}

TEST(Numeric, MatchesModeFunctionRate)
{
    const OscillationParams p = params();
    const auto r = dce_rate_numeric(p);
    EXPECT_TRUE(r.converged);
    EXPECT_NEAR(r.gamma_total / oracle_gamma_total(p), 1.0, 1e-8);
    EXPECT_NEAR(r.gamma_pairs * 2.0, r.gamma_total, 1e-15 * r.gamma_total);
}

TEST(Numeric, CoefficientWithinFivePercent)
{
    const auto r = dce_rate_numeric(params());
    EXPECT_NEAR(r.coefficient / closed_form_coefficient, 1.0, 0.05);
}

TEST(Numeric, RatioGrid)
{
    for (double a : {1e-10, 3e-10, 1e-9})
        for (double f : {1e3, 1e6, 1e9}) {
            const OscillationParams p = params(a, 1e-7, 2 * pi * f);
            EXPECT_NEAR(dce_rate_numeric(p).gamma_total / dce_rate_closed(p), 1.0, 0.05) << a << " " << f;
        }
}

TEST(Numeric, ReducedRouteAgrees)
{
    const OscillationParams p = params(3e-10, 1e-7, 2 * pi * 1e6, {1, -2, 0.5});
    NumericOptions reduced;
    reduced.method = AngularMethod::reduced_iterated;
    reduced.spec = {1e-9, 1e-300, 2000};
    reduced.spectrum_points = 3;
    const auto a = dce_rate_numeric(p);
    const auto b = dce_rate_numeric(p, reduced);
    EXPECT_NEAR(b.gamma_total / a.gamma_total, 1.0, 1e-7);
}

TEST(Numeric, Isotropy)
{
    const double ref = dce_rate_numeric(params()).gamma_total;
    for (Vec3 n : {Vec3{1, 0, 0}, Vec3{0, 1, 0}, Vec3{1, 1, 1}, Vec3{0.2, -0.7, 0.4}})
        EXPECT_NEAR(dce_rate_numeric(params(3e-10, 1e-7, 2 * pi * 1e6, n)).gamma_total / ref, 1.0, 1e-8);
}

TEST(Numeric, PowerLaws)
{
    std::vector<double> as, ga, vs, gv;
    for (double a : {1e-10, 2e-10, 4e-10, 8e-10}) {
        as.push_back(a);
        ga.push_back(dce_rate_numeric(params(a)).gamma_total);
    }
    // v_max = r_max omega at fixed a / r_max
    for (double s : {1.0, 2.0, 4.0, 8.0}) {
        const OscillationParams p = params(3e-10 * s, 1e-7 * s);
        vs.push_back(p.v_max());
        gv.push_back(dce_rate_numeric(p).gamma_total);
    }
    EXPECT_NEAR(loglog_slope(as, ga), 6.0, 0.01);
    EXPECT_NEAR(loglog_slope(vs, gv), 8.0, 0.01);
}

TEST(Spectrum, Shape)
{
    const OscillationParams p = params();
    NumericOptions opt;
    opt.spectrum_points = 31;
    const auto r = dce_rate_numeric(p, opt);
    ASSERT_EQ(r.spectrum.size(), 31u);
    const std::size_t n = r.spectrum.size();
    for (std::size_t i = 0; i < n; ++i) {
        const auto [w, s] = r.spectrum[i];
        EXPECT_GT(s, 0.0);
        EXPECT_NEAR(s / r.spectrum[n - 1 - i].second, 1.0, 1e-6);
        EXPECT_NEAR(s / spectral_density(p, p.omega_cm - w), 1.0, 1e-6);
        if (i > 0 && i <= n / 2) {
            EXPECT_GT(s, r.spectrum[i - 1].second);
        }
    }
    EXPECT_EQ(spectral_density(p, 0.0), 0.0);
    EXPECT_EQ(spectral_density(p, p.omega_cm), 0.0);
    EXPECT_LT(spectral_density(p, 1e-6 * p.omega_cm), 1e-12 * r.spectrum[n / 2].second);
}

TEST(Spectrum, IntegratesToTotal)
{
    const OscillationParams p = params();
    const auto r = dce_rate_numeric(p);
    const int n = 400;
    const double h = p.omega_cm / n;
    double sum = 0.0;
    for (int i = 1; i < n; ++i)
        sum += (i % 2 ? 4.0 : 2.0) * spectral_density(p, i * h);
    EXPECT_NEAR(sum * h / 3.0 / r.gamma_total, 1.0, 1e-9);
}

TEST(Numeric, NoMotion)
{
    const auto r = dce_rate_numeric(params(3e-10, 0.0));
    EXPECT_EQ(r.gamma_total, 0.0);
    EXPECT_EQ(r.coefficient, 0.0);
    for (const auto& [w, s] : r.spectrum)
        EXPECT_EQ(s, 0.0);
}
