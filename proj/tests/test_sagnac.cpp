#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "casq/sagnac.hpp"

using namespace casq;
using namespace casq::sagnac;

namespace
{

constexpr double hbar = 1.054571817e-34;
constexpr double eps0 = 8.8541878128e-12;
constexpr double pi = std::numbers::pi;
const double four_pi_eps0 = 4.0 * pi * eps0;

const double w0 = 2.0 * pi * 384.2304844685e12;
const double d2 = 1.2843622995604273e-57;

AtomSpecies atom() { return AtomSpecies::two_level("rb", w0, d2); }

SpinningParticle particle(Vec3 omega = {0, 0, 1e5})
{
    return SpinningParticle{four_pi_eps0 * 1e-24, 1e16, 1e13, omega, 1e-9};
}

// Second derivative of the lossless Lorentz model, by hand:
// d^2/dw^2 [A / (s - w^2)] = A (2 s + 6 w^2) / (s - w^2)^3.
double lossless_second(double alpha0, double ws, double w)
{
    const double s = ws * ws;
    return alpha0 * s * (2.0 * s + 6.0 * w * w) / std::pow(s - w * w, 3);
}

double ell_oracle(const SpinningParticle& p)
{
    const double sum = d2 * re_alpha_second(p, w0) * norm(p.rotation);
    return std::pow(sum / (four_pi_eps0 * four_pi_eps0 * hbar), 1.0 / 6.0);
}

} // namespace

TEST(Particle, Validation)
{
    EXPECT_THROW((SpinningParticle{0.0, 1.0, 0.0, {}, 0.0}.validate()), InvalidArgument);
    EXPECT_THROW((SpinningParticle{1.0, 0.0, 0.0, {}, 0.0}.validate()), InvalidArgument);
    EXPECT_THROW((SpinningParticle{1.0, 1.0, -1.0, {}, 0.0}.validate()), InvalidArgument);
    EXPECT_THROW((SpinningParticle{1.0, 1.0, 0.0, {}, -1.0}.validate()), InvalidArgument);
}

TEST(AlphaS, StaticLimitAndSubstitution)
{
    SpinningParticle p = particle();
    EXPECT_EQ(alpha_s(p, 0.0), std::complex<double>(p.alpha0, 0.0));
    p.gamma = 0.0;
    const auto a = alpha_s(p, p.omega_s / std::sqrt(2.0));
    EXPECT_NEAR(a.real() / p.alpha0, 2.0, 1e-14);
    EXPECT_EQ(a.imag(), 0.0);
}

TEST(AlphaS, Passivity)
{
    const SpinningParticle p = particle();
    for (double f : {0.01, 0.5, 0.999, 1.0, 1.3, 10.0})
        EXPECT_GE(alpha_s(p, f * p.omega_s).imag(), 0.0);
}

TEST(AlphaS, PoleGuardOnlyWithoutDamping)
{
    SpinningParticle p = particle();
    EXPECT_NO_THROW(alpha_s(p, p.omega_s));
    p.gamma = 0.0;
    EXPECT_THROW(alpha_s(p, p.omega_s), PoleProximity);
    EXPECT_THROW(re_alpha_second(p, p.omega_s * (1 + 1e-7)), PoleProximity);
    EXPECT_THROW(alpha_s(p, -1.0), InvalidArgument);
}

TEST(ReAlphaSecond, StaticValue)
{
    SpinningParticle p = particle();
    p.gamma = 0.0;
    EXPECT_NEAR(re_alpha_second(p, 0.0) / (2.0 * p.alpha0 / (p.omega_s * p.omega_s)), 1.0, 1e-14);
    for (double f : {0.1, 0.4, 0.8, 1.5})
        EXPECT_NEAR(re_alpha_second(p, f * p.omega_s) / lossless_second(p.alpha0, p.omega_s, f * p.omega_s), 1.0,
                    1e-12);
}

TEST(ReAlphaSecond, CentralDifferenceOfAlphaS)
{
    for (double gamma : {0.0, 1e13, 3e14}) {
        SpinningParticle p = particle();
        p.gamma = gamma;
        const double h = 1e-4 * p.omega_s;
        for (double f : {0.05, 0.3, 0.6, 2.0}) {
            const double w = f * p.omega_s;
            const double fd =
                (alpha_s(p, w + h).real() - 2.0 * alpha_s(p, w).real() + alpha_s(p, w - h).real()) / (h * h);
            EXPECT_NEAR(re_alpha_second(p, w) / fd, 1.0, 1e-6) << "gamma " << gamma << " f " << f;
        }
    }
}

TEST(ReAlphaSecond, EvenWithoutDamping)
{
    // The closed form is written for w >= 0; evenness is the statement that the
    // lossless expression depends on w^2 only.
    SpinningParticle p = particle();
    p.gamma = 0.0;
    for (double f : {0.1, 0.7})
        EXPECT_DOUBLE_EQ(lossless_second(p.alpha0, p.omega_s, f * p.omega_s),
                         lossless_second(p.alpha0, p.omega_s, -f * p.omega_s));
    EXPECT_NEAR(re_alpha_second(p, 0.3 * p.omega_s) / lossless_second(p.alpha0, p.omega_s, -0.3 * p.omega_s), 1.0,
                1e-13);
}

TEST(EllOmega, Examples)
{
    const auto s = atom();
    EXPECT_EQ(ell_omega(s, particle({0, 0, 0})), 0.0);
    const double l1 = ell_omega(s, particle({0, 0, 1e3}));
    EXPECT_NEAR(ell_omega(s, particle({0, 0, 64e3})) / l1, 2.0, 1e-13);
    const SpinningParticle p = particle();
    EXPECT_NEAR(ell_omega(s, p) / ell_oracle(p), 1.0, 1e-13);
    // w0 << ws: Re alpha'' close to 2 alpha0 / ws^2
    SpinningParticle far = p;
    far.omega_s = 1e3 * w0;
    far.gamma = 0.0;
    const double approx =
        std::pow(d2 * 2.0 * far.alpha0 * 1e5 / (far.omega_s * far.omega_s * four_pi_eps0 * four_pi_eps0 * hbar),
                 1.0 / 6.0);
    EXPECT_NEAR(ell_omega(s, far) / approx, 1.0, 1e-5);
}

TEST(EllOmega, NegativeRadicand)
{
    // Above the particle resonance Re alpha'' changes sign.
    SpinningParticle p = particle();
    p.omega_s = 0.5 * w0;
    p.gamma = 0.0;
    ASSERT_LT(re_alpha_second(p, w0), 0.0);
    EXPECT_THROW(ell_omega(atom(), p), NegativeRadicand);
}

TEST(SagnacPhase, ZeroRotation)
{
    const auto path = traj::Trajectory3D::straight_line({0, 5e-8, 0}, {-10, 0, 0});
    EXPECT_EQ(sagnac_phase(atom(), particle({0, 0, 0}), path).value, 0.0);
}

TEST(SagnacPhase, RadialPath)
{
    const auto s = atom();
    const SpinningParticle p = particle({0.3, 0.1, 1e5});
    const traj::TimeWindow w = traj::TimeWindow::bounded(0.0, 1e-8);
    const auto radial = traj::Trajectory3D::straight_line({1e-8, 2e-8, 3e-8}, {1, 2, 3}, w);
    const auto tangential = traj::Trajectory3D::straight_line({1e-8, 2e-8, 3e-8}, {-2, 1, 0}, w);
    const double scale = std::abs(sagnac_phase(s, p, tangential).value);
    ASSERT_GT(scale, 0.0);
    EXPECT_LE(std::abs(sagnac_phase(s, p, radial, {1e-10, 1e-20 * scale, 2000}).value), 1e-12 * scale);
}

TEST(SagnacPhase, StraightLineMatchesClosedForm)
{
    const auto s = atom();
    const SpinningParticle p = particle();
    for (double y : {3e-8, -5e-8, 2e-7}) {
        const auto path = traj::Trajectory3D::straight_line({0, y, 0}, {25.0, 0, 0});
        const double numeric = sagnac_phase(s, p, path).value;
        const double closed = sagnac_phase_straightline(s, p, y);
        EXPECT_NEAR(std::abs(numeric) / std::abs(closed), 1.0, 1e-6);
        // Convention: travel along +x gives the opposite sign to the closed form.
        EXPECT_EQ(std::signbit(numeric), !std::signbit(closed));
    }
}

TEST(SagnacPhase, LinearInRotation)
{
    const auto path = traj::Trajectory3D::sampled({0, 1, 2}, {{-1e-7, 4e-8, 0}, {0, 5e-8, 1e-8}, {1e-7, 3e-8, 0}});
    const double one = sagnac_phase(atom(), particle({1e4, -2e4, 5e4}), path).value;
    const double two = sagnac_phase(atom(), particle({2e4, -4e4, 1e5}), path).value;
    EXPECT_NEAR(two / one, 2.0, 1e-9);
}

TEST(SagnacPhase, GeometricCharacter)
{
    const auto path = traj::Trajectory3D::sampled({0, 1, 2.5}, {{-1e-7, 4e-8, 0}, {0, 5e-8, 1e-8}, {1e-7, 3e-8, 0}});
    const auto s = atom();
    const SpinningParticle p = particle({0.2, 0.1, 1e5});
    const double base = sagnac_phase(s, p, path).value;
    for (double lambda : {0.5, 2.0, 10.0})
        EXPECT_NEAR(sagnac_phase(s, p, traj::reparametrize(path, lambda)).value / base, 1.0, 1e-8);
    EXPECT_NEAR(sagnac_phase(s, p, traj::reverse(path)).value / base, -1.0, 1e-8);

    const auto line = traj::Trajectory3D::straight_line({-1e-7, 4e-8, 0}, {30, 0, 0}, traj::TimeWindow::bounded(0.0, 7e-9));
    const double lb = sagnac_phase(s, p, line).value;
    EXPECT_NEAR(sagnac_phase(s, p, traj::reverse(line)).value / lb, -1.0, 1e-8);
}

TEST(SagnacPhase, RotationCovariance)
{
    const auto path = traj::Trajectory3D::straight_line({0, 5e-8, 1e-8}, {-20, 1, 0});
    const auto s = atom();
    const SpinningParticle p = particle({1e4, 0, 1e5});
    const double base = sagnac_phase(s, p, path).value;
    const Mat3 rot = Mat3::rotation(normalized(Vec3{1, 2, -0.5}), 1.1);
    SpinningParticle q = p;
    q.rotation = rot * p.rotation;
    EXPECT_NEAR(sagnac_phase(s, q, traj::rotate(path, rot)).value / base, 1.0, 1e-8);
}

TEST(SagnacPhase, MidpointRiemannSum)
{
    const Vec3 om{4e4, -3e4, 5e4};
    const Vec3 r0{-1e-7, 2e-8, 1e-8}, v{40, 3, -1};
    const double T = 5e-9;
    const auto path = traj::Trajectory3D::straight_line(r0, v, traj::TimeWindow::bounded(0.0, T));
    const auto s = atom();
    const SpinningParticle p = particle(om);
    const auto r = sagnac_phase(s, p, path);

    const int n = 1000000;
    const double dt = T / n;
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
        const Vec3 x = r0 + v * ((i + 0.5) * dt);
        const double r2 = dot(x, x);
        sum += dot(v, cross(om, x)) / (r2 * r2 * r2 * r2) * dt;
    }
    EXPECT_NEAR(r.term("line_integral") / sum, 1.0, 1e-6);
    EXPECT_NEAR(r.value, r.term("prefactor") * r.term("line_integral"), 1e-15 * std::abs(r.value));
}

TEST(SagnacPhase, CollisionGuardAndNearFieldWarning)
{
    const auto s = atom();
    const auto close = traj::Trajectory3D::straight_line({0, 5e-10, 0}, {1, 0, 0});
    EXPECT_THROW(sagnac_phase(s, particle(), close), CollisionGuard);
    const auto near = traj::Trajectory3D::straight_line({0, 1e-8, 0}, {1, 0, 0});
    EXPECT_TRUE(sagnac_phase(s, particle(), near).warnings.empty());
    const auto far = traj::Trajectory3D::straight_line({0, 1e-5, 0}, {1, 0, 0});
    EXPECT_EQ(sagnac_phase(s, particle(), far).warnings.size(), 1u);
}

TEST(StraightLine, ClosedFormExamples)
{
    const auto s = atom();
    const SpinningParticle p = particle();
    const double l = ell_omega(s, p);
    EXPECT_NEAR(sagnac_phase_straightline(s, p, l), 15.0 * pi / 16.0, 1e-12);
    EXPECT_NEAR(15.0 * pi / 16.0, 2.9452431, 1e-7);
    EXPECT_EQ(sagnac_phase_straightline(s, p, -2e-8), -sagnac_phase_straightline(s, p, 2e-8));
    EXPECT_NEAR(sagnac_phase_straightline(s, p, 4e-8) * 64.0 / sagnac_phase_straightline(s, p, 2e-8), 1.0, 1e-14);
    EXPECT_THROW(sagnac_phase_straightline(s, p, 0.0), ZeroImpactParameter);
}

TEST(Symmetric, ClosedFormExamples)
{
    const auto s = atom();
    const SpinningParticle p = particle();
    const double l = ell_omega(s, p);
    const auto r = sagnac_total_symmetric(s, p, l);
    EXPECT_NEAR(r.value, 21.0 * pi / 16.0, 1e-12);
    EXPECT_NEAR(21.0 * pi / 16.0, 4.1233403, 1e-7);
    EXPECT_NEAR(r.term("local_difference"), 30.0 * pi / 16.0, 1e-12);
    EXPECT_NEAR(r.term("nonlocal"), -9.0 * pi / 16.0, 1e-12);
    EXPECT_NEAR(r.term("local_difference") + r.term("nonlocal"), r.value, 1e-14);

    const double y1 = 3e-8;
    const double local = sagnac_phase_straightline(s, p, y1) - sagnac_phase_straightline(s, p, -y1);
    EXPECT_NEAR(sagnac_total_symmetric(s, p, y1).value / local, 0.7, 1e-14);
    EXPECT_NEAR(sagnac_total_symmetric(s, p, 2 * y1).value * 64.0 / sagnac_total_symmetric(s, p, y1).value, 1.0,
                1e-14);
}

TEST(Symmetric, Validation)
{
    const AtomSpecies multi("m", {{w0, d2}, {0.98 * w0, 0.5 * d2}});
    EXPECT_THROW(sagnac_total_symmetric(multi, particle(), 1e-8), NotTwoLevel);
    EXPECT_THROW(sagnac_total_symmetric(atom(), particle(), -1e-8), InvalidArgument);
}

TEST(Symmetric, NumericLocalDifference)
{
    // phi1 - phi2 from two numeric line integrals in the closed-form convention
    // (travel along -x).
    const auto s = atom();
    const SpinningParticle p = particle();
    const double y1 = 4e-8;
    const double p1 = sagnac_phase(s, p, traj::Trajectory3D::straight_line({0, y1, 0}, {-10, 0, 0})).value;
    const double p2 = sagnac_phase(s, p, traj::Trajectory3D::straight_line({0, -y1, 0}, {-10, 0, 0})).value;
    EXPECT_NEAR(sagnac_total_symmetric(s, p, y1).term("local_difference") / (p1 - p2), 1.0, 1e-6);
}
