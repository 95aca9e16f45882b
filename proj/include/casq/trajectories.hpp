#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "casq/constants.hpp"
#include "casq/errors.hpp"
#include "casq/vec3.hpp"

namespace casq::traj
{

/// Time interval [t_start, t_end], or the whole real line when `improper`.
///
/// An improper window is only meaningful when the caller certifies that the
/// integrand built on it decays fast enough to be integrable.
struct TimeWindow
{
    double t_start = 0.0;
    double t_end = 0.0;
    bool improper = false;

    static TimeWindow bounded(double t_start, double t_end)
    {
        if (!(t_start < t_end) || !std::isfinite(t_start) || !std::isfinite(t_end))
            throw InvalidArgument("time window needs finite t_start < t_end");
        return {t_start, t_end, false};
    }

    static TimeWindow all_time() { return {0.0, 0.0, true}; }

    double duration() const
    {
        return improper ? std::numeric_limits<double>::infinity() : t_end - t_start;
    }

    bool contains(double t) const { return improper || (t >= t_start && t <= t_end); }

    friend bool operator==(const TimeWindow&, const TimeWindow&) = default;
};

inline TimeWindow reparametrize(const TimeWindow& w, double lambda)
{
    if (w.improper)
        return w;
    return {w.t_start / lambda, w.t_end / lambda, false};
}

/// Round-trip light time 2z/c to a perfect mirror at distance z.
inline double light_delay(double z)
{
    if (!(z > 0.0))
        throw NonPositiveDistance("light_delay needs z > 0");
    return 2.0 * z / constants::speed_of_light;
}

namespace detail
{

// Index i of the segment [t[i], t[i+1]] containing t, clamped to valid segments.
inline std::size_t segment_of(const std::vector<double>& times, double t)
{
    auto it = std::upper_bound(times.begin(), times.end(), t);
    std::size_t i = it == times.begin() ? 0 : static_cast<std::size_t>(it - times.begin()) - 1;
    return std::min(i, times.size() - 2);
}

inline void check_sample_times(const std::vector<double>& times)
{
    if (times.size() < 2)
        throw InvalidArgument("sampled trajectory needs at least two samples");
    for (std::size_t i = 1; i < times.size(); ++i)
        if (!(times[i] > times[i - 1]))
            throw InvalidArgument("sample times must be strictly increasing");
}

inline void check_in_range(const std::vector<double>& times, double t)
{
    if (t < times.front() || t > times.back()) {
        char buf[128];
        std::snprintf(buf, sizeof buf, "t = %.17g outside sampled range [%.17g, %.17g]", t,
                      times.front(), times.back());
        throw OutOfWindow(buf);
    }
}

// Central-difference step for sampled kinds: max(1e-6 * range, spacing / 2).
inline double fd_step(const std::vector<double>& times, double t)
{
    const std::size_t i = segment_of(times, t);
    const double spacing = times[i + 1] - times[i];
    return std::max(1e-6 * (times.back() - times.front()), 0.5 * spacing);
}

// pivot - t can miss the window ends by one ulp; pin them back.
inline void snap_reversed_ends(const std::vector<double>& original, std::vector<double>& reversed,
                               const TimeWindow& w)
{
    if (original.back() == w.t_end)
        reversed.front() = w.t_start;
    if (original.front() == w.t_start)
        reversed.back() = w.t_end;
}

} // namespace detail

// ---------------------------------------------------------------------------
// One-dimensional paths z(t) above a mirror at z = 0
// ---------------------------------------------------------------------------

struct Constant
{
    double h;
    friend bool operator==(const Constant&, const Constant&) = default;
};

struct Linear
{
    double h;
    double v;
    friend bool operator==(const Linear&, const Linear&) = default;
};

/// z(t) = h + amplitude sin(omega t + phase0)
struct Harmonic
{
    double h;
    double amplitude;
    double omega;
    double phase0;
    friend bool operator==(const Harmonic&, const Harmonic&) = default;
};

struct Sampled1D
{
    std::vector<double> t;
    std::vector<double> z;
    friend bool operator==(const Sampled1D&, const Sampled1D&) = default;
};

using Kind1D = std::variant<Constant, Linear, Harmonic, Sampled1D>;

class Trajectory1D
{
  public:
    Trajectory1D(Kind1D kind, TimeWindow window, std::optional<double> parallel_velocity = {})
        : kind_(std::move(kind)), window_(window), parallel_velocity_(parallel_velocity)
    {
        validate();
    }

    /// Sampled path; the window defaults to the sample range.
    static Trajectory1D sampled(std::vector<double> t, std::vector<double> z)
    {
        detail::check_sample_times(t);
        TimeWindow w = TimeWindow::bounded(t.front(), t.back());
        return Trajectory1D(Sampled1D{std::move(t), std::move(z)}, w);
    }

    const Kind1D& kind() const noexcept { return kind_; }
    const TimeWindow& window() const noexcept { return window_; }
    /// Velocity component parallel to the mirror, when declared.
    const std::optional<double>& parallel_velocity() const noexcept { return parallel_velocity_; }
    bool is_sampled() const noexcept { return std::holds_alternative<Sampled1D>(kind_); }

    double position(double t) const
    {
        return std::visit(
            [t](const auto& k) -> double {
                using K = std::decay_t<decltype(k)>;
                if constexpr (std::is_same_v<K, Constant>)
                    return k.h;
                else if constexpr (std::is_same_v<K, Linear>)
                    return k.h + k.v * t;
                else if constexpr (std::is_same_v<K, Harmonic>)
                    return k.h + k.amplitude * std::sin(k.omega * t + k.phase0);
                else {
                    detail::check_in_range(k.t, t);
                    const std::size_t i = detail::segment_of(k.t, t);
                    const double f = (t - k.t[i]) / (k.t[i + 1] - k.t[i]);
                    return k.z[i] + f * (k.z[i + 1] - k.z[i]);
                }
            },
            kind_);
    }

    double velocity(double t) const
    {
        return std::visit(
            [this, t](const auto& k) -> double {
                using K = std::decay_t<decltype(k)>;
                if constexpr (std::is_same_v<K, Constant>)
                    return 0.0;
                else if constexpr (std::is_same_v<K, Linear>)
                    return k.v;
                else if constexpr (std::is_same_v<K, Harmonic>)
                    return k.amplitude * k.omega * std::cos(k.omega * t + k.phase0);
                else {
                    detail::check_in_range(k.t, t);
                    const double h = detail::fd_step(k.t, t);
                    const double lo = std::max(t - h, k.t.front());
                    const double hi = std::min(t + h, k.t.back());
                    return (position(hi) - position(lo)) / (hi - lo);
                }
            },
            kind_);
    }

    /// z(t + dt) - z(t), evaluated without cancellation for analytic kinds.
    double displacement(double t, double dt) const
    {
        return std::visit(
            [t, dt](const auto& k) -> double {
                using K = std::decay_t<decltype(k)>;
                if constexpr (std::is_same_v<K, Constant>)
                    return 0.0;
                else if constexpr (std::is_same_v<K, Linear>)
                    return k.v * dt;
                else if constexpr (std::is_same_v<K, Harmonic>)
                    return 2.0 * k.amplitude * std::cos(k.omega * (t + 0.5 * dt) + k.phase0) *
                           std::sin(0.5 * k.omega * dt);
                else {
                    // Sum slope * overlap over the segments spanned by [t, t + dt].
                    const double a = std::min(t, t + dt);
                    const double b = std::max(t, t + dt);
                    detail::check_in_range(k.t, a);
                    detail::check_in_range(k.t, b);
                    double sum = 0.0;
                    for (std::size_t i = detail::segment_of(k.t, a); i + 1 < k.t.size(); ++i) {
                        const double lo = std::max(a, k.t[i]);
                        const double hi = std::min(b, k.t[i + 1]);
                        if (hi > lo)
                            sum += (k.z[i + 1] - k.z[i]) / (k.t[i + 1] - k.t[i]) * (hi - lo);
                        if (k.t[i + 1] >= b)
                            break;
                    }
                    return dt >= 0.0 ? sum : -sum;
                }
            },
            kind_);
    }

    /// Smallest z over the window.
    double min_height() const
    {
        return std::visit(
            [this](const auto& k) -> double {
                using K = std::decay_t<decltype(k)>;
                if constexpr (std::is_same_v<K, Constant>)
                    return k.h;
                else if constexpr (std::is_same_v<K, Linear>) {
                    if (window_.improper)
                        return k.v == 0.0 ? k.h : -std::numeric_limits<double>::infinity();
                    return std::min(position(window_.t_start), position(window_.t_end));
                } else if constexpr (std::is_same_v<K, Harmonic>)
                    return sampled_minimum_harmonic(k);
                else {
                    double m = std::min(position(window_.t_start), position(window_.t_end));
                    for (std::size_t i = 0; i < k.t.size(); ++i)
                        if (window_.contains(k.t[i]))
                            m = std::min(m, k.z[i]);
                    return m;
                }
            },
            kind_);
    }

    /// Largest |dz/dt| over the window (the v_max scale).
    double max_speed() const
    {
        return std::visit(
            [](const auto& k) -> double {
                using K = std::decay_t<decltype(k)>;
                if constexpr (std::is_same_v<K, Constant>)
                    return 0.0;
                else if constexpr (std::is_same_v<K, Linear>)
                    return std::abs(k.v);
                else if constexpr (std::is_same_v<K, Harmonic>)
                    return std::abs(k.amplitude * k.omega);
                else {
                    double m = 0.0;
                    for (std::size_t i = 0; i + 1 < k.t.size(); ++i)
                        m = std::max(m, std::abs((k.z[i + 1] - k.z[i]) / (k.t[i + 1] - k.t[i])));
                    return m;
                }
            },
            kind_);
    }

    friend bool operator==(const Trajectory1D&, const Trajectory1D&) = default;

  private:
    double sampled_minimum_harmonic(const Harmonic& k) const
    {
        if (window_.improper || window_.duration() * std::abs(k.omega) >= 2.0 * std::numbers::pi)
            return k.h - std::abs(k.amplitude);
        double m = std::min(position(window_.t_start), position(window_.t_end));
        // Interior minima of sin sit at omega t + phase0 = -pi/2 + 2 pi n.
        if (k.omega != 0.0) {
            const double s = k.amplitude >= 0.0 ? -0.5 : 0.5;
            const double base = (s * std::numbers::pi - k.phase0) / k.omega;
            const double period = 2.0 * std::numbers::pi / std::abs(k.omega);
            const double n0 = std::floor((window_.t_start - base) / period);
            for (double n = n0; n <= n0 + 2.0; n += 1.0) {
                const double tm = base + n * period;
                if (window_.contains(tm))
                    m = std::min(m, position(tm));
            }
        }
        return m;
    }

    void validate() const
    {
        if (!window_.improper && !(window_.t_start < window_.t_end))
            throw InvalidArgument("trajectory window needs t_start < t_end");

        std::visit(
            [this](const auto& k) {
                using K = std::decay_t<decltype(k)>;
                if constexpr (std::is_same_v<K, Harmonic>) {
                    if (!(k.h - std::abs(k.amplitude) > 0.0))
                        throw InvalidArgument("harmonic path needs h - |A| > 0");
                    if (!(k.omega >= 0.0))
                        throw InvalidArgument("harmonic path needs omega >= 0");
                } else if constexpr (std::is_same_v<K, Sampled1D>) {
                    detail::check_sample_times(k.t);
                    if (k.z.size() != k.t.size())
                        throw InvalidArgument("sampled path needs as many z values as times");
                    if (window_.improper)
                        throw ImproperWindow("sampled paths cannot have an improper window");
                    if (window_.t_start < k.t.front() || window_.t_end > k.t.back())
                        throw OutOfWindow("window extends beyond the sampled range");
                }
            },
            kind_);

        // Dense scan plus the analytic minimum keeps the atom above the mirror.
        if (!(min_height() > 0.0))
            throw InvalidArgument("path must stay above the mirror (z > 0) over its window");
        if (!window_.improper) {
            constexpr int n = 1000;
            for (int i = 0; i <= n; ++i) {
                const double t = window_.t_start + (window_.t_end - window_.t_start) * i / n;
                if (!(position(t) > 0.0))
                    throw InvalidArgument("path must stay above the mirror (z > 0) over its window");
            }
        }
    }

    Kind1D kind_;
    TimeWindow window_;
    std::optional<double> parallel_velocity_;
};

/// Same path traversed at lambda times the speed: new(t) = old(lambda t).
inline Trajectory1D reparametrize(const Trajectory1D& tr, double lambda)
{
    if (!(lambda > 0.0) || !std::isfinite(lambda))
        throw InvalidArgument("reparametrize needs lambda > 0");
    Kind1D kind = std::visit(
        [lambda](const auto& k) -> Kind1D {
            using K = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<K, Constant>)
                return k;
            else if constexpr (std::is_same_v<K, Linear>)
                return Linear{k.h, k.v * lambda};
            else if constexpr (std::is_same_v<K, Harmonic>)
                return Harmonic{k.h, k.amplitude, k.omega * lambda, k.phase0};
            else {
                Sampled1D s = k;
                for (auto& t : s.t)
                    t /= lambda;
                return s;
            }
        },
        tr.kind());
    std::optional<double> vpar = tr.parallel_velocity();
    if (vpar)
        *vpar *= lambda;
    return Trajectory1D(std::move(kind), reparametrize(tr.window(), lambda), vpar);
}

/// Same path traversed backwards over the same window:
/// new(t) = old(t_start + t_end - t).
inline Trajectory1D reverse(const Trajectory1D& tr)
{
    const TimeWindow& w = tr.window();
    if (w.improper)
        throw ImproperWindow("reverse needs a bounded window");
    const double pivot = w.t_start + w.t_end;
    Kind1D kind = std::visit(
        [pivot, &w](const auto& k) -> Kind1D {
            using K = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<K, Constant>)
                return k;
            else if constexpr (std::is_same_v<K, Linear>)
                return Linear{k.h + k.v * pivot, -k.v};
            else if constexpr (std::is_same_v<K, Harmonic>)
                // h + A sin(w (P - t) + p) = h + A sin(w t - w P - p + pi)
                return Harmonic{k.h, k.amplitude, k.omega,
                                std::remainder(std::numbers::pi - k.omega * pivot - k.phase0,
                                               2.0 * std::numbers::pi)};
            else {
                Sampled1D s;
                for (std::size_t i = k.t.size(); i-- > 0;) {
                    s.t.push_back(pivot - k.t[i]);
                    s.z.push_back(k.z[i]);
                }
                detail::snap_reversed_ends(k.t, s.t, w);
                return s;
            }
        },
        tr.kind());
    std::optional<double> vpar = tr.parallel_velocity();
    if (vpar)
        *vpar = -*vpar;
    return Trajectory1D(std::move(kind), w, vpar);
}

// ---------------------------------------------------------------------------
// Three-dimensional paths r(t) around a particle at the origin
// ---------------------------------------------------------------------------

struct StraightLine
{
    Vec3 r0;
    Vec3 v;
    friend bool operator==(const StraightLine&, const StraightLine&) = default;
};

struct Sampled3D
{
    std::vector<double> t;
    std::vector<Vec3> r;
    friend bool operator==(const Sampled3D&, const Sampled3D&) = default;
};

using Kind3D = std::variant<StraightLine, Sampled3D>;

class Trajectory3D
{
  public:
    Trajectory3D(Kind3D kind, TimeWindow window) : kind_(std::move(kind)), window_(window)
    {
        validate();
    }

    static Trajectory3D straight_line(Vec3 r0, Vec3 v, TimeWindow window = TimeWindow::all_time())
    {
        return Trajectory3D(StraightLine{r0, v}, window);
    }

    static Trajectory3D sampled(std::vector<double> t, std::vector<Vec3> r)
    {
        detail::check_sample_times(t);
        TimeWindow w = TimeWindow::bounded(t.front(), t.back());
        return Trajectory3D(Sampled3D{std::move(t), std::move(r)}, w);
    }

    /// Closed polygon through `vertices`, one time unit per edge.
    static Trajectory3D polygon(const std::vector<Vec3>& vertices)
    {
        if (vertices.size() < 3)
            throw InvalidArgument("polygon needs at least three vertices");
        std::vector<double> t;
        std::vector<Vec3> r = vertices;
        r.push_back(vertices.front());
        for (std::size_t i = 0; i < r.size(); ++i)
            t.push_back(static_cast<double>(i));
        return sampled(std::move(t), std::move(r));
    }

    const Kind3D& kind() const noexcept { return kind_; }
    const TimeWindow& window() const noexcept { return window_; }

    Vec3 position(double t) const
    {
        if (const auto* s = std::get_if<StraightLine>(&kind_))
            return s->r0 + s->v * t;
        const auto& k = std::get<Sampled3D>(kind_);
        detail::check_in_range(k.t, t);
        const std::size_t i = detail::segment_of(k.t, t);
        const double f = (t - k.t[i]) / (k.t[i + 1] - k.t[i]);
        return k.r[i] + (k.r[i + 1] - k.r[i]) * f;
    }

    Vec3 velocity(double t) const
    {
        if (const auto* s = std::get_if<StraightLine>(&kind_))
            return s->v;
        const auto& k = std::get<Sampled3D>(kind_);
        detail::check_in_range(k.t, t);
        const double h = detail::fd_step(k.t, t);
        const double lo = std::max(t - h, k.t.front());
        const double hi = std::min(t + h, k.t.back());
        return (position(hi) - position(lo)) * (1.0 / (hi - lo));
    }

    /// Smallest |r(t)| over the window (distance of closest approach to the origin).
    double min_distance() const
    {
        auto closest_on_segment = [](const Vec3& a, const Vec3& b) {
            const Vec3 d = b - a;
            const double dd = dot(d, d);
            const double s = dd > 0.0 ? std::clamp(-dot(a, d) / dd, 0.0, 1.0) : 0.0;
            return norm(a + d * s);
        };
        if (const auto* s = std::get_if<StraightLine>(&kind_)) {
            const double vv = dot(s->v, s->v);
            if (vv == 0.0)
                return norm(s->r0);
            double t = -dot(s->r0, s->v) / vv;
            if (!window_.improper)
                t = std::clamp(t, window_.t_start, window_.t_end);
            return norm(position(t));
        }
        const auto& k = std::get<Sampled3D>(kind_);
        double m = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i + 1 < k.t.size(); ++i) {
            const double lo = std::max(window_.t_start, k.t[i]);
            const double hi = std::min(window_.t_end, k.t[i + 1]);
            if (hi >= lo)
                m = std::min(m, closest_on_segment(position(lo), position(hi)));
        }
        return m;
    }

    friend bool operator==(const Trajectory3D&, const Trajectory3D&) = default;

  private:
    void validate() const
    {
        if (!window_.improper && !(window_.t_start < window_.t_end))
            throw InvalidArgument("trajectory window needs t_start < t_end");
        if (const auto* k = std::get_if<Sampled3D>(&kind_)) {
            detail::check_sample_times(k->t);
            if (k->r.size() != k->t.size())
                throw InvalidArgument("sampled path needs as many positions as times");
            if (window_.improper)
                throw ImproperWindow("sampled paths cannot have an improper window");
            if (window_.t_start < k->t.front() || window_.t_end > k->t.back())
                throw OutOfWindow("window extends beyond the sampled range");
        } else {
            const auto& s = std::get<StraightLine>(kind_);
            if (window_.improper && dot(s.v, s.v) == 0.0)
                throw ImproperWindow("a stationary point has no all-time line integral");
        }
    }

    Kind3D kind_;
    TimeWindow window_;
};

inline Trajectory3D reparametrize(const Trajectory3D& tr, double lambda)
{
    if (!(lambda > 0.0) || !std::isfinite(lambda))
        throw InvalidArgument("reparametrize needs lambda > 0");
    if (const auto* s = std::get_if<StraightLine>(&tr.kind()))
        return Trajectory3D(StraightLine{s->r0, s->v * lambda}, reparametrize(tr.window(), lambda));
    Sampled3D k = std::get<Sampled3D>(tr.kind());
    for (auto& t : k.t)
        t /= lambda;
    return Trajectory3D(std::move(k), reparametrize(tr.window(), lambda));
}

inline Trajectory3D reverse(const Trajectory3D& tr)
{
    const TimeWindow& w = tr.window();
    if (w.improper)
        throw ImproperWindow("reverse needs a bounded window");
    const double pivot = w.t_start + w.t_end;
    if (const auto* s = std::get_if<StraightLine>(&tr.kind()))
        return Trajectory3D(StraightLine{s->r0 + s->v * pivot, -s->v}, w);
    const auto& k = std::get<Sampled3D>(tr.kind());
    Sampled3D out;
    for (std::size_t i = k.t.size(); i-- > 0;) {
        out.t.push_back(pivot - k.t[i]);
        out.r.push_back(k.r[i]);
    }
    detail::snap_reversed_ends(k.t, out.t, w);
    return Trajectory3D(std::move(out), w);
}

/// Rigid rotation of the path about the origin.
inline Trajectory3D rotate(const Trajectory3D& tr, const Mat3& rotation)
{
    if (const auto* s = std::get_if<StraightLine>(&tr.kind()))
        return Trajectory3D(StraightLine{rotation * s->r0, rotation * s->v}, tr.window());
    Sampled3D k = std::get<Sampled3D>(tr.kind());
    for (auto& r : k.r)
        r = rotation * r;
    return Trajectory3D(std::move(k), tr.window());
}

} // namespace casq::traj
