#pragma once

#include <cmath>
#include <cstdio>
#include <variant>

#include "casq/errors.hpp"
#include "casq/quadrature.hpp"
#include "casq/trajectories.hpp"
#include "casq/vec3.hpp"

namespace casq::quad
{

/// Line integral of a vector field along a path, int F(r) . dr = int F(r(t)) . v(t) dt.
///
/// Straight lines use their exact velocity; sampled paths are integrated one
/// segment at a time with the exact segment velocity. Improper windows go
/// through integrate_improper centred on the point of closest approach.
/// Throws CollisionGuard when the path comes closer than `r_min_guard` to
/// the origin.
template<class Field>
IntegralResult line_integral(Field&& field, const traj::Trajectory3D& path,
                             const QuadratureSpec& spec = {}, double r_min_guard = 0.0)
{
    const double closest = path.min_distance();
    if (closest < r_min_guard || (r_min_guard > 0.0 && closest == r_min_guard)) {
        char buf[128];
        std::snprintf(buf, sizeof buf, "path passes %.6g m from the origin (guard %.6g m)", closest,
                      r_min_guard);
        throw CollisionGuard(buf);
    }

    const traj::TimeWindow& w = path.window();
    if (const auto* s = std::get_if<traj::StraightLine>(&path.kind())) {
        auto integrand = [&](double t) { return dot(field(s->r0 + s->v * t), s->v); };
        if (!w.improper)
            return integrate_adaptive(integrand, w.t_start, w.t_end, spec);

        const double speed = norm(s->v);
        const double center = -dot(s->r0, s->v) / (speed * speed);
        double length = closest > 0.0 ? closest : norm(s->r0);
        if (!(length > 0.0))
            length = 1.0;
        return integrate_improper(integrand, spec, center, length / speed);
    }

    const auto& k = std::get<traj::Sampled3D>(path.kind());
    IntegralResult total;
    QuadratureSpec piece = spec;
    piece.abs_tol = spec.abs_tol / static_cast<double>(k.t.size() - 1);
    for (std::size_t i = 0; i + 1 < k.t.size(); ++i) {
        const double lo = std::max(w.t_start, k.t[i]);
        const double hi = std::min(w.t_end, k.t[i + 1]);
        if (!(hi > lo))
            continue;
        const Vec3 v = (k.r[i + 1] - k.r[i]) * (1.0 / (k.t[i + 1] - k.t[i]));
        const Vec3 r_lo = path.position(lo);
        // Parametrize by the offset from `lo` so r stays exact on the segment.
        auto integrand = [&](double dt) { return dot(field(r_lo + v * dt), v); };
        IntegralResult r = integrate_adaptive(integrand, 0.0, hi - lo, piece);
        total.value += r.value;
        total.error_estimate += r.error_estimate;
        total.evaluations += r.evaluations;
        total.converged = total.converged && r.converged;
    }
    return total;
}

} // namespace casq::quad
