#pragma once

#include <string>
#include <utility>
#include <vector>

#include "casq/quadrature.hpp"

namespace casq
{

/// A computed phase (rad) with its quadrature error and named contributions.
struct PhaseResult
{
    double value = 0.0;
    double error_estimate = 0.0;
    bool converged = true;
    std::vector<std::pair<std::string, double>> breakdown;
    std::vector<std::string> warnings;

    static PhaseResult from(const quad::IntegralResult& r, double scale)
    {
        PhaseResult p;
        p.value = scale * r.value;
        p.error_estimate = std::abs(scale) * r.error_estimate;
        p.converged = r.converged;
        return p;
    }

    double term(const std::string& name) const
    {
        for (const auto& [k, v] : breakdown)
            if (k == name)
                return v;
        throw InvalidArgument("no breakdown term '" + name + "'");
    }
};

} // namespace casq
