#pragma once

#include <cstdint>
#include <cstdio>
#include <numbers>
#include <string>

namespace casq::constants
{

// CODATA 2018 recommended values, SI.
inline constexpr double hbar = 1.054571817e-34;          // J s
inline constexpr double speed_of_light = 299792458.0;    // m / s
inline constexpr double epsilon0 = 8.8541878128e-12;     // F / m
inline constexpr double bohr_radius = 5.29177210903e-11; // m
inline constexpr double elementary_charge = 1.602176634e-19; // C

inline constexpr double pi = std::numbers::pi;
inline constexpr double four_pi_eps0 = 4.0 * pi * epsilon0;

inline constexpr const char* toolkit_version = "0.1.0";

// FNV-1a over the printed constants table; identifies the table a report was
// produced with.
inline std::string table_hash()
{
    char buf[256];
    std::snprintf(buf, sizeof buf, "hbar=%.17g;c=%.17g;eps0=%.17g;a0=%.17g;e=%.17g",
                  hbar, speed_of_light, epsilon0, bohr_radius, elementary_charge);
    std::uint64_t h = 1469598103934665603ull;
    for (const char* p = buf; *p; ++p) {
        h ^= static_cast<unsigned char>(*p);
        h *= 1099511628211ull;
    }
    char out[17];
    std::snprintf(out, sizeof out, "%016llx", static_cast<unsigned long long>(h));
    return out;
}

} // namespace casq::constants
