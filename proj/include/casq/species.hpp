#pragma once

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "casq/constants.hpp"
#include "casq/errors.hpp"

namespace casq
{

/// One ground-to-excited dipole transition of an atom.
struct Transition
{
    double omega_eg = 0.0; ///< angular frequency, rad/s
    double d2 = 0.0;       ///< |<e|d|g>|^2, C^2 m^2

    friend bool operator==(const Transition&, const Transition&) = default;
};

/// Ground-state atom described by its dipole transitions.
///
/// Everything the toolkit needs from the internal structure (static and
/// dynamic polarizability, mean-square dipole) follows from the list.
class AtomSpecies
{
  public:
    AtomSpecies() = default;

    AtomSpecies(std::string name, std::vector<Transition> transitions)
        : name_(std::move(name)), transitions_(std::move(transitions))
    {
        validate();
    }

    /// Two-level atom with transition frequency omega0 and |d|^2 = d2.
    static AtomSpecies two_level(std::string name, double omega0, double d2)
    {
        return AtomSpecies(std::move(name), {Transition{omega0, d2}});
    }

    /// Two-level atom with the given static polarizability.
    static AtomSpecies two_level_from_alpha(std::string name, double omega0, double alpha0)
    {
        return two_level(std::move(name), omega0, 1.5 * constants::hbar * omega0 * alpha0);
    }

    const std::string& name() const noexcept { return name_; }
    const std::vector<Transition>& transitions() const noexcept { return transitions_; }
    bool is_two_level() const noexcept { return transitions_.size() == 1; }

    double lowest_transition() const
    {
        double w = transitions_.front().omega_eg;
        for (const auto& t : transitions_)
            w = std::min(w, t.omega_eg);
        return w;
    }

    friend bool operator==(const AtomSpecies&, const AtomSpecies&) = default;

  private:
    void validate() const
    {
        if (transitions_.empty())
            throw InvalidArgument("species '" + name_ + "' has no transitions");
        std::set<double> seen;
        for (const auto& t : transitions_) {
            if (!(t.omega_eg > 0.0) || !std::isfinite(t.omega_eg))
                throw InvalidArgument("species '" + name_ + "': omega_eg must be positive");
            if (!(t.d2 >= 0.0) || !std::isfinite(t.d2))
                throw InvalidArgument("species '" + name_ + "': d2 must be non-negative");
            if (!seen.insert(t.omega_eg).second)
                throw InvalidArgument("species '" + name_ + "': duplicate transition frequency");
        }
    }

    std::string name_;
    std::vector<Transition> transitions_;
};

/// Relative half-width of the excluded band around each transition.
inline constexpr double default_pole_guard = 1e-6;

/// Lossless dynamic polarizability sum_e 2 w_eg |d_eg|^2 / (3 hbar (w_eg^2 - w^2)).
///
/// Negative omega is accepted (the response is even). Throws PoleProximity
/// within guard * w_eg of any transition.
inline double alpha_of_omega(const AtomSpecies& species, double omega,
                             double guard = default_pole_guard)
{
    double alpha = 0.0;
    const double w = std::abs(omega);
    for (const auto& t : species.transitions()) {
        if (std::abs(w - t.omega_eg) < guard * t.omega_eg) {
            std::ostringstream msg;
            msg.precision(17);
            msg << "omega = " << omega << " rad/s is within the guard band of the transition at "
                << t.omega_eg << " rad/s";
            throw PoleProximity(msg.str());
        }
        // Factored denominator keeps full precision close to the pole.
        const double denom = (t.omega_eg - w) * (t.omega_eg + w);
        alpha += 2.0 * t.omega_eg * t.d2 / (3.0 * constants::hbar * denom);
    }
    return alpha;
}

inline double alpha_static(const AtomSpecies& species) { return alpha_of_omega(species, 0.0); }

/// Radius a with alpha = 4 pi eps0 a^3.
inline double equivalent_radius(double alpha0) { return std::cbrt(alpha0 / constants::four_pi_eps0); }

inline double equivalent_radius(const AtomSpecies& species)
{
    return equivalent_radius(alpha_static(species));
}

inline double mean_square_dipole(const AtomSpecies& species)
{
    double s = 0.0;
    for (const auto& t : species.transitions())
        s += t.d2;
    return s;
}

// ---------------------------------------------------------------------------
// Species database
// ---------------------------------------------------------------------------

inline nlohmann::json species_to_json(const AtomSpecies& s)
{
    nlohmann::json tr = nlohmann::json::array();
    for (const auto& t : s.transitions())
        tr.push_back({{"omega_eg_rad_per_s", t.omega_eg}, {"d2_C2m2", t.d2}});
    return {{"name", s.name()}, {"transitions", tr}};
}

inline nlohmann::json species_db_to_json(const std::vector<AtomSpecies>& list)
{
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& s : list)
        arr.push_back(species_to_json(s));
    return {{"species", arr}};
}

namespace detail
{

inline const nlohmann::json& require_field(const nlohmann::json& obj, const std::string& key,
                                           const std::string& where)
{
    if (!obj.is_object() || !obj.contains(key))
        throw ParseError(where + ": missing field '" + key + "'");
    return obj.at(key);
}

inline double require_number(const nlohmann::json& obj, const std::string& key,
                             const std::string& where)
{
    const auto& v = require_field(obj, key, where);
    if (!v.is_number())
        throw ParseError(where + "." + key + ": expected a number");
    return v.get<double>();
}

} // namespace detail

/// Parse a species list from a JSON document (see species_db_to_json).
inline std::vector<AtomSpecies> parse_species_db(const nlohmann::json& doc)
{
    const auto& arr = detail::require_field(doc, "species", "species db");
    if (!arr.is_array())
        throw ParseError("species db.species: expected an array");

    std::vector<AtomSpecies> out;
    std::set<std::string> names;
    for (std::size_t i = 0; i < arr.size(); ++i) {
        const std::string where = "species[" + std::to_string(i) + "]";
        const auto& entry = arr[i];
        const auto& name_j = detail::require_field(entry, "name", where);
        if (!name_j.is_string())
            throw ParseError(where + ".name: expected a string");
        const std::string name = name_j.get<std::string>();

        const auto& tr = detail::require_field(entry, "transitions", where);
        if (!tr.is_array() || tr.empty())
            throw ParseError(where + ".transitions: expected a non-empty array");

        std::vector<Transition> transitions;
        for (std::size_t j = 0; j < tr.size(); ++j) {
            const std::string twhere = where + ".transitions[" + std::to_string(j) + "]";
            Transition t;
            t.omega_eg = detail::require_number(tr[j], "omega_eg_rad_per_s", twhere);
            t.d2 = detail::require_number(tr[j], "d2_C2m2", twhere);
            if (!(t.omega_eg > 0.0))
                throw ParseError(twhere + ".omega_eg_rad_per_s: must be positive");
            if (!(t.d2 >= 0.0))
                throw ParseError(twhere + ".d2_C2m2: must be non-negative");
            transitions.push_back(t);
        }

        if (!names.insert(name).second)
            throw DuplicateSpecies("species '" + name + "' appears more than once");
        try {
            out.emplace_back(name, std::move(transitions));
        } catch (const InvalidArgument& e) {
            throw ParseError(where + ": " + e.message());
        }
    }
    return out;
}

inline std::vector<AtomSpecies> load_species_db(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open species database '" + path + "'");
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(path + ": " + e.what());
    }
    try {
        return parse_species_db(doc);
    } catch (const ParseError& e) {
        throw ParseError(path + ": " + e.message());
    }
}

inline void save_species_db(const std::vector<AtomSpecies>& list, const std::string& path)
{
    std::ofstream out(path);
    if (!out)
        throw IoError("cannot write species database '" + path + "'");
    out << species_db_to_json(list).dump(2) << '\n';
}

inline const AtomSpecies& find_species(const std::vector<AtomSpecies>& db, const std::string& name)
{
    for (const auto& s : db)
        if (s.name() == name)
            return s;
    throw UnknownSpecies("no species named '" + name + "'");
}

#ifndef CASQ_DEFAULT_SPECIES_DB
#define CASQ_DEFAULT_SPECIES_DB "data/species.json"
#endif

/// CASQ_SPECIES_DB if set, else the bundled database path.
inline std::string default_species_db_path()
{
    if (const char* env = std::getenv("CASQ_SPECIES_DB"); env && *env)
        return env;
    return CASQ_DEFAULT_SPECIES_DB;
}

} // namespace casq
