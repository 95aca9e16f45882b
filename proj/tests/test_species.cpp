#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>

#include <gtest/gtest.h>

#include "casq/species.hpp"

using namespace casq;

namespace
{

constexpr double hbar = 1.054571817e-34;
constexpr double eps0 = 8.8541878128e-12;
constexpr double pi = 3.14159265358979323846;

const double w0 = 2.4e15;
const double d2 = 1.3e-57;

std::string temp_path(const std::string& name)
{
    return (std::filesystem::temp_directory_path() / ("casq_test_" + name)).string();
}

} // namespace

TEST(Species, ConstructionValidates)
{
    EXPECT_THROW(AtomSpecies("x", {}), InvalidArgument);
    EXPECT_THROW(AtomSpecies::two_level("x", -1.0, d2), InvalidArgument);
    EXPECT_THROW(AtomSpecies::two_level("x", w0, -1.0), InvalidArgument);
    EXPECT_THROW(AtomSpecies("x", {{w0, d2}, {w0, 2 * d2}}), InvalidArgument);
    EXPECT_NO_THROW(AtomSpecies::two_level("x", w0, 0.0));
}

TEST(Species, StaticPolarizabilitySingleTransition)
{
    const auto s = AtomSpecies::two_level("x", w0, d2);
    const double oracle = 2.0 * d2 / (3.0 * hbar * w0);
    EXPECT_NEAR(alpha_of_omega(s, 0.0) / oracle, 1.0, 1e-14);
    EXPECT_EQ(alpha_static(s), alpha_of_omega(s, 0.0));
}

TEST(Species, DoublesAtOmegaOverRootTwo)
{
    const auto s = AtomSpecies::two_level("x", w0, d2);
    EXPECT_NEAR(alpha_of_omega(s, w0 / std::sqrt(2.0)) / alpha_static(s), 2.0, 1e-13);
}

TEST(Species, ContinuityAtOrigin)
{
    const auto s = AtomSpecies("x", {{w0, d2}, {1.7 * w0, 0.3 * d2}});
    EXPECT_NEAR(alpha_of_omega(s, 1e-6 * w0) / alpha_static(s), 1.0, 1e-12);
}

TEST(Species, EvenInOmega)
{
    const auto s = AtomSpecies("x", {{w0, d2}, {1.7 * w0, 0.3 * d2}});
    for (double f : {0.1, 0.4, 0.8, 1.2, 2.5})
        EXPECT_EQ(alpha_of_omega(s, f * w0), alpha_of_omega(s, -f * w0));
}

TEST(Species, IncreasingBelowFirstResonance)
{
    const auto s = AtomSpecies("x", {{w0, d2}, {1.7 * w0, 0.3 * d2}});
    double prev = alpha_of_omega(s, 0.0);
    for (int i = 1; i < 200; ++i) {
        const double a = alpha_of_omega(s, w0 * (1.0 - 1e-5) * i / 199.0);
        EXPECT_GT(a, prev);
        prev = a;
    }
}

TEST(Species, PoleGuard)
{
    const auto s = AtomSpecies::two_level("x", w0, d2);
    EXPECT_THROW(alpha_of_omega(s, w0), PoleProximity);
    EXPECT_THROW(alpha_of_omega(s, w0 * (1 + 5e-7)), PoleProximity);
    EXPECT_NO_THROW(alpha_of_omega(s, w0 * (1 + 2e-6)));
    EXPECT_NO_THROW(alpha_of_omega(s, w0 * (1 + 5e-7), 1e-7));
}

TEST(Species, EquivalentRadiusRoundTrip)
{
    const double a = 1e-10;
    EXPECT_NEAR(equivalent_radius(4 * pi * eps0 * a * a * a) / a, 1.0, 1e-14);
}

TEST(Species, LinearityInTransitions)
{
    const auto one = AtomSpecies::two_level("x", w0, d2);
    // Two transitions at (numerically) the same frequency must be distinct; use a
    // tiny split and compare at the oracle's precision.
    const auto two = AtomSpecies("y", {{w0, d2}, {w0 * (1 + 1e-13), d2}});
    EXPECT_NEAR(alpha_static(two) / alpha_static(one), 2.0, 1e-12);
}

TEST(Species, MeanSquareDipole)
{
    EXPECT_EQ(mean_square_dipole(AtomSpecies::two_level("x", w0, 1.0)), 1.0);
    EXPECT_EQ(mean_square_dipole(AtomSpecies("x", {{w0, 1.0}, {2 * w0, 2.0}})), 3.0);
    const auto s = AtomSpecies::two_level("x", w0, d2);
    EXPECT_NEAR(mean_square_dipole(s) / (1.5 * hbar * w0 * alpha_static(s)), 1.0, 1e-14);
}

TEST(Species, MeanSquareDipoleAdditive)
{
    const std::vector<Transition> a{{w0, d2}, {2 * w0, 0.5 * d2}};
    const std::vector<Transition> b{{3 * w0, 0.1 * d2}};
    std::vector<Transition> ab = a;
    ab.insert(ab.end(), b.begin(), b.end());
    EXPECT_DOUBLE_EQ(mean_square_dipole(AtomSpecies("ab", ab)),
                     mean_square_dipole(AtomSpecies("a", a)) + mean_square_dipole(AtomSpecies("b", b)));
}

TEST(Species, TwoLevelFromAlpha)
{
    const double alpha0 = 4 * pi * eps0 * 4.7e-29;
    const auto s = AtomSpecies::two_level_from_alpha("x", w0, alpha0);
    EXPECT_NEAR(alpha_static(s) / alpha0, 1.0, 1e-14);
    EXPECT_TRUE(s.is_two_level());
}

TEST(SpeciesDb, LoadOneSpecies)
{
    const std::string p = temp_path("one.json");
    std::ofstream(p) << R"({"species":[{"name":"A","transitions":[{"omega_eg_rad_per_s":1e15,"d2_C2m2":1e-57}]}]})";
    const auto db = load_species_db(p);
    ASSERT_EQ(db.size(), 1u);
    EXPECT_EQ(db[0].name(), "A");
    EXPECT_EQ(db[0].transitions()[0].omega_eg, 1e15);
}

TEST(SpeciesDb, SaveLoadRoundTrip)
{
    const std::vector<AtomSpecies> list{AtomSpecies("A", {{w0, d2}, {1.1 * w0, 0.2 * d2}}),
                                        AtomSpecies::two_level("B", 0.3 * w0, 7e-58)};
    const std::string p = temp_path("round.json");
    save_species_db(list, p);
    EXPECT_EQ(load_species_db(p), list);
}

TEST(SpeciesDb, NegativeFrequencyNamesField)
{
    const auto doc = nlohmann::json::parse(
        R"({"species":[{"name":"A","transitions":[{"omega_eg_rad_per_s":1e15,"d2_C2m2":1e-57},
                                                  {"omega_eg_rad_per_s":-2e15,"d2_C2m2":1e-57}]}]})");
    try {
        parse_species_db(doc);
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_NE(std::string(e.what()).find("species[0].transitions[1].omega_eg_rad_per_s"), std::string::npos)
            << e.what();
    }
}

TEST(SpeciesDb, Duplicates)
{
    const auto doc = nlohmann::json::parse(
        R"({"species":[{"name":"A","transitions":[{"omega_eg_rad_per_s":1e15,"d2_C2m2":1e-57}]},
                       {"name":"A","transitions":[{"omega_eg_rad_per_s":2e15,"d2_C2m2":1e-57}]}]})");
    EXPECT_THROW(parse_species_db(doc), DuplicateSpecies);
}

TEST(SpeciesDb, MalformedInputs)
{
    EXPECT_THROW(parse_species_db(nlohmann::json::parse(R"({"atoms":[]})")), ParseError);
    EXPECT_THROW(parse_species_db(nlohmann::json::parse(R"({"species":[{"name":"A","transitions":[]}]})")),
                 ParseError);
    EXPECT_THROW(parse_species_db(nlohmann::json::parse(
                     R"({"species":[{"name":"A","transitions":[{"omega_eg_rad_per_s":"x","d2_C2m2":1}]}]})")),
                 ParseError);
    const std::string p = temp_path("broken.json");
    std::ofstream(p) << "{ not json";
    EXPECT_THROW(load_species_db(p), ParseError);
    EXPECT_THROW(load_species_db(temp_path("does_not_exist.json")), IoError);
}

TEST(SpeciesDb, FindSpecies)
{
    const std::vector<AtomSpecies> db{AtomSpecies::two_level("A", w0, d2)};
    EXPECT_EQ(find_species(db, "A").name(), "A");
    EXPECT_THROW(find_species(db, "B"), UnknownSpecies);
}

TEST(SpeciesDb, BundledDatabase)
{
    const auto db = load_species_db(CASQ_SOURCE_DIR "/data/species.json");
    const auto& rb = find_species(db, "Rb87_D2");
    EXPECT_TRUE(rb.is_two_level());
    // Rb ground-state polarizability is about 5e-39 F m^2 from the D lines alone.
    EXPECT_GT(alpha_static(find_species(db, "Rb87_D")), 4e-39);
    EXPECT_LT(alpha_static(find_species(db, "Rb87_D")), 6e-39);
}

TEST(SpeciesDb, EnvironmentOverride)
{
    ::setenv("CASQ_SPECIES_DB", "/some/where.json", 1);
    EXPECT_EQ(default_species_db_path(), "/some/where.json");
    ::unsetenv("CASQ_SPECIES_DB");
    EXPECT_NE(default_species_db_path(), "/some/where.json");
}
