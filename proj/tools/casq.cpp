#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "casq/emit.hpp"
#include "casq/report.hpp"
#include "casq/scenario.hpp"
#include "casq/selftest.hpp"
#include "casq/species.hpp"
#include "casq/sweep.hpp"

using namespace casq;
using namespace casq::cli;

namespace
{

void output(const std::string& text, const std::string& path)
{
    if (path.empty())
        std::cout << text << std::flush;
    else
        write_file(path, text);
}

std::vector<AtomSpecies> load_for(const Scenario& s, const std::string& scenario_path, const std::string& db_flag)
{
    const std::vector<AtomSpecies> db = load_species_db(resolve_species_db(s, scenario_path, db_flag));
    find_species(db, s.species);
    return db;
}

void print_species(const AtomSpecies& s)
{
    std::printf("%s\n", s.name().c_str());
    std::printf("  alpha(0)        %s F m^2\n", fmt17(alpha_static(s)).c_str());
    std::printf("  radius a        %s m\n", fmt17(equivalent_radius(s)).c_str());
    std::printf("  <d^2>           %s C^2 m^2\n", fmt17(mean_square_dipole(s)).c_str());
    for (const auto& t : s.transitions())
        std::printf("  transition      omega_eg %s rad/s  d2 %s C^2 m^2\n", fmt17(t.omega_eg).c_str(),
                    fmt17(t.d2).c_str());
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"casq: Casimir-type geometric phases and dynamical Casimir emission"};
    app.require_subcommand(1);
    app.set_version_flag("--version", constants::toolkit_version);

    std::string db_flag;
    app.add_option("--species-db", db_flag, "species database (default: $CASQ_SPECIES_DB or bundled)");

    std::string scenario_path, out_path, format_name = "csv";
    bool with_timing = false;

    auto* run = app.add_subcommand("run", "evaluate one scenario");
    run->add_option("scenario", scenario_path, "scenario JSON")->required();
    run->add_option("--out", out_path, "output file (default: stdout)");
    run->add_option("--format", format_name, "csv | json | svg-plotdata")
        ->check(CLI::IsMember({"csv", "json", "svg-plotdata"}));
    run->add_flag("--with-timing", with_timing, "include wall time in JSON output");

    std::string param;
    double from = 0.0, to = 0.0;
    int points = 0, jobs = 1;
    bool log_scale = false;
    std::vector<double> values;
    auto* sw = app.add_subcommand("sweep", "evaluate a scenario over a range of one parameter");
    sw->add_option("scenario", scenario_path, "scenario JSON")->required();
    sw->add_option("--param", param, "dotted path of a numeric scenario field")->required();
    auto* from_opt = sw->add_option("--from", from, "first value");
    auto* to_opt = sw->add_option("--to", to, "last value");
    auto* points_opt = sw->add_option("--points", points, "number of values (>= 2)");
    auto* values_opt = sw->add_option("--values", values, "explicit values")->delimiter(',');
    sw->add_flag("--log", log_scale, "logarithmic spacing");
    sw->add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);
    sw->add_option("--out", out_path, "output file (default: stdout)");
    sw->add_option("--format", format_name, "csv | json | svg-plotdata")
        ->check(CLI::IsMember({"csv", "json", "svg-plotdata"}));
    from_opt->needs(to_opt, points_opt)->excludes(values_opt);
    to_opt->needs(from_opt);
    points_opt->needs(from_opt);

    auto* sp = app.add_subcommand("species", "inspect the species database");
    sp->require_subcommand(1);
    auto* sp_list = sp->add_subcommand("list", "list species names");
    std::string species_name;
    auto* sp_show = sp->add_subcommand("show", "show one species");
    sp_show->add_option("name", species_name)->required();

    auto* st = app.add_subcommand("selftest", "run the acceptance checks");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*run) {
            const Scenario s = parse_scenario(scenario_path);
            const auto db = load_for(s, scenario_path, db_flag);
            const Report r = run_scenario(s, db, with_timing);
            output(render(r, parse_format(format_name)), out_path);
            for (const auto& w : r.warnings)
                std::cerr << "warning: " << w << '\n';
            if (!r.converged) {
                std::cerr << "NonConvergent: quadrature did not reach tolerance\n";
                return 3;
            }
            return 0;
        }
        if (*sw) {
            const Scenario s = parse_scenario(scenario_path);
            const auto db = load_for(s, scenario_path, db_flag);
            SweepSpec spec;
            if (!values.empty())
                spec = SweepSpec::list(param, values);
            else if (*from_opt)
                spec = SweepSpec::range(param, from, to, points, log_scale ? SweepScale::log : SweepScale::linear);
            else
                throw InvalidArgument("sweep needs --from/--to/--points or --values");
            const SweepTable t = sweep(s, spec, db, jobs);
            output(render(t, s, parse_format(format_name)), out_path);
            int code = 0;
            for (const auto& row : t.rows) {
                if (!row.report) {
                    std::cerr << "row " << fmt17(row.param_value) << ": " << row.error_message << '\n';
                    code = code ? code : row.exit_code;
                } else if (!row.report->converged) {
                    std::cerr << "row " << fmt17(row.param_value) << ": quadrature did not converge\n";
                    code = code ? code : 3;
                }
            }
            return code;
        }
        if (*sp) {
            const auto db = load_species_db(db_flag.empty() ? default_species_db_path() : db_flag);
            if (*sp_list)
                for (const auto& s : db)
                    std::printf("%s\n", s.name().c_str());
            else if (*sp_show)
                print_species(find_species(db, species_name));
            return 0;
        }
        if (*st) {
            bool ok = true;
            for (const auto& r : selftest::run_all()) {
                std::printf("%s\n", selftest::format_line(r).c_str());
                ok = ok && r.passed;
            }
            std::printf("selftest: %s\n", ok ? "PASS" : "FAIL");
            return ok ? 0 : 1;
        }
    } catch (const Error& e) {
        std::cerr << e.what() << '\n';
        return e.exit_code();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
    return 0;
}
