// dephaser: phase-damping rates, master-equation integration and chain-bound
// checks for small qubit registers.
//
//   dephaser presets
//   dephaser rates  --scenario s.json [--out dir]
//   dephaser evolve --scenario s.json [--tmax T] [--steps N] [--out dir]
//   dephaser bound  --scenario s.json (--ghz | --pair uud,ddd) [--out dir]
//   dephaser verify [--trials N] [--seed S] [--qubits n] [--out dir]
//
// The JSON report goes to stdout; --out additionally writes the CSV/JSON files.
// Exit codes: 0 ok, 2 validation error, 3 theorem violation.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "dephaser/commands.hpp"
#include "dephaser/errors.hpp"

namespace {

using namespace dephaser;

int emit(const CommandResult& result, const std::optional<std::string>& out_dir) {
    if (out_dir) {
        std::filesystem::create_directories(*out_dir);
        for (const auto& file : result.files) {
            write_file_atomic(std::filesystem::path(*out_dir) / file.name, file.content);
        }
    }
    std::cout << result.report.dump(2) << '\n';
    return result.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Phase damping of qubit registers: rates, dynamics and entanglement bounds"};
    app.require_subcommand(1);

    std::string scenario_path;
    std::optional<std::string> out_dir;
    std::optional<double> t_max;
    std::optional<std::size_t> steps;
    bool ghz = false;
    std::optional<std::string> pair;
    std::size_t trials = 1000;
    std::uint64_t seed = VerifyOptions{}.seed;
    std::size_t qubits = 4;

    auto* presets = app.add_subcommand("presets", "List preset names");

    auto* rates = app.add_subcommand("rates", "Closed-form Gamma/Delta/omega table");
    rates->add_option("--scenario", scenario_path, "Scenario JSON")->required();
    rates->add_option("--out", out_dir, "Directory for rates.csv and rates.json");

    auto* evolve_cmd = app.add_subcommand("evolve", "Integrate and fit tracked coherences");
    evolve_cmd->add_option("--scenario", scenario_path, "Scenario JSON")->required();
    evolve_cmd->add_option("--out", out_dir, "Directory for trajectory.csv and report.json");
    evolve_cmd->add_option("--tmax", t_max, "Override t_max");
    evolve_cmd->add_option("--steps", steps, "Override step count");

    auto* bound = app.add_subcommand("bound", "Chain bound between two basis states");
    bound->add_option("--scenario", scenario_path, "Scenario JSON")->required();
    bound->add_option("--out", out_dir, "Directory for bound.json");
    auto* ghz_flag = bound->add_flag("--ghz", ghz, "Use the GHZ chain d..d -> u..u");
    bound->add_option("--pair", pair, "Endpoints as bits,bits")->excludes(ghz_flag);

    auto* verify = app.add_subcommand("verify", "Randomized checks of the three theorems");
    verify->add_option("--trials", trials, "Trials per suite");
    verify->add_option("--seed", seed, "Base seed");
    verify->add_option("--qubits", qubits, "Register size for the chain-bound suite")
        ->check(CLI::Range(1, 10));
    verify->add_option("--out", out_dir, "Directory for verify.json");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitValidation;
    }

    try {
        const Tolerances tol = Tolerances::from_environment();
        if (presets->parsed()) return emit(cmd_presets(), out_dir);
        if (verify->parsed()) {
            VerifyOptions options;
            options.trials = trials;
            options.seed = seed;
            options.n_qubits = qubits;
            return emit(cmd_verify(options, tol), out_dir);
        }

        Scenario scenario = load_scenario(scenario_path);
        if (rates->parsed()) return emit(cmd_rates(scenario, tol), out_dir);
        if (evolve_cmd->parsed()) {
            if (t_max) scenario.t_max = *t_max;
            if (steps) scenario.steps = *steps;
            return emit(cmd_evolve(scenario, tol), out_dir);
        }
        BoundTarget target;
        target.ghz = ghz;
        if (pair) target.pair = parse_pair(*pair);
        return emit(cmd_bound(scenario, target, tol), out_dir);
    } catch (const TheoremViolation& e) {
        std::cerr << "theorem violation: " << e.what() << '\n';
        return kExitTheoremViolation;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const DimensionError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const IntegrationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
