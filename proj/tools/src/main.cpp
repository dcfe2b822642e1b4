// s3bs run <config.json> [--workers N] [--out PATH]
//
// Exit status: 0 all checks pass, 1 a check exceeds its tolerance, 2 the
// config is invalid (syntax, schema, parameters, or a precondition the config
// violates), 3 a numerical failure during the run.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "runner.hpp"
#include "s3bs/errors.hpp"

namespace {

constexpr int kExitPass = 0;
constexpr int kExitTolerance = 1;
constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

std::string csv_path(const std::string& json_path) {
    std::filesystem::path p(json_path);
    if (p.extension() == ".json") return p.replace_extension(".csv").string();
    return json_path + ".csv";
}

int run(const std::string& config_path, int workers, const std::string& out_flag) {
    using namespace s3bs;
    cli::ExperimentConfig config;
    try {
        config = cli::load_config(config_path);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    }
    const std::string out = !out_flag.empty() ? out_flag : config.output.value_or("");

    cli::RunReport report;
    try {
        report = cli::run_experiment(config, Exec{workers});
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const InvalidSpec& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const WrongClass& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const UnknownClass& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const ProbeTooCloseToBoundary& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "runtime error: " << e.what() << '\n';
        return kExitRuntime;
    }

    const std::string doc = cli::to_json(report).dump(2) + "\n";
    if (out.empty()) {
        std::cout << doc;
    } else {
        std::ofstream js(out);
        std::ofstream csv(csv_path(out));
        if (!js || !csv) {
            std::cerr << "runtime error: cannot write report to '" << out << "'\n";
            return kExitRuntime;
        }
        js << doc;
        cli::write_csv(report, csv);
    }
    for (const auto& c : report.checks) {
        std::cerr << (c.pass ? "PASS " : "FAIL ") << c.name << "  max_residual=" << c.max_residual << '\n';
    }
    std::cerr << cli::to_string(report.experiment) << ": " << (report.pass ? "PASS" : "FAIL") << " ("
              << report.wall_time_s << " s)\n";
    return report.pass ? kExitPass : kExitTolerance;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Biot-Savart experiments on the 3-sphere", "s3bs"};
    app.set_version_flag("--version", s3bs::cli::tool_version());
    app.require_subcommand(1);

    std::string config_path;
    std::string out;
    int workers = s3bs::Exec::default_workers();
    auto* run_cmd = app.add_subcommand("run", "Run the experiment described by a JSON config");
    run_cmd->add_option("config", config_path, "Experiment config (JSON)")->required();
    run_cmd->add_option("--workers", workers, "Worker threads (default: S3BS_WORKERS or all cores)")
        ->check(CLI::Range(1, 4096));
    run_cmd->add_option("--out", out, "Write the JSON report here and per-probe residuals beside it (.csv)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }
    return run(config_path, workers, out);
}
