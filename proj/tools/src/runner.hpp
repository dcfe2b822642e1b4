#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "config.hpp"
#include "s3bs/identities.hpp"

namespace s3bs::cli {

struct RunReport {
    Experiment experiment = Experiment::bs_eval;
    std::vector<IdentityReport> checks;
    bool pass = false;
    double wall_time_s = 0.0;
    nlohmann::ordered_json config;
};

/// Probe locations for a rule; random rules keep `margin` from the boundary.
std::vector<Point> resolve_probes(const ProbeRule& rule, const Domain* omega, std::uint64_t seed, double margin);

/// Runs the configured experiment. Library errors propagate with the
/// experiment (and probe, where known) prepended to the message.
RunReport run_experiment(const ExperimentConfig& config, const Exec& exec);

/// Report document; with `include_timing` false the payload depends only on
/// the config.
nlohmann::ordered_json to_json(const RunReport& report, bool include_timing = true);

/// One row per probe (or per check without probes).
void write_csv(const RunReport& report, std::ostream& out);

std::string tool_version();

}  // namespace s3bs::cli
