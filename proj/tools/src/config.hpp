#pragma once

// Experiment configuration: a strict reading of the JSON config format
// described by docs/config.schema.json. Every error names the offending key.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "s3bs/biot_savart.hpp"
#include "s3bs/calculus.hpp"
#include "s3bs/domains.hpp"
#include "s3bs/fields.hpp"

namespace s3bs::cli {

inline constexpr int kSchemaVersion = 1;

enum class Experiment {
    bs_eval,
    curl_check,
    div_check,
    key_lemma,
    vxn_identity,
    helicity,
    self_adjoint,
    kernel_check,
    energy_check,
    maxwell_suite,
};

std::string to_string(Experiment e);

struct ProbeRule {
    enum class Kind { list, random_inside, random_outside, core_circle, random_sphere };
    Kind kind = Kind::list;
    std::vector<Point> points;
    std::size_t count = 0;
};

/// Method selection for experiments that evaluate BS; `both` runs the two
/// formulas and checks their agreement.
enum class MethodChoice { parallel_transport, left_translation, both };

struct Tolerance {
    std::optional<double> relative;
    std::optional<double> absolute;
    std::optional<double> k_bounds;
};

struct ExperimentConfig {
    Experiment experiment = Experiment::bs_eval;
    std::uint64_t seed = 0;
    std::optional<Domain> domain;
    std::optional<VectorField> field;
    std::optional<VectorField> second_field;
    std::optional<ScalarField> potential;
    QuadratureSpec quadrature;
    std::optional<QuadratureSpec> inner_quadrature;
    MethodChoice method = MethodChoice::parallel_transport;
    std::optional<ProbeRule> probes;
    Tolerance tolerance;
    /// bs_eval: the expected field; helicity: the expected value.
    std::optional<VectorField> expected_field;
    std::optional<double> expected_value;
    std::optional<FDScheme> finite_difference;
    std::size_t samples = 100;
    double alpha_min = 0.2;
    double alpha_max = 2.9;
    std::optional<std::string> output;
    nlohmann::ordered_json raw;
};

/// Parses and validates a config document. Throws ConfigError.
ExperimentConfig parse_config(const nlohmann::ordered_json& doc);

/// Reads a file and parses it; unreadable files and JSON syntax errors are
/// reported as ConfigError.
ExperimentConfig load_config(const std::string& path);

Domain parse_domain(const nlohmann::ordered_json& j, const std::string& path);
VectorField parse_field(const nlohmann::ordered_json& j, const std::string& path);
ScalarField parse_scalar(const nlohmann::ordered_json& j, const std::string& path);

}  // namespace s3bs::cli
