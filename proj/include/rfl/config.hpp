#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rfl/errors.hpp"
#include "rfl/experiments.hpp"
#include "rfl/functionals.hpp"
#include "rfl/io.hpp"
#include "rfl/kernels.hpp"
#include "rfl/tanh_net.hpp"

namespace rfl {

/// Invalid or unknown configuration; the CLI maps it to exit code 2.
class ConfigError : public ArgumentError {
 public:
  using ArgumentError::ArgumentError;
};

/// The published run-config schema.
const Json& run_config_schema();

/// Checks `value` against a JSON-schema subset: type, enum, minimum,
/// maximum, exclusiveMinimum, required, properties, additionalProperties,
/// items, minItems, maxItems. Throws ConfigError naming the offending path.
void validate_schema(const Json& value, const Json& schema, const std::string& path = "$");

struct RunConfig {
  std::string command;
  std::optional<Kernel> kernel;
  std::optional<TargetFunctional> functional;
  std::optional<int> m;
  std::vector<int> m_list;
  std::optional<double> M;
  std::optional<std::pair<Index, Index>> widths;
  std::vector<std::pair<Index, Index>> width_list;
  std::optional<int> n_samples;
  int n_centers = 8;
  std::uint64_t seed = 0;
  std::string output_dir;
  int eval_resolution = 16;
  int threads = 1;
  TrainConfig train;
  std::string theorem = "gaussian";
  TheoremParams theorem_params;
  Json merged = Json::object();  // validated effective config
};

/// Validates the merged JSON and converts it; kernel parameters are checked
/// against the family's constraints.
RunConfig parse_run_config(const Json& merged);

}  // namespace rfl
