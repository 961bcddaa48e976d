#include "rfl/config.hpp"

#include <algorithm>

namespace rfl {

namespace {

constexpr const char* kSchemaText =
#include "run_config_schema.inc"
    ;

std::string type_of(const Json& v) {
  if (v.is_object()) return "object";
  if (v.is_array()) return "array";
  if (v.is_string()) return "string";
  if (v.is_boolean()) return "boolean";
  if (v.is_number_integer() || v.is_number_unsigned()) return "integer";
  if (v.is_number_float()) return "number";
  return "null";
}

bool matches_type(const Json& v, const std::string& type) {
  if (type == "number") return v.is_number();
  if (type == "integer") {
    if (v.is_number_integer() || v.is_number_unsigned()) return true;
    return v.is_number_float() && std::floor(v.get<double>()) == v.get<double>();
  }
  return type_of(v) == type;
}

}  // namespace

const Json& run_config_schema() {
  static const Json schema = Json::parse(kSchemaText);
  return schema;
}

void validate_schema(const Json& value, const Json& schema, const std::string& path) {
  if (schema.contains("type")) {
    const std::string type = schema["type"].get<std::string>();
    if (!matches_type(value, type)) {
      throw ConfigError(path + ": expected " + type + ", got " + type_of(value));
    }
  }
  if (schema.contains("enum")) {
    const auto& options = schema["enum"];
    if (std::find(options.begin(), options.end(), value) == options.end()) {
      throw ConfigError(path + ": value " + value.dump() + " is not one of " + options.dump());
    }
  }
  if (value.is_number()) {
    const double x = value.get<double>();
    if (schema.contains("minimum") && x < schema["minimum"].get<double>()) {
      throw ConfigError(path + ": must be >= " + schema["minimum"].dump());
    }
    if (schema.contains("maximum") && x > schema["maximum"].get<double>()) {
      throw ConfigError(path + ": must be <= " + schema["maximum"].dump());
    }
    if (schema.contains("exclusiveMinimum") && !(x > schema["exclusiveMinimum"].get<double>())) {
      throw ConfigError(path + ": must be > " + schema["exclusiveMinimum"].dump());
    }
  }
  if (value.is_object()) {
    if (schema.contains("required")) {
      for (const auto& key : schema["required"]) {
        if (!value.contains(key.get<std::string>())) {
          throw ConfigError(path + ": missing required property '" + key.get<std::string>() + "'");
        }
      }
    }
    const Json empty = Json::object();
    const Json& props = schema.contains("properties") ? schema["properties"] : empty;
    const bool closed = schema.contains("additionalProperties") && schema["additionalProperties"] == false;
    for (const auto& [key, v] : value.items()) {
      if (props.contains(key)) {
        validate_schema(v, props[key], path + "." + key);
      } else if (closed) {
        throw ConfigError(path + ": unknown property '" + key + "'");
      }
    }
  }
  if (value.is_array()) {
    if (schema.contains("minItems") && value.size() < schema["minItems"].get<std::size_t>()) {
      throw ConfigError(path + ": needs at least " + schema["minItems"].dump() + " items");
    }
    if (schema.contains("maxItems") && value.size() > schema["maxItems"].get<std::size_t>()) {
      throw ConfigError(path + ": allows at most " + schema["maxItems"].dump() + " items");
    }
    if (schema.contains("items")) {
      for (std::size_t i = 0; i < value.size(); ++i) {
        validate_schema(value[i], schema["items"], path + "[" + std::to_string(i) + "]");
      }
    }
  }
}

RunConfig parse_run_config(const Json& merged) {
  validate_schema(merged, run_config_schema());
  RunConfig c;
  c.merged = merged;
  c.command = merged.value("command", "");
  try {
    if (merged.contains("kernel")) c.kernel = kernel_from_json(merged["kernel"]);
    if (merged.contains("functional")) c.functional = functional_from_json(merged["functional"]);
  } catch (const ArgumentError& e) {
    throw ConfigError(e.what());
  } catch (const UnsupportedConfiguration& e) {
    throw ConfigError(e.what());
  }
  if (merged.contains("m")) c.m = merged["m"].get<int>();
  if (merged.contains("m_list")) c.m_list = merged["m_list"].get<std::vector<int>>();
  if (merged.contains("M")) c.M = merged["M"].get<double>();
  if (merged.contains("widths")) c.widths = std::make_pair(merged["widths"][0].get<Index>(), merged["widths"][1].get<Index>());
  if (merged.contains("width_list")) {
    for (const auto& w : merged["width_list"]) c.width_list.emplace_back(w[0].get<Index>(), w[1].get<Index>());
  }
  if (merged.contains("n_samples")) c.n_samples = merged["n_samples"].get<int>();
  c.n_centers = merged.value("n_centers", c.n_centers);
  c.seed = merged.value("seed", std::uint64_t{0});
  c.output_dir = merged.value("output_dir", "");
  c.eval_resolution = merged.value("eval_resolution", c.eval_resolution);
  c.threads = merged.value("threads", c.threads);
  if (merged.contains("train")) {
    const Json& t = merged["train"];
    c.train.epochs = t.value("epochs", c.train.epochs);
    c.train.batch_size = t.value("batch_size", c.train.batch_size);
    c.train.learning_rate = t.value("learning_rate", c.train.learning_rate);
    c.train.schedule = t.value("schedule", c.train.schedule);
  }
  if (merged.contains("theorem")) {
    const Json& t = merged["theorem"];
    c.theorem = t.value("name", c.theorem);
    c.theorem_params.s = t.value("s", c.theorem_params.s);
    c.theorem_params.c = t.value("c", c.theorem_params.c);
    c.theorem_params.constant = t.value("constant", c.theorem_params.constant);
  }
  c.train.seed = c.seed;
  return c;
}

}  // namespace rfl
