#include "pcic/cli/config.hpp"

#include <sstream>
#include <type_traits>

#include "pcic/numkit/errors.hpp"

namespace pcic::cli {

using nlohmann::json;

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string strip_comment(const std::string& line) {
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') quoted = !quoted;
    if (line[i] == '#' && !quoted) return line.substr(0, i);
  }
  return line;
}

json merged_with_defaults(json defaults, const json& overrides, const std::string& name) {
  if (!overrides.is_object()) throw ConfigError(name + ": overrides must be key-value pairs");
  for (const auto& [key, value] : overrides.items()) {
    if (!defaults.contains(key)) throw ConfigError(name + ": unknown config key '" + key + "'");
    defaults[key] = value;
  }
  return defaults;
}

template <class T>
bool unsigned_ok(const json& v) {
  if constexpr (std::is_integral_v<T> && std::is_unsigned_v<T>) {
    return v.is_number_unsigned();
  } else if constexpr (std::is_same_v<T, std::vector<std::size_t>>) {
    if (!v.is_array()) return false;
    for (const auto& e : v) {
      if (!e.is_number_unsigned()) return false;
    }
  }
  return true;
}

template <class T>
T field(const json& j, const char* key, const std::string& name) {
  try {
    if (!unsigned_ok<T>(j.at(key))) throw ConfigError(name + ": config key '" + key + "' must be a non-negative integer");
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(name + ": config key '" + key + "' has the wrong type");
  }
}

std::vector<models::LocationFamily> families(const json& j, const char* key, const std::string& name) {
  std::vector<models::LocationFamily> out;
  try {
    for (const auto& s : field<std::vector<std::string>>(j, key, name)) out.push_back(models::parse_family(s));
  } catch (const ArgumentError& e) {
    throw ConfigError(name + ": " + e.what());
  }
  return out;
}

}  // namespace

ConfigSections parse_config_text(const std::string& text) {
  ConfigSections sections;
  sections[""] = json::object();
  std::string current;
  std::istringstream in(text);
  std::string raw;
  std::size_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    const std::string line = trim(strip_comment(raw));
    if (line.empty()) continue;
    const std::string where = "config line " + std::to_string(lineno);
    if (line.front() == '[' && line.back() == ']' && line.find('=') == std::string::npos) {
      current = trim(line.substr(1, line.size() - 2));
      if (current.empty()) throw ConfigError(where + ": empty section name");
      if (!sections.contains(current)) sections[current] = json::object();
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(where + ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) throw ConfigError(where + ": expected 'key = value'");
    if (sections[current].contains(key)) throw ConfigError(where + ": duplicate key '" + key + "'");
    json parsed = json::parse(value, nullptr, false);
    if (parsed.is_discarded()) {
      if (value.find_first_of("[]{}\",") != std::string::npos) throw ConfigError(where + ": malformed value");
      parsed = value;
    }
    sections[current][key] = parsed;
  }
  return sections;
}

std::string format_config_section(const std::string& section, const json& values) {
  std::ostringstream out;
  out << '[' << section << "]\n";
  for (const auto& [key, value] : values.items()) out << key << " = " << value.dump() << '\n';
  return out.str();
}

experiments::CovariateShiftConfig covariate_shift_config(const json& overrides) {
  const std::string name = "covariate-shift";
  experiments::CovariateShiftConfig cfg;
  const json j = merged_with_defaults(cfg.to_json(), overrides, name);
  cfg.n_train = field<std::size_t>(j, "n_train", name);
  cfg.n_test = field<std::size_t>(j, "n_test", name);
  cfg.train = {field<double>(j, "train_mean", name), field<double>(j, "train_sd", name)};
  cfg.test = {field<double>(j, "test_mean", name), field<double>(j, "test_sd", name)};
  cfg.noise_sd = field<double>(j, "noise_sd", name);
  cfg.lambdas = field<std::vector<double>>(j, "lambdas", name);
  cfg.prior_var = field<double>(j, "prior_var", name);
  cfg.seed = field<std::uint64_t>(j, "seed", name);
  cfg.replications = field<std::size_t>(j, "replications", name);
  cfg.draws = field<std::size_t>(j, "draws", name);
  cfg.oracle_test_points = field<std::size_t>(j, "oracle_test_points", name);
  cfg.validate();
  return cfg;
}

experiments::CausalConfig causal_config(const json& overrides) {
  const std::string name = "causal";
  experiments::CausalConfig cfg;
  const json j = merged_with_defaults(cfg.to_json(), overrides, name);
  cfg.n = field<std::size_t>(j, "n", name);
  cfg.doses = field<std::vector<double>>(j, "doses", name);
  cfg.assignment_slope = field<double>(j, "assignment_slope", name);
  cfg.noise_sd = field<double>(j, "noise_sd", name);
  cfg.confounder_half_width = field<double>(j, "confounder_half_width", name);
  cfg.model_variance = field<double>(j, "model_variance", name);
  cfg.prior_var = field<double>(j, "prior_var", name);
  cfg.candidates = field<std::vector<std::vector<int>>>(j, "candidates", name);
  cfg.seed = field<std::uint64_t>(j, "seed", name);
  cfg.replications = field<std::size_t>(j, "replications", name);
  cfg.draws = field<std::size_t>(j, "draws", name);
  cfg.wloss_replicates = field<std::size_t>(j, "wloss_replicates", name);
  cfg.validate();
  return cfg;
}

experiments::QuasiBayesConfig quasibayes_config(const json& overrides) {
  const std::string name = "quasi-bayes";
  experiments::QuasiBayesConfig cfg;
  const json j = merged_with_defaults(cfg.to_json(), overrides, name);
  cfg.sample_sizes = field<std::vector<std::size_t>>(j, "sample_sizes", name);
  cfg.truths = families(j, "truths", name);
  cfg.candidates = families(j, "candidates", name);
  cfg.replications = field<std::size_t>(j, "replications", name);
  cfg.seed = field<std::uint64_t>(j, "seed", name);
  cfg.draws = field<std::size_t>(j, "draws", name);
  cfg.burn_in = field<std::size_t>(j, "burn_in", name);
  cfg.thin = field<std::size_t>(j, "thin", name);
  cfg.init_step = field<double>(j, "init_step", name);
  cfg.prior_sd = field<double>(j, "prior_sd", name);
  cfg.true_location = field<double>(j, "true_location", name);
  cfg.oracle_test_points = field<std::size_t>(j, "oracle_test_points", name);
  cfg.oracle_draws = field<std::size_t>(j, "oracle_draws", name);
  cfg.validate();
  return cfg;
}

}  // namespace pcic::cli
