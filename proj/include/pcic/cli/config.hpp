#pragma once

#include <map>
#include <string>

#include <json.hpp>

#include "pcic/experiments/causal.hpp"
#include "pcic/experiments/covariate_shift.hpp"
#include "pcic/experiments/quasibayes.hpp"

namespace pcic::cli {

/// Parsed key-value text: section name -> key -> JSON value. Keys that
/// appear before any [section] header land in section "".
using ConfigSections = std::map<std::string, nlohmann::json>;

/// Accepts `key = value` lines, `[section]` headers, blank lines and `#`
/// comments. Values are JSON literals (numbers, "strings", [arrays], true,
/// false); a bare word is read as a string. Throws ConfigError with the line
/// number on malformed input.
ConfigSections parse_config_text(const std::string& text);

/// Inverse of parse_config_text for a single section.
std::string format_config_section(const std::string& section, const nlohmann::json& values);

/// Overlay `overrides` on the defaults of each experiment config. Unknown
/// keys and ill-typed values throw ConfigError. The result is validated.
experiments::CovariateShiftConfig covariate_shift_config(const nlohmann::json& overrides);
experiments::CausalConfig causal_config(const nlohmann::json& overrides);
experiments::QuasiBayesConfig quasibayes_config(const nlohmann::json& overrides);

}  // namespace pcic::cli
