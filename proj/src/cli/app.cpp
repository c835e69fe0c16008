#include "pcic/cli/app.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "pcic/cli/config.hpp"
#include "pcic/cli/matrix_io.hpp"
#include "pcic/criteria.hpp"
#include "pcic/numkit/errors.hpp"

namespace pcic::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ArgumentError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ArgumentError("cannot write '" + path.string() + "'");
  out << content;
  if (!out) throw ArgumentError("write failed for '" + path.string() + "'");
}

json criterion_json(const CriterionValue& v, bool with_importance) {
  json per = json::array();
  for (const auto& t : v.per_observation) per.push_back({{"fit", t.fit}, {"penalty", t.penalty}});
  json j = {{"total", v.total},
            {"fit", v.fit},
            {"penalty", v.penalty},
            {"per_observation", per},
            {"infinite_log_pred", v.infinite_log_pred}};
  if (with_importance) j["unstable_importance"] = v.unstable_importance;
  return j;
}

struct CommonFlags {
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> reps;
  std::optional<std::size_t> draws;
  std::optional<std::size_t> burn_in;
  std::optional<std::size_t> thin;
  std::optional<std::string> out;
  std::optional<std::string> config;
};

void add_common_flags(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--seed", flags.seed, "Master seed (u64)");
  cmd->add_option("--reps", flags.reps, "Replications per cell");
  cmd->add_option("--draws", flags.draws, "Retained posterior draws S");
  cmd->add_option("--burn-in", flags.burn_in, "MCMC burn-in iterations (quasi-bayes only)");
  cmd->add_option("--thin", flags.thin, "MCMC thinning interval (quasi-bayes only)");
  cmd->add_option("--out", flags.out,
                  std::string("Output directory (default: $") + kOutputDirEnv + " or ./pcic-out)");
  cmd->add_option("--config", flags.config, "Key-value config file");
}

std::string defaults_footer(const std::string& name, const json& defaults) {
  std::ostringstream ss;
  ss << "\nConfig keys for [" << name << "] and their defaults:\n";
  for (const auto& [key, value] : defaults.items()) {
    std::string v = value.dump();
    if (v.size() > 60) v = v.substr(0, 57) + "...";
    ss << "  " << key << " = " << v << '\n';
  }
  return ss.str();
}

/// Overrides for `name`: keys outside any section, then the [name] section,
/// then command-line flags. Sections for other experiments are ignored.
json collect_overrides(const std::string& name, const CommonFlags& flags, std::ostream& err) {
  json overrides = json::object();
  if (flags.config) {
    const ConfigSections sections = parse_config_text(slurp(*flags.config));
    for (const auto& [section, values] : sections) {
      if (!section.empty() && section != "covariate-shift" && section != "causal" && section != "quasi-bayes") {
        throw ConfigError("unknown config section [" + section + "]");
      }
    }
    for (const auto& [k, v] : sections.at("").items()) overrides[k] = v;
    if (sections.contains(name)) {
      for (const auto& [k, v] : sections.at(name).items()) overrides[k] = v;
    }
  }
  if (flags.seed) overrides["seed"] = *flags.seed;
  if (flags.reps) overrides["replications"] = *flags.reps;
  if (flags.draws) overrides["draws"] = *flags.draws;
  if (name == "quasi-bayes") {
    if (flags.burn_in) overrides["burn_in"] = *flags.burn_in;
    if (flags.thin) overrides["thin"] = *flags.thin;
  } else if (flags.burn_in || flags.thin) {
    err << "note: --burn-in and --thin have no effect; " << name << " uses exact conjugate draws\n";
  }
  return overrides;
}

fs::path output_dir(const CommonFlags& flags) {
  if (flags.out) return *flags.out;
  if (const char* env = std::getenv(kOutputDirEnv); env && *env) return env;
  return "pcic-out";
}

int write_report(const experiments::ReplicationReport& report, const fs::path& dir, std::ostream& out,
                 std::ostream& err) {
  fs::create_directories(dir);
  const std::string stem = report.experiment;
  std::ostringstream records, plot;
  experiments::write_csv(records, report.records);
  experiments::write_csv(plot, report.plot);
  write_file(dir / (stem + "_records.csv"), records.str());
  write_file(dir / (stem + "_plot.csv"), plot.str());
  write_file(dir / (stem + "_summary.json"), report.summary_json().dump(2) + "\n");
  write_file(dir / (stem + "_config.toml"), format_config_section(stem, report.config));
  out << "wrote " << (dir / (stem + "_records.csv")).string() << ", " << (dir / (stem + "_plot.csv")).string()
      << ", " << (dir / (stem + "_summary.json")).string() << ", " << (dir / (stem + "_config.toml")).string()
      << '\n';
  if (!report.failures.empty()) {
    experiments::Table log;
    log.columns = {"cell", "replication", "cause"};
    for (const auto& f : report.failures) {
      std::string cause = f.cause;
      for (char& c : cause) {
        if (c == ',' || c == '\n') c = ';';
      }
      log.rows.push_back({f.cell, static_cast<std::int64_t>(f.replication), cause});
    }
    std::ostringstream ss;
    experiments::write_csv(ss, log);
    const fs::path log_path = dir / (stem + "_failures.csv");
    write_file(log_path, ss.str());
    if (report.failure_rate() > 0.02) {
      err << "error: " << report.failures.size() << " of " << report.attempted
          << " replications failed (more than 2%); see " << log_path.string() << '\n';
      return exit_run_quality;
    }
    err << "warning: " << report.failures.size() << " replications failed; see " << log_path.string() << '\n';
  }
  return exit_ok;
}

}  // namespace

std::string compute_report_json(const std::string& log_pred_csv, const std::string& score_csv,
                                const std::string* weights_csv) {
  std::istringstream lp_in(log_pred_csv), sc_in(score_csv);
  EvalBundle bundle;
  bundle.log_pred = read_matrix_csv(lp_in, "log_pred");
  bundle.score = read_matrix_csv(sc_in, "score");
  if (bundle.log_pred.rows() != bundle.score.rows() || bundle.log_pred.cols() != bundle.score.cols()) {
    throw DataError("shape mismatch: log_pred is " + std::to_string(bundle.log_pred.rows()) + "x" +
                    std::to_string(bundle.log_pred.cols()) + ", score is " + std::to_string(bundle.score.rows()) +
                    "x" + std::to_string(bundle.score.cols()));
  }
  if (weights_csv) {
    std::istringstream w_in(*weights_csv);
    bundle.weights = read_column_csv(w_in, "weights");
    if (bundle.weights.size() != bundle.observations()) {
      throw DataError("shape mismatch: " + std::to_string(bundle.weights.size()) + " weights for " +
                      std::to_string(bundle.observations()) + " observations");
    }
  } else {
    bundle.weights.assign(bundle.observations(), 1.0);
  }
  bundle.validate();
  json report = {{"observations", bundle.observations()},
                 {"draws", bundle.draws()},
                 {"pcic", criterion_json(compute_pcic(bundle), false)},
                 {"waic", criterion_json(compute_waic(bundle), false)},
                 {"iscv_wq", criterion_json(compute_iscv_wq(bundle), true)}};
  return report.dump(2) + "\n";
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Posterior covariance information criterion: criteria and simulation studies", "pcic"};
  app.require_subcommand(1);

  std::string lp_path, score_path, weights_path, compute_out;
  bool unit_weights = false;
  auto* compute = app.add_subcommand("compute", "PCIC, WAIC and IS-CV_wq from n x S CSV matrices");
  compute->add_option("--log-pred", lp_path, "n x S matrix of log h_i(X_i | theta_s)")->required();
  compute->add_option("--score", score_path, "n x S matrix of s_i(X_i, theta_s)")->required();
  auto* wopt = compute->add_option("--weights", weights_path, "Length-n weight column");
  auto* uopt = compute->add_flag("--unit-weights", unit_weights, "Use w_i = 1");
  wopt->excludes(uopt);
  compute->add_option("--out", compute_out, "Write compute.json into this directory instead of stdout");

  CommonFlags cs_flags, causal_flags, qb_flags;
  auto* cs = app.add_subcommand("covariate-shift", "Tilted linear regression under covariate shift (lambda sweep)");
  add_common_flags(cs, cs_flags);
  cs->footer(defaults_footer("covariate-shift", experiments::CovariateShiftConfig{}.to_json()));
  auto* causal = app.add_subcommand("causal", "IPW polynomial outcome models for a multi-valued treatment");
  add_common_flags(causal, causal_flags);
  causal->footer(defaults_footer("causal", experiments::CausalConfig{}.to_json()));
  auto* qb = app.add_subcommand("quasi-bayes", "Laplace-score location model selection");
  add_common_flags(qb, qb_flags);
  qb->footer(defaults_footer("quasi-bayes", experiments::QuasiBayesConfig{}.to_json()));

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    const auto chosen = app.get_subcommands();
    out << (chosen.empty() ? app.help() : chosen.front()->help("pcic"));
    return exit_ok;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return exit_ok;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return exit_input_error;
  }

  try {
    if (compute->parsed()) {
      if (!unit_weights && weights_path.empty()) throw ArgumentError("compute: pass --weights <file> or --unit-weights");
      const std::string weights = weights_path.empty() ? std::string() : slurp(weights_path);
      const std::string report =
          compute_report_json(slurp(lp_path), slurp(score_path), weights_path.empty() ? nullptr : &weights);
      if (compute_out.empty()) {
        out << report;
      } else {
        fs::create_directories(compute_out);
        write_file(fs::path(compute_out) / "compute.json", report);
      }
      return exit_ok;
    }
    if (cs->parsed()) {
      const auto cfg = covariate_shift_config(collect_overrides("covariate-shift", cs_flags, err));
      return write_report(experiments::run_covariate_shift(cfg), output_dir(cs_flags), out, err);
    }
    if (causal->parsed()) {
      const auto cfg = causal_config(collect_overrides("causal", causal_flags, err));
      return write_report(experiments::run_causal(cfg), output_dir(causal_flags), out, err);
    }
    if (qb->parsed()) {
      const auto cfg = quasibayes_config(collect_overrides("quasi-bayes", qb_flags, err));
      return write_report(experiments::run_quasibayes(cfg), output_dir(qb_flags), out, err);
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return exit_input_error;
  }
  err << "error: no command given\n";
  return exit_input_error;
}

}  // namespace pcic::cli
