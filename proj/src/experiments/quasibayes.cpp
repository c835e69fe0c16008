#include "pcic/experiments/quasibayes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>

#include "pcic/criteria.hpp"
#include "pcic/experiments/oracle.hpp"
#include "pcic/models/model_spec.hpp"
#include "pcic/numkit/distributions.hpp"
#include "pcic/numkit/errors.hpp"
#include "pcic/numkit/reductions.hpp"

namespace pcic::experiments {

using models::LocationFamilyModel;

void QuasiBayesConfig::validate() const {
  if (sample_sizes.empty()) throw ConfigError("quasi-bayes: sample size grid is empty");
  for (std::size_t n : sample_sizes) {
    if (n < 2) throw ConfigError("quasi-bayes: sample sizes must be >= 2");
  }
  if (truths.empty()) throw ConfigError("quasi-bayes: truth list is empty");
  if (candidates.empty()) throw ConfigError("quasi-bayes: candidate list is empty");
  if (replications == 0) throw ConfigError("quasi-bayes: replications must be >= 1");
  if (draws < 10) throw ConfigError("quasi-bayes: need at least 10 draws");
  if (thin == 0) throw ConfigError("quasi-bayes: thin must be >= 1");
  if (!(init_step > 0.0)) throw ConfigError("quasi-bayes: init_step must be positive");
  if (!(prior_sd > 0.0)) throw ConfigError("quasi-bayes: prior_sd must be positive");
  if (oracle_test_points > 0 && oracle_draws == 0) throw ConfigError("quasi-bayes: oracle_draws must be >= 1");
}

namespace {

std::vector<std::string> family_names(const std::vector<LocationFamily>& families) {
  std::vector<std::string> out;
  for (auto f : families) out.emplace_back(models::family_name(f));
  return out;
}

std::string cell_label(LocationFamily truth, std::size_t n) {
  return "truth=" + std::string(models::family_name(truth)) + ",N=" + std::to_string(n);
}

std::uint64_t cell_seed(std::uint64_t seed, LocationFamily truth, std::size_t n) {
  return mix_seed(seed, static_cast<std::uint64_t>(truth) * 1000000u + n);
}

}  // namespace

nlohmann::json QuasiBayesConfig::to_json() const {
  return {{"sample_sizes", sample_sizes},
          {"truths", family_names(truths)},
          {"candidates", family_names(candidates)},
          {"replications", replications},
          {"seed", seed},
          {"draws", draws},
          {"burn_in", burn_in},
          {"thin", thin},
          {"init_step", init_step},
          {"prior_sd", prior_sd},
          {"true_location", true_location},
          {"oracle_test_points", oracle_test_points},
          {"oracle_draws", oracle_draws}};
}

std::vector<double> gen_location_data(LocationFamily truth, double location, std::size_t n, RngStream& rng) {
  Distribution law;
  switch (truth) {
    case LocationFamily::normal: law = Normal{location, 1.0}; break;
    case LocationFamily::laplace: law = Laplace{location, 1.0}; break;
    case LocationFamily::cauchy: law = Cauchy{location, 1.0}; break;
  }
  std::vector<double> out(n);
  for (double& y : out) y = sample(law, rng);
  return out;
}

Draws location_quasi_posterior(const QuasiBayesConfig& cfg, const std::vector<double>& data, RngStream& rng) {
  const LocationFamilyModel target(LocationFamily::laplace, cfg.prior_sd);
  ChainConfig chain;
  chain.draws = cfg.draws;
  chain.burn_in = cfg.burn_in;
  chain.thin = cfg.thin;
  chain.init = target.exact_m_estimate(data);
  chain.init_step = cfg.init_step;
  chain.rng = rng;
  return rwm_sample([&](const Vector& theta) { return models::log_quasi_posterior(target, data, theta); }, chain);
}

QuasiBayesReplication quasibayes_replication(const QuasiBayesConfig& cfg, LocationFamily truth, std::size_t n,
                                             std::size_t replication) {
  const std::uint64_t cs = cell_seed(cfg.seed, truth, n);
  RngStream data_rng = purpose_stream(cs, data_stream, replication);
  const std::vector<double> data = gen_location_data(truth, cfg.true_location, n, data_rng);
  RngStream chain_rng = purpose_stream(cs, draw_stream, replication);
  const Draws draws = location_quasi_posterior(cfg, data, chain_rng);

  QuasiBayesReplication out;
  out.acceptance_rate = draws.acceptance_rate;
  out.ess = draws.ess_per_dim.empty() ? std::numeric_limits<double>::quiet_NaN() : draws.ess_per_dim.front();

  Draws oracle_draws;
  std::vector<double> test_points;
  if (cfg.oracle_test_points > 0) {
    const std::size_t keep = std::min(cfg.oracle_draws, draws.count());
    oracle_draws.samples.resize(static_cast<Eigen::Index>(keep), 1);
    for (std::size_t k = 0; k < keep; ++k) {
      const std::size_t s = k * draws.count() / keep;
      oracle_draws.samples(static_cast<Eigen::Index>(k), 0) = draws.samples(static_cast<Eigen::Index>(s), 0);
    }
    RngStream oracle_rng = purpose_stream(cs, oracle_stream, replication);
    test_points = gen_location_data(truth, cfg.true_location, cfg.oracle_test_points, oracle_rng);
  }

  for (LocationFamily family : cfg.candidates) {
    const LocationFamilyModel model(family, cfg.prior_sd);
    const EvalBundle bundle = models::eval_bundle(model, data, draws);
    const CriterionValue pcic = compute_pcic(bundle);
    const CriterionValue waic = compute_waic(bundle);
    CandidateScores c;
    c.pcic = pcic.total;
    c.pcic_penalty = pcic.penalty;
    c.waic = waic.total;
    c.waic_penalty = waic.penalty;
    c.penalty_gap = pcic.penalty - waic.penalty;
    c.oracle = std::numeric_limits<double>::quiet_NaN();
    if (!test_points.empty()) {
      // Each test point is one fresh datum; the oracle is the per-datum
      // expected negative log predictive density.
      std::vector<double> buffer(oracle_draws.count());
      double acc = 0.0;
      for (double y : test_points) {
        for (std::size_t s = 0; s < buffer.size(); ++s) {
          buffer[s] = models::location_log_density(family, y, oracle_draws.samples(static_cast<Eigen::Index>(s), 0));
        }
        acc -= log_mean_exp(buffer);
      }
      c.oracle = acc / static_cast<double>(test_points.size());
    }
    out.candidates.push_back(c);
  }
  for (std::size_t k = 1; k < out.candidates.size(); ++k) {
    if (out.candidates[k].pcic < out.candidates[out.selected_pcic].pcic) out.selected_pcic = k;
    if (out.candidates[k].waic < out.candidates[out.selected_waic].waic) out.selected_waic = k;
  }
  return out;
}

ReplicationReport run_quasibayes(const QuasiBayesConfig& cfg) {
  cfg.validate();
  ReplicationReport report;
  report.experiment = "quasi-bayes";
  report.config = cfg.to_json();
  report.records.columns = {"truth",      "n",           "replication",   "candidate",     "pcic",
                            "pcic_penalty", "waic",      "waic_penalty",  "penalty_gap",   "oracle",
                            "selected_pcic", "selected_waic", "acceptance", "ess"};
  for (LocationFamily truth : cfg.truths) {
    for (std::size_t n : cfg.sample_sizes) {
      for (std::size_t rep = 0; rep < cfg.replications; ++rep) {
        ++report.attempted;
        try {
          const QuasiBayesReplication r = quasibayes_replication(cfg, truth, n, rep);
          for (std::size_t k = 0; k < r.candidates.size(); ++k) {
            const auto& c = r.candidates[k];
            report.records.rows.push_back(
                {std::string(models::family_name(truth)), static_cast<std::int64_t>(n),
                 static_cast<std::int64_t>(rep), std::string(models::family_name(cfg.candidates[k])), c.pcic,
                 c.pcic_penalty, c.waic, c.waic_penalty, c.penalty_gap, c.oracle,
                 static_cast<std::int64_t>(r.selected_pcic == k), static_cast<std::int64_t>(r.selected_waic == k),
                 r.acceptance_rate, r.ess});
          }
        } catch (const Error& e) {
          report.failures.push_back({cell_label(truth, n), rep, e.what()});
        }
      }
    }
  }
  report.aggregates = quasibayes_aggregates(report.records, report.failures);
  report.plot = quasibayes_plot(report.records);
  return report;
}

namespace {

struct CellKey {
  std::string truth;
  std::int64_t n;
  auto operator<=>(const CellKey&) const = default;
};

}  // namespace

nlohmann::json quasibayes_aggregates(const Table& records, const std::vector<FailedReplication>& failures) {
  std::vector<CellKey> cell_order;
  std::vector<std::string> cand_order;
  std::map<CellKey, std::vector<std::size_t>> by_cell;
  for (std::size_t r = 0; r < records.rows.size(); ++r) {
    CellKey key{records.text(r, "truth"), static_cast<std::int64_t>(records.number(r, "n"))};
    if (!by_cell.contains(key)) cell_order.push_back(key);
    by_cell[key].push_back(r);
    const std::string cand = records.text(r, "candidate");
    if (std::find(cand_order.begin(), cand_order.end(), cand) == cand_order.end()) cand_order.push_back(cand);
  }

  nlohmann::json selection = nlohmann::json::array();
  nlohmann::json cells = nlohmann::json::array();
  for (const auto& key : cell_order) {
    const auto& rows = by_cell[key];
    std::set<std::int64_t> reps;
    for (std::size_t r : rows) reps.insert(static_cast<std::int64_t>(records.number(r, "replication")));
    std::size_t failed = 0;
    const std::string label = "truth=" + key.truth + ",N=" + std::to_string(key.n);
    for (const auto& f : failures) failed += f.cell == label ? 1 : 0;

    for (const std::string crit : {"pcic", "waic"}) {
      nlohmann::json counts = nlohmann::json::object();
      for (const auto& c : cand_order) counts[c] = 0;
      for (std::size_t r : rows) {
        if (records.number(r, "selected_" + crit) == 1.0) {
          counts[records.text(r, "candidate")] = counts[records.text(r, "candidate")].get<int>() + 1;
        }
      }
      selection.push_back({{"truth", key.truth},
                           {"n", key.n},
                           {"criterion", crit},
                           {"counts", counts},
                           {"completed", reps.size()},
                           {"failed", failed}});
    }

    nlohmann::json per_cand = nlohmann::json::object();
    for (const auto& c : cand_order) {
      std::vector<double> gap, oracle, pcic, waic;
      for (std::size_t r : rows) {
        if (records.text(r, "candidate") != c) continue;
        gap.push_back(records.number(r, "penalty_gap"));
        oracle.push_back(records.number(r, "oracle"));
        pcic.push_back(records.number(r, "pcic"));
        waic.push_back(records.number(r, "waic"));
      }
      if (gap.empty()) continue;
      per_cand[c] = {{"mean_penalty_gap", mean_and_se(gap).mean},
                     {"mean_oracle", mean_and_se(oracle).mean},
                     {"mean_pcic", mean_and_se(pcic).mean},
                     {"mean_waic", mean_and_se(waic).mean}};
    }
    std::vector<double> acc;
    for (std::size_t r : rows) acc.push_back(records.number(r, "acceptance"));
    cells.push_back({{"truth", key.truth},
                     {"n", key.n},
                     {"candidates", per_cand},
                     {"mean_acceptance", mean_and_se(acc).mean}});
  }
  return {{"selection", selection}, {"cells", cells}, {"replications_failed", failures.size()}};
}

Table quasibayes_plot(const Table& records) {
  Table plot;
  plot.columns = {"truth", "n", "candidate", "oracle_mean", "oracle_median", "oracle_q25", "oracle_q75"};
  std::vector<std::tuple<std::string, std::int64_t, std::string>> order;
  std::map<std::tuple<std::string, std::int64_t, std::string>, std::vector<double>> values;
  for (std::size_t r = 0; r < records.rows.size(); ++r) {
    auto key = std::make_tuple(records.text(r, "truth"), static_cast<std::int64_t>(records.number(r, "n")),
                               records.text(r, "candidate"));
    if (!values.contains(key)) order.push_back(key);
    values[key].push_back(records.number(r, "oracle"));
  }
  const auto quantile = [](std::vector<double> v, double p) {
    std::sort(v.begin(), v.end());
    const double pos = p * static_cast<double>(v.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, v.size() - 1);
    return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
  };
  for (const auto& key : order) {
    const auto& v = values[key];
    plot.rows.push_back({std::get<0>(key), std::get<1>(key), std::get<2>(key), mean_and_se(v).mean,
                         quantile(v, 0.5), quantile(v, 0.25), quantile(v, 0.75)});
  }
  return plot;
}

}  // namespace pcic::experiments
