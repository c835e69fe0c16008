#include "pcic/experiments/causal.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <set>

#include "pcic/models/model_spec.hpp"
#include "pcic/numkit/distributions.hpp"
#include "pcic/numkit/errors.hpp"
#include "pcic/numkit/reductions.hpp"

namespace pcic::experiments {

using models::CausalObservation;
using models::IpwCausalModel;

void CausalConfig::validate() const {
  if (n == 0) throw ConfigError("causal: n must be positive");
  if (doses.empty()) throw ConfigError("causal: need at least one dose");
  std::set<double> distinct(doses.begin(), doses.end());
  if (distinct.size() != doses.size()) throw ConfigError("causal: doses must be distinct");
  if (!(noise_sd >= 0.0) || !(confounder_half_width >= 0.0)) throw ConfigError("causal: scales must be >= 0");
  if (!(model_variance > 0.0) || !(prior_var > 0.0)) throw ConfigError("causal: variances must be positive");
  if (candidates.empty()) throw ConfigError("causal: candidate list is empty");
  for (const auto& c : candidates) {
    if (c.empty()) throw ConfigError("causal: empty candidate feature set");
    for (int p : c) {
      if (p < 0) throw ConfigError("causal: feature powers must be >= 0");
    }
  }
  if (replications == 0) throw ConfigError("causal: replications must be >= 1");
  if (draws < 2) throw ConfigError("causal: need at least 2 draws");
  if (wloss_replicates == 0) throw ConfigError("causal: wloss_replicates must be >= 1");
}

nlohmann::json CausalConfig::to_json() const {
  return {{"n", n},
          {"doses", doses},
          {"assignment_slope", assignment_slope},
          {"noise_sd", noise_sd},
          {"confounder_half_width", confounder_half_width},
          {"model_variance", model_variance},
          {"prior_var", prior_var},
          {"candidates", candidates},
          {"seed", seed},
          {"replications", replications},
          {"draws", draws},
          {"wloss_replicates", wloss_replicates}};
}

double causal_outcome_mean(double x) { return 1.0 + x + 0.5 * x * x; }

std::vector<double> assignment_probabilities(const CausalConfig& cfg, double z) {
  std::vector<double> logits(cfg.doses.size());
  for (std::size_t h = 0; h < logits.size(); ++h) logits[h] = cfg.assignment_slope * z * cfg.doses[h];
  const double top = *std::max_element(logits.begin(), logits.end());
  double total = 0.0;
  for (double& l : logits) {
    l = std::exp(l - top);
    total += l;
  }
  for (double& l : logits) l /= total;
  return logits;
}

std::vector<CausalObservation> CausalDataset::observed() const {
  std::vector<CausalObservation> out;
  out.reserve(individuals.size());
  for (const auto& ind : individuals) {
    out.push_back({ind.potential[ind.treatment], doses[ind.treatment], ind.propensity[ind.treatment]});
  }
  return out;
}

CausalDataset gen_causal(const CausalConfig& cfg, RngStream& rng) {
  CausalDataset data;
  data.doses = cfg.doses;
  data.individuals.resize(cfg.n);
  const Uniform confounder{-cfg.confounder_half_width, cfg.confounder_half_width};
  for (auto& ind : data.individuals) {
    ind.z = cfg.confounder_half_width > 0.0 ? sample(confounder, rng) : 0.0;
    ind.potential.resize(cfg.doses.size());
    for (std::size_t h = 0; h < cfg.doses.size(); ++h) {
      ind.potential[h] = causal_outcome_mean(cfg.doses[h]) + ind.z + cfg.noise_sd * standard_normal(rng);
    }
    ind.propensity = assignment_probabilities(cfg, ind.z);
    const double u = rng.uniform01();
    double cum = 0.0;
    ind.treatment = cfg.doses.size() - 1;
    for (std::size_t h = 0; h < cfg.doses.size(); ++h) {
      cum += ind.propensity[h];
      if (u < cum) {
        ind.treatment = h;
        break;
      }
    }
  }
  return data;
}

GaussianPosterior causal_posterior(const IpwCausalModel& model, const std::vector<CausalObservation>& data) {
  const auto n = static_cast<Eigen::Index>(data.size());
  const auto d = static_cast<Eigen::Index>(model.dim());
  Matrix f(n, d);
  std::vector<double> y(data.size()), w(data.size());
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& obs = data[static_cast<std::size_t>(i)];
    f.row(i) = model.features(obs.x).transpose();
    y[static_cast<std::size_t>(i)] = obs.y;
    w[static_cast<std::size_t>(i)] = model.weight(obs);
  }
  return conjugate_gaussian_posterior(f, y, w, model.outcome_variance(), Vector::Zero(d),
                                      model.prior_var() * Matrix::Identity(d, d));
}

OracleEstimate wloss_oracle(const CausalConfig& cfg, const IpwCausalModel& model, const CausalDataset& data,
                            const GaussianPosterior& post, RngStream& rng) {
  const std::size_t n = data.individuals.size();
  std::vector<double> pred_mean(n), pred_var(n), mu(n), w(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& ind = data.individuals[i];
    const double x = data.doses[ind.treatment];
    const Vector f = model.features(x);
    pred_mean[i] = f.dot(post.mean);
    pred_var[i] = model.outcome_variance() + f.dot(post.cov * f);
    mu[i] = causal_outcome_mean(x) + ind.z;
    w[i] = 1.0 / ind.propensity[ind.treatment];
  }
  std::vector<double> values(cfg.wloss_replicates);
  for (double& value : values) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double y = mu[i] + cfg.noise_sd * standard_normal(rng);
      acc -= w[i] * normal_log_pdf(y, pred_mean[i], std::sqrt(pred_var[i]));
    }
    value = acc / static_cast<double>(n);
  }
  const MeanSe ms = mean_and_se(values);
  return {ms.mean, ms.se};
}

std::vector<CandidateResult> causal_replication(const CausalConfig& cfg, std::size_t replication) {
  RngStream data_rng = purpose_stream(cfg.seed, data_stream, replication);
  const CausalDataset data = gen_causal(cfg, data_rng);
  const auto observed = data.observed();
  const std::uint64_t draw_seed = mix_seed(mix_seed(cfg.seed, draw_stream), replication);
  const std::uint64_t oracle_seed = mix_seed(mix_seed(cfg.seed, oracle_stream), replication);

  std::vector<CandidateResult> out;
  for (std::size_t c = 0; c < cfg.candidates.size(); ++c) {
    const IpwCausalModel model(cfg.candidates[c], cfg.model_variance, cfg.prior_var);
    const GaussianPosterior post = causal_posterior(model, observed);
    RngStream draw_rng = substream(draw_seed, c);
    const Draws draws = sample_mvn(post.mean, post.cov, cfg.draws, draw_rng);
    const EvalBundle bundle = models::eval_bundle(model, observed, draws);
    CandidateResult r;
    r.pcic = compute_pcic(bundle);
    r.iscv = compute_iscv_wq(bundle);
    r.pcic_variance_form = compute_waic(bundle, std::span<const double>(*bundle.variance_weights)).total;
    // Common random numbers across candidates: every candidate sees the
    // same counterfactual outcome replicates.
    RngStream oracle_rng = substream(oracle_seed, 0);
    r.wloss = wloss_oracle(cfg, model, data, post, oracle_rng);
    out.push_back(std::move(r));
  }
  return out;
}

std::string candidate_label(const std::vector<int>& powers) {
  std::string label;
  for (int p : powers) {
    if (!label.empty()) label += '+';
    label += p == 0 ? "1" : (p == 1 ? "x" : "x^" + std::to_string(p));
  }
  return label;
}

namespace {

double mean_of(const std::vector<double>& v) {
  double acc = 0.0;
  for (double x : v) acc += x;
  return v.empty() ? std::numeric_limits<double>::quiet_NaN() : acc / static_cast<double>(v.size());
}

}  // namespace

nlohmann::json causal_aggregates(const Table& records) {
  std::vector<std::string> order;
  std::map<std::string, std::vector<std::size_t>> by_candidate;
  std::set<std::int64_t> reps;
  for (std::size_t r = 0; r < records.rows.size(); ++r) {
    const std::string c = records.text(r, "candidate");
    if (!by_candidate.contains(c)) order.push_back(c);
    by_candidate[c].push_back(r);
    reps.insert(std::get<std::int64_t>(records.rows[r][records.column_index("replication")]));
  }
  nlohmann::json agg;
  agg["replications_completed"] = reps.size();
  nlohmann::json cands = nlohmann::json::array();
  for (const auto& c : order) {
    std::vector<double> pcic, pen, iscv, wloss;
    std::size_t positive = 0;
    for (std::size_t r : by_candidate[c]) {
      pcic.push_back(records.number(r, "pcic"));
      pen.push_back(records.number(r, "pcic_penalty"));
      iscv.push_back(records.number(r, "iscv"));
      wloss.push_back(records.number(r, "wloss"));
      if (records.number(r, "pcic_penalty") > 0.0) ++positive;
    }
    const MeanSe p = mean_and_se(pcic), w = mean_and_se(wloss), i = mean_and_se(iscv);
    cands.push_back({{"candidate", c},
                     {"mean_pcic", p.mean},
                     {"se_pcic", p.se},
                     {"mean_iscv", i.mean},
                     {"se_iscv", i.se},
                     {"mean_wloss", w.mean},
                     {"se_wloss", w.se},
                     {"mean_pcic_penalty", mean_of(pen)},
                     {"positive_penalty_count", positive},
                     {"replications", pcic.size()}});
  }
  agg["candidates"] = cands;
  return agg;
}

Table causal_plot(const Table& records) {
  Table plot;
  plot.columns = {"candidate", "mean_pcic", "se_pcic", "mean_wloss", "se_wloss"};
  const nlohmann::json agg = causal_aggregates(records);
  for (const auto& c : agg["candidates"]) {
    plot.rows.push_back({c["candidate"].get<std::string>(), c["mean_pcic"].get<double>(), c["se_pcic"].get<double>(),
                         c["mean_wloss"].get<double>(), c["se_wloss"].get<double>()});
  }
  return plot;
}

ReplicationReport run_causal(const CausalConfig& cfg) {
  cfg.validate();
  ReplicationReport report;
  report.experiment = "causal";
  report.config = cfg.to_json();
  report.records.columns = {"replication", "candidate", "pcic",        "pcic_fit", "pcic_penalty",
                            "iscv",        "iscv_penalty", "wloss",    "wloss_se"};
  for (std::size_t rep = 0; rep < cfg.replications; ++rep) {
    ++report.attempted;
    try {
      const auto results = causal_replication(cfg, rep);
      for (std::size_t c = 0; c < results.size(); ++c) {
        const auto& r = results[c];
        report.records.rows.push_back({static_cast<std::int64_t>(rep), candidate_label(cfg.candidates[c]),
                                       r.pcic.total, r.pcic.fit, r.pcic.penalty, r.iscv.total, r.iscv.penalty,
                                       r.wloss.mean, r.wloss.se});
      }
    } catch (const Error& e) {
      report.failures.push_back({"causal", rep, e.what()});
    }
  }
  report.aggregates = causal_aggregates(report.records);
  report.plot = causal_plot(report.records);
  return report;
}

}  // namespace pcic::experiments
