#include "pcic/experiments/covariate_shift.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <numbers>

#include "pcic/experiments/oracle.hpp"
#include "pcic/models/model_spec.hpp"
#include "pcic/numkit/distributions.hpp"
#include "pcic/numkit/errors.hpp"
#include "pcic/numkit/reductions.hpp"

namespace pcic::experiments {

using models::CovariateShiftModel;

std::vector<double> default_lambda_grid() {
  std::vector<double> grid(200);
  for (std::size_t i = 0; i < grid.size(); ++i) grid[i] = 0.01 * static_cast<double>(i + 1);
  return grid;
}

void CovariateShiftConfig::validate() const {
  if (n_train == 0 || n_test == 0) throw ConfigError("covariate-shift: n_train and n_test must be positive");
  if (!(train.sd > 0.0) || !(test.sd > 0.0)) throw ConfigError("covariate-shift: covariate sds must be positive");
  if (!(noise_sd >= 0.0)) throw ConfigError("covariate-shift: noise_sd must be >= 0");
  if (!(prior_var > 0.0)) throw ConfigError("covariate-shift: prior_var must be positive");
  if (lambdas.empty()) throw ConfigError("covariate-shift: lambda grid is empty");
  for (std::size_t k = 0; k < lambdas.size(); ++k) {
    if (!(lambdas[k] > 0.0) || !std::isfinite(lambdas[k])) {
      throw ConfigError("covariate-shift: lambda values must be positive");
    }
    if (k > 0 && !(lambdas[k] > lambdas[k - 1])) {
      throw ConfigError("covariate-shift: lambda grid must be strictly increasing");
    }
  }
  if (replications == 0) throw ConfigError("covariate-shift: replications must be >= 1");
  if (draws < 2) throw ConfigError("covariate-shift: need at least 2 draws");
}

nlohmann::json CovariateShiftConfig::to_json() const {
  return {{"n_train", n_train},
          {"n_test", n_test},
          {"train_mean", train.mean},
          {"train_sd", train.sd},
          {"test_mean", test.mean},
          {"test_sd", test.sd},
          {"noise_sd", noise_sd},
          {"lambdas", lambdas},
          {"prior_var", prior_var},
          {"seed", seed},
          {"replications", replications},
          {"draws", draws},
          {"oracle_test_points", oracle_test_points}};
}

double sinc(double x) {
  if (x == 0.0) return 1.0;
  const double t = std::numbers::pi * x;
  return std::sin(t) / t;
}

std::vector<RegressionPair> gen_sinc_pairs(std::size_t n, const NormalParams& law, double noise_sd, RngStream& rng) {
  std::vector<RegressionPair> out(n);
  for (auto& p : out) {
    p.x = law.mean + law.sd * standard_normal(rng);
    const double eps = standard_normal(rng);
    p.y = sinc(p.x) + noise_sd * eps;
  }
  return out;
}

CovariateShiftData gen_covariate_shift(const CovariateShiftConfig& cfg, RngStream& rng) {
  CovariateShiftData data;
  data.train = gen_sinc_pairs(cfg.n_train, cfg.train, cfg.noise_sd, rng);
  data.test = gen_sinc_pairs(cfg.n_test, cfg.test, cfg.noise_sd, rng);
  return data;
}

Matrix line_features(const std::vector<RegressionPair>& data) {
  Matrix f(static_cast<Eigen::Index>(data.size()), 2);
  for (std::size_t i = 0; i < data.size(); ++i) {
    f(static_cast<Eigen::Index>(i), 0) = 1.0;
    f(static_cast<Eigen::Index>(i), 1) = data[i].x;
  }
  return f;
}

GaussianPosterior covariate_shift_posterior(const CovariateShiftModel& model, const std::vector<RegressionPair>& data) {
  std::vector<double> y(data.size()), w(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    y[i] = data[i].y;
    w[i] = model.score_weight(data[i].x);
  }
  const double sigma2 = model.noise_sd() * model.noise_sd();
  return conjugate_gaussian_posterior(line_features(data), y, w, sigma2, Vector::Zero(2),
                                      model.prior_var() * Matrix::Identity(2, 2));
}

double test_set_error(const CovariateShiftModel& model, const std::vector<RegressionPair>& test, const Draws& draws) {
  if (test.empty()) throw ArgumentError("test_set_error: empty test set");
  std::vector<double> buffer(draws.count());
  double acc = 0.0;
  for (const auto& p : test) {
    for (std::size_t s = 0; s < draws.count(); ++s) {
      const auto row = draws.samples.row(static_cast<Eigen::Index>(s));
      buffer[s] = normal_log_pdf(p.y, row(0) + row(1) * p.x, model.noise_sd());
    }
    acc -= log_mean_exp(buffer);
  }
  return acc / static_cast<double>(test.size());
}

double predictive_oracle_error(const GaussianPosterior& post, double noise_sd, const std::vector<double>& test_x) {
  if (test_x.empty()) return std::numeric_limits<double>::quiet_NaN();
  const double sigma2 = noise_sd * noise_sd;
  const double m0 = post.mean(0), m1 = post.mean(1);
  const double c00 = post.cov(0, 0), c01 = post.cov(0, 1), c11 = post.cov(1, 1);
  double acc = 0.0;
  for (double x : test_x) {
    const double mean = m0 + m1 * x;
    const double var = sigma2 + c00 + 2.0 * c01 * x + c11 * x * x;
    acc += expected_gaussian_nll(sinc(x), sigma2, mean, var);
  }
  return acc / static_cast<double>(test_x.size());
}

std::vector<LambdaResult> covariate_shift_replication(const CovariateShiftConfig& cfg, std::size_t replication) {
  RngStream data_rng = purpose_stream(cfg.seed, data_stream, replication);
  const CovariateShiftData data = gen_covariate_shift(cfg, data_rng);

  std::vector<double> oracle_x(cfg.oracle_test_points);
  RngStream oracle_rng = purpose_stream(cfg.seed, oracle_stream, replication);
  for (double& x : oracle_x) x = cfg.test.mean + cfg.test.sd * standard_normal(oracle_rng);

  const std::uint64_t draw_seed = mix_seed(mix_seed(cfg.seed, draw_stream), replication);
  std::vector<LambdaResult> out;
  out.reserve(cfg.lambdas.size());
  for (std::size_t k = 0; k < cfg.lambdas.size(); ++k) {
    // A zero noise level still needs a proper likelihood; keep the model's
    // variance strictly positive.
    const double model_sd = cfg.noise_sd > 0.0 ? cfg.noise_sd : 1e-8;
    const CovariateShiftModel model(cfg.lambdas[k], model_sd, cfg.train, cfg.test, cfg.prior_var);
    const GaussianPosterior post = covariate_shift_posterior(model, data.train);
    RngStream draw_rng = substream(draw_seed, k);
    const Draws draws = sample_mvn(post.mean, post.cov, cfg.draws, draw_rng);

    EvalBundle bundle = models::eval_bundle(model, data.train, draws);
    LambdaResult r;
    r.lambda = cfg.lambdas[k];
    r.pcic = compute_pcic(bundle);
    r.iscv = compute_iscv_wq(bundle);
    std::fill(bundle.weights.begin(), bundle.weights.end(), 1.0);
    r.waic = compute_waic(bundle);
    r.test_error = test_set_error(model, data.test, draws);
    r.oracle_error = predictive_oracle_error(post, model_sd, oracle_x);
    r.posterior_mean = post.mean;
    out.push_back(std::move(r));
  }
  return out;
}

namespace {

const std::vector<std::string> kRecordColumns = {
    "replication", "lambda",     "pcic",         "pcic_fit",     "pcic_penalty", "waic",
    "waic_fit",    "waic_penalty", "iscv",       "iscv_fit",     "iscv_penalty", "test_error",
    "oracle_error", "theta0_mean", "theta1_mean"};

std::map<std::int64_t, std::vector<std::size_t>> rows_by_replication(const Table& records) {
  std::map<std::int64_t, std::vector<std::size_t>> groups;
  const std::size_t col = records.column_index("replication");
  for (std::size_t r = 0; r < records.rows.size(); ++r) {
    groups[std::get<std::int64_t>(records.rows[r][col])].push_back(r);
  }
  return groups;
}

std::size_t argmin_row(const Table& records, const std::vector<std::size_t>& rows, const std::string& column) {
  std::size_t best = rows.front();
  for (std::size_t r : rows) {
    if (records.number(r, column) < records.number(best, column)) best = r;
  }
  return best;
}

double mean_of(const std::vector<double>& v) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  double acc = 0.0;
  for (double x : v) acc += x;
  return acc / static_cast<double>(v.size());
}

}  // namespace

nlohmann::json covariate_shift_aggregates(const Table& records) {
  const auto groups = rows_by_replication(records);
  nlohmann::json agg;
  agg["replications_completed"] = groups.size();
  bool have_oracle = !records.rows.empty() && !std::isnan(records.number(0, "oracle_error"));

  std::vector<double> min_oracle;
  for (const std::string crit : {"pcic", "waic", "iscv"}) {
    std::vector<double> sel_lambda, sel_test, sel_oracle, excess, corr_oracle, corr_test;
    for (const auto& [rep, rows] : groups) {
      const std::size_t best = argmin_row(records, rows, crit);
      sel_lambda.push_back(records.number(best, "lambda"));
      sel_test.push_back(records.number(best, "test_error"));
      std::vector<double> c, t;
      for (std::size_t r : rows) {
        c.push_back(records.number(r, crit));
        t.push_back(records.number(r, "test_error"));
      }
      if (rows.size() >= 2) corr_test.push_back(pearson(c, t));
      if (have_oracle) {
        std::vector<double> o;
        for (std::size_t r : rows) o.push_back(records.number(r, "oracle_error"));
        const double lo = records.number(argmin_row(records, rows, "oracle_error"), "oracle_error");
        sel_oracle.push_back(records.number(best, "oracle_error"));
        excess.push_back((records.number(best, "oracle_error") - lo) / std::abs(lo));
        if (rows.size() >= 2) corr_oracle.push_back(pearson(c, o));
        if (crit == "pcic") min_oracle.push_back(lo);
      }
    }
    nlohmann::json block;
    block["mean_selected_lambda"] = mean_of(sel_lambda);
    block["mean_test_error_at_selected"] = mean_of(sel_test);
    block["mean_pearson_with_test_error"] = mean_of(corr_test);
    if (have_oracle) {
      block["mean_oracle_error_at_selected"] = mean_of(sel_oracle);
      block["mean_relative_oracle_excess"] = mean_of(excess);
      block["mean_pearson_with_oracle_error"] = mean_of(corr_oracle);
    }
    agg[crit] = block;
  }
  if (have_oracle) agg["mean_min_oracle_error"] = mean_of(min_oracle);
  return agg;
}

Table covariate_shift_plot(const Table& records) {
  Table plot;
  plot.columns = {"lambda", "pcic", "waic", "iscv", "test_error", "oracle_error", "replications"};
  std::vector<double> order;
  std::map<double, std::vector<std::size_t>> by_lambda;
  for (std::size_t r = 0; r < records.rows.size(); ++r) {
    const double lam = records.number(r, "lambda");
    if (!by_lambda.contains(lam)) order.push_back(lam);
    by_lambda[lam].push_back(r);
  }
  for (double lam : order) {
    const auto& rows = by_lambda[lam];
    std::vector<Cell> row{lam};
    for (const std::string col : {"pcic", "waic", "iscv", "test_error", "oracle_error"}) {
      std::vector<double> v;
      for (std::size_t r : rows) v.push_back(records.number(r, col));
      row.emplace_back(mean_of(v));
    }
    row.emplace_back(static_cast<std::int64_t>(rows.size()));
    plot.rows.push_back(std::move(row));
  }
  return plot;
}

ReplicationReport run_covariate_shift(const CovariateShiftConfig& cfg) {
  cfg.validate();
  ReplicationReport report;
  report.experiment = "covariate-shift";
  report.config = cfg.to_json();
  report.records.columns = kRecordColumns;
  for (std::size_t rep = 0; rep < cfg.replications; ++rep) {
    ++report.attempted;
    try {
      for (const LambdaResult& r : covariate_shift_replication(cfg, rep)) {
        report.records.rows.push_back({static_cast<std::int64_t>(rep), r.lambda, r.pcic.total, r.pcic.fit,
                                       r.pcic.penalty, r.waic.total, r.waic.fit, r.waic.penalty, r.iscv.total,
                                       r.iscv.fit, r.iscv.penalty, r.test_error, r.oracle_error,
                                       r.posterior_mean(0), r.posterior_mean(1)});
      }
    } catch (const Error& e) {
      report.failures.push_back({"covariate-shift", rep, e.what()});
    }
  }
  report.aggregates = covariate_shift_aggregates(report.records);
  report.plot = covariate_shift_plot(report.records);
  return report;
}

}  // namespace pcic::experiments
