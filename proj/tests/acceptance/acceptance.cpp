// Acceptance suite: one pass/fail line per criterion. Run with
// --criterion N for a single criterion; without it, all ten run in order.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pcic/criteria.hpp"
#include "pcic/experiments/causal.hpp"
#include "pcic/experiments/covariate_shift.hpp"
#include "pcic/experiments/oracle.hpp"
#include "pcic/experiments/quasibayes.hpp"
#include "pcic/models/covariate_shift.hpp"
#include "pcic/models/estimation.hpp"
#include "pcic/models/location_family.hpp"
#include "pcic/models/model_spec.hpp"
#include "pcic/numkit/distributions.hpp"
#include "pcic/numkit/reductions.hpp"
#include "pcic/sampler.hpp"

namespace fs = std::filesystem;
using namespace pcic;
using namespace pcic::experiments;
using models::CovariateShiftModel;
using models::LocationFamily;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double v, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

double combined_se(const MeanSe& a, const MeanSe& b) { return std::hypot(a.se, b.se); }

// --- 1 ---------------------------------------------------------------------

Outcome waic_reduction() {
  RngStream rng = substream(101, 0);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto n = static_cast<Eigen::Index>(1 + rng() % 40);
    const auto s = static_cast<Eigen::Index>(2 + rng() % 400);
    EvalBundle b;
    b.log_pred.resize(n, s);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double centre = -3.0 * rng.uniform01();
      const double spread = 2.0 * rng.uniform01();
      for (Eigen::Index j = 0; j < s; ++j) b.log_pred(i, j) = centre + spread * standard_normal(rng);
    }
    b.score = b.log_pred;
    b.weights.assign(static_cast<std::size_t>(n), 1.0);
    worst = std::max(worst, std::abs(compute_pcic(b).total - compute_waic(b).total));
  }
  return {worst <= 1e-10, "max |PCIC - WAIC| over 100 bundles = " + fmt(worst) + " (limit 1e-10)"};
}

// --- shared covariate-shift helpers ----------------------------------------

CovariateShiftConfig sinc_design(std::size_t n) {
  CovariateShiftConfig cfg;
  cfg.n_train = n;
  return cfg;
}

struct ConjugateFit {
  CovariateShiftModel model;
  std::vector<RegressionPair> data;
  GaussianPosterior post;
};

ConjugateFit fit_sinc(const CovariateShiftConfig& cfg, double lambda, RngStream& rng) {
  CovariateShiftModel model(lambda, cfg.noise_sd, cfg.train, cfg.test, cfg.prior_var);
  auto data = gen_sinc_pairs(cfg.n_train, cfg.train, cfg.noise_sd, rng);
  GaussianPosterior post = covariate_shift_posterior(model, data);
  return {model, std::move(data), std::move(post)};
}

// --- 2 ---------------------------------------------------------------------

Outcome pcic_iscv_equivalence() {
  const std::vector<std::size_t> sizes{50, 200, 800};
  std::vector<double> medians;
  std::string detail = "median n|PCIC - IS-CV_wq|:";
  for (std::size_t k = 0; k < sizes.size(); ++k) {
    const CovariateShiftConfig cfg = sinc_design(sizes[k]);
    std::vector<double> scaled;
    for (std::size_t rep = 0; rep < 50; ++rep) {
      RngStream data_rng = purpose_stream(202 + k, data_stream, rep);
      const ConjugateFit fit = fit_sinc(cfg, 1.0, data_rng);
      RngStream draw_rng = purpose_stream(202 + k, draw_stream, rep);
      const Draws draws = sample_mvn(fit.post.mean, fit.post.cov, 20000, draw_rng);
      const EvalBundle b = models::eval_bundle(fit.model, fit.data, draws);
      scaled.push_back(static_cast<double>(sizes[k]) * std::abs(compute_pcic(b).total - compute_iscv_wq(b).total));
    }
    medians.push_back(median(scaled));
    detail += " n=" + std::to_string(sizes[k]) + ": " + fmt(medians.back());
  }
  const bool pass = medians[0] > medians[1] && medians[1] > medians[2];
  return {pass, detail + " (must strictly decrease)"};
}

// --- 3 ---------------------------------------------------------------------

/// G_n for the straight-line model: fresh training-law covariates with
/// weight r, the response integrated exactly under the Gaussian predictive.
OracleEstimate sinc_generalization_error(const CovariateShiftModel& model, const GaussianPosterior& post,
                                         const CovariateShiftConfig& cfg, std::size_t replicates, RngStream& rng) {
  const double sigma2 = cfg.noise_sd * cfg.noise_sd;
  std::vector<double> values(replicates);
  for (double& v : values) {
    double acc = 0.0;
    for (std::size_t i = 0; i < cfg.n_train; ++i) {
      const double x = cfg.train.mean + cfg.train.sd * standard_normal(rng);
      const Vector f{{1.0, x}};
      acc += model.ratio(x) * expected_gaussian_nll(sinc(x), sigma2, f.dot(post.mean), sigma2 + f.dot(post.cov * f));
    }
    v = acc / static_cast<double>(cfg.n_train);
  }
  const MeanSe ms = mean_and_se(values);
  return {ms.mean, ms.se};
}

Outcome unbiasedness() {
  const CovariateShiftConfig cfg = sinc_design(100);
  std::vector<double> pcic, iscv, oracle;
  for (std::size_t rep = 0; rep < 400; ++rep) {
    RngStream data_rng = purpose_stream(303, data_stream, rep);
    const ConjugateFit fit = fit_sinc(cfg, 1.0, data_rng);
    RngStream draw_rng = purpose_stream(303, draw_stream, rep);
    const Draws draws = sample_mvn(fit.post.mean, fit.post.cov, 4000, draw_rng);
    const EvalBundle b = models::eval_bundle(fit.model, fit.data, draws);
    pcic.push_back(compute_pcic(b).total);
    iscv.push_back(compute_iscv_wq(b).total);
    RngStream oracle_rng = purpose_stream(303, oracle_stream, rep);
    oracle.push_back(sinc_generalization_error(fit.model, fit.post, cfg, 500, oracle_rng).mean);
  }
  const MeanSe p = mean_and_se(pcic), i = mean_and_se(iscv), g = mean_and_se(oracle);
  const double dp = std::abs(p.mean - g.mean), di = std::abs(i.mean - g.mean);
  const double sp = 3.0 * combined_se(p, g), si = 3.0 * combined_se(i, g);
  return {dp <= sp && di <= si, "mean G_n=" + fmt(g.mean) + "; |PCIC - G_n|=" + fmt(dp) + " (limit " + fmt(sp) +
                                    "); |IS-CV_wq - G_n|=" + fmt(di) + " (limit " + fmt(si) + ")"};
}

// --- 4 ---------------------------------------------------------------------

/// Straight-line truth y = 0.2 + 0.8 x + noise under the training law.
std::vector<RegressionPair> line_pairs(std::size_t count, double noise_sd, const NormalParams& train, RngStream& rng) {
  std::vector<RegressionPair> out(count);
  for (auto& p : out) {
    p.x = train.mean + train.sd * standard_normal(rng);
    p.y = 0.2 + 0.8 * p.x + noise_sd * standard_normal(rng);
  }
  return out;
}

/// Relative gap between IS-CV_wq from 5e4 exact draws and leave-one-out by
/// explicit conjugate refits.
std::pair<double, double> loo_gap(const CovariateShiftModel& model, const std::vector<RegressionPair>& data,
                                  double noise_sd, RngStream& draw_rng) {
  const GaussianPosterior full = covariate_shift_posterior(model, data);
  const Draws draws = sample_mvn(full.mean, full.cov, 50000, draw_rng);
  const double iscv = compute_iscv_wq(models::eval_bundle(model, data, draws)).total;
  double loo = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    std::vector<RegressionPair> rest;
    for (std::size_t j = 0; j < data.size(); ++j) {
      if (j != i) rest.push_back(data[j]);
    }
    const GaussianPosterior post = covariate_shift_posterior(model, rest);
    const Vector f{{1.0, data[i].x}};
    loo += model.weight(data[i]) * gaussian_predictive_nll(f, data[i].y, post, noise_sd * noise_sd);
  }
  loo /= static_cast<double>(data.size());
  return {iscv, loo};
}

Outcome exact_loo() {
  const NormalParams train{0.0, 1.0}, test{0.5, 0.3};
  const CovariateShiftModel model(1.0, 1.0, train, test);
  RngStream data_rng = substream(404, 0), draw_rng = substream(404, 1);
  const auto [iscv, loo] = loo_gap(model, line_pairs(30, 1.0, train, data_rng), 1.0, draw_rng);
  const double rel = std::abs(iscv - loo) / std::abs(loo);

  // The sinc design has a loss near zero, so a relative gap there mostly
  // measures importance-sampling noise. Reported, not gated.
  const CovariateShiftConfig cfg = sinc_design(30);
  RngStream sinc_rng = substream(404, 2), sinc_draws = substream(404, 3);
  const ConjugateFit fit = fit_sinc(cfg, 1.0, sinc_rng);
  const auto [s_iscv, s_loo] = loo_gap(fit.model, fit.data, cfg.noise_sd, sinc_draws);

  return {rel <= 0.005, "weighted straight-line model: IS-CV_wq=" + fmt(iscv, 8) + ", exact leave-one-out=" +
                            fmt(loo, 8) + ", relative difference " + fmt(rel) +
                            " (limit 0.005); supplementary sinc design: " + fmt(s_iscv, 8) + " vs " + fmt(s_loo, 8) +
                            ", relative " + fmt(std::abs(s_iscv - s_loo) / std::abs(s_loo))};
}

// --- 5 ---------------------------------------------------------------------

Outcome curve_tracking() {
  CovariateShiftConfig cfg;
  cfg.seed = 505;
  cfg.replications = 20;
  const ReplicationReport r = run_covariate_shift(cfg);
  const double corr = r.aggregates["pcic"]["mean_pearson_with_oracle_error"].get<double>();
  const double excess = r.aggregates["pcic"]["mean_relative_oracle_excess"].get<double>();
  const double at_sel = r.aggregates["pcic"]["mean_oracle_error_at_selected"].get<double>();
  const double best = r.aggregates["mean_min_oracle_error"].get<double>();
  const double pooled = (at_sel - best) / std::abs(best);
  const bool pass = corr >= 0.9 && excess <= 0.05 && r.failures.empty();
  return {pass, "mean Pearson(PCIC, oracle)=" + fmt(corr) + " (>= 0.9); mean relative oracle excess at argmin PCIC=" +
                    fmt(excess) + " (<= 0.05; ratio of means " + fmt(pooled) + ")"};
}

// --- 6 ---------------------------------------------------------------------

struct Frequencies {
  double pcic = 0.0;
  double waic = 0.0;
  std::size_t completed = 0;
};

Frequencies selection_frequency(LocationFamily truth, std::size_t n, std::uint64_t seed) {
  QuasiBayesConfig cfg;
  cfg.truths = {truth};
  cfg.sample_sizes = {n};
  cfg.seed = seed;
  cfg.oracle_test_points = 0;
  const ReplicationReport r = run_quasibayes(cfg);
  Frequencies f;
  const std::string want(models::family_name(truth));
  for (const auto& row : r.aggregates["selection"]) {
    const double share = 100.0 * row["counts"][want].get<double>() / row["completed"].get<double>();
    (row["criterion"] == "pcic" ? f.pcic : f.waic) = share;
    f.completed = row["completed"].get<std::size_t>();
  }
  return f;
}

Outcome selection_table() {
  std::vector<Frequencies> batches;
  double pcic_sum = 0.0, waic_sum = 0.0;
  int pcic_ge_waic = 0;
  std::string per_batch;
  for (std::uint64_t b = 0; b < 10; ++b) {
    batches.push_back(selection_frequency(LocationFamily::normal, 10, 6000 + b));
    pcic_sum += batches.back().pcic;
    waic_sum += batches.back().waic;
    pcic_ge_waic += batches.back().pcic >= batches.back().waic ? 1 : 0;
    per_batch += (b ? " " : "") + fmt(batches.back().pcic, 3) + "/" + fmt(batches.back().waic, 3);
  }
  const double pcic10 = pcic_sum / 10.0, waic10 = waic_sum / 10.0;
  const Frequencies n100 = selection_frequency(LocationFamily::normal, 100, 6100);
  const Frequencies cauchy = selection_frequency(LocationFamily::cauchy, 100, 6200);

  const bool a = pcic10 >= 80.0 && pcic10 <= 100.0;
  const bool b = waic10 >= 71.0 && waic10 <= 91.0;
  const bool c = pcic_ge_waic >= 8;
  const bool d = n100.pcic >= 95.0 && n100.waic >= 95.0;
  const bool e = cauchy.pcic >= 90.0 && cauchy.waic >= 90.0;
  const auto mark = [](bool ok) { return ok ? "ok" : "FAIL"; };
  std::string detail = "normal N=10 pooled over 10x100: PCIC " + fmt(pcic10, 4) + " [80,100] " + mark(a) + ", WAIC " +
                       fmt(waic10, 4) + " [71,91] " + mark(b) + "; PCIC>=WAIC in " + std::to_string(pcic_ge_waic) +
                       "/10 batches " + mark(c) + " (pcic/waic per batch: " + per_batch + "); normal N=100: " +
                       fmt(n100.pcic, 3) + "/" + fmt(n100.waic, 3) + " (>=95) " + mark(d) + "; cauchy N=100: " +
                       fmt(cauchy.pcic, 3) + "/" + fmt(cauchy.waic, 3) + " (>=90) " + mark(e);
  return {a && b && c && d && e, detail};
}

// --- 7 ---------------------------------------------------------------------

std::vector<double> mean_gaps(LocationFamily truth, LocationFamily predictive, std::uint64_t seed) {
  std::vector<double> out;
  for (std::size_t n : {50u, 200u, 800u}) {
    QuasiBayesConfig cfg;
    cfg.truths = {truth};
    cfg.candidates = {predictive};
    cfg.sample_sizes = {n};
    cfg.seed = seed;
    cfg.oracle_test_points = 0;
    const ReplicationReport r = run_quasibayes(cfg);
    out.push_back(r.aggregates["cells"][0]["candidates"][std::string(models::family_name(predictive))]
                               ["mean_penalty_gap"]
                                   .get<double>());
  }
  return out;
}

Outcome penalty_gap_decay() {
  const std::vector<double> gaps = mean_gaps(LocationFamily::laplace, LocationFamily::laplace, 707);
  std::vector<double> abs_gap;
  for (double g : gaps) abs_gap.push_back(std::abs(g));
  const bool monotone = abs_gap[0] >= abs_gap[1] && abs_gap[1] >= abs_gap[2];
  const bool shrunk = abs_gap[2] <= 0.25 * abs_gap[0];
  std::string detail = "|mean gap| at n=50,200,800: " + fmt(abs_gap[0]) + ", " + fmt(abs_gap[1]) + ", " +
                       fmt(abs_gap[2]) + " (non-increasing, last <= 0.25 x first)";

  // The score and predictive above coincide, so the gap is identically
  // zero. Report a non-degenerate case alongside: normal data, normal
  // predictive, Laplace score.
  const std::vector<double> alt = mean_gaps(LocationFamily::normal, LocationFamily::normal, 717);
  detail += "; supplementary normal-predictive |mean gap|: " + fmt(std::abs(alt[0])) + ", " + fmt(std::abs(alt[1])) +
            ", " + fmt(std::abs(alt[2])) + " (n x gap: " + fmt(50.0 * std::abs(alt[0])) + ", " +
            fmt(200.0 * std::abs(alt[1])) + ", " + fmt(800.0 * std::abs(alt[2])) + ")";
  return {monotone && shrunk, detail};
}

// --- 8 ---------------------------------------------------------------------

Outcome expansion_order() {
  const std::size_t n = 200;
  const Vector truth{{0.2, 0.8}};
  const double sigma = 0.25, sigma2 = sigma * sigma;
  const NormalParams train{0.0, 1.0}, test{0.5, 0.3};
  const CovariateShiftModel model(1.0, sigma, train, test);
  const auto draw_pairs = [&](std::size_t count, RngStream& rng) { return line_pairs(count, sigma, train, rng); };

  // Population information matrices at the generating parameter, which is
  // the score optimum for a correctly specified mean at lambda = 1.
  RngStream big_rng = substream(808, 0);
  const auto big = draw_pairs(400000, big_rng);
  const double penalty = models::theoretical_penalty(models::empirical_info_matrices(model, big, truth), n);

  // Fixed covariate sample for the expectation over X~; y~ is integrated exactly.
  RngStream x_rng = substream(808, 1);
  std::vector<double> xs(20000), rs(20000);
  double loss_at_truth = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    xs[k] = train.mean + train.sd * standard_normal(x_rng);
    rs[k] = model.ratio(xs[k]);
    loss_at_truth += rs[k] * (0.5 * std::log(2.0 * std::numbers::pi * sigma2) + 0.5);
  }
  loss_at_truth /= static_cast<double>(xs.size());

  std::vector<double> excess;
  for (std::size_t rep = 0; rep < 2000; ++rep) {
    RngStream rng = purpose_stream(808, data_stream, rep);
    const auto data = draw_pairs(n, rng);
    const GaussianPosterior post = covariate_shift_posterior(model, data);
    double g = 0.0;
    for (std::size_t k = 0; k < xs.size(); ++k) {
      const double x = xs[k];
      const double mean = post.mean(0) + post.mean(1) * x;
      const double var = sigma2 + post.cov(0, 0) + 2.0 * post.cov(0, 1) * x + post.cov(1, 1) * x * x;
      g += rs[k] * expected_gaussian_nll(truth(0) + truth(1) * x, sigma2, mean, var);
    }
    excess.push_back(g / static_cast<double>(xs.size()) - loss_at_truth);
  }
  const MeanSe ms = mean_and_se(excess);
  const double rel = std::abs(ms.mean - penalty) / std::abs(penalty);
  return {rel <= 0.2, "Monte Carlo E[G_n] - L = " + fmt(ms.mean) + " (se " + fmt(ms.se) + "), theoretical penalty " +
                          fmt(penalty) + ", relative difference " + fmt(rel) + " (limit 0.2)"};
}

// --- 9 ---------------------------------------------------------------------

Outcome causal_agreement() {
  CausalConfig cfg;
  cfg.seed = 909;
  const ReplicationReport r = run_causal(cfg);
  std::vector<double> pcic, wloss;
  std::size_t positive = 0;
  for (std::size_t i = 0; i < r.records.rows.size(); ++i) {
    if (r.records.text(i, "candidate") != "1+x+x^2") continue;
    pcic.push_back(r.records.number(i, "pcic"));
    wloss.push_back(r.records.number(i, "wloss"));
    positive += r.records.number(i, "pcic_penalty") > 0.0 ? 1 : 0;
  }
  const MeanSe p = mean_and_se(pcic), w = mean_and_se(wloss);
  const double diff = std::abs(p.mean - w.mean), limit = 3.0 * combined_se(p, w);
  const bool pass = diff <= limit && positive == pcic.size() && pcic.size() == cfg.replications;
  return {pass, "full model over " + std::to_string(pcic.size()) + " replications: mean PCIC_w=" + fmt(p.mean) +
                    ", mean WLOSS/n=" + fmt(w.mean) + ", |diff|=" + fmt(diff) + " (limit " + fmt(limit) +
                    "); positive penalty in " + std::to_string(positive) + "/" + std::to_string(pcic.size())};
}

// --- 10 --------------------------------------------------------------------

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome cli_determinism(const std::string& cli) {
  if (cli.empty()) return {false, "no --cli binary given"};
  const fs::path root = fs::temp_directory_path() / ("pcic_acceptance_" + std::to_string(::getpid()));
  fs::remove_all(root);
  fs::create_directories(root);
  {
    std::ofstream(root / "lp.csv") << "-1,-2,-1.5\n-0.3,-0.2,-0.9\n";
    std::ofstream(root / "sc.csv") << "-1.1,-2.2,-1.4\n-0.2,-0.3,-0.8\n";
  }
  const std::vector<std::string> runs{
      "covariate-shift --seed 11 --reps 2 --draws 1000",
      "causal --seed 11 --reps 5 --draws 1000",
      "quasi-bayes --seed 11 --reps 5 --draws 1000 --burn-in 500",
      "compute --log-pred " + (root / "lp.csv").string() + " --score " + (root / "sc.csv").string() +
          " --unit-weights"};
  std::size_t compared = 0;
  std::string mismatch;
  for (std::size_t k = 0; k < runs.size(); ++k) {
    for (const char* side : {"a", "b"}) {
      const fs::path out = root / (std::to_string(k) + side);
      const std::string cmd = "\"" + cli + "\" " + runs[k] + " --out \"" + out.string() + "\" > /dev/null 2>&1";
      if (std::system(cmd.c_str()) != 0) {
        fs::remove_all(root);
        return {false, "command failed: " + runs[k]};
      }
    }
    const fs::path a = root / (std::to_string(k) + "a"), b = root / (std::to_string(k) + "b");
    for (const auto& entry : fs::directory_iterator(a)) {
      ++compared;
      if (slurp(entry.path()) != slurp(b / entry.path().filename())) mismatch += entry.path().filename().string() + " ";
    }
  }
  fs::remove_all(root);
  return {mismatch.empty() && compared >= 13,
          std::to_string(compared) + " output files compared byte-for-byte across repeated runs" +
              (mismatch.empty() ? "" : "; differing: " + mismatch)};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria"};
  int only = 0;
  std::string cli;
  app.add_option("--criterion", only, "Run a single criterion (1-10)")->check(CLI::Range(1, 10));
  app.add_option("--cli", cli, "Path to the pcic executable (criterion 10)");
  CLI11_PARSE(app, argc, argv);

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"PCIC reduces to WAIC", waic_reduction},
      {"PCIC and IS-CV_wq asymptotic equivalence", pcic_iscv_equivalence},
      {"PCIC and IS-CV_wq unbiased for G_n", unbiasedness},
      {"IS-CV_wq matches exact leave-one-out", exact_loo},
      {"PCIC tracks the covariate-shift oracle curve", curve_tracking},
      {"location-family selection frequencies", selection_table},
      {"PCIC and WAIC penalties coincide for matching score", penalty_gap_decay},
      {"expected generalisation excess matches the information-matrix penalty", expansion_order},
      {"PCIC_w agrees with the causal WLOSS oracle", causal_agreement},
      {"CLI outputs are deterministic", [&] { return cli_determinism(cli); }},
  };

  int failures = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    if (only != 0 && static_cast<std::size_t>(only) != k + 1) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::cout << "criterion " << (k + 1) << ": " << (o.pass ? "PASS" : "FAIL") << "  " << criteria[k].first << " | "
              << o.detail << " [" << fmt(secs, 3) << " s]" << std::endl;
    failures += o.pass ? 0 : 1;
  }
  return failures == 0 ? 0 : 1;
}
