// Acceptance run: one PASS/FAIL line per criterion. Exit status is nonzero
// when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <unistd.h>

#include "sideinfo/bounds.hpp"
#include "sideinfo/cli.hpp"
#include "sideinfo/estimators.hpp"
#include "sideinfo/experiments.hpp"
#include "sideinfo/sim.hpp"

using namespace sideinfo;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

Distribution random_point(std::mt19937_64& gen, std::size_t d) {
  std::exponential_distribution<double> e(1.0);
  std::vector<double> w(d);
  for (auto& x : w) x = e(gen);
  return Distribution::normalized(std::move(w));
}

struct Outcome {
  bool pass;
  std::string detail;
};

int failures = 0;

void report(const char* id, const Outcome& o) {
  std::printf("%s %s %s\n", id, o.pass ? "PASS" : "FAIL", o.detail.c_str());
  std::fflush(stdout);
  failures += !o.pass;
}

Outcome a1() {
  const auto t0 = Clock::now();
  std::mt19937_64 gen(101);
  double worst = 0.0;
  for (int k = 0; k < 50; ++k) {
    const Distribution pi = random_point(gen, 3);
    for (std::uint64_t n = 1; n <= 6; ++n) {
      const double r = sim::exact_risk(pi, [](const SampleProfile& p) { return empirical(p); }, n);
      worst = std::max(worst, std::abs(r - (1 - pi.norm_squared()) / n));
    }
  }
  const double secs = seconds_since(t0);
  return {worst < 1e-12 && secs < 10,
          "empirical exact risk, 50 points x n=1..6: max residual " + fmt("%.3g", worst) + ", " + fmt("%.2f", secs) + " s"};
}

Outcome a2() {
  const auto t0 = Clock::now();
  const std::uint64_t d = 10;
  double worst_margin = -1e300;
  std::string worst_at;
  int points = 0;
  bool ok = true;
  for (const char* kind : {"deterministic", "uniform"}) {
    const Distribution center =
        std::string(kind) == "uniform" ? Distribution::uniform(d) : Distribution::point_mass(d, 0);
    for (double delta : {0.05, 0.1, 0.3}) {
      const BallSideInfo info(center, delta);
      const auto truths = experiments::ball_truths(info, 200, 2024);
      sim::SimConfig cfg;
      cfg.master_seed = 77;
      cfg.trials = 10000;
      cfg.n_grid = {10, 100, 1000};
      std::vector<RiskPoint> worst(cfg.n_grid.size());
      const std::vector<sim::Evaluation> evals{
          {"interpolation",
           [info](const SampleProfile& p) {
             return sim::TrialResult{l2_distance_squared(p.truth(), interpolation(p, info)), {}};
           },
           {}}};
      for (const auto& truth : truths) {
        const auto r = sim::mc_evaluate(truth, sim::iid_sampler(truth), evals, cfg);
        for (std::size_t g = 0; g < worst.size(); ++g) {
          if (r[0].grid[g].loss > worst[g].loss) worst[g] = r[0].grid[g];
        }
      }
      for (const auto& pt : worst) {
        const double ub = bounds::ub_interpolation(pt.n, d, center.norm(), delta).value;
        const double margin = pt.loss - (ub + 3 * pt.std_error);
        ++points;
        if (margin > 0) ok = false;
        if (margin > worst_margin) {
          worst_margin = margin;
          worst_at = std::string(kind) + " delta=" + fmt("%g", delta) + " n=" + std::to_string(pt.n) +
                     " max risk " + fmt("%.4g", pt.loss) + " vs bound " + fmt("%.4g", ub);
        }
      }
    }
  }
  const double secs = seconds_since(t0);
  return {ok && secs < 300, std::to_string(points) + " (guess, delta, n) points, 200 ball draws x 1e4 trials; closest: " +
                                worst_at + "; " + fmt("%.1f", secs) + " s"};
}

Outcome a3() {
  std::mt19937_64 gen(303);
  double regret = 0.0, level = 0.0, oracle = 0.0;
  int done = 0;
  while (done < 1000) {
    const std::size_t d = 2 + gen() % 40;
    const Distribution pi = random_point(gen, d);
    std::vector<bool> low(d);
    for (std::size_t i = 0; i < d; ++i) low[i] = gen() % 2;
    low[0] = true;
    low[1] = false;
    const auto part = PartitionSideInfo::from_membership(low);
    const std::size_t n = 1 + gen() % 100;
    std::discrete_distribution<std::size_t> pick(pi.probs().begin(), pi.probs().end());
    std::vector<Symbol> seq(n);
    for (auto& s : seq) s = pick(gen);
    const auto prof = build_profile(seq, d, pi);
    const std::uint64_t l = gen() % 4;
    if (l >= n || prof.phi(l) == 0) continue;
    regret = std::max(regret, std::abs(sim::regret_breakdown(prof, part, l).residual()));
    level = std::max(level, std::abs(sim::level_decomposition_residual(prof, l, one_level_estimate(prof, l).value)));
    oracle = std::max(oracle, std::abs(sim::oracle_identity_residual(prof, part, l)));
    ++done;
  }
  return {regret < 1e-10 && level < 1e-12 && oracle < 1e-12,
          "1000 instances: regret identity " + fmt("%.3g", regret) + ", level decomposition " + fmt("%.3g", level) +
              ", oracle decomposition " + fmt("%.3g", oracle)};
}

Outcome a4() {
  std::mt19937_64 gen(404);
  double trace = 0.0;
  bool above = true;
  for (int k = 0; k < 100; ++k) {
    const std::size_t d = 2 + gen() % 49;
    const Distribution p = random_point(gen, d);
    const double target = 1 - p.norm_squared();
    trace = std::max(trace, std::abs(bounds::projected_weight_trace(p, bounds::orthogonal_complement_basis(p)) - target));
    above = above && bounds::best_direction(p).value >= target / (d - 1) - 1e-15;
  }
  return {trace < 1e-10 && above, "100 guesses, d <= 50: trace residual " + fmt("%.3g", trace) +
                                      (above ? ", best direction >= average" : ", best direction below average")};
}

Outcome a5() {
  std::mt19937_64 gen(505);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  double lecam = 0.0;
  for (int k = 0; k < 100; ++k) {
    const std::size_t d = 3 + gen() % 30;
    const Distribution c = random_point(gen, d);
    const double delta = 0.01 + 0.99 * unif(gen);
    const std::uint64_t n = 1 + gen() % 100000;
    const auto pair = bounds::lecam_pair(c, delta, n);
    const double t2 = pair.tau * pair.tau;
    const BallSideInfo ball(c, delta);
    if (!ball_contains(ball, pair.plus) || !ball_contains(ball, pair.minus)) lecam = std::max(lecam, 1.0);
    lecam = std::max({lecam, std::abs(l2_distance_squared(pair.plus, pair.minus) - 8 * t2),
                      bounds::kl(pair.plus, pair.minus) - 80 * t2 / delta});
  }
  double assouad = 0.0;
  const std::uint64_t d = 6;
  const Distribution u = Distribution::uniform(d);
  for (std::uint64_t n : {6, 100, 10000}) {
    for (double delta : {0.02, 0.2, 1.0}) {
      const double tau = bounds::assouad_tau(n, d, delta);
      const BallSideInfo ball(u, delta);
      std::vector<Distribution> v;
      for (int mask = 0; mask < 8; ++mask) {
        std::vector<int> s{mask & 1 ? 1 : -1, mask & 2 ? 1 : -1, mask & 4 ? 1 : -1};
        v.push_back(bounds::assouad_vertex(d, tau, s));
        if (!ball_contains(ball, v.back())) assouad = std::max(assouad, 1.0);
      }
      for (int a = 0; a < 8; ++a) {
        for (int b = 0; b < 3; ++b) assouad = std::max(assouad, bounds::kl(v[a], v[a ^ (1 << b)]) - 8.0 * d * tau * tau);
      }
    }
  }
  double sq = 0.0;
  for (int k = 0; k < 200; ++k) {
    const Distribution c = random_point(gen, 2 + gen() % 30);
    const double tau = unif(gen);
    const auto p = bounds::sqrt_perturbation(c, tau);
    sq = std::max({sq, l2_distance_squared(p.result, c) - 12 * tau * tau,
                   std::abs(p.perturbed_norm_squared - (1 + tau * tau))});
  }
  return {lecam < 1e-10 && assouad <= 0 && sq < 1e-12,
          "Le Cam 100 pairs worst " + fmt("%.3g", lecam) + ", hypercube d=6 worst excess " + fmt("%.3g", assouad) +
              ", sqrt perturbation worst " + fmt("%.3g", sq)};
}

Outcome a6() {
  int points = 0, violations = 0;
  const std::vector<std::uint64_t> ns{1, 2, 5, 10, 30, 100, 300, 1000, 10000, 100000};
  const std::vector<std::uint64_t> ds{2, 3, 4, 6, 10, 16, 50, 100, 500, 1000};
  const std::vector<double> deltas{1e-3, 0.005, 0.01, 0.03, 0.05, 0.1, 0.2, 0.4, 0.7, 1.0};
  for (auto n : ns) {
    for (auto d : ds) {
      for (double delta : deltas) {
        ++points;
        const double norm_u = 1 / std::sqrt(double(d));
        const double ub1 = bounds::ub_interpolation(n, d, 1.0, delta).value;
        const double ubu = bounds::ub_interpolation(n, d, norm_u, delta).value;
        if (bounds::lb_lecam(n, delta).value > ub1) ++violations;
        if (bounds::lb_general(n, d, norm_u, delta).value > ubu) ++violations;
        if (d % 2 == 0 && n >= d && bounds::lb_uniform(n, d, delta).value > ubu) ++violations;
      }
    }
  }
  return {violations == 0, std::to_string(points) + " grid points, " + std::to_string(violations) + " violations"};
}

Outcome a7() {
  const auto t0 = Clock::now();
  const Distribution z = sim::zipf(1000, 1.0);
  sim::SimConfig cfg;
  cfg.master_seed = 7;
  cfg.trials = 1000;
  cfg.n_grid = {100, 1000, 10000, 100000};
  const std::vector<sim::Evaluation> evals{{"gt_missing_mass",
                                            [](const SampleProfile& p) {
                                              const double e = p.mass(0) - good_turing_mass(p, 0);
                                              return sim::TrialResult{e * e, {}};
                                            },
                                            {}}};
  const auto r = sim::mc_evaluate(z, sim::iid_sampler(z), evals, cfg);
  std::vector<double> x, y;
  std::string mses;
  bool finite = true;
  for (const auto& pt : r[0].grid) {
    mses += (mses.empty() ? "" : ", ") + std::to_string(pt.n) + ":" + fmt("%.3g", pt.loss);
    if (pt.loss <= 0) finite = false;
    x.push_back(std::log(double(pt.n)));
    y.push_back(std::log(pt.loss));
  }
  const double secs = seconds_since(t0);
  // Least-squares slope over the points with a finite log.
  auto slope_of = [&](std::size_t m) {
    double mx = 0, my = 0;
    for (std::size_t k = 0; k < m; ++k) mx += x[k] / m, my += y[k] / m;
    double sxy = 0, sxx = 0;
    for (std::size_t k = 0; k < m; ++k) sxy += (x[k] - mx) * (y[k] - my), sxx += (x[k] - mx) * (x[k] - mx);
    return sxy / sxx;
  };
  if (!finite) {
    std::size_t m = 0;
    while (m < y.size() && std::isfinite(y[m])) ++m;
    return {false, "MSE " + mses + "; a zero MSE leaves the log-log slope undefined (slope over the nonzero points " +
                       (m >= 2 ? fmt("%.3f", slope_of(m)) : std::string("n/a")) + "); " + fmt("%.1f", secs) + " s"};
  }
  const double slope = slope_of(x.size());
  return {std::abs(slope + 1) <= 0.3 && secs < 300,
          "MSE " + mses + "; slope " + fmt("%.3f", slope) + "; " + fmt("%.1f", secs) + " s"};
}

std::string run_cli(const std::vector<std::string>& args, int& status) {
  std::ostringstream out, err;
  status = cli::run(args, out, err);
  return out.str();
}

double csv_loss(const std::string& csv, const std::string& estimator, const std::string& n) {
  std::istringstream in(csv);
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind(estimator + "," + n + ",", 0) == 0) {
      std::istringstream cells(line);
      std::string cell;
      for (int k = 0; k < 3; ++k) std::getline(cells, cell, ',');
      return std::stod(cell);
    }
  }
  return std::nan("");
}

Outcome a8() {
  const std::uint64_t d = 1000;
  experiments::Model2Setup setup{sim::two_level_synthetic(d), sim::lower_half_partition(d), std::nullopt, {}};
  setup.config.master_seed = 8;
  setup.config.trials = 2000;
  setup.config.n_grid = {500, 1000, 2000, 4000};
  setup.config.levels = {0, 1};
  const auto reports = experiments::run_model2(setup);
  auto find = [&](const std::string& name) -> const RiskReport& {
    const auto it = std::find_if(reports.begin(), reports.end(), [&](const RiskReport& r) { return r.estimator == name; });
    if (it == reports.end()) throw std::runtime_error("no report named " + name);
    return *it;
  };
  bool separated = true, share_separated = true, oracle_zero = true;
  double worst_z = 1e300, worst_share_z = 1e300;
  for (std::uint64_t l : {0, 1}) {
    const std::string s = "@l" + std::to_string(l);
    const auto& one = find("one_level" + s);
    const auto& two = find("two_level" + s);
    const auto& share = find("two_level_share" + s);
    const auto& orc = find("oracle_two_level" + s);
    for (std::size_t g = 0; g < one.grid.size(); ++g) {
      auto z = [&](const RiskPoint& a) {
        return (one.grid[g].loss - a.loss) / std::hypot(one.grid[g].std_error, a.std_error);
      };
      worst_z = std::min(worst_z, z(two.grid[g]));
      worst_share_z = std::min(worst_share_z, z(share.grid[g]));
      separated = separated && z(two.grid[g]) > 3;
      share_separated = share_separated && z(share.grid[g]) > 3;
      oracle_zero = oracle_zero && orc.grid[g].loss == 0.0 && orc.grid[g].failures == 0;
    }
  }

  // Corpus pipeline on the bundled sample.
  const std::string data = SIDEINFO_DATA_DIR;
  int s1 = 0, s2 = 0, s3 = 0;
  run_cli({"corpus", "bigram", "--corpus", data + "/sample_corpus.txt", "--context", "big", "--manifest", "/dev/null"}, s1);
  run_cli({"corpus", "delta", "--embeddings", data + "/sample_embeddings.txt", "--words", "big,large", "--manifest",
           "/dev/null"},
          s2);
  const std::string m1 = run_cli({"simulate", "model1", "--corpus", data + "/sample_corpus.txt", "--context", "big",
                                  "--guess", "large,huge", "--embeddings", data + "/sample_embeddings.txt", "--words",
                                  "big,large", "--n-grid", "10,100", "--trials", "1000", "--manifest", "/dev/null"},
                                 s3);
  const bool corpus_ok = s1 == 0 && s2 == 0 && s3 == 0;
  const double interp = csv_loss(m1, "interpolation", "10"), emp = csv_loss(m1, "empirical", "10");

  std::string detail = "two-level vs one-level smallest gap " + fmt("%.2f", worst_z) + " combined stderr" +
                       (separated ? "" : " (two-level not better)") + "; side-share variant smallest gap " +
                       fmt("%.2f", worst_share_z) + (share_separated ? " (better everywhere)" : "") +
                       "; oracle " + (oracle_zero ? "exactly 0" : "nonzero") + "; corpus pipeline " +
                       (corpus_ok ? "ran" : "failed") + ", n=10 interpolation " + fmt("%.4g", interp) +
                       " vs empirical " + fmt("%.4g", emp);
  return {separated && oracle_zero && corpus_ok, detail};
}

Outcome a9() {
  const fs::path dir = fs::temp_directory_path() / ("sideinfo_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  auto slurp = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), {});
  };
  const std::vector<std::vector<std::string>> runs{
      {"simulate", "model2", "--n-grid", "500,1000,2000", "--trials", "400", "--two-level-d", "1000", "--lower-half",
       "--levels", "0,1,2", "--seed", "31"},
      {"simulate", "model1", "--n-grid", "10,100,1000", "--trials", "300", "--pi0-kind", "uniform", "--d", "10",
       "--delta", "0.1", "--ball-draws", "8", "--seed", "32"}};
  const unsigned many = std::max(8u, std::thread::hardware_concurrency());
  bool ok = true;
  std::string why;
  int k = 0;
  for (const auto& base : runs) {
    const fs::path one = dir / ("one" + std::to_string(k) + ".csv"), par = dir / ("par" + std::to_string(k) + ".csv");
    ++k;
    int s1 = 0, s2 = 0, s3 = 0, s4 = 0;
    auto a = base, b = base;
    a.insert(a.end(), {"--threads", "1", "--out", one.string()});
    b.insert(b.end(), {"--threads", std::to_string(many), "--out", par.string()});
    run_cli(a, s1);
    run_cli(b, s2);
    const std::string first = slurp(one);
    if (s1 || s2 || first.empty() || first != slurp(par)) ok = false, why += " thread-count difference in " + base[1] + ";";
    run_cli({"replay", one.string() + ".manifest.json"}, s3);
    run_cli({"replay", one.string() + ".manifest.json", "--threads", std::to_string(many)}, s4);
    if (s3 || s4 || slurp(one) != first) ok = false, why += " replay mismatch in " + base[1] + ";";
  }
  fs::remove_all(dir);
  return {ok, "model1 and model2 CSVs identical for 1 and " + std::to_string(many) +
                  " threads and under manifest replay" + (ok ? "" : ":" + why)};
}

}  // namespace

// Optional arguments name the criteria to run (default: all).
int main(int argc, char** argv) {
  const std::vector<std::string> only(argv + 1, argv + argc);
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"A1", a1}, {"A2", a2}, {"A3", a3}, {"A4", a4}, {"A5", a5},
      {"A6", a6}, {"A7", a7}, {"A8", a8}, {"A9", a9}};
  for (const auto& [id, f] : criteria) {
    if (!only.empty() && std::find(only.begin(), only.end(), id) == only.end()) continue;
    try {
      report(id, f());
    } catch (const std::exception& e) {
      report(id, {false, std::string("error: ") + e.what()});
    }
  }
  return failures == 0 ? 0 : 1;
}
