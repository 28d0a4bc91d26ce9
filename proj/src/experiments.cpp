#include "sideinfo/experiments.hpp"

#include <cmath>
#include <memory>
#include <sstream>
#include <unordered_map>

#include "sideinfo/bounds.hpp"
#include "sideinfo/error.hpp"
#include "sideinfo/estimators.hpp"
#include "sideinfo/io.hpp"

namespace sideinfo::experiments {
namespace {

bool is_uniform(const Distribution& dist) {
  const double u = 1.0 / static_cast<double>(dist.size());
  for (double p : dist.probs()) {
    if (std::abs(p - u) > kSimplexTolerance) return false;
  }
  return true;
}

sim::Evaluation full_l2(std::string name, std::function<Distribution(const SampleProfile&)> estimator) {
  return {std::move(name),
          [estimator = std::move(estimator)](const SampleProfile& p) {
            return sim::TrialResult{l2_distance_squared(p.truth(), estimator(p)), {}};
          },
          {}};
}

std::vector<Symbol> lexicon_indices(std::span<const std::string> tokens, std::span<const std::string> lexicon) {
  std::unordered_map<std::string, Symbol> index;
  for (Symbol i = 0; i < lexicon.size(); ++i) index.emplace(lexicon[i], i);
  std::vector<Symbol> out(tokens.size());
  for (std::size_t p = 0; p < tokens.size(); ++p) {
    auto it = index.find(tokens[p]);
    out[p] = it == index.end() ? lexicon.size() : it->second;
  }
  return out;
}

}  // namespace

BoundOverlay model1_bounds(const BallSideInfo& info, std::uint64_t n) {
  const std::uint64_t d = info.center().size();
  const double delta = info.radius();
  const double norm = info.center().norm();
  BoundOverlay overlay;
  overlay.n = n;
  overlay.upper = bounds::ub_interpolation(n, d, norm, delta).value;
  overlay.lowers.emplace_back("lb_lecam", bounds::lb_lecam(n, delta).value);
  if (is_uniform(info.center()) && d % 2 == 0 && n >= d) {
    overlay.lowers.emplace_back("lb_uniform", bounds::lb_uniform(n, d, delta).value);
  }
  if (d >= 2) overlay.lowers.emplace_back("lb_general", bounds::lb_general(n, d, norm, delta).value);
  return overlay;
}

std::vector<Distribution> ball_truths(const BallSideInfo& info, std::uint64_t draws, std::uint64_t master) {
  if (draws == 0) fail(ErrorCode::kInput, "need at least one ball draw");
  std::vector<Distribution> out;
  out.reserve(draws);
  for (std::uint64_t k = 0; k < draws; ++k) out.push_back(sim::sample_in_ball(info, trial_seed(master, 0, k)));
  return out;
}

std::vector<RiskReport> run_model1(const Model1Setup& setup) {
  if (setup.truths.empty()) fail(ErrorCode::kInput, "no true distribution to evaluate");
  const BallSideInfo& info = setup.info;
  const std::optional<double> alpha = setup.alpha;
  std::vector<sim::Evaluation> evals{
      full_l2("empirical", [](const SampleProfile& p) { return empirical(p); }),
      full_l2("add_sqrt_n_over_d", [](const SampleProfile& p) { return add_constant(p); }),
      full_l2("interpolation", [info, alpha](const SampleProfile& p) { return interpolation(p, info, alpha); }),
  };

  std::vector<RiskReport> worst;
  for (const Distribution& truth : setup.truths) {
    if (truth.size() != info.center().size()) {
      fail(ErrorCode::kDimension, "true distribution and center differ in alphabet size");
    }
    const sim::Sampler sampler = setup.sampler ? *setup.sampler : sim::iid_sampler(truth);
    auto reports = sim::mc_evaluate(truth, sampler, evals, setup.config);
    if (worst.empty()) {
      worst = std::move(reports);
      continue;
    }
    for (std::size_t e = 0; e < worst.size(); ++e) {
      for (std::size_t g = 0; g < worst[e].grid.size(); ++g) {
        if (reports[e].grid[g].loss > worst[e].grid[g].loss) worst[e].grid[g] = reports[e].grid[g];
      }
    }
  }
  for (auto& r : worst) {
    for (const auto& p : r.grid) r.bounds.push_back(model1_bounds(info, p.n));
  }
  return worst;
}

std::vector<RiskReport> run_model2(const Model2Setup& setup) {
  const auto& levels = setup.config.levels;
  if (levels.empty()) fail(ErrorCode::kInput, "no levels given");
  if (setup.partition.alphabet_size() != setup.truth.size()) {
    fail(ErrorCode::kDimension, "partition and distribution differ in alphabet size");
  }
  const auto part = std::make_shared<const PartitionSideInfo>(setup.partition);
  std::vector<sim::Evaluation> evals;
  for (std::uint64_t l : levels) {
    const std::string suffix = "@l" + std::to_string(l);
    evals.push_back({"one_level" + suffix,
                     [l](const SampleProfile& p) {
                       return sim::TrialResult{level_loss(p, l, one_level_estimate(p, l).value), {}};
                     },
                     {}});
    for (TwoLevelScale scale : setup.scales) {
      const std::string name = scale == TwoLevelScale::kWithinSide ? "two_level" : "two_level_share";
      evals.push_back({name + suffix,
                       [l, part, scale](const SampleProfile& p) {
                         const sim::RegretBreakdown b = sim::regret_breakdown(p, *part, l, scale);
                         const TwoLevelEstimate e = two_level_estimate(p, *part, l, scale);
                         return sim::TrialResult{
                             two_level_loss(p, *part, l, e.value_low, e.value_high),
                             {b.gain, b.one_level_error, b.two_level_error_low, b.two_level_error_high,
                              b.total_regret}};
                       },
                       {"gain", "one_level_error", "two_level_error_low", "two_level_error_high", "regret"}});
    }
    evals.push_back({"oracle_two_level" + suffix,
                     [l, part](const SampleProfile& p) {
                       if (p.phi(l) == 0) fail(ErrorCode::kEmptyLevel, "level " + std::to_string(l) + " is empty");
                       const auto [low, high] = oracle_two_level(p, *part, l);
                       return sim::TrialResult{two_level_loss(p, *part, l, low.value_or(0.0), high.value_or(0.0)), {}};
                     },
                     {}});
  }
  sim::SimConfig config = setup.config;
  config.loss = sim::LossKind::kPerLevel;
  const sim::Sampler sampler = setup.sampler ? *setup.sampler : sim::iid_sampler(setup.truth);
  return sim::mc_evaluate(setup.truth, sampler, evals, config);
}

sim::Sampler bigram_window_sampler(std::vector<std::string> tokens, std::string context,
                                   std::vector<std::string> lexicon_tokens) {
  const auto index = lexicon_indices(tokens, lexicon_tokens);
  // Successor symbol of every occurrence of the context; the last token of
  // the text has none.
  auto successors = std::make_shared<std::vector<Symbol>>();
  for (std::size_t p = 0; p < tokens.size(); ++p) {
    if (tokens[p] != context) continue;
    successors->push_back(p + 1 < tokens.size() ? index[p + 1] : lexicon_tokens.size());
  }
  const std::size_t d = lexicon_tokens.size();
  return [successors, d, context](std::uint64_t n, Rng& rng, std::vector<std::uint64_t>& counts) {
    if (successors->size() < n) {
      fail(ErrorCode::kInput, "context '" + context + "' occurs " + std::to_string(successors->size()) +
                                  " times, fewer than " + std::to_string(n));
    }
    const std::size_t first = rng.below(successors->size() - n + 1);
    for (std::size_t k = first; k < first + n; ++k) {
      const Symbol s = (*successors)[k];
      if (s < d) ++counts[s];
    }
  };
}

sim::Sampler token_window_sampler(std::vector<std::string> tokens, std::vector<std::string> lexicon_tokens) {
  auto index = std::make_shared<std::vector<Symbol>>(lexicon_indices(tokens, lexicon_tokens));
  const std::size_t d = lexicon_tokens.size();
  return [index, d](std::uint64_t n, Rng& rng, std::vector<std::uint64_t>& counts) {
    if (index->size() < n) {
      fail(ErrorCode::kInput, "corpus has " + std::to_string(index->size()) + " tokens, fewer than " + std::to_string(n));
    }
    const std::size_t first = rng.below(index->size() - n + 1);
    for (std::size_t k = first; k < first + n; ++k) {
      const Symbol s = (*index)[k];
      if (s < d) ++counts[s];
    }
  };
}

BoundsRow bounds_row(std::uint64_t n, std::uint64_t d, double delta, double center_norm, bool uniform_center) {
  BoundsRow row{n, d, delta, center_norm, {}, {}, {}, {}, {}};
  std::vector<std::string> notes;
  auto attempt = [&](std::optional<double>& slot, const char* name, auto&& compute) {
    try {
      slot = compute();
    } catch (const Error& e) {
      notes.push_back(std::string(name) + ": " + e.what());
    }
  };
  attempt(row.ub_interp, "ub_interp", [&] { return bounds::ub_interpolation(n, d, center_norm, delta).value; });
  attempt(row.lb_lecam, "lb_lecam", [&] { return bounds::lb_lecam(n, delta).value; });
  if (uniform_center) {
    attempt(row.lb_uniform, "lb_uniform", [&] { return bounds::lb_uniform(n, d, delta).value; });
  } else {
    notes.emplace_back("lb_uniform: center is not uniform");
  }
  attempt(row.lb_general, "lb_general", [&] { return bounds::lb_general(n, d, center_norm, delta).value; });
  for (std::size_t k = 0; k < notes.size(); ++k) row.notes += (k ? "; " : "") + notes[k];
  return row;
}

std::string format_bounds(const std::vector<BoundsRow>& rows) {
  auto cell = [](const std::optional<double>& v) { return v ? io::format_double(*v) : std::string(); };
  auto quote = [](const std::string& s) {
    if (s.find_first_of(",\"") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
  };
  std::ostringstream out;
  out << "# schema: sideinfo-bounds/1\n";
  out << "n,d,delta,norm_pi0,ub_interp,lb_lecam,lb_uniform,lb_general,notes\n";
  for (const auto& r : rows) {
    out << r.n << ',' << r.d << ',' << io::format_double(r.delta) << ',' << io::format_double(r.center_norm) << ','
        << cell(r.ub_interp) << ',' << cell(r.lb_lecam) << ',' << cell(r.lb_uniform) << ',' << cell(r.lb_general)
        << ',' << quote(r.notes) << '\n';
  }
  return out.str();
}

}  // namespace sideinfo::experiments
