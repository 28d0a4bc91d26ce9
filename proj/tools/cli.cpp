#include "sideinfo/cli.hpp"

#include <openssl/evp.h>

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <iomanip>
#include <json.hpp>
#include <optional>
#include <ostream>
#include <sstream>

#include "sideinfo/bounds.hpp"
#include "sideinfo/corpus.hpp"
#include "sideinfo/error.hpp"
#include "sideinfo/experiments.hpp"
#include "sideinfo/io.hpp"
#include "sideinfo/sim.hpp"
#include "sideinfo/verify.hpp"

#ifndef SIDEINFO_VERSION
#define SIDEINFO_VERSION "unknown"
#endif

namespace sideinfo::cli {
namespace {

using json = nlohmann::ordered_json;

struct OutputFile {
  std::string role;
  std::string path;
  std::string content;
};

// State of one invocation: inputs read, outputs produced.
struct Run {
  std::vector<std::pair<std::string, std::string>> inputs;  // path, sha256
  std::vector<OutputFile> outputs;

  std::string load(const std::string& path) {
    std::string bytes = io::read_file(path);
    const std::string digest = sha256_hex(bytes);
    if (std::none_of(inputs.begin(), inputs.end(), [&](const auto& in) { return in.first == path; })) {
      inputs.emplace_back(path, digest);
    }
    return bytes;
  }

  Distribution distribution(const std::string& path) {
    std::istringstream in(load(path));
    return io::parse_distribution(in, path);
  }

  std::vector<std::string> tokens(const std::string& path, bool case_fold) {
    corpus::TokenizerConfig config;
    config.case_fold = case_fold;
    try {
      return corpus::tokenize(load(path), config);
    } catch (const Error& e) {
      fail(e.code(), path + ": " + e.what());
    }
  }
};

struct Common {
  std::uint64_t seed = 1;
  std::string out = "-";
  std::string manifest;
  unsigned threads = 1;
};

void add_common(CLI::App* app, Common& c, bool threads) {
  app->add_option("--seed", c.seed, "Master seed");
  app->add_option("--out", c.out, "Output file, '-' for standard output");
  app->add_option("--manifest", c.manifest, "Manifest path (default: OUT.manifest.json, or standard error)");
  if (threads) app->add_option("--threads", c.threads, "Worker threads, 0 = all cores");
}

std::pair<std::string, std::string> split_pair(const std::vector<std::string>& words, const char* what) {
  if (words.size() != 2) fail(ErrorCode::kInput, std::string(what) + " needs exactly two words");
  return {words[0], words[1]};
}

std::vector<std::string> lower_all(std::vector<std::string> words, bool case_fold) {
  if (!case_fold) return words;
  for (auto& w : words) {
    for (char& c : w) {
      if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    }
  }
  return words;
}

// ---- simulate model1 ---------------------------------------------------------

struct Model1Args {
  Common common;
  std::vector<std::uint64_t> n_grid;
  std::uint64_t trials = 1000;
  std::string pi0_file;
  std::string pi0_kind;
  std::uint64_t d = 0;
  std::optional<double> delta;
  std::string embeddings;
  std::vector<std::string> words;
  std::string pi_file;
  std::uint64_t ball_draws = 20;
  std::string corpus_file;
  std::string context;
  std::vector<std::string> guess;
  bool no_case_fold = false;
  std::optional<double> alpha;
};

std::string cmd_model1(const Model1Args& a, Run& run) {
  const bool case_fold = !a.no_case_fold;
  std::optional<Distribution> center;
  std::optional<Distribution> truth;
  std::optional<sim::Sampler> sampler;
  std::vector<std::string> default_words;

  if (!a.corpus_file.empty()) {
    if (a.context.empty() || a.guess.empty()) fail(ErrorCode::kInput, "--corpus needs --context and --guess");
    if (!a.pi0_file.empty() || !a.pi0_kind.empty() || !a.pi_file.empty()) {
      fail(ErrorCode::kInput, "--corpus cannot be combined with --pi0, --pi0-kind or --pi");
    }
    const auto tokens = run.tokens(a.corpus_file, case_fold);
    const std::string context = lower_all({a.context}, case_fold)[0];
    const auto guess = lower_all(a.guess, case_fold);
    const std::vector<corpus::BigramTable> tables{corpus::bigram_table(tokens, context),
                                                  corpus::pooled_bigram_table(tokens, guess)};
    const corpus::Lexicon lexicon = corpus::union_lexicon(tables);
    truth = corpus::table_distribution(tables[0], lexicon);
    center = corpus::table_distribution(tables[1], lexicon);
    sampler = experiments::bigram_window_sampler(tokens, context, lexicon.tokens());
    default_words = {context, guess[0]};
  } else if (!a.pi0_file.empty()) {
    if (!a.pi0_kind.empty()) fail(ErrorCode::kInput, "--pi0 and --pi0-kind are exclusive");
    center = run.distribution(a.pi0_file);
  } else if (!a.pi0_kind.empty()) {
    if (a.d == 0) fail(ErrorCode::kInput, "--pi0-kind needs --d");
    center = a.pi0_kind == "uniform" ? Distribution::uniform(a.d) : Distribution::point_mass(a.d, 0);
  } else {
    fail(ErrorCode::kInput, "need a guess: --pi0 FILE, --pi0-kind KIND with --d, or --corpus");
  }

  double delta = 0.0;
  if (a.delta) {
    if (!a.embeddings.empty()) fail(ErrorCode::kInput, "--delta and --embeddings are exclusive");
    delta = *a.delta;
  } else if (!a.embeddings.empty()) {
    std::istringstream in(run.load(a.embeddings));
    const auto emb = corpus::parse_embeddings(in, a.embeddings);
    const auto words = a.words.empty() ? default_words : lower_all(a.words, case_fold);
    const auto [w1, w2] = split_pair(words, "--words");
    delta = corpus::delta_from_embeddings(emb, w1, w2);
  } else {
    fail(ErrorCode::kInput, "need a radius: --delta or --embeddings");
  }

  const BallSideInfo info(*center, delta);
  experiments::Model1Setup setup{info, {}, sampler, a.alpha, {}};
  setup.config.master_seed = a.common.seed;
  setup.config.trials = a.trials;
  setup.config.n_grid = a.n_grid;
  setup.config.threads = a.common.threads;
  if (truth) {
    setup.truths.push_back(*truth);
  } else if (!a.pi_file.empty()) {
    setup.truths.push_back(run.distribution(a.pi_file));
  } else {
    setup.truths = experiments::ball_truths(info, a.ball_draws, a.common.seed);
  }
  return io::format_risk_reports(experiments::run_model1(setup));
}

// ---- simulate model2 ---------------------------------------------------------

struct Model2Args {
  Common common;
  std::vector<std::uint64_t> n_grid;
  std::uint64_t trials = 1000;
  std::vector<std::uint64_t> levels{0, 1};
  std::string dist_file;
  std::uint64_t two_level_d = 0;
  std::uint64_t zipf_d = 0;
  double zipf_exponent = 1.0;
  std::string corpus_file;
  bool no_case_fold = false;
  std::string partition_file;
  std::optional<double> threshold;
  bool lower_half = false;
  bool random_half = false;
  std::string scale = "both";
};

std::string cmd_model2(const Model2Args& a, Run& run) {
  const int sources = !a.dist_file.empty() + (a.two_level_d > 0) + (a.zipf_d > 0) + !a.corpus_file.empty();
  if (sources != 1) fail(ErrorCode::kInput, "give exactly one of --dist, --two-level-d, --zipf-d, --corpus");
  std::optional<Distribution> truth;
  std::optional<sim::Sampler> sampler;
  if (!a.dist_file.empty()) {
    truth = run.distribution(a.dist_file);
  } else if (a.two_level_d > 0) {
    truth = sim::two_level_synthetic(a.two_level_d);
  } else if (a.zipf_d > 0) {
    truth = sim::zipf(a.zipf_d, a.zipf_exponent);
  } else {
    const auto tokens = run.tokens(a.corpus_file, !a.no_case_fold);
    auto uni = corpus::unigram_distribution(tokens);
    truth = uni.dist;
    sampler = experiments::token_window_sampler(tokens, uni.lexicon.tokens());
  }

  const int partitions = !a.partition_file.empty() + a.threshold.has_value() + a.lower_half + a.random_half;
  if (partitions != 1) {
    fail(ErrorCode::kInput, "give exactly one of --partition, --threshold, --lower-half, --random-half");
  }
  std::optional<PartitionSideInfo> part;
  if (!a.partition_file.empty()) {
    std::istringstream in(run.load(a.partition_file));
    const auto low = io::parse_symbol_list(in, a.partition_file);
    part.emplace(truth->size(), low);
  } else if (a.threshold) {
    part = corpus::threshold_partition(*truth, *a.threshold);
  } else if (a.lower_half) {
    part = sim::lower_half_partition(truth->size());
  } else {
    part = sim::random_half_partition(truth->size(), trial_seed(a.common.seed, 0, 0x9A27));
  }

  experiments::Model2Setup setup{*truth, *part, sampler, {}};
  setup.config.master_seed = a.common.seed;
  setup.config.trials = a.trials;
  setup.config.n_grid = a.n_grid;
  setup.config.threads = a.common.threads;
  setup.config.levels = a.levels;
  setup.config.loss = sim::LossKind::kPerLevel;
  if (a.scale == "within") setup.scales = {TwoLevelScale::kWithinSide};
  if (a.scale == "share") setup.scales = {TwoLevelScale::kSideShare};
  return io::format_risk_reports(experiments::run_model2(setup));
}

// ---- bounds ------------------------------------------------------------------

struct BoundsArgs {
  Common common;
  std::vector<std::uint64_t> n_grid;
  std::vector<std::uint64_t> d_grid;
  std::vector<double> delta_grid;
  std::vector<std::string> norm_grid{"uniform"};
  std::string pi0_file;
};

std::string cmd_bounds(const BoundsArgs& a, Run& run) {
  if (a.n_grid.empty() || a.delta_grid.empty()) fail(ErrorCode::kInput, "--n-grid and --delta-grid are required");
  for (double delta : a.delta_grid) {
    if (!(delta > 0.0 && delta <= 1.0)) {
      fail(ErrorCode::kRange, "radius " + io::format_double(delta) + " outside (0, 1]");
    }
  }
  struct Center {
    std::uint64_t d;
    double norm;
    bool uniform;
  };
  std::vector<Center> centers;
  if (!a.pi0_file.empty()) {
    const Distribution pi0 = run.distribution(a.pi0_file);
    const double u = 1.0 / static_cast<double>(pi0.size());
    const bool uniform =
        std::all_of(pi0.probs().begin(), pi0.probs().end(), [&](double p) { return std::abs(p - u) <= kSimplexTolerance; });
    centers.push_back({pi0.size(), pi0.norm(), uniform});
  } else {
    if (a.d_grid.empty()) fail(ErrorCode::kInput, "--d-grid is required without --pi0");
    for (std::uint64_t d : a.d_grid) {
      if (d == 0) fail(ErrorCode::kRange, "alphabet size must be positive");
      const double uniform_norm = 1.0 / std::sqrt(static_cast<double>(d));
      for (const std::string& entry : a.norm_grid) {
        if (entry == "uniform") {
          centers.push_back({d, uniform_norm, true});
        } else if (entry == "deterministic") {
          centers.push_back({d, 1.0, d == 1});
        } else {
          double v = 0.0;
          try {
            std::size_t used = 0;
            v = std::stod(entry, &used);
            if (used != entry.size()) throw std::invalid_argument(entry);
          } catch (const std::logic_error&) {
            fail(ErrorCode::kInput, "--norm-grid entry '" + entry + "' is not a number, 'uniform' or 'deterministic'");
          }
          centers.push_back({d, v, std::abs(v - uniform_norm) <= kSimplexTolerance});
        }
      }
    }
  }
  std::vector<experiments::BoundsRow> rows;
  for (const Center& c : centers) {
    for (double delta : a.delta_grid) {
      for (std::uint64_t n : a.n_grid) rows.push_back(experiments::bounds_row(n, c.d, delta, c.norm, c.uniform));
    }
  }
  return experiments::format_bounds(rows);
}

// ---- corpus ------------------------------------------------------------------

struct CorpusArgs {
  Common common;
  std::string corpus_file;
  std::vector<std::string> context;
  std::vector<std::string> align;
  std::string lexicon_out;
  bool no_case_fold = false;
  std::string embeddings;
  std::vector<std::string> words;
  std::uint64_t occurrences = 0;
  std::string tokens_out;
};

void add_lexicon_output(Run& run, const std::string& path, const corpus::Lexicon& lexicon) {
  if (path.empty()) return;
  std::ostringstream lex;
  io::write_lexicon(lex, lexicon.tokens());
  run.outputs.push_back({"lexicon", path, lex.str()});
}

std::string cmd_corpus_bigram(const CorpusArgs& a, Run& run) {
  if (a.corpus_file.empty() || a.context.empty()) fail(ErrorCode::kInput, "bigram needs --corpus and --context");
  const bool case_fold = !a.no_case_fold;
  const auto tokens = run.tokens(a.corpus_file, case_fold);
  const auto contexts = lower_all(a.context, case_fold);
  std::vector<corpus::BigramTable> tables{corpus::pooled_bigram_table(tokens, contexts)};
  for (const auto& other : lower_all(a.align, case_fold)) tables.push_back(corpus::bigram_table(tokens, other));
  const corpus::Lexicon lexicon = corpus::union_lexicon(tables);
  std::ostringstream out;
  io::write_distribution(out, corpus::table_distribution(tables[0], lexicon));
  add_lexicon_output(run, a.lexicon_out, lexicon);
  return out.str();
}

std::string cmd_corpus_unigram(const CorpusArgs& a, Run& run) {
  if (a.corpus_file.empty()) fail(ErrorCode::kInput, "unigram needs --corpus");
  const auto uni = corpus::unigram_distribution(run.tokens(a.corpus_file, !a.no_case_fold));
  std::ostringstream out;
  io::write_distribution(out, uni.dist);
  add_lexicon_output(run, a.lexicon_out, uni.lexicon);
  return out.str();
}

std::string cmd_corpus_delta(const CorpusArgs& a, Run& run) {
  if (a.embeddings.empty()) fail(ErrorCode::kInput, "delta needs --embeddings");
  const auto [w1, w2] = split_pair(a.words, "--words");
  std::istringstream in(run.load(a.embeddings));
  const auto emb = corpus::parse_embeddings(in, a.embeddings);
  const double delta = corpus::delta_from_embeddings(emb, w1, w2);
  const double cos = corpus::cosine_similarity(emb.vectors.at(w1), emb.vectors.at(w2));
  std::ostringstream out;
  out << "# schema: sideinfo-delta/1\nword1,word2,cosine,delta\n"
      << w1 << ',' << w2 << ',' << io::format_double(cos) << ',' << io::format_double(delta) << '\n';
  return out.str();
}

std::string cmd_corpus_window(const CorpusArgs& a, Run& run) {
  if (a.corpus_file.empty() || a.context.size() != 1 || a.occurrences == 0) {
    fail(ErrorCode::kInput, "window needs --corpus, a single --context and --occurrences");
  }
  const bool case_fold = !a.no_case_fold;
  const auto tokens = run.tokens(a.corpus_file, case_fold);
  const std::string context = lower_all(a.context, case_fold)[0];
  const corpus::Window w = corpus::contiguous_window(tokens, context, a.occurrences, a.common.seed);
  if (!a.tokens_out.empty()) {
    std::string text;
    for (std::size_t p = w.begin; p < w.end; ++p) text += (p > w.begin ? " " : "") + tokens[p];
    run.outputs.push_back({"tokens", a.tokens_out, text + "\n"});
  }
  std::ostringstream out;
  out << "# schema: sideinfo-window/1\ncontext,begin,end,occurrences\n"
      << context << ',' << w.begin << ',' << w.end << ',' << a.occurrences << '\n';
  return out.str();
}

// ---- manifest ----------------------------------------------------------------

json parameters_of(const CLI::App* leaf) {
  json params = json::object();
  for (const CLI::Option* opt : leaf->get_options()) {
    const std::string name = opt->get_single_name();
    if (name == "help" || name.empty()) continue;
    if (opt->count() > 0) {
      std::string joined;
      for (const auto& r : opt->results()) joined += (joined.empty() ? "" : ",") + r;
      params[name] = opt->get_expected_max() == 0 ? "true" : joined;
    } else if (opt->get_expected_max() == 0) {
      params[name] = "false";
    } else {
      const std::string def = opt->get_default_str();
      params[name] = def == "{}" ? "" : def;
    }
  }
  return params;
}

json make_manifest(const std::vector<std::string>& args, const std::string& command, const json& params,
                   std::uint64_t seed, const Run& run) {
  json m;
  m["schema"] = "sideinfo-manifest/1";
  m["version"] = SIDEINFO_VERSION;
  m["command"] = command;
  m["argv"] = args;
  m["seed"] = seed;
  m["parameters"] = params;
  m["inputs"] = json::array();
  for (const auto& [path, digest] : run.inputs) m["inputs"].push_back({{"path", path}, {"sha256", digest}});
  m["outputs"] = json::array();
  for (const auto& o : run.outputs) {
    m["outputs"].push_back({{"role", o.role}, {"path", o.path}, {"sha256", sha256_hex(o.content)}});
  }
  return m;
}

struct Invocation {
  int status = 0;
  Run run;
};

Invocation invoke(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, bool emit);

int cmd_replay(const std::string& manifest_path, std::optional<unsigned> threads, std::ostream& out,
               std::ostream& err) {
  json m;
  try {
    m = json::parse(io::read_file(manifest_path));
  } catch (const json::exception& e) {
    fail(ErrorCode::kParse, manifest_path + ": " + e.what());
  }
  if (!m.contains("argv") || !m.contains("outputs") || !m["argv"].is_array()) {
    fail(ErrorCode::kParse, manifest_path + ": not a sideinfo manifest");
  }
  auto args = m["argv"].get<std::vector<std::string>>();
  if (threads) {
    if (args.empty() || args[0] != "simulate") fail(ErrorCode::kInput, "--threads applies only to simulate runs");
    auto it = std::find(args.begin(), args.end(), "--threads");
    if (it != args.end() && it + 1 != args.end()) {
      *(it + 1) = std::to_string(*threads);
    } else {
      args.erase(std::remove_if(args.begin(), args.end(), [](const std::string& s) { return s.rfind("--threads=", 0) == 0; }),
                 args.end());
      args.push_back("--threads");
      args.push_back(std::to_string(*threads));
    }
  }
  for (const auto& input : m.value("inputs", json::array())) {
    const std::string path = input.at("path").get<std::string>();
    if (sha256_hex(io::read_file(path)) != input.at("sha256").get<std::string>()) {
      fail(ErrorCode::kInput, "input '" + path + "' changed since the manifest was written");
    }
  }
  Invocation again = invoke(args, out, err, false);
  if (again.status != 0) return again.status;
  const auto& recorded = m["outputs"];
  if (recorded.size() != again.run.outputs.size()) {
    err << "mismatch: replay produced " << again.run.outputs.size() << " outputs, manifest lists " << recorded.size()
        << '\n';
    return 1;
  }
  for (std::size_t k = 0; k < recorded.size(); ++k) {
    const auto& o = again.run.outputs[k];
    if (sha256_hex(o.content) != recorded[k].at("sha256").get<std::string>()) {
      err << "mismatch: output '" << o.path << "' differs from the manifest\n";
      return 1;
    }
  }
  return 0;
}

Invocation invoke(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, bool emit) {
  Invocation result;
  Run& run = result.run;
  CLI::App app{"Distribution estimation with side information", "sideinfo"};
  app.option_defaults()->always_capture_default();
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(SIDEINFO_VERSION));

  // simulate
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo risk curves");
  simulate->require_subcommand(1);
  Model1Args m1;
  auto* model1 = simulate->add_subcommand("model1", "Ball side information: empirical, add-constant, interpolation");
  add_common(model1, m1.common, true);
  model1->add_option("--n-grid", m1.n_grid, "Sample sizes, ascending")->delimiter(',')->required();
  model1->add_option("--trials", m1.trials, "Trials per sample size");
  model1->add_option("--pi0", m1.pi0_file, "Guess distribution file");
  model1->add_option("--pi0-kind", m1.pi0_kind, "Synthetic guess")->check(CLI::IsMember({"uniform", "deterministic"}));
  model1->add_option("--d", m1.d, "Alphabet size for --pi0-kind");
  model1->add_option("--delta", m1.delta, "Ball radius");
  model1->add_option("--embeddings", m1.embeddings, "Embedding file; radius from cosine similarity of --words");
  model1->add_option("--words", m1.words, "Two words for the embedding radius")->delimiter(',');
  model1->add_option("--pi", m1.pi_file, "True distribution file");
  model1->add_option("--ball-draws", m1.ball_draws, "Distributions sampled from the ball when no truth is given");
  model1->add_option("--corpus", m1.corpus_file, "Text corpus");
  model1->add_option("--context", m1.context, "Context word whose successors are estimated");
  model1->add_option("--guess", m1.guess, "Context word(s) pooled into the guess")->delimiter(',');
  model1->add_flag("--no-case-fold", m1.no_case_fold, "Keep token case");
  model1->add_option("--alpha", m1.alpha, "Fixed interpolation weight");

  Model2Args m2;
  auto* model2 = simulate->add_subcommand("model2", "Partition side information: one-level vs two-level");
  add_common(model2, m2.common, true);
  model2->add_option("--n-grid", m2.n_grid, "Sample sizes, ascending")->delimiter(',')->required();
  model2->add_option("--trials", m2.trials, "Trials per sample size");
  model2->add_option("--levels", m2.levels, "Levels l")->delimiter(',');
  model2->add_option("--dist", m2.dist_file, "True distribution file");
  model2->add_option("--two-level-d", m2.two_level_d, "Two-level synthetic distribution of this size");
  model2->add_option("--zipf-d", m2.zipf_d, "Zipf distribution of this size");
  model2->add_option("--zipf-exponent", m2.zipf_exponent, "Zipf exponent");
  model2->add_option("--corpus", m2.corpus_file, "Text corpus (unigram truth, contiguous token windows)");
  model2->add_flag("--no-case-fold", m2.no_case_fold, "Keep token case");
  model2->add_option("--partition", m2.partition_file, "Low set A, one index per line");
  model2->add_option("--threshold", m2.threshold, "A = {i : pi_i <= X}");
  model2->add_flag("--lower-half", m2.lower_half, "A = first half of the alphabet");
  model2->add_flag("--random-half", m2.random_half, "A = a seeded random half");
  model2->add_option("--two-level-scale", m2.scale, "Two-level variants: within-side, side-share, or both")
      ->check(CLI::IsMember({"within", "share", "both"}));

  BoundsArgs ba;
  auto* bounds_cmd = app.add_subcommand("bounds", "Upper and lower risk bounds over a grid");
  add_common(bounds_cmd, ba.common, false);
  bounds_cmd->add_option("--n-grid", ba.n_grid, "Sample sizes")->delimiter(',');
  bounds_cmd->add_option("--d-grid", ba.d_grid, "Alphabet sizes")->delimiter(',');
  bounds_cmd->add_option("--delta-grid", ba.delta_grid, "Radii")->delimiter(',');
  bounds_cmd->add_option("--norm-grid", ba.norm_grid, "Guess norms, or uniform / deterministic")->delimiter(',');
  bounds_cmd->add_option("--pi0", ba.pi0_file, "Guess distribution file (fixes d and the norm)");

  Common vc;
  double alpha_fault = 1.0;
  auto* verify_cmd = app.add_subcommand("verify", "Numerical identity and construction checks");
  add_common(verify_cmd, vc, false);
  verify_cmd->add_option("--alpha-fault", alpha_fault, "Scale the interpolation weight (fault injection)");

  CorpusArgs ca;
  auto* corpus_cmd = app.add_subcommand("corpus", "Corpus preparation");
  corpus_cmd->require_subcommand(1);
  auto* bigram = corpus_cmd->add_subcommand("bigram", "Successor distribution of a context");
  auto* unigram = corpus_cmd->add_subcommand("unigram", "Unigram distribution");
  auto* delta_cmd = corpus_cmd->add_subcommand("delta", "Radius from embedding cosine similarity");
  auto* window = corpus_cmd->add_subcommand("window", "Contiguous window with k occurrences of a context");
  for (auto* sub : {bigram, unigram, delta_cmd, window}) add_common(sub, ca.common, false);
  for (auto* sub : {bigram, unigram, window}) {
    sub->add_option("--corpus", ca.corpus_file, "Text corpus")->required();
    sub->add_flag("--no-case-fold", ca.no_case_fold, "Keep token case");
  }
  bigram->add_option("--context", ca.context, "Context word(s), pooled")->delimiter(',')->required();
  bigram->add_option("--align", ca.align, "Extra contexts whose successors join the lexicon")->delimiter(',');
  window->add_option("--context", ca.context, "Context word")->required();
  for (auto* sub : {bigram, unigram}) sub->add_option("--lexicon-out", ca.lexicon_out, "Lexicon CSV file");
  delta_cmd->add_option("--embeddings", ca.embeddings, "Embedding file")->required();
  delta_cmd->add_option("--words", ca.words, "Two words")->delimiter(',')->required();
  window->add_option("--occurrences", ca.occurrences, "Occurrences of the context")->required();
  window->add_option("--tokens-out", ca.tokens_out, "Write the window's tokens to this file");

  std::string replay_manifest;
  std::optional<unsigned> replay_threads;
  auto* replay = app.add_subcommand("replay", "Re-run a manifest and compare outputs");
  replay->add_option("manifest", replay_manifest, "Manifest file")->required();
  replay->add_option("--threads", replay_threads, "Override worker threads of a simulate run");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return result;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return result;
  } catch (const CLI::CallForVersion&) {
    out << SIDEINFO_VERSION << '\n';
    return result;
  } catch (const CLI::ParseError& e) {
    std::string what = e.what();
    std::replace(what.begin(), what.end(), '\n', ' ');
    err << "usage: " << what << '\n';
    result.status = 2;
    return result;
  }

  try {
    if (replay->parsed()) {
      result.status = cmd_replay(replay_manifest, replay_threads, out, err);
      return result;
    }
    const CLI::App* leaf = nullptr;
    std::string command;
    Common* common = nullptr;
    std::string content;
    bool checks_failed = false;
    if (model1->parsed()) {
      leaf = model1, command = "simulate model1", common = &m1.common;
      content = cmd_model1(m1, run);
    } else if (model2->parsed()) {
      leaf = model2, command = "simulate model2", common = &m2.common;
      content = cmd_model2(m2, run);
    } else if (bounds_cmd->parsed()) {
      leaf = bounds_cmd, command = "bounds", common = &ba.common;
      content = cmd_bounds(ba, run);
    } else if (verify_cmd->parsed()) {
      leaf = verify_cmd, command = "verify", common = &vc;
      verify::VerifyOptions options;
      options.seed = vc.seed;
      options.alpha_fault_factor = alpha_fault;
      const auto results = verify::run_all(options);
      content = verify::to_csv(results);
      const auto failed = std::count_if(results.begin(), results.end(), [](const auto& r) { return !r.passed; });
      if (failed > 0) {
        err << "check-failed: " << failed << " of " << results.size() << " checks failed\n";
        checks_failed = true;
      }
    } else {
      common = &ca.common;
      if (bigram->parsed()) leaf = bigram, command = "corpus bigram", content = cmd_corpus_bigram(ca, run);
      if (unigram->parsed()) leaf = unigram, command = "corpus unigram", content = cmd_corpus_unigram(ca, run);
      if (delta_cmd->parsed()) leaf = delta_cmd, command = "corpus delta", content = cmd_corpus_delta(ca, run);
      if (window->parsed()) leaf = window, command = "corpus window", content = cmd_corpus_window(ca, run);
    }

    run.outputs.insert(run.outputs.begin(), OutputFile{"data", common->out, std::move(content)});
    for (const auto& o : run.outputs) {
      if (o.path.empty() || o.path == "-") {
        out << o.content;
      } else {
        io::write_output(o.path, o.content);
      }
    }
    if (emit) {
      const json manifest = make_manifest(args, command, parameters_of(leaf), common->seed, run);
      std::string manifest_path = common->manifest;
      if (manifest_path.empty() && common->out != "-" && !common->out.empty()) {
        manifest_path = common->out + ".manifest.json";
      }
      if (manifest_path.empty()) {
        err << "manifest: " << manifest.dump() << '\n';
      } else {
        io::write_output(manifest_path, manifest.dump(2) + "\n");
      }
    }
    result.status = checks_failed ? 1 : 0;
  } catch (const Error& e) {
    err << code_name(e.code()) << ": " << e.what() << '\n';
    result.status = 1;
  }
  return result;
}

}  // namespace

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &length, EVP_sha256(), nullptr) != 1) {
    fail(ErrorCode::kIo, "SHA-256 computation failed");
  }
  std::ostringstream hex;
  for (unsigned int i = 0; i < length; ++i) hex << std::hex << std::setw(2) << std::setfill('0') << int{digest[i]};
  return hex.str();
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  try {
    return invoke(args, out, err, true).status;
  } catch (const Error& e) {
    err << code_name(e.code()) << ": " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "internal: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace sideinfo::cli
