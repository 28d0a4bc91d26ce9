#pragma once

// Text ingestion: tokenisation, lexicons, unigram and bigram statistics,
// contiguous windows, word-embedding files and the radius derived from them.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "sideinfo/core.hpp"

namespace sideinfo::corpus {

struct TokenizerConfig {
  bool case_fold = true;           // ASCII lowercasing
  bool strip_punctuation = true;   // strip leading/trailing ASCII punctuation
};

// Splits on ASCII whitespace. Throws Error(kInput) on invalid UTF-8. Tokens
// left empty by punctuation stripping are dropped.
std::vector<std::string> tokenize(std::string_view text, const TokenizerConfig& config = {});

bool is_valid_utf8(std::string_view text);

class Lexicon {
 public:
  Lexicon() = default;
  explicit Lexicon(std::vector<std::string> tokens);

  // Returns the index of `token`, adding it if new.
  Symbol add(const std::string& token);
  std::optional<Symbol> find(const std::string& token) const;
  const std::string& token(Symbol index) const { return tokens_.at(index); }
  const std::vector<std::string>& tokens() const noexcept { return tokens_; }
  std::size_t size() const noexcept { return tokens_.size(); }

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, Symbol> index_;
};

// Successor counts of one context token, in first-seen order of successors.
struct BigramTable {
  std::string context;
  std::vector<std::pair<std::string, std::uint64_t>> counts;
  std::uint64_t total = 0;
};

BigramTable bigram_table(std::span<const std::string> tokens, const std::string& context);
// Pools several contexts (e.g. "large" and "huge") into one table.
BigramTable pooled_bigram_table(std::span<const std::string> tokens,
                                std::span<const std::string> contexts);

struct LexiconDistribution {
  Distribution dist;
  Lexicon lexicon;
};

// Empirical next-token distribution after `context` over its observed
// successors. Throws when the context never has a successor.
LexiconDistribution conditional_distribution(std::span<const std::string> tokens,
                                             const std::string& context);

// Empirical distribution of a bigram table over `lexicon` (which must
// contain every successor). Unlisted lexicon entries get zero mass.
Distribution table_distribution(const BigramTable& table, const Lexicon& lexicon);

// Union lexicon of several tables in first-seen order.
Lexicon union_lexicon(std::span<const BigramTable> tables);

// Unigram distribution of all tokens, lexicon in first-seen order.
LexiconDistribution unigram_distribution(std::span<const std::string> tokens);

// Half-open token range [begin, end).
struct Window {
  std::size_t begin = 0;
  std::size_t end = 0;
};

// Positions at which `context` occurs.
std::vector<std::size_t> occurrences(std::span<const std::string> tokens, const std::string& context);

// A contiguous range containing exactly `count` occurrences of `context`:
// it starts at occurrence j (j uniform over valid choices, seeded) and ends
// right after occurrence j + count - 1.
Window contiguous_window(std::span<const std::string> tokens, const std::string& context,
                         std::uint64_t count, std::uint64_t seed);

// Tokens following each occurrence of `context` inside `window`. The
// successor of the last occurrence may lie just past the window end.
std::vector<std::string> window_successors(std::span<const std::string> tokens, Window window,
                                           const std::string& context);

struct EmbeddingSet {
  std::size_t dim = 0;
  std::unordered_map<std::string, std::vector<double>> vectors;
};

// Text format: first line `vocabSize dim`, then `token v1 ... vdim`.
EmbeddingSet parse_embeddings(std::istream& in, const std::string& source = "<stream>");
EmbeddingSet read_embeddings(const std::string& path);

double cosine_similarity(std::span<const double> a, std::span<const double> b);

// 1 - max(0, cos(v1, v2)), clamped below at 1e-6.
double delta_from_embeddings(const EmbeddingSet& embeddings, const std::string& first,
                             const std::string& second);

inline constexpr double kMinimumRadius = 1e-6;

// A = {i : pi_i <= threshold}. Throws when either side would be empty.
PartitionSideInfo threshold_partition(const Distribution& dist, double threshold);

}  // namespace sideinfo::corpus
