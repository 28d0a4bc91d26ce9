#include "sideinfo/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "sideinfo/error.hpp"
#include "sideinfo/rng.hpp"

namespace sideinfo::corpus {
namespace {

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

bool is_ascii_punct(char c) {
  const auto u = static_cast<unsigned char>(c);
  return (u >= 33 && u <= 47) || (u >= 58 && u <= 64) || (u >= 91 && u <= 96) || (u >= 123 && u <= 126);
}

}  // namespace

bool is_valid_utf8(std::string_view text) {
  std::size_t i = 0;
  while (i < text.size()) {
    const auto c = static_cast<unsigned char>(text[i]);
    std::size_t extra = 0;
    std::uint32_t code = 0;
    if (c < 0x80) {
      ++i;
      continue;
    } else if ((c & 0xE0) == 0xC0) {
      extra = 1;
      code = c & 0x1F;
    } else if ((c & 0xF0) == 0xE0) {
      extra = 2;
      code = c & 0x0F;
    } else if ((c & 0xF8) == 0xF0) {
      extra = 3;
      code = c & 0x07;
    } else {
      return false;
    }
    if (i + extra >= text.size()) return false;
    for (std::size_t k = 1; k <= extra; ++k) {
      const auto cc = static_cast<unsigned char>(text[i + k]);
      if ((cc & 0xC0) != 0x80) return false;
      code = (code << 6) | (cc & 0x3F);
    }
    // Overlong encodings, surrogates and out-of-range code points.
    if ((extra == 1 && code < 0x80) || (extra == 2 && code < 0x800) || (extra == 3 && code < 0x10000)) return false;
    if (code > 0x10FFFF || (code >= 0xD800 && code <= 0xDFFF)) return false;
    i += extra + 1;
  }
  return true;
}

std::vector<std::string> tokenize(std::string_view text, const TokenizerConfig& config) {
  if (!is_valid_utf8(text)) fail(ErrorCode::kInput, "text is not valid UTF-8");
  std::vector<std::string> tokens;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && is_space(text[i])) ++i;
    std::size_t j = i;
    while (j < text.size() && !is_space(text[j])) ++j;
    std::string_view word = text.substr(i, j - i);
    i = j;
    if (config.strip_punctuation) {
      while (!word.empty() && is_ascii_punct(word.front())) word.remove_prefix(1);
      while (!word.empty() && is_ascii_punct(word.back())) word.remove_suffix(1);
    }
    if (word.empty()) continue;
    std::string token(word);
    if (config.case_fold) {
      for (char& c : token) {
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
      }
    }
    tokens.push_back(std::move(token));
  }
  return tokens;
}

Lexicon::Lexicon(std::vector<std::string> tokens) {
  for (auto& t : tokens) {
    if (index_.count(t)) fail(ErrorCode::kInput, "lexicon token '" + t + "' repeated");
    add(t);
  }
}

Symbol Lexicon::add(const std::string& token) {
  auto [it, inserted] = index_.emplace(token, tokens_.size());
  if (inserted) tokens_.push_back(token);
  return it->second;
}

std::optional<Symbol> Lexicon::find(const std::string& token) const {
  auto it = index_.find(token);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

BigramTable pooled_bigram_table(std::span<const std::string> tokens,
                                std::span<const std::string> contexts) {
  BigramTable table;
  for (std::size_t c = 0; c < contexts.size(); ++c) table.context += (c ? "+" : "") + contexts[c];
  std::unordered_map<std::string, std::size_t> slot;
  for (std::size_t p = 0; p + 1 < tokens.size(); ++p) {
    bool match = false;
    for (const auto& ctx : contexts) match = match || tokens[p] == ctx;
    if (!match) continue;
    const std::string& next = tokens[p + 1];
    auto [it, inserted] = slot.emplace(next, table.counts.size());
    if (inserted) table.counts.emplace_back(next, 0);
    ++table.counts[it->second].second;
    ++table.total;
  }
  return table;
}

BigramTable bigram_table(std::span<const std::string> tokens, const std::string& context) {
  return pooled_bigram_table(tokens, std::span<const std::string>(&context, 1));
}

Distribution table_distribution(const BigramTable& table, const Lexicon& lexicon) {
  if (table.total == 0) fail(ErrorCode::kInput, "context '" + table.context + "' is never followed by a token");
  std::vector<double> probs(lexicon.size(), 0.0);
  for (const auto& [token, count] : table.counts) {
    auto index = lexicon.find(token);
    if (!index) fail(ErrorCode::kInput, "successor '" + token + "' missing from lexicon");
    probs[*index] = static_cast<double>(count);
  }
  return Distribution::normalized(std::move(probs));
}

Lexicon union_lexicon(std::span<const BigramTable> tables) {
  Lexicon lexicon;
  for (const auto& table : tables) {
    for (const auto& entry : table.counts) lexicon.add(entry.first);
  }
  return lexicon;
}

LexiconDistribution conditional_distribution(std::span<const std::string> tokens,
                                             const std::string& context) {
  const BigramTable table = bigram_table(tokens, context);
  if (table.total == 0) fail(ErrorCode::kInput, "context '" + context + "' is never followed by a token");
  Lexicon lexicon = union_lexicon(std::span<const BigramTable>(&table, 1));
  Distribution dist = table_distribution(table, lexicon);
  return {std::move(dist), std::move(lexicon)};
}

LexiconDistribution unigram_distribution(std::span<const std::string> tokens) {
  if (tokens.empty()) fail(ErrorCode::kInput, "corpus has no tokens");
  Lexicon lexicon;
  std::vector<double> counts;
  for (const auto& t : tokens) {
    const Symbol s = lexicon.add(t);
    if (s == counts.size()) counts.push_back(0.0);
    counts[s] += 1.0;
  }
  return {Distribution::normalized(std::move(counts)), std::move(lexicon)};
}

std::vector<std::size_t> occurrences(std::span<const std::string> tokens, const std::string& context) {
  std::vector<std::size_t> out;
  for (std::size_t p = 0; p < tokens.size(); ++p) {
    if (tokens[p] == context) out.push_back(p);
  }
  return out;
}

Window contiguous_window(std::span<const std::string> tokens, const std::string& context,
                         std::uint64_t count, std::uint64_t seed) {
  if (count == 0) fail(ErrorCode::kInput, "window needs at least one occurrence");
  const auto positions = occurrences(tokens, context);
  if (positions.size() < count) {
    std::ostringstream msg;
    msg << "context '" << context << "' occurs " << positions.size() << " times, fewer than " << count;
    fail(ErrorCode::kInput, msg.str());
  }
  Rng rng(seed);
  const std::size_t first = rng.below(positions.size() - count + 1);
  return {positions[first], positions[first + count - 1] + 1};
}

std::vector<std::string> window_successors(std::span<const std::string> tokens, Window window,
                                           const std::string& context) {
  std::vector<std::string> out;
  for (std::size_t p = window.begin; p < window.end && p + 1 < tokens.size(); ++p) {
    if (tokens[p] == context) out.push_back(tokens[p + 1]);
  }
  return out;
}

EmbeddingSet parse_embeddings(std::istream& in, const std::string& source) {
  std::string line;
  std::size_t lineno = 0;
  auto bad = [&](const std::string& what) -> void {
    std::ostringstream msg;
    msg << source << ":" << lineno << ": " << what;
    fail(ErrorCode::kParse, msg.str());
  };
  if (!std::getline(in, line)) {
    fail(ErrorCode::kParse, source + ": empty embedding file");
  }
  ++lineno;
  std::size_t vocab = 0;
  EmbeddingSet set;
  {
    std::istringstream header(line);
    if (!(header >> vocab >> set.dim) || set.dim == 0) bad("expected header 'vocabSize dim'");
  }
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    std::istringstream row(line);
    std::string token;
    row >> token;
    std::vector<double> v;
    v.reserve(set.dim);
    std::string field;
    while (row >> field) {
      double x = 0.0;
      try {
        std::size_t used = 0;
        x = std::stod(field, &used);
        if (used != field.size()) bad("invalid number '" + field + "'");
      } catch (const std::logic_error&) {
        bad("invalid number '" + field + "'");
      }
      if (!std::isfinite(x)) bad("non-finite vector entry");
      v.push_back(x);
    }
    if (v.size() != set.dim) bad("expected " + std::to_string(set.dim) + " values for '" + token + "'");
    if (!set.vectors.emplace(token, std::move(v)).second) bad("token '" + token + "' repeated");
  }
  if (set.vectors.size() != vocab) {
    fail(ErrorCode::kParse, source + ": header announces " + std::to_string(vocab) + " vectors, found " +
                                std::to_string(set.vectors.size()));
  }
  return set;
}

EmbeddingSet read_embeddings(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::kIo, "cannot open '" + path + "'");
  return parse_embeddings(in, path);
}

double cosine_similarity(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) fail(ErrorCode::kDimension, "embedding vectors differ in dimension");
  double dot = 0.0;
  double na = 0.0;
  double nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) fail(ErrorCode::kInput, "cosine similarity of a zero vector");
  return std::clamp(dot / (std::sqrt(na) * std::sqrt(nb)), -1.0, 1.0);
}

double delta_from_embeddings(const EmbeddingSet& embeddings, const std::string& first,
                             const std::string& second) {
  auto lookup = [&](const std::string& token) -> const std::vector<double>& {
    auto it = embeddings.vectors.find(token);
    if (it == embeddings.vectors.end()) fail(ErrorCode::kInput, "no embedding for '" + token + "'");
    return it->second;
  };
  const double cos = cosine_similarity(lookup(first), lookup(second));
  return std::max(kMinimumRadius, 1.0 - std::max(0.0, cos));
}

PartitionSideInfo threshold_partition(const Distribution& dist, double threshold) {
  std::vector<bool> low(dist.size());
  std::size_t count = 0;
  for (std::size_t i = 0; i < dist.size(); ++i) {
    low[i] = dist[i] <= threshold;
    count += low[i] ? 1 : 0;
  }
  if (count == 0) fail(ErrorCode::kInput, "threshold is below every probability; low set A would be empty");
  if (count == dist.size()) fail(ErrorCode::kInput, "threshold is at or above every probability; high set B would be empty");
  return PartitionSideInfo::from_membership(std::move(low));
}

}  // namespace sideinfo::corpus
