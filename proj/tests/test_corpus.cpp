#include <doctest.h>

#include <map>
#include <set>
#include <random>
#include <sstream>

#include "sideinfo/corpus.hpp"
#include "support.hpp"

using namespace sideinfo;
using namespace sideinfo::corpus;
using testing::code_of;

namespace {

using Tokens = std::vector<std::string>;

// Successor counts of `context` by a plain scan.
std::map<std::string, int> recount(const Tokens& t, const std::string& context) {
  std::map<std::string, int> m;
  for (std::size_t p = 0; p + 1 < t.size(); ++p) {
    if (t[p] == context) ++m[t[p + 1]];
  }
  return m;
}

Tokens random_text(std::mt19937_64& gen, std::size_t n) {
  const Tokens words{"big", "large", "huge", "dog", "cat", "house", "the", "a", "tree"};
  std::vector<double> w{5, 3, 2, 4, 4, 3, 8, 6, 1};
  std::discrete_distribution<std::size_t> pick(w.begin(), w.end());
  Tokens out(n);
  for (auto& s : out) s = words[pick(gen)];
  return out;
}

}  // namespace

TEST_CASE("tokenisation") {
  CHECK(tokenize("Big dog. Big cat") == Tokens{"big", "dog", "big", "cat"});
  TokenizerConfig keep;
  keep.case_fold = false;
  CHECK(tokenize("Big dog. Big cat", keep) == Tokens{"Big", "dog", "Big", "cat"});
  CHECK(tokenize("").empty());
  CHECK(tokenize("  \n\t ").empty());
  CHECK(tokenize("(hello), -- world!\r\n\"quoted\"") == Tokens{"hello", "world", "quoted"});
  CHECK(tokenize("don't e-mail") == Tokens{"don't", "e-mail"});
  CHECK(tokenize("caf\xC3\xA9 na\xC3\xAFve") == Tokens{"caf\xC3\xA9", "na\xC3\xAFve"});
  CHECK(code_of([] { tokenize("bad \xC3\x28 byte"); }) == ErrorCode::kInput);
  CHECK(code_of([] { tokenize("\xED\xA0\x80"); }) == ErrorCode::kInput);  // surrogate
  CHECK(code_of([] { tokenize("\xC0\xAF"); }) == ErrorCode::kInput);      // overlong

  // Joining tokens of ASCII text with spaces and tokenising again is stable.
  std::mt19937_64 gen(3);
  const Tokens t = random_text(gen, 500);
  std::string joined;
  for (const auto& s : t) joined += s + " ";
  CHECK(tokenize(joined) == t);
}

TEST_CASE("conditional next-token distributions") {
  const Tokens t{"a", "b", "a", "c"};
  const auto cd = conditional_distribution(t, "a");
  REQUIRE(cd.lexicon.size() == 2);
  CHECK(cd.lexicon.token(0) == "b");
  CHECK(cd.dist[0] == 0.5);
  CHECK(cd.dist[1] == 0.5);
  CHECK(code_of([&] { conditional_distribution(t, "c"); }) == ErrorCode::kInput);
  CHECK(code_of([&] { conditional_distribution(t, "zzz"); }) == ErrorCode::kInput);

  std::mt19937_64 gen(4);
  for (int k = 0; k < 20; ++k) {
    const Tokens text = random_text(gen, 2000);
    const auto c = conditional_distribution(text, "big");
    const auto oracle = recount(text, "big");
    int total = 0;
    for (const auto& [w, n] : oracle) total += n;
    REQUIRE(c.lexicon.size() == oracle.size());
    for (Symbol i = 0; i < c.lexicon.size(); ++i) {
      CHECK(c.dist[i] == doctest::Approx(double(oracle.at(c.lexicon.token(i))) / total));
    }
    const auto table = bigram_table(text, "big");
    CHECK(table.total == std::uint64_t(total));
  }
}

TEST_CASE("union lexicon keeps each marginal") {
  std::mt19937_64 gen(5);
  const Tokens text = random_text(gen, 3000);
  const std::vector<BigramTable> tables{bigram_table(text, "big"), bigram_table(text, "large"),
                                        bigram_table(text, "huge")};
  const Lexicon lex = union_lexicon(tables);
  for (const auto& tab : tables) {
    const Distribution d = table_distribution(tab, lex);
    CHECK(d.size() == lex.size());
    const auto oracle = recount(text, tab.context);
    double s = 0.0;
    for (Symbol i = 0; i < lex.size(); ++i) {
      auto it = oracle.find(lex.token(i));
      const double expect = it == oracle.end() ? 0.0 : double(it->second) / tab.total;
      CHECK(d[i] == doctest::Approx(expect));
      s += d[i];
    }
    CHECK(s == doctest::Approx(1.0));
  }
  const Tokens ctx{"large", "huge"};
  const auto pooled = pooled_bigram_table(text, ctx);
  CHECK(pooled.total == tables[1].total + tables[2].total);
  Lexicon small(Tokens{"dog"});
  CHECK(code_of([&] { table_distribution(tables[0], small); }) == ErrorCode::kInput);
}

TEST_CASE("unigram distribution") {
  const auto u = unigram_distribution(Tokens{"x", "y", "x", "z"});
  CHECK(u.lexicon.tokens() == Tokens{"x", "y", "z"});
  CHECK(u.dist == Distribution({0.5, 0.25, 0.25}));
  CHECK(code_of([] { unigram_distribution(Tokens{}); }) == ErrorCode::kInput);
}

TEST_CASE("contiguous windows") {
  std::mt19937_64 gen(6);
  const Tokens text = random_text(gen, 4000);
  const auto occ = occurrences(text, "big");
  const std::uint64_t total = occ.size();
  REQUIRE(total > 50);

  const Window all = contiguous_window(text, "big", total, 1);
  CHECK(all.begin == occ.front());
  CHECK(all.end == occ.back() + 1);

  for (std::uint64_t k : {std::uint64_t{1}, std::uint64_t{7}, std::uint64_t{50}}) {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
      const Window w = contiguous_window(text, "big", k, seed);
      std::uint64_t inside = 0;
      for (std::size_t p = w.begin; p < w.end; ++p) inside += text[p] == "big";
      CHECK(inside == k);
      CHECK(text[w.begin] == "big");
      CHECK(text[w.end - 1] == "big");
      CHECK(window_successors(text, w, "big").size() == std::min<std::size_t>(k, w.end < text.size() ? k : k - 1));
    }
  }
  // Starts are spread over the valid range.
  std::set<std::size_t> starts;
  for (std::uint64_t seed = 0; seed < 200; ++seed) starts.insert(contiguous_window(text, "big", 1, seed).begin);
  CHECK(starts.size() > 60);
  CHECK(code_of([&] { contiguous_window(text, "big", total + 1, 0); }) == ErrorCode::kInput);
  CHECK(code_of([&] { contiguous_window(text, "big", 0, 0); }) == ErrorCode::kInput);
}

TEST_CASE("embeddings and radius") {
  std::istringstream in(
      "5 3\n"
      "a 1 0 0\n"
      "b 0 2 0\n"
      "c -3 0 0\n"
      "d 2 2 0\n"
      "z 0 0 0\n");
  const auto e = parse_embeddings(in);
  CHECK(e.dim == 3);
  CHECK(delta_from_embeddings(e, "a", "a") == kMinimumRadius);
  CHECK(delta_from_embeddings(e, "a", "b") == doctest::Approx(1.0));
  CHECK(delta_from_embeddings(e, "a", "c") == doctest::Approx(1.0));
  CHECK(delta_from_embeddings(e, "a", "d") == doctest::Approx(1 - 1 / std::sqrt(2.0)));
  CHECK(code_of([&] { delta_from_embeddings(e, "a", "missing"); }) == ErrorCode::kInput);
  CHECK(code_of([&] { delta_from_embeddings(e, "a", "z"); }) == ErrorCode::kInput);

  std::mt19937_64 gen(8);
  std::normal_distribution<double> z(0, 1);
  for (int k = 0; k < 100; ++k) {
    std::vector<double> u(6), v(6);
    for (auto& x : u) x = z(gen);
    for (auto& x : v) x = z(gen);
    const double s = std::exp(z(gen));
    std::vector<double> us(u);
    for (auto& x : us) x *= s;
    double dot = 0, nu = 0, nv = 0;
    for (int i = 0; i < 6; ++i) dot += u[i] * v[i], nu += u[i] * u[i], nv += v[i] * v[i];
    const double c = cosine_similarity(u, v);
    CHECK(c == doctest::Approx(dot / std::sqrt(nu * nv)));
    CHECK(cosine_similarity(v, u) == doctest::Approx(c));
    CHECK(cosine_similarity(us, v) == doctest::Approx(c));
  }

  std::istringstream short_file("3 2\na 1 0\nb 0 1\n");
  CHECK(code_of([&] { parse_embeddings(short_file); }) == ErrorCode::kParse);
  std::istringstream ragged("2 2\na 1 0\nb 0 1 5\n");
  CHECK(code_of([&] { parse_embeddings(ragged); }) == ErrorCode::kParse);
  std::istringstream nonnum("1 2\na 1 x\n");
  CHECK(code_of([&] { parse_embeddings(nonnum); }) == ErrorCode::kParse);
  CHECK(code_of([] { read_embeddings("/nonexistent/emb.txt"); }) == ErrorCode::kIo);
}

TEST_CASE("threshold partition") {
  const Distribution t({0.125, 0.125, 0.375, 0.375});
  const auto p = threshold_partition(t, 0.2);
  CHECK(p.members(Side::kLow) == std::vector<Symbol>{0, 1});
  CHECK(p.members(Side::kHigh) == std::vector<Symbol>{2, 3});
  CHECK(threshold_partition(t, 0.125).members(Side::kLow) == std::vector<Symbol>{0, 1});
  CHECK(code_of([&] { threshold_partition(t, 0.1); }) == ErrorCode::kInput);
  CHECK(code_of([&] { threshold_partition(t, 0.375); }) == ErrorCode::kInput);
}

TEST_CASE("lexicon") {
  Lexicon lex;
  CHECK(lex.add("x") == 0);
  CHECK(lex.add("y") == 1);
  CHECK(lex.add("x") == 0);
  CHECK(lex.find("y") == Symbol{1});
  CHECK(!lex.find("q"));
  CHECK(code_of([] { Lexicon(Tokens{"a", "a"}); }) == ErrorCode::kInput);
}
