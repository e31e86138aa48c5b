#include <algorithm>
#include <sstream>

#include "adrcnn/embeddings.hpp"
#include "adrcnn/errors.hpp"
#include "adrcnn/rng.hpp"
#include "adrcnn/textprep.hpp"
#include "doctest.h"

using namespace adrcnn;

namespace {

PretrainedLexicon lexicon_over(const std::vector<std::string>& tokens, std::size_t dim = 2) {
  PretrainedLexicon lex(dim);
  std::vector<double> vec(dim, 0.25);
  for (const auto& token : tokens) lex.insert(token, vec);
  return lex;
}

std::string random_ascii(std::mt19937_64& rng, std::size_t len) {
  std::string s;
  for (std::size_t i = 0; i < len; ++i)
    s.push_back(static_cast<char>(32 + uniform_below(rng, 95)));
  return s;
}

}  // namespace

TEST_SUITE("textprep") {

TEST_CASE("clean_text separates clitics then strips non-alphabetic characters") {
  CHECK(clean_text("He didn't develop rash-like symptoms.") ==
        "He did n t develop rash like symptoms");
  CHECK(clean_text("abc") == "abc");
  CHECK(clean_text("5-FU (bolus)") == "FU bolus");
}

TEST_CASE("clean_text handles the remaining clitic groups") {
  CHECK(clean_text("it's") == "it s");
  CHECK(clean_text("they've") == "they ve");
  CHECK(clean_text("you're") == "you re");
  CHECK(clean_text("she'd") == "she d");
  CHECK(clean_text("we'll") == "we ll");
}

TEST_CASE("clean_text output is [A-Za-z ] with single spaces, and idempotent") {
  std::mt19937_64 rng(321);
  for (int trial = 0; trial < 200; ++trial) {
    const std::string raw = random_ascii(rng, uniform_below(rng, 80));
    const std::string cleaned = clean_text(raw);
    for (char c : cleaned) {
      const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == ' ';
      CHECK(ok);
    }
    CHECK(cleaned.find("  ") == std::string::npos);
    if (!cleaned.empty()) {
      CHECK(cleaned.front() != ' ');
      CHECK(cleaned.back() != ' ');
    }
    CHECK(clean_text(cleaned) == cleaned);
  }
}

TEST_CASE("tokenize splits cleaned text") {
  CHECK(tokenize("a b c") == std::vector<std::string>{"a", "b", "c"});
  CHECK(tokenize("").empty());
  CHECK(tokenize("FU bolus") == std::vector<std::string>{"FU", "bolus"});
}

TEST_CASE("build_vocabulary ranks by frequency with lexicographic tie-break") {
  std::vector<std::vector<std::string>> lists;
  for (int i = 0; i < 5; ++i) lists.push_back({"a"});
  for (int i = 0; i < 3; ++i) lists.push_back({"b", "c"});
  const auto vocab = build_vocabulary(lists, lexicon_over({"a", "b", "c"}));
  CHECK(vocab.index_of("a") == 2);
  CHECK(vocab.index_of("b") == 3);
  CHECK(vocab.index_of("c") == 4);
  CHECK(vocab.size() == 5);
}

TEST_CASE("build_vocabulary drops tokens missing from the lexicon") {
  const auto vocab = build_vocabulary({{"x", "y", "x"}}, lexicon_over({}));
  CHECK(vocab.content_size() == 0);
  CHECK(vocab.size() == 2);
  CHECK(vocab.index_of("x") == Vocabulary::kUnk);
}

TEST_CASE("build_vocabulary single covered token") {
  const auto vocab = build_vocabulary({{"x"}}, lexicon_over({"x"}));
  CHECK(vocab.index_of("x") == 2);
  CHECK(vocab.size() == 3);
}

TEST_CASE("build_vocabulary applies the cap before the lexicon filter") {
  std::vector<std::vector<std::string>> lists;
  for (int i = 0; i < 9; ++i) lists.push_back({"top"});
  for (int i = 0; i < 5; ++i) lists.push_back({"mid"});
  for (int i = 0; i < 2; ++i) lists.push_back({"low"});
  // cap=2 keeps {top, mid}; mid is not in the lexicon, so only top survives
  const auto vocab = build_vocabulary(lists, lexicon_over({"top", "low"}), 2);
  CHECK(vocab.content_size() == 1);
  CHECK(vocab.index_of("top") == 2);
  CHECK(vocab.index_of("low") == Vocabulary::kUnk);
}

TEST_CASE("build_vocabulary is independent of sentence order") {
  std::vector<std::vector<std::string>> lists = {
      {"m", "q", "a"}, {"q", "z"}, {"a", "a"}, {"z", "q", "m"}};
  const auto lex = lexicon_over({"m", "q", "a", "z"});
  const auto base = build_vocabulary(lists, lex);
  std::sort(lists.begin(), lists.end());
  do {
    const auto vocab = build_vocabulary(lists, lex);
    CHECK(vocab.content_tokens() == base.content_tokens());
  } while (std::next_permutation(lists.begin(), lists.end()));
}

TEST_CASE("encode maps, truncates and pads") {
  const auto vocab = build_vocabulary({{"a"}}, lexicon_over({"a"}));
  SUBCASE("unknown tokens become UNK") {
    const auto enc = encode({"a", "q"}, vocab, 4);
    CHECK(enc.indices == std::vector<int>{2, 1, 0, 0});
    CHECK(enc.true_length == 2);
  }
  SUBCASE("empty input encodes as one UNK") {
    const auto enc = encode({}, vocab, 4);
    CHECK(enc.indices == std::vector<int>{1, 0, 0, 0});
    CHECK(enc.true_length == 1);
  }
  SUBCASE("long input truncates at max_len") {
    const auto enc = encode({"a", "a", "a", "a", "a"}, vocab, 3);
    CHECK(enc.indices == std::vector<int>{2, 2, 2});
    CHECK(enc.true_length == 3);
  }
}

TEST_CASE("encode of cleaned text never exceeds the vocabulary") {
  std::mt19937_64 rng(77);
  const auto lex = lexicon_over({"drug", "rash", "fever"});
  std::vector<std::vector<std::string>> lists = {{"drug", "rash"}, {"fever"}};
  const auto vocab = build_vocabulary(lists, lex);
  for (int trial = 0; trial < 100; ++trial) {
    const std::string raw = random_ascii(rng, uniform_below(rng, 60));
    const auto enc = encode(tokenize(clean_text(raw)), vocab, 16);
    for (int idx : enc.indices) {
      CHECK(idx >= 0);
      CHECK(static_cast<std::size_t>(idx) < vocab.size());
    }
  }
}

TEST_CASE("vocabulary round-trips through its text serialization") {
  const auto vocab =
      build_vocabulary({{"beta", "alpha", "beta"}}, lexicon_over({"alpha", "beta"}));
  std::stringstream io;
  vocab.save(io);
  const auto loaded = Vocabulary::load(io);
  CHECK(loaded.content_tokens() == vocab.content_tokens());
  CHECK(loaded.index_of("beta") == vocab.index_of("beta"));
}

}  // TEST_SUITE
