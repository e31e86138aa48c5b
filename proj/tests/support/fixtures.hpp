#pragma once

#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "adrcnn/corpus.hpp"
#include "adrcnn/rng.hpp"

namespace testsupport {

// Scratch directory removed on destruction.
class TempDir {
 public:
  TempDir() {
    auto base = std::filesystem::temp_directory_path();
    std::mt19937_64 rng(std::random_device{}());
    path_ = base / ("adrcnn_test_" + std::to_string(rng()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::string file(const std::string& name) const { return (path_ / name).string(); }

  std::string write(const std::string& name, const std::string& content) const {
    std::ofstream out(path_ / name, std::ios::binary);
    out << content;
    return (path_ / name).string();
  }

 private:
  std::filesystem::path path_;
};

// word2vec binary writer used to build loader fixtures.
inline std::string word2vec_binary_bytes(
    const std::vector<std::pair<std::string, std::vector<float>>>& entries,
    std::size_t dim, bool trailing_newline = true) {
  std::ostringstream out;
  out << entries.size() << ' ' << dim << '\n';
  for (const auto& [token, vec] : entries) {
    out << token << ' ';
    for (float v : vec) {
      std::uint32_t u;
      static_assert(sizeof(u) == sizeof(v));
      std::memcpy(&u, &v, 4);
      for (int b = 0; b < 4; ++b) out.put(static_cast<char>((u >> (8 * b)) & 0xff));
    }
    if (trailing_newline) out.put('\n');
  }
  return out.str();
}

inline std::string glove_text_lines(
    const std::vector<std::pair<std::string, std::vector<double>>>& entries) {
  std::ostringstream out;
  out.precision(17);
  for (const auto& [token, vec] : entries) {
    out << token;
    for (double v : vec) out << ' ' << v;
    out << '\n';
  }
  return out.str();
}

// A keyword-separable corpus in the ADE distribution layout: the keyword
// token appears in every positive sentence and nowhere else.
struct SyntheticCorpus {
  std::string positive_file;   // DRUG-AE.rel layout
  std::string negative_file;   // ADE-NEG.txt layout
  std::string embedding_file;  // glove text over the full alphabet
  std::vector<adrcnn::SentenceRecord> records;
  std::string keyword;
};

inline const std::vector<std::string>& synthetic_alphabet() {
  static const std::vector<std::string> kWords = {
      "alpha",  "bravo",  "charlie", "delta",  "echo",    "foxtrot", "golf",
      "hotel",  "india",  "juliet",  "kilo",   "lima",    "mike",    "november",
      "oscar",  "papa",   "quebec",  "romeo",  "sierra",  "tango",   "uniform",
      "victor", "whiskey", "xray",   "yankee", "zulu",    "amber",   "basil",
      "cedar",  "dahlia", "elm",     "fern",   "grove",   "hazel",   "iris",
      "jasper"};
  return kWords;
}

inline SyntheticCorpus make_synthetic_corpus(int sentences, double positive_fraction,
                                             std::size_t embedding_dim,
                                             std::uint64_t seed) {
  SyntheticCorpus corpus;
  corpus.keyword = "toxicity";
  const auto& words = synthetic_alphabet();
  std::mt19937_64 rng(seed);

  // Records mirror load_ade_corpus ordering: positives first, then negatives.
  std::ostringstream pos, neg;
  std::vector<adrcnn::SentenceRecord> positives, negatives;
  for (int i = 0; i < sentences; ++i) {
    const bool positive = adrcnn::uniform_double(rng) < positive_fraction;
    const std::size_t len = 6 + adrcnn::uniform_below(rng, 9);
    std::vector<std::string> tokens;
    for (std::size_t t = 0; t < len; ++t)
      tokens.push_back(words[adrcnn::uniform_below(rng, words.size())]);
    if (positive)
      tokens[adrcnn::uniform_below(rng, tokens.size())] = corpus.keyword;
    std::string text;
    for (std::size_t t = 0; t < tokens.size(); ++t) {
      if (t > 0) text += ' ';
      text += tokens[t];
    }
    const std::string pmid = std::to_string(1000000 + i);
    adrcnn::SentenceRecord rec;
    rec.pmid = pmid;
    rec.text = text;
    rec.positive = positive;
    if (positive) {
      pos << pmid << '|' << text << '|' << corpus.keyword << "|0|1|drug|0|1\n";
      positives.push_back(std::move(rec));
    } else {
      neg << pmid << " NEG " << text << '\n';
      negatives.push_back(std::move(rec));
    }
  }
  for (auto& rec : positives) {
    rec.id = static_cast<int>(corpus.records.size());
    corpus.records.push_back(std::move(rec));
  }
  for (auto& rec : negatives) {
    rec.id = static_cast<int>(corpus.records.size());
    corpus.records.push_back(std::move(rec));
  }
  corpus.positive_file = pos.str();
  corpus.negative_file = neg.str();

  std::vector<std::pair<std::string, std::vector<double>>> entries;
  std::mt19937_64 emb_rng(adrcnn::splitmix64(seed ^ 0xe3b));
  auto add_entry = [&](const std::string& token) {
    std::vector<double> vec(embedding_dim);
    for (double& v : vec) v = adrcnn::uniform_double(emb_rng, -0.5, 0.5);
    entries.emplace_back(token, std::move(vec));
  };
  for (const auto& word : words) add_entry(word);
  add_entry(corpus.keyword);
  corpus.embedding_file = glove_text_lines(entries);
  return corpus;
}

}  // namespace testsupport
