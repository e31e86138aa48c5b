#include "adrcnn/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <unordered_map>
#include <utility>

#include "adrcnn/errors.hpp"
#include "adrcnn/rng.hpp"

namespace adrcnn {

namespace {

std::string strip_cr(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

bool blank(const std::string& s) {
  return s.find_first_not_of(" \t") == std::string::npos;
}

}  // namespace

std::vector<SentenceRecord> parse_positive_file(std::istream& in) {
  std::vector<SentenceRecord> records;
  std::string line;
  long lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = strip_cr(line);
    if (blank(line)) continue;
    const auto first = line.find('|');
    if (first == std::string::npos)
      throw ParseError("expected pipe-delimited record with at least 2 fields", lineno);
    const auto second = line.find('|', first + 1);
    SentenceRecord rec;
    rec.id = static_cast<int>(records.size());
    rec.pmid = line.substr(0, first);
    rec.text = second == std::string::npos ? line.substr(first + 1)
                                           : line.substr(first + 1, second - first - 1);
    rec.positive = true;
    if (blank(rec.text))
      throw ParseError("empty sentence field", lineno);
    records.push_back(std::move(rec));
  }
  return records;
}

std::vector<SentenceRecord> parse_negative_file(std::istream& in) {
  std::vector<SentenceRecord> records;
  std::string line;
  long lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = strip_cr(line);
    if (blank(line)) continue;
    const auto sp1 = line.find(' ');
    if (sp1 == std::string::npos)
      throw ParseError("expected \"PMID NEG sentence\"", lineno);
    const auto sp2 = line.find(' ', sp1 + 1);
    if (sp2 == std::string::npos || line.compare(sp1 + 1, sp2 - sp1 - 1, "NEG") != 0)
      throw ParseError("missing NEG marker in field 2", lineno);
    SentenceRecord rec;
    rec.id = static_cast<int>(records.size());
    rec.pmid = line.substr(0, sp1);
    rec.text = line.substr(sp2 + 1);
    rec.positive = false;
    if (blank(rec.text))
      throw ParseError("empty sentence field", lineno);
    records.push_back(std::move(rec));
  }
  return records;
}

std::vector<SentenceRecord> load_ade_corpus(std::istream& pos, std::istream& neg) {
  std::vector<SentenceRecord> records = parse_positive_file(pos);
  std::vector<SentenceRecord> negatives = parse_negative_file(neg);
  records.reserve(records.size() + negatives.size());
  for (auto& rec : negatives) {
    rec.id = static_cast<int>(records.size());
    records.push_back(std::move(rec));
  }
  return records;
}

std::pair<std::vector<SentenceRecord>, CorpusStats> deduplicate(
    const std::vector<SentenceRecord>& records) {
  CorpusStats stats;
  std::vector<SentenceRecord> kept;
  // text -> position in `kept`
  std::unordered_map<std::string, std::size_t> seen;
  seen.reserve(records.size());
  for (const auto& rec : records) {
    if (rec.positive) ++stats.raw_positive_lines;
    auto [it, inserted] = seen.try_emplace(rec.text, kept.size());
    if (inserted) {
      kept.push_back(rec);
      continue;
    }
    SentenceRecord& first = kept[it->second];
    if (rec.positive && !first.positive) {
      first.positive = true;  // demonstrably carries an ADE relation
      ++stats.conflicts_resolved;
    }
  }
  for (std::size_t i = 0; i < kept.size(); ++i) {
    kept[i].id = static_cast<int>(i);
    if (kept[i].positive)
      ++stats.unique_positive;
    else
      ++stats.negative;
  }
  return {std::move(kept), stats};
}

CorpusStats raw_corpus_stats(const std::vector<SentenceRecord>& records) {
  CorpusStats stats;
  for (const auto& rec : records) {
    if (rec.positive) {
      ++stats.raw_positive_lines;
      ++stats.unique_positive;
    } else {
      ++stats.negative;
    }
  }
  return stats;
}

namespace {

// Splits `pool` round-robin after a seeded shuffle; bucket i%k gets element i.
std::vector<std::vector<int>> round_robin_buckets(std::vector<int> pool, int k,
                                                  std::mt19937_64& rng) {
  deterministic_shuffle(pool, rng);
  std::vector<std::vector<int>> buckets(static_cast<std::size_t>(k));
  for (std::size_t i = 0; i < pool.size(); ++i)
    buckets[i % static_cast<std::size_t>(k)].push_back(pool[i]);
  return buckets;
}

// First llround(fraction * n) ids of a seeded shuffle.
std::vector<int> sample_fraction(std::vector<int> pool, double fraction,
                                 std::mt19937_64& rng) {
  deterministic_shuffle(pool, rng);
  const auto n = static_cast<std::size_t>(
      std::llround(fraction * static_cast<double>(pool.size())));
  pool.resize(std::min(n, pool.size()));
  return pool;
}

}  // namespace

std::vector<FoldSplit> make_folds(const std::vector<SentenceRecord>& records, int k,
                                  double dev_fraction, std::uint64_t seed,
                                  bool stratified) {
  if (k < 2) throw InvalidArgument("make_folds: k must be >= 2");
  if (!(dev_fraction > 0.0 && dev_fraction < 1.0))
    throw InvalidArgument("make_folds: dev_fraction must be in (0, 1)");
  if (records.empty()) throw InvalidArgument("make_folds: empty record list");

  std::vector<std::vector<int>> classes;  // id pools, one per stratum
  if (stratified) {
    classes.resize(2);
    for (const auto& rec : records) classes[rec.positive ? 0 : 1].push_back(rec.id);
    for (const auto& cls : classes)
      if (cls.size() < static_cast<std::size_t>(k))
        throw InvalidArgument("make_folds: a class has fewer than k members");
  } else {
    classes.resize(1);
    for (const auto& rec : records) classes[0].push_back(rec.id);
    if (classes[0].size() < static_cast<std::size_t>(k))
      throw InvalidArgument("make_folds: fewer records than folds");
  }

  std::mt19937_64 rng(seed);
  std::vector<std::vector<std::vector<int>>> buckets;  // [class][fold]
  for (auto& cls : classes) buckets.push_back(round_robin_buckets(std::move(cls), k, rng));

  std::vector<FoldSplit> folds(static_cast<std::size_t>(k));
  for (int f = 0; f < k; ++f) {
    FoldSplit& fold = folds[static_cast<std::size_t>(f)];
    fold.fold_index = f;
    std::vector<char> in_test(records.size(), 0);
    for (const auto& per_class : buckets)
      for (int id : per_class[static_cast<std::size_t>(f)]) {
        fold.test_ids.push_back(id);
        in_test[static_cast<std::size_t>(id)] = 1;
      }

    std::mt19937_64 dev_rng(derive_seed(seed, static_cast<std::uint64_t>(f), 0x0de5));
    std::vector<char> in_dev(records.size(), 0);
    for (const auto& per_class : buckets) {
      std::vector<int> rest;
      for (const auto& bucket : per_class)
        for (int id : bucket)
          if (!in_test[static_cast<std::size_t>(id)]) rest.push_back(id);
      std::sort(rest.begin(), rest.end());
      for (int id : sample_fraction(std::move(rest), dev_fraction, dev_rng))
        in_dev[static_cast<std::size_t>(id)] = 1;
    }

    for (const auto& rec : records) {
      if (in_test[static_cast<std::size_t>(rec.id)]) continue;
      (in_dev[static_cast<std::size_t>(rec.id)] ? fold.dev_ids : fold.train_ids)
          .push_back(rec.id);
    }
    std::sort(fold.test_ids.begin(), fold.test_ids.end());
    std::sort(fold.dev_ids.begin(), fold.dev_ids.end());
    std::sort(fold.train_ids.begin(), fold.train_ids.end());
  }
  return folds;
}

}  // namespace adrcnn
