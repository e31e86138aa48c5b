#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace adrcnn {

// One labelled sentence of the ADE corpus.  Ids are positional: unique and
// contiguous from 0 within any record list handed to downstream stages.
struct SentenceRecord {
  int id = 0;
  std::string pmid;
  std::string text;
  bool positive = false;  // true = ADR relevant
};

struct CorpusStats {
  long raw_positive_lines = 0;
  long unique_positive = 0;
  long negative = 0;
  long conflicts_resolved = 0;
};

// One of k cross-validation folds.  The three id sets are pairwise disjoint
// and their union covers every record id.
struct FoldSplit {
  int fold_index = 0;
  std::vector<int> train_ids;
  std::vector<int> dev_ids;
  std::vector<int> test_ids;
};

// DRUG-AE.rel layout: PMID|sentence|AE|begin|end|drug|begin|end.
// Only the first two fields are used; all records are labelled positive.
std::vector<SentenceRecord> parse_positive_file(std::istream& in);

// ADE-NEG.txt layout: "PMID NEG sentence".
std::vector<SentenceRecord> parse_negative_file(std::istream& in);

// Reads both distribution files and assigns global ids: positives first,
// negatives after, in file order.
std::vector<SentenceRecord> load_ade_corpus(std::istream& pos, std::istream& neg);

// Collapses exact-duplicate sentences within each class (first occurrence
// wins) and resolves cross-class conflicts to the positive label.  Returned
// records are renumbered 0..n-1 in first-occurrence order.
std::pair<std::vector<SentenceRecord>, CorpusStats> deduplicate(
    const std::vector<SentenceRecord>& records);

// Stats for a corpus that is passed through unchanged (the --no-dedup path).
CorpusStats raw_corpus_stats(const std::vector<SentenceRecord>& records);

// Stratified k-fold assignment: per-class seeded shuffle, round-robin into k
// test buckets, then a stratified dev_fraction sample of each fold's non-test
// portion.  With stratified=false the round-robin runs over one mixed pool.
std::vector<FoldSplit> make_folds(const std::vector<SentenceRecord>& records, int k,
                                  double dev_fraction, std::uint64_t seed,
                                  bool stratified = true);

}  // namespace adrcnn
