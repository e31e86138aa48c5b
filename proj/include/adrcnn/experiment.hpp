#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "adrcnn/corpus.hpp"
#include "adrcnn/metrics.hpp"
#include "adrcnn/model.hpp"
#include "adrcnn/train.hpp"

namespace adrcnn {

enum class EmbeddingFormat { GloveText, Word2vecBinary };

std::string embedding_format_name(EmbeddingFormat fmt);
EmbeddingFormat embedding_format_from_name(const std::string& name);

// Flat configuration of one cross-validation experiment; serializable to a
// flat JSON document with the same field names.
struct ExperimentConfig {
  Architecture architecture = Architecture::Huynh;
  std::string pos_file;
  std::string neg_file;
  std::string embedding_path;
  EmbeddingFormat embedding_format = EmbeddingFormat::GloveText;
  bool deduplicate = true;
  int k = 10;
  double dev_fraction = 0.1;
  bool stratified = true;
  std::size_t vocab_size = 20000;
  std::size_t max_len_cap = 128;
  bool lowercase = false;
  std::size_t filters = 0;  // 0 = architecture default
  int jobs = 1;
  std::uint64_t seed = 42;
  TrainConfig train;  // train.seed is derived per fold from `seed`
};

ExperimentConfig config_from_json(const std::string& json_text);
std::string config_to_json(const ExperimentConfig& cfg);

struct FoldResult {
  int fold_index = 0;
  MetricsReport test_metrics;
  double dev_f1 = 0.0;
  double threshold = 0.5;
  long batches_trained = 0;
  double pad_row_drift = 0.0;  // L2 norm of the PAD embedding row after training
};

struct AggregateReport {
  MetricsReport mean;
  MetricsReport stddev;
  std::vector<FoldResult> folds;
  std::string config_json;  // echo of the driving configuration
};

// Serialized AggregateReport; byte-stable for identical inputs.
std::string report_to_json(const AggregateReport& report);

// Unweighted per-metric mean and population standard deviation.
AggregateReport aggregate(const std::vector<FoldResult>& folds);

// Six metric rows (paper order) by one column per report, 3 decimals.
std::string render_table(const std::vector<AggregateReport>& reports,
                         const std::vector<std::string>& column_labels);

// Per-fold observer hooks; every member is optional.
struct ExperimentHooks {
  // Returns a sink for one fold's training log lines, or an empty function.
  std::function<std::function<void(const EvalRecord&)>(int fold)> train_log;
  // Returns a path to write the fold's checkpoint to, or nullopt.
  std::function<std::optional<std::string>(int fold)> checkpoint_path;
};

// Everything needed to score or persist one trained fold.
struct FoldOutcome {
  FoldResult result;
  Snapshot snapshot;
  Vocabulary vocab;
  std::size_t max_len = 0;
};

// Trains and evaluates a single fold.  Exposed for leakage and determinism
// tests; run_experiment is a parallel map over this.
FoldOutcome run_single_fold(const std::vector<SentenceRecord>& records,
                            const FoldSplit& split, const PretrainedLexicon& lexicon,
                            const ExperimentConfig& cfg,
                            const std::function<void(const EvalRecord&)>& log = {});

// Full pipeline: load corpus, (optionally) de-duplicate, split, train every
// fold (cfg.jobs in parallel), aggregate.  Deterministic for a fixed config.
AggregateReport run_experiment(const ExperimentConfig& cfg,
                               const ExperimentHooks& hooks = {});

// As above but over pre-loaded records (used by the synthetic suites).
AggregateReport run_experiment_on_records(const std::vector<SentenceRecord>& records,
                                          const PretrainedLexicon& lexicon,
                                          const ExperimentConfig& cfg,
                                          const ExperimentHooks& hooks = {});

}  // namespace adrcnn
