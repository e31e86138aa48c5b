#include "adrcnn/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <sstream>
#include <thread>

#include "adrcnn/errors.hpp"
#include "adrcnn/rng.hpp"
#include "adrcnn/textprep.hpp"
#include "json.hpp"

namespace adrcnn {

using nlohmann::json;

std::string embedding_format_name(EmbeddingFormat fmt) {
  return fmt == EmbeddingFormat::GloveText ? "glove-text" : "word2vec-binary";
}

EmbeddingFormat embedding_format_from_name(const std::string& name) {
  if (name == "glove-text") return EmbeddingFormat::GloveText;
  if (name == "word2vec-binary") return EmbeddingFormat::Word2vecBinary;
  throw InvalidArgument("unknown embedding format \"" + name + "\"");
}

ExperimentConfig config_from_json(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("config: ") + e.what());
  }
  ExperimentConfig cfg;
  if (j.contains("architecture"))
    cfg.architecture = architecture_from_name(j.at("architecture").get<std::string>());
  cfg.pos_file = j.value("pos_file", cfg.pos_file);
  cfg.neg_file = j.value("neg_file", cfg.neg_file);
  cfg.embedding_path = j.value("embedding_path", cfg.embedding_path);
  if (j.contains("embedding_format"))
    cfg.embedding_format =
        embedding_format_from_name(j.at("embedding_format").get<std::string>());
  cfg.deduplicate = j.value("deduplicate", cfg.deduplicate);
  cfg.k = j.value("k", cfg.k);
  cfg.dev_fraction = j.value("dev_fraction", cfg.dev_fraction);
  cfg.stratified = j.value("stratified", cfg.stratified);
  cfg.vocab_size = j.value("vocab_size", cfg.vocab_size);
  cfg.max_len_cap = j.value("max_len_cap", cfg.max_len_cap);
  cfg.lowercase = j.value("lowercase", cfg.lowercase);
  cfg.filters = j.value("filters", cfg.filters);
  cfg.jobs = j.value("jobs", cfg.jobs);
  cfg.seed = j.value("seed", cfg.seed);
  cfg.train.epochs = j.value("epochs", cfg.train.epochs);
  cfg.train.batch_size = j.value("batch_size", cfg.train.batch_size);
  cfg.train.max_norm = j.value("max_norm", cfg.train.max_norm);
  cfg.train.eval_every = j.value("eval_every", cfg.train.eval_every);
  cfg.train.patience = j.value("patience", cfg.train.patience);
  cfg.train.lr = j.value("lr", cfg.train.lr);
  cfg.train.beta1 = j.value("beta1", cfg.train.beta1);
  cfg.train.beta2 = j.value("beta2", cfg.train.beta2);
  cfg.train.epsilon = j.value("epsilon", cfg.train.epsilon);
  cfg.train.dropout_p = j.value("dropout", cfg.train.dropout_p);
  return cfg;
}

std::string config_to_json(const ExperimentConfig& cfg) {
  json j{{"architecture", architecture_name(cfg.architecture)},
         {"pos_file", cfg.pos_file},
         {"neg_file", cfg.neg_file},
         {"embedding_path", cfg.embedding_path},
         {"embedding_format", embedding_format_name(cfg.embedding_format)},
         {"deduplicate", cfg.deduplicate},
         {"k", cfg.k},
         {"dev_fraction", cfg.dev_fraction},
         {"stratified", cfg.stratified},
         {"vocab_size", cfg.vocab_size},
         {"max_len_cap", cfg.max_len_cap},
         {"lowercase", cfg.lowercase},
         {"filters", cfg.filters},
         {"jobs", cfg.jobs},
         {"seed", cfg.seed},
         {"epochs", cfg.train.epochs},
         {"batch_size", cfg.train.batch_size},
         {"max_norm", cfg.train.max_norm},
         {"eval_every", cfg.train.eval_every},
         {"patience", cfg.train.patience},
         {"lr", cfg.train.lr},
         {"beta1", cfg.train.beta1},
         {"beta2", cfg.train.beta2},
         {"epsilon", cfg.train.epsilon},
         {"dropout", cfg.train.dropout_p}};
  return j.dump(2);
}

namespace {

json metrics_to_json(const MetricsReport& m) {
  return json{{"accuracy", m.accuracy},   {"precision", m.precision},
              {"recall", m.recall},       {"f1", m.f1},
              {"specificity", m.specificity}, {"auroc", m.auroc}};
}

}  // namespace

std::string report_to_json(const AggregateReport& report) {
  json folds = json::array();
  for (const auto& f : report.folds) {
    folds.push_back(json{{"fold_index", f.fold_index},
                         {"metrics", metrics_to_json(f.test_metrics)},
                         {"dev_f1", f.dev_f1},
                         {"threshold", f.threshold},
                         {"batches_trained", f.batches_trained},
                         {"pad_row_drift", f.pad_row_drift}});
  }
  json j{{"config", json::parse(report.config_json.empty() ? "{}" : report.config_json)},
         {"mean", metrics_to_json(report.mean)},
         {"std", metrics_to_json(report.stddev)},
         {"folds", folds}};
  return j.dump(2);
}

AggregateReport aggregate(const std::vector<FoldResult>& folds) {
  if (folds.empty()) throw InvalidArgument("aggregate: no fold results");
  AggregateReport report;
  report.folds = folds;

  auto accumulate = [&](auto member) {
    double mean = 0.0;
    for (const auto& f : folds) mean += f.test_metrics.*member;
    mean /= static_cast<double>(folds.size());
    double var = 0.0;
    for (const auto& f : folds) {
      const double d = f.test_metrics.*member - mean;
      var += d * d;
    }
    var /= static_cast<double>(folds.size());
    return std::pair{mean, std::sqrt(var)};
  };

  std::tie(report.mean.accuracy, report.stddev.accuracy) =
      accumulate(&MetricsReport::accuracy);
  std::tie(report.mean.precision, report.stddev.precision) =
      accumulate(&MetricsReport::precision);
  std::tie(report.mean.recall, report.stddev.recall) = accumulate(&MetricsReport::recall);
  std::tie(report.mean.f1, report.stddev.f1) = accumulate(&MetricsReport::f1);
  std::tie(report.mean.specificity, report.stddev.specificity) =
      accumulate(&MetricsReport::specificity);
  std::tie(report.mean.auroc, report.stddev.auroc) = accumulate(&MetricsReport::auroc);
  return report;
}

std::string render_table(const std::vector<AggregateReport>& reports,
                         const std::vector<std::string>& column_labels) {
  if (reports.size() != column_labels.size())
    throw InvalidArgument("render_table: one label per report required");
  static const std::vector<std::pair<std::string, double MetricsReport::*>> kRows = {
      {"Accuracy", &MetricsReport::accuracy},   {"Precision", &MetricsReport::precision},
      {"Recall", &MetricsReport::recall},       {"F1-score", &MetricsReport::f1},
      {"Specificity", &MetricsReport::specificity}, {"AUROC", &MetricsReport::auroc}};

  std::size_t name_width = std::string("Metric").size();
  for (const auto& [name, member] : kRows) name_width = std::max(name_width, name.size());
  std::vector<std::size_t> widths;
  for (const auto& label : column_labels) widths.push_back(std::max<std::size_t>(label.size(), 5));

  std::ostringstream out;
  out << std::left << std::setw(static_cast<int>(name_width)) << "Metric";
  for (std::size_t c = 0; c < column_labels.size(); ++c)
    out << "  " << std::right << std::setw(static_cast<int>(widths[c])) << column_labels[c];
  out << '\n';
  for (const auto& [name, member] : kRows) {
    out << std::left << std::setw(static_cast<int>(name_width)) << name;
    for (std::size_t c = 0; c < reports.size(); ++c) {
      std::ostringstream cell;
      cell << std::fixed << std::setprecision(3) << reports[c].mean.*member;
      out << "  " << std::right << std::setw(static_cast<int>(widths[c])) << cell.str();
    }
    out << '\n';
  }
  return out.str();
}

namespace {

std::vector<std::string> prepare_tokens(const std::string& text, bool lowercase) {
  std::string cleaned = clean_text(text);
  if (lowercase)
    std::transform(cleaned.begin(), cleaned.end(), cleaned.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return tokenize(cleaned);
}

}  // namespace

FoldOutcome run_single_fold(const std::vector<SentenceRecord>& records,
                            const FoldSplit& split, const PretrainedLexicon& lexicon,
                            const ExperimentConfig& cfg,
                            const std::function<void(const EvalRecord&)>& log) {
  // Vocabulary, sentence length and everything downstream come from the
  // training portion only.
  std::vector<std::vector<std::string>> train_tokens;
  train_tokens.reserve(split.train_ids.size());
  std::size_t longest = 0;
  for (int id : split.train_ids) {
    train_tokens.push_back(prepare_tokens(records[static_cast<std::size_t>(id)].text,
                                          cfg.lowercase));
    longest = std::max(longest, train_tokens.back().size());
  }
  const Vocabulary vocab = build_vocabulary(train_tokens, lexicon, cfg.vocab_size);
  const std::size_t max_len =
      std::clamp<std::size_t>(longest, kConvWindow, cfg.max_len_cap);

  auto encode_ids = [&](const std::vector<int>& ids) {
    std::pair<std::vector<EncodedSentence>, std::vector<int>> out;
    out.first.reserve(ids.size());
    out.second.reserve(ids.size());
    for (int id : ids) {
      const auto& rec = records[static_cast<std::size_t>(id)];
      out.first.push_back(encode(prepare_tokens(rec.text, cfg.lowercase), vocab, max_len));
      out.second.push_back(rec.positive ? 1 : 0);
    }
    return out;
  };

  std::vector<EncodedSentence> train_x(split.train_ids.size());
  for (std::size_t i = 0; i < split.train_ids.size(); ++i)
    train_x[i] = encode(train_tokens[i], vocab, max_len);
  std::vector<int> train_y;
  train_y.reserve(split.train_ids.size());
  for (int id : split.train_ids)
    train_y.push_back(records[static_cast<std::size_t>(id)].positive ? 1 : 0);

  auto [dev_x, dev_y] = encode_ids(split.dev_ids);

  EmbeddingMatrix matrix = assemble_matrix(vocab, lexicon);
  const std::uint64_t fold_stream = static_cast<std::uint64_t>(split.fold_index);
  ModelParameters init = init_model(cfg.architecture, std::move(matrix), cfg.filters,
                                    derive_seed(cfg.seed, fold_stream, 0x1217));

  TrainConfig train_cfg = cfg.train;
  train_cfg.seed = derive_seed(cfg.seed, fold_stream, 0x7e41);
  Snapshot snapshot = train_fold(train_x, train_y, dev_x, dev_y, init, train_cfg, log);

  auto [test_x, test_y] = encode_ids(split.test_ids);
  std::vector<double> scores(test_x.size());
  for (std::size_t i = 0; i < test_x.size(); ++i)
    scores[i] = model_score(test_x[i], snapshot.params);

  FoldOutcome outcome{{}, std::move(snapshot), vocab, max_len};
  outcome.result.fold_index = split.fold_index;
  outcome.result.test_metrics = point_metrics(confusion(scores, test_y,
                                                        outcome.snapshot.threshold));
  outcome.result.test_metrics.auroc = auroc(scores, test_y);
  outcome.result.dev_f1 = outcome.snapshot.dev_f1;
  outcome.result.threshold = outcome.snapshot.threshold;
  outcome.result.batches_trained = outcome.snapshot.batch_index;
  double drift = 0.0;
  const double* pad = outcome.snapshot.params.embedding.row(Vocabulary::kPad);
  for (std::size_t c = 0; c < outcome.snapshot.params.embedding.cols; ++c)
    drift += pad[c] * pad[c];
  outcome.result.pad_row_drift = std::sqrt(drift);
  return outcome;
}

AggregateReport run_experiment_on_records(const std::vector<SentenceRecord>& records,
                                          const PretrainedLexicon& lexicon,
                                          const ExperimentConfig& cfg,
                                          const ExperimentHooks& hooks) {
  std::vector<SentenceRecord> working = records;
  if (cfg.deduplicate) working = deduplicate(working).first;

  const std::vector<FoldSplit> splits =
      make_folds(working, cfg.k, cfg.dev_fraction, cfg.seed, cfg.stratified);

  std::vector<FoldResult> results(splits.size());
  std::vector<std::string> failures(splits.size());
  std::atomic<std::size_t> next{0};

  auto worker = [&]() {
    while (true) {
      const std::size_t f = next.fetch_add(1);
      if (f >= splits.size()) return;
      try {
        std::function<void(const EvalRecord&)> log;
        if (hooks.train_log) log = hooks.train_log(static_cast<int>(f));
        FoldOutcome outcome = run_single_fold(working, splits[f], lexicon, cfg, log);
        if (hooks.checkpoint_path) {
          if (auto path = hooks.checkpoint_path(static_cast<int>(f))) {
            std::ofstream out(*path, std::ios::binary);
            if (!out) throw IoError("cannot write checkpoint " + *path);
            save_checkpoint(out, Checkpoint{std::move(outcome.snapshot.params),
                                            outcome.vocab, outcome.max_len,
                                            cfg.lowercase, outcome.snapshot.threshold});
          }
        }
        results[f] = outcome.result;
      } catch (const std::exception& e) {
        failures[f] = std::string("fold ") + std::to_string(f) + ": " + e.what();
      }
    }
  };

  const int jobs = std::max(1, std::min(cfg.jobs, static_cast<int>(splits.size())));
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(jobs));
    for (int i = 0; i < jobs; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (const auto& failure : failures)
    if (!failure.empty()) throw std::runtime_error("run_experiment: " + failure);

  AggregateReport report = aggregate(results);
  report.config_json = config_to_json(cfg);
  return report;
}

AggregateReport run_experiment(const ExperimentConfig& cfg, const ExperimentHooks& hooks) {
  std::ifstream pos(cfg.pos_file);
  if (!pos) throw IoError("cannot open positive corpus file " + cfg.pos_file);
  std::ifstream neg(cfg.neg_file);
  if (!neg) throw IoError("cannot open negative corpus file " + cfg.neg_file);
  std::vector<SentenceRecord> records;
  try {
    records = load_ade_corpus(pos, neg);
  } catch (const ParseError& e) {
    throw ParseError(std::string("corpus: ") + e.what());
  }

  std::ifstream emb(cfg.embedding_path,
                    cfg.embedding_format == EmbeddingFormat::Word2vecBinary
                        ? std::ios::binary
                        : std::ios::in);
  if (!emb) throw IoError("cannot open embedding file " + cfg.embedding_path);
  const PretrainedLexicon lexicon = cfg.embedding_format == EmbeddingFormat::GloveText
                                        ? load_glove_text(emb)
                                        : load_word2vec_binary(emb);
  return run_experiment_on_records(records, lexicon, cfg, hooks);
}

}  // namespace adrcnn
