// adrcnn: ADR sentence classification pipeline over the ADE corpus.
//
// Subcommands:
//   prepare          parse + de-duplicate the corpus distribution files
//   embeddings-info  inspect a pretrained embedding file
//   cv               run a k-fold cross-validation experiment
//   score            classify raw sentences with a trained checkpoint

#include <cctype>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "adrcnn/corpus.hpp"
#include "adrcnn/embeddings.hpp"
#include "adrcnn/errors.hpp"
#include "adrcnn/experiment.hpp"
#include "adrcnn/model.hpp"
#include "adrcnn/textprep.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

std::ifstream open_input(const std::string& path, bool binary = false) {
  std::ifstream in(path, binary ? std::ios::binary : std::ios::in);
  if (!in) throw adrcnn::IoError("cannot open file: " + path);
  return in;
}

int cmd_prepare(const std::string& pos_path, const std::string& neg_path, bool dedup,
                const std::string& out_dir) {
  auto pos = open_input(pos_path);
  auto neg = open_input(neg_path);
  std::vector<adrcnn::SentenceRecord> records = adrcnn::load_ade_corpus(pos, neg);

  adrcnn::CorpusStats stats;
  if (dedup) {
    auto [kept, s] = adrcnn::deduplicate(records);
    records = std::move(kept);
    stats = s;
  } else {
    stats = adrcnn::raw_corpus_stats(records);
  }

  fs::create_directories(out_dir);
  {
    std::ofstream out(fs::path(out_dir) / "records.tsv");
    if (!out) throw adrcnn::IoError("cannot write records.tsv under " + out_dir);
    for (const auto& rec : records)
      out << (rec.positive ? 1 : 0) << '\t' << rec.pmid << '\t' << rec.text << '\n';
  }
  {
    json j{{"raw_positive_lines", stats.raw_positive_lines},
           {"unique_positive", stats.unique_positive},
           {"negative", stats.negative},
           {"conflicts_resolved", stats.conflicts_resolved}};
    std::ofstream out(fs::path(out_dir) / "corpus_stats.json");
    if (!out) throw adrcnn::IoError("cannot write corpus_stats.json under " + out_dir);
    out << j.dump(2) << '\n';
    std::cout << j.dump(2) << '\n';
  }
  return kExitOk;
}

int cmd_embeddings_info(const std::string& emb_path, const std::string& format,
                        const std::optional<std::string>& vocab_path) {
  const auto fmt = adrcnn::embedding_format_from_name(format);
  auto in = open_input(emb_path, fmt == adrcnn::EmbeddingFormat::Word2vecBinary);
  const adrcnn::PretrainedLexicon lexicon = fmt == adrcnn::EmbeddingFormat::GloveText
                                                ? adrcnn::load_glove_text(in)
                                                : adrcnn::load_word2vec_binary(in);
  std::cout << "dim: " << lexicon.dim() << '\n';
  std::cout << "entries: " << lexicon.size() << '\n';
  if (lexicon.skipped_lines() > 0)
    std::cout << "skipped_lines: " << lexicon.skipped_lines() << '\n';
  if (lexicon.duplicate_tokens() > 0)
    std::cout << "duplicate_tokens: " << lexicon.duplicate_tokens() << '\n';
  if (vocab_path) {
    auto vin = open_input(*vocab_path);
    const adrcnn::Vocabulary vocab = adrcnn::Vocabulary::load(vin);
    std::size_t covered = 0;
    for (const auto& token : vocab.content_tokens())
      if (lexicon.contains(token)) ++covered;
    const double coverage =
        vocab.content_size() == 0
            ? 0.0
            : static_cast<double>(covered) / static_cast<double>(vocab.content_size());
    std::cout << "coverage: " << coverage << '\n';
  }
  return kExitOk;
}

int cmd_cv(const adrcnn::ExperimentConfig& cfg, const std::string& out_dir,
           bool save_checkpoints) {
  for (const auto& path : {cfg.pos_file, cfg.neg_file, cfg.embedding_path})
    if (!fs::exists(path)) throw adrcnn::IoError("cannot open file: " + path);

  fs::create_directories(out_dir);
  adrcnn::ExperimentHooks hooks;
  hooks.train_log = [&](int fold) -> std::function<void(const adrcnn::EvalRecord&)> {
    auto path = fs::path(out_dir) / ("fold_" + std::to_string(fold) + ".train.tsv");
    auto stream = std::make_shared<std::ofstream>(path);
    return [stream](const adrcnn::EvalRecord& rec) {
      *stream << rec.batch_index << '\t' << rec.dev_loss << '\t' << rec.dev_f1 << '\t'
              << rec.threshold << '\t' << rec.patience_counter << '\n';
      stream->flush();
    };
  };
  if (save_checkpoints) {
    hooks.checkpoint_path = [&](int fold) -> std::optional<std::string> {
      return (fs::path(out_dir) / ("fold_" + std::to_string(fold) + ".checkpoint.bin"))
          .string();
    };
  }

  const adrcnn::AggregateReport report = adrcnn::run_experiment(cfg, hooks);

  const std::string report_json = adrcnn::report_to_json(report);
  {
    std::ofstream out(fs::path(out_dir) / "aggregate_report.json");
    out << report_json << '\n';
  }
  {
    std::ofstream out(fs::path(out_dir) / "table.txt");
    out << adrcnn::render_table({report}, {adrcnn::architecture_name(cfg.architecture)});
  }
  {
    std::ofstream out(fs::path(out_dir) / "folds.csv");
    out << "fold,accuracy,precision,recall,f1,specificity,auroc,dev_f1,threshold,"
           "batches_trained,pad_row_drift\n";
    for (const auto& f : report.folds) {
      const auto& m = f.test_metrics;
      out << f.fold_index << ',' << m.accuracy << ',' << m.precision << ',' << m.recall
          << ',' << m.f1 << ',' << m.specificity << ',' << m.auroc << ',' << f.dev_f1
          << ',' << f.threshold << ',' << f.batches_trained << ',' << f.pad_row_drift
          << '\n';
    }
  }
  std::cout << adrcnn::render_table({report},
                                    {adrcnn::architecture_name(cfg.architecture)});
  return kExitOk;
}

int cmd_score(const std::string& checkpoint_path, const std::string& input_path,
              double threshold) {
  auto ckpt_in = open_input(checkpoint_path, true);
  const adrcnn::Checkpoint ckpt = adrcnn::load_checkpoint(ckpt_in);
  auto in = open_input(input_path);

  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::string cleaned = adrcnn::clean_text(line);
    if (ckpt.lowercase)
      for (char& c : cleaned) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    const adrcnn::EncodedSentence enc =
        adrcnn::encode(adrcnn::tokenize(cleaned), ckpt.vocab, ckpt.max_len);
    const double score = adrcnn::model_score(enc, ckpt.params);
    std::cout << score << '\t' << (score >= threshold ? 1 : 0) << '\n';
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ADR-relevant sentence classification over the ADE corpus"};
  app.require_subcommand(1);

  // prepare
  auto* prepare = app.add_subcommand("prepare", "Parse and de-duplicate the corpus");
  std::string pos_path, neg_path, prepare_out = ".";
  bool no_dedup = false;
  prepare->add_option("--pos", pos_path, "DRUG-AE.rel style positive file")->required();
  prepare->add_option("--neg", neg_path, "ADE-NEG.txt style negative file")->required();
  prepare->add_flag("--no-dedup", no_dedup, "Keep duplicated sentences");
  prepare->add_option("--out", prepare_out, "Output directory")->required();

  // embeddings-info
  auto* emb_info = app.add_subcommand("embeddings-info", "Inspect an embedding file");
  std::string emb_path, emb_format;
  std::string vocab_path;
  emb_info->add_option("--emb", emb_path, "Embedding file")->required();
  emb_info->add_option("--format", emb_format, "glove-text or word2vec-binary")
      ->required()
      ->check(CLI::IsMember({"glove-text", "word2vec-binary"}));
  auto* vocab_opt = emb_info->add_option("--vocab", vocab_path,
                                         "Vocabulary file for coverage reporting");

  // cv
  auto* cv = app.add_subcommand("cv", "Run a cross-validation experiment");
  std::string config_path, cv_out = ".";
  bool save_checkpoints = false;
  std::string arch, cv_emb_format, cv_pos, cv_neg, cv_emb;
  bool dedup_on = false, dedup_off = false;
  int k = 0, jobs = 0, epochs = 0, batch_size = 0, eval_every = 0, patience = 0;
  std::uint64_t seed = 0;
  double lr = 0.0, dev_fraction = 0.0, max_norm = 0.0, dropout_p = 0.0;
  std::size_t filters = 0, vocab_size = 0, max_len_cap = 0;
  cv->add_option("--config", config_path, "Flat JSON experiment config");
  cv->add_option("--out", cv_out, "Output directory");
  cv->add_flag("--save-checkpoints", save_checkpoints, "Write per-fold checkpoints");
  auto* o_arch = cv->add_option("--arch", arch, "huynh or hughes")
                     ->check(CLI::IsMember({"huynh", "hughes"}));
  auto* o_pos = cv->add_option("--pos", cv_pos, "Positive corpus file");
  auto* o_neg = cv->add_option("--neg", cv_neg, "Negative corpus file");
  auto* o_emb = cv->add_option("--emb", cv_emb, "Embedding file");
  auto* o_fmt = cv->add_option("--emb-format", cv_emb_format,
                               "glove-text or word2vec-binary")
                    ->check(CLI::IsMember({"glove-text", "word2vec-binary"}));
  auto* o_dedup = cv->add_flag("--dedup", dedup_on, "De-duplicate sentences");
  auto* o_nodedup = cv->add_flag("--no-dedup", dedup_off, "Keep duplicated sentences");
  auto* o_k = cv->add_option("--k", k, "Fold count");
  auto* o_jobs = cv->add_option("--jobs", jobs, "Parallel fold workers");
  auto* o_seed = cv->add_option("--seed", seed, "Master RNG seed");
  auto* o_epochs = cv->add_option("--epochs", epochs);
  auto* o_batch = cv->add_option("--batch-size", batch_size);
  auto* o_eval = cv->add_option("--eval-every", eval_every);
  auto* o_patience = cv->add_option("--patience", patience);
  auto* o_lr = cv->add_option("--lr", lr);
  auto* o_devfrac = cv->add_option("--dev-fraction", dev_fraction);
  auto* o_maxnorm = cv->add_option("--max-norm", max_norm);
  auto* o_dropout = cv->add_option("--dropout", dropout_p);
  auto* o_filters = cv->add_option("--filters", filters);
  auto* o_vocab = cv->add_option("--vocab-size", vocab_size);
  auto* o_maxlen = cv->add_option("--max-len-cap", max_len_cap);

  // score
  auto* score = app.add_subcommand("score", "Score raw sentences");
  std::string ckpt_path, input_path;
  double threshold = 0.5;
  score->add_option("--checkpoint", ckpt_path, "Trained checkpoint")->required();
  score->add_option("--input", input_path, "One sentence per line")->required();
  score->add_option("--threshold", threshold, "Decision threshold")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (prepare->parsed())
      return cmd_prepare(pos_path, neg_path, !no_dedup, prepare_out);
    if (emb_info->parsed())
      return cmd_embeddings_info(
          emb_path, emb_format,
          vocab_opt->count() > 0 ? std::optional<std::string>(vocab_path) : std::nullopt);
    if (cv->parsed()) {
      adrcnn::ExperimentConfig cfg;
      if (!config_path.empty()) {
        auto in = open_input(config_path);
        std::string text((std::istreambuf_iterator<char>(in)),
                         std::istreambuf_iterator<char>());
        cfg = adrcnn::config_from_json(text);
      }
      if (o_arch->count()) cfg.architecture = adrcnn::architecture_from_name(arch);
      if (o_pos->count()) cfg.pos_file = cv_pos;
      if (o_neg->count()) cfg.neg_file = cv_neg;
      if (o_emb->count()) cfg.embedding_path = cv_emb;
      if (o_fmt->count())
        cfg.embedding_format = adrcnn::embedding_format_from_name(cv_emb_format);
      if (o_dedup->count()) cfg.deduplicate = true;
      if (o_nodedup->count()) cfg.deduplicate = false;
      if (o_k->count()) cfg.k = k;
      if (o_jobs->count()) cfg.jobs = jobs;
      if (o_seed->count()) cfg.seed = seed;
      if (o_epochs->count()) cfg.train.epochs = epochs;
      if (o_batch->count()) cfg.train.batch_size = batch_size;
      if (o_eval->count()) cfg.train.eval_every = eval_every;
      if (o_patience->count()) cfg.train.patience = patience;
      if (o_lr->count()) cfg.train.lr = lr;
      if (o_devfrac->count()) cfg.dev_fraction = dev_fraction;
      if (o_maxnorm->count()) cfg.train.max_norm = max_norm;
      if (o_dropout->count()) cfg.train.dropout_p = dropout_p;
      if (o_filters->count()) cfg.filters = filters;
      if (o_vocab->count()) cfg.vocab_size = vocab_size;
      if (o_maxlen->count()) cfg.max_len_cap = max_len_cap;
      return cmd_cv(cfg, cv_out, save_checkpoints);
    }
    if (score->parsed()) return cmd_score(ckpt_path, input_path, threshold);
  } catch (const adrcnn::IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const adrcnn::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitUsage;
}
