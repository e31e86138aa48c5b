// Python bindings for the main pipeline operations.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <fstream>
#include <sstream>

#include "adrcnn/corpus.hpp"
#include "adrcnn/embeddings.hpp"
#include "adrcnn/errors.hpp"
#include "adrcnn/experiment.hpp"
#include "adrcnn/metrics.hpp"
#include "adrcnn/model.hpp"
#include "adrcnn/textprep.hpp"
#include "adrcnn/train.hpp"

namespace py = pybind11;
using namespace adrcnn;

namespace {

std::ifstream checked_open(const std::string& path, bool binary) {
  std::ifstream in(path, binary ? std::ios::binary : std::ios::in);
  if (!in) throw IoError("cannot open file: " + path);
  return in;
}

PretrainedLexicon load_lexicon(const std::string& path, const std::string& format) {
  const EmbeddingFormat fmt = embedding_format_from_name(format);
  auto in = checked_open(path, fmt == EmbeddingFormat::Word2vecBinary);
  return fmt == EmbeddingFormat::GloveText ? load_glove_text(in)
                                           : load_word2vec_binary(in);
}

py::dict metrics_dict(const MetricsReport& m) {
  py::dict d;
  d["accuracy"] = m.accuracy;
  d["precision"] = m.precision;
  d["recall"] = m.recall;
  d["f1"] = m.f1;
  d["specificity"] = m.specificity;
  d["auroc"] = m.auroc;
  return d;
}

// Checkpoint-backed sentence scorer.
class Scorer {
 public:
  explicit Scorer(const std::string& checkpoint_path) {
    auto in = checked_open(checkpoint_path, true);
    ckpt_ = load_checkpoint(in);
  }

  double score(const std::string& sentence) const {
    std::string cleaned = clean_text(sentence);
    if (ckpt_.lowercase)
      for (char& c : cleaned)
        c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    const EncodedSentence enc = encode(tokenize(cleaned), ckpt_.vocab, ckpt_.max_len);
    return model_score(enc, ckpt_.params);
  }

  std::vector<double> score_many(const std::vector<std::string>& sentences) const {
    std::vector<double> out;
    out.reserve(sentences.size());
    for (const auto& s : sentences) out.push_back(score(s));
    return out;
  }

  std::string architecture() const { return architecture_name(ckpt_.params.arch); }
  double threshold() const { return ckpt_.threshold; }
  std::size_t max_len() const { return ckpt_.max_len; }

 private:
  Checkpoint ckpt_;
};

}  // namespace

PYBIND11_MODULE(_adrcnn, m) {
  m.doc() = "ADR sentence classification: corpus prep, text encoding, metrics "
            "and cross-validation experiments";

  py::register_exception<IoError>(m, "IoError");
  py::register_exception<ParseError>(m, "ParseError");

  m.def("clean_text", [](const std::string& raw) { return clean_text(raw); },
        py::arg("raw"));
  m.def("tokenize", &tokenize, py::arg("cleaned"));

  m.def(
      "load_corpus",
      [](const std::string& pos_path, const std::string& neg_path, bool dedup) {
        auto pos = checked_open(pos_path, false);
        auto neg = checked_open(neg_path, false);
        auto records = load_ade_corpus(pos, neg);
        CorpusStats stats;
        if (dedup) {
          auto [kept, s] = deduplicate(records);
          records = std::move(kept);
          stats = s;
        } else {
          stats = raw_corpus_stats(records);
        }
        py::list rows;
        for (const auto& rec : records) {
          py::dict d;
          d["id"] = rec.id;
          d["pmid"] = rec.pmid;
          d["text"] = rec.text;
          d["label"] = rec.positive ? 1 : 0;
          rows.append(d);
        }
        py::dict stats_dict;
        stats_dict["raw_positive_lines"] = stats.raw_positive_lines;
        stats_dict["unique_positive"] = stats.unique_positive;
        stats_dict["negative"] = stats.negative;
        stats_dict["conflicts_resolved"] = stats.conflicts_resolved;
        return py::make_tuple(rows, stats_dict);
      },
      py::arg("pos_path"), py::arg("neg_path"), py::arg("dedup") = true);

  m.def(
      "embedding_info",
      [](const std::string& path, const std::string& format) {
        const PretrainedLexicon lexicon = load_lexicon(path, format);
        py::dict d;
        d["dim"] = lexicon.dim();
        d["entries"] = lexicon.size();
        d["skipped_lines"] = lexicon.skipped_lines();
        d["duplicate_tokens"] = lexicon.duplicate_tokens();
        return d;
      },
      py::arg("path"), py::arg("format"));

  m.def("confusion",
        [](const std::vector<double>& scores, const std::vector<int>& labels,
           double tau) {
          const ConfusionCounts c = confusion(scores, labels, tau);
          py::dict d;
          d["tp"] = c.tp;
          d["fp"] = c.fp;
          d["tn"] = c.tn;
          d["fn"] = c.fn;
          return d;
        },
        py::arg("scores"), py::arg("labels"), py::arg("tau"));

  m.def("point_metrics",
        [](long tp, long fp, long tn, long fn) {
          return metrics_dict(point_metrics({tp, fp, tn, fn}));
        },
        py::arg("tp"), py::arg("fp"), py::arg("tn"), py::arg("fn"));

  m.def("auroc", &auroc, py::arg("scores"), py::arg("labels"));

  m.def("select_threshold",
        [](const std::vector<double>& scores, const std::vector<int>& labels) {
          const ThresholdChoice choice = select_threshold(scores, labels);
          return py::make_tuple(choice.threshold, choice.f1);
        },
        py::arg("scores"), py::arg("labels"));

  m.def(
      "run_experiment",
      [](const std::string& config_json) {
        const ExperimentConfig cfg = config_from_json(config_json);
        AggregateReport report;
        {
          py::gil_scoped_release release;
          report = run_experiment(cfg);
        }
        py::dict d;
        d["mean"] = metrics_dict(report.mean);
        d["std"] = metrics_dict(report.stddev);
        py::list folds;
        for (const auto& f : report.folds) {
          py::dict fd;
          fd["fold_index"] = f.fold_index;
          fd["metrics"] = metrics_dict(f.test_metrics);
          fd["dev_f1"] = f.dev_f1;
          fd["threshold"] = f.threshold;
          fd["batches_trained"] = f.batches_trained;
          fd["pad_row_drift"] = f.pad_row_drift;
          folds.append(fd);
        }
        d["folds"] = folds;
        d["report_json"] = report_to_json(report);
        return d;
      },
      py::arg("config_json"));

  py::class_<Scorer>(m, "Scorer")
      .def(py::init<const std::string&>(), py::arg("checkpoint_path"))
      .def("score", &Scorer::score, py::arg("sentence"))
      .def("score_many", &Scorer::score_many, py::arg("sentences"))
      .def_property_readonly("architecture", &Scorer::architecture)
      .def_property_readonly("threshold", &Scorer::threshold)
      .def_property_readonly("max_len", &Scorer::max_len);
}
