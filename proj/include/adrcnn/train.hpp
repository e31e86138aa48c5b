#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "adrcnn/model.hpp"

namespace adrcnn {

struct TrainConfig {
  int epochs = 8;
  int batch_size = 50;
  double max_norm = 9.0;      // per-filter L2 cap, applied after each batch
  int eval_every = 10;        // dev evaluations, in batches
  int patience = 6;           // consecutive non-improving evaluations
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  double dropout_p = 0.5;
  std::uint64_t seed = 42;
};

// First/second moment accumulators mirroring ModelParameters.  Embedding
// moments are dense but only rows touched by a batch are advanced; bias
// correction always uses the global step counter.
struct AdamState {
  long t = 0;
  std::vector<double> emb_m, emb_u;
  struct BankState {
    std::vector<double> w_m, w_u, b_m, b_u;
  };
  std::vector<BankState> banks;
  std::vector<double> head_w_m, head_w_u;
  double head_b_m = 0.0, head_b_u = 0.0;

  static AdamState zeros_like(const ModelParameters& params);
};

// Parameters kept at the best dev F1 seen so far.
struct Snapshot {
  ModelParameters params;
  double threshold = 0.5;
  double dev_f1 = 0.0;
  long batch_index = 0;
};

// One dev evaluation, as written to the training log.
struct EvalRecord {
  long batch_index = 0;
  double dev_loss = 0.0;
  double dev_f1 = 0.0;
  double threshold = 0.0;
  int patience_counter = 0;
};

// Average negative log-likelihood; probabilities are clamped to
// [1e-12, 1 - 1e-12] before the logs.
double cross_entropy(const std::vector<double>& yhat, const std::vector<int>& labels);

// dL/dz for the fused sigmoid + cross entropy: (yhat_i - y_i) / N.
std::vector<double> loss_grad_logit(const std::vector<double>& yhat,
                                    const std::vector<int>& labels);

// Bias-corrected Adam update.  Throws NumericError on non-finite gradients.
void adam_step(ModelParameters& params, const ModelGradients& grads, AdamState& state,
               const TrainConfig& cfg);

// Rescales any conv filter whose L2 norm (bias excluded) exceeds s.
void max_norm_clip(std::vector<ConvFilterBank>& banks, double s);

// F1-optimal decision threshold over the distinct dev scores; prediction rule
// is score >= tau.  Ties on F1 break toward the larger tau.
struct ThresholdChoice {
  double threshold = 0.5;
  double f1 = 0.0;
};
ThresholdChoice select_threshold(const std::vector<double>& scores,
                                 const std::vector<int>& labels);

// Full early-stopping loop: seeded per-epoch shuffles, batches of
// cfg.batch_size (final partial batch included), Adam + max-norm after every
// batch, dev evaluation every cfg.eval_every batches.  Returns the snapshot
// with the best dev F1; if the budget ends before any evaluation, one final
// evaluation is taken.
Snapshot train_fold(const std::vector<EncodedSentence>& train_x,
                    const std::vector<int>& train_y,
                    const std::vector<EncodedSentence>& dev_x,
                    const std::vector<int>& dev_y, const ModelParameters& init,
                    const TrainConfig& cfg,
                    const std::function<void(const EvalRecord&)>& log = {});

}  // namespace adrcnn
