#include "adrcnn/train.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "adrcnn/errors.hpp"
#include "adrcnn/rng.hpp"

namespace adrcnn {

namespace {
constexpr double kProbEps = 1e-12;
}

double cross_entropy(const std::vector<double>& yhat, const std::vector<int>& labels) {
  if (yhat.empty() || yhat.size() != labels.size())
    throw InvalidArgument("cross_entropy: size mismatch or empty input");
  double total = 0.0;
  for (std::size_t i = 0; i < yhat.size(); ++i) {
    const double p = std::clamp(yhat[i], kProbEps, 1.0 - kProbEps);
    total += labels[i] != 0 ? std::log(p) : std::log(1.0 - p);
  }
  return -total / static_cast<double>(yhat.size());
}

std::vector<double> loss_grad_logit(const std::vector<double>& yhat,
                                    const std::vector<int>& labels) {
  if (yhat.empty() || yhat.size() != labels.size())
    throw InvalidArgument("loss_grad_logit: size mismatch or empty input");
  std::vector<double> grad(yhat.size());
  const double inv_n = 1.0 / static_cast<double>(yhat.size());
  for (std::size_t i = 0; i < yhat.size(); ++i)
    grad[i] = (yhat[i] - static_cast<double>(labels[i])) * inv_n;
  return grad;
}

AdamState AdamState::zeros_like(const ModelParameters& params) {
  AdamState s;
  s.emb_m.assign(params.embedding.values.size(), 0.0);
  s.emb_u.assign(params.embedding.values.size(), 0.0);
  s.banks.resize(params.conv_banks.size());
  for (std::size_t i = 0; i < params.conv_banks.size(); ++i) {
    s.banks[i].w_m.assign(params.conv_banks[i].weights.size(), 0.0);
    s.banks[i].w_u.assign(params.conv_banks[i].weights.size(), 0.0);
    s.banks[i].b_m.assign(params.conv_banks[i].bias.size(), 0.0);
    s.banks[i].b_u.assign(params.conv_banks[i].bias.size(), 0.0);
  }
  s.head_w_m.assign(params.head.w.size(), 0.0);
  s.head_w_u.assign(params.head.w.size(), 0.0);
  return s;
}

namespace {

struct AdamScale {
  double lr, beta1, beta2, eps;
  double m_corr, u_corr;
};

inline void adam_update(double& theta, double& m, double& u, double g,
                        const AdamScale& k) {
  if (!std::isfinite(g)) throw NumericError("adam_step: non-finite gradient component");
  m = k.beta1 * m + (1.0 - k.beta1) * g;
  u = k.beta2 * u + (1.0 - k.beta2) * g * g;
  const double m_hat = m / k.m_corr;
  const double u_hat = u / k.u_corr;
  theta -= k.lr * m_hat / (std::sqrt(u_hat) + k.eps);
}

}  // namespace

void adam_step(ModelParameters& params, const ModelGradients& grads, AdamState& state,
               const TrainConfig& cfg) {
  ++state.t;
  const AdamScale k{cfg.lr, cfg.beta1, cfg.beta2, cfg.epsilon,
                    1.0 - std::pow(cfg.beta1, static_cast<double>(state.t)),
                    1.0 - std::pow(cfg.beta2, static_cast<double>(state.t))};

  for (const auto& [row, grad] : grads.embedding_rows) {
    const std::size_t base = static_cast<std::size_t>(row) * params.embedding.cols;
    for (std::size_t c = 0; c < grad.size(); ++c)
      adam_update(params.embedding.values[base + c], state.emb_m[base + c],
                  state.emb_u[base + c], grad[c], k);
  }
  for (std::size_t b = 0; b < params.conv_banks.size(); ++b) {
    auto& bank = params.conv_banks[b];
    auto& bs = state.banks[b];
    const auto& g = grads.banks[b];
    for (std::size_t i = 0; i < bank.weights.size(); ++i)
      adam_update(bank.weights[i], bs.w_m[i], bs.w_u[i], g.weights[i], k);
    for (std::size_t i = 0; i < bank.bias.size(); ++i)
      adam_update(bank.bias[i], bs.b_m[i], bs.b_u[i], g.bias[i], k);
  }
  for (std::size_t i = 0; i < params.head.w.size(); ++i)
    adam_update(params.head.w[i], state.head_w_m[i], state.head_w_u[i], grads.head_w[i], k);
  adam_update(params.head.b, state.head_b_m, state.head_b_u, grads.head_b, k);
}

void max_norm_clip(std::vector<ConvFilterBank>& banks, double s) {
  if (!(s > 0.0)) throw InvalidArgument("max_norm_clip: s must be positive");
  for (auto& bank : banks) {
    for (std::size_t f = 0; f < bank.out_channels; ++f) {
      double sq = 0.0;
      for (std::size_t i = 0; i < bank.window; ++i)
        for (std::size_t c = 0; c < bank.in_channels; ++c) {
          const double w = bank.w(i, c, f);
          sq += w * w;
        }
      const double norm = std::sqrt(sq);
      if (norm > s) {
        const double scale = s / norm;
        for (std::size_t i = 0; i < bank.window; ++i)
          for (std::size_t c = 0; c < bank.in_channels; ++c) bank.w(i, c, f) *= scale;
      }
    }
  }
}

ThresholdChoice select_threshold(const std::vector<double>& scores,
                                 const std::vector<int>& labels) {
  if (scores.empty() || scores.size() != labels.size())
    throw InvalidArgument("select_threshold: size mismatch or empty input");
  const long total_pos = std::count_if(labels.begin(), labels.end(),
                                       [](int y) { return y != 0; });
  if (total_pos == 0)
    throw InvalidArgument("select_threshold: dev set has no positive labels");

  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

  // Sweep candidates in descending order; at candidate tau every example with
  // score >= tau is predicted positive.  Strict improvement keeps the larger
  // tau on F1 ties.
  ThresholdChoice best{scores[order[0]], -1.0};
  long tp = 0, fp = 0;
  std::size_t i = 0;
  while (i < order.size()) {
    const double tau = scores[order[i]];
    while (i < order.size() && scores[order[i]] == tau) {
      if (labels[order[i]] != 0)
        ++tp;
      else
        ++fp;
      ++i;
    }
    const long fn = total_pos - tp;
    const double denom = static_cast<double>(2 * tp + fp + fn);
    const double f1 = denom > 0.0 ? 2.0 * static_cast<double>(tp) / denom : 0.0;
    if (f1 > best.f1) best = {tau, f1};
  }
  return best;
}

namespace {

struct DevEval {
  double loss;
  ThresholdChoice choice;
};

DevEval evaluate_dev(const ModelParameters& params,
                     const std::vector<EncodedSentence>& dev_x,
                     const std::vector<int>& dev_y) {
  std::vector<double> scores(dev_x.size());
  for (std::size_t i = 0; i < dev_x.size(); ++i) scores[i] = model_score(dev_x[i], params);
  return {cross_entropy(scores, dev_y), select_threshold(scores, dev_y)};
}

}  // namespace

Snapshot train_fold(const std::vector<EncodedSentence>& train_x,
                    const std::vector<int>& train_y,
                    const std::vector<EncodedSentence>& dev_x,
                    const std::vector<int>& dev_y, const ModelParameters& init,
                    const TrainConfig& cfg,
                    const std::function<void(const EvalRecord&)>& log) {
  if (train_x.empty() || train_x.size() != train_y.size())
    throw InvalidArgument("train_fold: bad training set");
  if (dev_x.empty() || dev_x.size() != dev_y.size())
    throw InvalidArgument("train_fold: bad dev set");
  if (std::count_if(dev_y.begin(), dev_y.end(), [](int y) { return y != 0; }) == 0)
    throw InvalidArgument("train_fold: dev set needs at least one positive");

  ModelParameters params = init;
  AdamState adam = AdamState::zeros_like(params);
  std::mt19937_64 shuffle_rng(derive_seed(cfg.seed, 0, 0x5f1e));
  std::mt19937_64 dropout_rng(derive_seed(cfg.seed, 1, 0xd407));

  Snapshot best;
  bool have_best = false;
  int patience_counter = 0;
  long batch_index = 0;
  bool stopped = false;

  std::vector<std::size_t> order(train_x.size());
  std::iota(order.begin(), order.end(), 0);

  ForwardCache cache;
  for (int epoch = 0; epoch < cfg.epochs && !stopped; ++epoch) {
    deterministic_shuffle(order, shuffle_rng);
    for (std::size_t start = 0; start < order.size() && !stopped;
         start += static_cast<std::size_t>(cfg.batch_size)) {
      const std::size_t end =
          std::min(order.size(), start + static_cast<std::size_t>(cfg.batch_size));
      const std::size_t n = end - start;

      ModelGradients grads = ModelGradients::zeros_like(params);
      std::vector<double> yhat(n);
      std::vector<int> labels(n);
      std::vector<const EncodedSentence*> batch(n);
      for (std::size_t j = 0; j < n; ++j) {
        batch[j] = &train_x[order[start + j]];
        labels[j] = train_y[order[start + j]];
      }
      for (std::size_t j = 0; j < n; ++j) {
        yhat[j] = model_forward(*batch[j], params, DropoutMode::Train, dropout_rng,
                                &cache, cfg.dropout_p);
        const double dz = (yhat[j] - static_cast<double>(labels[j])) /
                          static_cast<double>(n);
        model_backward(params, cache, dz, grads);
      }

      try {
        adam_step(params, grads, adam, cfg);
      } catch (const NumericError& e) {
        throw NumericError(std::string(e.what()) + " at batch " +
                           std::to_string(batch_index + 1));
      }
      max_norm_clip(params.conv_banks, cfg.max_norm);
      ++batch_index;

      if (batch_index % cfg.eval_every == 0) {
        const DevEval eval = evaluate_dev(params, dev_x, dev_y);
        if (!have_best || eval.choice.f1 > best.dev_f1) {
          best = {params, eval.choice.threshold, eval.choice.f1, batch_index};
          have_best = true;
          patience_counter = 0;
        } else {
          ++patience_counter;
        }
        if (log)
          log({batch_index, eval.loss, eval.choice.f1, eval.choice.threshold,
               patience_counter});
        if (patience_counter >= cfg.patience) stopped = true;
      }
    }
  }

  if (!have_best) {
    const DevEval eval = evaluate_dev(params, dev_x, dev_y);
    best = {params, eval.choice.threshold, eval.choice.f1, batch_index};
    if (log) log({batch_index, eval.loss, eval.choice.f1, eval.choice.threshold, 0});
  }
  return best;
}

}  // namespace adrcnn
