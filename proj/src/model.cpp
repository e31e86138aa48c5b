#include "adrcnn/model.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <istream>
#include <ostream>

#include "adrcnn/errors.hpp"
#include "adrcnn/rng.hpp"
#include "json.hpp"

namespace adrcnn {

std::string architecture_name(Architecture arch) {
  return arch == Architecture::Huynh ? "huynh" : "hughes";
}

Architecture architecture_from_name(const std::string& name) {
  if (name == "huynh") return Architecture::Huynh;
  if (name == "hughes") return Architecture::Hughes;
  throw InvalidArgument("unknown architecture \"" + name + "\"");
}

std::size_t default_filter_count(Architecture arch) {
  return arch == Architecture::Huynh ? 300 : 256;
}

namespace {

void glorot_fill(std::vector<double>& weights, std::size_t fan_in, std::size_t fan_out,
                 std::mt19937_64& rng) {
  const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
  for (double& w : weights) w = uniform_double(rng, -limit, limit);
}

}  // namespace

ModelParameters init_model(Architecture arch, EmbeddingMatrix embedding,
                           std::size_t filters, std::uint64_t seed) {
  if (filters == 0) filters = default_filter_count(arch);
  ModelParameters params;
  params.arch = arch;
  params.embedding = std::move(embedding);
  params.init_seed = seed;

  const std::size_t M = params.embedding.cols;
  std::mt19937_64 rng(seed);
  auto add_bank = [&](std::size_t in_channels) {
    ConvFilterBank bank(kConvWindow, in_channels, filters);
    glorot_fill(bank.weights, kConvWindow * in_channels, kConvWindow * filters, rng);
    params.conv_banks.push_back(std::move(bank));
  };
  add_bank(M);
  if (arch == Architecture::Hughes)
    for (int i = 0; i < 3; ++i) add_bank(filters);

  params.head.w.resize(filters);
  glorot_fill(params.head.w, filters, 1, rng);
  params.head.b = 0.0;
  return params;
}

void validate_parameters(const ModelParameters& params) {
  const std::size_t expected_banks = params.arch == Architecture::Huynh ? 1 : 4;
  if (params.conv_banks.size() != expected_banks)
    throw InvalidArgument("model: " + architecture_name(params.arch) + " expects " +
                          std::to_string(expected_banks) + " conv banks");
  for (std::size_t i = 0; i < params.conv_banks.size(); ++i) {
    const auto& bank = params.conv_banks[i];
    const std::size_t expected_in = i == 0 ? params.embedding.cols
                                           : params.conv_banks[i - 1].out_channels;
    if (bank.in_channels != expected_in)
      throw InvalidArgument("model: conv bank " + std::to_string(i) +
                            " input channels do not chain");
    if (bank.window < 1 || bank.out_channels < 1 ||
        bank.weights.size() != bank.window * bank.in_channels * bank.out_channels ||
        bank.bias.size() != bank.out_channels)
      throw InvalidArgument("model: conv bank " + std::to_string(i) + " is malformed");
  }
  if (params.head.w.size() != params.conv_banks.back().out_channels)
    throw InvalidArgument("model: head width does not match final conv bank");
  if (params.embedding.values.size() != params.embedding.rows * params.embedding.cols)
    throw InvalidArgument("model: embedding value count does not match shape");
}

ModelGradients ModelGradients::zeros_like(const ModelParameters& params) {
  ModelGradients g;
  g.banks.resize(params.conv_banks.size());
  for (std::size_t i = 0; i < params.conv_banks.size(); ++i) {
    g.banks[i].weights.assign(params.conv_banks[i].weights.size(), 0.0);
    g.banks[i].bias.assign(params.conv_banks[i].bias.size(), 0.0);
  }
  g.head_w.assign(params.head.w.size(), 0.0);
  g.head_b = 0.0;
  return g;
}

Matrix embed_forward(const EncodedSentence& sentence, const EmbeddingMatrix& emb) {
  Matrix out(sentence.indices.size(), emb.cols);
  for (std::size_t i = 0; i < sentence.indices.size(); ++i) {
    const int idx = sentence.indices[i];
    if (idx < 0 || static_cast<std::size_t>(idx) >= emb.rows)
      throw InvalidArgument("embed: index out of range");
    std::memcpy(out.row(i), emb.row(static_cast<std::size_t>(idx)),
                emb.cols * sizeof(double));
  }
  return out;
}

void embed_backward(const std::vector<int>& indices, const Matrix& grad,
                    ModelGradients& grads) {
  for (std::size_t i = 0; i < indices.size(); ++i) {
    auto& row = grads.embedding_rows[indices[i]];
    if (row.empty()) row.assign(grad.cols, 0.0);
    const double* src = grad.row(i);
    for (std::size_t c = 0; c < grad.cols; ++c) row[c] += src[c];
  }
}

double model_forward(const EncodedSentence& sentence, const ModelParameters& params,
                     DropoutMode mode, std::mt19937_64& rng, ForwardCache* cache,
                     double dropout_p) {
  validate_parameters(params);
  ForwardCache local;
  ForwardCache& cc = cache != nullptr ? *cache : local;
  cc = ForwardCache{};
  cc.indices = sentence.indices;
  cc.embedded = embed_forward(sentence, params.embedding);

  if (params.arch == Architecture::Huynh) {
    cc.conv_inputs.push_back(cc.embedded);
    cc.conv_preacts.push_back(
        conv1d_forward(cc.conv_inputs[0], params.conv_banks[0], PadMode::Valid));
    Matrix activated = relu_forward(cc.conv_preacts[0]);
    cc.global_pool_input_rows = activated.rows;
    cc.global_pool = global_maxpool_forward(activated);
  } else {
    Matrix activated;
    for (std::size_t stage = 0; stage < 4; ++stage) {
      if (stage == 2) {
        cc.mid_pool_input_rows = activated.rows;
        cc.mid_pool = maxpool1d_forward(activated, 5, 5);
        activated = cc.mid_pool->y;
      }
      cc.conv_inputs.push_back(stage == 0 ? cc.embedded : activated);
      cc.conv_preacts.push_back(
          conv1d_forward(cc.conv_inputs[stage], params.conv_banks[stage], PadMode::Same));
      activated = relu_forward(cc.conv_preacts[stage]);
    }
    cc.global_pool_input_rows = activated.rows;
    cc.global_pool = global_maxpool_forward(activated);
  }

  cc.v = cc.global_pool.v;
  cc.dropped = dropout(cc.v, dropout_p, mode, rng);
  cc.head = head_forward(cc.dropped.values, params.head);
  return cc.head.yhat;
}

double model_score(const EncodedSentence& sentence, const ModelParameters& params) {
  std::mt19937_64 rng(0);
  return model_forward(sentence, params, DropoutMode::Infer, rng, nullptr);
}

namespace {

void add_bank_grads(const ConvFilterBank& dbank, ConvBankGrads& out) {
  for (std::size_t i = 0; i < dbank.weights.size(); ++i) out.weights[i] += dbank.weights[i];
  for (std::size_t i = 0; i < dbank.bias.size(); ++i) out.bias[i] += dbank.bias[i];
}

}  // namespace

void model_backward(const ModelParameters& params, const ForwardCache& cache,
                    double dloss_dz, ModelGradients& grads) {
  if (grads.banks.size() != params.conv_banks.size())
    grads = ModelGradients::zeros_like(params);

  const HeadGrads hg = head_backward(cache.dropped.values, params.head, dloss_dz);
  for (std::size_t i = 0; i < hg.dw.size(); ++i) grads.head_w[i] += hg.dw[i];
  grads.head_b += hg.db;

  const std::vector<double> dv = dropout_backward(cache.dropped.mask, hg.dv);
  Matrix grad = global_maxpool_backward(cache.global_pool, cache.global_pool_input_rows, dv);

  if (params.arch == Architecture::Huynh) {
    grad = relu_backward(cache.conv_preacts[0], grad);
    Matrix dembedded;
    ConvFilterBank dbank;
    conv1d_backward(cache.conv_inputs[0], params.conv_banks[0], PadMode::Valid, grad,
                    &dembedded, &dbank);
    add_bank_grads(dbank, grads.banks[0]);
    embed_backward(cache.indices, dembedded, grads);
    return;
  }

  for (int stage = 3; stage >= 0; --stage) {
    grad = relu_backward(cache.conv_preacts[static_cast<std::size_t>(stage)], grad);
    Matrix dx;
    ConvFilterBank dbank;
    conv1d_backward(cache.conv_inputs[static_cast<std::size_t>(stage)],
                    params.conv_banks[static_cast<std::size_t>(stage)], PadMode::Same,
                    grad, &dx, &dbank);
    add_bank_grads(dbank, grads.banks[static_cast<std::size_t>(stage)]);
    if (stage == 2)
      dx = maxpool1d_backward(*cache.mid_pool, cache.mid_pool_input_rows, dx);
    if (stage == 0)
      embed_backward(cache.indices, dx, grads);
    else
      grad = std::move(dx);
  }
}

}  // namespace adrcnn
