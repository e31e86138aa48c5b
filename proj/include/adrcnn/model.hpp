#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "adrcnn/embeddings.hpp"
#include "adrcnn/layers.hpp"
#include "adrcnn/textprep.hpp"

namespace adrcnn {

enum class Architecture { Huynh, Hughes };

std::string architecture_name(Architecture arch);
Architecture architecture_from_name(const std::string& name);

// Paper defaults: Huynh uses one bank of 300 filters, Hughes four banks of
// 256; both use a 5 token window.
std::size_t default_filter_count(Architecture arch);
constexpr std::size_t kConvWindow = 5;

struct ModelParameters {
  Architecture arch = Architecture::Huynh;
  EmbeddingMatrix embedding;
  std::vector<ConvFilterBank> conv_banks;  // 1 (Huynh) or 4 (Hughes)
  DenseHead head;
  std::uint64_t init_seed = 0;
};

// Glorot-uniform conv and head weights, zero biases, seeded.
ModelParameters init_model(Architecture arch, EmbeddingMatrix embedding,
                           std::size_t filters, std::uint64_t seed);

// Throws naming the first layer whose shapes do not chain.
void validate_parameters(const ModelParameters& params);

// Everything backward needs from one forward pass.
struct ForwardCache {
  std::vector<int> indices;            // sentence token rows
  Matrix embedded;                     // L x M
  std::vector<Matrix> conv_inputs;     // input of each conv stage
  std::vector<Matrix> conv_preacts;    // pre-ReLU outputs
  std::optional<PoolResult> mid_pool;  // Hughes only
  std::size_t mid_pool_input_rows = 0;
  GlobalPoolResult global_pool;
  std::size_t global_pool_input_rows = 0;
  std::vector<double> v;               // sentence vector before dropout
  DropoutResult dropped;
  HeadResult head;
};

struct ConvBankGrads {
  std::vector<double> weights;
  std::vector<double> bias;
};

// Batch gradient accumulator.  Embedding gradients stay sparse: only rows
// touched by the batch appear.
struct ModelGradients {
  std::unordered_map<int, std::vector<double>> embedding_rows;
  std::vector<ConvBankGrads> banks;
  std::vector<double> head_w;
  double head_b = 0.0;

  static ModelGradients zeros_like(const ModelParameters& params);
};

// Row i of the result is the embedding row of index i.
Matrix embed_forward(const EncodedSentence& sentence, const EmbeddingMatrix& emb);

// Scatter-adds per-position gradients into the touched embedding rows;
// repeated indices accumulate.
void embed_backward(const std::vector<int>& indices, const Matrix& grad,
                    ModelGradients& grads);

double model_forward(const EncodedSentence& sentence, const ModelParameters& params,
                     DropoutMode mode, std::mt19937_64& rng, ForwardCache* cache,
                     double dropout_p = 0.5);

// Convenience for scoring: no cache, no dropout.
double model_score(const EncodedSentence& sentence, const ModelParameters& params);

// Accumulates exact gradients of the composition into `grads`.
void model_backward(const ModelParameters& params, const ForwardCache& cache,
                    double dloss_dz, ModelGradients& grads);

// Checkpoint: one-line JSON manifest (architecture, shapes, seed, vocabulary,
// encoding settings) followed by raw little-endian float64 blocks in manifest
// order.
struct Checkpoint {
  ModelParameters params;
  Vocabulary vocab;
  std::size_t max_len = 0;
  bool lowercase = false;
  double threshold = 0.5;
};

void save_checkpoint(std::ostream& out, const Checkpoint& ckpt);
Checkpoint load_checkpoint(std::istream& in);

}  // namespace adrcnn
