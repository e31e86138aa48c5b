#pragma once

#include <cstddef>
#include <random>
#include <vector>

namespace adrcnn {

// Row-major value grid used for layer activations (rows = sequence
// positions, cols = channels).
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c, double fill = 0.0)
      : rows(r), cols(c), data(r * c, fill) {}

  double& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  double at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
  const double* row(std::size_t r) const { return data.data() + r * cols; }
  double* row(std::size_t r) { return data.data() + r * cols; }
};

// Bank of F 1D filters over a w-token window and C input channels.
// weights laid out [window][in_channel][filter], contiguous in filter.
struct ConvFilterBank {
  std::size_t window = 0;
  std::size_t in_channels = 0;
  std::size_t out_channels = 0;
  std::vector<double> weights;  // window * in_channels * out_channels
  std::vector<double> bias;     // out_channels

  ConvFilterBank() = default;
  ConvFilterBank(std::size_t w, std::size_t c, std::size_t f)
      : window(w), in_channels(c), out_channels(f), weights(w * c * f, 0.0), bias(f, 0.0) {}

  double& w(std::size_t i, std::size_t c, std::size_t f) {
    return weights[(i * in_channels + c) * out_channels + f];
  }
  double w(std::size_t i, std::size_t c, std::size_t f) const {
    return weights[(i * in_channels + c) * out_channels + f];
  }
};

// Logistic classification head: z = v.w + b, yhat = sigmoid(z).
struct DenseHead {
  std::vector<double> w;
  double b = 0.0;
};

enum class PadMode { Valid, Same };

// valid: L' = L - w + 1 (requires L >= w).
// same:  L' = L with symmetric zero padding, the extra zero on the right
//        when w - 1 is odd.
Matrix conv1d_forward(const Matrix& x, const ConvFilterBank& bank, PadMode pad);
void conv1d_backward(const Matrix& x, const ConvFilterBank& bank, PadMode pad,
                     const Matrix& grad_out, Matrix* dx, ConvFilterBank* dbank);

Matrix relu_forward(const Matrix& x);
// Gradient passes where x > 0; the derivative at exactly 0 is 0.
Matrix relu_backward(const Matrix& x, const Matrix& grad_y);

// Non-overlapping window max with the final partial window pooled over its
// remainder; ties break to the first position.  argmax holds, per output
// cell, the input row that produced the max.
struct PoolResult {
  Matrix y;
  std::vector<std::size_t> argmax;  // y.rows * y.cols entries
};
PoolResult maxpool1d_forward(const Matrix& x, std::size_t window, std::size_t stride);
Matrix maxpool1d_backward(const PoolResult& pooled, std::size_t input_rows,
                          const Matrix& grad_y);

struct GlobalPoolResult {
  std::vector<double> v;            // per-channel max
  std::vector<std::size_t> argmax;  // per-channel input row
};
GlobalPoolResult global_maxpool_forward(const Matrix& x);
Matrix global_maxpool_backward(const GlobalPoolResult& pooled, std::size_t input_rows,
                               const std::vector<double>& grad_v);

enum class DropoutMode { Train, Infer };

// Inverted dropout: each component is zeroed with probability p and the
// survivors are scaled by 1/(1-p).  The returned mask already carries the
// scale, so backward is an elementwise product with it.
struct DropoutResult {
  std::vector<double> values;
  std::vector<double> mask;  // 0 or 1/(1-p)
};
DropoutResult dropout(const std::vector<double>& v, double p, DropoutMode mode,
                      std::mt19937_64& rng);
std::vector<double> dropout_backward(const std::vector<double>& mask,
                                     const std::vector<double>& grad);

struct HeadResult {
  double logit = 0.0;
  double yhat = 0.0;
};
HeadResult head_forward(const std::vector<double>& v, const DenseHead& head);
struct HeadGrads {
  std::vector<double> dw;
  double db = 0.0;
  std::vector<double> dv;
};
HeadGrads head_backward(const std::vector<double>& v, const DenseHead& head,
                        double dloss_dz);

// Numerically stable logistic function.
double sigmoid(double z);

}  // namespace adrcnn
