#include "adrcnn/layers.hpp"

#include <algorithm>
#include <cmath>

#include "adrcnn/errors.hpp"
#include "adrcnn/rng.hpp"

namespace adrcnn {

namespace {

// Left padding for same mode; the extra zero goes on the right.
std::size_t left_pad(const ConvFilterBank& bank, PadMode pad) {
  return pad == PadMode::Same ? (bank.window - 1) / 2 : 0;
}

std::size_t output_rows(std::size_t L, const ConvFilterBank& bank, PadMode pad) {
  if (pad == PadMode::Valid) {
    if (L < bank.window)
      throw InvalidArgument("conv1d: valid mode requires L >= window");
    return L - bank.window + 1;
  }
  return L;
}

}  // namespace

Matrix conv1d_forward(const Matrix& x, const ConvFilterBank& bank, PadMode pad) {
  if (x.cols != bank.in_channels)
    throw InvalidArgument("conv1d: input channels do not match filter bank");
  const std::size_t L = x.rows;
  const std::size_t F = bank.out_channels;
  const std::size_t offset = left_pad(bank, pad);
  Matrix out(output_rows(L, bank, pad), F);

  for (std::size_t t = 0; t < out.rows; ++t) {
    double* out_row = out.row(t);
    for (std::size_t f = 0; f < F; ++f) out_row[f] = bank.bias[f];
    for (std::size_t i = 0; i < bank.window; ++i) {
      const std::ptrdiff_t src = static_cast<std::ptrdiff_t>(t + i) -
                                 static_cast<std::ptrdiff_t>(offset);
      if (src < 0 || src >= static_cast<std::ptrdiff_t>(L)) continue;
      const double* x_row = x.row(static_cast<std::size_t>(src));
      const double* w_row = bank.weights.data() + i * bank.in_channels * F;
      for (std::size_t c = 0; c < bank.in_channels; ++c) {
        const double xv = x_row[c];
        if (xv == 0.0) continue;
        const double* w = w_row + c * F;
        for (std::size_t f = 0; f < F; ++f) out_row[f] += xv * w[f];
      }
    }
  }
  return out;
}

void conv1d_backward(const Matrix& x, const ConvFilterBank& bank, PadMode pad,
                     const Matrix& grad_out, Matrix* dx, ConvFilterBank* dbank) {
  const std::size_t L = x.rows;
  const std::size_t F = bank.out_channels;
  const std::size_t offset = left_pad(bank, pad);
  if (grad_out.rows != output_rows(L, bank, pad) || grad_out.cols != F)
    throw InvalidArgument("conv1d_backward: gradient shape mismatch");

  if (dx != nullptr && (dx->rows != L || dx->cols != x.cols)) *dx = Matrix(L, x.cols);
  if (dbank != nullptr && dbank->weights.size() != bank.weights.size())
    *dbank = ConvFilterBank(bank.window, bank.in_channels, bank.out_channels);

  for (std::size_t t = 0; t < grad_out.rows; ++t) {
    const double* g_row = grad_out.row(t);
    if (dbank != nullptr)
      for (std::size_t f = 0; f < F; ++f) dbank->bias[f] += g_row[f];
    for (std::size_t i = 0; i < bank.window; ++i) {
      const std::ptrdiff_t src = static_cast<std::ptrdiff_t>(t + i) -
                                 static_cast<std::ptrdiff_t>(offset);
      if (src < 0 || src >= static_cast<std::ptrdiff_t>(L)) continue;
      const double* x_row = x.row(static_cast<std::size_t>(src));
      for (std::size_t c = 0; c < bank.in_channels; ++c) {
        const double* w = bank.weights.data() + (i * bank.in_channels + c) * F;
        double acc = 0.0;
        for (std::size_t f = 0; f < F; ++f) acc += w[f] * g_row[f];
        if (dx != nullptr) dx->at(static_cast<std::size_t>(src), c) += acc;
        if (dbank != nullptr) {
          const double xv = x_row[c];
          if (xv == 0.0) continue;
          double* dw = dbank->weights.data() + (i * bank.in_channels + c) * F;
          for (std::size_t f = 0; f < F; ++f) dw[f] += xv * g_row[f];
        }
      }
    }
  }
}

Matrix relu_forward(const Matrix& x) {
  Matrix y(x.rows, x.cols);
  for (std::size_t i = 0; i < x.data.size(); ++i) y.data[i] = std::max(0.0, x.data[i]);
  return y;
}

Matrix relu_backward(const Matrix& x, const Matrix& grad_y) {
  Matrix dx(x.rows, x.cols);
  for (std::size_t i = 0; i < x.data.size(); ++i)
    dx.data[i] = x.data[i] > 0.0 ? grad_y.data[i] : 0.0;
  return dx;
}

PoolResult maxpool1d_forward(const Matrix& x, std::size_t window, std::size_t stride) {
  if (x.rows < 1) throw InvalidArgument("maxpool1d: empty input");
  if (window < 1 || stride < 1) throw InvalidArgument("maxpool1d: bad window/stride");
  const std::size_t out_rows = (x.rows + stride - 1) / stride;
  PoolResult res;
  res.y = Matrix(out_rows, x.cols);
  res.argmax.resize(out_rows * x.cols);
  for (std::size_t t = 0; t < out_rows; ++t) {
    const std::size_t begin = t * stride;
    const std::size_t end = std::min(begin + window, x.rows);
    for (std::size_t c = 0; c < x.cols; ++c) {
      double best = x.at(begin, c);
      std::size_t best_row = begin;
      for (std::size_t r = begin + 1; r < end; ++r) {
        if (x.at(r, c) > best) {
          best = x.at(r, c);
          best_row = r;
        }
      }
      res.y.at(t, c) = best;
      res.argmax[t * x.cols + c] = best_row;
    }
  }
  return res;
}

Matrix maxpool1d_backward(const PoolResult& pooled, std::size_t input_rows,
                          const Matrix& grad_y) {
  Matrix dx(input_rows, pooled.y.cols);
  for (std::size_t t = 0; t < pooled.y.rows; ++t)
    for (std::size_t c = 0; c < pooled.y.cols; ++c)
      dx.at(pooled.argmax[t * pooled.y.cols + c], c) += grad_y.at(t, c);
  return dx;
}

GlobalPoolResult global_maxpool_forward(const Matrix& x) {
  if (x.rows < 1) throw InvalidArgument("global_maxpool: empty input");
  GlobalPoolResult res;
  res.v.resize(x.cols);
  res.argmax.resize(x.cols);
  for (std::size_t c = 0; c < x.cols; ++c) {
    double best = x.at(0, c);
    std::size_t best_row = 0;
    for (std::size_t r = 1; r < x.rows; ++r) {
      if (x.at(r, c) > best) {
        best = x.at(r, c);
        best_row = r;
      }
    }
    res.v[c] = best;
    res.argmax[c] = best_row;
  }
  return res;
}

Matrix global_maxpool_backward(const GlobalPoolResult& pooled, std::size_t input_rows,
                               const std::vector<double>& grad_v) {
  Matrix dx(input_rows, pooled.v.size());
  for (std::size_t c = 0; c < pooled.v.size(); ++c)
    dx.at(pooled.argmax[c], c) += grad_v[c];
  return dx;
}

DropoutResult dropout(const std::vector<double>& v, double p, DropoutMode mode,
                      std::mt19937_64& rng) {
  if (!(p >= 0.0 && p < 1.0)) throw InvalidArgument("dropout: p must be in [0, 1)");
  DropoutResult res;
  res.values.resize(v.size());
  res.mask.resize(v.size());
  if (mode == DropoutMode::Infer || p == 0.0) {
    res.values = v;
    std::fill(res.mask.begin(), res.mask.end(), 1.0);
    return res;
  }
  const double scale = 1.0 / (1.0 - p);
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double keep = uniform_double(rng) >= p ? scale : 0.0;
    res.mask[i] = keep;
    res.values[i] = v[i] * keep;
  }
  return res;
}

std::vector<double> dropout_backward(const std::vector<double>& mask,
                                     const std::vector<double>& grad) {
  std::vector<double> out(grad.size());
  for (std::size_t i = 0; i < grad.size(); ++i) out[i] = grad[i] * mask[i];
  return out;
}

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

HeadResult head_forward(const std::vector<double>& v, const DenseHead& head) {
  if (v.size() != head.w.size())
    throw InvalidArgument("head_forward: feature width mismatch");
  double z = head.b;
  for (std::size_t i = 0; i < v.size(); ++i) z += v[i] * head.w[i];
  return {z, sigmoid(z)};
}

HeadGrads head_backward(const std::vector<double>& v, const DenseHead& head,
                        double dloss_dz) {
  HeadGrads g;
  g.dw.resize(v.size());
  g.dv.resize(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    g.dw[i] = v[i] * dloss_dz;
    g.dv[i] = head.w[i] * dloss_dz;
  }
  g.db = dloss_dz;
  return g;
}

}  // namespace adrcnn
