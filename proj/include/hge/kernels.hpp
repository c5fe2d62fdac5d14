// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "hge/matrix.hpp"
#include "hge/rng.hpp"

namespace hge {

// Row-normalized sparse adjacency in CSR form. Row i holds the sorted
// neighborhood of node i; aggregation scales each row by 1/degree(i).
// Rows with degree 0 aggregate to the zero vector.
struct NormalizedAdjacency {
  std::uint32_t n_rows = 0;
  std::uint32_t n_cols = 0;  // size of the node set the columns index into
  std::vector<std::uint64_t> offsets;  // n_rows + 1
  std::vector<std::uint32_t> cols;

  std::uint64_t degree(std::uint32_t row) const { return offsets[row + 1] - offsets[row]; }
};

// out[i] = (1/deg(i)) * sum_{j in row i} x[j]. Zero row for isolated i.
template <typename T>
Mat<T> spmm(const NormalizedAdjacency& a, const Mat<T>& x);

// Adjoint of spmm with respect to x: scatters each row gradient back to
// the columns it aggregated, with the same 1/deg(i) scale.
template <typename T>
Mat<T> spmm_transpose(const NormalizedAdjacency& a, const Mat<T>& grad);

template <typename T>
Mat<T> matmul(const Mat<T>& x, const Mat<T>& w);

// a^T * b, used for weight gradients.
template <typename T>
Mat<T> matmul_at(const Mat<T>& a, const Mat<T>& b);

// a * b^T, used for input gradients.
template <typename T>
Mat<T> matmul_bt(const Mat<T>& a, const Mat<T>& b);

template <typename T>
void add_inplace(Mat<T>& dst, const Mat<T>& src);

template <typename T>
Mat<T> relu(const Mat<T>& x);

// Passes grad where the forward pre-activation was > 0; the kink at 0
// takes the zero branch.
template <typename T>
Mat<T> relu_backward(const Mat<T>& grad, const Mat<T>& preact);

template <typename T>
Mat<T> sigmoid(const Mat<T>& x);

// Inverted dropout: entries zeroed with probability p, survivors scaled
// by 1/(1-p). Identity when not training or p == 0. Requires 0 <= p < 1.
// The survivor mask (already scaled) is written to *mask when non-null so
// the backward pass can reuse it.
template <typename T>
Mat<T> dropout(const Mat<T>& x, double p, bool training, Rng& rng, Mat<T>* mask = nullptr);

template <typename T>
struct BceResult {
  double loss = 0.0;   // mean over entries
  Mat<T> grad;         // d loss / d logits
};

// Numerically stable binary cross-entropy on logits with labels in {0,1}.
// loss = mean(softplus(z) - y*z); grad = (sigmoid(z) - y) / N.
template <typename T>
BceResult<T> bce_with_logits(const Mat<T>& logits, const Mat<T>& labels);

// Adaptive-momentum optimizer state for a named tensor collection.
template <typename T>
struct AdamState {
  double learning_rate = 1e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  std::uint64_t step = 0;
  std::map<std::string, Mat<T>> m;  // first moments, keyed like the params
  std::map<std::string, Mat<T>> v;  // second moments

  explicit AdamState(double lr = 1e-4) : learning_rate(lr) {}
};

// One bias-corrected update over all tensors present in grads. Moments are
// lazily created with the parameter shapes; the step counter increments once
// per call.
template <typename T>
void adam_step(AdamState<T>& state, std::map<std::string, Mat<T>>& params,
               const std::map<std::string, Mat<T>>& grads);

// Central-difference check: evaluates f at theta +/- eps per coordinate and
// returns max_i |analytic_i - fd_i| / max(1, |analytic_i|, |fd_i|).
// f must be a pure function of the parameter vector.
double grad_check(const std::function<double(std::span<const double>)>& f,
                  std::span<const double> theta, std::span<const double> analytic,
                  double eps = 1e-5);

}  // namespace hge
