// SPDX-License-Identifier: Apache-2.0

#include "hge/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

namespace hge {

template <typename T>
bool Mat<T>::all_finite() const {
  for (T v : data_)
    if (!std::isfinite(static_cast<double>(v))) return false;
  return true;
}

template class Mat<float>;
template class Mat<double>;

template <typename T>
Mat<T> spmm(const NormalizedAdjacency& a, const Mat<T>& x) {
  require_shape(a.n_cols == x.rows(), "spmm: adjacency columns vs feature rows");
  Mat<T> out(a.n_rows, x.cols());
  const std::size_t d = x.cols();
  for (std::uint32_t i = 0; i < a.n_rows; ++i) {
    const std::uint64_t begin = a.offsets[i], end = a.offsets[i + 1];
    if (begin == end) continue;
    T* dst = out.row(i);
    for (std::uint64_t e = begin; e < end; ++e) {
      const T* src = x.row(a.cols[e]);
      for (std::size_t k = 0; k < d; ++k) dst[k] += src[k];
    }
    const T scale = T(1) / static_cast<T>(end - begin);
    for (std::size_t k = 0; k < d; ++k) dst[k] *= scale;
  }
  return out;
}

template <typename T>
Mat<T> spmm_transpose(const NormalizedAdjacency& a, const Mat<T>& grad) {
  require_shape(a.n_rows == grad.rows(), "spmm_transpose: adjacency rows vs gradient rows");
  Mat<T> out(a.n_cols, grad.cols());
  const std::size_t d = grad.cols();
  for (std::uint32_t i = 0; i < a.n_rows; ++i) {
    const std::uint64_t begin = a.offsets[i], end = a.offsets[i + 1];
    if (begin == end) continue;
    const T scale = T(1) / static_cast<T>(end - begin);
    const T* src = grad.row(i);
    for (std::uint64_t e = begin; e < end; ++e) {
      T* dst = out.row(a.cols[e]);
      for (std::size_t k = 0; k < d; ++k) dst[k] += scale * src[k];
    }
  }
  return out;
}

template <typename T>
Mat<T> matmul(const Mat<T>& x, const Mat<T>& w) {
  require_shape(x.cols() == w.rows(), "matmul: inner dimensions");
  Mat<T> out(x.rows(), w.cols());
  const std::size_t n = x.rows(), k_dim = x.cols(), m = w.cols();
  for (std::size_t i = 0; i < n; ++i) {
    const T* xi = x.row(i);
    T* oi = out.row(i);
    for (std::size_t k = 0; k < k_dim; ++k) {
      const T xv = xi[k];
      if (xv == T(0)) continue;
      const T* wk = w.row(k);
      for (std::size_t j = 0; j < m; ++j) oi[j] += xv * wk[j];
    }
  }
  return out;
}

template <typename T>
Mat<T> matmul_at(const Mat<T>& a, const Mat<T>& b) {
  require_shape(a.rows() == b.rows(), "matmul_at: row counts");
  Mat<T> out(a.cols(), b.cols());
  const std::size_t n = a.rows(), p = a.cols(), m = b.cols();
  for (std::size_t i = 0; i < n; ++i) {
    const T* ai = a.row(i);
    const T* bi = b.row(i);
    for (std::size_t k = 0; k < p; ++k) {
      const T av = ai[k];
      if (av == T(0)) continue;
      T* ok = out.row(k);
      for (std::size_t j = 0; j < m; ++j) ok[j] += av * bi[j];
    }
  }
  return out;
}

template <typename T>
Mat<T> matmul_bt(const Mat<T>& a, const Mat<T>& b) {
  require_shape(a.cols() == b.cols(), "matmul_bt: column counts");
  Mat<T> out(a.rows(), b.rows());
  const std::size_t n = a.rows(), k_dim = a.cols(), m = b.rows();
  for (std::size_t i = 0; i < n; ++i) {
    const T* ai = a.row(i);
    T* oi = out.row(i);
    for (std::size_t j = 0; j < m; ++j) {
      const T* bj = b.row(j);
      T acc = T(0);
      for (std::size_t k = 0; k < k_dim; ++k) acc += ai[k] * bj[k];
      oi[j] = acc;
    }
  }
  return out;
}

template <typename T>
void add_inplace(Mat<T>& dst, const Mat<T>& src) {
  require_shape(dst.same_shape(src), "add_inplace: shapes");
  T* d = dst.data();
  const T* s = src.data();
  for (std::size_t i = 0; i < dst.size(); ++i) d[i] += s[i];
}

template <typename T>
Mat<T> relu(const Mat<T>& x) {
  Mat<T> out(x.rows(), x.cols());
  const T* s = x.data();
  T* d = out.data();
  for (std::size_t i = 0; i < x.size(); ++i) d[i] = s[i] > T(0) ? s[i] : T(0);
  return out;
}

template <typename T>
Mat<T> relu_backward(const Mat<T>& grad, const Mat<T>& preact) {
  require_shape(grad.same_shape(preact), "relu_backward: shapes");
  Mat<T> out(grad.rows(), grad.cols());
  const T* g = grad.data();
  const T* p = preact.data();
  T* d = out.data();
  for (std::size_t i = 0; i < grad.size(); ++i) d[i] = p[i] > T(0) ? g[i] : T(0);
  return out;
}

template <typename T>
Mat<T> sigmoid(const Mat<T>& x) {
  Mat<T> out(x.rows(), x.cols());
  const T* s = x.data();
  T* d = out.data();
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double z = static_cast<double>(s[i]);
    double v;
    if (z >= 0.0) {
      v = 1.0 / (1.0 + std::exp(-z));
    } else {
      const double e = std::exp(z);
      v = e / (1.0 + e);
    }
    d[i] = static_cast<T>(v);
  }
  return out;
}

template <typename T>
Mat<T> dropout(const Mat<T>& x, double p, bool training, Rng& rng, Mat<T>* mask) {
  if (p < 0.0 || p >= 1.0) throw ConfigError("dropout probability must be in [0, 1)");
  if (!training || p == 0.0) {
    if (mask) {
      *mask = Mat<T>(x.rows(), x.cols(), T(1));
    }
    return x;
  }
  const T keep_scale = static_cast<T>(1.0 / (1.0 - p));
  Mat<T> m(x.rows(), x.cols());
  Mat<T> out(x.rows(), x.cols());
  const T* s = x.data();
  T* md = m.data();
  T* d = out.data();
  for (std::size_t i = 0; i < x.size(); ++i) {
    const bool keep = rng.next_unit() >= p;
    md[i] = keep ? keep_scale : T(0);
    d[i] = s[i] * md[i];
  }
  if (mask) *mask = std::move(m);
  return out;
}

namespace {
double softplus(double x) {
  // max(x,0) + log1p(exp(-|x|)) is stable over the whole range.
  return std::max(x, 0.0) + std::log1p(std::exp(-std::abs(x)));
}
}  // namespace

template <typename T>
BceResult<T> bce_with_logits(const Mat<T>& logits, const Mat<T>& labels) {
  require_shape(logits.same_shape(labels), "bce_with_logits: shapes");
  if (logits.size() == 0) throw ConfigError("bce_with_logits: empty batch");
  BceResult<T> res;
  res.grad = Mat<T>(logits.rows(), logits.cols());
  const T* z = logits.data();
  const T* y = labels.data();
  T* g = res.grad.data();
  const double inv_n = 1.0 / static_cast<double>(logits.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    const double zi = static_cast<double>(z[i]);
    const double yi = static_cast<double>(y[i]);
    acc += softplus(zi) - yi * zi;
    const double s = zi >= 0.0 ? 1.0 / (1.0 + std::exp(-zi)) : std::exp(zi) / (1.0 + std::exp(zi));
    g[i] = static_cast<T>((s - yi) * inv_n);
  }
  res.loss = acc * inv_n;
  return res;
}

template <typename T>
void adam_step(AdamState<T>& state, std::map<std::string, Mat<T>>& params,
               const std::map<std::string, Mat<T>>& grads) {
  state.step += 1;
  const double bc1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.step));
  const double bc2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.step));
  for (auto& [name, grad] : grads) {
    auto pit = params.find(name);
    if (pit == params.end()) throw ConfigError("adam_step: gradient for unknown parameter " + name);
    Mat<T>& param = pit->second;
    require_shape(param.same_shape(grad), "adam_step: parameter vs gradient");
    Mat<T>& m = state.m.try_emplace(name, param.rows(), param.cols()).first->second;
    Mat<T>& v = state.v.try_emplace(name, param.rows(), param.cols()).first->second;
    T* pm = m.data();
    T* pv = v.data();
    T* pp = param.data();
    const T* pg = grad.data();
    for (std::size_t i = 0; i < param.size(); ++i) {
      const double g = static_cast<double>(pg[i]);
      const double mi = state.beta1 * static_cast<double>(pm[i]) + (1.0 - state.beta1) * g;
      const double vi = state.beta2 * static_cast<double>(pv[i]) + (1.0 - state.beta2) * g * g;
      pm[i] = static_cast<T>(mi);
      pv[i] = static_cast<T>(vi);
      const double m_hat = mi / bc1;
      const double v_hat = vi / bc2;
      pp[i] = static_cast<T>(static_cast<double>(pp[i]) -
                             state.learning_rate * m_hat / (std::sqrt(v_hat) + state.epsilon));
    }
  }
}

double grad_check(const std::function<double(std::span<const double>)>& f,
                  std::span<const double> theta, std::span<const double> analytic, double eps) {
  if (theta.size() != analytic.size())
    throw ConfigError("grad_check: parameter and gradient sizes differ");
  std::vector<double> work(theta.begin(), theta.end());
  double worst = 0.0;
  for (std::size_t i = 0; i < work.size(); ++i) {
    const double orig = work[i];
    work[i] = orig + eps;
    const double f_plus = f(work);
    work[i] = orig - eps;
    const double f_minus = f(work);
    work[i] = orig;
    const double fd = (f_plus - f_minus) / (2.0 * eps);
    const double a = analytic[i];
    const double denom = std::max({1.0, std::abs(a), std::abs(fd)});
    worst = std::max(worst, std::abs(a - fd) / denom);
  }
  return worst;
}

#define HGE_INSTANTIATE(T)                                                              \
  template Mat<T> spmm<T>(const NormalizedAdjacency&, const Mat<T>&);                   \
  template Mat<T> spmm_transpose<T>(const NormalizedAdjacency&, const Mat<T>&);         \
  template Mat<T> matmul<T>(const Mat<T>&, const Mat<T>&);                              \
  template Mat<T> matmul_at<T>(const Mat<T>&, const Mat<T>&);                           \
  template Mat<T> matmul_bt<T>(const Mat<T>&, const Mat<T>&);                           \
  template void add_inplace<T>(Mat<T>&, const Mat<T>&);                                 \
  template Mat<T> relu<T>(const Mat<T>&);                                               \
  template Mat<T> relu_backward<T>(const Mat<T>&, const Mat<T>&);                       \
  template Mat<T> sigmoid<T>(const Mat<T>&);                                            \
  template Mat<T> dropout<T>(const Mat<T>&, double, bool, Rng&, Mat<T>*);               \
  template BceResult<T> bce_with_logits<T>(const Mat<T>&, const Mat<T>&);               \
  template void adam_step<T>(AdamState<T>&, std::map<std::string, Mat<T>>&,             \
                             const std::map<std::string, Mat<T>>&);

HGE_INSTANTIATE(float)
HGE_INSTANTIATE(double)

#undef HGE_INSTANTIATE

}  // namespace hge
