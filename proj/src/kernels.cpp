#include "visemelab/kernels.hpp"

#include <algorithm>
#include <cmath>

#include "visemelab/error.hpp"

namespace visemelab {

void softmax(const double* z, std::size_t n, double* p) {
  double m = z[0];
  for (std::size_t i = 1; i < n; ++i) m = std::max(m, z[i]);
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    p[i] = std::exp(z[i] - m);
    s += p[i];
  }
  for (std::size_t i = 0; i < n; ++i) p[i] /= s;
}

void Gradient::reset(std::size_t classes, int dim) {
  weights.assign(classes * dim, 0.0);
  bias.assign(classes, 0.0);
  loss = 0.0;
}

namespace {

void check_labels(const ModelParams& params, const FeatureDataset& ds) {
  if (ds.dim != params.dim) throw IncompatibleError("feature dimension does not match the model");
  if (ds.inventory_hash != params.inventory_hash) {
    throw IncompatibleError("dataset labels belong to a different inventory than the model");
  }
}

// Accumulates the unnormalised contribution of frames[begin, end).
void accumulate(const ModelParams& params, const FeatureDataset& ds,
                std::span<const std::size_t> frames, std::size_t begin, std::size_t end,
                const std::vector<double>& cw, Gradient& g, std::vector<double>& z) {
  const std::size_t K = params.classes;
  const int d = params.dim;
  std::vector<double> x(d);
  for (std::size_t n = begin; n < end; ++n) {
    std::size_t f = frames[n];
    const float* xf = &ds.features[f * d];
    for (int j = 0; j < d; ++j) x[j] = xf[j];
    std::uint32_t y = ds.labels[f];
    for (std::size_t c = 0; c < K; ++c) {
      const double* wc = &params.weights[c * d];
      double s = params.bias[c];
      for (int j = 0; j < d; ++j) s += wc[j] * x[j];
      z[c] = s;
    }
    double m = *std::max_element(z.begin(), z.end());
    double zy = z[y] - m;
    double sum = 0.0;
    for (std::size_t c = 0; c < K; ++c) {
      z[c] = std::exp(z[c] - m);
      sum += z[c];
    }
    double wy = cw[y];
    g.loss += wy * (std::log(sum) - zy);
    for (std::size_t c = 0; c < K; ++c) {
      double delta = wy * (z[c] / sum - (c == y ? 1.0 : 0.0));
      if (delta == 0.0) continue;
      double* gw = &g.weights[c * d];
      for (int j = 0; j < d; ++j) gw[j] += delta * x[j];
      g.bias[c] += delta;
    }
  }
}

void normalise(Gradient& g, std::size_t n) {
  if (n == 0) return;
  double inv = 1.0 / static_cast<double>(n);
  for (auto& v : g.weights) v *= inv;
  for (auto& v : g.bias) v *= inv;
  g.loss *= inv;
}

}  // namespace

void batch_gradient_serial(const ModelParams& params, const FeatureDataset& ds,
                           std::span<const std::size_t> frames,
                           const std::vector<double>& class_weights, Gradient& out) {
  check_labels(params, ds);
  out.reset(params.classes, params.dim);
  std::vector<double> z(params.classes);
  accumulate(params, ds, frames, 0, frames.size(), class_weights, out, z);
  normalise(out, frames.size());
}

void batch_gradient(const ModelParams& params, const FeatureDataset& ds,
                    std::span<const std::size_t> frames, const std::vector<double>& class_weights,
                    Gradient& out) {
  check_labels(params, ds);
  const std::size_t chunks = (frames.size() + kGradientChunk - 1) / kGradientChunk;
  if (chunks <= 1) {
    batch_gradient_serial(params, ds, frames, class_weights, out);
    return;
  }
  std::vector<Gradient> partial(chunks);
#pragma omp parallel
  {
    std::vector<double> z(params.classes);
#pragma omp for schedule(static)
    for (std::ptrdiff_t c = 0; c < static_cast<std::ptrdiff_t>(chunks); ++c) {
      partial[c].reset(params.classes, params.dim);
      std::size_t b = c * kGradientChunk;
      std::size_t e = std::min(frames.size(), b + kGradientChunk);
      accumulate(params, ds, frames, b, e, class_weights, partial[c], z);
    }
  }
  out = std::move(partial[0]);
  for (std::size_t c = 1; c < chunks; ++c) {
    for (std::size_t i = 0; i < out.weights.size(); ++i) out.weights[i] += partial[c].weights[i];
    for (std::size_t i = 0; i < out.bias.size(); ++i) out.bias[i] += partial[c].bias[i];
    out.loss += partial[c].loss;
  }
  normalise(out, frames.size());
}

double PerVisemeAccuracy::accuracy(std::size_t c) const {
  return total[c] ? static_cast<double>(correct[c]) / static_cast<double>(total[c]) : 0.0;
}

double PerVisemeAccuracy::overall() const {
  std::uint64_t c = 0, t = 0;
  for (std::size_t i = 0; i < total.size(); ++i) {
    c += correct[i];
    t += total[i];
  }
  return t ? static_cast<double>(c) / static_cast<double>(t) : 0.0;
}

namespace {

std::size_t predict(const ModelParams& params, const float* xf) {
  const int d = params.dim;
  std::size_t best = 0;
  double best_score = 0.0;
  for (std::size_t c = 0; c < params.classes; ++c) {
    const double* wc = &params.weights[c * d];
    double s = params.bias[c];
    for (int j = 0; j < d; ++j) s += wc[j] * static_cast<double>(xf[j]);
    if (c == 0 || s > best_score) {
      best = c;
      best_score = s;
    }
  }
  return best;
}

void check_eval(const ModelParams& params, const FeatureDataset& test) {
  check_labels(params, test);
  if (test.num_frames() == 0) throw EmptyInputError("test set is empty");
}

}  // namespace

PerVisemeAccuracy evaluate_serial(const ModelParams& params, const FeatureDataset& test) {
  check_eval(params, test);
  PerVisemeAccuracy acc;
  acc.correct.assign(params.classes, 0);
  acc.total.assign(params.classes, 0);
  for (std::size_t f = 0; f < test.num_frames(); ++f) {
    std::uint32_t y = test.labels[f];
    if (y >= params.classes) throw IncompatibleError("test label outside the model's inventory");
    ++acc.total[y];
    if (predict(params, &test.features[f * params.dim]) == y) ++acc.correct[y];
  }
  return acc;
}

PerVisemeAccuracy evaluate(const ModelParams& params, const FeatureDataset& test) {
  check_eval(params, test);
  const std::size_t K = params.classes;
  const auto n = static_cast<std::ptrdiff_t>(test.num_frames());
  std::vector<std::uint32_t> pred(test.num_frames());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t f = 0; f < n; ++f) {
    pred[f] = static_cast<std::uint32_t>(predict(params, &test.features[f * params.dim]));
  }
  PerVisemeAccuracy acc;
  acc.correct.assign(K, 0);
  acc.total.assign(K, 0);
  for (std::ptrdiff_t f = 0; f < n; ++f) {
    std::uint32_t y = test.labels[f];
    if (y >= K) throw IncompatibleError("test label outside the model's inventory");
    ++acc.total[y];
    if (pred[f] == y) ++acc.correct[y];
  }
  return acc;
}

}  // namespace visemelab
