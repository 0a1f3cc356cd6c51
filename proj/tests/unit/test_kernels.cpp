#include <doctest.h>

#include <omp.h>

#include <cmath>
#include <numeric>
#include <random>

#include "helpers.hpp"
#include "visemelab/kernels.hpp"
#include "visemelab/model.hpp"

using namespace visemelab;

namespace {

ModelParams random_params(std::size_t classes, int dim, std::mt19937_64& rng, double scale) {
  std::normal_distribution<double> n(0.0, scale);
  ModelParams p;
  p.classes = classes;
  p.dim = dim;
  p.weights.resize(classes * dim);
  p.bias.resize(classes);
  for (auto& w : p.weights) w = n(rng);
  for (auto& b : p.bias) b = n(rng);
  return p;
}

FeatureDataset random_dataset(std::size_t classes, int dim, std::size_t frames,
                              std::mt19937_64& rng) {
  std::normal_distribution<float> n(0.0f, 1.0f);
  std::vector<std::uint32_t> labels(frames);
  std::vector<float> x(frames * dim);
  for (auto& l : labels) l = static_cast<std::uint32_t>(rng() % classes);
  for (auto& v : x) v = n(rng);
  return testing::make_dataset(dim, labels, x);
}

double loss_at(const ModelParams& p, const FeatureDataset& ds, const std::vector<std::size_t>& idx,
               const std::vector<double>& w) {
  Gradient g;
  batch_gradient_serial(p, ds, idx, w, g);
  return g.loss;
}

double norm(const std::vector<double>& v) {
  return std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0));
}

}  // namespace

TEST_CASE("softmax normalizes within 1e-9") {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> n(0.0, 1.0);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t k = 2 + rng() % 30;
    const double scale = trial % 5 == 0 ? 800.0 : 5.0;
    std::vector<double> z(k), p(k);
    for (auto& v : z) v = n(rng) * scale;
    softmax(z.data(), k, p.data());
    double sum = 0.0;
    for (double v : p) {
      CHECK(v >= 0.0);
      sum += v;
    }
    CHECK(std::abs(sum - 1.0) <= 1e-9);
  }
  std::vector<double> z = {1000.0, 1000.0}, p(2);
  softmax(z.data(), 2, p.data());
  CHECK(p[0] == doctest::Approx(0.5));
}

TEST_CASE("analytic gradient matches central differences on 50 random instances") {
  std::mt19937_64 rng(2024);
  const double h = 1e-5;
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t classes = 2 + rng() % 4;
    const int dim = 2 + static_cast<int>(rng() % 4);
    const std::size_t frames = 1 + rng() % 12;
    auto params = random_params(classes, dim, rng, 0.5);
    auto ds = random_dataset(classes, dim, frames, rng);
    std::vector<double> cw(classes);
    for (auto& w : cw) w = 0.5 + static_cast<double>(rng() % 100) / 50.0;
    std::vector<std::size_t> idx(frames);
    std::iota(idx.begin(), idx.end(), 0);

    Gradient g;
    batch_gradient_serial(params, ds, idx, cw, g);
    std::vector<double> analytic = g.weights, numeric;
    analytic.insert(analytic.end(), g.bias.begin(), g.bias.end());
    for (std::size_t i = 0; i < params.weights.size() + params.bias.size(); ++i) {
      auto plus = params, minus = params;
      double& a = i < params.weights.size() ? plus.weights[i] : plus.bias[i - params.weights.size()];
      double& b =
          i < params.weights.size() ? minus.weights[i] : minus.bias[i - params.weights.size()];
      a += h;
      b -= h;
      numeric.push_back((loss_at(plus, ds, idx, cw) - loss_at(minus, ds, idx, cw)) / (2 * h));
    }
    std::vector<double> diff(analytic.size());
    for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = analytic[i] - numeric[i];
    const double rel = norm(diff) / std::max(norm(analytic) + norm(numeric), 1e-12);
    CHECK(rel < 1e-4);
  }
}

TEST_CASE("parallel gradient agrees with the serial reference and ignores thread count") {
  std::mt19937_64 rng(9);
  auto params = random_params(7, 6, rng, 0.3);
  auto ds = random_dataset(7, 6, 1000, rng);
  std::vector<double> cw(7, 1.0);
  cw[3] = 2.5;
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < 1000; i += 1 + rng() % 3) idx.push_back(i);

  Gradient serial, par1, par4;
  batch_gradient_serial(params, ds, idx, cw, serial);
  omp_set_num_threads(1);
  batch_gradient(params, ds, idx, cw, par1);
  omp_set_num_threads(4);
  batch_gradient(params, ds, idx, cw, par4);

  CHECK(par1.weights == par4.weights);
  CHECK(par1.bias == par4.bias);
  CHECK(par1.loss == par4.loss);
  CHECK(par4.loss == doctest::Approx(serial.loss).epsilon(1e-12));
  for (std::size_t i = 0; i < serial.weights.size(); ++i) {
    CHECK(std::abs(par4.weights[i] - serial.weights[i]) < 1e-12);
  }
}

TEST_CASE("perfectly separating params score 1.0 everywhere") {
  // Class c sits on axis c, weights are the identity.
  std::vector<std::uint32_t> labels;
  std::vector<float> x;
  for (int rep = 0; rep < 5; ++rep) {
    for (std::uint32_t c = 0; c < 3; ++c) {
      labels.push_back(c);
      for (std::uint32_t j = 0; j < 3; ++j) x.push_back(j == c ? 1.0f : 0.0f);
    }
  }
  auto ds = testing::make_dataset(3, labels, x);
  ModelParams p;
  p.classes = 4;
  p.dim = 3;
  p.weights = {1, 0, 0, 0, 1, 0, 0, 0, 1, 0, 0, 0};
  p.bias = {0, 0, 0, -1};
  auto acc = evaluate(p, ds);
  for (std::size_t c = 0; c < 3; ++c) CHECK(acc.accuracy(c) == 1.0);
  CHECK_FALSE(acc.present(3));
  CHECK(acc.overall() == 1.0);
}

TEST_CASE("zero params predict class 0 under the tie rule") {
  std::mt19937_64 rng(4);
  auto ds = random_dataset(4, 3, 400, rng);
  ModelParams p;
  p.classes = 4;
  p.dim = 3;
  p.weights.assign(12, 0.0);
  p.bias.assign(4, 0.0);
  auto acc = evaluate(p, ds);
  const double share =
      static_cast<double>(std::count(ds.labels.begin(), ds.labels.end(), 0u)) / ds.num_frames();
  CHECK(acc.overall() == share);
  CHECK(acc.accuracy(0) == 1.0);
  for (std::size_t c = 1; c < 4; ++c) CHECK(acc.accuracy(c) == 0.0);
}

TEST_CASE("per-viseme counts match a brute-force recount") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    auto params = random_params(3, 4, rng, 1.0);
    auto ds = random_dataset(3, 4, 300, rng);
    std::vector<std::uint64_t> correct(3, 0), total(3, 0);
    for (std::size_t f = 0; f < ds.num_frames(); ++f) {
      std::size_t best = 0;
      double best_z = -1e300;
      for (std::size_t c = 0; c < 3; ++c) {
        double z = params.bias[c];
        for (int j = 0; j < 4; ++j) z += params.w(c, j) * ds.features[f * 4 + j];
        if (z > best_z) {
          best_z = z;
          best = c;
        }
      }
      ++total[ds.labels[f]];
      correct[ds.labels[f]] += best == ds.labels[f];
    }
    auto acc = evaluate(params, ds);
    auto ser = evaluate_serial(params, ds);
    CHECK(acc.correct == correct);
    CHECK(acc.total == total);
    CHECK(ser.correct == correct);
    for (std::size_t c = 0; c < 3; ++c) CHECK(acc.correct[c] <= acc.total[c]);
    const double overall = static_cast<double>(correct[0] + correct[1] + correct[2]) / 300.0;
    CHECK(acc.overall() == doctest::Approx(overall));
  }
}

TEST_CASE("evaluation rejects labels outside the head") {
  auto ds = testing::make_dataset(2, {5}, {0.0f, 0.0f});
  ModelParams p;
  p.classes = 2;
  p.dim = 2;
  p.weights.assign(4, 0.0);
  p.bias.assign(2, 0.0);
  CHECK_THROWS(evaluate(p, ds));
}

TEST_CASE("untrained models are at chance on balanced two-viseme data") {
  auto tables = parse_mapping_tables("en p p\ncmn p p\nen a a\ncmn a a\n");
  auto inv = build_inventory(InventoryScope::Merged(), tables);
  auto lex = parse_lexicon("PA p a\n", LanguageId::kEnglish);
  WordList list;
  list.entries.push_back({"PA", 20});
  auto corpus = build_labeled_corpus(list, lex, tables);
  GeneratorParams gp;
  gp.context_frames = 0;
  gp.min_frames = gp.max_frames = 3;
  double sum = 0.0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    auto model = make_confusability_model(inv, gp, seed);
    auto ds = generate_features(corpus, model, inv, seed);
    auto params = init_model(inv, gp.dim, seed);
    sum += evaluate(params, ds).overall();
  }
  const double mean = sum / 100.0;
  CHECK(mean > 0.4);
  CHECK(mean < 0.6);
}

TEST_CASE("model init is seeded and starts with zero bias") {
  const auto& b = testing::bundled();
  auto inv = build_inventory(InventoryScope::Merged(), b.tables);
  auto a = init_model(inv, 16, 3);
  auto c = init_model(inv, 16, 3);
  CHECK(a.weights == c.weights);
  CHECK(a.digest() == c.digest());
  CHECK(a.classes == inv.size());
  for (double x : a.bias) CHECK(x == 0.0);
  CHECK(init_model(inv, 16, 4).weights != a.weights);
  CHECK(a.all_finite());
}
