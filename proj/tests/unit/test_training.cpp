#include <doctest.h>

#include <omp.h>

#include <numeric>

#include "helpers.hpp"
#include "visemelab/error.hpp"
#include "visemelab/kernels.hpp"
#include "visemelab/model.hpp"
#include "visemelab/training.hpp"

using namespace visemelab;

namespace {

struct Setup {
  VisemeInventory inventory;
  FeatureDataset train;
  FeatureDataset test;
};

Setup small_setup(std::uint64_t seed) {
  const auto& b = testing::bundled();
  Setup s;
  s.inventory = build_inventory(InventoryScope::Of(LanguageId::kEnglish), b.tables);
  auto corpus = split_corpus(b.corpora.of(LanguageId::kEnglish), {0.25, seed});
  auto model = make_confusability_model(s.inventory, {}, seed);
  s.train = generate_features(corpus, model, s.inventory, seed);
  s.test = generate_test_features(corpus, model, s.inventory, seed + 1, 1);
  return s;
}

}  // namespace

TEST_CASE("training config validation") {
  TrainingConfig c;
  CHECK_NOTHROW(c.validate());
  c.learning_rate = -1;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = {};
  c.batch_size = 0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = {};
  c.convergence_patience = 0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
}

TEST_CASE("learning rate decays inversely with the update count") {
  TrainingConfig c;
  c.learning_rate = 0.1;
  c.lr_decay = 0.5;
  CHECK(c.learning_rate_at(0) == 0.1);
  CHECK(c.learning_rate_at(2) == doctest::Approx(0.05));
  c.lr_decay = 0.0;
  CHECK(c.learning_rate_at(1000) == 0.1);
}

TEST_CASE("balanced class weights") {
  auto ds = testing::make_dataset(1, {0, 0, 0, 1, 2, 2}, {0, 0, 0, 0, 0, 0});
  auto w = class_weights(ds, 4, true);
  // N / (K * n_c) with N = 6, K = 3.
  CHECK(w[0] == doctest::Approx(6.0 / 9.0));
  CHECK(w[1] == doctest::Approx(2.0));
  CHECK(w[2] == doctest::Approx(1.0));
  CHECK(w[3] == 0.0);
  auto flat = class_weights(ds, 4, false);
  CHECK(flat[0] == 1.0);
  CHECK(flat[3] == 0.0);
}

TEST_CASE("zero learning rate leaves the params untouched") {
  auto s = small_setup(3);
  TrainingConfig c;
  c.learning_rate = 0.0;
  auto p0 = init_model(s.inventory, s.train.dim, 3);
  auto p1 = train_epoch(p0, s.train, c, 1);
  CHECK(p1.weights == p0.weights);
  CHECK(p1.bias == p0.bias);
}

TEST_CASE("single-example descent never increases the loss") {
  auto ds = testing::make_dataset(3, {1}, {0.5f, -1.0f, 2.0f});
  ModelParams p;
  p.classes = 3;
  p.dim = 3;
  p.weights = {0.3, -0.2, 0.1, 0.0, 0.4, -0.5, 0.2, 0.2, 0.2};
  p.bias = {0.1, 0.0, -0.1};
  TrainingConfig c;
  c.learning_rate = 0.01;
  c.lr_decay = 0.0;
  c.batch_size = 1;
  std::vector<double> w = {1.0, 1.0, 1.0};
  std::vector<std::size_t> idx = {0};
  Gradient g;
  batch_gradient_serial(p, ds, idx, w, g);
  double prev = g.loss;
  for (int epoch = 1; epoch <= 50; ++epoch) {
    train_epoch_inplace(p, ds, c, epoch, w, epoch - 1);
    batch_gradient_serial(p, ds, idx, w, g);
    CHECK(g.loss <= prev);
    prev = g.loss;
  }
}

TEST_CASE("training is deterministic and independent of thread count") {
  auto s = small_setup(5);
  TrainingConfig c;
  c.seed = 5;
  auto p0 = init_model(s.inventory, s.train.dim, 5);
  omp_set_num_threads(1);
  auto a = train_epoch(train_epoch(p0, s.train, c, 1), s.train, c, 2);
  omp_set_num_threads(4);
  auto b = train_epoch(train_epoch(p0, s.train, c, 1), s.train, c, 2);
  CHECK(a.digest() == b.digest());
  CHECK(a.weights == b.weights);
  CHECK(evaluate(a, s.test).overall() > evaluate(p0, s.test).overall());
}

TEST_CASE("pure and in-place epochs agree") {
  auto s = small_setup(6);
  TrainingConfig c;
  c.seed = 6;
  auto p = init_model(s.inventory, s.train.dim, 6);
  auto pure = train_epoch(train_epoch(p, s.train, c, 1), s.train, c, 2);
  auto w = class_weights(s.train, p.classes, c.class_balanced);
  const auto per = updates_per_epoch(s.train, c);
  train_epoch_inplace(p, s.train, c, 1, w, 0);
  train_epoch_inplace(p, s.train, c, 2, w, per);
  CHECK(p.weights == pure.weights);
}

TEST_CASE("exploding updates raise a numeric error") {
  auto s = small_setup(7);
  TrainingConfig c;
  c.learning_rate = 1e305;
  c.lr_decay = 0.0;
  auto p = init_model(s.inventory, s.train.dim, 7);
  CHECK_THROWS_AS(train_epoch(p, s.train, c, 1), NumericError);
}

TEST_CASE("mismatched data is refused before training") {
  auto s = small_setup(8);
  auto p = init_model(s.inventory, s.train.dim, 8);
  auto other = s.train;
  other.inventory_hash ^= 1;
  CHECK_THROWS_AS(check_training_data(p, other), IncompatibleError);
  other = s.train;
  other.labels[0] = static_cast<std::uint32_t>(p.classes);
  CHECK_THROWS_AS(check_training_data(p, other), IncompatibleError);
}

TEST_CASE("convergence rule") {
  CHECK_FALSE(detect_convergence_online({0.1, 0.2, 0.3, 0.4, 0.5}, 0.005, 3));
  CHECK(detect_convergence_online({0.4, 0.4, 0.4, 0.4}, 0.005, 3));
  const std::vector<double> trace = {0.50, 0.70, 0.71, 0.712, 0.713};
  CHECK(detect_convergence_online(trace, 0.005, 3));
  for (std::size_t n = 1; n < trace.size(); ++n) {
    CHECK_FALSE(detect_convergence_online({trace.begin(), trace.begin() + n}, 0.005, 3));
  }
  CHECK_FALSE(detect_convergence_online({0.4, 0.4, 0.4}, 0.005, 3));
}
