// tests/test_pruner.cc

// Copyright 2026  The pasr authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include <cmath>

#include <doctest.h>

#include "pasr/common.hpp"
#include "pasr/pruner.hpp"
#include "pasr/world.hpp"

using namespace pasr;

namespace {

// Four weights total: W1 is 2x1, W2 is 1x2.
AcousticModel four_weight_model() {
  ModelDims d;
  d.context_radius = 0;
  d.hidden = 2;
  d.feat_dim = 1;
  d.n_outputs = 1;
  AcousticModel m(d);
  m.w1(0, 0) = 0.5;
  m.w1(1, 0) = -0.1;
  m.w2(0, 0) = 0.3;
  m.w2(0, 1) = -0.05;
  return m;
}

WorldConfig tiny_world_config() {
  WorldConfig c;
  c.feat_dim = 6;
  c.n_global_speakers = 3;
  c.global_words = 12;
  c.target_words = 8;
  return c;
}

ModelDims tiny_model_dims() {
  ModelDims d;
  d.context_radius = 1;
  d.hidden = 12;
  d.feat_dim = 6;
  d.n_outputs = 28;
  return d;
}

}  // namespace

TEST_CASE("magnitude pruning removes the smallest weights globally") {
  auto m = four_weight_model();
  magnitude_prune(m, 0.5);  // floor(0.5 * 4) = 2 zeros
  CHECK(m.w1(0, 0) == 0.5);
  CHECK(m.w1(1, 0) == 0.0);   // |-0.1| is second smallest
  CHECK(m.w2(0, 0) == 0.3);
  CHECK(m.w2(0, 1) == 0.0);   // |-0.05| is smallest
  REQUIRE(m.mask().has_value());
  CHECK(m.mask()->n_zeros() == 2);
  CHECK(m.mask()->keep == std::vector<bool>({true, false, true, false}));
}

TEST_CASE("zero count follows floor(target * n_weights)") {
  auto m = four_weight_model();
  magnitude_prune(m, 0.3);  // floor(1.2) = 1
  CHECK(m.mask()->n_zeros() == 1);
  CHECK(m.w2(0, 1) == 0.0);  // only the smallest goes
  CHECK(m.w1(1, 0) == -0.1);

  ModelDims big;
  auto big_model = AcousticModel::init(1, big);
  magnitude_prune(big_model, 0.3);
  const long n_w = big.n_weights();
  CHECK(big_model.mask()->n_zeros() ==
        static_cast<long>(std::floor(0.3 * static_cast<double>(n_w))));
  CHECK(big_model.effective_params() ==
        big.n_params() - big_model.mask()->n_zeros());
}

TEST_CASE("target zero is a no-op mask") {
  auto m = four_weight_model();
  magnitude_prune(m, 0.0);
  REQUIRE(m.mask().has_value());
  CHECK(m.mask()->n_zeros() == 0);
  CHECK(m.w1(0, 0) == 0.5);
  CHECK(m.w2(0, 1) == -0.05);
}

TEST_CASE("successive prunes nest and cannot back off") {
  auto m = four_weight_model();
  magnitude_prune(m, 0.3);
  const auto first = m.mask()->keep;
  magnitude_prune(m, 0.5);
  const auto second = m.mask()->keep;
  for (std::size_t i = 0; i < first.size(); ++i) {
    if (!first[i]) CHECK(!second[i]);  // once masked, always masked
  }
  CHECK(m.mask()->n_zeros() == 2);
  CHECK_THROWS_AS(magnitude_prune(m, 0.3), ConfigError);
  CHECK_THROWS_AS(magnitude_prune(m, 1.0), ConfigError);
  CHECK_THROWS_AS(magnitude_prune(m, -0.1), ConfigError);
}

TEST_CASE("pruned weights stay zero through training") {
  const World world = build_world(tiny_world_config(), 303);
  Rng rng = make_substream(303, "test/prune-data");
  const Dataset train = make_global_dataset(world, 6, Split::kTrain, rng);
  const Dataset val = make_global_dataset(world, 3, Split::kVal, rng);

  auto model = AcousticModel::init(303, tiny_model_dims());
  magnitude_prune(model, 0.5);
  const auto keep = model.mask()->keep;

  TrainConfig cfg;
  cfg.batch_size = 2;
  cfg.max_epochs = 2;
  cfg.seed = 303;
  train_global(model, train, val, cfg);

  const Eigen::VectorXd w = model.weight_vector();
  long still_zero = 0;
  for (long i = 0; i < w.size(); ++i) {
    if (!keep[i]) {
      CHECK(w[i] == 0.0);
      ++still_zero;
    }
  }
  CHECK(still_zero == model.mask()->n_zeros());
  // Unmasked weights did move.
  CHECK((model.flatten() - AcousticModel::init(303, tiny_model_dims())
                               .flatten())
            .cwiseAbs()
            .maxCoeff() > 0.0);
}

TEST_CASE("prune_and_finetune walks the schedule with nested masks") {
  const World world = build_world(tiny_world_config(), 307);
  Rng rng = make_substream(307, "test/prune-sched");
  const Dataset train = make_global_dataset(world, 6, Split::kTrain, rng);
  const Dataset val = make_global_dataset(world, 3, Split::kVal, rng);
  const auto model = AcousticModel::init(307, tiny_model_dims());

  PruneSchedule sched;
  sched.sparsities = {0.0, 0.4, 0.6};
  sched.finetune_epochs = 1;
  TrainConfig cfg;
  cfg.batch_size = 2;
  cfg.seed = 307;

  const auto stages = prune_and_finetune(model, sched, train, val, cfg);
  REQUIRE(stages.size() == 3);
  const long n_w = tiny_model_dims().n_weights();
  for (std::size_t i = 0; i < stages.size(); ++i) {
    const auto& st = stages[i];
    CHECK(st.target_sparsity == sched.sparsities[i]);
    const long want =
        static_cast<long>(std::floor(st.target_sparsity * n_w));
    CHECK(st.model.mask()->n_zeros() == want);
    CHECK(st.achieved_sparsity ==
          doctest::Approx(static_cast<double>(want) / n_w));
    CHECK(st.effective_params ==
          tiny_model_dims().n_params() - want);
    CHECK(st.report.val_wer.size() <= 1 + sched.finetune_epochs);
    if (i > 0) {
      const auto& prev = stages[i - 1].model.mask()->keep;
      const auto& cur = st.model.mask()->keep;
      for (std::size_t j = 0; j < prev.size(); ++j) {
        if (!prev[j]) CHECK(!cur[j]);
      }
    }
  }
}

TEST_CASE("schedule validation") {
  PruneSchedule s;
  s.validate();
  s.sparsities = {};
  CHECK_THROWS_AS(s.validate(), ConfigError);
  s.sparsities = {0.0, 0.5, 0.4};
  CHECK_THROWS_AS(s.validate(), ConfigError);
  s.sparsities = {0.0, 0.5, 0.5};
  CHECK_THROWS_AS(s.validate(), ConfigError);
  s.sparsities = {0.0, 1.0};
  CHECK_THROWS_AS(s.validate(), ConfigError);
  s.sparsities = {-0.1};
  CHECK_THROWS_AS(s.validate(), ConfigError);
  s.sparsities = {0.0, 0.85};
  s.finetune_epochs = -1;
  CHECK_THROWS_AS(s.validate(), ConfigError);
}
