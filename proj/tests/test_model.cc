// tests/test_model.cc

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

#include <cstdio>
#include <filesystem>
#include <random>

#include <doctest.h>

#include "oracles.hpp"
#include "pasr/common.hpp"
#include "pasr/ctc.hpp"
#include "pasr/model.hpp"

using namespace pasr;

namespace {

ModelDims tiny_dims() {
  ModelDims d;
  d.context_radius = 1;
  d.hidden = 5;
  d.feat_dim = 3;
  d.n_outputs = 4;
  return d;
}

Eigen::MatrixXd random_frames(int T, int D, Rng& rng) {
  std::normal_distribution<double> unit(0.0, 1.0);
  Eigen::MatrixXd f(T, D);
  for (int t = 0; t < T; ++t) {
    for (int d = 0; d < D; ++d) f(t, d) = unit(rng);
  }
  return f;
}

}  // namespace

TEST_CASE("dims bookkeeping") {
  const ModelDims d = tiny_dims();
  CHECK(d.input_dim() == 9);
  CHECK(d.n_weights() == 9 * 5 + 5 * 4);
  CHECK(d.n_params() == 9 * 5 + 5 + 5 * 4 + 4);
}

TEST_CASE("init is deterministic in the seed") {
  const auto a = AcousticModel::init(11, tiny_dims());
  const auto b = AcousticModel::init(11, tiny_dims());
  const auto c = AcousticModel::init(12, tiny_dims());
  CHECK((a.flatten() - b.flatten()).cwiseAbs().maxCoeff() == 0.0);
  CHECK((a.flatten() - c.flatten()).cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("init scales weights by 1/sqrt(fan_in) and zeroes biases") {
  ModelDims d;
  d.context_radius = 2;
  d.hidden = 64;
  d.feat_dim = 16;
  d.n_outputs = 28;
  const auto m = AcousticModel::init(3, d);
  CHECK(m.b1.cwiseAbs().maxCoeff() == 0.0);
  CHECK(m.b2.cwiseAbs().maxCoeff() == 0.0);
  // Sample std of W1 entries should be near 1/sqrt(80).
  const double std1 = std::sqrt(m.w1.array().square().mean());
  CHECK(std1 == doctest::Approx(1.0 / std::sqrt(80.0)).epsilon(0.1));
}

TEST_CASE("forward emits one logit row per frame") {
  Rng rng = make_substream(5, "model/fwd");
  const auto m = AcousticModel::init(5, tiny_dims());
  const auto logits = m.forward(random_frames(7, 3, rng));
  CHECK(logits.rows() == 7);
  CHECK(logits.cols() == 4);
}

TEST_CASE("forward zero-pads outside the sequence") {
  // With all-zero frames every window input is zero, so all logit rows equal
  // the bias path; a single nonzero frame must affect exactly the rows whose
  // window covers it.
  const auto m = AcousticModel::init(6, tiny_dims());
  Eigen::MatrixXd frames = Eigen::MatrixXd::Zero(6, 3);
  const auto base = m.forward(frames);
  for (int t = 1; t < 6; ++t) {
    CHECK((base.row(t) - base.row(0)).cwiseAbs().maxCoeff() == 0.0);
  }
  frames(3, 1) = 1.0;  // radius 1: windows of frames 2, 3, 4 see it
  const auto bumped = m.forward(frames);
  for (int t = 0; t < 6; ++t) {
    const double delta = (bumped.row(t) - base.row(t)).cwiseAbs().maxCoeff();
    if (t >= 2 && t <= 4) {
      CHECK(delta > 0.0);
    } else {
      CHECK(delta == 0.0);
    }
  }
}

TEST_CASE("flatten/unflatten round trip in canonical order") {
  const auto m = AcousticModel::init(21, tiny_dims());
  const ParamVector p = m.flatten();
  CHECK(p.size() == tiny_dims().n_params());
  // W1 row-major comes first.
  CHECK(p[0] == m.w1(0, 0));
  CHECK(p[1] == m.w1(0, 1));
  CHECK(p[tiny_dims().input_dim()] == m.w1(1, 0));
  // b1 follows W1.
  CHECK(p[5 * 9] == m.b1[0]);
  // W2 row-major after b1, b2 last.
  CHECK(p[5 * 9 + 5] == m.w2(0, 0));
  CHECK(p[tiny_dims().n_params() - 4] == m.b2[0]);

  AcousticModel copy(tiny_dims());
  copy.unflatten(p);
  CHECK((copy.flatten() - p).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("model gradient matches finite differences end to end") {
  Rng rng = make_substream(404, "model/fd");
  int done = 0;
  while (done < 50) {
    const auto m = AcousticModel::init(1000 + done, tiny_dims());
    std::uniform_int_distribution<int> t_dist(3, 6);
    std::uniform_int_distribution<int> c_dist(1, 2);
    std::uniform_int_distribution<int> sym(1, 3);
    const int T = t_dist(rng);
    std::vector<int> label(c_dist(rng));
    for (int& s : label) s = sym(rng);
    if (T < min_frames_required(label)) continue;
    const auto frames = random_frames(T, 3, rng);

    const auto res = ctc_loss(m.forward(frames), label);
    const ParamVector analytic = m.backward(frames, res.grad);
    const ParamVector fd = oracle::model_grad_fd(m, frames, label);
    double worst = 0.0;
    for (long i = 0; i < analytic.size(); ++i) {
      worst = std::max(worst, oracle::rel_err(analytic[i], fd[i]));
    }
    CHECK(worst < 1e-4);
    ++done;
  }
}

TEST_CASE("apply_mask zeroes weights and survives gradient masking") {
  Rng rng = make_substream(8, "model/mask");
  auto m = AcousticModel::init(8, tiny_dims());
  const long n_w = tiny_dims().n_weights();
  PruneMask mask;
  mask.keep.assign(n_w, true);
  mask.keep[0] = false;        // W1(0,0)
  mask.keep[n_w - 1] = false;  // W2 last entry
  m.apply_mask(mask);
  CHECK(m.w1(0, 0) == 0.0);
  CHECK(m.w2(3, 4) == 0.0);
  CHECK(m.effective_params() == tiny_dims().n_params() - 2);

  const auto frames = random_frames(5, 3, rng);
  const auto res = ctc_loss(m.forward(frames), {1, 2});
  const ParamVector g = m.backward(frames, res.grad);
  CHECK(g[0] == 0.0);                              // masked W1 coordinate
  CHECK(g[m.last_layer_span().first + 5 * 4 - 1] == 0.0);  // masked W2 coord
}

TEST_CASE("last_layer_span addresses W2 and b2") {
  const auto m = AcousticModel::init(2, tiny_dims());
  const auto [start, len] = m.last_layer_span();
  CHECK(start == 9 * 5 + 5);
  CHECK(len == 5 * 4 + 4);
  const ParamVector p = m.flatten();
  CHECK(p[start] == m.w2(0, 0));
}

TEST_CASE("weight_vector excludes biases and shares mask indexing") {
  auto m = AcousticModel::init(14, tiny_dims());
  const Eigen::VectorXd w = m.weight_vector();
  CHECK(w.size() == tiny_dims().n_weights());
  CHECK(w[0] == m.w1(0, 0));
  CHECK(w[w.size() - 1] == m.w2(3, 4));
}

TEST_CASE("checkpoint round trip preserves parameters and mask") {
  namespace fs = std::filesystem;
  const fs::path path = fs::temp_directory_path() / "pasr_test_model.ckpt";
  auto m = AcousticModel::init(99, tiny_dims());
  PruneMask mask;
  mask.keep.assign(tiny_dims().n_weights(), true);
  for (int i = 0; i < 10; ++i) mask.keep[i * 3] = false;
  m.apply_mask(mask);

  save_checkpoint(m, path);
  const auto loaded = load_checkpoint(path);
  CHECK((loaded.flatten() - m.flatten()).cwiseAbs().maxCoeff() == 0.0);
  REQUIRE(loaded.mask().has_value());
  CHECK(loaded.mask()->keep == m.mask()->keep);
  CHECK(loaded.dims().hidden == tiny_dims().hidden);
  fs::remove(path);
}

TEST_CASE("checkpoint without mask round trips as maskless") {
  namespace fs = std::filesystem;
  const fs::path path = fs::temp_directory_path() / "pasr_test_model2.ckpt";
  const auto m = AcousticModel::init(7, tiny_dims());
  save_checkpoint(m, path);
  const auto loaded = load_checkpoint(path);
  CHECK(!loaded.mask().has_value());
  CHECK((loaded.flatten() - m.flatten()).cwiseAbs().maxCoeff() == 0.0);
  fs::remove(path);
}

TEST_CASE("load_checkpoint rejects garbage") {
  namespace fs = std::filesystem;
  const fs::path path = fs::temp_directory_path() / "pasr_test_bad.ckpt";
  {
    std::FILE* f = std::fopen(path.c_str(), "wb");
    REQUIRE(f);
    std::fputs("not a checkpoint", f);
    std::fclose(f);
  }
  CHECK_THROWS_AS(load_checkpoint(path), ConfigError);
  CHECK_THROWS_AS(load_checkpoint("/nonexistent/nowhere.ckpt"), ConfigError);
  fs::remove(path);
}
