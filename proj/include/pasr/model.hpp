// include/pasr/model.hpp

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

#ifndef PASR_MODEL_HPP_
#define PASR_MODEL_HPP_

#include <Eigen/Core>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include "pasr/common.hpp"
#include "pasr/ctc.hpp"

namespace pasr {

// Canonical flattened parameter order: W1 row-major, b1, W2 row-major, b2.
using ParamVector = Eigen::VectorXd;

struct ModelDims {
  int context_radius = 2;  // frames of context on each side
  int hidden = 64;
  int feat_dim = 16;
  int n_outputs = 28;  // blank + non-blank tokens

  int input_dim() const { return feat_dim * (2 * context_radius + 1); }
  long n_weights() const {
    return static_cast<long>(hidden) * input_dim() +
           static_cast<long>(n_outputs) * hidden;
  }
  long n_params() const { return n_weights() + hidden + n_outputs; }
  bool operator==(const ModelDims&) const = default;
};

// One bit per weight of W1 and W2 (biases are never pruned); true = kept.
struct PruneMask {
  std::vector<bool> keep;

  long n_zeros() const;
  double sparsity() const {
    return keep.empty() ? 0.0
                        : static_cast<double>(n_zeros()) /
                              static_cast<double>(keep.size());
  }
};

// Per-frame logit network: each frame's input is the concatenation of the
// frames in a fixed window around it (zero padded at the ends), followed by
// one ReLU hidden layer and a linear output layer.
class AcousticModel {
 public:
  AcousticModel() = default;
  explicit AcousticModel(const ModelDims& dims);  // zero parameters

  // Weights ~ N(0, 1/fan_in), biases zero.  Deterministic given seed.
  static AcousticModel init(std::uint64_t seed, const ModelDims& dims);

  const ModelDims& dims() const { return dims_; }

  LogitSequence forward(const Eigen::MatrixXd& frames) const;

  // Gradient of a scalar loss w.r.t. all parameters, given dloss/dlogits.
  // Masked weight coordinates come back exactly zero.
  ParamVector backward(const Eigen::MatrixXd& frames,
                       const Eigen::MatrixXd& dloss_dlogits) const;

  ParamVector flatten() const;
  void unflatten(const ParamVector& params);

  // Zeroes masked weights and stores the mask so later updates cannot
  // revive them.  Throws ConfigError on shape mismatch.
  void apply_mask(const PruneMask& mask);
  // Re-zeroes masked weights; call after every optimizer step.
  void enforce_mask();
  const std::optional<PruneMask>& mask() const { return mask_; }

  // Flat index range of the output layer (W2, b2) inside the canonical
  // parameter vector; used for last-layer gradient scoping.
  std::pair<long, long> last_layer_span() const;

  // Weights of W1 then W2 as one flat vector (bias entries excluded);
  // index space shared with PruneMask.
  Eigen::VectorXd weight_vector() const;

  long effective_params() const;  // parameter count minus masked zeros

  Eigen::MatrixXd w1, w2;  // hidden x input, n_outputs x hidden
  Eigen::VectorXd b1, b2;

 private:
  ModelDims dims_;
  std::optional<PruneMask> mask_;
};

// Binary checkpoint: "PASR" magic, version, dims header, little-endian
// 64-bit float parameters in canonical order, then packed mask bits.
// Round trips bit-exactly.
void save_checkpoint(const AcousticModel& model,
                     const std::filesystem::path& path);
AcousticModel load_checkpoint(const std::filesystem::path& path);

}  // namespace pasr

#endif  // PASR_MODEL_HPP_
