// src/optim.cc

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

#include "pasr/optim.hpp"

#include <cmath>

#include "pasr/common.hpp"

namespace pasr {

std::string to_string(OptimizerKind k) {
  switch (k) {
    case OptimizerKind::kSgd: return "sgd";
    case OptimizerKind::kAdam: return "adam";
  }
  throw ConfigError("unknown optimizer kind");
}

OptimizerKind optimizer_from_string(const std::string& s) {
  if (s == "sgd") return OptimizerKind::kSgd;
  if (s == "adam") return OptimizerKind::kAdam;
  throw ConfigError("unknown optimizer '" + s + "'");
}

Optimizer::Optimizer(OptimizerKind kind, double lr, double beta1, double beta2,
                     double eps)
    : kind_(kind), lr_(lr), beta1_(beta1), beta2_(beta2), eps_(eps) {
  if (lr < 0.0) throw ConfigError("optimizer: negative learning rate");
  if (beta1 < 0.0 || beta1 >= 1.0 || beta2 < 0.0 || beta2 >= 1.0) {
    throw ConfigError("optimizer: betas must lie in [0, 1)");
  }
  if (eps <= 0.0) throw ConfigError("optimizer: eps must be positive");
}

void Optimizer::step(ParamVector& params, const ParamVector& grad) {
  if (params.size() != grad.size()) {
    throw ConfigError("optimizer: parameter/gradient size mismatch");
  }
  if (kind_ == OptimizerKind::kSgd) {
    params -= lr_ * grad;
    return;
  }
  if (m_.size() != params.size()) {
    m_ = ParamVector::Zero(params.size());
    v_ = ParamVector::Zero(params.size());
    t_ = 0;
  }
  ++t_;
  m_ = beta1_ * m_ + (1.0 - beta1_) * grad;
  v_ = beta2_ * v_ + (1.0 - beta2_) * grad.cwiseAbs2();
  const double bc1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
  const double bc2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
  params.array() -= lr_ * (m_.array() / bc1) /
                    ((v_.array() / bc2).sqrt() + eps_);
}

void Optimizer::reset() {
  t_ = 0;
  m_.resize(0);
  v_.resize(0);
}

}  // namespace pasr
