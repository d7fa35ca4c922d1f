// include/pasr/optim.hpp

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

#ifndef PASR_OPTIM_HPP_
#define PASR_OPTIM_HPP_

#include <string>

#include "pasr/model.hpp"

namespace pasr {

enum class OptimizerKind { kSgd, kAdam };

std::string to_string(OptimizerKind k);
OptimizerKind optimizer_from_string(const std::string& s);

// Stateful update rule over the flattened parameter vector.  The Adam
// moments live in the same canonical order as ParamVector, so a model
// round-trip through flatten/unflatten does not disturb them.
class Optimizer {
 public:
  Optimizer(OptimizerKind kind, double lr, double beta1 = 0.9,
            double beta2 = 0.999, double eps = 1e-8);

  void step(ParamVector& params, const ParamVector& grad);
  void reset();

  OptimizerKind kind() const { return kind_; }
  double learning_rate() const { return lr_; }

 private:
  OptimizerKind kind_;
  double lr_, beta1_, beta2_, eps_;
  long t_ = 0;
  ParamVector m_, v_;
};

}  // namespace pasr

#endif  // PASR_OPTIM_HPP_
