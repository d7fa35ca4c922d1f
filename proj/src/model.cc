// src/model.cc

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

#include "pasr/model.hpp"

#include <cstring>
#include <fstream>
#include <random>

namespace pasr {

namespace {
constexpr char kMagic[4] = {'P', 'A', 'S', 'R'};
constexpr std::uint32_t kVersion = 1;
}  // namespace

long PruneMask::n_zeros() const {
  long z = 0;
  for (bool k : keep) {
    if (!k) ++z;
  }
  return z;
}

AcousticModel::AcousticModel(const ModelDims& dims) : dims_(dims) {
  if (dims.context_radius < 0 || dims.hidden <= 0 || dims.feat_dim <= 0 ||
      dims.n_outputs <= 0) {
    throw ConfigError("model: dimensions must be positive");
  }
  w1 = Eigen::MatrixXd::Zero(dims.hidden, dims.input_dim());
  b1 = Eigen::VectorXd::Zero(dims.hidden);
  w2 = Eigen::MatrixXd::Zero(dims.n_outputs, dims.hidden);
  b2 = Eigen::VectorXd::Zero(dims.n_outputs);
}

AcousticModel AcousticModel::init(std::uint64_t seed, const ModelDims& dims) {
  AcousticModel m(dims);
  Rng rng = make_substream(seed, "model/init");
  std::normal_distribution<double> unit(0.0, 1.0);
  const double s1 = 1.0 / std::sqrt(static_cast<double>(dims.input_dim()));
  for (int r = 0; r < m.w1.rows(); ++r) {
    for (int c = 0; c < m.w1.cols(); ++c) m.w1(r, c) = s1 * unit(rng);
  }
  const double s2 = 1.0 / std::sqrt(static_cast<double>(dims.hidden));
  for (int r = 0; r < m.w2.rows(); ++r) {
    for (int c = 0; c < m.w2.cols(); ++c) m.w2(r, c) = s2 * unit(rng);
  }
  return m;
}

// Window input for frame t: frames t-c..t+c concatenated, zeros outside.
static Eigen::VectorXd window_input(const Eigen::MatrixXd& frames, int t,
                                    int radius, int feat_dim) {
  Eigen::VectorXd x = Eigen::VectorXd::Zero((2 * radius + 1) * feat_dim);
  const int T = static_cast<int>(frames.rows());
  for (int k = -radius; k <= radius; ++k) {
    const int src = t + k;
    if (src >= 0 && src < T) {
      x.segment((k + radius) * feat_dim, feat_dim) = frames.row(src);
    }
  }
  return x;
}

LogitSequence AcousticModel::forward(const Eigen::MatrixXd& frames) const {
  if (frames.cols() != dims_.feat_dim) {
    throw ConfigError("model: frame dim " + std::to_string(frames.cols()) +
                      " != feature dim " + std::to_string(dims_.feat_dim));
  }
  const int T = static_cast<int>(frames.rows());
  LogitSequence logits(T, dims_.n_outputs);
  for (int t = 0; t < T; ++t) {
    const Eigen::VectorXd x =
        window_input(frames, t, dims_.context_radius, dims_.feat_dim);
    const Eigen::VectorXd h = ((w1 * x + b1).array().max(0.0)).matrix();
    logits.row(t) = (w2 * h + b2).transpose();
  }
  return logits;
}

ParamVector AcousticModel::backward(const Eigen::MatrixXd& frames,
                                    const Eigen::MatrixXd& dlogits) const {
  const int T = static_cast<int>(frames.rows());
  if (dlogits.rows() != T || dlogits.cols() != dims_.n_outputs) {
    throw ConfigError("model: dloss/dlogits shape mismatch");
  }
  Eigen::MatrixXd dw1 = Eigen::MatrixXd::Zero(w1.rows(), w1.cols());
  Eigen::VectorXd db1 = Eigen::VectorXd::Zero(b1.size());
  Eigen::MatrixXd dw2 = Eigen::MatrixXd::Zero(w2.rows(), w2.cols());
  Eigen::VectorXd db2 = Eigen::VectorXd::Zero(b2.size());

  for (int t = 0; t < T; ++t) {
    const Eigen::VectorXd x =
        window_input(frames, t, dims_.context_radius, dims_.feat_dim);
    const Eigen::VectorXd pre = w1 * x + b1;
    const Eigen::VectorXd h = pre.array().max(0.0).matrix();
    const Eigen::VectorXd dy = dlogits.row(t).transpose();

    dw2.noalias() += dy * h.transpose();
    db2 += dy;
    Eigen::VectorXd dh = w2.transpose() * dy;
    for (int i = 0; i < dh.size(); ++i) {
      if (pre[i] <= 0.0) dh[i] = 0.0;  // ReLU' taken as 0 at the kink
    }
    dw1.noalias() += dh * x.transpose();
    db1 += dh;
  }

  if (mask_) {
    const auto& keep = mask_->keep;
    long idx = 0;
    for (int r = 0; r < dw1.rows(); ++r) {
      for (int c = 0; c < dw1.cols(); ++c, ++idx) {
        if (!keep[idx]) dw1(r, c) = 0.0;
      }
    }
    for (int r = 0; r < dw2.rows(); ++r) {
      for (int c = 0; c < dw2.cols(); ++c, ++idx) {
        if (!keep[idx]) dw2(r, c) = 0.0;
      }
    }
  }

  ParamVector g(dims_.n_params());
  long off = 0;
  for (int r = 0; r < dw1.rows(); ++r) {
    g.segment(off, dw1.cols()) = dw1.row(r);
    off += dw1.cols();
  }
  g.segment(off, db1.size()) = db1;
  off += db1.size();
  for (int r = 0; r < dw2.rows(); ++r) {
    g.segment(off, dw2.cols()) = dw2.row(r);
    off += dw2.cols();
  }
  g.segment(off, db2.size()) = db2;
  return g;
}

ParamVector AcousticModel::flatten() const {
  ParamVector p(dims_.n_params());
  long off = 0;
  for (int r = 0; r < w1.rows(); ++r) {
    p.segment(off, w1.cols()) = w1.row(r);
    off += w1.cols();
  }
  p.segment(off, b1.size()) = b1;
  off += b1.size();
  for (int r = 0; r < w2.rows(); ++r) {
    p.segment(off, w2.cols()) = w2.row(r);
    off += w2.cols();
  }
  p.segment(off, b2.size()) = b2;
  return p;
}

void AcousticModel::unflatten(const ParamVector& params) {
  if (params.size() != dims_.n_params()) {
    throw ConfigError("model: parameter vector length " +
                      std::to_string(params.size()) + " != " +
                      std::to_string(dims_.n_params()));
  }
  long off = 0;
  for (int r = 0; r < w1.rows(); ++r) {
    w1.row(r) = params.segment(off, w1.cols());
    off += w1.cols();
  }
  b1 = params.segment(off, b1.size());
  off += b1.size();
  for (int r = 0; r < w2.rows(); ++r) {
    w2.row(r) = params.segment(off, w2.cols());
    off += w2.cols();
  }
  b2 = params.segment(off, b2.size());
}

void AcousticModel::apply_mask(const PruneMask& mask) {
  if (static_cast<long>(mask.keep.size()) != dims_.n_weights()) {
    throw ConfigError("model: mask has " + std::to_string(mask.keep.size()) +
                      " bits, expected " + std::to_string(dims_.n_weights()));
  }
  mask_ = mask;
  enforce_mask();
}

void AcousticModel::enforce_mask() {
  if (!mask_) return;
  const auto& keep = mask_->keep;
  long idx = 0;
  for (int r = 0; r < w1.rows(); ++r) {
    for (int c = 0; c < w1.cols(); ++c, ++idx) {
      if (!keep[idx]) w1(r, c) = 0.0;
    }
  }
  for (int r = 0; r < w2.rows(); ++r) {
    for (int c = 0; c < w2.cols(); ++c, ++idx) {
      if (!keep[idx]) w2(r, c) = 0.0;
    }
  }
}

std::pair<long, long> AcousticModel::last_layer_span() const {
  const long start = static_cast<long>(w1.size()) + b1.size();
  return {start, dims_.n_params() - start};
}

Eigen::VectorXd AcousticModel::weight_vector() const {
  Eigen::VectorXd w(dims_.n_weights());
  long idx = 0;
  for (int r = 0; r < w1.rows(); ++r) {
    for (int c = 0; c < w1.cols(); ++c, ++idx) w[idx] = w1(r, c);
  }
  for (int r = 0; r < w2.rows(); ++r) {
    for (int c = 0; c < w2.cols(); ++c, ++idx) w[idx] = w2(r, c);
  }
  return w;
}

long AcousticModel::effective_params() const {
  return dims_.n_params() - (mask_ ? mask_->n_zeros() : 0);
}

namespace {

template <typename T>
void write_pod(std::ofstream& os, const T& v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T read_pod(std::ifstream& is) {
  T v{};
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!is) throw ConfigError("checkpoint: truncated file");
  return v;
}

}  // namespace

void save_checkpoint(const AcousticModel& model,
                     const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ConfigError("checkpoint: cannot write " + path.string());
  os.write(kMagic, 4);
  write_pod(os, kVersion);
  const auto& d = model.dims();
  write_pod(os, static_cast<std::uint32_t>(d.context_radius));
  write_pod(os, static_cast<std::uint32_t>(d.hidden));
  write_pod(os, static_cast<std::uint32_t>(d.feat_dim));
  write_pod(os, static_cast<std::uint32_t>(d.n_outputs));
  write_pod(os, static_cast<std::uint8_t>(model.mask() ? 1 : 0));
  const ParamVector p = model.flatten();
  os.write(reinterpret_cast<const char*>(p.data()),
           static_cast<std::streamsize>(p.size() * sizeof(double)));
  if (model.mask()) {
    const auto& keep = model.mask()->keep;
    std::vector<std::uint8_t> bytes((keep.size() + 7) / 8, 0);
    for (std::size_t i = 0; i < keep.size(); ++i) {
      if (keep[i]) bytes[i / 8] |= static_cast<std::uint8_t>(1u << (i % 8));
    }
    os.write(reinterpret_cast<const char*>(bytes.data()),
             static_cast<std::streamsize>(bytes.size()));
  }
  if (!os) throw ConfigError("checkpoint: write failed for " + path.string());
}

AcousticModel load_checkpoint(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ConfigError("checkpoint: cannot open " + path.string());
  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, kMagic, 4) != 0) {
    throw ConfigError("checkpoint: bad magic in " + path.string());
  }
  const auto version = read_pod<std::uint32_t>(is);
  if (version != kVersion) {
    throw ConfigError("checkpoint: unsupported version " +
                      std::to_string(version));
  }
  ModelDims d;
  d.context_radius = static_cast<int>(read_pod<std::uint32_t>(is));
  d.hidden = static_cast<int>(read_pod<std::uint32_t>(is));
  d.feat_dim = static_cast<int>(read_pod<std::uint32_t>(is));
  d.n_outputs = static_cast<int>(read_pod<std::uint32_t>(is));
  const bool has_mask = read_pod<std::uint8_t>(is) != 0;

  AcousticModel model(d);
  ParamVector p(d.n_params());
  is.read(reinterpret_cast<char*>(p.data()),
          static_cast<std::streamsize>(p.size() * sizeof(double)));
  if (!is) throw ConfigError("checkpoint: truncated parameters");
  model.unflatten(p);
  if (has_mask) {
    const long n = d.n_weights();
    std::vector<std::uint8_t> bytes((n + 7) / 8);
    is.read(reinterpret_cast<char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
    if (!is) throw ConfigError("checkpoint: truncated mask");
    PruneMask mask;
    mask.keep.resize(n);
    for (long i = 0; i < n; ++i) {
      mask.keep[i] = (bytes[i / 8] >> (i % 8)) & 1u;
    }
    model.apply_mask(mask);
  }
  return model;
}

}  // namespace pasr
