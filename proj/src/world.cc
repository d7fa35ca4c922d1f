// src/world.cc

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

#include "pasr/world.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <set>
#include <unordered_set>

#include "pasr/ctc.hpp"

namespace pasr {

std::string to_string(Provenance p) {
  switch (p) {
    case Provenance::kReal: return "real";
    case Provenance::kPersonSyn: return "person-syn";
    case Provenance::kOtherPersonSyn: return "other-person-syn";
    case Provenance::kMultiPersonSyn: return "multi-person-syn";
    case Provenance::kGlobalTextSyn: return "global-text-syn";
    case Provenance::kGlobal: return "global";
  }
  throw ConfigError("unknown provenance value");
}

Provenance provenance_from_string(const std::string& s) {
  if (s == "real") return Provenance::kReal;
  if (s == "person-syn") return Provenance::kPersonSyn;
  if (s == "other-person-syn") return Provenance::kOtherPersonSyn;
  if (s == "multi-person-syn") return Provenance::kMultiPersonSyn;
  if (s == "global-text-syn") return Provenance::kGlobalTextSyn;
  if (s == "global") return Provenance::kGlobal;
  throw ConfigError("unknown provenance '" + s + "'");
}

std::string to_string(Split s) {
  switch (s) {
    case Split::kTrain: return "train";
    case Split::kVal: return "val";
    case Split::kTest: return "test";
  }
  throw ConfigError("unknown split value");
}

std::string to_string(Variant v) {
  switch (v) {
    case Variant::kNone: return "none";
    case Variant::kPersonSyn: return "person-syn";
    case Variant::kOtherPersonSyn: return "other-person-syn";
    case Variant::kMultiPersonSyn: return "multi-person-syn";
    case Variant::kGlobalTextSyn: return "global-text-syn";
    case Variant::kGlobalInterp: return "global-interp";
  }
  throw ConfigError("unknown variant value");
}

Variant variant_from_string(const std::string& s) {
  if (s == "none") return Variant::kNone;
  if (s == "person-syn") return Variant::kPersonSyn;
  if (s == "other-person-syn") return Variant::kOtherPersonSyn;
  if (s == "multi-person-syn") return Variant::kMultiPersonSyn;
  if (s == "global-text-syn") return Variant::kGlobalTextSyn;
  if (s == "global-interp") return Variant::kGlobalInterp;
  throw ConfigError("unknown variant '" + s + "'");
}

SpeakerStyle SpeakerStyle::identity(int dim) {
  SpeakerStyle s;
  s.transform = Eigen::MatrixXd::Identity(dim, dim);
  s.offset = Eigen::VectorXd::Zero(dim);
  return s;
}

void SpeakerStyle::validate(double max_condition_number) const {
  if (tempo < 1.0) throw ConfigError("style: tempo must be >= 1");
  if (tempo_jitter < 0.0) throw ConfigError("style: negative tempo jitter");
  if (noise_sigma < 0.0) throw ConfigError("style: negative noise sigma");
  if (transform.rows() != transform.cols() ||
      transform.rows() != offset.size()) {
    throw ConfigError("style: transform/offset dimension mismatch");
  }
  if (condition_number(transform) > max_condition_number * (1.0 + 1e-9)) {
    throw ConfigError("style: transform condition number exceeds bound");
  }
}

double condition_number(const Eigen::MatrixXd& m) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const auto& sv = svd.singularValues();
  const double smin = sv[sv.size() - 1];
  if (smin <= 0.0) return std::numeric_limits<double>::infinity();
  return sv[0] / smin;
}

double style_distance(const SpeakerStyle& a, const SpeakerStyle& b) {
  const double da = (a.transform - b.transform).norm();
  const double db = (a.offset - b.offset).norm();
  const double dt = a.tempo - b.tempo;
  return std::sqrt(da * da + db * db + dt * dt);
}

ContentPrototypeBank ContentPrototypeBank::generate(std::uint64_t seed,
                                                    int dim, int vocab_size) {
  if (dim <= 0) throw ConfigError("prototype bank: dim must be positive");
  ContentPrototypeBank bank;
  bank.dim = dim;
  bank.seed = seed;
  bank.prototypes = Eigen::MatrixXd::Zero(vocab_size, dim);
  Rng rng = make_substream(seed, "world/prototypes");
  std::normal_distribution<double> unit(0.0, 1.0);
  for (int id = 1; id < vocab_size; ++id) {  // none for blank
    for (int d = 0; d < dim; ++d) bank.prototypes(id, d) = unit(rng);
  }
  return bank;
}

Eigen::RowVectorXd ContentPrototypeBank::prototype(int token_id) const {
  if (token_id <= 0 || token_id >= prototypes.rows()) {
    throw ConfigError("prototype bank: no prototype for token id " +
                      std::to_string(token_id));
  }
  return prototypes.row(token_id);
}

void TextDomain::validate(const Vocabulary& vocab) const {
  if (words.empty()) throw ConfigError("text domain: empty word list");
  if (words.size() != weights.size()) {
    throw ConfigError("text domain: words/weights size mismatch");
  }
  double total = 0.0;
  for (double w : weights) {
    if (w < 0.0) throw ConfigError("text domain: negative weight");
    total += w;
  }
  if (total <= 0.0) throw ConfigError("text domain: all weights zero");
  if (min_words < 1 || max_words < min_words) {
    throw ConfigError("text domain: bad sentence length bounds");
  }
  for (const auto& word : words) {
    if (word.empty()) throw ConfigError("text domain: empty word");
    for (char c : word) {
      const int id = vocab.token_to_id(c);  // throws on unknown symbols
      if (id == Vocabulary::kSpaceId) {
        throw ConfigError("text domain: space inside word '" + word + "'");
      }
    }
  }
}

long Dataset::total_frames() const {
  long total = 0;
  for (const auto& u : utts) total += u.n_frames();
  return total;
}

void WorldConfig::validate() const {
  if (feat_dim <= 0 || n_global_speakers <= 0 || speakers_per_category <= 0) {
    throw ConfigError("world config: dimensions must be positive");
  }
  if (global_words <= 0 || target_words <= 0) {
    throw ConfigError("world config: word counts must be positive");
  }
  if (word_len_min < 1 || word_len_max < word_len_min) {
    throw ConfigError("world config: bad word length bounds");
  }
  if (sent_len_min < 1 || sent_len_max < sent_len_min) {
    throw ConfigError("world config: bad sentence length bounds");
  }
  if (domain_overlap < 0.0 || domain_overlap > 1.0) {
    throw ConfigError("world config: domain overlap must be in [0, 1]");
  }
  if (!(near_style_radius > 0.0) || !(far_style_radius > near_style_radius)) {
    throw ConfigError(
        "world config: need 0 < near_style_radius < far_style_radius");
  }
  if (max_condition_number < 1.0) {
    throw ConfigError("world config: max condition number must be >= 1");
  }
  if (tempo_min < 1.0 || tempo_max < tempo_min || tempo_min_far < 1.0 ||
      tempo_max_far < tempo_min_far) {
    throw ConfigError("world config: bad tempo ranges");
  }
  if (tempo_jitter < 0.0 || noise_sigma < 0.0) {
    throw ConfigError("world config: jitter/sigma must be nonnegative");
  }
  if (person_frame_budget <= 0 || person_val_utts <= 0 ||
      person_test_utts <= 0 || global_train_utts <= 0 ||
      global_val_utts <= 0) {
    throw ConfigError("world config: dataset sizes must be positive");
  }
}

const SpeakerSpec& World::target(int category, int index) const {
  for (const auto& t : targets) {
    if (t.category == category && index-- == 0) return t;
  }
  throw ConfigError("world: no target speaker for category " +
                    std::to_string(category));
}

const SpeakerSpec* World::find_speaker(const std::string& id) const {
  for (const auto& s : global_pool) {
    if (s.id == id) return &s;
  }
  for (const auto& s : targets) {
    if (s.id == id) return &s;
  }
  return nullptr;
}

namespace {

// Rescales singular values so the condition number stays under the bound.
Eigen::MatrixXd clamp_condition(const Eigen::MatrixXd& m, double max_cond) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(
      m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Eigen::VectorXd sv = svd.singularValues();
  const double floor_sv = sv[0] / max_cond;
  if (sv[sv.size() - 1] >= floor_sv) return m;
  for (int i = 0; i < sv.size(); ++i) sv[i] = std::max(sv[i], floor_sv);
  return svd.matrixU() * sv.asDiagonal() * svd.matrixV().transpose();
}

std::string make_word(const WorldConfig& cfg, Rng& rng) {
  std::uniform_int_distribution<int> len(cfg.word_len_min, cfg.word_len_max);
  std::uniform_int_distribution<int> letter(0, 25);
  const int n = len(rng);
  std::string w;
  w.reserve(n);
  for (int i = 0; i < n; ++i) w.push_back(static_cast<char>('a' + letter(rng)));
  return w;
}

std::string make_fresh_word(const WorldConfig& cfg,
                            const std::set<std::string>& taken, Rng& rng) {
  for (int attempt = 0; attempt < 10000; ++attempt) {
    std::string w = make_word(cfg, rng);
    if (!taken.count(w)) return w;
  }
  throw ConfigError("world: word space exhausted; widen word length bounds");
}

std::vector<double> draw_weights(std::size_t n, Rng& rng) {
  std::uniform_real_distribution<double> u(0.5, 1.5);
  std::vector<double> w(n);
  for (auto& x : w) x = u(rng);
  return w;
}

TextDomain make_global_domain(const WorldConfig& cfg, Rng& rng) {
  TextDomain d;
  d.min_words = cfg.sent_len_min;
  d.max_words = cfg.sent_len_max;
  std::set<std::string> taken;
  for (int i = 0; i < cfg.global_words; ++i) {
    std::string w = make_fresh_word(cfg, taken, rng);
    taken.insert(w);
    d.words.push_back(std::move(w));
  }
  d.weights = draw_weights(d.words.size(), rng);
  return d;
}

// Overlap words come uniformly (without replacement) from the global list;
// the rest are new words disjoint from it.
TextDomain make_target_domain(const WorldConfig& cfg,
                              const TextDomain& global_domain, Rng& rng) {
  TextDomain d;
  d.min_words = cfg.sent_len_min;
  d.max_words = cfg.sent_len_max;
  const int n_overlap = static_cast<int>(
      std::llround(cfg.domain_overlap * cfg.target_words));
  if (n_overlap > static_cast<int>(global_domain.words.size())) {
    throw ConfigError("world: overlap asks for more words than global has");
  }
  std::vector<int> idx(global_domain.words.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<int>(i);
  for (int i = 0; i < n_overlap; ++i) {
    std::uniform_int_distribution<int> pick(i,
                                            static_cast<int>(idx.size()) - 1);
    std::swap(idx[i], idx[pick(rng)]);
    d.words.push_back(global_domain.words[idx[i]]);
  }
  std::set<std::string> taken(global_domain.words.begin(),
                              global_domain.words.end());
  for (const auto& w : d.words) taken.insert(w);
  for (int i = n_overlap; i < cfg.target_words; ++i) {
    std::string w = make_fresh_word(cfg, taken, rng);
    taken.insert(w);
    d.words.push_back(std::move(w));
  }
  d.weights = draw_weights(d.words.size(), rng);
  return d;
}

SpeakerStyle draw_style(const WorldConfig& cfg, bool far, Rng& rng) {
  const int dim = cfg.feat_dim;
  std::normal_distribution<double> unit(0.0, 1.0);
  SpeakerStyle s;

  const double scale =
      (far ? cfg.transform_scale_far : cfg.transform_scale_near) /
      std::sqrt(static_cast<double>(dim));
  Eigen::MatrixXd perturb(dim, dim);
  for (int r = 0; r < dim; ++r) {
    for (int c = 0; c < dim; ++c) perturb(r, c) = unit(rng);
  }
  s.transform = clamp_condition(
      Eigen::MatrixXd::Identity(dim, dim) + scale * perturb,
      cfg.max_condition_number);

  Eigen::VectorXd dir(dim);
  for (int i = 0; i < dim; ++i) dir[i] = unit(rng);
  dir.normalize();
  double norm;
  if (far) {
    std::uniform_real_distribution<double> u(1.1, 1.6);
    norm = u(rng) * cfg.far_style_radius;
  } else {
    std::uniform_real_distribution<double> u(0.2, 1.0);
    norm = u(rng) * cfg.near_style_radius;
  }
  s.offset = norm * dir;

  std::uniform_real_distribution<double> tempo(
      far ? cfg.tempo_min_far : cfg.tempo_min,
      far ? cfg.tempo_max_far : cfg.tempo_max);
  s.tempo = tempo(rng);
  s.tempo_jitter = cfg.tempo_jitter;
  s.noise_sigma = cfg.noise_sigma;
  return s;
}

}  // namespace

World build_world(const WorldConfig& config, std::uint64_t seed) {
  config.validate();
  World w;
  w.config = config;
  w.seed = seed;
  w.bank = ContentPrototypeBank::generate(seed, config.feat_dim,
                                          w.vocab.size());
  {
    Rng rng = make_substream(seed, "world/global-domain");
    w.global_domain = make_global_domain(config, rng);
    w.global_domain.validate(w.vocab);
  }
  for (int i = 0; i < config.n_global_speakers; ++i) {
    Rng rng = make_substream(seed, "world/global-speaker/" + std::to_string(i));
    SpeakerSpec spec;
    spec.id = "g" + std::to_string(i);
    spec.category = 0;
    spec.style = draw_style(config, /*far=*/false, rng);
    spec.domain = w.global_domain;
    w.global_pool.push_back(std::move(spec));
  }
  for (int cat = 1; cat <= 4; ++cat) {
    const bool far_style = (cat == 2 || cat == 4);
    const bool own_domain = (cat == 3 || cat == 4);
    for (int j = 0; j < config.speakers_per_category; ++j) {
      const std::string stem =
          "world/target/" + std::to_string(cat) + "/" + std::to_string(j);
      SpeakerSpec spec;
      spec.id = "c" + std::to_string(cat) + "s" + std::to_string(j);
      spec.category = cat;
      {
        Rng rng = make_substream(seed, stem + "/style");
        spec.style = draw_style(config, far_style, rng);
      }
      if (own_domain) {
        Rng rng = make_substream(seed, stem + "/domain");
        spec.domain = make_target_domain(config, w.global_domain, rng);
        spec.domain.validate(w.vocab);
      } else {
        spec.domain = w.global_domain;
      }
      w.targets.push_back(std::move(spec));
    }
  }
  for (const auto& s : w.global_pool) s.style.validate(config.max_condition_number);
  for (const auto& s : w.targets) s.style.validate(config.max_condition_number);
  return w;
}

const SpeakerSpec& nearest_other_target(const World& world,
                                        const SpeakerSpec& target) {
  const SpeakerSpec* best = nullptr;
  double best_dist = std::numeric_limits<double>::infinity();
  for (const auto& cand : world.targets) {
    if (cand.id == target.id) continue;
    const double d = style_distance(cand.style, target.style);
    if (d < best_dist || (d == best_dist && best && cand.id < best->id)) {
      best = &cand;
      best_dist = d;
    }
  }
  if (!best) {
    throw ConfigError("world: no other target speaker available");
  }
  return *best;
}

std::vector<int> sample_text(const TextDomain& domain, const Vocabulary& vocab,
                             Rng& rng) {
  double total = 0.0;
  for (double w : domain.weights) total += w;
  std::uniform_int_distribution<int> n_words_dist(domain.min_words,
                                                  domain.max_words);
  const int n_words = n_words_dist(rng);
  std::vector<int> tokens;
  std::uniform_real_distribution<double> u(0.0, total);
  for (int i = 0; i < n_words; ++i) {
    double r = u(rng);
    std::size_t pick = 0;
    for (; pick + 1 < domain.weights.size(); ++pick) {
      r -= domain.weights[pick];
      if (r < 0.0) break;
    }
    if (i > 0) tokens.push_back(Vocabulary::kSpaceId);
    for (char c : domain.words[pick]) tokens.push_back(vocab.token_to_id(c));
  }
  return tokens;
}

Utterance render(const std::vector<int>& text, const SpeakerStyle& style,
                 const ContentPrototypeBank& bank, Rng& rng,
                 const std::string& speaker_id) {
  if (text.empty()) throw ConfigError("render: empty text");
  for (int id : text) {
    if (id == Vocabulary::kBlankId) {
      throw ConfigError("render: blank token in text");
    }
  }
  const int n_tokens = static_cast<int>(text.size());
  std::vector<int> frames_per_token(n_tokens);
  long total = 0;
  for (int i = 0; i < n_tokens; ++i) {
    double t = style.tempo;
    if (style.tempo_jitter > 0.0) {
      std::uniform_real_distribution<double> jitter(-style.tempo_jitter,
                                                    style.tempo_jitter);
      t += jitter(rng);
    }
    frames_per_token[i] = std::max(1, static_cast<int>(std::llround(t)));
    total += frames_per_token[i];
  }
  // Guarantee CTC headroom: T >= 2 * minimal feasible alignment length.
  const long min_total = 2L * min_frames_required(text);
  for (int i = 0; total < min_total; i = (i + 1) % n_tokens) {
    ++frames_per_token[i];
    ++total;
  }

  Utterance utt;
  utt.frames.resize(total, bank.dim);
  std::normal_distribution<double> unit(0.0, 1.0);
  long row = 0;
  for (int i = 0; i < n_tokens; ++i) {
    const Eigen::RowVectorXd base =
        (style.transform * bank.prototype(text[i]).transpose() + style.offset)
            .transpose();
    for (int k = 0; k < frames_per_token[i]; ++k, ++row) {
      utt.frames.row(row) = base;
      if (style.noise_sigma > 0.0) {
        for (int d = 0; d < bank.dim; ++d) {
          utt.frames(row, d) += style.noise_sigma * unit(rng);
        }
      }
    }
  }
  utt.transcript = text;
  utt.speaker = speaker_id;
  utt.provenance = Provenance::kReal;
  utt.style = style;
  return utt;
}

SpeakerStyle estimate_style(const std::vector<const Utterance*>& references,
                            const World& world, StyleEstimationMode mode,
                            double eta, Rng& rng) {
  if (references.empty()) {
    throw EstimationError("estimate_style: no reference utterances");
  }
  if (mode == StyleEstimationMode::kOraclePerturbed) {
    const Utterance& ref = *references.front();
    SpeakerStyle truth;
    if (ref.style) {
      truth = *ref.style;
    } else if (const SpeakerSpec* spec = world.find_speaker(ref.speaker)) {
      truth = spec->style;
    } else {
      throw EstimationError(
          "estimate_style: reference lacks ground-truth style (speaker '" +
          ref.speaker + "' unknown)");
    }
    if (eta == 0.0) return truth;

    std::normal_distribution<double> unit(0.0, 1.0);
    SpeakerStyle out = truth;
    for (int r = 0; r < out.transform.rows(); ++r) {
      for (int c = 0; c < out.transform.cols(); ++c) {
        out.transform(r, c) *= 1.0 + eta * unit(rng);
      }
    }
    for (int i = 0; i < out.offset.size(); ++i) {
      out.offset[i] *= 1.0 + eta * unit(rng);
    }
    out.tempo = std::max(1.0, out.tempo * (1.0 + eta * unit(rng)));
    out.tempo_jitter = std::max(0.0, out.tempo_jitter * (1.0 + eta * unit(rng)));
    out.noise_sigma = std::max(0.0, out.noise_sigma * (1.0 + eta * unit(rng)));
    out.transform =
        clamp_condition(out.transform, world.config.max_condition_number);
    return out;
  }

  // Moment matching.  Weighting prototypes by the references' own token
  // counts makes the offset estimate exact on noiseless identity-transform
  // data.
  const int dim = world.bank.dim;
  Eigen::VectorXd frame_mean = Eigen::VectorXd::Zero(dim);
  Eigen::VectorXd frame_sq = Eigen::VectorXd::Zero(dim);
  Eigen::VectorXd token_counts = Eigen::VectorXd::Zero(world.vocab.size());
  long n_frames = 0, n_tokens = 0;
  for (const Utterance* u : references) {
    for (int t = 0; t < u->frames.rows(); ++t) {
      frame_mean += u->frames.row(t).transpose();
      frame_sq += u->frames.row(t).transpose().cwiseAbs2();
    }
    n_frames += u->frames.rows();
    for (int id : u->transcript) ++token_counts[id];
    n_tokens += static_cast<long>(u->transcript.size());
  }
  if (n_frames == 0 || n_tokens == 0) {
    throw EstimationError("estimate_style: empty reference utterances");
  }
  frame_mean /= static_cast<double>(n_frames);
  frame_sq /= static_cast<double>(n_frames);
  token_counts /= static_cast<double>(n_tokens);

  Eigen::VectorXd proto_mean = Eigen::VectorXd::Zero(dim);
  Eigen::VectorXd proto_sq = Eigen::VectorXd::Zero(dim);
  for (int id = 1; id < world.vocab.size(); ++id) {
    if (token_counts[id] == 0.0) continue;
    const Eigen::VectorXd p = world.bank.prototype(id).transpose();
    proto_mean += token_counts[id] * p;
    proto_sq += token_counts[id] * p.cwiseAbs2();
  }

  SpeakerStyle out = SpeakerStyle::identity(dim);
  out.offset = frame_mean - proto_mean;
  out.tempo = std::max(
      1.0, static_cast<double>(n_frames) / static_cast<double>(n_tokens));
  const Eigen::VectorXd frame_var = frame_sq - frame_mean.cwiseAbs2();
  const Eigen::VectorXd proto_var = proto_sq - proto_mean.cwiseAbs2();
  const double resid = (frame_var - proto_var).cwiseMax(0.0).mean();
  out.noise_sigma = std::sqrt(resid);
  return out;
}

Utterance synthesize(const std::vector<const Utterance*>& references,
                     const std::vector<int>& text, double eta, Rng& rng,
                     const World& world, Provenance provenance) {
  const SpeakerStyle style = estimate_style(
      references, world, StyleEstimationMode::kOraclePerturbed, eta, rng);
  Utterance utt =
      render(text, style, world.bank, rng, references.front()->speaker);
  utt.provenance = provenance;
  return utt;
}

Dataset build_adaptation_set(Variant variant, const World& world,
                             const SpeakerSpec& target,
                             const Dataset& d_person, const Dataset& d_global,
                             const Dataset* d_other, int n, double eta,
                             Rng& rng) {
  if (n <= 0) throw ConfigError("adaptation set: n must be positive");
  Dataset out;
  out.split = Split::kTrain;

  auto pick = [&rng](const Dataset& d) -> const Utterance* {
    std::uniform_int_distribution<std::size_t> u(0, d.size() - 1);
    return &d.utts[u(rng)];
  };

  switch (variant) {
    case Variant::kPersonSyn:
    case Variant::kGlobalTextSyn: {
      if (d_person.empty()) {
        throw ConfigError("adaptation set: empty personal dataset");
      }
      const bool global_text = (variant == Variant::kGlobalTextSyn);
      const TextDomain& domain =
          global_text ? world.global_domain : target.domain;
      const Provenance prov = global_text ? Provenance::kGlobalTextSyn
                                          : Provenance::kPersonSyn;
      for (int i = 0; i < n; ++i) {
        const Utterance* ref = pick(d_person);
        const auto text = sample_text(domain, world.vocab, rng);
        out.utts.push_back(synthesize({ref}, text, eta, rng, world, prov));
      }
      break;
    }
    case Variant::kOtherPersonSyn: {
      if (!d_other || d_other->empty()) {
        throw ConfigError("adaptation set: other-person variant needs the "
                          "other speaker's dataset");
      }
      for (int i = 0; i < n; ++i) {
        const Utterance* ref = pick(*d_other);
        const auto text = sample_text(target.domain, world.vocab, rng);
        out.utts.push_back(synthesize({ref}, text, eta, rng, world,
                                      Provenance::kOtherPersonSyn));
      }
      break;
    }
    case Variant::kMultiPersonSyn: {
      if (d_global.empty()) {
        throw ConfigError("adaptation set: empty global dataset");
      }
      for (int i = 0; i < n; ++i) {
        const Utterance* ref = pick(d_global);
        const auto text = sample_text(target.domain, world.vocab, rng);
        out.utts.push_back(synthesize({ref}, text, eta, rng, world,
                                      Provenance::kMultiPersonSyn));
      }
      break;
    }
    case Variant::kGlobalInterp: {
      if (d_global.empty()) {
        throw ConfigError("adaptation set: empty global dataset");
      }
      // Real global utterances, no synthesis; distinct draws.
      const int take = std::min<int>(n, static_cast<int>(d_global.size()));
      std::vector<int> idx(d_global.size());
      for (std::size_t i = 0; i < idx.size(); ++i) {
        idx[i] = static_cast<int>(i);
      }
      for (int i = 0; i < take; ++i) {
        std::uniform_int_distribution<int> u(i,
                                             static_cast<int>(idx.size()) - 1);
        std::swap(idx[i], idx[u(rng)]);
        Utterance copy = d_global.utts[idx[i]];
        copy.provenance = Provenance::kGlobal;
        out.utts.push_back(std::move(copy));
      }
      break;
    }
    case Variant::kNone:
      throw ConfigError("adaptation set: variant 'none' builds no data");
  }
  return out;
}

Utterance render_sentence(const World& world, const SpeakerSpec& speaker,
                          Rng& rng) {
  const auto text = sample_text(speaker.domain, world.vocab, rng);
  return render(text, speaker.style, world.bank, rng, speaker.id);
}

Dataset make_budgeted_dataset(const World& world, const SpeakerSpec& speaker,
                              long frame_budget, Rng& rng) {
  Dataset d;
  d.split = Split::kTrain;
  d.frame_budget = frame_budget;
  long used = 0;
  while (true) {
    Utterance u = render_sentence(world, speaker, rng);
    if (used + u.n_frames() > frame_budget) break;
    used += u.n_frames();
    d.utts.push_back(std::move(u));
  }
  if (d.utts.empty()) {
    throw ConfigError("dataset: frame budget " + std::to_string(frame_budget) +
                      " cannot fit a single utterance");
  }
  return d;
}

Dataset make_counted_dataset(const World& world, const SpeakerSpec& speaker,
                             int n_utts, Split split, Rng& rng) {
  Dataset d;
  d.split = split;
  for (int i = 0; i < n_utts; ++i) {
    d.utts.push_back(render_sentence(world, speaker, rng));
  }
  return d;
}

Dataset make_global_dataset(const World& world, int n_utts, Split split,
                            Rng& rng) {
  Dataset d;
  d.split = split;
  std::uniform_int_distribution<std::size_t> pick(
      0, world.global_pool.size() - 1);
  for (int i = 0; i < n_utts; ++i) {
    d.utts.push_back(render_sentence(world, world.global_pool[pick(rng)], rng));
  }
  return d;
}

}  // namespace pasr
