// include/pasr/world.hpp

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

#ifndef PASR_WORLD_HPP_
#define PASR_WORLD_HPP_

#include <Eigen/Core>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pasr/common.hpp"
#include "pasr/vocab.hpp"

namespace pasr {

enum class Provenance {
  kReal,
  kPersonSyn,
  kOtherPersonSyn,
  kMultiPersonSyn,
  kGlobalTextSyn,
  kGlobal,
};
std::string to_string(Provenance p);
Provenance provenance_from_string(const std::string& s);

enum class Split { kTrain, kVal, kTest };
std::string to_string(Split s);

// A speaker's rendering parameters: everything about an utterance except
// its text.  transform/offset act on content prototypes, tempo controls
// frames per token, noise_sigma is per-frame isotropic Gaussian noise.
struct SpeakerStyle {
  Eigen::MatrixXd transform;  // D x D
  Eigen::VectorXd offset;     // D
  double tempo = 3.0;         // mean frames per token, >= 1
  double tempo_jitter = 0.0;
  double noise_sigma = 0.0;

  static SpeakerStyle identity(int dim);
  void validate(double max_condition_number) const;
};

double condition_number(const Eigen::MatrixXd& m);
// Euclidean distance over (transform, offset, tempo) jointly.
double style_distance(const SpeakerStyle& a, const SpeakerStyle& b);

// One fixed content vector per non-blank token; the "what was said" half of
// the factorization.
struct ContentPrototypeBank {
  int dim = 0;
  std::uint64_t seed = 0;
  Eigen::MatrixXd prototypes;  // vocab_size x dim, row 0 (blank) all zero

  static ContentPrototypeBank generate(std::uint64_t seed, int dim,
                                       int vocab_size);
  Eigen::RowVectorXd prototype(int token_id) const;
};

// Weighted word list with sentence-length bounds.
struct TextDomain {
  std::vector<std::string> words;
  std::vector<double> weights;
  int min_words = 3;
  int max_words = 8;

  void validate(const Vocabulary& vocab) const;
};

struct SpeakerSpec {
  std::string id;
  SpeakerStyle style;
  TextDomain domain;
  int category = 0;  // 0 = global pool member, 1..4 = target category
};

struct Utterance {
  Eigen::MatrixXd frames;  // T x D
  std::vector<int> transcript;  // token ids, never blank
  std::string speaker;
  Provenance provenance = Provenance::kReal;
  std::optional<SpeakerStyle> style;  // generating style, when known

  int n_frames() const { return static_cast<int>(frames.rows()); }
};

struct Dataset {
  std::vector<Utterance> utts;
  Split split = Split::kTrain;
  std::optional<long> frame_budget;

  long total_frames() const;
  bool empty() const { return utts.empty(); }
  std::size_t size() const { return utts.size(); }
};

struct WorldConfig {
  int feat_dim = 16;
  int n_global_speakers = 20;
  int speakers_per_category = 3;

  int global_words = 60;
  int target_words = 24;
  int word_len_min = 2;
  int word_len_max = 5;
  int sent_len_min = 3;
  int sent_len_max = 8;
  double domain_overlap = 0.3;  // target-domain words shared with global

  // Tempo is the axis personalization has to learn: every speaker draws
  // one value from the same wide range, so the pool-trained model is a
  // compromise across tempos and each target sits at its own point.
  // Offsets and transforms individualize frames without dominating; far
  // targets land just outside the pool's offset shell (1.1-1.6 x radius).
  double near_style_radius = 0.15;
  double far_style_radius = 0.16;
  double transform_scale_near = 0.15;
  double transform_scale_far = 0.15;
  double max_condition_number = 50.0;
  double tempo_min = 2.2;
  double tempo_max = 4.2;
  double tempo_min_far = 2.2;
  double tempo_max_far = 4.2;
  double tempo_jitter = 0.5;
  double noise_sigma = 0.58;

  // Roughly five sentences: too little to cover a personal domain, which is
  // exactly the regime where synthetic augmentation should pay off.
  long person_frame_budget = 300;
  int person_val_utts = 100;
  int person_test_utts = 100;
  // Deliberately lean so a few hundred auxiliary utterances still carry a
  // real volume gain on top of the style match.
  int global_train_utts = 300;
  int global_val_utts = 30;

  void validate() const;
};

// The generated universe: one global text domain, a pool of global
// speakers, and target speakers for the four adaptation categories.
//   1: style near, global text     2: style far, global text
//   3: style near, own text domain 4: style far, own text domain
struct World {
  WorldConfig config;
  std::uint64_t seed = 0;
  Vocabulary vocab;
  ContentPrototypeBank bank;
  TextDomain global_domain;
  std::vector<SpeakerSpec> global_pool;
  std::vector<SpeakerSpec> targets;  // grouped by category, then index

  const SpeakerSpec& target(int category, int index) const;
  const SpeakerSpec* find_speaker(const std::string& id) const;
};

World build_world(const WorldConfig& config, std::uint64_t seed);

// Closest other target speaker by style distance; deterministic tie-break
// on id.  Throws ConfigError when no other target exists.
const SpeakerSpec& nearest_other_target(const World& world,
                                        const SpeakerSpec& target);

std::vector<int> sample_text(const TextDomain& domain, const Vocabulary& vocab,
                             Rng& rng);

// Emits round(tempo + U(-jitter, +jitter)) frames per token (min 1), each
// frame = transform * prototype + offset + N(0, sigma^2 I).  Frame counts
// are topped up cyclically so that T >= 2 * min_frames_required(text).
Utterance render(const std::vector<int>& text, const SpeakerStyle& style,
                 const ContentPrototypeBank& bank, Rng& rng,
                 const std::string& speaker_id = "");

enum class StyleEstimationMode { kOraclePerturbed, kMomentMatched };

// oracle-perturbed: ground-truth style of the references with each
// parameter multiplied by (1 + eta * N(0,1)); eta = 0 returns the truth
// untouched without consuming the rng.
// moment-matched: offset from the frame mean minus the transcript-weighted
// prototype mean; tempo from frames per token; sigma from residual
// variance; transform left at identity.
SpeakerStyle estimate_style(const std::vector<const Utterance*>& references,
                            const World& world, StyleEstimationMode mode,
                            double eta, Rng& rng);

// estimate_style on the references, then render the text in that style.
Utterance synthesize(const std::vector<const Utterance*>& references,
                     const std::vector<int>& text, double eta, Rng& rng,
                     const World& world,
                     Provenance provenance = Provenance::kPersonSyn);

enum class Variant {
  kNone,
  kPersonSyn,
  kOtherPersonSyn,
  kMultiPersonSyn,
  kGlobalTextSyn,
  kGlobalInterp,
};
std::string to_string(Variant v);
Variant variant_from_string(const std::string& s);

// The adaptation-data ablations.  Style references are resampled per
// utterance from the indicated source; d_other is required only for
// kOtherPersonSyn.
Dataset build_adaptation_set(Variant variant, const World& world,
                             const SpeakerSpec& target,
                             const Dataset& d_person, const Dataset& d_global,
                             const Dataset* d_other, int n, double eta,
                             Rng& rng);

Utterance render_sentence(const World& world, const SpeakerSpec& speaker,
                          Rng& rng);
// Adds whole utterances while they fit in the frame budget.
Dataset make_budgeted_dataset(const World& world, const SpeakerSpec& speaker,
                              long frame_budget, Rng& rng);
Dataset make_counted_dataset(const World& world, const SpeakerSpec& speaker,
                             int n_utts, Split split, Rng& rng);
// Speaker drawn uniformly from the global pool per utterance.
Dataset make_global_dataset(const World& world, int n_utts, Split split,
                            Rng& rng);

}  // namespace pasr

#endif  // PASR_WORLD_HPP_
