// tests/test_world.cc

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

#include <algorithm>
#include <cmath>
#include <set>

#include <doctest.h>

#include "pasr/common.hpp"
#include "pasr/ctc.hpp"
#include "pasr/world.hpp"

using namespace pasr;

namespace {

WorldConfig small_config() {
  WorldConfig c;
  c.feat_dim = 6;
  c.n_global_speakers = 4;
  c.speakers_per_category = 1;
  c.global_words = 20;
  c.target_words = 10;
  c.person_frame_budget = 300;
  c.person_val_utts = 4;
  c.person_test_utts = 4;
  c.global_train_utts = 10;
  c.global_val_utts = 4;
  return c;
}

std::set<std::string> word_set(const TextDomain& d) {
  return std::set<std::string>(d.words.begin(), d.words.end());
}

}  // namespace

TEST_CASE("condition_number hand cases") {
  CHECK(condition_number(Eigen::MatrixXd::Identity(3, 3)) ==
        doctest::Approx(1.0));
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(2, 2);
  d(0, 0) = 4.0;
  d(1, 1) = 1.0;
  CHECK(condition_number(d) == doctest::Approx(4.0));
  d(1, 1) = 0.0;
  CHECK(std::isinf(condition_number(d)));
}

TEST_CASE("style_distance is joint euclidean over transform, offset, tempo") {
  SpeakerStyle a = SpeakerStyle::identity(2);
  SpeakerStyle b = SpeakerStyle::identity(2);
  CHECK(style_distance(a, b) == 0.0);
  b.transform(0, 0) += 1.0;
  CHECK(style_distance(a, b) == doctest::Approx(1.0));
  b.offset[1] = 1.0;
  CHECK(style_distance(a, b) == doctest::Approx(std::sqrt(2.0)));
  b.tempo += 1.0;
  CHECK(style_distance(a, b) == doctest::Approx(std::sqrt(3.0)));
}

TEST_CASE("build_world is bit-identical for equal seeds") {
  const World a = build_world(small_config(), 7);
  const World b = build_world(small_config(), 7);
  const World c = build_world(small_config(), 8);
  CHECK((a.bank.prototypes - b.bank.prototypes).cwiseAbs().maxCoeff() == 0.0);
  CHECK((a.bank.prototypes - c.bank.prototypes).cwiseAbs().maxCoeff() > 0.0);
  CHECK(a.global_domain.words == b.global_domain.words);
  REQUIRE(a.targets.size() == b.targets.size());
  for (std::size_t i = 0; i < a.targets.size(); ++i) {
    CHECK(a.targets[i].id == b.targets[i].id);
    CHECK((a.targets[i].style.transform - b.targets[i].style.transform)
              .cwiseAbs()
              .maxCoeff() == 0.0);
    CHECK(a.targets[i].style.tempo == b.targets[i].style.tempo);
  }
}

TEST_CASE("world categories follow the style/content grid") {
  const WorldConfig cfg = small_config();
  const World w = build_world(cfg, 11);
  REQUIRE(w.targets.size() == 4);
  REQUIRE(w.global_pool.size() == 4);

  for (int cat = 1; cat <= 4; ++cat) {
    const SpeakerSpec& t = w.target(cat, 0);
    CHECK(t.category == cat);
    const double off = t.style.offset.norm();
    if (cat == 2 || cat == 4) {
      CHECK(off >= cfg.far_style_radius);  // far style
      CHECK(t.style.tempo >= cfg.tempo_min_far);
      CHECK(t.style.tempo <= cfg.tempo_max_far);
    } else {
      CHECK(off <= cfg.near_style_radius);  // near style
      CHECK(t.style.tempo >= cfg.tempo_min);
      CHECK(t.style.tempo <= cfg.tempo_max);
    }
    if (cat == 1 || cat == 2) {
      CHECK(t.domain.words == w.global_domain.words);  // global text
    } else {
      CHECK(t.domain.words != w.global_domain.words);  // own text domain
    }
    CHECK(condition_number(t.style.transform) <=
          cfg.max_condition_number * (1.0 + 1e-9));
  }
  for (const auto& g : w.global_pool) {
    CHECK(g.category == 0);
    CHECK(g.style.offset.norm() <= cfg.near_style_radius);
  }
}

TEST_CASE("target domains overlap the global domain by the configured share") {
  const WorldConfig cfg = small_config();
  const World w = build_world(cfg, 23);
  const auto global_words = word_set(w.global_domain);
  const int expect =
      static_cast<int>(std::llround(cfg.domain_overlap * cfg.target_words));
  for (int cat : {3, 4}) {
    const SpeakerSpec& t = w.target(cat, 0);
    REQUIRE(static_cast<int>(t.domain.words.size()) == cfg.target_words);
    int shared = 0;
    for (const auto& word : t.domain.words) {
      shared += global_words.count(word) ? 1 : 0;
    }
    CHECK(shared == expect);
    // No duplicate words inside the domain.
    CHECK(word_set(t.domain).size() == t.domain.words.size());
  }
}

TEST_CASE("nearest_other_target matches brute force and skips self") {
  WorldConfig cfg = small_config();
  cfg.speakers_per_category = 2;
  const World w = build_world(cfg, 31);
  for (const auto& t : w.targets) {
    const SpeakerSpec& got = nearest_other_target(w, t);
    CHECK(got.id != t.id);
    for (const auto& other : w.targets) {
      if (other.id == t.id) continue;
      CHECK(style_distance(other.style, t.style) >=
            style_distance(got.style, t.style));
    }
  }
}

TEST_CASE("sample_text respects length bounds and word weights") {
  const Vocabulary vocab;
  TextDomain d;
  d.words = {"aa", "bb"};
  d.weights = {1.0, 3.0};
  d.min_words = 1;
  d.max_words = 1;
  d.validate(vocab);

  Rng rng = make_substream(77, "test/sample-text");
  int first = 0;
  const int n = 4000;
  for (int i = 0; i < n; ++i) {
    const auto tokens = sample_text(d, vocab, rng);
    REQUIRE(tokens.size() == 2);  // one two-letter word, no space
    if (tokens[0] == vocab.token_to_id('a')) ++first;
  }
  // Multinomial three-sigma band around p = 0.25.
  const double sigma = std::sqrt(n * 0.25 * 0.75);
  CHECK(std::abs(first - n * 0.25) <= 3.0 * sigma);

  d.min_words = 2;
  d.max_words = 5;
  for (int i = 0; i < 50; ++i) {
    const auto tokens = sample_text(d, vocab, rng);
    const int spaces = static_cast<int>(
        std::count(tokens.begin(), tokens.end(), Vocabulary::kSpaceId));
    CHECK(spaces >= 1);
    CHECK(spaces <= 4);  // n_words - 1
  }
}

TEST_CASE("sample_text with one dominant word is degenerate") {
  const Vocabulary vocab;
  TextDomain d;
  d.words = {"zz", "qq"};
  d.weights = {1.0, 0.0};
  d.min_words = 1;
  d.max_words = 1;
  Rng rng = make_substream(3, "test/degenerate");
  for (int i = 0; i < 20; ++i) {
    const auto tokens = sample_text(d, vocab, rng);
    CHECK(tokens == std::vector<int>({vocab.token_to_id('z'),
                                      vocab.token_to_id('z')}));
  }
}

TEST_CASE("render emits round(tempo) frames per token without jitter") {
  const auto bank = ContentPrototypeBank::generate(5, 4, 28);
  SpeakerStyle style = SpeakerStyle::identity(4);
  style.tempo = 2.6;
  style.tempo_jitter = 0.0;
  style.noise_sigma = 0.0;
  Rng rng = make_substream(1, "test/render");
  const auto utt = render({1, 2}, style, bank, rng, "spk");
  CHECK(utt.n_frames() == 6);  // round(2.6) = 3 per token
  CHECK(utt.speaker == "spk");
  CHECK(utt.transcript == std::vector<int>({1, 2}));
  // Noiseless identity style: frames equal the prototypes exactly.
  for (int t = 0; t < 3; ++t) {
    CHECK((utt.frames.row(t) - bank.prototype(1)).cwiseAbs().maxCoeff() == 0.0);
    CHECK((utt.frames.row(3 + t) - bank.prototype(2)).cwiseAbs().maxCoeff() ==
          0.0);
  }
}

TEST_CASE("render tops up frames to keep the label feasible with headroom") {
  const auto bank = ContentPrototypeBank::generate(5, 4, 28);
  SpeakerStyle style = SpeakerStyle::identity(4);
  style.tempo = 1.0;
  style.tempo_jitter = 0.0;
  // Repeated token needs a separating blank: min frames for {1, 1} is 3,
  // natural length is 2, so the renderer must pad to at least 6.
  Rng rng = make_substream(2, "test/render-topup");
  const auto utt = render({1, 1}, style, bank, rng);
  CHECK(utt.n_frames() >= 2 * min_frames_required(utt.transcript));
  CHECK(utt.n_frames() == 6);

  // Property over random texts and styles: always 2x headroom.
  const Vocabulary vocab;
  TextDomain d;
  d.words = {"ab", "ba", "aab"};
  d.weights = {1.0, 1.0, 1.0};
  d.min_words = 1;
  d.max_words = 3;
  for (int i = 0; i < 30; ++i) {
    style.tempo = 1.0;
    style.tempo_jitter = 0.4;
    const auto text = sample_text(d, vocab, rng);
    const auto u = render(text, style, bank, rng);
    CHECK(u.n_frames() >= 2 * min_frames_required(text));
  }
}

TEST_CASE("render rejects empty or blank-bearing text") {
  const auto bank = ContentPrototypeBank::generate(5, 4, 28);
  const SpeakerStyle style = SpeakerStyle::identity(4);
  Rng rng = make_substream(3, "test/render-bad");
  CHECK_THROWS_AS(render({}, style, bank, rng), ConfigError);
  CHECK_THROWS_AS(render({1, 0, 2}, style, bank, rng), ConfigError);
}

TEST_CASE("oracle style estimation with eta 0 is exact and draw-free") {
  const World w = build_world(small_config(), 41);
  const SpeakerSpec& t = w.target(2, 0);
  Rng data_rng = make_substream(41, "test/est-data");
  const Utterance ref = render_sentence(w, t, data_rng);

  Rng a = make_substream(9, "test/est");
  Rng b = make_substream(9, "test/est");
  const SpeakerStyle est = estimate_style(
      {&ref}, w, StyleEstimationMode::kOraclePerturbed, 0.0, a);
  CHECK((est.transform - t.style.transform).cwiseAbs().maxCoeff() == 0.0);
  CHECK((est.offset - t.style.offset).cwiseAbs().maxCoeff() == 0.0);
  CHECK(est.tempo == t.style.tempo);
  CHECK(est.noise_sigma == t.style.noise_sigma);
  // eta = 0 must not consume randomness: both rngs still aligned.
  CHECK(a() == b());
}

TEST_CASE("oracle style estimation with eta > 0 perturbs but stays valid") {
  const World w = build_world(small_config(), 43);
  const SpeakerSpec& t = w.target(4, 0);
  Rng data_rng = make_substream(43, "test/est-data2");
  const Utterance ref = render_sentence(w, t, data_rng);
  Rng rng = make_substream(10, "test/est2");
  const SpeakerStyle est = estimate_style(
      {&ref}, w, StyleEstimationMode::kOraclePerturbed, 0.1, rng);
  CHECK((est.transform - t.style.transform).cwiseAbs().maxCoeff() > 0.0);
  CHECK(est.tempo >= 1.0);
  CHECK(est.noise_sigma >= 0.0);
  est.validate(w.config.max_condition_number);
}

TEST_CASE("moment-matched estimation is exact on clean identity data") {
  const World w = build_world(small_config(), 47);
  SpeakerStyle truth = SpeakerStyle::identity(w.config.feat_dim);
  truth.offset = Eigen::VectorXd::Constant(w.config.feat_dim, 0.7);
  truth.tempo = 3.0;
  truth.tempo_jitter = 0.0;
  truth.noise_sigma = 0.0;

  Rng rng = make_substream(47, "test/moment");
  // Distinct tokens so no top-up perturbs the per-token frame count.
  const std::vector<int> text = {1, 2, 3, 4};
  Utterance ref = render(text, truth, w.bank, rng, "c1s0");
  ref.style.reset();  // force the estimator to work from the frames

  const SpeakerStyle est = estimate_style(
      {&ref}, w, StyleEstimationMode::kMomentMatched, 0.0, rng);
  CHECK((est.offset - truth.offset).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(est.tempo == doctest::Approx(3.0));
  // Rounding residue from the prototype-mean subtraction; real sigmas are
  // O(0.1) so anything this small is an exact recovery.
  CHECK(est.noise_sigma < 1e-6);
  CHECK((est.transform - Eigen::MatrixXd::Identity(w.config.feat_dim,
                                                   w.config.feat_dim))
            .cwiseAbs()
            .maxCoeff() == 0.0);
}

TEST_CASE("estimate_style rejects empty reference lists") {
  const World w = build_world(small_config(), 49);
  Rng rng = make_substream(1, "test/est-empty");
  CHECK_THROWS_AS(estimate_style({}, w, StyleEstimationMode::kOraclePerturbed,
                                 0.0, rng),
                  EstimationError);
}

TEST_CASE("synthesize tags provenance and inherits the reference speaker") {
  const World w = build_world(small_config(), 53);
  const SpeakerSpec& t = w.target(1, 0);
  Rng rng = make_substream(53, "test/synth");
  const Utterance ref = render_sentence(w, t, rng);
  const auto text = sample_text(t.domain, w.vocab, rng);
  const Utterance syn = synthesize({&ref}, text, 0.1, rng, w);
  CHECK(syn.provenance == Provenance::kPersonSyn);
  CHECK(syn.speaker == t.id);
  CHECK(syn.transcript == text);
  CHECK(syn.n_frames() >= 2 * min_frames_required(text));
}

TEST_CASE("build_adaptation_set variant behaviors") {
  WorldConfig cfg = small_config();
  cfg.speakers_per_category = 2;
  const World w = build_world(cfg, 59);
  const SpeakerSpec& t = w.target(3, 0);
  Rng rng = make_substream(59, "test/adapt");
  const Dataset d_person = make_budgeted_dataset(w, t, 300, rng);
  const Dataset d_global = make_global_dataset(w, 12, Split::kTrain, rng);
  const SpeakerSpec& other = nearest_other_target(w, t);
  const Dataset d_other = make_budgeted_dataset(w, other, 300, rng);

  SUBCASE("person-syn uses the target's own text and references") {
    const Dataset d = build_adaptation_set(Variant::kPersonSyn, w, t, d_person,
                                           d_global, nullptr, 6, 0.1, rng);
    REQUIRE(d.size() == 6);
    const auto domain_words = word_set(t.domain);
    for (const auto& u : d.utts) {
      CHECK(u.provenance == Provenance::kPersonSyn);
      CHECK(u.speaker == t.id);
      for (const auto& word : w.vocab.to_words(u.transcript)) {
        CHECK(domain_words.count(word) == 1);
      }
    }
  }
  SUBCASE("other-person-syn renders target text in the other's style") {
    const Dataset d =
        build_adaptation_set(Variant::kOtherPersonSyn, w, t, d_person, d_global,
                             &d_other, 6, 0.1, rng);
    REQUIRE(d.size() == 6);
    for (const auto& u : d.utts) {
      CHECK(u.provenance == Provenance::kOtherPersonSyn);
      CHECK(u.speaker == other.id);
    }
    CHECK_THROWS_AS(
        build_adaptation_set(Variant::kOtherPersonSyn, w, t, d_person, d_global,
                             nullptr, 6, 0.1, rng),
        ConfigError);
  }
  SUBCASE("multi-person-syn borrows global speakers") {
    const Dataset d =
        build_adaptation_set(Variant::kMultiPersonSyn, w, t, d_person, d_global,
                             nullptr, 6, 0.1, rng);
    REQUIRE(d.size() == 6);
    for (const auto& u : d.utts) {
      CHECK(u.provenance == Provenance::kMultiPersonSyn);
      CHECK(u.speaker.substr(0, 1) == "g");
    }
  }
  SUBCASE("global-text-syn keeps the target style but global words") {
    const Dataset d =
        build_adaptation_set(Variant::kGlobalTextSyn, w, t, d_person, d_global,
                             nullptr, 6, 0.1, rng);
    REQUIRE(d.size() == 6);
    const auto global_words = word_set(w.global_domain);
    for (const auto& u : d.utts) {
      CHECK(u.provenance == Provenance::kGlobalTextSyn);
      CHECK(u.speaker == t.id);
      for (const auto& word : w.vocab.to_words(u.transcript)) {
        CHECK(global_words.count(word) == 1);
      }
    }
  }
  SUBCASE("global-interp draws distinct real global utterances") {
    const Dataset d =
        build_adaptation_set(Variant::kGlobalInterp, w, t, d_person, d_global,
                             nullptr, 8, 0.1, rng);
    REQUIRE(d.size() == 8);
    std::set<long> frame_counts_seen;
    int distinct = 0;
    for (const auto& u : d.utts) {
      CHECK(u.provenance == Provenance::kGlobal);
      if (frame_counts_seen.insert(u.n_frames() * 1000 +
                                   static_cast<long>(u.transcript.size()))
              .second) {
        ++distinct;
      }
    }
    CHECK(distinct >= 2);  // sampled without replacement, not one repeated utt
    // Asking for more than the pool holds caps at the pool size.
    const Dataset capped =
        build_adaptation_set(Variant::kGlobalInterp, w, t, d_person, d_global,
                             nullptr, 99, 0.1, rng);
    CHECK(capped.size() == d_global.size());
  }
  SUBCASE("variant none cannot build data") {
    CHECK_THROWS_AS(build_adaptation_set(Variant::kNone, w, t, d_person,
                                         d_global, nullptr, 6, 0.1, rng),
                    ConfigError);
  }
}

TEST_CASE("budgeted datasets respect the frame budget") {
  const World w = build_world(small_config(), 61);
  const SpeakerSpec& t = w.target(1, 0);
  Rng rng = make_substream(61, "test/budget");
  const Dataset d = make_budgeted_dataset(w, t, 300, rng);
  CHECK(!d.empty());
  CHECK(d.total_frames() <= 300);
  REQUIRE(d.frame_budget.has_value());
  CHECK(*d.frame_budget == 300);
  CHECK_THROWS_AS(make_budgeted_dataset(w, t, 1, rng), ConfigError);
}

TEST_CASE("global datasets draw speakers from the pool") {
  const World w = build_world(small_config(), 67);
  Rng rng = make_substream(67, "test/global");
  const Dataset d = make_global_dataset(w, 20, Split::kVal, rng);
  CHECK(d.split == Split::kVal);
  REQUIRE(d.size() == 20);
  std::set<std::string> speakers;
  for (const auto& u : d.utts) {
    CHECK(u.speaker.substr(0, 1) == "g");
    speakers.insert(u.speaker);
  }
  CHECK(speakers.size() >= 2);  // mixes speakers, not a single one
}

TEST_CASE("provenance and variant strings round trip") {
  for (auto p : {Provenance::kReal, Provenance::kPersonSyn,
                 Provenance::kOtherPersonSyn, Provenance::kMultiPersonSyn,
                 Provenance::kGlobalTextSyn, Provenance::kGlobal}) {
    CHECK(provenance_from_string(to_string(p)) == p);
  }
  for (auto v : {Variant::kNone, Variant::kPersonSyn, Variant::kOtherPersonSyn,
                 Variant::kMultiPersonSyn, Variant::kGlobalTextSyn,
                 Variant::kGlobalInterp}) {
    CHECK(variant_from_string(to_string(v)) == v);
  }
  CHECK_THROWS_AS(provenance_from_string("bogus"), ConfigError);
  CHECK_THROWS_AS(variant_from_string("bogus"), ConfigError);
}

TEST_CASE("text domain validation rejects malformed domains") {
  const Vocabulary vocab;
  TextDomain d;
  CHECK_THROWS_AS(d.validate(vocab), ConfigError);  // empty
  d.words = {"ok"};
  d.weights = {1.0, 2.0};
  CHECK_THROWS_AS(d.validate(vocab), ConfigError);  // size mismatch
  d.weights = {-1.0};
  CHECK_THROWS_AS(d.validate(vocab), ConfigError);  // negative weight
  d.weights = {0.0};
  CHECK_THROWS_AS(d.validate(vocab), ConfigError);  // all zero
  d.weights = {1.0};
  d.words = {"a b"};
  CHECK_THROWS_AS(d.validate(vocab), ConfigError);  // space inside word
  d.words = {"ok"};
  d.validate(vocab);
}
