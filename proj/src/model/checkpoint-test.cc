// model/checkpoint-test.cc

// Copyright 2026  The fieldasr Authors

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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <filesystem>
#include <random>

#include "base/error.h"
#include "base/io-util.h"
#include "model/checkpoint.h"
#include "model/decode.h"

namespace fieldasr {

static HybridModel SmallModel(uint64_t seed) {
  ModelConfig c;
  c.input_dim = 4;
  c.encoder_layers = 2;
  c.hidden_size = 5;
  c.decoder_hidden = 6;
  c.attention_dim = 3;
  c.frame_stacking = 2;
  c.ctc_weight = 0.3;
  HybridModel m(c, CharInventory(U"aeiʈʂ"));
  m.Initialize(seed);
  std::mt19937_64 rng(seed + 1);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  for (nn::Parameter *p : m.Parameters())
    for (size_t i = 0; i < p->value.size(); ++i) p->value[i] = u(rng);
  m.feature_config.n_mels = 4;
  m.feature_config.hop_ms = 12.5;
  m.cmvn = CmvnStats{{0.5, -1.0, 2.0, 0.25}, {1.0, 2.0, 0.5, 3.0}};
  return m;
}

static ErrorKind KindOf(std::string_view bytes) {
  try {
    DecodeCheckpoint(bytes);
  } catch (const Error &e) {
    return e.kind();
  }
  FAIL("decode unexpectedly succeeded");
  return ErrorKind::kState;
}

TEST_CASE("round trip keeps every parameter at 32-bit precision") {
  HybridModel m = SmallModel(1);
  std::string bytes = EncodeCheckpoint(m);
  CHECK(bytes.substr(0, 4) == "DAWM");
  HybridModel r = DecodeCheckpoint(bytes);
  CHECK(r.config() == m.config());
  CHECK(r.vocab() == m.vocab());
  CHECK(r.feature_config.hop_ms == 12.5);
  CHECK(r.feature_config.n_mels == 4);
  REQUIRE(r.cmvn.has_value());
  CHECK(r.cmvn->mean == m.cmvn->mean);
  CHECK(r.cmvn->stddev == m.cmvn->stddev);
  auto a = m.Parameters();
  auto b = r.Parameters();
  REQUIRE(a.size() == b.size());
  for (size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i]->name == b[i]->name);
    CHECK(a[i]->value.shape() == b[i]->value.shape());
    for (size_t k = 0; k < a[i]->value.size(); ++k)
      CHECK(b[i]->value[k] == static_cast<double>(static_cast<float>(a[i]->value[k])));
  }
  // Second cycle is byte-identical.
  CHECK(EncodeCheckpoint(r) == bytes);
}

TEST_CASE("model without cmvn round trips") {
  HybridModel m = SmallModel(2);
  m.cmvn.reset();
  HybridModel r = DecodeCheckpoint(EncodeCheckpoint(m));
  CHECK(!r.cmvn.has_value());
}

TEST_CASE("every truncation is an integrity error") {
  std::string bytes = EncodeCheckpoint(SmallModel(3));
  for (size_t n = 0; n < bytes.size(); ++n) {
    CAPTURE(n);
    CHECK(KindOf(std::string_view(bytes).substr(0, n)) == ErrorKind::kIntegrity);
  }
  HybridModel m = SmallModel(3);
  m.cmvn.reset();
  std::string plain = EncodeCheckpoint(m);
  for (size_t n = 0; n < plain.size(); n += 7)
    CHECK(KindOf(std::string_view(plain).substr(0, n)) == ErrorKind::kIntegrity);
}

TEST_CASE("version and magic errors") {
  std::string bytes = EncodeCheckpoint(SmallModel(4));
  std::string v2 = bytes;
  v2[4] = 2;
  try {
    DecodeCheckpoint(v2);
    FAIL("expected version error");
  } catch (const Error &e) {
    CHECK(e.kind() == ErrorKind::kVersion);
    CHECK(std::string(e.what()).find("2 found, expected 1") != std::string::npos);
  }
  std::string bad = bytes;
  bad[0] = 'X';
  CHECK(KindOf(bad) == ErrorKind::kFormat);
  std::string extra = bytes + std::string("\x03\x00\x00\x00zzz\x00\x00\x00\x00", 11);
  CHECK(KindOf(extra) == ErrorKind::kIntegrity);
}

TEST_CASE("transcriptions of 20 random inputs survive save and load") {
  namespace fs = std::filesystem;
  fs::path dir = fs::temp_directory_path() / "fieldasr-checkpoint-test";
  fs::create_directories(dir);
  HybridModel m = SmallModel(5);
  // Bring the original to stored precision first; from there every cycle is
  // exact, so decoding must agree bit for bit.
  for (nn::Parameter *p : m.Parameters())
    for (size_t i = 0; i < p->value.size(); ++i)
      p->value[i] = static_cast<float>(p->value[i]);
  SaveCheckpoint(m, dir / "m.ckpt");
  HybridModel r = LoadCheckpoint(dir / "m.ckpt");
  HybridModel unrounded = SmallModel(5);
  std::mt19937_64 rng(6);
  std::normal_distribution<double> n(0.0, 1.0);
  int same_as_unrounded = 0;
  for (int i = 0; i < 20; ++i) {
    nn::Tensor f = nn::Tensor::Zeros(4 + i, 4);
    for (size_t k = 0; k < f.size(); ++k) f[k] = n(rng);
    Hypothesis a = DecodeJoint(m, f);
    Hypothesis b = DecodeJoint(r, f);
    CHECK(a.ids == b.ids);
    CHECK(a.score == b.score);
    if (DecodeJoint(unrounded, f).ids == b.ids) ++same_as_unrounded;
  }
  // Rounding the original 64-bit weights to 32 bits moves scores by ~1e-7;
  // the text normally does not change.
  MESSAGE(same_as_unrounded << "/20 transcriptions equal to the unrounded model");
  CHECK(same_as_unrounded >= 18);
  fs::remove_all(dir);
}

}  // namespace fieldasr
