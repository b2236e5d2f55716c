// model/trainer-test.cc

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

#include <cmath>
#include <limits>
#include <random>

#include "base/error.h"
#include "model/trainer.h"

namespace fieldasr {

// Each character is a fixed random vector held for 3 frames, plus noise.
static std::vector<Example> ToyExamples(const CharInventory &vocab, int n, uint64_t seed,
                                        size_t dim = 4) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<std::vector<double>> templates(vocab.chars().size(), std::vector<double>(dim));
  for (auto &t : templates)
    for (double &v : t) v = g(rng);
  std::uniform_int_distribution<int> len(1, 3), pick(0, static_cast<int>(templates.size()) - 1);
  std::vector<Example> out;
  for (int u = 0; u < n; ++u) {
    std::u32string text;
    for (int k = len(rng); k > 0; --k) text += vocab.chars()[pick(rng)];
    nn::Tensor f = nn::Tensor::Zeros(3 * text.size(), dim);
    for (size_t i = 0; i < text.size(); ++i)
      for (size_t r = 0; r < 3; ++r)
        for (size_t d = 0; d < dim; ++d)
          f(3 * i + r, d) = templates[vocab.IdOf(text[i]) - CharInventory::kFirstChar][d] +
                            0.05 * g(rng);
    std::string utf8;
    for (char32_t c : text) utf8 += static_cast<char>(c);
    out.push_back(MakeExample("u" + std::to_string(u), std::move(f), utf8, vocab));
  }
  return out;
}

static HybridModel ToyModel(const CharInventory &vocab, uint64_t seed) {
  ModelConfig c;
  c.input_dim = 4;
  c.encoder_layers = 1;
  c.hidden_size = 8;
  c.decoder_hidden = 8;
  c.attention_dim = 8;
  HybridModel m(c, vocab);
  m.Initialize(seed);
  return m;
}

TEST_CASE("history has one entry per epoch and logs every batch") {
  CharInventory vocab(U"abc");
  std::vector<Example> train = ToyExamples(vocab, 7, 1);
  std::vector<Example> dev = ToyExamples(vocab, 2, 2);
  HybridModel m = ToyModel(vocab, 3);
  TrainConfig cfg;
  cfg.epochs = 3;
  cfg.batch_utterances = 3;
  std::vector<std::string> lines;
  auto h = Train(m, train, dev, cfg, [&](const std::string &l) { lines.push_back(l); });
  REQUIRE(h.size() == 3);
  CHECK(lines.size() == 3 * (3 + 1));
  CHECK(lines[0].rfind("epoch 1 batch 1/3 loss ", 0) == 0);
  CHECK(lines[3].rfind("epoch 1 train_loss ", 0) == 0);
  for (size_t e = 0; e < h.size(); ++e) {
    CHECK(h[e].epoch == static_cast<int>(e) + 1);
    CHECK(std::isfinite(h[e].train_loss));
    CHECK(h[e].train_cer >= 0.0);
    CHECK(h[e].dev_cer >= 0.0);
  }
}

TEST_CASE("identical seeds give identical histories") {
  CharInventory vocab(U"abc");
  std::vector<Example> train = ToyExamples(vocab, 6, 4);
  std::vector<Example> dev = ToyExamples(vocab, 2, 5);
  TrainConfig cfg;
  cfg.epochs = 2;
  cfg.batch_utterances = 2;
  cfg.seed = 9;
  HybridModel a = ToyModel(vocab, 1), b = ToyModel(vocab, 1);
  auto ha = Train(a, train, dev, cfg);
  auto hb = Train(b, train, dev, cfg);
  REQUIRE(ha.size() == hb.size());
  for (size_t i = 0; i < ha.size(); ++i) {
    CHECK(ha[i].train_loss == hb[i].train_loss);
    CHECK(ha[i].train_cer == hb[i].train_cer);
    CHECK(ha[i].dev_cer == hb[i].dev_cer);
  }
  for (size_t i = 0; i < a.Parameters().size(); ++i)
    CHECK(a.Parameters()[i]->value.vector() == b.Parameters()[i]->value.vector());
}

TEST_CASE("training lowers the loss on a toy set") {
  CharInventory vocab(U"ab");
  std::vector<Example> train = ToyExamples(vocab, 4, 6);
  HybridModel m = ToyModel(vocab, 7);
  double before = MeanLoss(m, train, 0.5);
  TrainConfig cfg;
  cfg.epochs = 150;
  cfg.batch_utterances = 1;
  auto h = Train(m, train, {}, cfg);
  double after = MeanLoss(m, train, 0.5);
  MESSAGE("mean loss " << before << " -> " << after);
  CHECK(after < 0.5 * before);
  CHECK(std::isnan(h.back().dev_cer));
}

TEST_CASE("unalignable utterances are skipped") {
  CharInventory vocab(U"ab");
  std::vector<Example> train = ToyExamples(vocab, 3, 8);
  train.push_back(MakeExample("short", nn::Tensor::Zeros(2, 4), "aaa", vocab));
  HybridModel m = ToyModel(vocab, 1);
  TrainConfig cfg;
  cfg.epochs = 1;
  std::vector<std::string> lines;
  Train(m, train, {}, cfg, [&](const std::string &l) { lines.push_back(l); });
  REQUIRE(!lines.empty());
  CHECK(lines[0].rfind("skip short: 3 labels need 5 frames", 0) == 0);
  // With attention only there is no frame requirement.
  cfg.ctc_weight = 0.0;
  lines.clear();
  Train(m, train, {}, cfg, [&](const std::string &l) { lines.push_back(l); });
  CHECK(lines[0].rfind("epoch 1 batch", 0) == 0);
}

TEST_CASE("non-finite values abort with epoch and batch") {
  CharInventory vocab(U"ab");
  std::vector<Example> train = ToyExamples(vocab, 2, 9);
  train[1].features(0, 0) = std::numeric_limits<double>::quiet_NaN();
  HybridModel m = ToyModel(vocab, 1);
  TrainConfig cfg;
  cfg.epochs = 1;
  cfg.batch_utterances = 2;
  try {
    Train(m, train, {}, cfg);
    FAIL("expected numeric error");
  } catch (const Error &e) {
    CHECK(e.kind() == ErrorKind::kNumeric);
    CHECK(std::string(e.what()).rfind("epoch 1 batch 1", 0) == 0);
  }
}

TEST_CASE("bad inputs") {
  CharInventory vocab(U"ab");
  HybridModel m = ToyModel(vocab, 1);
  TrainConfig cfg;
  CHECK_THROWS_AS(Train(m, {}, {}, cfg), Error);
  std::vector<Example> wrong = {MakeExample("w", nn::Tensor::Zeros(5, 3), "a", vocab)};
  try {
    Train(m, wrong, {}, cfg);
    FAIL("expected shape error");
  } catch (const Error &e) {
    CHECK(e.kind() == ErrorKind::kShape);
  }
  cfg.epochs = 0;
  CHECK_THROWS_AS(Train(m, ToyExamples(vocab, 2, 1), {}, cfg), Error);
}

}  // namespace fieldasr
