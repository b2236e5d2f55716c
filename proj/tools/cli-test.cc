// tools/cli-test.cc

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

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <sstream>

#include <nlohmann/json.hpp>

#include "base/io-util.h"
#include "eval/learning-curve.h"
#include "feat/wave-io.h"
#include "model/checkpoint.h"

namespace fieldasr {

namespace fs = std::filesystem;

struct RunResult {
  int code = -1;
  std::string out, err;
};

// Runs the CLI in dir with stdout/stderr captured.
static RunResult Cli(const fs::path &dir, const std::string &args) {
  std::string cmd = "cd '" + dir.string() + "' && '" FIELDASR_CLI "' " + args +
                    " > cli.out 2> cli.err";
  int status = std::system(cmd.c_str());
  RunResult r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = ReadFileBytes(dir / "cli.out");
  r.err = ReadFileBytes(dir / "cli.err");
  return r;
}

static fs::path FreshDir(const std::string &name) {
  fs::path d = fs::temp_directory_path() / ("fieldasr-cli-" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

static const char *kTiny =
    " --encoder-layers 1 --hidden 16 --decoder-hidden 16 --attention-dim 16 --batch 2";

TEST_CASE("cer on identical files prints 0.0000") {
  fs::path d = FreshDir("cer");
  WriteFileBytes(d / "ref.txt", "kato nu\nsɨ ʔi\n");
  RunResult r = Cli(d, "cer --ref ref.txt --hyp ref.txt");
  CHECK(r.code == 0);
  CHECK(r.out == "0.0000\n");
  WriteFileBytes(d / "hyp.txt", "katu nu\nsɨ ʔi\n");
  r = Cli(d, "cer --ref ref.txt --hyp hyp.txt --csv c.csv");
  CHECK(r.code == 0);
  CHECK(r.out == "0.0833\n");  // 1 / 12 code points
  CHECK(ReadFileBytes(d / "c.csv") ==
        "utterance,ref_chars,substitutions,insertions,deletions,cer\n"
        "1,7,1,0,0,0.142857\n2,5,0,0,0,0.000000\ntotal,12,1,0,0,0.083333\n");
  WriteFileBytes(d / "kr.txt", "b x y\na kato\n");
  WriteFileBytes(d / "kh.txt", "a kato\nb x y\n");
  r = Cli(d, "cer --keyed --ref kr.txt --hyp kh.txt");
  CHECK(r.code == 0);
  CHECK(r.out == "0.0000\n");
  fs::remove_all(d);
}

TEST_CASE("ingest on the fixture eaf lists one utterance") {
  fs::path d = FreshDir("ingest");
  fs::copy_file(fs::path(FIELDASR_FIXTURE_DIR) / "fixture.eaf", d / "fixture.eaf");
  RunResult r = Cli(d, "ingest fixture.eaf -o c.json");
  CHECK(r.code == 1);  // no audio
  CHECK(r.err.find("no audio for recording fixture") != std::string::npos);
  std::vector<double> silence(48000, 0.0);
  WriteFileBytes(d / "fixture.wav", EncodeWav(silence, 16000));
  r = Cli(d, "ingest fixture.eaf fixture.wav -o c.json");
  REQUIRE(r.code == 0);
  nlohmann::json s = nlohmann::json::parse(r.out);
  CHECK(s["utterances"] == 1);
  CHECK(s["speakers"] == nlohmann::json::array({"spk1"}));
  CHECK(fs::exists(d / "c.json"));
  r = Cli(d, "clean c.json -o cc.json --lowercase");
  CHECK(r.code == 0);
  r = Cli(d, "kaldi-dir cc.json -o kd");
  CHECK(r.code == 0);
  CHECK(fs::exists(d / "kd" / "segments"));
  r = Cli(d, "kaldi-dir kd --reverse -o back.json");
  CHECK(r.code == 0);
  CHECK(nlohmann::json::parse(r.out)["utterances"] == 1);
  r = Cli(d, "features cc.json -o f.far");
  CHECK(r.code == 0);
  CHECK(fs::exists(d / "f.far.json"));
  fs::remove_all(d);
}

TEST_CASE("exit codes: usage 2, operation failure 1") {
  fs::path d = FreshDir("codes");
  WriteFileBytes(d / "a.txt", "x\n");
  WriteFileBytes(d / "two.txt", "x\ny\n");
  WriteFileBytes(d / "junk.ckpt", "not a checkpoint");
  CHECK(Cli(d, "").code == 2);
  CHECK(Cli(d, "frobnicate").code == 2);
  CHECK(Cli(d, "cer --ref a.txt").code == 2);
  CHECK(Cli(d, "cer --ref missing.txt --hyp a.txt").code == 2);
  CHECK(Cli(d, "train a.txt a.txt -o m --epochs 0").code == 2);
  CHECK(Cli(d, "train a.txt a.txt -o m --ctc-weight 1.5").code == 2);
  CHECK(Cli(d, "train a.txt a.txt -o m --epochs many").code == 2);
  CHECK(Cli(d, "decode junk.ckpt").code == 2);
  CHECK(Cli(d, "decode junk.ckpt --wav a.txt --beam 0").code == 2);
  CHECK(Cli(d, "serve --state-dir s --port 70000").code == 2);
  CHECK(Cli(d, "curve a.txt a.txt --fractions 0.5 --minutes 1").code == 2);
  CHECK(Cli(d, "--help").code == 0);
  CHECK(Cli(d, "train --help").code == 0);

  RunResult r = Cli(d, "cer --ref a.txt --hyp two.txt");
  CHECK(r.code == 1);
  CHECK(r.err.find("1 lines but") != std::string::npos);
  CHECK(Cli(d, "decode junk.ckpt --wav a.txt").code == 1);
  CHECK(Cli(d, "train a.txt a.txt -o m").code == 1);
  CHECK(Cli(d, "export --state-dir nowhere --model m-0001 -o x").code == 1);
  CHECK(Cli(d, "import junk.ckpt --state-dir .").code == 1);
  REQUIRE(Cli(d, "synth -o s --utterances 4 --seed 1").code == 0);
  std::string far = ReadFileBytes(d / "s" / "features.far");
  WriteFileBytes(d / "s" / "features.far", far.substr(0, far.size() - 3));
  r = Cli(d, "train s/corpus.json s/features.far -o m --epochs 1" + std::string(kTiny));
  CHECK(r.code == 1);
  CHECK(r.err.find("integrity") != std::string::npos);
  fs::remove_all(d);
}

TEST_CASE("synth, train, decode and cer are reproducible") {
  fs::path d = FreshDir("pipeline");
  auto run = [&](const std::string &tag) {
    fs::path w = d / tag;
    fs::create_directories(w);
    REQUIRE(Cli(w, "synth -o train --seed 7 --utterances 12").code == 0);
    REQUIRE(Cli(w, "synth -o test --seed 8 --utterances 4").code == 0);
    REQUIRE(Cli(w, "train train/corpus.json train/features.far -o m.ckpt --metrics m.csv -q "
                   "--epochs 2 --seed 7" + std::string(kTiny)).code == 0);
    REQUIRE(Cli(w, "decode m.ckpt --corpus test/corpus.json --features test/features.far "
                   "-o hyp.txt --ref-out ref.txt").code == 0);
    RunResult c = Cli(w, "cer --keyed --ref ref.txt --hyp hyp.txt --csv cer.csv");
    REQUIRE(c.code == 0);
    return c.out;
  };
  std::string a = run("a"), b = run("b");
  CHECK(a == b);
  for (const char *f : {"train/corpus.json", "train/features.far", "m.ckpt", "m.csv",
                        "hyp.txt", "ref.txt", "cer.csv"})
    CHECK_MESSAGE(ReadFileBytes(d / "a" / f) == ReadFileBytes(d / "b" / f), f);
  CHECK(ProfileFromCsv(ReadFileBytes(d / "a" / "m.csv")).size() == 2);
  fs::remove_all(d);
}

TEST_CASE("longer training lowers dev CER") {
  fs::path d = FreshDir("improves");
  REQUIRE(Cli(d, "synth -o s --seed 3 --utterances 40 --sigma 0.05").code == 0);
  RunResult r = Cli(d, "train s/corpus.json s/features.far -o m.ckpt --metrics m.csv -q "
                       "--epochs 30 --batch 1 --hidden 32 --encoder-layers 2 "
                       "--decoder-hidden 32 --attention-dim 32 --dev-fraction 0.2");
  REQUIRE(r.code == 0);
  std::vector<ProfileRow> rows = ProfileFromCsv(ReadFileBytes(d / "m.csv"));
  REQUIRE(rows.size() == 30);
  MESSAGE("dev cer " << rows.front().dev_cer << " -> " << rows.back().dev_cer);
  CHECK(rows.back().dev_cer < rows.front().dev_cer);
  fs::remove_all(d);
}

TEST_CASE("config file values apply and flags override them") {
  fs::path d = FreshDir("config");
  REQUIRE(Cli(d, "synth -o s --seed 2 --utterances 6").code == 0);
  WriteFileBytes(d / "c.toml", "[train]\nepochs = 1\nhidden = 8\nencoder-layers = 1\n");
  REQUIRE(Cli(d, "--config c.toml train s/corpus.json s/features.far -o m.ckpt --metrics m.csv "
                 "-q --decoder-hidden 8 --attention-dim 8 --epochs 2").code == 0);
  CHECK(ProfileFromCsv(ReadFileBytes(d / "m.csv")).size() == 2);
  HybridModel m = LoadCheckpoint(d / "m.ckpt");
  CHECK(m.config().hidden_size == 8);
  CHECK(m.config().encoder_layers == 1);
  fs::remove_all(d);
}

TEST_CASE("export and import go through a state directory") {
  fs::path d = FreshDir("state");
  REQUIRE(Cli(d, "synth -o s --seed 2 --utterances 6").code == 0);
  REQUIRE(Cli(d, "train s/corpus.json s/features.far -o m.ckpt -q --epochs 1" + std::string(kTiny)).code == 0);
  fs::create_directories(d / "st");
  RunResult r = Cli(d, "import m.ckpt --state-dir st --name mine");
  REQUIRE(r.code == 0);
  std::string id = nlohmann::json::parse(r.out)["id"];
  CHECK(id == "m-0001");
  REQUIRE(Cli(d, "export --state-dir st --model " + id + " -o back.ckpt").code == 0);
  CHECK(ReadFileBytes(d / "back.ckpt") == ReadFileBytes(d / "m.ckpt"));
  CHECK(Cli(d, "export --state-dir st --model m-0002 -o x").code == 1);
  fs::remove_all(d);
}

}  // namespace fieldasr
