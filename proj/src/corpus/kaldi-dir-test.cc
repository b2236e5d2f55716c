// corpus/kaldi-dir-test.cc

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
#include "corpus/kaldi-dir.h"
#include "feat/wave-io.h"
#include "random-corpus.h"

namespace fieldasr {

namespace fs = std::filesystem;

static fs::path TempDir(const std::string &name) {
  fs::path p = fs::temp_directory_path() / ("fieldasr-kaldi-" + name);
  fs::remove_all(p);
  return p;
}

// Fields that survive the Kaldi files (genre does not).
static void CheckSameUtterances(const Corpus &a, const Corpus &b) {
  REQUIRE(a.utterances.size() == b.utterances.size());
  for (size_t i = 0; i < a.utterances.size(); ++i) {
    const Utterance &x = a.utterances[i], &y = b.utterances[i];
    CHECK(x.id == y.id);
    CHECK(x.recording_id == y.recording_id);
    CHECK(x.speaker_id == y.speaker_id);
    CHECK(x.start_ms == y.start_ms);
    CHECK(x.end_ms == y.end_ms);
    CHECK(x.text == y.text);
  }
}

TEST_CASE("one utterance") {
  fs::path dir = TempDir("one");
  fs::create_directories(dir);
  WriteWavFile(dir / "rec1.wav", std::vector<double>(16000 * 3, 0.0), 16000);
  Corpus c;
  c.recordings.push_back({"rec1", (dir / "rec1.wav").string(), 16000, 3000});
  c.utterances.push_back({"spk1-rec1-00001000", "rec1", "spk1", 1000, 2500, "kato", std::nullopt});
  std::vector<fs::path> files = WriteKaldiDir(c, dir / "data");
  CHECK(files.size() == 4);
  CHECK(ReadFileBytes(dir / "data" / "segments") == "spk1-rec1-00001000 rec1 1.000 2.500\n");
  CHECK(ReadFileBytes(dir / "data" / "text") == "spk1-rec1-00001000 kato\n");
  CHECK(ReadFileBytes(dir / "data" / "utt2spk") == "spk1-rec1-00001000 spk1\n");
  CHECK(ReadFileBytes(dir / "data" / "wav.scp") ==
        "rec1 " + fs::absolute(dir / "rec1.wav").string() + "\n");
  Corpus back = ReadKaldiDir(dir / "data");
  CHECK(back.recordings[0].duration_ms == 3000);
  CheckSameUtterances(c, back);
  fs::remove_all(dir);
}

TEST_CASE("empty corpus gives four empty files") {
  fs::path dir = TempDir("empty");
  std::vector<fs::path> files = WriteKaldiDir(Corpus(), dir);
  REQUIRE(files.size() == 4);
  for (const fs::path &f : files) CHECK(ReadFileBytes(f).empty());
  CHECK(ReadKaldiDir(dir).utterances.empty());
  fs::remove_all(dir);
}

TEST_CASE("round trip on 50 random corpora") {
  std::mt19937 rng(50);
  fs::path dir = TempDir("random");
  for (int i = 0; i < 50; ++i) {
    Corpus c = oracle::RandomCorpus(rng);
    WriteKaldiDir(c, dir);
    Corpus back = ReadKaldiDir(dir);
    CheckSameUtterances(c, back);
    for (const Recording &r : back.recordings) CHECK(c.FindRecording(r.id) != nullptr);
  }
  fs::remove_all(dir);
}

TEST_CASE("files are sorted by first field") {
  std::mt19937 rng(51);
  fs::path dir = TempDir("sorted");
  Corpus c = oracle::RandomCorpus(rng, 30);
  std::reverse(c.utterances.begin(), c.utterances.end());
  WriteKaldiDir(c, dir);
  for (const char *name : {"wav.scp", "segments", "text", "utt2spk"}) {
    std::vector<std::string> lines = ReadLines(dir / name);
    std::vector<std::string> keys;
    for (const std::string &l : lines) keys.push_back(l.substr(0, l.find(' ')));
    CHECK(std::is_sorted(keys.begin(), keys.end()));
  }
  fs::remove_all(dir);
}

TEST_CASE("errors") {
  Corpus dup;
  dup.recordings.push_back({"r", "", 16000, 5000});
  dup.utterances.push_back({"s-r-00000000", "r", "s", 0, 10, "a", std::nullopt});
  dup.utterances.push_back({"s-r-00000000", "r", "s", 0, 20, "b", std::nullopt});
  try {
    WriteKaldiDir(dup, TempDir("dup"));
    FAIL("expected");
  } catch (const Error &e) {
    CHECK(e.kind() == ErrorKind::kIntegrity);
  }
  fs::path blocker = TempDir("blocker");
  WriteFileBytes(blocker, "x");
  try {
    WriteKaldiDir(Corpus(), blocker / "sub");
    FAIL("expected");
  } catch (const Error &e) {
    CHECK(e.kind() == ErrorKind::kIo);
  }
  fs::remove(blocker);
  CHECK_THROWS_AS(ReadKaldiDir(TempDir("absent")), Error);
}

TEST_CASE("seconds formatting") {
  CHECK(FormatSeconds(0) == "0.000");
  CHECK(FormatSeconds(2500) == "2.500");
  CHECK(FormatSeconds(61007) == "61.007");
  for (int64_t ms : {0, 1, 999, 1000, 123456789})
    CHECK(ParseSeconds(FormatSeconds(ms)) == ms);
}

TEST_CASE("genre manifest") {
  auto g = ParseGenreManifest("# comment\nrec1\tsong\n\nrec2\tnarrative\n");
  CHECK(g.size() == 2);
  CHECK(g["rec1"] == "song");
  CHECK_THROWS_AS(ParseGenreManifest("rec1 song\n"), Error);
}

}  // namespace fieldasr
