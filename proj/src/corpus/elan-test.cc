// corpus/elan-test.cc

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

#include "base/error.h"
#include "base/io-util.h"
#include "base/text-utils.h"
#include "corpus/elan.h"
#include "corpus/ingest.h"
#include "feat/wave-io.h"

namespace fieldasr {

namespace fs = std::filesystem;

static std::string Fixture(const char *name) {
  return ReadFileBytes(fs::path(FIELDASR_FIXTURE_DIR) / name);
}

static Error CaughtError(auto &&fn) {
  try {
    fn();
  } catch (const Error &e) {
    return e;
  }
  FAIL("no error thrown");
  return Error(ErrorKind::kState, "");
}

TEST_CASE("fixture eaf") {
  std::vector<Utterance> u = ParseElan(Fixture("fixture.eaf"), "rec1");
  REQUIRE(u.size() == 1);
  CHECK(u[0].start_ms == 1000);
  CHECK(u[0].end_ms == 2500);
  CHECK(u[0].text == "kato");
  CHECK(u[0].speaker_id == "spk1");
  CHECK(u[0].recording_id == "rec1");
  CHECK(u[0].id == "spk1-rec1-00001000");
}

TEST_CASE("empty tier gives no utterances") {
  std::string doc =
      "<ANNOTATION_DOCUMENT><TIME_ORDER/><TIER TIER_ID=\"T1\" PARTICIPANT=\"x\"></TIER>"
      "</ANNOTATION_DOCUMENT>";
  CHECK(ParseElan(doc, "r").empty());
  CHECK(ParseElan(doc, "r", std::string("T1")).empty());
}

TEST_CASE("tier selection") {
  std::string doc = Fixture("two-tiers.eaf");
  CHECK(ElanTierIds(doc) == std::vector<std::string>{"T1", "T2"});
  // By hand: T1 holds a1, T2 holds a2 and a3.
  std::vector<Utterance> t2 = ParseElan(doc, "r", std::string("T2"));
  REQUIRE(t2.size() == 2);
  CHECK(t2[0].text == "tʰi & ke");
  CHECK(t2[0].start_ms == 1200);
  CHECK(t2[1].text == "lo");
  CHECK(t2[1].end_ms == 2900);
  CHECK(t2[1].speaker_id == "spk2");
  std::vector<Utterance> first = ParseElan(doc, "r");
  REQUIRE(first.size() == 1);
  CHECK(first[0].speaker_id == "Ana_Ruiz");
  CHECK(first[0].text == "ni hao");

  Error e = CaughtError([&] { ParseElan(doc, "r", std::string("T9")); });
  CHECK(e.kind() == ErrorKind::kNotFound);
  CHECK(std::string(e.what()).find("T1, T2") != std::string::npos);
}

TEST_CASE("missing participant is unknown") {
  std::string doc =
      "<ANNOTATION_DOCUMENT><TIME_ORDER><TIME_SLOT TIME_SLOT_ID=\"a\" TIME_VALUE=\"5\"/>"
      "<TIME_SLOT TIME_SLOT_ID=\"b\" TIME_VALUE=\"9\"/></TIME_ORDER><TIER TIER_ID=\"X\">"
      "<ANNOTATION><ALIGNABLE_ANNOTATION ANNOTATION_ID=\"q\" TIME_SLOT_REF1=\"a\" "
      "TIME_SLOT_REF2=\"b\"><ANNOTATION_VALUE>z</ANNOTATION_VALUE></ALIGNABLE_ANNOTATION>"
      "</ANNOTATION></TIER></ANNOTATION_DOCUMENT>";
  std::vector<Utterance> u = ParseElan(doc, "r");
  REQUIRE(u.size() == 1);
  CHECK(u[0].speaker_id == "unknown");
  CHECK(u[0].id == "unknown-r-00000005");
}

TEST_CASE("structural and parse errors") {
  std::string dangling =
      "<ANNOTATION_DOCUMENT><TIME_ORDER><TIME_SLOT TIME_SLOT_ID=\"a\" TIME_VALUE=\"5\"/>"
      "</TIME_ORDER><TIER TIER_ID=\"X\"><ANNOTATION><ALIGNABLE_ANNOTATION "
      "ANNOTATION_ID=\"a77\" TIME_SLOT_REF1=\"a\" TIME_SLOT_REF2=\"nope\">"
      "<ANNOTATION_VALUE>z</ANNOTATION_VALUE></ALIGNABLE_ANNOTATION></ANNOTATION></TIER>"
      "</ANNOTATION_DOCUMENT>";
  Error e = CaughtError([&] { ParseElan(dangling, "r"); });
  CHECK(e.kind() == ErrorKind::kStructure);
  CHECK(std::string(e.what()).find("a77") != std::string::npos);

  Error p = CaughtError([&] { ParseElan("<ANNOTATION_DOCUMENT>\n  <TIER>\n</ANNOTATION_DOCUMENT>", "r"); });
  CHECK(p.kind() == ErrorKind::kParse);
  CHECK(std::string(p.what()).find("line 3") != std::string::npos);
  CHECK(std::string(p.what()).find("column") != std::string::npos);
}

TEST_CASE("text is NFC normalized") {
  std::string doc =
      "<ANNOTATION_DOCUMENT><TIME_ORDER><TIME_SLOT TIME_SLOT_ID=\"a\" TIME_VALUE=\"0\"/>"
      "<TIME_SLOT TIME_SLOT_ID=\"b\" TIME_VALUE=\"9\"/></TIME_ORDER><TIER TIER_ID=\"X\">"
      "<ANNOTATION><ALIGNABLE_ANNOTATION ANNOTATION_ID=\"q\" TIME_SLOT_REF1=\"a\" "
      "TIME_SLOT_REF2=\"b\"><ANNOTATION_VALUE>e\xCC\x81</ANNOTATION_VALUE>"
      "</ALIGNABLE_ANNOTATION></ANNOTATION></TIER></ANNOTATION_DOCUMENT>";
  CHECK(ParseElan(doc, "r")[0].text == "\xC3\xA9");
}

TEST_CASE("seconds to milliseconds, round half up") {
  CHECK(SecondsToMs("1.0") == 1000);
  CHECK(SecondsToMs("2.5") == 2500);
  CHECK(SecondsToMs("12") == 12000);
  CHECK(SecondsToMs(".25") == 250);
  CHECK(SecondsToMs("1.0005") == 1001);
  CHECK(SecondsToMs("1.00049999") == 1000);
  CHECK(SecondsToMs("0.9995") == 1000);
  CHECK_THROWS_AS(SecondsToMs("-1"), Error);
  CHECK_THROWS_AS(SecondsToMs("1e3"), Error);
  CHECK_THROWS_AS(SecondsToMs(""), Error);
}

TEST_CASE("pangloss fixture converts to the same utterance as the eaf") {
  std::vector<Utterance> via = ParseElan(PanglossToElan(Fixture("fixture-pangloss.xml")), "rec1");
  REQUIRE(via.size() == 1);
  CHECK(via[0].start_ms == 1000);
  CHECK(via[0].end_ms == 2500);
  CHECK(via[0].text == "kato");
  std::vector<Utterance> direct = ParseElan(Fixture("fixture.eaf"), "rec1");
  CHECK(via[0].text == direct[0].text);
  CHECK(via[0].start_ms == direct[0].start_ms);
  CHECK(via[0].end_ms == direct[0].end_ms);
}

TEST_CASE("pangloss with three sentences matches a hand transcription") {
  std::vector<Utterance> u = ParseElan(PanglossToElan(Fixture("three-segments.xml")), "r");
  struct Row {
    int64_t start, end;
    const char *text;
  };
  const Row expected[] = {{250, 1001, "ʈʂʰə˧ mv̩˩"}, {1500, 2750, "a < b"}, {3000, 4123, "ɲi˧"}};
  REQUIRE(u.size() == 3);
  for (int i = 0; i < 3; ++i) {
    CHECK(u[i].start_ms == expected[i].start);
    CHECK(u[i].end_ms == expected[i].end);
    CHECK(u[i].text == NormalizeNfc(expected[i].text));
    CHECK(u[i].speaker_id == "unknown");
  }
}

TEST_CASE("pangloss edge cases") {
  std::string empty = PanglossToElan("<TEXT id=\"x\"></TEXT>");
  CHECK(ParseElan(empty, "r").empty());
  CHECK(ElanTierIds(empty) == std::vector<std::string>{"T1"});

  Error no_form = CaughtError(
      [] { PanglossToElan("<TEXT><S id=\"S7\"><AUDIO start=\"1\" end=\"2\"/></S></TEXT>"); });
  CHECK(no_form.kind() == ErrorKind::kStructure);
  CHECK(std::string(no_form.what()).find("S7") != std::string::npos);
  Error no_audio = CaughtError([] { PanglossToElan("<TEXT><S id=\"S8\"><FORM>a</FORM></S></TEXT>"); });
  CHECK(std::string(no_audio.what()).find("S8") != std::string::npos);
  Error backwards = CaughtError([] {
    PanglossToElan("<TEXT><S id=\"S9\"><AUDIO start=\"2\" end=\"2\"/><FORM>a</FORM></S></TEXT>");
  });
  CHECK(backwards.kind() == ErrorKind::kRange);
}

TEST_CASE("ingest pairs transcriptions with audio") {
  fs::path dir = fs::temp_directory_path() / "fieldasr-elan-test";
  fs::create_directories(dir);
  std::vector<double> silence(16000 * 3, 0.0);
  WriteWavFile(dir / "fixture.wav", silence, 16000);
  std::vector<TranscriptionFile> files = {{"fixture.eaf", Fixture("fixture.eaf")}};
  IngestOptions opts;
  opts.genres["fixture"] = "narrative";
  IngestResult r = BuildCorpus(files, {{"fixture", dir / "fixture.wav"}}, opts);
  CHECK(r.problems.empty());
  REQUIRE(r.corpus.utterances.size() == 1);
  CHECK(r.corpus.utterances[0].genre == std::optional<std::string>("narrative"));
  CHECK(r.corpus.recordings[0].duration_ms == 3000);
  CorpusSummary s = Summarize(r.corpus);
  CHECK(s.utterances == 1);
  CHECK(s.speakers == std::vector<std::string>{"spk1"});

  // Same summary through the Pangloss route.
  IngestResult p = BuildCorpus({{"fixture.xml", Fixture("fixture-pangloss.xml")}},
                               {{"fixture", dir / "fixture.wav"}}, {});
  REQUIRE(p.corpus.utterances.size() == 1);
  CHECK(p.corpus.utterances[0].text == "kato");
  CHECK(Summarize(p.corpus).utterances == 1);

  IngestResult missing = BuildCorpus(files, {}, opts);
  REQUIRE(missing.problems.size() == 1);
  CHECK(missing.problems[0].kind == ErrorKind::kNotFound);
  CHECK(missing.problems[0].message.find("fixture") != std::string::npos);

  WriteWavFile(dir / "short.wav", std::vector<double>(16000, 0.0), 16000);
  IngestResult too_short = BuildCorpus(files, {{"fixture", dir / "short.wav"}}, opts);
  REQUIRE(too_short.problems.size() == 1);
  CHECK(too_short.problems[0].kind == ErrorKind::kRange);

  SaveCorpus(r.corpus, dir / "corpus.json");
  CHECK(LoadCorpus(dir / "corpus.json") == r.corpus);
  fs::remove_all(dir);
}

}  // namespace fieldasr
