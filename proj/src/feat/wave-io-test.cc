// feat/wave-io-test.cc

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

#include <cstring>
#include <filesystem>

#include "base/error.h"
#include "base/io-util.h"
#include "feat/wave-io.h"

namespace fieldasr {

// Hand-built RIFF header so the reader is not only tested against our writer.
static std::string RawWav(int rate, int channels, int bits, int format,
                          const std::vector<int16_t> &samples) {
  auto u16 = [](std::string *s, uint16_t v) {
    s->push_back(static_cast<char>(v & 0xff));
    s->push_back(static_cast<char>(v >> 8));
  };
  std::string data;
  for (int16_t x : samples) u16(&data, static_cast<uint16_t>(x));
  std::string out = "RIFF";
  PutU32(&out, static_cast<uint32_t>(36 + data.size()));
  out += "WAVEfmt ";
  PutU32(&out, 16);
  u16(&out, static_cast<uint16_t>(format));
  u16(&out, static_cast<uint16_t>(channels));
  PutU32(&out, static_cast<uint32_t>(rate));
  PutU32(&out, static_cast<uint32_t>(rate * channels * bits / 8));
  u16(&out, static_cast<uint16_t>(channels * bits / 8));
  u16(&out, static_cast<uint16_t>(bits));
  out += "data";
  PutU32(&out, static_cast<uint32_t>(data.size()));
  return out + data;
}

static ErrorKind KindOf(auto &&fn) {
  try {
    fn();
  } catch (const Error &e) {
    return e.kind();
  }
  FAIL("no error thrown");
  return ErrorKind::kState;
}

TEST_CASE("one second of silence") {
  std::string bytes = RawWav(16000, 1, 16, 1, std::vector<int16_t>(16000, 0));
  std::vector<double> s = DecodeWav(bytes, 0, 1000, 16000);
  CHECK(s.size() == 16000);
  for (double x : s) CHECK(x == 0.0);
  CHECK(ParseWaveHeader(bytes).duration_ms() == 1000);
}

TEST_CASE("int16 scaling") {
  std::string bytes = RawWav(16000, 1, 16, 1, std::vector<int16_t>(32, 32767));
  std::vector<double> s = DecodeWav(bytes, 16000);
  REQUIRE(s.size() == 32);
  CHECK(s[0] == 32767.0 / 32768.0);
  CHECK(s[0] == doctest::Approx(0.99997).epsilon(1e-5));
  std::string neg = RawWav(16000, 1, 16, 1, std::vector<int16_t>(4, -32768));
  CHECK(DecodeWav(neg, 16000)[0] == -1.0);
}

TEST_CASE("stereo x and -x averages to zero") {
  std::vector<int16_t> inter;
  for (int i = 0; i < 1600; ++i) {
    int16_t x = static_cast<int16_t>((i * 37) % 20000 - 10000);
    inter.push_back(x);
    inter.push_back(static_cast<int16_t>(-x));
  }
  std::string bytes = RawWav(16000, 2, 16, 1, inter);
  std::vector<double> s = DecodeWav(bytes, 0, 100, 16000);
  CHECK(s.size() == 1600);
  for (double x : s) CHECK(x == 0.0);
}

TEST_CASE("slice covers start to end") {
  std::vector<int16_t> ramp(16000);
  for (int i = 0; i < 16000; ++i) ramp[i] = static_cast<int16_t>(i);
  std::string bytes = RawWav(16000, 1, 16, 1, ramp);
  std::vector<double> s = DecodeWav(bytes, 250, 500, 16000);
  REQUIRE(s.size() == 4000);
  CHECK(s.front() == 4000 / 32768.0);
  CHECK(s.back() == 7999 / 32768.0);
}

TEST_CASE("format and range errors") {
  std::string ok = RawWav(16000, 1, 16, 1, std::vector<int16_t>(1600, 0));
  CHECK(KindOf([&] { DecodeWav(ok, 0, 200, 16000); }) == ErrorKind::kRange);
  CHECK(KindOf([&] { DecodeWav(ok, 50, 50, 16000); }) == ErrorKind::kRange);
  CHECK(KindOf([&] { DecodeWav(ok, -1, 50, 16000); }) == ErrorKind::kRange);
  try {
    DecodeWav(ok, 8000);
    FAIL("expected");
  } catch (const Error &e) {
    CHECK(e.kind() == ErrorKind::kFormat);
    CHECK(std::string(e.what()).find("sample_rate") != std::string::npos);
  }
  std::string flt = RawWav(16000, 1, 16, 3, std::vector<int16_t>(10, 0));
  try {
    ParseWaveHeader(flt);
    FAIL("expected");
  } catch (const Error &e) {
    CHECK(e.kind() == ErrorKind::kFormat);
    CHECK(std::string(e.what()).find("audio_format") != std::string::npos);
  }
  std::string eight = RawWav(16000, 1, 8, 1, std::vector<int16_t>(10, 0));
  try {
    ParseWaveHeader(eight);
    FAIL("expected");
  } catch (const Error &e) {
    CHECK(std::string(e.what()).find("bits_per_sample") != std::string::npos);
  }
  CHECK(KindOf([&] { ParseWaveHeader("not a wav file at all, clearly"); }) ==
        ErrorKind::kFormat);
}

TEST_CASE("writer round trip through a file") {
  std::vector<double> s = {0.0, 0.5, -0.5, 0.25, 1.0, -1.0};
  auto path = std::filesystem::temp_directory_path() / "fieldasr-wave-io-test.wav";
  WriteWavFile(path, s, 8000);
  WaveInfo info = ReadWaveInfo(path);
  CHECK(info.sample_rate == 8000);
  CHECK(info.num_frames == 6);
  std::vector<double> back = DecodeWav(ReadFileBytes(path), 8000);
  REQUIRE(back.size() == 6);
  CHECK(back[1] == doctest::Approx(0.5).epsilon(1e-4));
  CHECK(back[5] == -1.0);
  std::filesystem::remove(path);
}

}  // namespace fieldasr
