// feat/wave-io.cc

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

#include "feat/wave-io.h"

#include <algorithm>
#include <cmath>

#include "base/error.h"
#include "base/io-util.h"

namespace fieldasr {

namespace {

uint32_t Le32(std::string_view b, size_t at) {
  uint32_t v = 0;
  for (int i = 0; i < 4; ++i)
    v |= static_cast<uint32_t>(static_cast<unsigned char>(b[at + i])) << (8 * i);
  return v;
}

uint16_t Le16(std::string_view b, size_t at) {
  return static_cast<uint16_t>(static_cast<unsigned char>(b[at]) |
                               (static_cast<unsigned char>(b[at + 1]) << 8));
}

constexpr uint16_t kFormatPcm = 1;
constexpr uint16_t kFormatExtensible = 0xFFFE;

}  // namespace

WaveInfo ParseWaveHeader(std::string_view bytes) {
  if (bytes.size() < 12 || bytes.substr(0, 4) != "RIFF" || bytes.substr(8, 4) != "WAVE")
    Fail(ErrorKind::kFormat, "not a RIFF/WAVE file (bad riff_header)");
  WaveInfo info;
  bool have_fmt = false;
  size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    std::string_view id = bytes.substr(pos, 4);
    size_t size = Le32(bytes, pos + 4);
    size_t body = pos + 8;
    if (id == "fmt ") {
      if (size < 16 || body + size > bytes.size())
        Fail(ErrorKind::kFormat, "truncated fmt chunk (fmt_size)");
      info.audio_format = Le16(bytes, body);
      info.num_channels = Le16(bytes, body + 2);
      info.sample_rate = static_cast<int>(Le32(bytes, body + 4));
      info.bits_per_sample = Le16(bytes, body + 14);
      if (info.audio_format == kFormatExtensible && size >= 40)
        info.audio_format = Le16(bytes, body + 24);  // sub-format GUID prefix
      have_fmt = true;
    } else if (id == "data") {
      if (!have_fmt) Fail(ErrorKind::kFormat, "data chunk before fmt chunk (fmt)");
      size_t avail = std::min(size, bytes.size() - body);
      if (info.audio_format != kFormatPcm)
        Fail(ErrorKind::kFormat, "unsupported audio_format ", info.audio_format,
             " (only PCM is supported)");
      if (info.bits_per_sample != 16)
        Fail(ErrorKind::kFormat, "unsupported bits_per_sample ", info.bits_per_sample,
             " (only 16-bit PCM is supported)");
      if (info.num_channels < 1 || info.num_channels > 2)
        Fail(ErrorKind::kFormat, "unsupported num_channels ", info.num_channels);
      if (info.sample_rate <= 0)
        Fail(ErrorKind::kFormat, "invalid sample_rate ", info.sample_rate);
      info.data_offset = body;
      info.num_frames = avail / (2 * static_cast<size_t>(info.num_channels));
      return info;
    }
    pos = body + size + (size & 1);
  }
  Fail(ErrorKind::kFormat, have_fmt ? "missing data chunk (data)" : "missing fmt chunk (fmt)");
}

WaveInfo ReadWaveInfo(const std::filesystem::path &path) {
  return ParseWaveHeader(ReadFileBytes(path));
}

namespace {

void CheckRate(const WaveInfo &info, int expected_rate) {
  if (info.sample_rate != expected_rate)
    Fail(ErrorKind::kFormat, "sample_rate ", info.sample_rate, " does not match expected ",
         expected_rate, " (resampling is not supported)");
}

std::vector<double> DecodeFrames(std::string_view bytes, const WaveInfo &info, size_t first,
                                 size_t last) {
  const size_t ch = static_cast<size_t>(info.num_channels);
  std::vector<double> out(last - first);
  for (size_t i = first; i < last; ++i) {
    double acc = 0.0;
    for (size_t c = 0; c < ch; ++c) {
      int16_t s = static_cast<int16_t>(Le16(bytes, info.data_offset + 2 * (i * ch + c)));
      acc += s / 32768.0;
    }
    out[i - first] = acc / static_cast<double>(ch);
  }
  return out;
}

}  // namespace

std::vector<double> DecodeWav(std::string_view bytes, int64_t start_ms, int64_t end_ms,
                              int expected_rate) {
  WaveInfo info = ParseWaveHeader(bytes);
  CheckRate(info, expected_rate);
  if (start_ms < 0 || end_ms <= start_ms)
    Fail(ErrorKind::kRange, "invalid slice [", start_ms, ", ", end_ms, ") ms");
  size_t first = static_cast<size_t>(start_ms * info.sample_rate / 1000);
  size_t last = static_cast<size_t>(end_ms * info.sample_rate / 1000);
  if (last > info.num_frames)
    Fail(ErrorKind::kRange, "slice [", start_ms, ", ", end_ms, ") ms exceeds audio of ",
         info.duration_ms(), " ms");
  return DecodeFrames(bytes, info, first, last);
}

std::vector<double> DecodeWav(std::string_view bytes, int expected_rate) {
  WaveInfo info = ParseWaveHeader(bytes);
  CheckRate(info, expected_rate);
  return DecodeFrames(bytes, info, 0, info.num_frames);
}

std::vector<double> DecodeWavFile(const std::filesystem::path &path, int64_t start_ms,
                                  int64_t end_ms, int expected_rate) {
  return DecodeWav(ReadFileBytes(path), start_ms, end_ms, expected_rate);
}

std::string EncodeWav(std::span<const double> samples, int sample_rate, int num_channels) {
  std::string out = "RIFF";
  const uint32_t data_bytes = static_cast<uint32_t>(samples.size() * 2);
  PutU32(&out, 36 + data_bytes);
  out += "WAVEfmt ";
  PutU32(&out, 16);
  auto put16 = [&](uint16_t v) {
    out.push_back(static_cast<char>(v & 0xFF));
    out.push_back(static_cast<char>(v >> 8));
  };
  put16(kFormatPcm);
  put16(static_cast<uint16_t>(num_channels));
  PutU32(&out, static_cast<uint32_t>(sample_rate));
  PutU32(&out, static_cast<uint32_t>(sample_rate * num_channels * 2));
  put16(static_cast<uint16_t>(num_channels * 2));
  put16(16);
  out += "data";
  PutU32(&out, data_bytes);
  for (double s : samples) {
    double v = std::clamp(std::round(s * 32768.0), -32768.0, 32767.0);
    put16(static_cast<uint16_t>(static_cast<int16_t>(v)));
  }
  return out;
}

void WriteWavFile(const std::filesystem::path &path, std::span<const double> samples,
                  int sample_rate, int num_channels) {
  WriteFileBytes(path, EncodeWav(samples, sample_rate, num_channels));
}

}  // namespace fieldasr
