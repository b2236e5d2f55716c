// feat/wave-io.h

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

#ifndef FIELDASR_FEAT_WAVE_IO_H_
#define FIELDASR_FEAT_WAVE_IO_H_

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace fieldasr {

// RIFF/WAVE, 16-bit PCM only.
struct WaveInfo {
  int sample_rate = 0;
  int num_channels = 0;
  int bits_per_sample = 0;
  int audio_format = 0;
  size_t num_frames = 0;    // samples per channel
  size_t data_offset = 0;   // byte offset of the sample data
  // Floor of the exact duration, so [0, duration_ms) is always in range.
  int64_t duration_ms() const {
    return sample_rate > 0 ? static_cast<int64_t>(num_frames) * 1000 / sample_rate : 0;
  }
};

// Validates the header; throws kFormat naming the offending header field.
WaveInfo ParseWaveHeader(std::string_view bytes);
WaveInfo ReadWaveInfo(const std::filesystem::path &path);

// Mono samples in [-1, 1) covering [start_ms, end_ms). Stereo is averaged.
// Throws kFormat if the rate differs from expected_rate, kRange if the slice
// is empty or runs past the end of the audio.
std::vector<double> DecodeWav(std::string_view bytes, int64_t start_ms, int64_t end_ms,
                              int expected_rate);
std::vector<double> DecodeWavFile(const std::filesystem::path &path, int64_t start_ms,
                                  int64_t end_ms, int expected_rate);
// Whole file.
std::vector<double> DecodeWav(std::string_view bytes, int expected_rate);

// Interleaved samples in [-1, 1], clipped and rounded to int16.
std::string EncodeWav(std::span<const double> samples, int sample_rate, int num_channels = 1);
void WriteWavFile(const std::filesystem::path &path, std::span<const double> samples,
                  int sample_rate, int num_channels = 1);

}  // namespace fieldasr

#endif  // FIELDASR_FEAT_WAVE_IO_H_
