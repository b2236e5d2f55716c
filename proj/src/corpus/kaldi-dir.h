// corpus/kaldi-dir.h

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

#ifndef FIELDASR_CORPUS_KALDI_DIR_H_
#define FIELDASR_CORPUS_KALDI_DIR_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "corpus/corpus.h"

namespace fieldasr {

// Writes wav.scp, segments, text and utt2spk, each sorted by first field.
// Returns the written paths. kIo when dest cannot be written, kIntegrity on
// duplicate ids, kFormat if a transcript contains a line break.
std::vector<std::filesystem::path> WriteKaldiDir(const Corpus &corpus,
                                                 const std::filesystem::path &dest);

// Inverse of WriteKaldiDir. Recording rate and duration come from the WAV
// header when the file is readable; otherwise 16 kHz and the last segment
// end are assumed.
Corpus ReadKaldiDir(const std::filesystem::path &dir);

// "1.000" style rendering and parsing of millisecond times.
std::string FormatSeconds(int64_t ms);
int64_t ParseSeconds(std::string_view s);

// recording-id<TAB>genre lines; blank lines and '#' comments are skipped.
std::map<std::string, std::string> ParseGenreManifest(std::string_view text);

}  // namespace fieldasr

#endif  // FIELDASR_CORPUS_KALDI_DIR_H_
