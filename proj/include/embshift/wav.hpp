// Copyright 2026 The embshift Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef EMBSHIFT_WAV_HPP_
#define EMBSHIFT_WAV_HPP_

#include <string>

#include "embshift/types.hpp"

namespace embshift::io {

// Reads a mono RIFF/WAVE file, either 16-bit PCM or 32-bit IEEE float.
// PCM samples are scaled by 1/32768; float samples are taken as-is.
// The clip id is set to `id` (or the path when `id` is empty).
// Throws UnsupportedFormat for other layouts, CorruptFile on bad structure.
AudioClip read_wav(const std::string& path, const std::string& id = "");

// Writes a mono float32 WAV. Samples are written as-is (no clamping), so
// read_wav(write_wav(x)) is bit-exact on the float payload.
void write_wav(const AudioClip& clip, const std::string& path);

}  // namespace embshift::io

#endif  // EMBSHIFT_WAV_HPP_
