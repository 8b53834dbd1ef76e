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

#include "embshift/wav.hpp"

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "embshift/errors.hpp"

namespace embshift::io {

namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatIeeeFloat = 3;

std::uint32_t read_u32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) |
         (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) |
         (static_cast<std::uint32_t>(p[3]) << 24);
}

std::uint16_t read_u16(const unsigned char* p) {
  return static_cast<std::uint16_t>(p[0] |
                                    (static_cast<std::uint16_t>(p[1]) << 8));
}

void put_u32(std::string& out, std::uint32_t v) {
  out.push_back(static_cast<char>(v & 0xff));
  out.push_back(static_cast<char>((v >> 8) & 0xff));
  out.push_back(static_cast<char>((v >> 16) & 0xff));
  out.push_back(static_cast<char>((v >> 24) & 0xff));
}

void put_u16(std::string& out, std::uint16_t v) {
  out.push_back(static_cast<char>(v & 0xff));
  out.push_back(static_cast<char>((v >> 8) & 0xff));
}

float float_from_bits(std::uint32_t bits) {
  float f;
  std::memcpy(&f, &bits, sizeof(f));
  return f;
}

std::uint32_t bits_from_float(float f) {
  std::uint32_t bits;
  std::memcpy(&bits, &f, sizeof(bits));
  return bits;
}

}  // namespace

AudioClip read_wav(const std::string& path, const std::string& id) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoFailure("cannot open WAV file '" + path + "'");
  std::string bytes((std::istreambuf_iterator<char>(in)),
                    std::istreambuf_iterator<char>());
  const auto* data = reinterpret_cast<const unsigned char*>(bytes.data());
  const std::size_t size = bytes.size();

  if (size < 12 || std::memcmp(data, "RIFF", 4) != 0 ||
      std::memcmp(data + 8, "WAVE", 4) != 0) {
    throw CorruptFile("'" + path + "' is not a RIFF/WAVE file");
  }

  std::uint16_t format = 0, channels = 0, bits_per_sample = 0;
  std::uint32_t sample_rate = 0;
  bool have_fmt = false;
  std::size_t data_off = 0, data_len = 0;

  std::size_t pos = 12;
  while (pos + 8 <= size) {
    const char* chunk_id = reinterpret_cast<const char*>(data + pos);
    const std::uint32_t chunk_len = read_u32(data + pos + 4);
    const std::size_t body = pos + 8;
    if (body + chunk_len > size) {
      throw CorruptFile("'" + path + "': chunk overruns file");
    }
    if (std::memcmp(chunk_id, "fmt ", 4) == 0) {
      if (chunk_len < 16) throw CorruptFile("'" + path + "': short fmt chunk");
      format = read_u16(data + body);
      channels = read_u16(data + body + 2);
      sample_rate = read_u32(data + body + 4);
      bits_per_sample = read_u16(data + body + 14);
      have_fmt = true;
    } else if (std::memcmp(chunk_id, "data", 4) == 0) {
      data_off = body;
      data_len = chunk_len;
    }
    // Chunks are word-aligned.
    pos = body + chunk_len + (chunk_len & 1);
  }

  if (!have_fmt || data_off == 0) {
    throw CorruptFile("'" + path + "': missing fmt or data chunk");
  }
  if (channels != 1) {
    throw UnsupportedFormat("'" + path + "': " + std::to_string(channels) +
                            " channels, only mono is supported");
  }

  AudioClip clip;
  clip.id = id.empty() ? path : id;
  clip.sample_rate = static_cast<int>(sample_rate);

  if (format == kFormatPcm && bits_per_sample == 16) {
    if (data_len % 2 != 0) throw CorruptFile("'" + path + "': odd PCM16 payload");
    const std::size_t n = data_len / 2;
    clip.samples.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      const auto u = read_u16(data + data_off + 2 * i);
      const auto s = static_cast<std::int16_t>(u);
      clip.samples[i] = static_cast<double>(s) / 32768.0;
    }
  } else if (format == kFormatIeeeFloat && bits_per_sample == 32) {
    if (data_len % 4 != 0) {
      throw CorruptFile("'" + path + "': float32 payload not a multiple of 4");
    }
    const std::size_t n = data_len / 4;
    clip.samples.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      clip.samples[i] = float_from_bits(read_u32(data + data_off + 4 * i));
    }
  } else {
    throw UnsupportedFormat("'" + path + "': format " +
                            std::to_string(format) + "/" +
                            std::to_string(bits_per_sample) +
                            "-bit, need PCM16 or float32");
  }

  clip.validate();
  return clip;
}

void write_wav(const AudioClip& clip, const std::string& path) {
  for (double s : clip.samples) {
    if (!std::isfinite(s)) {
      throw InvalidArgument("write_wav: non-finite sample in '" + clip.id +
                            "'");
    }
  }
  const std::uint32_t n = static_cast<std::uint32_t>(clip.samples.size());
  const std::uint32_t data_len = n * 4;

  std::string out;
  out.reserve(58 + data_len);
  out.append("RIFF");
  put_u32(out, 50 + data_len);  // fmt(26) + fact(12) + data header(8) + WAVE(4)
  out.append("WAVE");
  out.append("fmt ");
  put_u32(out, 18);
  put_u16(out, kFormatIeeeFloat);
  put_u16(out, 1);  // channels
  put_u32(out, static_cast<std::uint32_t>(clip.sample_rate));
  put_u32(out, static_cast<std::uint32_t>(clip.sample_rate) * 4);
  put_u16(out, 4);   // block align
  put_u16(out, 32);  // bits per sample
  put_u16(out, 0);   // cbSize
  out.append("fact");
  put_u32(out, 4);
  put_u32(out, n);
  out.append("data");
  put_u32(out, data_len);
  for (std::uint32_t i = 0; i < n; ++i) {
    put_u32(out, bits_from_float(static_cast<float>(clip.samples[i])));
  }

  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoFailure("cannot open '" + path + "' for writing");
  f.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!f) throw IoFailure("short write to '" + path + "'");
}

}  // namespace embshift::io
