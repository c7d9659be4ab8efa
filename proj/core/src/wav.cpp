// core/src/wav.cpp

// Copyright 2026  The HGS Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "hgs/wav.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "hgs/errors.hpp"

namespace hgs {
namespace {

std::uint32_t rd_u32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) |
         (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) |
         (static_cast<std::uint32_t>(p[3]) << 24);
}

std::uint16_t rd_u16(const unsigned char* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

void wr_u32(std::ostream& out, std::uint32_t v) {
  unsigned char b[4] = {static_cast<unsigned char>(v & 0xff),
                        static_cast<unsigned char>((v >> 8) & 0xff),
                        static_cast<unsigned char>((v >> 16) & 0xff),
                        static_cast<unsigned char>((v >> 24) & 0xff)};
  out.write(reinterpret_cast<char*>(b), 4);
}

void wr_u16(std::ostream& out, std::uint16_t v) {
  unsigned char b[2] = {static_cast<unsigned char>(v & 0xff),
                        static_cast<unsigned char>((v >> 8) & 0xff)};
  out.write(reinterpret_cast<char*>(b), 2);
}

}  // namespace

AudioBuffer load_wav(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MissingFileError("audio file not found: " + path);
  unsigned char hdr[12];
  in.read(reinterpret_cast<char*>(hdr), 12);
  if (!in || std::memcmp(hdr, "RIFF", 4) != 0 ||
      std::memcmp(hdr + 8, "WAVE", 4) != 0) {
    throw SchemaError("not a RIFF/WAVE file: " + path);
  }
  AudioBuffer audio;
  int bits = 0, channels = 0;
  bool got_fmt = false, got_data = false;
  // Chunk walk; only "fmt " and "data" matter.
  while (in && !got_data) {
    unsigned char chdr[8];
    in.read(reinterpret_cast<char*>(chdr), 8);
    if (!in) break;
    const std::uint32_t size = rd_u32(chdr + 4);
    if (std::memcmp(chdr, "fmt ", 4) == 0) {
      std::vector<unsigned char> body(size);
      in.read(reinterpret_cast<char*>(body.data()), size);
      if (!in || size < 16) throw SchemaError("bad fmt chunk: " + path);
      const std::uint16_t format = rd_u16(body.data());
      channels = rd_u16(body.data() + 2);
      audio.sample_rate_hz = static_cast<int>(rd_u32(body.data() + 4));
      bits = rd_u16(body.data() + 14);
      if (format != 1) throw SchemaError("not PCM: " + path);
      got_fmt = true;
    } else if (std::memcmp(chdr, "data", 4) == 0) {
      if (!got_fmt) throw SchemaError("data before fmt: " + path);
      if (channels != 1 || bits != 16) {
        throw SchemaError("expected mono 16-bit PCM: " + path);
      }
      const std::size_t n = size / 2;
      std::vector<unsigned char> raw(size);
      in.read(reinterpret_cast<char*>(raw.data()), size);
      if (!in) throw SchemaError("truncated data chunk: " + path);
      audio.samples.resize(n);
      for (std::size_t i = 0; i < n; ++i) {
        const std::int16_t s = static_cast<std::int16_t>(
            raw[2 * i] | (raw[2 * i + 1] << 8));
        audio.samples[i] = static_cast<float>(s) / 32768.0f;
      }
      got_data = true;
    } else {
      in.seekg(size + (size & 1), std::ios::cur);
    }
  }
  if (!got_data) throw SchemaError("no data chunk: " + path);
  return audio;
}

void save_wav(const std::string& path, const AudioBuffer& audio) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open for write: " + path);
  const std::uint32_t n = static_cast<std::uint32_t>(audio.samples.size());
  const std::uint32_t data_bytes = n * 2;
  out.write("RIFF", 4);
  wr_u32(out, 36 + data_bytes);
  out.write("WAVE", 4);
  out.write("fmt ", 4);
  wr_u32(out, 16);
  wr_u16(out, 1);  // PCM
  wr_u16(out, 1);  // mono
  wr_u32(out, static_cast<std::uint32_t>(audio.sample_rate_hz));
  wr_u32(out, static_cast<std::uint32_t>(audio.sample_rate_hz) * 2);
  wr_u16(out, 2);   // block align
  wr_u16(out, 16);  // bits
  out.write("data", 4);
  wr_u32(out, data_bytes);
  for (std::uint32_t i = 0; i < n; ++i) {
    const float clamped = std::clamp(audio.samples[i], -1.0f, 1.0f);
    const long scaled = std::lround(static_cast<double>(clamped) * 32767.0);
    const std::int16_t s = static_cast<std::int16_t>(
        std::clamp(scaled, -32768l, 32767l));
    wr_u16(out, static_cast<std::uint16_t>(s));
  }
  if (!out) throw IoError("short write: " + path);
}

}  // namespace hgs
