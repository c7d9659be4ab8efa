// core/src/features.cpp

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

#include "hgs/features.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <vector>

#include "hgs/errors.hpp"

namespace hgs {
namespace {

// Float payloads are written raw; the format is defined little-endian.
static_assert(std::endian::native == std::endian::little,
              "feature files require a little-endian host");

constexpr char kMagic[4] = {'H', 'G', 'F', '1'};

std::uint32_t read_u32_le(std::istream& in) {
  unsigned char b[4];
  in.read(reinterpret_cast<char*>(b), 4);
  return static_cast<std::uint32_t>(b[0]) |
         (static_cast<std::uint32_t>(b[1]) << 8) |
         (static_cast<std::uint32_t>(b[2]) << 16) |
         (static_cast<std::uint32_t>(b[3]) << 24);
}

void write_u32_le(std::ostream& out, std::uint32_t v) {
  unsigned char b[4] = {static_cast<unsigned char>(v & 0xff),
                        static_cast<unsigned char>((v >> 8) & 0xff),
                        static_cast<unsigned char>((v >> 16) & 0xff),
                        static_cast<unsigned char>((v >> 24) & 0xff)};
  out.write(reinterpret_cast<char*>(b), 4);
}

}  // namespace

FeatureSequence load_features(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MissingFileError("feature file not found: " + path);
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kMagic, 4) != 0) {
    throw SchemaError("bad feature-file magic in " + path);
  }
  const std::uint32_t t = read_u32_le(in);
  const std::uint32_t d = read_u32_le(in);
  if (!in || t == 0 || d == 0) {
    throw SchemaError("bad feature-file header in " + path);
  }
  FeatureSequence f;
  f.values = Mat<float>(static_cast<int>(t), static_cast<int>(d));
  static_assert(sizeof(float) == 4, "float must be 32-bit");
  in.read(reinterpret_cast<char*>(f.values.data()),
          static_cast<std::streamsize>(sizeof(float) * t * d));
  if (!in) throw SchemaError("truncated feature file: " + path);
  if (!f.values.all_finite()) {
    throw SchemaError("non-finite values in feature file: " + path);
  }
  return f;
}

void save_features(const std::string& path, const FeatureSequence& f) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open for write: " + path);
  out.write(kMagic, 4);
  write_u32_le(out, static_cast<std::uint32_t>(f.values.rows));
  write_u32_le(out, static_cast<std::uint32_t>(f.values.cols));
  out.write(reinterpret_cast<const char*>(f.values.data()),
            static_cast<std::streamsize>(sizeof(float) * f.values.a.size()));
  if (!out) throw IoError("short write: " + path);
}

}  // namespace hgs
