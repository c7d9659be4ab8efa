// core/src/checkpoint.cpp

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

#include "hgs/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <map>

#include "hgs/errors.hpp"

namespace hgs {

static_assert(std::endian::native == std::endian::little,
              "checkpoint I/O assumes a little-endian host");

namespace {

constexpr char kMagic[4] = {'H', 'G', 'C', '1'};
constexpr std::uint32_t kVersion = 1;

void write_u32(std::ostream& out, std::uint32_t v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(v));
}

void write_u64(std::ostream& out, std::uint64_t v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(v));
}

void write_i32(std::ostream& out, std::int32_t v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(v));
}

std::uint32_t read_u32(std::istream& in, const std::string& what) {
  std::uint32_t v = 0;
  in.read(reinterpret_cast<char*>(&v), sizeof(v));
  if (!in) throw IoError("checkpoint: short read at " + what);
  return v;
}

std::uint64_t read_u64(std::istream& in, const std::string& what) {
  std::uint64_t v = 0;
  in.read(reinterpret_cast<char*>(&v), sizeof(v));
  if (!in) throw IoError("checkpoint: short read at " + what);
  return v;
}

std::int32_t read_i32(std::istream& in, const std::string& what) {
  std::int32_t v = 0;
  in.read(reinterpret_cast<char*>(&v), sizeof(v));
  if (!in) throw IoError("checkpoint: short read at " + what);
  return v;
}

void write_group(std::ostream& out, const std::string& name,
                 const Mat<float>& m) {
  write_u32(out, static_cast<std::uint32_t>(name.size()));
  out.write(name.data(), static_cast<std::streamsize>(name.size()));
  write_u32(out, static_cast<std::uint32_t>(m.rows));
  write_u32(out, static_cast<std::uint32_t>(m.cols));
  out.write(reinterpret_cast<const char*>(m.data()),
            static_cast<std::streamsize>(m.size() * sizeof(float)));
}

}  // namespace

void save_checkpoint(const std::string& path, const Checkpoint& ckpt) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("checkpoint: cannot open for write: " + path);
  out.write(kMagic, 4);
  write_u32(out, kVersion);
  const ModelDims& d = ckpt.dims;
  write_i32(out, d.d);
  write_i32(out, d.num_classes);
  write_i32(out, d.n_heads);
  write_i32(out, d.n_blocks);
  write_i32(out, d.d_ff);
  write_i32(out, d.lstm_hidden);
  write_i32(out, d.max_positions);
  write_i32(out, d.pool_kernel);
  write_i32(out, static_cast<std::int32_t>(d.encoder.kind));
  write_i32(out, d.encoder.d);
  write_i32(out, d.encoder.downsample);
  write_i32(out, d.encoder.channels);
  write_i32(out, d.encoder.trainable ? 1 : 0);
  write_u64(out, ckpt.seed);
  write_u64(out, ckpt.step);

  std::uint32_t n_groups = 0;
  auto count = [&n_groups](const std::string&, const Mat<float>&) {
    ++n_groups;
  };
  for_each_param(ckpt.teacher, count);
  for_each_param(ckpt.student, count);
  write_u32(out, n_groups);
  for_each_param(ckpt.teacher,
                 [&out](const std::string& name, const Mat<float>& m) {
                   write_group(out, "teacher/" + name, m);
                 });
  for_each_param(ckpt.student,
                 [&out](const std::string& name, const Mat<float>& m) {
                   write_group(out, "student/" + name, m);
                 });
  out.flush();
  if (!out) throw IoError("checkpoint: write failed: " + path);
}

Checkpoint load_checkpoint(const std::string& path) {
  if (!std::filesystem::exists(path)) {
    throw MissingFileError("checkpoint not found: " + path);
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("checkpoint: cannot open: " + path);
  char magic[4] = {0, 0, 0, 0};
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kMagic, 4) != 0) {
    throw SchemaError("checkpoint: bad magic in " + path);
  }
  const std::uint32_t version = read_u32(in, "version");
  if (version != kVersion) {
    throw SchemaError("checkpoint: unsupported version " +
                      std::to_string(version));
  }
  Checkpoint ckpt;
  ModelDims& d = ckpt.dims;
  d.d = read_i32(in, "d");
  d.num_classes = read_i32(in, "num_classes");
  d.n_heads = read_i32(in, "n_heads");
  d.n_blocks = read_i32(in, "n_blocks");
  d.d_ff = read_i32(in, "d_ff");
  d.lstm_hidden = read_i32(in, "lstm_hidden");
  d.max_positions = read_i32(in, "max_positions");
  d.pool_kernel = read_i32(in, "pool_kernel");
  const std::int32_t kind = read_i32(in, "encoder.kind");
  if (kind != 0 && kind != 1) {
    throw SchemaError("checkpoint: bad encoder kind " + std::to_string(kind));
  }
  d.encoder.kind = static_cast<EncoderKind>(kind);
  d.encoder.d = read_i32(in, "encoder.d");
  d.encoder.downsample = read_i32(in, "encoder.downsample");
  d.encoder.channels = read_i32(in, "encoder.channels");
  d.encoder.trainable = read_i32(in, "encoder.trainable") != 0;
  ckpt.seed = read_u64(in, "seed");
  ckpt.step = read_u64(in, "step");
  try {
    d.validate();
  } catch (const InvalidConfigError& e) {
    throw SchemaError(std::string("checkpoint: invalid dims: ") + e.what());
  }
  ckpt.teacher = zero_params<float>(d);
  ckpt.student = zero_params<float>(d);

  std::map<std::string, Mat<float>*> slots;
  for_each_param(ckpt.teacher,
                 [&slots](const std::string& name, Mat<float>& m) {
                   slots["teacher/" + name] = &m;
                 });
  for_each_param(ckpt.student,
                 [&slots](const std::string& name, Mat<float>& m) {
                   slots["student/" + name] = &m;
                 });
  const std::uint32_t n_groups = read_u32(in, "group count");
  if (n_groups != slots.size()) {
    throw SchemaError("checkpoint: expected " +
                      std::to_string(slots.size()) + " groups, found " +
                      std::to_string(n_groups));
  }
  std::map<std::string, bool> seen;
  for (std::uint32_t g = 0; g < n_groups; ++g) {
    const std::uint32_t name_len = read_u32(in, "group name length");
    if (name_len > 4096) {
      throw SchemaError("checkpoint: group name too long");
    }
    std::string name(name_len, '\0');
    in.read(name.data(), name_len);
    if (!in) throw IoError("checkpoint: short read at group name");
    const std::uint32_t rows = read_u32(in, name + " rows");
    const std::uint32_t cols = read_u32(in, name + " cols");
    auto it = slots.find(name);
    if (it == slots.end()) {
      throw SchemaError("checkpoint: unknown group " + name);
    }
    if (seen.count(name)) {
      throw SchemaError("checkpoint: duplicate group " + name);
    }
    seen[name] = true;
    Mat<float>& m = *it->second;
    if (static_cast<int>(rows) != m.rows || static_cast<int>(cols) != m.cols) {
      throw SchemaError("checkpoint: group " + name + " has shape " +
                        std::to_string(rows) + "x" + std::to_string(cols) +
                        ", expected " + std::to_string(m.rows) + "x" +
                        std::to_string(m.cols));
    }
    in.read(reinterpret_cast<char*>(m.data()),
            static_cast<std::streamsize>(m.size() * sizeof(float)));
    if (!in) throw IoError("checkpoint: short read in group " + name);
  }
  return ckpt;
}

}  // namespace hgs
