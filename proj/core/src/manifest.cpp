// core/src/manifest.cpp

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

#include "hgs/manifest.hpp"

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "hgs/errors.hpp"

namespace hgs {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == '\t') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

void parse_header(const std::string& line, Manifest* m) {
  std::istringstream iss(line);
  std::string tok;
  iss >> tok;
  if (tok != "#HGM1") throw SchemaError("manifest must start with #HGM1");
  while (iss >> tok) {
    if (tok.rfind("C=", 0) == 0) {
      m->num_classes = std::stoi(tok.substr(2));
    } else if (tok.rfind("sr=", 0) == 0) {
      m->sample_rate_hz = std::stoi(tok.substr(3));
    } else {
      throw SchemaError("unknown manifest header field: " + tok);
    }
  }
  if (m->num_classes < 2) throw SchemaError("manifest header: C must be >= 2");
  if (m->sample_rate_hz <= 0) throw SchemaError("manifest header: sr missing");
}

std::vector<SegmentRecord> parse_segments(const std::string& text,
                                          const std::string& id) {
  json arr;
  try {
    arr = json::parse(text);
  } catch (const json::exception& e) {
    throw SchemaError("entry " + id + ": segments not valid JSON: " + e.what());
  }
  if (!arr.is_array() || arr.empty()) {
    throw SchemaError("entry " + id + ": segments must be a non-empty array");
  }
  std::vector<SegmentRecord> segs;
  for (const auto& item : arr) {
    if (!item.is_object() || !item.contains("speaker") ||
        !item.contains("start_s") || !item.contains("end_s")) {
      throw SchemaError("entry " + id +
                        ": segment needs speaker, start_s, end_s");
    }
    SegmentRecord s;
    s.speaker = parse_speaker(item["speaker"].get<std::string>());
    s.start_s = item["start_s"].get<double>();
    s.end_s = item["end_s"].get<double>();
    if (s.end_s <= s.start_s) {
      throw SchemaError("entry " + id + ": segment duration must be > 0");
    }
    if (item.contains("session")) s.session = item["session"].get<int>();
    if (item.contains("path")) s.path = item["path"].get<std::string>();
    segs.push_back(std::move(s));
  }
  return segs;
}

}  // namespace

std::string resolve_path(const Manifest& manifest, const std::string& path) {
  fs::path p(path);
  if (p.is_absolute() || manifest.base_dir.empty()) return path;
  return (fs::path(manifest.base_dir) / p).string();
}

Manifest load_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MissingFileError("manifest not found: " + path);
  Manifest m;
  m.base_dir = fs::path(path).parent_path().string();
  std::string line;
  if (!std::getline(in, line)) throw SchemaError("empty manifest: " + path);
  parse_header(line, &m);
  std::set<std::string> seen;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto fields = split_tabs(line);
    if (fields.size() != 5) {
      throw SchemaError("manifest line " + std::to_string(lineno) +
                        ": expected 5 tab-separated fields, got " +
                        std::to_string(fields.size()));
    }
    ManifestEntry e;
    e.id = fields[0];
    if (e.id.empty()) {
      throw SchemaError("manifest line " + std::to_string(lineno) +
                        ": empty id");
    }
    if (!seen.insert(e.id).second) {
      throw SchemaError("duplicate sample id: " + e.id);
    }
    if (fields[1] == "audio") {
      e.kind = EntryKind::kAudio;
    } else if (fields[1] == "features") {
      e.kind = EntryKind::kFeatures;
    } else {
      throw SchemaError("entry " + e.id + ": kind must be audio|features");
    }
    e.path = fields[2];
    if (fields[3] != "-") {
      int value = 0;
      try {
        value = std::stoi(fields[3]);
      } catch (const std::exception&) {
        throw SchemaError("entry " + e.id + ": label must be int or \"-\"");
      }
      if (value < 0 || value >= m.num_classes) {
        throw LabelOutOfRangeError("entry " + e.id + ": label " +
                                   std::to_string(value) +
                                   " outside [0, " +
                                   std::to_string(m.num_classes) + ")");
      }
      e.label = Label{value};
    }
    e.segments = parse_segments(fields[4], e.id);
    if (e.kind == EntryKind::kAudio) {
      if (e.path == "-") {
        throw SchemaError("entry " + e.id + ": audio kind needs a path");
      }
      const std::string full = resolve_path(m, e.path);
      if (!fs::exists(full)) {
        throw MissingFileError("entry " + e.id + ": missing file " + full);
      }
    } else {
      for (const auto& s : e.segments) {
        if (s.path.empty()) {
          throw SchemaError("entry " + e.id +
                            ": features kind needs a path per segment");
        }
        const std::string full = resolve_path(m, s.path);
        if (!fs::exists(full)) {
          throw MissingFileError("entry " + e.id + ": missing file " + full);
        }
      }
    }
    m.entries.push_back(std::move(e));
  }
  return m;
}

void save_manifest(const std::string& path, const Manifest& manifest) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot open for write: " + path);
  out << "#HGM1\tC=" << manifest.num_classes << "\tsr="
      << manifest.sample_rate_hz << "\n";
  for (const auto& e : manifest.entries) {
    json arr = json::array();
    for (const auto& s : e.segments) {
      json item;
      item["speaker"] = speaker_name(s.speaker);
      item["start_s"] = s.start_s;
      item["end_s"] = s.end_s;
      if (s.session >= 0) item["session"] = s.session;
      if (!s.path.empty()) item["path"] = s.path;
      arr.push_back(std::move(item));
    }
    out << e.id << "\t"
        << (e.kind == EntryKind::kAudio ? "audio" : "features") << "\t"
        << e.path << "\t";
    if (e.label.has_value()) {
      out << e.label->class_index;
    } else {
      out << "-";
    }
    out << "\t" << arr.dump() << "\n";
  }
  if (!out) throw IoError("short write: " + path);
}

Sample load_sample(const Manifest& manifest, const ManifestEntry& entry) {
  Sample sample;
  sample.id = entry.id;
  sample.label = entry.label;
  sample.sample_rate_hz = manifest.sample_rate_hz;
  sample.feature_backed = entry.kind == EntryKind::kFeatures;
  if (!sample.feature_backed) {
    auto audio = std::make_shared<AudioBuffer>(
        load_wav(resolve_path(manifest, entry.path)));
    if (audio->sample_rate_hz != manifest.sample_rate_hz) {
      throw SchemaError("entry " + entry.id + ": file sample rate " +
                        std::to_string(audio->sample_rate_hz) +
                        " != manifest sr " +
                        std::to_string(manifest.sample_rate_hz));
    }
    sample.audio = std::move(audio);
  }

  const bool explicit_sessions = !entry.segments.empty() &&
                                 entry.segments.front().session >= 0;
  int current_key = explicit_sessions ? entry.segments.front().session : 0;
  Speaker prev = Speaker::kInv;
  bool first = true;
  DialogueSession cur;
  for (const auto& seg : entry.segments) {
    bool boundary = false;
    if (explicit_sessions) {
      if (seg.session < 0) {
        throw SchemaError("entry " + entry.id +
                          ": mixed explicit/implicit session keys");
      }
      boundary = seg.session != current_key;
      current_key = seg.session;
    } else {
      boundary = !first && seg.speaker == Speaker::kInv &&
                 prev == Speaker::kPar;
    }
    if (boundary && !cur.utterances.empty()) {
      sample.sessions.push_back(std::move(cur));
      cur = DialogueSession{};
    }
    Utterance u;
    u.speaker = seg.speaker;
    u.start_s = seg.start_s;
    u.end_s = seg.end_s;
    if (!seg.path.empty()) u.feature_path = resolve_path(manifest, seg.path);
    cur.utterances.push_back(std::move(u));
    prev = seg.speaker;
    first = false;
  }
  if (!cur.utterances.empty()) sample.sessions.push_back(std::move(cur));
  if (sample.sessions.empty()) {
    throw SchemaError("entry " + entry.id + ": no utterances");
  }
  return sample;
}

}  // namespace hgs
