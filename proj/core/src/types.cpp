// core/src/types.cpp

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

#include "hgs/types.hpp"

#include "hgs/errors.hpp"

namespace hgs {

std::string speaker_name(Speaker s) {
  return s == Speaker::kInv ? "INV" : "PAR";
}

Speaker parse_speaker(const std::string& name) {
  if (name == "INV") return Speaker::kInv;
  if (name == "PAR") return Speaker::kPar;
  throw SchemaError("unknown speaker role: " + name);
}

int Manifest::n_labeled() const {
  int n = 0;
  for (const auto& e : entries) n += e.label.has_value() ? 1 : 0;
  return n;
}

int Manifest::n_unlabeled() const {
  return static_cast<int>(entries.size()) - n_labeled();
}

std::vector<std::string> SplitSpec::train_ids() const {
  std::vector<std::string> ids;
  for (const auto& [id, fold] : fold_of) {
    if (fold != test_fold) ids.push_back(id);
  }
  return ids;
}

std::vector<std::string> SplitSpec::test_ids() const {
  std::vector<std::string> ids;
  for (const auto& [id, fold] : fold_of) {
    if (fold == test_fold) ids.push_back(id);
  }
  return ids;
}

}  // namespace hgs
