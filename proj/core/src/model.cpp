// core/src/model.cpp

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

#include "hgs/model.hpp"

#include <algorithm>
#include <cmath>

#include "hgs/errors.hpp"

namespace hgs {

std::vector<int> position_indices(const std::vector<int>& clip_rows,
                                  const std::vector<int>& clip_sessions,
                                  int max_positions) {
  if (clip_rows.size() != clip_sessions.size()) {
    throw ShapeMismatchError("position_indices: rows/sessions mismatch");
  }
  std::vector<int> out;
  int pos = 0;
  int prev_session = clip_sessions.empty() ? -1 : clip_sessions[0];
  for (std::size_t i = 0; i < clip_rows.size(); ++i) {
    if (clip_sessions[i] != prev_session) {
      pos = 0;
      prev_session = clip_sessions[i];
    }
    for (int r = 0; r < clip_rows[i]; ++r) {
      if (pos >= max_positions) {
        throw SessionTooLongError(
            "session spans more pooled frames than the positional table (" +
            std::to_string(max_positions) + ")");
      }
      out.push_back(pos++);
    }
  }
  return out;
}

ForwardTrace session_forward(const std::vector<FeatureSequence>& pooled,
                             const std::vector<int>& clip_sessions,
                             const ModelParams<float>& params) {
  if (pooled.empty()) {
    throw EmptySelectionError("session_forward: no clips");
  }
  if (pooled.size() != clip_sessions.size()) {
    throw ShapeMismatchError("session_forward: clips/sessions mismatch");
  }
  Tape<float> tape;
  const ModelVars vars = bind_params<float>(tape, params, nullptr, false);
  std::vector<int> nodes;
  for (const auto& f : pooled) {
    if (f.d() != params.dims.d) {
      throw DimensionMismatchError("session_forward: clip width " +
                                   std::to_string(f.d()) + " != model d " +
                                   std::to_string(params.dims.d));
    }
    nodes.push_back(tape.constant(f.values));
  }
  const SessionGraph g =
      session_graph(tape, nodes, clip_sessions, vars, params.dims);
  ForwardTrace trace;
  trace.clip_embeds = pooled;
  trace.embed_audio = tape.val(g.embed_audio);
  trace.attn_weights = tape.val(g.attn).a;
  trace.sample_embed = tape.val(g.sample_embed).a;
  trace.session_logits = tape.val(g.session_logits).a;
  return trace;
}

std::vector<float> clip_forward(const FeatureSequence& pooled,
                                const ModelParams<float>& params) {
  if (pooled.t() < 1) {
    throw ClipTooShortError("clip_forward: empty clip");
  }
  if (pooled.d() != params.dims.d) {
    throw DimensionMismatchError("clip_forward: clip width " +
                                 std::to_string(pooled.d()) +
                                 " != model d " +
                                 std::to_string(params.dims.d));
  }
  Tape<float> tape;
  const ModelVars vars = bind_params<float>(tape, params, nullptr, false);
  const int x = tape.constant(pooled.values);
  const int logits = clip_graph(tape, x, vars, params.dims);
  return tape.val(logits).a;
}

LabelConfidence softmax_confidence(const std::vector<float>& logits) {
  if (logits.empty()) {
    throw EmptySelectionError("softmax_confidence: no logits");
  }
  double mx = logits[0];
  for (float v : logits) mx = std::max(mx, static_cast<double>(v));
  double denom = 0.0;
  for (float v : logits) denom += std::exp(static_cast<double>(v) - mx);
  LabelConfidence out;
  double best = -1.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    const double p = std::exp(static_cast<double>(logits[i]) - mx) / denom;
    // Strict > keeps the smaller index on exact ties.
    if (p > best) {
      best = p;
      out.label = static_cast<int>(i);
      out.confidence = p;
    }
  }
  return out;
}

}  // namespace hgs
