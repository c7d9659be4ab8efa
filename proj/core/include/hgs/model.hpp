// core/include/hgs/model.hpp

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

#ifndef HGS_MODEL_HPP_
#define HGS_MODEL_HPP_

#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "hgs/encoder.hpp"
#include "hgs/features.hpp"
#include "hgs/rng.hpp"

namespace hgs {

/// All shape hyperparameters of the hierarchical model. The transformer
/// runs over concatenated pooled clip frames with positional indices that
/// reset at each dialogue-session boundary; the clip head is a 2-layer
/// bidirectional LSTM over each clip's pooled frames.
struct ModelDims {
  int d = 64;          // shared feature width
  int num_classes = 2;
  int n_heads = 16;
  int n_blocks = 3;
  int d_ff = 0;        // feed-forward width; 0 means 4*d
  int lstm_hidden = 32;
  int max_positions = 512;  // positional table rows P
  int pool_kernel = 5;
  EncoderConfig encoder;

  int ff() const { return d_ff > 0 ? d_ff : 4 * d; }
  void validate() const {
    if (d < 2) throw InvalidConfigError("model d must be >= 2");
    if (num_classes < 2) throw InvalidConfigError("num_classes must be >= 2");
    if (n_heads < 1 || d % n_heads != 0) {
      throw InvalidConfigError("n_heads must divide d");
    }
    if (n_blocks < 1) throw InvalidConfigError("n_blocks must be >= 1");
    if (lstm_hidden < 1) throw InvalidConfigError("lstm_hidden must be >= 1");
    if (max_positions < 1) throw InvalidConfigError("max_positions must be >= 1");
    if (pool_kernel < 1) throw InvalidConfigError("pool_kernel must be >= 1");
    if (encoder.d != d) {
      throw InvalidConfigError("encoder.d must equal model d");
    }
  }
};

template <typename T>
struct BlockParams {
  Mat<T> wq, bq, wk, bk, wv, bv, wo, bo;
  Mat<T> ln1_g, ln1_b, ln2_g, ln2_b;
  Mat<T> w1, b1, w2, b2;
};

template <typename T>
struct LstmDir {
  Mat<T> wx;  // in x 4h
  Mat<T> wh;  // h x 4h
  Mat<T> b;   // 1 x 4h
};

template <typename T>
struct ModelParams {
  ModelDims dims;
  EncoderParams<T> encoder;
  Mat<T> posenc;  // P x d
  std::vector<BlockParams<T>> blocks;
  Mat<T> agg_w;   // d x d
  Mat<T> agg_v;   // d x 1
  Mat<T> head_w;  // d x C
  Mat<T> head_b;  // 1 x C
  std::vector<std::array<LstmDir<T>, 2>> lstm;  // [layer][0=fwd, 1=bwd]
  Mat<T> clip_w;  // 2h x C
  Mat<T> clip_b;  // 1 x C

  template <typename U>
  ModelParams<U> cast() const {
    ModelParams<U> out;
    out.dims = dims;
    out.encoder.layers.resize(encoder.layers.size());
    for (std::size_t i = 0; i < encoder.layers.size(); ++i) {
      out.encoder.layers[i].w = encoder.layers[i].w.template cast<U>();
      out.encoder.layers[i].b = encoder.layers[i].b.template cast<U>();
    }
    out.posenc = posenc.template cast<U>();
    out.blocks.resize(blocks.size());
    for (std::size_t i = 0; i < blocks.size(); ++i) {
      const auto& s = blocks[i];
      auto& o = out.blocks[i];
      o.wq = s.wq.template cast<U>();
      o.bq = s.bq.template cast<U>();
      o.wk = s.wk.template cast<U>();
      o.bk = s.bk.template cast<U>();
      o.wv = s.wv.template cast<U>();
      o.bv = s.bv.template cast<U>();
      o.wo = s.wo.template cast<U>();
      o.bo = s.bo.template cast<U>();
      o.ln1_g = s.ln1_g.template cast<U>();
      o.ln1_b = s.ln1_b.template cast<U>();
      o.ln2_g = s.ln2_g.template cast<U>();
      o.ln2_b = s.ln2_b.template cast<U>();
      o.w1 = s.w1.template cast<U>();
      o.b1 = s.b1.template cast<U>();
      o.w2 = s.w2.template cast<U>();
      o.b2 = s.b2.template cast<U>();
    }
    out.agg_w = agg_w.template cast<U>();
    out.agg_v = agg_v.template cast<U>();
    out.head_w = head_w.template cast<U>();
    out.head_b = head_b.template cast<U>();
    out.lstm.resize(lstm.size());
    for (std::size_t i = 0; i < lstm.size(); ++i) {
      for (int dir = 0; dir < 2; ++dir) {
        out.lstm[i][dir].wx = lstm[i][dir].wx.template cast<U>();
        out.lstm[i][dir].wh = lstm[i][dir].wh.template cast<U>();
        out.lstm[i][dir].b = lstm[i][dir].b.template cast<U>();
      }
    }
    out.clip_w = clip_w.template cast<U>();
    out.clip_b = clip_b.template cast<U>();
    return out;
  }
};

/// Visits every parameter matrix in a fixed documented order. Checkpoints,
/// optimizer state, EMA updates, and gradient traversal all rely on this
/// order being stable.
template <typename T, typename Fn>
void for_each_param(ModelParams<T>& p, Fn&& fn) {
  for (std::size_t i = 0; i < p.encoder.layers.size(); ++i) {
    fn("enc.conv" + std::to_string(i) + ".w", p.encoder.layers[i].w);
    fn("enc.conv" + std::to_string(i) + ".b", p.encoder.layers[i].b);
  }
  fn("posenc", p.posenc);
  for (std::size_t i = 0; i < p.blocks.size(); ++i) {
    const std::string base = "block" + std::to_string(i) + ".";
    auto& b = p.blocks[i];
    fn(base + "wq", b.wq);
    fn(base + "bq", b.bq);
    fn(base + "wk", b.wk);
    fn(base + "bk", b.bk);
    fn(base + "wv", b.wv);
    fn(base + "bv", b.bv);
    fn(base + "wo", b.wo);
    fn(base + "bo", b.bo);
    fn(base + "ln1.g", b.ln1_g);
    fn(base + "ln1.b", b.ln1_b);
    fn(base + "ln2.g", b.ln2_g);
    fn(base + "ln2.b", b.ln2_b);
    fn(base + "w1", b.w1);
    fn(base + "b1", b.b1);
    fn(base + "w2", b.w2);
    fn(base + "b2", b.b2);
  }
  fn("agg.w", p.agg_w);
  fn("agg.v", p.agg_v);
  fn("head.w", p.head_w);
  fn("head.b", p.head_b);
  for (std::size_t i = 0; i < p.lstm.size(); ++i) {
    for (int dir = 0; dir < 2; ++dir) {
      const std::string base = "lstm" + std::to_string(i) +
                               (dir == 0 ? ".fwd." : ".bwd.");
      fn(base + "wx", p.lstm[i][dir].wx);
      fn(base + "wh", p.lstm[i][dir].wh);
      fn(base + "b", p.lstm[i][dir].b);
    }
  }
  fn("clip.w", p.clip_w);
  fn("clip.b", p.clip_b);
}

template <typename T, typename Fn>
void for_each_param(const ModelParams<T>& p, Fn&& fn) {
  for_each_param(const_cast<ModelParams<T>&>(p),
                 [&fn](const std::string& name, Mat<T>& m) {
                   fn(name, static_cast<const Mat<T>&>(m));
                 });
}

template <typename T>
std::vector<std::pair<std::string, Mat<T>*>> collect_params(
    ModelParams<T>& p) {
  std::vector<std::pair<std::string, Mat<T>*>> out;
  for_each_param(p, [&out](const std::string& name, Mat<T>& m) {
    out.push_back({name, &m});
  });
  return out;
}

/// Allocates every parameter with the right shape, all zeros.
template <typename T>
ModelParams<T> zero_params(const ModelDims& dims) {
  dims.validate();
  ModelParams<T> p;
  p.dims = dims;
  if (dims.encoder.kind == EncoderKind::kToyConv) {
    const auto strides = conv_strides(dims.encoder.downsample);
    int in_ch = 1;
    for (int li = 0; li < 3; ++li) {
      const int out_ch = li == 2 ? dims.d : dims.encoder.channels;
      ConvLayer<T> layer;
      layer.w = Mat<T>(out_ch, in_ch * 2 * strides[li]);
      layer.b = Mat<T>(1, out_ch);
      p.encoder.layers.push_back(std::move(layer));
      in_ch = out_ch;
    }
  }
  p.posenc = Mat<T>(dims.max_positions, dims.d);
  p.blocks.resize(dims.n_blocks);
  for (auto& b : p.blocks) {
    b.wq = Mat<T>(dims.d, dims.d);
    b.bq = Mat<T>(1, dims.d);
    b.wk = Mat<T>(dims.d, dims.d);
    b.bk = Mat<T>(1, dims.d);
    b.wv = Mat<T>(dims.d, dims.d);
    b.bv = Mat<T>(1, dims.d);
    b.wo = Mat<T>(dims.d, dims.d);
    b.bo = Mat<T>(1, dims.d);
    b.ln1_g = Mat<T>(1, dims.d);
    b.ln1_b = Mat<T>(1, dims.d);
    b.ln2_g = Mat<T>(1, dims.d);
    b.ln2_b = Mat<T>(1, dims.d);
    b.w1 = Mat<T>(dims.d, dims.ff());
    b.b1 = Mat<T>(1, dims.ff());
    b.w2 = Mat<T>(dims.ff(), dims.d);
    b.b2 = Mat<T>(1, dims.d);
  }
  p.agg_w = Mat<T>(dims.d, dims.d);
  p.agg_v = Mat<T>(dims.d, 1);
  p.head_w = Mat<T>(dims.d, dims.num_classes);
  p.head_b = Mat<T>(1, dims.num_classes);
  p.lstm.resize(2);
  const int h = dims.lstm_hidden;
  for (int layer = 0; layer < 2; ++layer) {
    const int in = layer == 0 ? dims.d : 2 * h;
    for (int dir = 0; dir < 2; ++dir) {
      p.lstm[layer][dir].wx = Mat<T>(in, 4 * h);
      p.lstm[layer][dir].wh = Mat<T>(h, 4 * h);
      p.lstm[layer][dir].b = Mat<T>(1, 4 * h);
    }
  }
  p.clip_w = Mat<T>(2 * h, dims.num_classes);
  p.clip_b = Mat<T>(1, dims.num_classes);
  return p;
}

/// Xavier-uniform weights (bound sqrt(6/(fan_in+fan_out))), zero biases,
/// unit layer-norm gains, Normal(0, 0.02) positional table. Each parameter
/// draws from its own named stream, so adding a parameter elsewhere cannot
/// shift another's initialization.
template <typename T>
ModelParams<T> init_params(std::uint64_t seed, const ModelDims& dims) {
  ModelParams<T> p = zero_params<T>(dims);
  const Rng root = Rng(seed).fork("init");
  for_each_param(p, [&root](const std::string& name, Mat<T>& m) {
    Rng rng = root.fork(name);
    if (name == "posenc") {
      for (T& v : m.a) v = static_cast<T>(rng.normal(0.0, 0.02));
      return;
    }
    if (name.find(".ln") != std::string::npos) {
      const T fill = name.back() == 'g' ? T(1) : T(0);
      for (T& v : m.a) v = fill;
      return;
    }
    if (m.rows == 1) return;  // every single-row parameter is a bias
    // The Xavier bound depends only on fan_in + fan_out, which equals
    // rows + cols for affine, LSTM gate, and conv weight layouts alike.
    const double s = std::sqrt(6.0 / (m.rows + m.cols));
    for (T& v : m.a) v = static_cast<T>(rng.uniform(-s, s));
  });
  return p;
}

/// Tape bindings for the whole parameter set, in for_each_param order.
struct BlockVars {
  int wq, bq, wk, bk, wv, bv, wo, bo;
  int ln1_g, ln1_b, ln2_g, ln2_b;
  int w1, b1, w2, b2;
};

struct ModelVars {
  EncoderVars encoder;
  int posenc = -1;
  std::vector<BlockVars> blocks;
  int agg_w = -1, agg_v = -1, head_w = -1, head_b = -1;
  std::vector<std::array<std::array<int, 3>, 2>> lstm;  // (wx, wh, b)
  int clip_w = -1, clip_b = -1;
};

/// Binds every parameter as a tape leaf. `grad_sink` null freezes the whole
/// model (teacher); `encoder_trainable` false freezes only the encoder.
template <typename T>
ModelVars bind_params(Tape<T>& tape, const ModelParams<T>& p,
                      ModelParams<T>* grad_sink, bool encoder_trainable) {
  ModelVars v;
  EncoderParams<T>* enc_sink =
      grad_sink && encoder_trainable ? &grad_sink->encoder : nullptr;
  v.encoder = bind_encoder(tape, p.encoder, enc_sink);
  auto leaf = [&tape, grad_sink](const Mat<T>& m, Mat<T>* g) {
    return tape.leaf(m, grad_sink ? g : nullptr);
  };
  v.posenc = leaf(p.posenc, grad_sink ? &grad_sink->posenc : nullptr);
  for (std::size_t i = 0; i < p.blocks.size(); ++i) {
    const auto& b = p.blocks[i];
    BlockParams<T>* g = grad_sink ? &grad_sink->blocks[i] : nullptr;
    BlockVars bv;
    bv.wq = leaf(b.wq, g ? &g->wq : nullptr);
    bv.bq = leaf(b.bq, g ? &g->bq : nullptr);
    bv.wk = leaf(b.wk, g ? &g->wk : nullptr);
    bv.bk = leaf(b.bk, g ? &g->bk : nullptr);
    bv.wv = leaf(b.wv, g ? &g->wv : nullptr);
    bv.bv = leaf(b.bv, g ? &g->bv : nullptr);
    bv.wo = leaf(b.wo, g ? &g->wo : nullptr);
    bv.bo = leaf(b.bo, g ? &g->bo : nullptr);
    bv.ln1_g = leaf(b.ln1_g, g ? &g->ln1_g : nullptr);
    bv.ln1_b = leaf(b.ln1_b, g ? &g->ln1_b : nullptr);
    bv.ln2_g = leaf(b.ln2_g, g ? &g->ln2_g : nullptr);
    bv.ln2_b = leaf(b.ln2_b, g ? &g->ln2_b : nullptr);
    bv.w1 = leaf(b.w1, g ? &g->w1 : nullptr);
    bv.b1 = leaf(b.b1, g ? &g->b1 : nullptr);
    bv.w2 = leaf(b.w2, g ? &g->w2 : nullptr);
    bv.b2 = leaf(b.b2, g ? &g->b2 : nullptr);
    v.blocks.push_back(bv);
  }
  v.agg_w = leaf(p.agg_w, grad_sink ? &grad_sink->agg_w : nullptr);
  v.agg_v = leaf(p.agg_v, grad_sink ? &grad_sink->agg_v : nullptr);
  v.head_w = leaf(p.head_w, grad_sink ? &grad_sink->head_w : nullptr);
  v.head_b = leaf(p.head_b, grad_sink ? &grad_sink->head_b : nullptr);
  for (std::size_t i = 0; i < p.lstm.size(); ++i) {
    std::array<std::array<int, 3>, 2> layer;
    for (int dir = 0; dir < 2; ++dir) {
      LstmDir<T>* g = grad_sink ? &grad_sink->lstm[i][dir] : nullptr;
      layer[dir][0] = leaf(p.lstm[i][dir].wx, g ? &g->wx : nullptr);
      layer[dir][1] = leaf(p.lstm[i][dir].wh, g ? &g->wh : nullptr);
      layer[dir][2] = leaf(p.lstm[i][dir].b, g ? &g->b : nullptr);
    }
    v.lstm.push_back(layer);
  }
  v.clip_w = leaf(p.clip_w, grad_sink ? &grad_sink->clip_w : nullptr);
  v.clip_b = leaf(p.clip_b, grad_sink ? &grad_sink->clip_b : nullptr);
  return v;
}

/// One post-LN transformer block: x = LN(x + MHA(x)); x = LN(x + FFN(x)).
template <typename T>
int transformer_block(Tape<T>& tape, int x, const BlockVars& v,
                      const ModelDims& dims) {
  constexpr T kLnEps = static_cast<T>(1e-5);
  const int dh = dims.d / dims.n_heads;
  const int q = tape.add_rowbias(tape.matmul(x, v.wq), v.bq);
  const int k = tape.add_rowbias(tape.matmul(x, v.wk), v.bk);
  const int val = tape.add_rowbias(tape.matmul(x, v.wv), v.bv);
  std::vector<int> heads;
  const T inv_sqrt = static_cast<T>(1.0 / std::sqrt(static_cast<double>(dh)));
  for (int h = 0; h < dims.n_heads; ++h) {
    const int qh = tape.slice_cols(q, h * dh, dh);
    const int kh = tape.slice_cols(k, h * dh, dh);
    const int vh = tape.slice_cols(val, h * dh, dh);
    const int scores = tape.scale(tape.matmul_nt(qh, kh), inv_sqrt);
    const int attn = tape.softmax_rows(scores);
    heads.push_back(tape.matmul(attn, vh));
  }
  const int merged = dims.n_heads == 1 ? heads[0] : tape.concat_cols(heads);
  const int proj = tape.add_rowbias(tape.matmul(merged, v.wo), v.bo);
  int out = tape.layernorm_rows(tape.add(x, proj), v.ln1_g, v.ln1_b, kLnEps);
  const int f1 = tape.relu_op(tape.add_rowbias(tape.matmul(out, v.w1), v.b1));
  const int f2 = tape.add_rowbias(tape.matmul(f1, v.w2), v.b2);
  return tape.layernorm_rows(tape.add(out, f2), v.ln2_g, v.ln2_b, kLnEps);
}

/// Positional indices for concatenated pooled clips: the index runs over
/// pooled frames and resets to 0 at each dialogue-session boundary.
/// Throws SessionTooLongError when a session exceeds the table.
std::vector<int> position_indices(const std::vector<int>& clip_rows,
                                  const std::vector<int>& clip_sessions,
                                  int max_positions);

struct SessionGraph {
  int embed_audio = -1;     // t x d
  int attn = -1;            // 1 x t
  int sample_embed = -1;    // 1 x d
  int session_logits = -1;  // 1 x C
};

/// Builds the session path over per-clip pooled feature nodes.
template <typename T>
SessionGraph session_graph(Tape<T>& tape, const std::vector<int>& pooled,
                           const std::vector<int>& clip_sessions,
                           const ModelVars& v, const ModelDims& dims) {
  std::vector<int> rows;
  for (int node : pooled) rows.push_back(tape.val(node).rows);
  const std::vector<int> positions =
      position_indices(rows, clip_sessions, dims.max_positions);
  int x = pooled.size() == 1 ? pooled[0] : tape.concat_rows(pooled);
  x = tape.add(x, tape.gather_rows(v.posenc, positions));
  for (const auto& block : v.blocks) {
    x = transformer_block(tape, x, block, dims);
  }
  SessionGraph g;
  g.embed_audio = x;
  const int scores = tape.matmul(tape.tanh_op(tape.matmul_nt(x, v.agg_w)),
                                 v.agg_v);
  g.attn = tape.softmax_rows(tape.transpose_op(scores));
  g.sample_embed = tape.matmul(g.attn, x);
  g.session_logits =
      tape.add_rowbias(tape.matmul(g.sample_embed, v.head_w), v.head_b);
  return g;
}

/// Builds the clip path: 2-layer BiLSTM over one clip's pooled frames,
/// final forward and final backward hidden states concatenated, affine head.
template <typename T>
int clip_graph(Tape<T>& tape, int pooled, const ModelVars& v,
               const ModelDims& dims) {
  (void)dims;
  int x = pooled;
  std::array<int, 2> outs = {-1, -1};
  for (std::size_t layer = 0; layer < v.lstm.size(); ++layer) {
    for (int dir = 0; dir < 2; ++dir) {
      outs[dir] = tape.lstm_seq(x, v.lstm[layer][dir][0],
                                v.lstm[layer][dir][1], v.lstm[layer][dir][2],
                                dir == 1);
    }
    x = tape.concat_cols({outs[0], outs[1]});
  }
  const int t_rows = tape.val(outs[0]).rows;
  const int last_fwd = tape.slice_rows(outs[0], t_rows - 1, 1);
  const int first_bwd = tape.slice_rows(outs[1], 0, 1);
  const int hidden = tape.concat_cols({last_fwd, first_bwd});
  return tape.add_rowbias(tape.matmul(hidden, v.clip_w), v.clip_b);
}

/// Per-forward intermediates exposed to callers (inference path).
struct ForwardTrace {
  std::vector<FeatureSequence> clip_embeds;  // pooled per-clip features
  Mat<float> embed_audio;
  std::vector<float> attn_weights;
  std::vector<float> sample_embed;
  std::vector<float> session_logits;
  std::vector<std::vector<float>> clip_logits;
};

/// Inference-mode session path over pre-pooled clip features.
ForwardTrace session_forward(const std::vector<FeatureSequence>& pooled,
                             const std::vector<int>& clip_sessions,
                             const ModelParams<float>& params);

/// Inference-mode clip path over one clip's pooled features.
std::vector<float> clip_forward(const FeatureSequence& pooled,
                                const ModelParams<float>& params);

struct LabelConfidence {
  int label = 0;
  double confidence = 0.0;
};

/// Argmax softmax probability; ties break toward the smaller class index.
LabelConfidence softmax_confidence(const std::vector<float>& logits);

}  // namespace hgs

#endif  // HGS_MODEL_HPP_
