// core/src/network.cpp

// Copyright 2026  Tristou Authors

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

#include "tristou/network.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include "json.hpp"

using nlohmann::json;

namespace tristou {

namespace {

constexpr char kMagic[8] = {'T', 'R', 'I', 'S', 'T', 'O', 'U', '1'};
constexpr double kDegenerateNorm = 1e-12;

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

void check_dims(const Dims& d) {
  if (d.input_dim < 1 || d.lstm_units < 1 || d.hidden_units < 1 || d.embedding_dim < 1)
    throw std::invalid_argument("network: all dims must be positive");
}

Matrix glorot_uniform(int rows, int cols, Rng& rng) {
  const double limit = std::sqrt(6.0 / (rows + cols));
  Matrix m(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) m(r, c) = rng.uniform(-limit, limit);
  return m;
}

// Orthogonal matrix via modified Gram-Schmidt on a Gaussian draw; columns
// with the positive-diagonal convention, rank-deficient draws retried.
Matrix orthogonal(int n, Rng& rng) {
  Matrix q(n, n);
  for (int j = 0; j < n; ++j) {
    Vector v(n);
    double length = 0.0;
    for (int attempt = 0; attempt < 64; ++attempt) {
      for (int i = 0; i < n; ++i) v[i] = rng.normal();
      for (int k = 0; k < j; ++k) {
        double proj = 0.0;
        for (int i = 0; i < n; ++i) proj += q(i, k) * v[i];
        for (int i = 0; i < n; ++i) v[i] -= proj * q(i, k);
      }
      length = norm(v);
      if (length > 1e-10) break;
    }
    if (length <= 1e-10) throw std::runtime_error("orthogonal init failed");
    for (int i = 0; i < n; ++i) q(i, j) = v[i] / length;
  }
  return q;
}

LstmParams init_lstm(int units, int input_dim, Rng& rng) {
  LstmParams p;
  p.w_input = glorot_uniform(units, input_dim, rng);
  p.w_forget = glorot_uniform(units, input_dim, rng);
  p.w_cell = glorot_uniform(units, input_dim, rng);
  p.w_output = glorot_uniform(units, input_dim, rng);
  p.u_input = orthogonal(units, rng);
  p.u_forget = orthogonal(units, rng);
  p.u_cell = orthogonal(units, rng);
  p.u_output = orthogonal(units, rng);
  p.b_input.assign(units, 0.0);
  p.b_forget.assign(units, 1.0);
  p.b_cell.assign(units, 0.0);
  p.b_output.assign(units, 0.0);
  return p;
}

void push_matrix(std::vector<TensorRef>& refs, const std::string& name, Matrix& m) {
  refs.push_back({name, {m.rows(), m.cols()}, m.data(), m.size()});
}

void push_vector(std::vector<TensorRef>& refs, const std::string& name, Vector& v) {
  refs.push_back({name, {static_cast<int>(v.size())}, v.data(), v.size()});
}

void push_lstm(std::vector<TensorRef>& refs, const std::string& prefix, LstmParams& p) {
  push_matrix(refs, prefix + ".w_input", p.w_input);
  push_matrix(refs, prefix + ".w_forget", p.w_forget);
  push_matrix(refs, prefix + ".w_cell", p.w_cell);
  push_matrix(refs, prefix + ".w_output", p.w_output);
  push_matrix(refs, prefix + ".u_input", p.u_input);
  push_matrix(refs, prefix + ".u_forget", p.u_forget);
  push_matrix(refs, prefix + ".u_cell", p.u_cell);
  push_matrix(refs, prefix + ".u_output", p.u_output);
  push_vector(refs, prefix + ".b_input", p.b_input);
  push_vector(refs, prefix + ".b_forget", p.b_forget);
  push_vector(refs, prefix + ".b_cell", p.b_cell);
  push_vector(refs, prefix + ".b_output", p.b_output);
}

}  // namespace

std::vector<TensorRef> tensor_refs(TristouNetParams& params) {
  std::vector<TensorRef> refs;
  refs.reserve(28);
  push_lstm(refs, "forward_lstm", params.forward_lstm);
  push_lstm(refs, "backward_lstm", params.backward_lstm);
  push_matrix(refs, "dense1.weights", params.dense1.weights);
  push_vector(refs, "dense1.bias", params.dense1.bias);
  push_matrix(refs, "dense2.weights", params.dense2.weights);
  push_vector(refs, "dense2.bias", params.dense2.bias);
  return refs;
}

size_t parameter_count(const Dims& d) {
  const size_t lstm = 4ull * (static_cast<size_t>(d.lstm_units) * d.input_dim +
                              static_cast<size_t>(d.lstm_units) * d.lstm_units + d.lstm_units);
  const size_t dense1 = static_cast<size_t>(d.hidden_units) * 2 * d.lstm_units + d.hidden_units;
  const size_t dense2 = static_cast<size_t>(d.embedding_dim) * d.hidden_units + d.embedding_dim;
  return 2 * lstm + dense1 + dense2;
}

TristouNetParams zeros(const Dims& dims) {
  check_dims(dims);
  TristouNetParams p;
  p.dims = dims;
  auto zero_lstm = [&](LstmParams& l) {
    l.w_input = l.w_forget = l.w_cell = l.w_output = Matrix(dims.lstm_units, dims.input_dim);
    l.u_input = l.u_forget = l.u_cell = l.u_output = Matrix(dims.lstm_units, dims.lstm_units);
    l.b_input.assign(dims.lstm_units, 0.0);
    l.b_forget.assign(dims.lstm_units, 0.0);
    l.b_cell.assign(dims.lstm_units, 0.0);
    l.b_output.assign(dims.lstm_units, 0.0);
  };
  zero_lstm(p.forward_lstm);
  zero_lstm(p.backward_lstm);
  p.dense1.weights = Matrix(dims.hidden_units, 2 * dims.lstm_units);
  p.dense1.bias.assign(dims.hidden_units, 0.0);
  p.dense2.weights = Matrix(dims.embedding_dim, dims.hidden_units);
  p.dense2.bias.assign(dims.embedding_dim, 0.0);
  return p;
}

TristouNetParams init_params(const Dims& dims, Rng& rng) {
  check_dims(dims);
  TristouNetParams p;
  p.dims = dims;
  p.forward_lstm = init_lstm(dims.lstm_units, dims.input_dim, rng);
  p.backward_lstm = init_lstm(dims.lstm_units, dims.input_dim, rng);
  p.dense1.weights = glorot_uniform(dims.hidden_units, 2 * dims.lstm_units, rng);
  p.dense1.bias.assign(dims.hidden_units, 0.0);
  p.dense2.weights = glorot_uniform(dims.embedding_dim, dims.hidden_units, rng);
  p.dense2.bias.assign(dims.embedding_dim, 0.0);
  return p;
}

Matrix lstm_forward(const LstmParams& params, const Matrix& x, bool reversed,
                    LstmCache* cache) {
  const int t_count = x.rows();
  const int units = static_cast<int>(params.b_input.size());
  if (t_count < 1) throw std::invalid_argument("lstm_forward: empty sequence");
  if (params.w_input.cols() != x.cols())
    throw std::invalid_argument("lstm_forward: input has " + std::to_string(x.cols()) +
                                " columns, weights expect " +
                                std::to_string(params.w_input.cols()));

  LstmCache local;
  LstmCache& c = cache ? *cache : local;
  c.reversed = reversed;
  c.gate_input = Matrix(t_count, units);
  c.gate_forget = Matrix(t_count, units);
  c.gate_cell = Matrix(t_count, units);
  c.gate_output = Matrix(t_count, units);
  c.cell = Matrix(t_count, units);
  c.cell_tanh = Matrix(t_count, units);
  c.hidden = Matrix(t_count, units);

  Vector h_prev(units, 0.0), c_prev(units, 0.0);
  for (int s = 0; s < t_count; ++s) {
    const int t_orig = reversed ? t_count - 1 - s : s;
    const auto x_t = x.row(t_orig);

    auto gate_rows = [&](const Matrix& w, const Matrix& u, const Vector& b, auto&& squash,
                         std::span<double> out) {
      for (int i = 0; i < units; ++i)
        out[i] = squash(dot(w.row(i), x_t) + dot(u.row(i), h_prev) + b[i]);
    };
    gate_rows(params.w_input, params.u_input, params.b_input,
              [](double v) { return sigmoid(v); }, c.gate_input.row(s));
    gate_rows(params.w_forget, params.u_forget, params.b_forget,
              [](double v) { return sigmoid(v); }, c.gate_forget.row(s));
    gate_rows(params.w_cell, params.u_cell, params.b_cell,
              [](double v) { return std::tanh(v); }, c.gate_cell.row(s));
    gate_rows(params.w_output, params.u_output, params.b_output,
              [](double v) { return sigmoid(v); }, c.gate_output.row(s));

    for (int i = 0; i < units; ++i) {
      const double cell = c.gate_forget(s, i) * c_prev[i] + c.gate_input(s, i) * c.gate_cell(s, i);
      c.cell(s, i) = cell;
      c.cell_tanh(s, i) = std::tanh(cell);
      c.hidden(s, i) = c.gate_output(s, i) * c.cell_tanh(s, i);
    }
    std::copy(c.hidden.row(s).begin(), c.hidden.row(s).end(), h_prev.begin());
    std::copy(c.cell.row(s).begin(), c.cell.row(s).end(), c_prev.begin());
  }

  Matrix outputs(t_count, units);
  for (int s = 0; s < t_count; ++s) {
    const int t_orig = reversed ? t_count - 1 - s : s;
    std::copy(c.hidden.row(s).begin(), c.hidden.row(s).end(), outputs.row(t_orig).begin());
  }
  return outputs;
}

Vector average_pool(const Matrix& outputs) {
  if (outputs.rows() < 1) throw std::invalid_argument("average_pool: empty input");
  return row_mean(outputs);
}

Vector embed(const TristouNetParams& params, const Matrix& x, ForwardCache* cache) {
  if (x.cols() != params.dims.input_dim)
    throw std::invalid_argument("embed: input has " + std::to_string(x.cols()) +
                                " columns, model expects " +
                                std::to_string(params.dims.input_dim));
  ForwardCache local;
  ForwardCache& c = cache ? *cache : local;
  c.input = x;

  const Matrix fwd = lstm_forward(params.forward_lstm, x, false, &c.forward_pass);
  const Matrix bwd = lstm_forward(params.backward_lstm, x, true, &c.backward_pass);
  c.pool_forward = average_pool(fwd);
  c.pool_backward = average_pool(bwd);

  c.concat.resize(c.pool_forward.size() + c.pool_backward.size());
  std::copy(c.pool_forward.begin(), c.pool_forward.end(), c.concat.begin());
  std::copy(c.pool_backward.begin(), c.pool_backward.end(),
            c.concat.begin() + static_cast<long>(c.pool_forward.size()));

  c.hidden = matvec(params.dense1.weights, c.concat);
  for (size_t i = 0; i < c.hidden.size(); ++i)
    c.hidden[i] = std::tanh(c.hidden[i] + params.dense1.bias[i]);

  c.pre_norm = matvec(params.dense2.weights, c.hidden);
  for (size_t i = 0; i < c.pre_norm.size(); ++i)
    c.pre_norm[i] = std::tanh(c.pre_norm[i] + params.dense2.bias[i]);

  c.pre_norm_length = norm(c.pre_norm);
  if (c.pre_norm_length < kDegenerateNorm)
    throw std::runtime_error("embed: degenerate embedding (pre-normalization norm " +
                             std::to_string(c.pre_norm_length) + ")");
  c.output.resize(c.pre_norm.size());
  for (size_t i = 0; i < c.pre_norm.size(); ++i) c.output[i] = c.pre_norm[i] / c.pre_norm_length;
  return c.output;
}

Vector embed(const TristouNetParams& params, const FeatureSequence& x, ForwardCache* cache) {
  return embed(params, x.frames, cache);
}

namespace {

// Backprop through one LSTM direction; d_hidden is the gradient on the
// per-step outputs in processing order.
void lstm_backward(const LstmParams& params, const LstmCache& c, const Matrix& input,
                   const Matrix& d_hidden, LstmParams& grads) {
  const int t_count = c.hidden.rows();
  const int units = c.hidden.cols();
  Vector dh_next(units, 0.0), dc_next(units, 0.0);
  Vector dh(units), dc(units);
  Vector di(units), df(units), dg(units), do_(units);
  const Vector zeros_vec(units, 0.0);

  for (int s = t_count - 1; s >= 0; --s) {
    const int t_orig = c.reversed ? t_count - 1 - s : s;
    const auto x_t = input.row(t_orig);
    const auto h_prev = s > 0 ? c.hidden.row(s - 1) : std::span<const double>(zeros_vec);
    const auto c_prev = s > 0 ? c.cell.row(s - 1) : std::span<const double>(zeros_vec);

    for (int i = 0; i < units; ++i) {
      dh[i] = d_hidden(s, i) + dh_next[i];
      const double tc = c.cell_tanh(s, i);
      const double o = c.gate_output(s, i);
      do_[i] = dh[i] * tc * o * (1.0 - o);
      dc[i] = dh[i] * o * (1.0 - tc * tc) + dc_next[i];
      const double f = c.gate_forget(s, i);
      const double ig = c.gate_input(s, i);
      const double g = c.gate_cell(s, i);
      df[i] = dc[i] * c_prev[i] * f * (1.0 - f);
      di[i] = dc[i] * g * ig * (1.0 - ig);
      dg[i] = dc[i] * ig * (1.0 - g * g);
      dc_next[i] = dc[i] * f;
    }

    outer_add(di, x_t, grads.w_input);
    outer_add(df, x_t, grads.w_forget);
    outer_add(dg, x_t, grads.w_cell);
    outer_add(do_, x_t, grads.w_output);
    outer_add(di, h_prev, grads.u_input);
    outer_add(df, h_prev, grads.u_forget);
    outer_add(dg, h_prev, grads.u_cell);
    outer_add(do_, h_prev, grads.u_output);
    axpy(1.0, di, grads.b_input);
    axpy(1.0, df, grads.b_forget);
    axpy(1.0, dg, grads.b_cell);
    axpy(1.0, do_, grads.b_output);

    std::fill(dh_next.begin(), dh_next.end(), 0.0);
    matvec_transpose_add(params.u_input, di, dh_next);
    matvec_transpose_add(params.u_forget, df, dh_next);
    matvec_transpose_add(params.u_cell, dg, dh_next);
    matvec_transpose_add(params.u_output, do_, dh_next);
  }
}

}  // namespace

Gradients embed_backward(const TristouNetParams& params, const ForwardCache& cache,
                         const Vector& grad_output) {
  if (grad_output.size() != cache.output.size())
    throw std::invalid_argument("embed_backward: gradient size mismatch");
  Gradients grads = zeros(params.dims);
  const int t_count = cache.input.rows();

  // L2 normalization: d_z = (g - y (y . g)) / |z|.
  const double y_dot_g = dot(cache.output, grad_output);
  Vector d_pre_norm(grad_output.size());
  for (size_t i = 0; i < grad_output.size(); ++i)
    d_pre_norm[i] = (grad_output[i] - cache.output[i] * y_dot_g) / cache.pre_norm_length;

  // dense2 tanh.
  Vector d_z2(d_pre_norm.size());
  for (size_t i = 0; i < d_z2.size(); ++i)
    d_z2[i] = d_pre_norm[i] * (1.0 - cache.pre_norm[i] * cache.pre_norm[i]);
  outer_add(d_z2, cache.hidden, grads.dense2.weights);
  axpy(1.0, d_z2, grads.dense2.bias);
  Vector d_hidden(cache.hidden.size(), 0.0);
  matvec_transpose_add(params.dense2.weights, d_z2, d_hidden);

  // dense1 tanh.
  Vector d_z1(d_hidden.size());
  for (size_t i = 0; i < d_z1.size(); ++i)
    d_z1[i] = d_hidden[i] * (1.0 - cache.hidden[i] * cache.hidden[i]);
  outer_add(d_z1, cache.concat, grads.dense1.weights);
  axpy(1.0, d_z1, grads.dense1.bias);
  Vector d_concat(cache.concat.size(), 0.0);
  matvec_transpose_add(params.dense1.weights, d_z1, d_concat);

  // Average pooling spreads 1/T of the pooled gradient to every step. The
  // pooled outputs are order-invariant, so the processing-order matrix gets
  // the same constant rows for either direction.
  const int units = static_cast<int>(cache.pool_forward.size());
  Matrix d_hidden_fwd(t_count, units), d_hidden_bwd(t_count, units);
  for (int s = 0; s < t_count; ++s) {
    for (int i = 0; i < units; ++i) {
      d_hidden_fwd(s, i) = d_concat[i] / t_count;
      d_hidden_bwd(s, i) = d_concat[units + i] / t_count;
    }
  }

  lstm_backward(params.forward_lstm, cache.forward_pass, cache.input, d_hidden_fwd,
                grads.forward_lstm);
  lstm_backward(params.backward_lstm, cache.backward_pass, cache.input, d_hidden_bwd,
                grads.backward_lstm);
  return grads;
}

void save_params(const TristouNetParams& params, const std::string& path,
                 const std::string& metadata_json) {
  json metadata = json::object();
  if (!metadata_json.empty()) {
    metadata = json::parse(metadata_json, nullptr, false);
    if (metadata.is_discarded())
      throw std::invalid_argument("save_params: metadata is not valid JSON");
  }

  TristouNetParams& mutable_params = const_cast<TristouNetParams&>(params);
  auto refs = tensor_refs(mutable_params);
  json manifest = json::array();
  size_t offset = 0;
  for (const auto& ref : refs) {
    manifest.push_back({{"name", ref.name}, {"shape", ref.shape}, {"offset", offset}});
    offset += ref.size;
  }
  const json header = {{"format_version", 1},
                       {"dims",
                        {{"input_dim", params.dims.input_dim},
                         {"lstm_units", params.dims.lstm_units},
                         {"hidden_units", params.dims.hidden_units},
                         {"embedding_dim", params.dims.embedding_dim}}},
                       {"tensors", manifest},
                       {"metadata", metadata}};
  const std::string header_text = header.dump();

  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("save_params: cannot open " + path);
  out.write(kMagic, sizeof(kMagic));
  const uint32_t header_len = static_cast<uint32_t>(header_text.size());
  const unsigned char len_bytes[4] = {
      static_cast<unsigned char>(header_len & 0xff),
      static_cast<unsigned char>(header_len >> 8 & 0xff),
      static_cast<unsigned char>(header_len >> 16 & 0xff),
      static_cast<unsigned char>(header_len >> 24 & 0xff)};
  out.write(reinterpret_cast<const char*>(len_bytes), 4);
  out.write(header_text.data(), static_cast<std::streamsize>(header_text.size()));
  for (const auto& ref : refs)
    out.write(reinterpret_cast<const char*>(ref.data),
              static_cast<std::streamsize>(ref.size * sizeof(double)));
  if (!out) throw std::runtime_error("save_params: write failed for " + path);
}

LoadedModel load_params(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("load_params: cannot open " + path);

  char magic[8];
  unsigned char len_bytes[4];
  in.read(magic, sizeof(magic));
  in.read(reinterpret_cast<char*>(len_bytes), 4);
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
    throw std::runtime_error("load_params: " + path + " is not a model file");
  const uint32_t header_len = static_cast<uint32_t>(len_bytes[0]) | len_bytes[1] << 8 |
                              len_bytes[2] << 16 | static_cast<uint32_t>(len_bytes[3]) << 24;
  std::string header_text(header_len, '\0');
  in.read(header_text.data(), header_len);
  if (!in) throw std::runtime_error("load_params: " + path + " truncated header");

  json header = json::parse(header_text, nullptr, false);
  if (header.is_discarded() || header.value("format_version", 0) != 1)
    throw std::runtime_error("load_params: " + path + " has an unsupported header");

  LoadedModel model;
  const json& dims = header.at("dims");
  model.params = zeros({dims.at("input_dim").get<int>(), dims.at("lstm_units").get<int>(),
                        dims.at("hidden_units").get<int>(), dims.at("embedding_dim").get<int>()});
  model.metadata_json = header.at("metadata").dump();

  auto refs = tensor_refs(model.params);
  const json& manifest = header.at("tensors");
  if (manifest.size() != refs.size())
    throw std::runtime_error("load_params: " + path + " manifest does not match layout");
  size_t offset = 0;
  for (size_t i = 0; i < refs.size(); ++i) {
    const json& entry = manifest[i];
    if (entry.at("name").get<std::string>() != refs[i].name ||
        entry.at("shape").get<std::vector<int>>() != refs[i].shape ||
        entry.at("offset").get<size_t>() != offset)
      throw std::runtime_error("load_params: " + path + " manifest mismatch at tensor " +
                               refs[i].name);
    offset += refs[i].size;
    in.read(reinterpret_cast<char*>(refs[i].data),
            static_cast<std::streamsize>(refs[i].size * sizeof(double)));
    if (!in)
      throw std::runtime_error("load_params: " + path + " truncated blob at tensor " +
                               refs[i].name);
  }
  // Require exact length: trailing bytes mean a corrupt or mismatched file.
  in.peek();
  if (!in.eof()) throw std::runtime_error("load_params: " + path + " has trailing bytes");
  return model;
}

}  // namespace tristou
