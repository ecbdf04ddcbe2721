// core/include/tristou/network.hpp

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

#ifndef TRISTOU_NETWORK_HPP
#define TRISTOU_NETWORK_HPP

#include <string>
#include <vector>

#include "tristou/corpus.hpp"
#include "tristou/matrix.hpp"
#include "tristou/rng.hpp"

namespace tristou {

// TristouNet: BiLSTM -> temporal average pooling -> concatenation -> two
// dense tanh layers -> L2 normalization. Embeddings live on the unit
// hypersphere, so squared euclidean distances lie in [0, 4].

struct Dims {
  int input_dim = 35;       // feature columns F
  int lstm_units = 16;      // per-direction LSTM size
  int hidden_units = 16;    // first dense layer
  int embedding_dim = 16;   // final embedding size

  bool operator==(const Dims&) const = default;
};

// One LSTM direction: sigmoid gates, tanh cell input/output squashing, no
// peepholes, zero initial state.
struct LstmParams {
  Matrix w_input, w_forget, w_cell, w_output;  // lstm_units x input_dim
  Matrix u_input, u_forget, u_cell, u_output;  // lstm_units x lstm_units
  Vector b_input, b_forget, b_cell, b_output;  // lstm_units

  bool operator==(const LstmParams&) const = default;
};

struct DenseParams {
  Matrix weights;  // out x in
  Vector bias;     // out

  bool operator==(const DenseParams&) const = default;
};

struct TristouNetParams {
  LstmParams forward_lstm;
  LstmParams backward_lstm;
  DenseParams dense1;  // hidden_units x (2 * lstm_units)
  DenseParams dense2;  // embedding_dim x hidden_units
  Dims dims;

  bool operator==(const TristouNetParams&) const = default;
};

// Gradients share the parameter layout, one slot per parameter.
using Gradients = TristouNetParams;

// Flat view over every parameter tensor, in the fixed serialization order.
struct TensorRef {
  std::string name;
  std::vector<int> shape;
  double* data;
  size_t size;
};

std::vector<TensorRef> tensor_refs(TristouNetParams& params);
size_t parameter_count(const Dims& dims);
TristouNetParams zeros(const Dims& dims);

// Glorot-uniform input and dense weights, orthogonal recurrent weights, zero
// biases except forget biases at 1. Deterministic given the generator state.
TristouNetParams init_params(const Dims& dims, Rng& rng);

// Per-timestep state of one LSTM pass, kept in processing order.
struct LstmCache {
  bool reversed = false;
  Matrix gate_input, gate_forget, gate_cell, gate_output;  // T x lstm_units
  Matrix cell, cell_tanh, hidden;                          // T x lstm_units
};

// Everything needed to reproduce a forward pass exactly during backprop.
struct ForwardCache {
  Matrix input;  // T x input_dim
  LstmCache forward_pass, backward_pass;
  Vector pool_forward, pool_backward;  // per-direction temporal means
  Vector concat;                       // 2 * lstm_units
  Vector hidden;                       // tanh dense1 output
  Vector pre_norm;                     // tanh dense2 output, before L2 norm
  double pre_norm_length = 0.0;
  Vector output;                       // unit-norm embedding
};

// Runs one LSTM direction over the rows of x. When reversed, the time axis
// is flipped before the recurrence and the returned outputs are mapped back
// to original time order (only their temporal average is consumed, so the
// ordering is a documentation convenience).
Matrix lstm_forward(const LstmParams& params, const Matrix& x, bool reversed,
                    LstmCache* cache = nullptr);

// Arithmetic mean over time of a T x K output matrix; requires T >= 1.
Vector average_pool(const Matrix& outputs);

// Embeds a feature sequence onto the unit hypersphere. Throws if the
// pre-normalization vector is degenerate (norm < 1e-12).
Vector embed(const TristouNetParams& params, const Matrix& x, ForwardCache* cache = nullptr);
Vector embed(const TristouNetParams& params, const FeatureSequence& x,
             ForwardCache* cache = nullptr);

// Exact analytic gradient of grad_output . embed(x) with respect to every
// parameter: backprop through the L2 normalization (the (I - y y^T)/|z|
// projector), the dense layers, average pooling (uniform 1/T spread), and
// full backpropagation-through-time of both LSTM directions.
Gradients embed_backward(const TristouNetParams& params, const ForwardCache& cache,
                         const Vector& grad_output);

// Model file: 8-byte magic, little-endian uint32 header length, JSON header
// {format_version, dims, tensors manifest, metadata}, then one little-endian
// float64 blob. load(save(p)) is bit-identical.
void save_params(const TristouNetParams& params, const std::string& path,
                 const std::string& metadata_json = "");

struct LoadedModel {
  TristouNetParams params;
  std::string metadata_json;
};
LoadedModel load_params(const std::string& path);

}  // namespace tristou

#endif  // TRISTOU_NETWORK_HPP
