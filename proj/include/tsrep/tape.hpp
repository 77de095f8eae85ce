// Copyright 2026 The tsrep Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <vector>

#include "tsrep/matrix.hpp"

namespace tsrep {

/// Define-by-run reverse-mode tape over matrix-valued nodes.
///
/// Values are computed eagerly when an op is recorded; backward() replays
/// the record in exact reverse creation order (reverse topological order by
/// construction) and accumulates gradients into every node reachable from a
/// leaf. Constants participate in forward arithmetic but receive no
/// gradient. A tape is single-use: backward() may run once.
class Tape {
 public:
  using NodeId = std::int32_t;

  NodeId leaf(const Matrix& m);
  NodeId constant(Matrix m);
  NodeId scalar(double v) { return constant(Matrix(1, 1, v)); }

  NodeId matmul(NodeId a, NodeId b);
  NodeId add(NodeId a, NodeId b);
  NodeId sub(NodeId a, NodeId b);
  /// a (R x C) plus a row vector b (1 x C) broadcast over rows.
  NodeId add_rowvec(NodeId a, NodeId b);
  NodeId hadamard(NodeId a, NodeId b);
  /// Elementwise c0 * a + c1 with compile-time constants.
  NodeId affine(NodeId a, double c0, double c1);
  NodeId tanh(NodeId a);
  NodeId sigmoid(NodeId a);
  NodeId exp(NodeId a);
  NodeId log(NodeId a);
  NodeId sqrt(NodeId a);
  /// Sum of all entries, a 1 x 1 node.
  NodeId sum(NodeId a);
  /// Sum of squared entries, a 1 x 1 node.
  NodeId sumsq(NodeId a);
  /// Elementwise multiply / divide by a 1 x 1 node, broadcast.
  NodeId mul_scalar(NodeId a, NodeId s);
  NodeId div_scalar(NodeId a, NodeId s);
  NodeId concat_cols(NodeId a, NodeId b);
  NodeId transpose(NodeId a);

  /// Gradient of `loss` (must be 1 x 1) with respect to every node.
  /// Throws if the loss is not scalar or the tape was already consumed.
  void backward(NodeId loss);

  const Matrix& value(NodeId id) const;
  /// Zero matrix of the node's shape when the node was not reached.
  const Matrix& grad(NodeId id);

  std::size_t size() const { return nodes_.size(); }
  bool consumed() const { return consumed_; }

 private:
  enum class Op : std::uint8_t {
    kLeaf, kConst, kMatMul, kAdd, kSub, kAddRowVec, kHadamard, kAffine,
    kTanh, kSigmoid, kExp, kLog, kSqrt, kSum, kSumSq, kMulScalar,
    kDivScalar, kConcatCols, kTranspose,
  };

  struct Node {
    Matrix value;
    Op op;
    bool needs_grad;
    NodeId a = -1;
    NodeId b = -1;
    double c0 = 0.0;
    double c1 = 0.0;
  };

  NodeId push(Node n);
  void accumulate(NodeId target, Matrix g);
  const Node& at(NodeId id) const;

  std::vector<Node> nodes_;
  std::vector<Matrix> grads_;
  bool consumed_ = false;
};

}  // namespace tsrep
