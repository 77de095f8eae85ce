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

#include "tsrep/tape.hpp"

#include <cmath>
#include <stdexcept>

namespace tsrep {

namespace {

Matrix map_unary(const Matrix& a, double (*f)(double)) {
  Matrix out(a.rows(), a.cols());
  const double* src = a.data();
  double* dst = out.data();
  for (std::size_t i = 0; i < a.size(); ++i) dst[i] = f(src[i]);
  return out;
}

}  // namespace

Tape::NodeId Tape::push(Node n) {
  nodes_.push_back(std::move(n));
  grads_.emplace_back();
  return static_cast<NodeId>(nodes_.size() - 1);
}

const Tape::Node& Tape::at(NodeId id) const {
  if (id < 0 || static_cast<std::size_t>(id) >= nodes_.size())
    throw std::out_of_range("Tape: bad node id");
  return nodes_[static_cast<std::size_t>(id)];
}

Tape::NodeId Tape::leaf(const Matrix& m) {
  return push({m, Op::kLeaf, true});
}

Tape::NodeId Tape::constant(Matrix m) {
  return push({std::move(m), Op::kConst, false});
}

Tape::NodeId Tape::matmul(NodeId a, NodeId b) {
  Node n{tsrep::matmul(at(a).value, at(b).value), Op::kMatMul,
         at(a).needs_grad || at(b).needs_grad, a, b};
  return push(std::move(n));
}

Tape::NodeId Tape::add(NodeId a, NodeId b) {
  Node n{tsrep::add(at(a).value, at(b).value), Op::kAdd,
         at(a).needs_grad || at(b).needs_grad, a, b};
  return push(std::move(n));
}

Tape::NodeId Tape::sub(NodeId a, NodeId b) {
  Node n{tsrep::sub(at(a).value, at(b).value), Op::kSub,
         at(a).needs_grad || at(b).needs_grad, a, b};
  return push(std::move(n));
}

Tape::NodeId Tape::add_rowvec(NodeId a, NodeId b) {
  const Matrix& av = at(a).value;
  const Matrix& bv = at(b).value;
  if (bv.rows() != 1 || bv.cols() != av.cols())
    throw std::invalid_argument("add_rowvec: b must be 1 x a.cols");
  Matrix out = av;
  for (std::size_t i = 0; i < av.rows(); ++i)
    for (std::size_t j = 0; j < av.cols(); ++j) out(i, j) += bv(0, j);
  Node n{std::move(out), Op::kAddRowVec,
         at(a).needs_grad || at(b).needs_grad, a, b};
  return push(std::move(n));
}

Tape::NodeId Tape::hadamard(NodeId a, NodeId b) {
  Node n{tsrep::hadamard(at(a).value, at(b).value), Op::kHadamard,
         at(a).needs_grad || at(b).needs_grad, a, b};
  return push(std::move(n));
}

Tape::NodeId Tape::affine(NodeId a, double c0, double c1) {
  const Matrix& av = at(a).value;
  Matrix out(av.rows(), av.cols());
  for (std::size_t i = 0; i < av.size(); ++i)
    out.data()[i] = c0 * av.data()[i] + c1;
  Node n{std::move(out), Op::kAffine, at(a).needs_grad, a, -1, c0, c1};
  return push(std::move(n));
}

Tape::NodeId Tape::tanh(NodeId a) {
  Node n{map_unary(at(a).value, [](double x) { return std::tanh(x); }),
         Op::kTanh, at(a).needs_grad, a};
  return push(std::move(n));
}

Tape::NodeId Tape::sigmoid(NodeId a) {
  Node n{map_unary(at(a).value,
                   [](double x) { return 1.0 / (1.0 + std::exp(-x)); }),
         Op::kSigmoid, at(a).needs_grad, a};
  return push(std::move(n));
}

Tape::NodeId Tape::exp(NodeId a) {
  Node n{map_unary(at(a).value, [](double x) { return std::exp(x); }),
         Op::kExp, at(a).needs_grad, a};
  return push(std::move(n));
}

Tape::NodeId Tape::log(NodeId a) {
  Node n{map_unary(at(a).value, [](double x) { return std::log(x); }),
         Op::kLog, at(a).needs_grad, a};
  return push(std::move(n));
}

Tape::NodeId Tape::sqrt(NodeId a) {
  Node n{map_unary(at(a).value, [](double x) { return std::sqrt(x); }),
         Op::kSqrt, at(a).needs_grad, a};
  return push(std::move(n));
}

Tape::NodeId Tape::sum(NodeId a) {
  Node n{Matrix(1, 1, tsrep::sum(at(a).value)), Op::kSum, at(a).needs_grad,
         a};
  return push(std::move(n));
}

Tape::NodeId Tape::sumsq(NodeId a) {
  Node n{Matrix(1, 1, tsrep::sumsq(at(a).value)), Op::kSumSq,
         at(a).needs_grad, a};
  return push(std::move(n));
}

Tape::NodeId Tape::mul_scalar(NodeId a, NodeId s) {
  const Matrix& sv = at(s).value;
  if (sv.rows() != 1 || sv.cols() != 1)
    throw std::invalid_argument("mul_scalar: s must be 1 x 1");
  Node n{scale(at(a).value, sv(0, 0)), Op::kMulScalar,
         at(a).needs_grad || at(s).needs_grad, a, s};
  return push(std::move(n));
}

Tape::NodeId Tape::div_scalar(NodeId a, NodeId s) {
  const Matrix& sv = at(s).value;
  if (sv.rows() != 1 || sv.cols() != 1)
    throw std::invalid_argument("div_scalar: s must be 1 x 1");
  if (sv(0, 0) == 0.0)
    throw std::invalid_argument("div_scalar: division by zero");
  Node n{scale(at(a).value, 1.0 / sv(0, 0)), Op::kDivScalar,
         at(a).needs_grad || at(s).needs_grad, a, s};
  return push(std::move(n));
}

Tape::NodeId Tape::concat_cols(NodeId a, NodeId b) {
  const Matrix& av = at(a).value;
  const Matrix& bv = at(b).value;
  if (av.rows() != bv.rows())
    throw std::invalid_argument("concat_cols: row mismatch");
  Matrix out(av.rows(), av.cols() + bv.cols());
  for (std::size_t i = 0; i < av.rows(); ++i) {
    for (std::size_t j = 0; j < av.cols(); ++j) out(i, j) = av(i, j);
    for (std::size_t j = 0; j < bv.cols(); ++j)
      out(i, av.cols() + j) = bv(i, j);
  }
  Node n{std::move(out), Op::kConcatCols,
         at(a).needs_grad || at(b).needs_grad, a, b};
  return push(std::move(n));
}

Tape::NodeId Tape::transpose(NodeId a) {
  Node n{tsrep::transpose(at(a).value), Op::kTranspose, at(a).needs_grad, a};
  return push(std::move(n));
}

void Tape::accumulate(NodeId target, Matrix g) {
  if (target < 0) return;
  Node& n = nodes_[static_cast<std::size_t>(target)];
  if (!n.needs_grad) return;
  Matrix& slot = grads_[static_cast<std::size_t>(target)];
  if (slot.empty())
    slot = std::move(g);
  else
    add_in_place(slot, g);
}

void Tape::backward(NodeId loss) {
  if (consumed_) throw std::runtime_error("Tape: already consumed");
  const Node& ln = at(loss);
  if (ln.value.rows() != 1 || ln.value.cols() != 1)
    throw std::invalid_argument("Tape::backward: loss must be 1 x 1");
  consumed_ = true;
  if (!ln.needs_grad) return;  // loss does not depend on any leaf
  grads_[static_cast<std::size_t>(loss)] = Matrix(1, 1, 1.0);

  for (NodeId id = loss; id >= 0; --id) {
    const Node& n = nodes_[static_cast<std::size_t>(id)];
    if (!n.needs_grad) continue;
    const Matrix& g = grads_[static_cast<std::size_t>(id)];
    if (g.empty()) continue;
    switch (n.op) {
      case Op::kLeaf:
      case Op::kConst:
        break;
      case Op::kMatMul:
        accumulate(n.a, matmul_nt(g, at(n.b).value));
        accumulate(n.b, matmul_tn(at(n.a).value, g));
        break;
      case Op::kAdd:
        accumulate(n.a, g);
        accumulate(n.b, g);
        break;
      case Op::kSub:
        accumulate(n.a, g);
        accumulate(n.b, scale(g, -1.0));
        break;
      case Op::kAddRowVec: {
        accumulate(n.a, g);
        Matrix gb(1, g.cols());
        for (std::size_t i = 0; i < g.rows(); ++i)
          for (std::size_t j = 0; j < g.cols(); ++j) gb(0, j) += g(i, j);
        accumulate(n.b, std::move(gb));
        break;
      }
      case Op::kHadamard:
        accumulate(n.a, tsrep::hadamard(g, at(n.b).value));
        accumulate(n.b, tsrep::hadamard(g, at(n.a).value));
        break;
      case Op::kAffine:
        accumulate(n.a, scale(g, n.c0));
        break;
      case Op::kTanh: {
        Matrix ga(g.rows(), g.cols());
        const Matrix& y = n.value;
        for (std::size_t i = 0; i < g.size(); ++i)
          ga.data()[i] = g.data()[i] * (1.0 - y.data()[i] * y.data()[i]);
        accumulate(n.a, std::move(ga));
        break;
      }
      case Op::kSigmoid: {
        Matrix ga(g.rows(), g.cols());
        const Matrix& y = n.value;
        for (std::size_t i = 0; i < g.size(); ++i)
          ga.data()[i] =
              g.data()[i] * y.data()[i] * (1.0 - y.data()[i]);
        accumulate(n.a, std::move(ga));
        break;
      }
      case Op::kExp:
        accumulate(n.a, tsrep::hadamard(g, n.value));
        break;
      case Op::kLog: {
        Matrix ga(g.rows(), g.cols());
        const Matrix& x = at(n.a).value;
        for (std::size_t i = 0; i < g.size(); ++i)
          ga.data()[i] = g.data()[i] / x.data()[i];
        accumulate(n.a, std::move(ga));
        break;
      }
      case Op::kSqrt: {
        Matrix ga(g.rows(), g.cols());
        const Matrix& y = n.value;
        for (std::size_t i = 0; i < g.size(); ++i)
          ga.data()[i] = g.data()[i] * 0.5 / y.data()[i];
        accumulate(n.a, std::move(ga));
        break;
      }
      case Op::kSum: {
        const Matrix& av = at(n.a).value;
        accumulate(n.a, Matrix(av.rows(), av.cols(), g(0, 0)));
        break;
      }
      case Op::kSumSq:
        accumulate(n.a, scale(at(n.a).value, 2.0 * g(0, 0)));
        break;
      case Op::kMulScalar: {
        const double s = at(n.b).value(0, 0);
        accumulate(n.a, scale(g, s));
        accumulate(n.b, Matrix(1, 1, dot(g, at(n.a).value)));
        break;
      }
      case Op::kDivScalar: {
        const double s = at(n.b).value(0, 0);
        accumulate(n.a, scale(g, 1.0 / s));
        accumulate(n.b,
                   Matrix(1, 1, -dot(g, at(n.a).value) / (s * s)));
        break;
      }
      case Op::kConcatCols: {
        const Matrix& av = at(n.a).value;
        const Matrix& bv = at(n.b).value;
        Matrix ga(av.rows(), av.cols());
        Matrix gb(bv.rows(), bv.cols());
        for (std::size_t i = 0; i < av.rows(); ++i) {
          for (std::size_t j = 0; j < av.cols(); ++j) ga(i, j) = g(i, j);
          for (std::size_t j = 0; j < bv.cols(); ++j)
            gb(i, j) = g(i, av.cols() + j);
        }
        accumulate(n.a, std::move(ga));
        accumulate(n.b, std::move(gb));
        break;
      }
      case Op::kTranspose:
        accumulate(n.a, tsrep::transpose(g));
        break;
    }
  }
}

const Matrix& Tape::value(NodeId id) const { return at(id).value; }

const Matrix& Tape::grad(NodeId id) {
  const Node& n = at(id);
  Matrix& slot = grads_[static_cast<std::size_t>(id)];
  if (slot.empty()) slot = Matrix(n.value.rows(), n.value.cols());
  return slot;
}

}  // namespace tsrep
