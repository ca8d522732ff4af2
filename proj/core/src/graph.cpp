#include "cmemnn/graph.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "cmemnn/errors.hpp"

namespace cmemnn::ad {

namespace {

constexpr double kBceClampLo = 1e-7;
constexpr double kBceClampHi = 1.0 - 1e-7;

double stable_sigmoid(double x) {
  if (x >= 0.0) {
    return 1.0 / (1.0 + std::exp(-x));
  }
  const double e = std::exp(x);
  return e / (1.0 + e);
}

}  // namespace

const Tensor& Graph::out(int idx) const {
  const Node& n = nodes_[static_cast<std::size_t>(idx)];
  return n.op == Op::param ? n.parameter->value : n.value;
}

const Tensor& Graph::val(Value v) const { return out(check(v).idx); }

Value Graph::check(Value v) const {
  if (!v.valid() || v.idx >= static_cast<int>(nodes_.size())) {
    throw DimensionError("value handle does not belong to this graph");
  }
  return v;
}

int Graph::push(Node n) {
  nodes_.push_back(std::move(n));
  return static_cast<int>(nodes_.size()) - 1;
}

Value Graph::constant(Tensor t) {
  Node n;
  n.op = Op::constant;
  n.value = std::move(t);
  return {push(std::move(n))};
}

Value Graph::param(Parameter& p) {
  auto it = mounted_.find(&p);
  if (it != mounted_.end()) return {it->second};
  Node n;
  n.op = Op::param;
  n.parameter = &p;
  int idx = push(std::move(n));
  mounted_[&p] = idx;
  return {idx};
}

Value Graph::matmul(Value a, Value b) {
  const Tensor& A = out(check(a).idx);
  const Tensor& B = out(check(b).idx);
  if (A.cols != B.rows) {
    throw DimensionError("matmul: inner dimensions disagree (" + A.shape_str() +
                         " vs " + B.shape_str() + ")");
  }
  Node n;
  n.op = Op::matmul;
  n.a = a.idx;
  n.b = b.idx;
  n.value = Tensor(A.rows, B.cols);
  for (int i = 0; i < A.rows; ++i) {
    for (int k = 0; k < A.cols; ++k) {
      const double aik = A.at(i, k);
      if (aik == 0.0) continue;
      for (int j = 0; j < B.cols; ++j) {
        n.value.at(i, j) += aik * B.at(k, j);
      }
    }
  }
  return {push(std::move(n))};
}

Value Graph::matmul_nt(Value a, Value b) {
  const Tensor& A = out(check(a).idx);
  const Tensor& B = out(check(b).idx);
  if (A.cols != B.cols) {
    throw DimensionError("matmul_nt: column dimensions disagree (" + A.shape_str() +
                         " vs " + B.shape_str() + ")");
  }
  Node n;
  n.op = Op::matmul_nt;
  n.a = a.idx;
  n.b = b.idx;
  n.value = Tensor(A.rows, B.rows);
  for (int i = 0; i < A.rows; ++i) {
    for (int j = 0; j < B.rows; ++j) {
      double s = 0.0;
      for (int k = 0; k < A.cols; ++k) s += A.at(i, k) * B.at(j, k);
      n.value.at(i, j) = s;
    }
  }
  return {push(std::move(n))};
}

Value Graph::add(Value a, Value b) {
  const Tensor& A = out(check(a).idx);
  const Tensor& B = out(check(b).idx);
  if (!A.same_shape(B)) {
    throw DimensionError("add: shapes disagree (" + A.shape_str() + " vs " +
                         B.shape_str() + ")");
  }
  Node n;
  n.op = Op::add;
  n.a = a.idx;
  n.b = b.idx;
  n.value = A;
  for (int i = 0; i < B.size(); ++i) n.value.data[i] += B.data[i];
  return {push(std::move(n))};
}

Value Graph::scale(Value a, double c) {
  const Tensor& A = out(check(a).idx);
  Node n;
  n.op = Op::scale;
  n.a = a.idx;
  n.factor = c;
  n.value = A;
  for (double& v : n.value.data) v *= c;
  return {push(std::move(n))};
}

Value Graph::concat(Value a, Value b) {
  const Value pieces[2] = {a, b};
  return concat_many(pieces);
}

Value Graph::concat_many(std::span<const Value> pieces) {
  if (pieces.empty()) throw DimensionError("concat: no inputs");
  Node n;
  n.op = Op::concat;
  int total = 0;
  for (Value v : pieces) {
    const Tensor& t = out(check(v).idx);
    if (!t.is_row()) {
      throw DimensionError("concat: expected row vector, got " + t.shape_str());
    }
    n.inputs.push_back(v.idx);
    n.widths.push_back(t.cols);
    total += t.cols;
  }
  n.value = Tensor(1, total);
  int off = 0;
  for (std::size_t p = 0; p < n.inputs.size(); ++p) {
    const Tensor& t = out(n.inputs[p]);
    std::copy(t.data.begin(), t.data.end(), n.value.data.begin() + off);
    off += n.widths[p];
  }
  return {push(std::move(n))};
}

Value Graph::stack_rows(std::span<const Value> rows) {
  if (rows.empty()) throw DimensionError("stack_rows: no inputs");
  const int d = out(check(rows[0]).idx).cols;
  Node n;
  n.op = Op::stack_rows;
  n.value = Tensor(static_cast<int>(rows.size()), d);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const Tensor& r = out(check(rows[i]).idx);
    if (!r.is_row() || r.cols != d) {
      throw DimensionError("stack_rows: row " + std::to_string(i) + " has shape " +
                           r.shape_str() + ", expected 1x" + std::to_string(d));
    }
    n.inputs.push_back(rows[i].idx);
    std::copy(r.data.begin(), r.data.end(),
              n.value.data.begin() + static_cast<std::ptrdiff_t>(i) * d);
  }
  return {push(std::move(n))};
}

Value Graph::sigmoid(Value x) {
  const Tensor& X = out(check(x).idx);
  Node n;
  n.op = Op::sigmoid;
  n.a = x.idx;
  n.value = Tensor(X.rows, X.cols);
  for (int i = 0; i < X.size(); ++i) n.value.data[i] = stable_sigmoid(X.data[i]);
  return {push(std::move(n))};
}

Value Graph::tanh_op(Value x) {
  const Tensor& X = out(check(x).idx);
  Node n;
  n.op = Op::tanh;
  n.a = x.idx;
  n.value = Tensor(X.rows, X.cols);
  for (int i = 0; i < X.size(); ++i) n.value.data[i] = std::tanh(X.data[i]);
  return {push(std::move(n))};
}

Value Graph::softmax_row(Value x) {
  const Tensor& X = out(check(x).idx);
  if (!X.is_row() || X.cols < 1) {
    throw DimensionError("softmax_row: expected non-empty row vector, got " +
                         X.shape_str());
  }
  Node n;
  n.op = Op::softmax_row;
  n.a = x.idx;
  n.value = Tensor(1, X.cols);
  const double mx = *std::max_element(X.data.begin(), X.data.end());
  double sum = 0.0;
  for (int i = 0; i < X.cols; ++i) {
    n.value.data[i] = std::exp(X.data[i] - mx);
    sum += n.value.data[i];
  }
  for (int i = 0; i < X.cols; ++i) n.value.data[i] /= sum;
  return {push(std::move(n))};
}

Value Graph::embedding_bag(std::span<const int> ids, Value table) {
  const Tensor& E = out(check(table).idx);
  Node n;
  n.op = Op::embedding_bag;
  n.a = table.idx;
  n.ids.assign(ids.begin(), ids.end());
  n.value = Tensor(1, E.cols);
  for (int id : n.ids) {
    if (id < 0 || id >= E.rows) {
      throw DataError("embedding_bag: word id " + std::to_string(id) +
                      " outside vocabulary of " + std::to_string(E.rows) +
                      " rows; map unknown words to the reserved UNK id");
    }
    for (int j = 0; j < E.cols; ++j) n.value.data[j] += E.at(id, j);
  }
  return {push(std::move(n))};
}

Value Graph::dropout(Value x, double p, Mode mode, SplitMix64& rng) {
  if (p < 0.0 || p >= 1.0) {
    throw ConfigError("dropout probability must lie in [0,1), got " + std::to_string(p));
  }
  if (mode == Mode::eval || p == 0.0) {
    return x;  // identity, no node
  }
  const Tensor& X = out(check(x).idx);
  Node n;
  n.op = Op::dropout;
  n.a = x.idx;
  n.factor = 1.0 / (1.0 - p);  // inverted dropout: eval stays identity
  n.value = Tensor(X.rows, X.cols);
  n.keep.resize(static_cast<std::size_t>(X.size()));
  for (int i = 0; i < X.size(); ++i) {
    const bool keep = rng.uniform() >= p;
    n.keep[static_cast<std::size_t>(i)] = keep ? 1 : 0;
    n.value.data[i] = keep ? X.data[i] * n.factor : 0.0;
  }
  return {push(std::move(n))};
}

Value Graph::bce_mean(Value pred, std::vector<double> targets) {
  const Tensor& P = out(check(pred).idx);
  if (!P.is_row()) {
    throw DimensionError("bce_mean: expected row vector, got " + P.shape_str());
  }
  if (static_cast<std::size_t>(P.cols) != targets.size()) {
    throw DimensionError("bce_mean: " + std::to_string(P.cols) + " predictions vs " +
                         std::to_string(targets.size()) + " targets");
  }
  Node n;
  n.op = Op::bce_mean;
  n.a = pred.idx;
  n.targets = std::move(targets);
  double total = 0.0;
  for (int i = 0; i < P.cols; ++i) {
    const double pc = std::clamp(P.data[i], kBceClampLo, kBceClampHi);
    const double t = n.targets[static_cast<std::size_t>(i)];
    total += -(t * std::log(pc) + (1.0 - t) * std::log(1.0 - pc));
  }
  n.value = Tensor::scalar(P.cols > 0 ? total / P.cols : 0.0);
  return {push(std::move(n))};
}

Value Graph::sum_squares(Value x) {
  const Tensor& X = out(check(x).idx);
  Node n;
  n.op = Op::sum_squares;
  n.a = x.idx;
  double s = 0.0;
  for (double v : X.data) s += v * v;
  n.value = Tensor::scalar(s);
  return {push(std::move(n))};
}

Value Graph::sum_all(Value x) {
  const Tensor& X = out(check(x).idx);
  Node n;
  n.op = Op::sum_all;
  n.a = x.idx;
  double s = 0.0;
  for (double v : X.data) s += v;
  n.value = Tensor::scalar(s);
  return {push(std::move(n))};
}

void Graph::backward(Value loss) {
  const Tensor& L = out(check(loss).idx);
  if (!L.is_scalar()) {
    throw DimensionError("backward: loss must be scalar (1x1), got " + L.shape_str());
  }
  for (Node& n : nodes_) {
    const Tensor& v = n.op == Op::param ? n.parameter->value : n.value;
    n.grad = Tensor(v.rows, v.cols);
  }
  nodes_[static_cast<std::size_t>(loss.idx)].grad.data[0] = 1.0;

  // Reverse tape order. Accumulation order is fixed, so gradients are
  // bit-identical across repeated runs.
  for (int i = static_cast<int>(nodes_.size()) - 1; i >= 0; --i) {
    Node& n = nodes_[static_cast<std::size_t>(i)];
    const Tensor& g = n.grad;
    switch (n.op) {
      case Op::constant:
        break;
      case Op::param:
        for (int k = 0; k < g.size(); ++k) n.parameter->grad.data[k] += g.data[k];
        break;
      case Op::matmul: {
        const Tensor& A = out(n.a);
        const Tensor& B = out(n.b);
        Tensor& dA = nodes_[static_cast<std::size_t>(n.a)].grad;
        Tensor& dB = nodes_[static_cast<std::size_t>(n.b)].grad;
        // dA += g * B^T ; dB += A^T * g
        for (int r = 0; r < A.rows; ++r) {
          for (int k = 0; k < A.cols; ++k) {
            double s = 0.0;
            for (int c = 0; c < B.cols; ++c) s += g.at(r, c) * B.at(k, c);
            dA.at(r, k) += s;
          }
        }
        for (int k = 0; k < B.rows; ++k) {
          for (int c = 0; c < B.cols; ++c) {
            double s = 0.0;
            for (int r = 0; r < A.rows; ++r) s += A.at(r, k) * g.at(r, c);
            dB.at(k, c) += s;
          }
        }
        break;
      }
      case Op::matmul_nt: {
        // out = A * B^T; dA += g * B ; dB += g^T * A
        const Tensor& A = out(n.a);
        const Tensor& B = out(n.b);
        Tensor& dA = nodes_[static_cast<std::size_t>(n.a)].grad;
        Tensor& dB = nodes_[static_cast<std::size_t>(n.b)].grad;
        for (int r = 0; r < A.rows; ++r) {
          for (int k = 0; k < A.cols; ++k) {
            double s = 0.0;
            for (int j = 0; j < B.rows; ++j) s += g.at(r, j) * B.at(j, k);
            dA.at(r, k) += s;
          }
        }
        for (int j = 0; j < B.rows; ++j) {
          for (int k = 0; k < B.cols; ++k) {
            double s = 0.0;
            for (int r = 0; r < A.rows; ++r) s += g.at(r, j) * A.at(r, k);
            dB.at(j, k) += s;
          }
        }
        break;
      }
      case Op::add: {
        Tensor& dA = nodes_[static_cast<std::size_t>(n.a)].grad;
        Tensor& dB = nodes_[static_cast<std::size_t>(n.b)].grad;
        for (int k = 0; k < g.size(); ++k) {
          dA.data[k] += g.data[k];
          dB.data[k] += g.data[k];
        }
        break;
      }
      case Op::scale: {
        Tensor& dA = nodes_[static_cast<std::size_t>(n.a)].grad;
        for (int k = 0; k < g.size(); ++k) dA.data[k] += n.factor * g.data[k];
        break;
      }
      case Op::concat: {
        int off = 0;
        for (std::size_t p = 0; p < n.inputs.size(); ++p) {
          Tensor& dP = nodes_[static_cast<std::size_t>(n.inputs[p])].grad;
          for (int k = 0; k < n.widths[p]; ++k) dP.data[k] += g.data[off + k];
          off += n.widths[p];
        }
        break;
      }
      case Op::stack_rows: {
        const int d = n.value.cols;
        for (std::size_t r = 0; r < n.inputs.size(); ++r) {
          Tensor& dR = nodes_[static_cast<std::size_t>(n.inputs[r])].grad;
          for (int k = 0; k < d; ++k) {
            dR.data[k] += g.data[static_cast<std::size_t>(r) * d + k];
          }
        }
        break;
      }
      case Op::sigmoid: {
        Tensor& dA = nodes_[static_cast<std::size_t>(n.a)].grad;
        for (int k = 0; k < g.size(); ++k) {
          const double y = n.value.data[k];
          dA.data[k] += y * (1.0 - y) * g.data[k];
        }
        break;
      }
      case Op::tanh: {
        Tensor& dA = nodes_[static_cast<std::size_t>(n.a)].grad;
        for (int k = 0; k < g.size(); ++k) {
          const double y = n.value.data[k];
          dA.data[k] += (1.0 - y * y) * g.data[k];
        }
        break;
      }
      case Op::softmax_row: {
        Tensor& dA = nodes_[static_cast<std::size_t>(n.a)].grad;
        double dot = 0.0;
        for (int k = 0; k < g.size(); ++k) dot += g.data[k] * n.value.data[k];
        for (int k = 0; k < g.size(); ++k) {
          dA.data[k] += n.value.data[k] * (g.data[k] - dot);
        }
        break;
      }
      case Op::embedding_bag: {
        Tensor& dE = nodes_[static_cast<std::size_t>(n.a)].grad;
        const int d = n.value.cols;
        for (int id : n.ids) {
          for (int k = 0; k < d; ++k) {
            dE.data[static_cast<std::size_t>(id) * d + k] += g.data[k];
          }
        }
        break;
      }
      case Op::dropout: {
        Tensor& dA = nodes_[static_cast<std::size_t>(n.a)].grad;
        for (int k = 0; k < g.size(); ++k) {
          if (n.keep[static_cast<std::size_t>(k)]) dA.data[k] += n.factor * g.data[k];
        }
        break;
      }
      case Op::bce_mean: {
        const Tensor& P = out(n.a);
        Tensor& dP = nodes_[static_cast<std::size_t>(n.a)].grad;
        const double gs = g.data[0];
        const int cnt = P.cols;
        for (int k = 0; k < cnt; ++k) {
          const double p = P.data[k];
          // Clamped entries contribute a constant to the loss: zero gradient,
          // matching finite differences of the forward value.
          if (p <= kBceClampLo || p >= kBceClampHi) continue;
          const double t = n.targets[static_cast<std::size_t>(k)];
          dP.data[k] += gs * (p - t) / (p * (1.0 - p) * cnt);
        }
        break;
      }
      case Op::sum_squares: {
        const Tensor& X = out(n.a);
        Tensor& dA = nodes_[static_cast<std::size_t>(n.a)].grad;
        const double gs = g.data[0];
        for (int k = 0; k < X.size(); ++k) dA.data[k] += 2.0 * X.data[k] * gs;
        break;
      }
      case Op::sum_all: {
        Tensor& dA = nodes_[static_cast<std::size_t>(n.a)].grad;
        const double gs = g.data[0];
        for (int k = 0; k < dA.size(); ++k) dA.data[k] += gs;
        break;
      }
    }
  }
}

}  // namespace cmemnn::ad
