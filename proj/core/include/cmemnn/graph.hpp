#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "cmemnn/params.hpp"
#include "cmemnn/rng.hpp"
#include "cmemnn/tensor.hpp"

namespace cmemnn::ad {

enum class Mode { train, eval };

/// Handle to a node on a Graph's tape.
struct Value {
  int idx = -1;
  bool valid() const { return idx >= 0; }
};

/// Reverse-mode tape. One Graph owns the nodes of one forward pass (or one
/// batch of forward passes); backward() runs a single reverse sweep in fixed
/// tape order, accumulating into Parameter::grad for every mounted parameter.
///
/// Single-writer: a Graph and the parameters mounted on it belong to one
/// training step at a time.
class Graph {
 public:
  // ---- leaves ----
  Value constant(Tensor t);
  /// Mounts a parameter as a leaf. Repeated mounts of the same parameter
  /// return the same node.
  Value param(Parameter& p);

  // ---- operations ----
  Value matmul(Value a, Value b);              // [r x s] * [s x t]
  Value matmul_nt(Value a, Value b);           // [r x s] * [t x s]^T -> [r x t]
  Value add(Value a, Value b);                 // same shape, elementwise
  Value scale(Value a, double c);
  Value concat(Value a, Value b);              // row vectors
  Value concat_many(std::span<const Value> pieces);
  Value stack_rows(std::span<const Value> rows);  // M row vectors -> [M x d]
  Value sigmoid(Value x);
  Value tanh_op(Value x);
  Value softmax_row(Value x);                  // stable, max-subtraction
  Value embedding_bag(std::span<const int> ids, Value table);
  Value dropout(Value x, double p, Mode mode, SplitMix64& rng);
  Value bce_mean(Value pred, std::vector<double> targets);  // -> scalar
  Value sum_squares(Value x);                  // -> scalar
  Value sum_all(Value x);                      // -> scalar

  /// Reverse sweep from a scalar loss. Gradients of mounted parameters are
  /// accumulated (+=) into Parameter::grad; callers zero grads beforehand.
  void backward(Value loss);

  const Tensor& val(Value v) const;
  std::size_t node_count() const { return nodes_.size(); }

 private:
  enum class Op : std::uint8_t {
    constant, param, matmul, matmul_nt, add, scale, concat, stack_rows,
    sigmoid, tanh, softmax_row, embedding_bag, dropout, bce_mean,
    sum_squares, sum_all,
  };

  struct Node {
    Op op;
    int a = -1;
    int b = -1;
    std::vector<int> inputs;        // concat / stack_rows
    Tensor value;                   // owned forward value (unused for param)
    Tensor grad;                    // allocated during backward
    Parameter* parameter = nullptr; // param leaves only
    double factor = 0.0;            // scale: c; dropout: 1/(1-p)
    std::vector<int> ids;           // embedding_bag
    std::vector<std::uint8_t> keep; // dropout mask
    std::vector<double> targets;    // bce_mean
    std::vector<int> widths;        // concat piece widths
  };

  const Tensor& out(int idx) const;
  int push(Node n);
  Value check(Value v) const;

  std::vector<Node> nodes_;
  std::unordered_map<const Parameter*, int> mounted_;
};

}  // namespace cmemnn::ad
