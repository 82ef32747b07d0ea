#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "hdsf/param.hpp"
#include "hdsf/tensor.hpp"

namespace hdsf {

// Reverse-mode tape. Every operation records its inputs and a backward
// closure; backward(loss) walks the tape once and accumulates gradients
// into the Parameters referenced by param() leaves.
//
// A Graph instance covers one forward pass (typically one mini-batch);
// build a fresh one per batch.
class Graph {
 public:
  using Var = std::size_t;

  Var constant(Tensor t);
  Var param(Parameter& p);

  const Tensor& value(Var v) const { return nodes_[v].value; }
  Tensor& grad(Var v) { return nodes_[v].grad; }

  Var add(Var a, Var b);
  Var sub(Var a, Var b);
  Var mul(Var a, Var b);          // elementwise
  Var scale(Var a, double c);
  Var scale_by(Var s, Var x);     // scalar var times tensor var
  Var matvec(Var w, Var x);       // (m x n) * (n) -> (m)
  Var affine(Var w, Var x, Var b);
  Var row(Var m, std::size_t r);  // row slice, used for embedding lookup
  Var dot(Var a, Var b);          // -> scalar
  Var sum(Var a);                 // -> scalar
  Var pick(Var v, std::size_t i); // -> scalar
  Var concat(const std::vector<Var>& parts);
  Var stack(const std::vector<Var>& scalars);  // scalars -> vector
  Var average(const std::vector<Var>& vs);     // mean of same-shape tensors
  Var leaky_relu(Var a, double slope);
  Var tanh_(Var a);
  Var sigmoid(Var a);
  Var softmax(Var a);             // rank-1, max-shifted

  // Cross-entropy of softmax(logits) against the target index.
  // Probabilities are clamped to [1e-12, 1-1e-12] before the log.
  Var softmax_xent(Var logits, std::size_t target);

  // Softmax probabilities of a logits node, outside the tape.
  Tensor probs(Var logits) const { return softmax_stable(value(logits)); }

  void backward(Var loss);

  std::size_t size() const { return nodes_.size(); }

 private:
  struct Node {
    Tensor value;
    Tensor grad;
    std::function<void(Graph&)> back;  // empty for leaves
    Parameter* parameter = nullptr;
  };

  Var emit(Tensor value, std::function<void(Graph&)> back = {});
  void check_same_shape(Var a, Var b, const char* op) const;

  std::vector<Node> nodes_;
};

}  // namespace hdsf
