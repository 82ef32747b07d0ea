#include "hdsf/graph.hpp"

#include <algorithm>
#include <cmath>

namespace hdsf {

Graph::Var Graph::emit(Tensor value, std::function<void(Graph&)> back) {
  Node n;
  n.grad = Tensor::zeros(value.shape());
  n.value = std::move(value);
  n.back = std::move(back);
  nodes_.push_back(std::move(n));
  return nodes_.size() - 1;
}

void Graph::check_same_shape(Var a, Var b, const char* op) const {
  if (!nodes_[a].value.same_shape(nodes_[b].value)) {
    throw ContractViolation(std::string(op) + ": shape mismatch");
  }
}

Graph::Var Graph::constant(Tensor t) { return emit(std::move(t)); }

Graph::Var Graph::param(Parameter& p) {
  Var v = emit(p.value);
  nodes_[v].parameter = &p;
  return v;
}

Graph::Var Graph::add(Var a, Var b) {
  check_same_shape(a, b, "add");
  Tensor out = nodes_[a].value;
  const auto& bd = nodes_[b].value.data();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += bd[i];
  Var v = emit(std::move(out));
  nodes_[v].back = [a, b, v](Graph& g) {
    const auto& go = g.nodes_[v].grad.data();
    auto& ga = g.nodes_[a].grad.data();
    auto& gb = g.nodes_[b].grad.data();
    for (std::size_t i = 0; i < go.size(); ++i) {
      ga[i] += go[i];
      gb[i] += go[i];
    }
  };
  return v;
}

Graph::Var Graph::sub(Var a, Var b) {
  check_same_shape(a, b, "sub");
  Tensor out = nodes_[a].value;
  const auto& bd = nodes_[b].value.data();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] -= bd[i];
  Var v = emit(std::move(out));
  nodes_[v].back = [a, b, v](Graph& g) {
    const auto& go = g.nodes_[v].grad.data();
    auto& ga = g.nodes_[a].grad.data();
    auto& gb = g.nodes_[b].grad.data();
    for (std::size_t i = 0; i < go.size(); ++i) {
      ga[i] += go[i];
      gb[i] -= go[i];
    }
  };
  return v;
}

Graph::Var Graph::mul(Var a, Var b) {
  check_same_shape(a, b, "mul");
  Tensor out = nodes_[a].value;
  const auto& bd = nodes_[b].value.data();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= bd[i];
  Var v = emit(std::move(out));
  nodes_[v].back = [a, b, v](Graph& g) {
    const auto& go = g.nodes_[v].grad.data();
    const auto& av = g.nodes_[a].value.data();
    const auto& bv = g.nodes_[b].value.data();
    auto& ga = g.nodes_[a].grad.data();
    auto& gb = g.nodes_[b].grad.data();
    for (std::size_t i = 0; i < go.size(); ++i) {
      ga[i] += go[i] * bv[i];
      gb[i] += go[i] * av[i];
    }
  };
  return v;
}

Graph::Var Graph::scale(Var a, double c) {
  Tensor out = nodes_[a].value;
  for (double& x : out.data()) x *= c;
  Var v = emit(std::move(out));
  nodes_[v].back = [a, c, v](Graph& g) {
    const auto& go = g.nodes_[v].grad.data();
    auto& ga = g.nodes_[a].grad.data();
    for (std::size_t i = 0; i < go.size(); ++i) ga[i] += c * go[i];
  };
  return v;
}

Graph::Var Graph::scale_by(Var s, Var x) {
  if (nodes_[s].value.size() != 1) {
    throw ContractViolation("scale_by: scalar operand must have size 1");
  }
  double sv = nodes_[s].value[0];
  Tensor out = nodes_[x].value;
  for (double& o : out.data()) o *= sv;
  Var v = emit(std::move(out));
  nodes_[v].back = [s, x, v](Graph& g) {
    const auto& go = g.nodes_[v].grad.data();
    const auto& xv = g.nodes_[x].value.data();
    double sv2 = g.nodes_[s].value[0];
    auto& gx = g.nodes_[x].grad.data();
    double gs = 0.0;
    for (std::size_t i = 0; i < go.size(); ++i) {
      gx[i] += sv2 * go[i];
      gs += go[i] * xv[i];
    }
    g.nodes_[s].grad[0] += gs;
  };
  return v;
}

Graph::Var Graph::matvec(Var w, Var x) {
  const Tensor& wm = nodes_[w].value;
  const Tensor& xv = nodes_[x].value;
  if (wm.shape().size() != 2 || xv.shape().size() != 1 ||
      wm.cols() != xv.size()) {
    throw ContractViolation("matvec: shape mismatch");
  }
  std::size_t m = wm.rows(), n = wm.cols();
  Tensor out = Tensor::zeros({m});
  for (std::size_t i = 0; i < m; ++i) {
    double acc = 0.0;
    const double* wr = wm.data().data() + i * n;
    for (std::size_t j = 0; j < n; ++j) acc += wr[j] * xv[j];
    out[i] = acc;
  }
  Var v = emit(std::move(out));
  nodes_[v].back = [w, x, v, m, n](Graph& g) {
    const auto& go = g.nodes_[v].grad.data();
    const auto& wv = g.nodes_[w].value.data();
    const auto& xd = g.nodes_[x].value.data();
    auto& gw = g.nodes_[w].grad.data();
    auto& gx = g.nodes_[x].grad.data();
    for (std::size_t i = 0; i < m; ++i) {
      double gi = go[i];
      if (gi == 0.0) continue;
      const double* wr = wv.data() + i * n;
      double* gwr = gw.data() + i * n;
      for (std::size_t j = 0; j < n; ++j) {
        gwr[j] += gi * xd[j];
        gx[j] += gi * wr[j];
      }
    }
  };
  return v;
}

Graph::Var Graph::affine(Var w, Var x, Var b) { return add(matvec(w, x), b); }

Graph::Var Graph::row(Var m, std::size_t r) {
  const Tensor& mv = nodes_[m].value;
  if (mv.shape().size() != 2 || r >= mv.rows()) {
    throw ContractViolation("row: index out of range");
  }
  std::size_t n = mv.cols();
  Tensor out = Tensor::zeros({n});
  for (std::size_t j = 0; j < n; ++j) out[j] = mv.at(r, j);
  Var v = emit(std::move(out));
  nodes_[v].back = [m, r, n, v](Graph& g) {
    const auto& go = g.nodes_[v].grad.data();
    auto& gm = g.nodes_[m].grad;
    for (std::size_t j = 0; j < n; ++j) gm.at(r, j) += go[j];
  };
  return v;
}

Graph::Var Graph::dot(Var a, Var b) {
  check_same_shape(a, b, "dot");
  const auto& av = nodes_[a].value.data();
  const auto& bv = nodes_[b].value.data();
  double acc = 0.0;
  for (std::size_t i = 0; i < av.size(); ++i) acc += av[i] * bv[i];
  Var v = emit(Tensor::scalar(acc));
  nodes_[v].back = [a, b, v](Graph& g) {
    double go = g.nodes_[v].grad[0];
    const auto& av2 = g.nodes_[a].value.data();
    const auto& bv2 = g.nodes_[b].value.data();
    auto& ga = g.nodes_[a].grad.data();
    auto& gb = g.nodes_[b].grad.data();
    for (std::size_t i = 0; i < av2.size(); ++i) {
      ga[i] += go * bv2[i];
      gb[i] += go * av2[i];
    }
  };
  return v;
}

Graph::Var Graph::sum(Var a) {
  const auto& av = nodes_[a].value.data();
  double acc = 0.0;
  for (double x : av) acc += x;
  Var v = emit(Tensor::scalar(acc));
  nodes_[v].back = [a, v](Graph& g) {
    double go = g.nodes_[v].grad[0];
    for (double& ga : g.nodes_[a].grad.data()) ga += go;
  };
  return v;
}

Graph::Var Graph::pick(Var a, std::size_t i) {
  if (i >= nodes_[a].value.size()) {
    throw ContractViolation("pick: index out of range");
  }
  Var v = emit(Tensor::scalar(nodes_[a].value[i]));
  nodes_[v].back = [a, i, v](Graph& g) {
    g.nodes_[a].grad[i] += g.nodes_[v].grad[0];
  };
  return v;
}

Graph::Var Graph::concat(const std::vector<Var>& parts) {
  if (parts.empty()) throw ContractViolation("concat: no parts");
  std::vector<double> out;
  for (Var p : parts) {
    const auto& d = nodes_[p].value.data();
    out.insert(out.end(), d.begin(), d.end());
  }
  Var v = emit(Tensor::vec(std::move(out)));
  std::vector<Var> ps = parts;
  nodes_[v].back = [ps, v](Graph& g) {
    const auto& go = g.nodes_[v].grad.data();
    std::size_t off = 0;
    for (Var p : ps) {
      auto& gp = g.nodes_[p].grad.data();
      for (std::size_t i = 0; i < gp.size(); ++i) gp[i] += go[off + i];
      off += gp.size();
    }
  };
  return v;
}

Graph::Var Graph::stack(const std::vector<Var>& scalars) {
  if (scalars.empty()) throw ContractViolation("stack: no elements");
  std::vector<double> out;
  out.reserve(scalars.size());
  for (Var s : scalars) {
    if (nodes_[s].value.size() != 1) {
      throw ContractViolation("stack: non-scalar element");
    }
    out.push_back(nodes_[s].value[0]);
  }
  Var v = emit(Tensor::vec(std::move(out)));
  std::vector<Var> ss = scalars;
  nodes_[v].back = [ss, v](Graph& g) {
    const auto& go = g.nodes_[v].grad.data();
    for (std::size_t i = 0; i < ss.size(); ++i) {
      g.nodes_[ss[i]].grad[0] += go[i];
    }
  };
  return v;
}

Graph::Var Graph::average(const std::vector<Var>& vs) {
  if (vs.empty()) throw ContractViolation("average: no elements");
  Var acc = vs[0];
  for (std::size_t i = 1; i < vs.size(); ++i) acc = add(acc, vs[i]);
  return scale(acc, 1.0 / static_cast<double>(vs.size()));
}

Graph::Var Graph::leaky_relu(Var a, double slope) {
  if (!(slope > 0.0 && slope < 1.0)) {
    throw ContractViolation("leaky_relu slope must be in (0,1)");
  }
  nodes_[a].value.require_finite("leaky_relu input");
  Tensor out = nodes_[a].value;
  for (double& x : out.data()) x = std::max(x, slope * x);
  Var v = emit(std::move(out));
  nodes_[v].back = [a, slope, v](Graph& g) {
    const auto& go = g.nodes_[v].grad.data();
    const auto& av = g.nodes_[a].value.data();
    auto& ga = g.nodes_[a].grad.data();
    for (std::size_t i = 0; i < go.size(); ++i) {
      ga[i] += (av[i] >= 0.0 ? 1.0 : slope) * go[i];
    }
  };
  return v;
}

Graph::Var Graph::tanh_(Var a) {
  Tensor out = nodes_[a].value;
  for (double& x : out.data()) x = std::tanh(x);
  Var v = emit(std::move(out));
  nodes_[v].back = [a, v](Graph& g) {
    const auto& go = g.nodes_[v].grad.data();
    const auto& yv = g.nodes_[v].value.data();
    auto& ga = g.nodes_[a].grad.data();
    for (std::size_t i = 0; i < go.size(); ++i) {
      ga[i] += (1.0 - yv[i] * yv[i]) * go[i];
    }
  };
  return v;
}

Graph::Var Graph::sigmoid(Var a) {
  Tensor out = nodes_[a].value;
  for (double& x : out.data()) x = 1.0 / (1.0 + std::exp(-x));
  Var v = emit(std::move(out));
  nodes_[v].back = [a, v](Graph& g) {
    const auto& go = g.nodes_[v].grad.data();
    const auto& yv = g.nodes_[v].value.data();
    auto& ga = g.nodes_[a].grad.data();
    for (std::size_t i = 0; i < go.size(); ++i) {
      ga[i] += yv[i] * (1.0 - yv[i]) * go[i];
    }
  };
  return v;
}

Graph::Var Graph::softmax(Var a) {
  Tensor out = softmax_stable(nodes_[a].value);
  Var v = emit(std::move(out));
  nodes_[v].back = [a, v](Graph& g) {
    const auto& go = g.nodes_[v].grad.data();
    const auto& yv = g.nodes_[v].value.data();
    auto& ga = g.nodes_[a].grad.data();
    double dotp = 0.0;
    for (std::size_t i = 0; i < go.size(); ++i) dotp += go[i] * yv[i];
    for (std::size_t i = 0; i < go.size(); ++i) {
      ga[i] += yv[i] * (go[i] - dotp);
    }
  };
  return v;
}

Graph::Var Graph::softmax_xent(Var logits, std::size_t target) {
  const Tensor& lv = nodes_[logits].value;
  if (target >= lv.size()) {
    throw ContractViolation("softmax_xent: target out of range");
  }
  lv.require_finite("softmax_xent logits");
  Tensor p = softmax_stable(lv);
  double pt = std::clamp(p[target], 1e-12, 1.0 - 1e-12);
  Var v = emit(Tensor::scalar(-std::log(pt)));
  nodes_[v].back = [logits, target, p, v](Graph& g) {
    double go = g.nodes_[v].grad[0];
    auto& gl = g.nodes_[logits].grad.data();
    for (std::size_t i = 0; i < p.size(); ++i) {
      double onehot = (i == target) ? 1.0 : 0.0;
      gl[i] += go * (p[i] - onehot);
    }
  };
  return v;
}

void Graph::backward(Var loss) {
  if (nodes_[loss].value.size() != 1) {
    throw ContractViolation("backward: loss must be scalar");
  }
  nodes_[loss].grad[0] = 1.0;
  for (std::size_t i = nodes_.size(); i-- > 0;) {
    if (nodes_[i].back) nodes_[i].back(*this);
    if (nodes_[i].parameter != nullptr) {
      auto& pg = nodes_[i].parameter->grad.data();
      const auto& ng = nodes_[i].grad.data();
      for (std::size_t j = 0; j < pg.size(); ++j) pg[j] += ng[j];
    }
  }
}

}  // namespace hdsf
