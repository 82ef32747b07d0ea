#include "hdsf/representation.hpp"

namespace hdsf {

ChildContextMode parse_child_context(const std::string& s) {
  if (s == "paper") return ChildContextMode::paper;
  if (s == "cited-work") return ChildContextMode::cited_work;
  throw ContractViolation("child-context must be 'paper' or 'cited-work'");
}

const char* child_context_name(ChildContextMode m) {
  return m == ChildContextMode::paper ? "paper" : "cited-work";
}

Graph::Var parent_context(Graph& g, std::size_t j, const SoftStructure& s,
                          const std::vector<Graph::Var>& f,
                          Graph::Var e_root) {
  std::size_t k = f.size();
  Graph::Var acc = g.scale_by(g.pick(s.r, j), e_root);
  for (std::size_t z = 0; z < k; ++z) {
    if (z == j) continue;
    acc = g.add(acc, g.scale_by(s.a[z][j], f[z]));
  }
  return acc;
}

Graph::Var child_context(Graph& g, std::size_t j, const SoftStructure& s,
                         const std::vector<Graph::Var>& f,
                         ChildContextMode mode) {
  std::size_t k = f.size();
  if (k == 1) return g.constant(Tensor::zeros(g.value(f[j]).shape()));
  if (mode == ChildContextMode::paper) {
    std::vector<Graph::Var> row;
    row.reserve(k - 1);
    for (std::size_t z = 0; z < k; ++z) {
      if (z != j) row.push_back(s.a[j][z]);
    }
    Graph::Var row_sum = g.sum(g.stack(row));
    return g.scale_by(row_sum, f[j]);
  }
  Graph::Var acc = g.constant(Tensor::zeros(g.value(f[j]).shape()));
  for (std::size_t z = 0; z < k; ++z) {
    if (z == j) continue;
    acc = g.add(acc, g.scale_by(s.a[j][z], f[z]));
  }
  return acc;
}

Graph::Var sentence_struct_rep(Graph& g, Graph::Var p, Graph::Var c,
                               Graph::Var f, Graph::Var w_g, Graph::Var b_g,
                               double slope) {
  return g.leaky_relu(g.affine(w_g, g.concat({p, c, f}), b_g), slope);
}

Graph::Var document_rep(Graph& g, const std::vector<Graph::Var>& gs) {
  if (gs.empty()) throw ContractViolation("document_rep: no sentences");
  return g.average(gs);
}

}  // namespace hdsf
