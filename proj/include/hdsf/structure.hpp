#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "hdsf/graph.hpp"

namespace hdsf {

// Soft structure quantities on the tape: projected sentence vectors u_j,
// parent-child scalars a[m][n] (diagonal unused), and the root
// distribution r. Indices are 0-based internally.
struct SoftStructure {
  std::vector<Graph::Var> u;
  std::vector<std::vector<Graph::Var>> a;
  Graph::Var r = 0;
};

// Concrete probabilities for the post hoc tree construction.
struct AttentionState {
  Tensor a;  // k x k, column n is a distribution over parents m != n
  Tensor r;  // k
};

// u_j = LeakyReLU(W f_j + b); the same W, b feed both the attention
// scores and the root scores.
Graph::Var project(Graph& g, Graph::Var w, Graph::Var f, Graph::Var b,
                   double slope);

// Column n of A is the softmax over m != n of u_m . u_n; the diagonal is
// masked out of the normalization entirely. k = 1 yields an all-zero 1x1 A.
std::vector<std::vector<Graph::Var>> attention_matrix(
    Graph& g, const std::vector<Graph::Var>& u);

// r = softmax over j of the element-sum of u_j.
Graph::Var root_probs(Graph& g, const std::vector<Graph::Var>& u);

SoftStructure soft_structure(Graph& g, Graph::Var w, Graph::Var b,
                             const std::vector<Graph::Var>& f, double slope);

AttentionState concretize(const Graph& g, const SoftStructure& s);

struct DependencyTree {
  int root = 0;
  std::vector<int> parent;                 // -1 for the root
  std::vector<std::vector<int>> children;  // insertion order
  std::vector<double> attach_prob;         // 1.0 for the root
  std::vector<double> root_prob;           // copy of r

  std::size_t k() const { return parent.size(); }
};

// Greedy construction: root = argmax r, then repeatedly take the largest
// A[p][c] with p already in the tree and c outside it. Ties break toward
// the lowest index (root) and lexicographic (p, c) (attachments).
DependencyTree build_tree(const AttentionState& st);

// Root first, children in insertion order, depth first.
std::vector<int> preorder(const DependencyTree& tree);

// Spanning-arborescence check: single root, every other node has one
// parent, all nodes reachable from the root, no cycles.
bool is_spanning_tree(const DependencyTree& tree);

// Tab-separated rows: sentence_index (1-based), parent_index (0 = root),
// root_prob, attach_prob, preorder_rank.
void write_tree(std::ostream& out, const DependencyTree& tree);

// Reads the format written by write_tree; '#' lines are skipped.
DependencyTree read_tree(std::istream& in);

}  // namespace hdsf
