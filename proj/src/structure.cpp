#include "hdsf/structure.hpp"

#include <algorithm>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

namespace hdsf {

Graph::Var project(Graph& g, Graph::Var w, Graph::Var f, Graph::Var b,
                   double slope) {
  return g.leaky_relu(g.affine(w, f, b), slope);
}

std::vector<std::vector<Graph::Var>> attention_matrix(
    Graph& g, const std::vector<Graph::Var>& u) {
  std::size_t k = u.size();
  if (k == 0) throw ContractViolation("attention_matrix: no sentences");
  std::vector<std::vector<Graph::Var>> a(k, std::vector<Graph::Var>(k, 0));
  if (k == 1) return a;  // no candidate parents; entries stay unused
  for (std::size_t n = 0; n < k; ++n) {
    std::vector<Graph::Var> scores;
    std::vector<std::size_t> rows;
    scores.reserve(k - 1);
    for (std::size_t m = 0; m < k; ++m) {
      if (m == n) continue;
      scores.push_back(g.dot(u[m], u[n]));
      rows.push_back(m);
    }
    Graph::Var col = g.softmax(g.stack(scores));
    for (std::size_t i = 0; i < rows.size(); ++i) {
      a[rows[i]][n] = g.pick(col, i);
    }
  }
  return a;
}

Graph::Var root_probs(Graph& g, const std::vector<Graph::Var>& u) {
  if (u.empty()) throw ContractViolation("root_probs: no sentences");
  std::vector<Graph::Var> scores;
  scores.reserve(u.size());
  for (Graph::Var uj : u) scores.push_back(g.sum(uj));
  return g.softmax(g.stack(scores));
}

SoftStructure soft_structure(Graph& g, Graph::Var w, Graph::Var b,
                             const std::vector<Graph::Var>& f, double slope) {
  SoftStructure s;
  s.u.reserve(f.size());
  for (Graph::Var fj : f) s.u.push_back(project(g, w, fj, b, slope));
  s.a = attention_matrix(g, s.u);
  s.r = root_probs(g, s.u);
  return s;
}

AttentionState concretize(const Graph& g, const SoftStructure& s) {
  std::size_t k = s.u.size();
  AttentionState st;
  st.a = Tensor::zeros({k, k});
  for (std::size_t m = 0; m < k; ++m) {
    for (std::size_t n = 0; n < k; ++n) {
      if (m == n || k == 1) continue;
      st.a.at(m, n) = g.value(s.a[m][n])[0];
    }
  }
  st.r = g.value(s.r);
  return st;
}

DependencyTree build_tree(const AttentionState& st) {
  std::size_t k = st.r.size();
  if (k == 0) throw ContractViolation("build_tree: empty document");
  if (st.a.shape() != std::vector<std::size_t>{k, k}) {
    throw ContractViolation("build_tree: A/r size mismatch");
  }
  DependencyTree tree;
  tree.parent.assign(k, -1);
  tree.children.assign(k, {});
  tree.attach_prob.assign(k, 1.0);
  tree.root_prob.assign(st.r.data().begin(), st.r.data().end());

  std::size_t root = 0;
  for (std::size_t j = 1; j < k; ++j) {
    if (st.r[j] > st.r[root]) root = j;  // ties keep the lowest index
  }
  tree.root = static_cast<int>(root);

  std::vector<bool> in_tree(k, false);
  in_tree[root] = true;
  for (std::size_t added = 1; added < k; ++added) {
    std::size_t best_p = k, best_c = k;
    double best = -1.0;
    for (std::size_t p = 0; p < k; ++p) {
      if (!in_tree[p]) continue;
      for (std::size_t c = 0; c < k; ++c) {
        if (in_tree[c] || c == p) continue;
        if (st.a.at(p, c) > best) {  // strict: lexicographic (p, c) on ties
          best = st.a.at(p, c);
          best_p = p;
          best_c = c;
        }
      }
    }
    tree.parent[best_c] = static_cast<int>(best_p);
    tree.children[best_p].push_back(static_cast<int>(best_c));
    tree.attach_prob[best_c] = best;
    in_tree[best_c] = true;
  }
  return tree;
}

std::vector<int> preorder(const DependencyTree& tree) {
  std::vector<int> order;
  order.reserve(tree.k());
  std::vector<int> stack{tree.root};
  while (!stack.empty()) {
    int node = stack.back();
    stack.pop_back();
    order.push_back(node);
    const auto& kids = tree.children[static_cast<std::size_t>(node)];
    for (auto it = kids.rbegin(); it != kids.rend(); ++it) stack.push_back(*it);
  }
  return order;
}

bool is_spanning_tree(const DependencyTree& tree) {
  std::size_t k = tree.k();
  if (k == 0) return false;
  if (tree.root < 0 || static_cast<std::size_t>(tree.root) >= k) return false;
  if (tree.parent[static_cast<std::size_t>(tree.root)] != -1) return false;
  std::size_t edges = 0;
  for (std::size_t j = 0; j < k; ++j) {
    if (static_cast<int>(j) == tree.root) continue;
    int p = tree.parent[j];
    if (p < 0 || static_cast<std::size_t>(p) >= k || p == static_cast<int>(j)) {
      return false;
    }
    ++edges;
  }
  if (edges != k - 1) return false;
  std::vector<int> order = preorder(tree);
  if (order.size() != k) return false;
  std::vector<bool> seen(k, false);
  for (int n : order) {
    if (seen[static_cast<std::size_t>(n)]) return false;
    seen[static_cast<std::size_t>(n)] = true;
  }
  return true;
}

void write_tree(std::ostream& out, const DependencyTree& tree) {
  std::vector<int> order = preorder(tree);
  std::vector<std::size_t> rank(tree.k());
  for (std::size_t i = 0; i < order.size(); ++i) {
    rank[static_cast<std::size_t>(order[i])] = i + 1;
  }
  out << std::fixed << std::setprecision(6);
  for (std::size_t j = 0; j < tree.k(); ++j) {
    int parent_1based = tree.parent[j] < 0 ? 0 : tree.parent[j] + 1;
    out << (j + 1) << '\t' << parent_1based << '\t' << tree.root_prob[j]
        << '\t' << tree.attach_prob[j] << '\t' << rank[j] << '\n';
  }
}

DependencyTree read_tree(std::istream& in) {
  struct Row {
    int idx, parent;
    double root_prob, attach_prob;
    std::size_t rank;
  };
  std::vector<Row> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream iss(line);
    Row r{};
    if (!(iss >> r.idx >> r.parent >> r.root_prob >> r.attach_prob >> r.rank)) {
      throw ContractViolation("malformed tree row: " + line);
    }
    rows.push_back(r);
  }
  if (rows.empty()) throw ContractViolation("empty tree file");
  std::size_t k = rows.size();
  DependencyTree tree;
  tree.parent.assign(k, -1);
  tree.children.assign(k, {});
  tree.attach_prob.assign(k, 1.0);
  tree.root_prob.assign(k, 0.0);
  std::vector<std::size_t> rank(k, 0);
  bool have_root = false;
  for (const Row& r : rows) {
    if (r.idx < 1 || static_cast<std::size_t>(r.idx) > k) {
      throw ContractViolation("tree row index out of range");
    }
    std::size_t j = static_cast<std::size_t>(r.idx - 1);
    tree.parent[j] = r.parent - 1;
    tree.root_prob[j] = r.root_prob;
    tree.attach_prob[j] = r.attach_prob;
    rank[j] = r.rank;
    if (r.parent == 0) {
      if (have_root) throw ContractViolation("tree file has two roots");
      tree.root = r.idx - 1;
      have_root = true;
    }
  }
  if (!have_root) throw ContractViolation("tree file has no root");
  // Rebuild insertion order from the preorder ranks.
  std::vector<std::size_t> by_rank(k);
  for (std::size_t j = 0; j < k; ++j) by_rank[j] = j;
  std::sort(by_rank.begin(), by_rank.end(),
            [&](std::size_t a, std::size_t b) { return rank[a] < rank[b]; });
  for (std::size_t j : by_rank) {
    int p = tree.parent[j];
    if (p >= 0) tree.children[static_cast<std::size_t>(p)].push_back(
        static_cast<int>(j));
  }
  if (!is_spanning_tree(tree)) {
    throw ContractViolation("tree file does not describe a spanning tree");
  }
  return tree;
}

}  // namespace hdsf
