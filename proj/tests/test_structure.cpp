#include <cmath>
#include <random>
#include <sstream>

#include "doctest.h"
#include "hdsf/gradcheck.hpp"
#include "hdsf/structure.hpp"

using namespace hdsf;

namespace {

std::vector<Graph::Var> make_u(Graph& g, const std::vector<Tensor>& us) {
  std::vector<Graph::Var> out;
  for (const Tensor& t : us) out.push_back(g.constant(t));
  return out;
}

AttentionState state_from(const std::vector<std::vector<double>>& a,
                          const std::vector<double>& r) {
  std::size_t k = r.size();
  AttentionState st;
  st.a = Tensor::zeros({k, k});
  for (std::size_t m = 0; m < k; ++m) {
    for (std::size_t n = 0; n < k; ++n) st.a.at(m, n) = a[m][n];
  }
  st.r = Tensor::vec(r);
  return st;
}

AttentionState random_state(std::size_t k, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> dist(0.0, 1.0);
  AttentionState st;
  st.a = Tensor::zeros({k, k});
  st.r = Tensor::zeros({k});
  for (std::size_t n = 0; n < k; ++n) {
    double col = 0.0;
    for (std::size_t m = 0; m < k; ++m) {
      if (m == n) continue;
      st.a.at(m, n) = dist(rng) + 1e-6;
      col += st.a.at(m, n);
    }
    for (std::size_t m = 0; m < k; ++m) st.a.at(m, n) /= col;
    st.r[n] = dist(rng) + 1e-6;
  }
  double rs = 0.0;
  for (std::size_t j = 0; j < k; ++j) rs += st.r[j];
  for (std::size_t j = 0; j < k; ++j) st.r[j] /= rs;
  return st;
}

// Replays the search-block scan: the chosen attachment must have been
// maximal among eligible (p, c) pairs at its step.
bool attachments_block_maximal(const DependencyTree& tree,
                               const AttentionState& st) {
  std::size_t k = tree.k();
  std::vector<bool> in_tree(k, false);
  in_tree[static_cast<std::size_t>(tree.root)] = true;
  // replay the greedy scan and compare against the recorded parents
  for (std::size_t added = 1; added < k; ++added) {
    double best = -1.0;
    std::size_t bp = k, bc = k;
    for (std::size_t p = 0; p < k; ++p) {
      if (!in_tree[p]) continue;
      for (std::size_t c = 0; c < k; ++c) {
        if (in_tree[c]) continue;
        if (st.a.at(p, c) > best) {
          best = st.a.at(p, c);
          bp = p;
          bc = c;
        }
      }
    }
    if (tree.parent[bc] != static_cast<int>(bp)) return false;
    if (tree.attach_prob[bc] != best) return false;
    in_tree[bc] = true;
  }
  return true;
}

}  // namespace

TEST_CASE("project: zero weights give a zero vector, identity passes through") {
  Graph g;
  Graph::Var w0 = g.constant(Tensor::zeros({3, 3}));
  Graph::Var b0 = g.constant(Tensor::zeros({3}));
  Graph::Var f = g.constant(Tensor::vec({1.0, 2.0, 3.0}));
  Graph::Var u = project(g, w0, f, b0, 0.01);
  for (std::size_t i = 0; i < 3; ++i) CHECK(g.value(u)[i] == 0.0);

  Tensor eye = Tensor::zeros({3, 3});
  for (std::size_t i = 0; i < 3; ++i) eye.at(i, i) = 1.0;
  Graph::Var wi = g.constant(eye);
  Graph::Var u2 = project(g, wi, f, b0, 0.01);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(g.value(u2)[i] == doctest::Approx(g.value(f)[i]));
  }
}

TEST_CASE("project gradcheck") {
  std::mt19937_64 rng(9);
  Parameter w("w", Tensor::uniform({3, 3}, 0.5, rng));
  Parameter b("b", Tensor::uniform({3}, 0.5, rng));
  Parameter f("f", Tensor::uniform({3}, 1.0, rng));
  Tensor probe = Tensor::uniform({3}, 1.0, rng);
  auto loss_fn = [&](bool grad) {
    Graph g;
    Graph::Var u = project(g, g.param(w), g.param(f), g.param(b), 0.01);
    Graph::Var l = g.dot(u, g.constant(probe));
    if (grad) g.backward(l);
    return g.value(l)[0];
  };
  auto report = finite_difference_check(loss_fn, {&w, &b, &f}, 1e-5);
  CHECK(report.max_rel_error < 1e-5);
}

TEST_CASE("attention_matrix: identical u vectors give uniform columns") {
  Graph g;
  Tensor u0 = Tensor::vec({0.3, -0.2});
  auto a = attention_matrix(g, make_u(g, {u0, u0, u0}));
  for (std::size_t n = 0; n < 3; ++n) {
    for (std::size_t m = 0; m < 3; ++m) {
      if (m == n) continue;
      CHECK(g.value(a[m][n])[0] == doctest::Approx(0.5));
    }
  }
}

TEST_CASE("attention_matrix: k=2 forces both columns") {
  Graph g;
  auto a = attention_matrix(
      g, make_u(g, {Tensor::vec({1.0, 2.0}), Tensor::vec({-1.0, 0.5})}));
  CHECK(g.value(a[0][1])[0] == doctest::Approx(1.0));
  CHECK(g.value(a[1][0])[0] == doctest::Approx(1.0));
}

TEST_CASE("attention_matrix matches an extended-precision recomputation") {
  std::mt19937_64 rng(10);
  std::vector<Tensor> us;
  for (int j = 0; j < 4; ++j) us.push_back(Tensor::uniform({3}, 1.5, rng));
  Graph g;
  auto a = attention_matrix(g, make_u(g, us));
  for (std::size_t n = 0; n < 4; ++n) {
    long double denom = 0.0L;
    for (std::size_t m = 0; m < 4; ++m) {
      if (m == n) continue;
      long double d = 0.0L;
      for (std::size_t y = 0; y < 3; ++y) {
        d += static_cast<long double>(us[m][y]) * us[n][y];
      }
      denom += expl(d);
    }
    for (std::size_t m = 0; m < 4; ++m) {
      if (m == n) continue;
      long double d = 0.0L;
      for (std::size_t y = 0; y < 3; ++y) {
        d += static_cast<long double>(us[m][y]) * us[n][y];
      }
      double expect = static_cast<double>(expl(d) / denom);
      CHECK(g.value(a[m][n])[0] == doctest::Approx(expect).epsilon(1e-12));
    }
  }
}

TEST_CASE("root_probs") {
  Graph g;
  auto r1 = root_probs(g, make_u(g, {Tensor::vec({0.7})}));
  CHECK(g.value(r1)[0] == doctest::Approx(1.0));

  Tensor u0 = Tensor::vec({0.4, 0.1});
  auto r_uniform = root_probs(g, make_u(g, {u0, u0, u0}));
  for (int j = 0; j < 3; ++j) {
    CHECK(g.value(r_uniform)[j] == doctest::Approx(1.0 / 3.0));
  }

  // element sums 1, 2, 3
  auto r = root_probs(g, make_u(g, {Tensor::vec({0.5, 0.5}),
                                    Tensor::vec({1.5, 0.5}),
                                    Tensor::vec({1.0, 2.0})}));
  Tensor expect = softmax_stable(Tensor::vec({1.0, 2.0, 3.0}));
  for (int j = 0; j < 3; ++j) {
    CHECK(g.value(r)[j] == doctest::Approx(expect[j]).epsilon(1e-12));
  }
}

TEST_CASE("build_tree executes the k=3 hand-traced instance") {
  auto st = state_from({{0.0, 0.7, 0.2},
                        {0.6, 0.0, 0.8},
                        {0.4, 0.3, 0.0}},
                       {0.2, 0.5, 0.3});
  DependencyTree tree = build_tree(st);
  CHECK(tree.root == 1);
  CHECK(tree.parent[2] == 1);
  CHECK(tree.parent[0] == 1);
  CHECK(tree.attach_prob[2] == doctest::Approx(0.8));
  CHECK(tree.attach_prob[0] == doctest::Approx(0.6));
  auto order = preorder(tree);
  REQUIRE(order.size() == 3);
  CHECK(order[0] == 1);
  CHECK(order[1] == 2);
  CHECK(order[2] == 0);
}

TEST_CASE("build_tree first step follows the walkthrough: (s1,s2) at 0.4") {
  // root s1; row s1 peaks at column s2 with 0.4
  std::size_t k = 6;
  AttentionState st;
  st.a = Tensor::zeros({k, k});
  st.r = Tensor::vec({0.4, 0.2, 0.1, 0.1, 0.1, 0.1});
  for (std::size_t n = 1; n < k; ++n) {
    // column n: s1 gets a modest value, the rest split the remainder
    st.a.at(0, n) = (n == 1) ? 0.4 : 0.1;
    double rest = 1.0 - st.a.at(0, n);
    for (std::size_t m = 1; m < k; ++m) {
      if (m != n) st.a.at(m, n) = rest / static_cast<double>(k - 2);
    }
  }
  // make sure no other first-step candidate beats 0.4 in row s1
  DependencyTree tree = build_tree(st);
  CHECK(tree.root == 0);
  CHECK(tree.parent[1] == 0);
  CHECK(tree.attach_prob[1] == doctest::Approx(0.4));
  // s2 is the first-inserted child of s1
  REQUIRE(!tree.children[0].empty());
  CHECK(tree.children[0][0] == 1);
}

TEST_CASE("build_tree: k=1 is a bare root") {
  AttentionState st;
  st.a = Tensor::zeros({1, 1});
  st.r = Tensor::vec({1.0});
  DependencyTree tree = build_tree(st);
  CHECK(tree.root == 0);
  CHECK(tree.k() == 1);
  CHECK(is_spanning_tree(tree));
  CHECK(preorder(tree) == std::vector<int>{0});
}

TEST_CASE("build_tree ties break toward the lowest index") {
  auto st = state_from({{0.0, 0.5, 0.5},
                        {0.5, 0.0, 0.5},
                        {0.5, 0.5, 0.0}},
                       {1.0 / 3, 1.0 / 3, 1.0 / 3});
  DependencyTree tree = build_tree(st);
  CHECK(tree.root == 0);
  CHECK(tree.parent[1] == 0);  // (p,c)=(0,1) beats (0,2) lexicographically
  CHECK(tree.parent[2] == 0);
}

TEST_CASE("preorder on a chain follows sentence order") {
  auto st = state_from({{0.0, 0.9, 0.1},
                        {0.6, 0.0, 0.9},
                        {0.4, 0.1, 0.0}},
                       {0.8, 0.1, 0.1});
  DependencyTree tree = build_tree(st);
  CHECK(preorder(tree) == std::vector<int>{0, 1, 2});
}

TEST_CASE("random trees are spanning arborescences with maximal attachments") {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 300; ++trial) {
    std::size_t k = 2 + rng() % 29;
    AttentionState st = random_state(k, rng);
    DependencyTree tree = build_tree(st);
    CHECK(is_spanning_tree(tree));
    CHECK(attachments_block_maximal(tree, st));
  }
}

TEST_CASE("monotone relabeling of probabilities keeps the tree") {
  std::mt19937_64 rng(13);
  AttentionState st = random_state(7, rng);
  DependencyTree t1 = build_tree(st);
  AttentionState warped = st;
  for (double& v : warped.a.data()) v = std::sqrt(v);  // order-preserving
  for (double& v : warped.r.data()) v = std::sqrt(v);
  DependencyTree t2 = build_tree(warped);
  CHECK(t1.root == t2.root);
  CHECK(t1.parent == t2.parent);
  CHECK(t1.children == t2.children);
}

TEST_CASE("attention columns are shift-invariant in the scores") {
  // adding a constant to every score of a column leaves A unchanged
  std::mt19937_64 rng(14);
  std::vector<Tensor> us;
  for (int j = 0; j < 3; ++j) us.push_back(Tensor::uniform({2}, 1.0, rng));
  Graph g;
  auto a = attention_matrix(g, make_u(g, us));
  // recompute from shifted raw scores by hand
  for (std::size_t n = 0; n < 3; ++n) {
    std::vector<double> scores;
    std::vector<std::size_t> rows;
    for (std::size_t m = 0; m < 3; ++m) {
      if (m == n) continue;
      double d = us[m][0] * us[n][0] + us[m][1] * us[n][1];
      scores.push_back(d + 57.0);
      rows.push_back(m);
    }
    Tensor col = softmax_stable(Tensor::vec(scores));
    for (std::size_t i = 0; i < rows.size(); ++i) {
      CHECK(g.value(a[rows[i]][n])[0] == doctest::Approx(col[i]).epsilon(1e-12));
    }
  }
}

TEST_CASE("tree serialization round-trips through the tabular format") {
  std::mt19937_64 rng(15);
  AttentionState st = random_state(6, rng);
  DependencyTree tree = build_tree(st);
  std::ostringstream out;
  write_tree(out, tree);
  std::istringstream in(out.str());
  DependencyTree back = read_tree(in);
  CHECK(back.root == tree.root);
  CHECK(back.parent == tree.parent);
  CHECK(preorder(back) == preorder(tree));
}
