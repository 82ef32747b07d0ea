#include <cmath>
#include <random>

#include "doctest.h"
#include "hdsf/encoder.hpp"
#include "hdsf/gradcheck.hpp"

using namespace hdsf;

namespace {

LstmCell zero_cell(std::size_t d, std::size_t h) {
  std::mt19937_64 rng(0);
  LstmCell cell("zero", d, h, 0.1, rng);
  for (Parameter* p : cell.parameters()) {
    for (double& v : p->value.data()) v = 0.0;
  }
  return cell;
}

// Step-by-step reference recurrence on plain doubles, no Graph involved.
struct RefLstm {
  const LstmCell& cell;
  std::vector<double> h, c;

  explicit RefLstm(const LstmCell& cell_)
      : cell(cell_), h(cell_.hidden_dim, 0.0), c(cell_.hidden_dim, 0.0) {}

  static double sigm(double x) { return 1.0 / (1.0 + std::exp(-x)); }

  void step(const std::vector<double>& x) {
    std::size_t hd = cell.hidden_dim, d = cell.input_dim;
    auto gate = [&](const Parameter& wx, const Parameter& wh,
                    const Parameter& b, std::size_t i) {
      double acc = b.value[i];
      for (std::size_t j = 0; j < d; ++j) acc += wx.value.at(i, j) * x[j];
      for (std::size_t j = 0; j < hd; ++j) acc += wh.value.at(i, j) * h[j];
      return acc;
    };
    std::vector<double> nh(hd), nc(hd);
    for (std::size_t i = 0; i < hd; ++i) {
      double ig = sigm(gate(cell.wx_i, cell.wh_i, cell.b_i, i));
      double fg = sigm(gate(cell.wx_f, cell.wh_f, cell.b_f, i));
      double og = sigm(gate(cell.wx_o, cell.wh_o, cell.b_o, i));
      double cand = std::tanh(gate(cell.wx_c, cell.wh_c, cell.b_c, i));
      nc[i] = fg * c[i] + ig * cand;
      nh[i] = og * std::tanh(nc[i]);
    }
    h = nh;
    c = nc;
  }
};

std::vector<double> emb_row(const Tensor& emb, int id) {
  std::vector<double> x(emb.cols());
  for (std::size_t j = 0; j < emb.cols(); ++j) {
    x[j] = emb.at(static_cast<std::size_t>(id), j);
  }
  return x;
}

}  // namespace

TEST_CASE("lstm_step with all-zero parameters gives a zero hidden state") {
  LstmCell cell = zero_cell(3, 4);
  Graph g;
  LstmRunner run(g, cell);
  LstmState s = run.initial_state();
  s = run.step(s, g.constant(Tensor::vec({1.0, -2.0, 0.5})));
  for (std::size_t i = 0; i < 4; ++i) CHECK(g.value(s.h)[i] == 0.0);
}

TEST_CASE("lstm_step rejects shape mismatch") {
  std::mt19937_64 rng(1);
  LstmCell cell("c", 3, 4, 0.1, rng);
  Graph g;
  LstmRunner run(g, cell);
  LstmState s = run.initial_state();
  CHECK_THROWS_AS(run.step(s, g.constant(Tensor::vec({1.0, 2.0}))),
                  ContractViolation);
}

TEST_CASE("lstm_step is compositional over carried state") {
  std::mt19937_64 rng(2);
  LstmCell cell("c", 3, 4, 0.1, rng);
  Tensor zero_in = Tensor::zeros({3});
  Graph g;
  LstmRunner run(g, cell);
  LstmState s = run.initial_state();
  LstmState one = run.step(s, g.constant(zero_in));
  LstmState two = run.step(one, g.constant(zero_in));

  Graph g2;
  LstmRunner run2(g2, cell);
  LstmState s2 = run2.initial_state();
  LstmState mid = run2.step(s2, g2.constant(zero_in));
  // restart from the carried values as fresh constants
  LstmState carried{g2.constant(g2.value(mid.h)), g2.constant(g2.value(mid.c))};
  LstmState again = run2.step(carried, g2.constant(zero_in));
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(g.value(two.h)[i] == doctest::Approx(g2.value(again.h)[i]));
  }
}

TEST_CASE("lstm gradients match finite differences") {
  std::mt19937_64 rng(3);
  LstmCell cell("c", 3, 4, 0.2, rng);
  Tensor x1 = Tensor::uniform({3}, 1.0, rng);
  Tensor x2 = Tensor::uniform({3}, 1.0, rng);
  Tensor w = Tensor::uniform({4}, 1.0, rng);
  auto loss_fn = [&](bool grad) {
    Graph g;
    LstmRunner run(g, cell);
    LstmState s = run.initial_state();
    s = run.step(s, g.constant(x1));
    s = run.step(s, g.constant(x2));
    Graph::Var l = g.dot(s.h, g.constant(w));
    if (grad) g.backward(l);
    return g.value(l)[0];
  };
  auto report = finite_difference_check(loss_fn, cell.parameters(), 1e-5);
  CHECK(report.max_rel_error < 1e-5);
}

TEST_CASE("single-token sentence with identical cells: f equals h") {
  std::mt19937_64 rng(4);
  LstmCell cell("c", 3, 4, 0.2, rng);
  std::mt19937_64 rng_emb(5);
  Parameter emb("emb", Tensor::uniform({6, 3}, 0.5, rng_emb));

  Graph g;
  Graph::Var e = g.param(emb);
  Graph::Var f = encode_sentence(g, cell, cell, e, {2});

  RefLstm ref(cell);
  ref.step(emb_row(emb.value, 2));
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(g.value(f)[i] == doctest::Approx(ref.h[i]).epsilon(1e-12));
  }
}

TEST_CASE("palindromic sentence with identical cells: both directions agree") {
  std::mt19937_64 rng(6);
  LstmCell cell("c", 3, 4, 0.2, rng);
  Parameter emb("emb", Tensor::uniform({6, 3}, 0.5, rng));
  std::vector<int> tokens{1, 4, 1};

  Graph g;
  Graph::Var e = g.param(emb);
  Graph::Var f = encode_sentence(g, cell, cell, e, tokens);

  RefLstm ref(cell);
  for (int t : tokens) ref.step(emb_row(emb.value, t));
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(g.value(f)[i] == doctest::Approx(ref.h[i]).epsilon(1e-12));
  }
}

TEST_CASE("encode_sentence matches a hand-unrolled reference recurrence") {
  std::mt19937_64 rng(7);
  LstmCell fwd("f", 3, 4, 0.2, rng), bwd("b", 3, 4, 0.2, rng);
  Parameter emb("emb", Tensor::uniform({6, 3}, 0.5, rng));
  std::vector<int> tokens{2, 0, 5};

  Graph g;
  Graph::Var e = g.param(emb);
  Graph::Var f = encode_sentence(g, fwd, bwd, e, tokens);

  RefLstm rf(fwd), rb(bwd);
  for (std::size_t t = 0; t < tokens.size(); ++t) {
    rf.step(emb_row(emb.value, tokens[t]));
    rb.step(emb_row(emb.value, tokens[tokens.size() - 1 - t]));
  }
  for (std::size_t i = 0; i < 4; ++i) {
    double expect = 0.5 * (rf.h[i] + rb.h[i]);
    CHECK(g.value(f)[i] == doctest::Approx(expect).epsilon(1e-12));
  }
}

TEST_CASE("encode_document is per-sentence independent and order-preserving") {
  std::mt19937_64 rng(8);
  LstmCell fwd("f", 3, 4, 0.2, rng), bwd("b", 3, 4, 0.2, rng);
  Parameter emb("emb", Tensor::uniform({6, 3}, 0.5, rng));

  Document doc;
  doc.id = "d";
  doc.sentences = {{1, 2}, {3}, {4, 5, 0}};

  Graph g;
  Graph::Var e = g.param(emb);
  auto fs = encode_document(g, fwd, bwd, e, doc);
  REQUIRE(fs.size() == 3);

  // each f_j equals encode_sentence applied alone
  for (std::size_t j = 0; j < 3; ++j) {
    Graph g2;
    Graph::Var e2 = g2.param(emb);
    Graph::Var alone = encode_sentence(g2, fwd, bwd, e2, doc.sentences[j]);
    for (std::size_t i = 0; i < 4; ++i) {
      CHECK(g.value(fs[j])[i] == doctest::Approx(g2.value(alone)[i]));
    }
  }

  // permuting the sentences permutes the outputs identically
  Document perm = doc;
  std::swap(perm.sentences[0], perm.sentences[2]);
  Graph g3;
  auto fs_perm = encode_document(g3, fwd, bwd, g3.param(emb), perm);
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(g3.value(fs_perm[0])[i] == doctest::Approx(g.value(fs[2])[i]));
    CHECK(g3.value(fs_perm[2])[i] == doctest::Approx(g.value(fs[0])[i]));
  }

  Document single;
  single.sentences = {{1}};
  Graph g4;
  CHECK(encode_document(g4, fwd, bwd, g4.param(emb), single).size() == 1);

  CHECK_THROWS_AS(encode_sentence(g4, fwd, bwd, g4.param(emb), {}),
                  ContractViolation);
}
