#include "hdsf/encoder.hpp"

namespace hdsf {

LstmCell::LstmCell(const std::string& prefix, std::size_t in_dim,
                   std::size_t hid_dim, double init_range,
                   std::mt19937_64& rng)
    : input_dim(in_dim), hidden_dim(hid_dim) {
  auto wx = [&](const char* gate) {
    return Parameter(prefix + ".wx_" + gate,
                     Tensor::uniform({hid_dim, in_dim}, init_range, rng));
  };
  auto wh = [&](const char* gate) {
    return Parameter(prefix + ".wh_" + gate,
                     Tensor::uniform({hid_dim, hid_dim}, init_range, rng));
  };
  auto b = [&](const char* gate) {
    return Parameter(prefix + ".b_" + gate, Tensor::zeros({hid_dim}));
  };
  wx_i = wx("i"); wh_i = wh("i"); b_i = b("i");
  wx_f = wx("f"); wh_f = wh("f"); b_f = b("f");
  wx_o = wx("o"); wh_o = wh("o"); b_o = b("o");
  wx_c = wx("c"); wh_c = wh("c"); b_c = b("c");
}

std::vector<Parameter*> LstmCell::parameters() {
  return {&wx_i, &wh_i, &b_i, &wx_f, &wh_f, &b_f,
          &wx_o, &wh_o, &b_o, &wx_c, &wh_c, &b_c};
}

LstmRunner::LstmRunner(Graph& g, LstmCell& cell) : g_(g), cell_(cell) {
  wx_i_ = g.param(cell.wx_i); wh_i_ = g.param(cell.wh_i); b_i_ = g.param(cell.b_i);
  wx_f_ = g.param(cell.wx_f); wh_f_ = g.param(cell.wh_f); b_f_ = g.param(cell.b_f);
  wx_o_ = g.param(cell.wx_o); wh_o_ = g.param(cell.wh_o); b_o_ = g.param(cell.b_o);
  wx_c_ = g.param(cell.wx_c); wh_c_ = g.param(cell.wh_c); b_c_ = g.param(cell.b_c);
}

LstmState LstmRunner::initial_state() {
  Graph::Var z = g_.constant(Tensor::zeros({cell_.hidden_dim}));
  return {z, z};
}

LstmState LstmRunner::step(const LstmState& prev, Graph::Var input) {
  if (g_.value(input).size() != cell_.input_dim ||
      g_.value(prev.h).size() != cell_.hidden_dim) {
    throw ContractViolation("lstm_step: shape mismatch");
  }
  auto gate = [&](Graph::Var wx, Graph::Var wh, Graph::Var b) {
    return g_.add(g_.add(g_.matvec(wx, input), g_.matvec(wh, prev.h)), b);
  };
  Graph::Var i = g_.sigmoid(gate(wx_i_, wh_i_, b_i_));
  Graph::Var f = g_.sigmoid(gate(wx_f_, wh_f_, b_f_));
  Graph::Var o = g_.sigmoid(gate(wx_o_, wh_o_, b_o_));
  Graph::Var cand = g_.tanh_(gate(wx_c_, wh_c_, b_c_));
  Graph::Var c = g_.add(g_.mul(f, prev.c), g_.mul(i, cand));
  Graph::Var h = g_.mul(o, g_.tanh_(c));
  return {h, c};
}

Graph::Var encode_sentence(Graph& g, LstmRunner& run_f, LstmRunner& run_b,
                           Graph::Var embedding_matrix,
                           const std::vector<int>& tokens) {
  if (tokens.empty()) {
    throw ContractViolation("encode_sentence: empty sentence");
  }
  LstmState sf = run_f.initial_state();
  LstmState sb = run_b.initial_state();
  std::size_t t_len = tokens.size();
  for (std::size_t t = 0; t < t_len; ++t) {
    Graph::Var wf = g.row(embedding_matrix, static_cast<std::size_t>(tokens[t]));
    sf = run_f.step(sf, wf);
    Graph::Var wb = g.row(embedding_matrix,
                          static_cast<std::size_t>(tokens[t_len - 1 - t]));
    sb = run_b.step(sb, wb);
  }
  Graph::Var f_j = g.scale(g.add(sf.h, sb.h), 0.5);
  g.value(f_j).require_finite("sentence encoding");
  return f_j;
}

Graph::Var encode_sentence(Graph& g, LstmCell& fwd, LstmCell& bwd,
                           Graph::Var embedding_matrix,
                           const std::vector<int>& tokens) {
  LstmRunner run_f(g, fwd), run_b(g, bwd);
  return encode_sentence(g, run_f, run_b, embedding_matrix, tokens);
}

std::vector<Graph::Var> encode_document(Graph& g, LstmCell& fwd,
                                        LstmCell& bwd,
                                        Graph::Var embedding_matrix,
                                        const Document& doc) {
  if (doc.k() == 0) throw ContractViolation("encode_document: empty document");
  LstmRunner run_f(g, fwd), run_b(g, bwd);
  std::vector<Graph::Var> fs;
  fs.reserve(doc.k());
  for (const auto& sent : doc.sentences) {
    fs.push_back(encode_sentence(g, run_f, run_b, embedding_matrix, sent));
  }
  return fs;
}

}  // namespace hdsf
