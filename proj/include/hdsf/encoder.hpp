#pragma once

#include <string>
#include <vector>

#include "hdsf/corpus.hpp"
#include "hdsf/graph.hpp"

namespace hdsf {

// One direction of the BLSTM: gate weights over the input and the carried
// hidden state, plus biases. Gate order: input, forget, output, candidate.
struct LstmCell {
  Parameter wx_i, wh_i, b_i;
  Parameter wx_f, wh_f, b_f;
  Parameter wx_o, wh_o, b_o;
  Parameter wx_c, wh_c, b_c;
  std::size_t input_dim = 0;
  std::size_t hidden_dim = 0;

  LstmCell() = default;
  LstmCell(const std::string& prefix, std::size_t input_dim,
           std::size_t hidden_dim, double init_range, std::mt19937_64& rng);

  std::vector<Parameter*> parameters();
};

struct LstmState {
  Graph::Var h;
  Graph::Var c;
};

// Bound to one Graph for the duration of a forward pass.
class LstmRunner {
 public:
  LstmRunner(Graph& g, LstmCell& cell);

  LstmState initial_state();  // zero h and c
  LstmState step(const LstmState& prev, Graph::Var input);

 private:
  Graph& g_;
  LstmCell& cell_;
  Graph::Var wx_i_, wh_i_, b_i_;
  Graph::Var wx_f_, wh_f_, b_f_;
  Graph::Var wx_o_, wh_o_, b_o_;
  Graph::Var wx_c_, wh_c_, b_c_;
};

// f_j: forward pass over the tokens, backward pass over the reversed
// tokens, then the average of the two final hidden states.
Graph::Var encode_sentence(Graph& g, LstmRunner& fwd, LstmRunner& bwd,
                           Graph::Var embedding_matrix,
                           const std::vector<int>& tokens);

Graph::Var encode_sentence(Graph& g, LstmCell& fwd, LstmCell& bwd,
                           Graph::Var embedding_matrix,
                           const std::vector<int>& tokens);

std::vector<Graph::Var> encode_document(Graph& g, LstmCell& fwd,
                                        LstmCell& bwd,
                                        Graph::Var embedding_matrix,
                                        const Document& doc);

}  // namespace hdsf
