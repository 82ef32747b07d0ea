#pragma once

#include <string>
#include <vector>

#include "hdsf/corpus.hpp"
#include "hdsf/encoder.hpp"
#include "hdsf/representation.hpp"
#include "hdsf/structure.hpp"

namespace hdsf {

struct ModelConfig {
  std::size_t vocab_size = 0;
  std::size_t emb_dim = 50;
  std::size_t hidden = 100;
  double leaky_slope = 0.01;
  double init_range = 0.1;
  ChildContextMode child_context = ChildContextMode::paper;
};

struct DocForward {
  std::vector<Graph::Var> f;  // sentence encodings
  SoftStructure structure;
  Graph::Var x = 0;           // document vector
  Graph::Var logits = 0;      // 2 logits, index 0 = fake
};

// The full trainable pipeline: embeddings, BLSTM encoder, shared structure
// projection, root embedding, fusion layer, and the binary classifier.
class Model {
 public:
  Model(ModelConfig cfg, std::uint64_t seed);

  const ModelConfig& config() const { return cfg_; }
  std::vector<Parameter*> parameters();

  DocForward forward(Graph& g, const Document& doc);

  // Sum of per-document cross-entropies over the batch.
  Graph::Var batch_loss(Graph& g, const std::vector<const Document*>& docs);

  // (p_fake, p_real) for one document, outside any tape.
  Tensor predict(const Document& doc);

  // Concrete A and r for the post hoc tree construction.
  AttentionState attention_state(const Document& doc);

  void save(const std::string& path, const Vocabulary& vocab,
            const std::string& config_echo) const;
  static Model load(const std::string& path, Vocabulary& vocab,
                    std::string* config_echo = nullptr);

  static std::size_t target_index(Label l) {
    return l == Label::fake ? 0 : 1;
  }

  Parameter embeddings;
  LstmCell lstm_fwd, lstm_bwd;
  Parameter w_u, b_u;    // shared projection behind A and r
  Parameter e_root;
  Parameter w_g, b_g;    // fusion over [p || c || f]
  Parameter w_c, b_c;    // classifier

 private:
  Model() = default;
  ModelConfig cfg_;
};

}  // namespace hdsf
