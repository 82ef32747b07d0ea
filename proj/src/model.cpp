#include "hdsf/model.hpp"

#include <cstdint>
#include <fstream>

namespace hdsf {

namespace {

constexpr char kMagic[8] = {'H', 'D', 'S', 'F', 'C', 'K', 'P', 'T'};
constexpr std::uint32_t kVersion = 1;

void write_u64(std::ostream& out, std::uint64_t v) {
  char buf[8];
  for (int i = 0; i < 8; ++i) buf[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  out.write(buf, 8);
}

std::uint64_t read_u64(std::istream& in) {
  unsigned char buf[8];
  in.read(reinterpret_cast<char*>(buf), 8);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(buf[i]) << (8 * i);
  return v;
}

void write_string(std::ostream& out, const std::string& s) {
  write_u64(out, s.size());
  out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

std::string read_string(std::istream& in) {
  std::uint64_t n = read_u64(in);
  std::string s(n, '\0');
  in.read(s.data(), static_cast<std::streamsize>(n));
  return s;
}

void write_tensor(std::ostream& out, const Tensor& t) {
  write_u64(out, t.shape().size());
  for (std::size_t d : t.shape()) write_u64(out, d);
  out.write(reinterpret_cast<const char*>(t.data().data()),
            static_cast<std::streamsize>(t.size() * sizeof(double)));
}

Tensor read_tensor(std::istream& in) {
  std::uint64_t rank = read_u64(in);
  std::vector<std::size_t> shape(rank);
  for (auto& d : shape) d = read_u64(in);
  Tensor t = Tensor::zeros(shape);
  in.read(reinterpret_cast<char*>(t.data().data()),
          static_cast<std::streamsize>(t.size() * sizeof(double)));
  return t;
}

void write_param(std::ostream& out, const Parameter& p) {
  write_string(out, p.name);
  write_tensor(out, p.value);
  write_tensor(out, p.m);
  write_tensor(out, p.v);
  write_u64(out, static_cast<std::uint64_t>(p.step_count));
}

void read_param(std::istream& in, Parameter& p) {
  std::string name = read_string(in);
  if (name != p.name) {
    throw ContractViolation("checkpoint parameter order mismatch: expected " +
                            p.name + ", got " + name);
  }
  Tensor value = read_tensor(in);
  if (!value.same_shape(p.value)) {
    throw ContractViolation("checkpoint shape mismatch for " + p.name);
  }
  p.value = std::move(value);
  p.m = read_tensor(in);
  p.v = read_tensor(in);
  p.step_count = static_cast<long>(read_u64(in));
  p.grad = Tensor::zeros(p.value.shape());
}

}  // namespace

Model::Model(ModelConfig cfg, std::uint64_t seed) : cfg_(cfg) {
  if (cfg.vocab_size == 0) throw ContractViolation("model needs a vocabulary");
  std::mt19937_64 rng(seed);
  std::size_t h = cfg.hidden, d = cfg.emb_dim;
  double r = cfg.init_range;
  embeddings = Parameter(
      "embeddings", Tensor::uniform({cfg.vocab_size, d}, r, rng));
  lstm_fwd = LstmCell("lstm_fwd", d, h, r, rng);
  lstm_bwd = LstmCell("lstm_bwd", d, h, r, rng);
  w_u = Parameter("w_u", Tensor::uniform({h, h}, r, rng));
  b_u = Parameter("b_u", Tensor::zeros({h}));
  e_root = Parameter("e_root", Tensor::uniform({h}, r, rng));
  w_g = Parameter("w_g", Tensor::uniform({h, 3 * h}, r, rng));
  b_g = Parameter("b_g", Tensor::zeros({h}));
  w_c = Parameter("w_c", Tensor::uniform({2, h}, r, rng));
  b_c = Parameter("b_c", Tensor::zeros({2}));
}

std::vector<Parameter*> Model::parameters() {
  std::vector<Parameter*> ps{&embeddings};
  for (Parameter* p : lstm_fwd.parameters()) ps.push_back(p);
  for (Parameter* p : lstm_bwd.parameters()) ps.push_back(p);
  for (Parameter* p : {&w_u, &b_u, &e_root, &w_g, &b_g, &w_c, &b_c}) {
    ps.push_back(p);
  }
  return ps;
}

DocForward Model::forward(Graph& g, const Document& doc) {
  DocForward out;
  Graph::Var emb = g.param(embeddings);
  out.f = encode_document(g, lstm_fwd, lstm_bwd, emb, doc);
  Graph::Var wu = g.param(w_u), bu = g.param(b_u);
  out.structure = soft_structure(g, wu, bu, out.f, cfg_.leaky_slope);
  Graph::Var er = g.param(e_root);
  Graph::Var wg = g.param(w_g), bg = g.param(b_g);
  std::vector<Graph::Var> gs;
  gs.reserve(doc.k());
  for (std::size_t j = 0; j < doc.k(); ++j) {
    Graph::Var p = parent_context(g, j, out.structure, out.f, er);
    Graph::Var c = child_context(g, j, out.structure, out.f,
                                 cfg_.child_context);
    gs.push_back(
        sentence_struct_rep(g, p, c, out.f[j], wg, bg, cfg_.leaky_slope));
  }
  out.x = document_rep(g, gs);
  out.logits = g.affine(g.param(w_c), out.x, g.param(b_c));
  g.value(out.logits).require_finite("classifier logits");
  return out;
}

Graph::Var Model::batch_loss(Graph& g,
                             const std::vector<const Document*>& docs) {
  if (docs.empty()) throw ContractViolation("batch_loss: empty batch");
  std::vector<Graph::Var> losses;
  losses.reserve(docs.size());
  for (const Document* d : docs) {
    DocForward fw = forward(g, *d);
    losses.push_back(g.softmax_xent(fw.logits, target_index(d->label)));
  }
  Graph::Var total = losses[0];
  for (std::size_t i = 1; i < losses.size(); ++i) {
    total = g.add(total, losses[i]);
  }
  return total;
}

Tensor Model::predict(const Document& doc) {
  Graph g;
  DocForward fw = forward(g, doc);
  return g.probs(fw.logits);
}

AttentionState Model::attention_state(const Document& doc) {
  Graph g;
  DocForward fw = forward(g, doc);
  return concretize(g, fw.structure);
}

void Model::save(const std::string& path, const Vocabulary& vocab,
                 const std::string& config_echo) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ContractViolation("cannot write checkpoint: " + path);
  out.write(kMagic, sizeof(kMagic));
  write_u64(out, kVersion);
  write_u64(out, cfg_.vocab_size);
  write_u64(out, cfg_.emb_dim);
  write_u64(out, cfg_.hidden);
  out.write(reinterpret_cast<const char*>(&cfg_.leaky_slope), sizeof(double));
  out.write(reinterpret_cast<const char*>(&cfg_.init_range), sizeof(double));
  write_u64(out, cfg_.child_context == ChildContextMode::paper ? 0 : 1);
  write_string(out, config_echo);
  write_u64(out, vocab.size());
  for (const std::string& t : vocab.tokens()) write_string(out, t);
  auto params = const_cast<Model*>(this)->parameters();
  write_u64(out, params.size());
  for (const Parameter* p : params) write_param(out, *p);
  if (!out) throw ContractViolation("checkpoint write failed: " + path);
}

Model Model::load(const std::string& path, Vocabulary& vocab,
                  std::string* config_echo) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ContractViolation("cannot open checkpoint: " + path);
  char magic[8];
  in.read(magic, 8);
  if (!in || std::string(magic, 8) != std::string(kMagic, 8)) {
    throw ContractViolation("not an HDSF checkpoint: " + path);
  }
  std::uint64_t version = read_u64(in);
  if (version != kVersion) {
    throw ContractViolation("unsupported checkpoint version " +
                            std::to_string(version));
  }
  ModelConfig cfg;
  cfg.vocab_size = read_u64(in);
  cfg.emb_dim = read_u64(in);
  cfg.hidden = read_u64(in);
  in.read(reinterpret_cast<char*>(&cfg.leaky_slope), sizeof(double));
  in.read(reinterpret_cast<char*>(&cfg.init_range), sizeof(double));
  cfg.child_context = read_u64(in) == 0 ? ChildContextMode::paper
                                        : ChildContextMode::cited_work;
  std::string echo = read_string(in);
  if (config_echo) *config_echo = echo;
  std::uint64_t vsize = read_u64(in);
  Vocabulary fresh;
  for (std::uint64_t i = 0; i < vsize; ++i) {
    std::string tok = read_string(in);
    if (i >= 2) fresh.add(tok);  // PAD/UNK are built in
  }
  vocab = std::move(fresh);
  if (vocab.size() != cfg.vocab_size) {
    throw ContractViolation("checkpoint vocabulary size mismatch");
  }
  Model model(cfg, 0);
  auto params = model.parameters();
  std::uint64_t n = read_u64(in);
  if (n != params.size()) {
    throw ContractViolation("checkpoint parameter count mismatch");
  }
  for (Parameter* p : params) read_param(in, *p);
  if (!in) throw ContractViolation("truncated checkpoint: " + path);
  return model;
}

}  // namespace hdsf
