#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "hdsf/config.hpp"
#include "hdsf/gradcheck.hpp"
#include "hdsf/properties.hpp"
#include "hdsf/synthetic.hpp"

namespace fs = std::filesystem;
using namespace hdsf;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitDivergence = 3;
constexpr int kExitNumericCheck = 4;

struct CommonArgs {
  std::string config_path;
  std::vector<std::string> overrides;  // key=value
  std::string out;
  std::int64_t seed = -1;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_path, "key = value config file");
  cmd->add_option("--set", args.overrides,
                  "override a config field, e.g. --set steps=50");
  cmd->add_option("--out", args.out, "output directory");
  cmd->add_option("--seed", args.seed, "random seed");
}

AppConfig resolve_config(const CommonArgs& args) {
  AppConfig cfg;
  if (!args.config_path.empty()) cfg.load_file(args.config_path);
  for (const std::string& kv : args.overrides) {
    std::size_t eq = kv.find('=');
    if (eq == std::string::npos) {
      throw ContractViolation("--set expects key=value, got '" + kv + "'");
    }
    cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (!args.out.empty()) cfg.out = args.out;
  if (args.seed >= 0) cfg.seed = static_cast<std::uint64_t>(args.seed);
  return cfg;
}

Preprocessor make_preprocessor(const AppConfig& cfg) {
  Preprocessor prep = Preprocessor::with_defaults();
  if (!cfg.stopwords.empty()) prep.load_stopwords(cfg.stopwords);
  if (!cfg.abbreviations.empty()) prep.load_abbreviations(cfg.abbreviations);
  return prep;
}

ModelConfig model_config(const AppConfig& cfg, std::size_t vocab_size) {
  ModelConfig mc;
  mc.vocab_size = vocab_size;
  mc.emb_dim = cfg.emb_dim;
  mc.hidden = cfg.hidden;
  mc.leaky_slope = cfg.leaky_slope;
  mc.init_range = cfg.init_range;
  mc.child_context = cfg.child_context;
  return mc;
}

std::vector<Document> encode_with(const AppConfig& cfg,
                                  const Preprocessor& prep,
                                  const std::vector<RawDocument>& raws,
                                  Vocabulary& vocab, bool grow) {
  return encode_documents(raws, prep, cfg.max_sentences, vocab, grow);
}

int cmd_train(const CommonArgs& args) {
  AppConfig cfg = resolve_config(args);
  if (cfg.corpus.empty()) {
    std::cerr << "train: missing corpus path\n";
    return kExitUsage;
  }
  Preprocessor prep = make_preprocessor(cfg);
  auto raws = load_jsonl(cfg.corpus);
  CorpusSplit split =
      split_corpus(raws, cfg.dev_per_class, cfg.test_per_class, cfg.seed);
  Vocabulary vocab;
  auto train_docs = encode_with(cfg, prep, split.train, vocab, true);
  auto dev_docs = encode_with(cfg, prep, split.dev, vocab, false);
  auto test_docs = encode_with(cfg, prep, split.test, vocab, false);
  if (train_docs.empty()) {
    std::cerr << "train: no usable training documents\n";
    return kExitUsage;
  }
  Model model(model_config(cfg, vocab.size()), cfg.seed);
  if (!cfg.embeddings.empty()) {
    std::size_t n = load_embeddings(cfg.embeddings, vocab, model.embeddings.value);
    std::cerr << "loaded " << n << " pretrained embedding rows\n";
  }
  std::vector<HistoryRow> history;
  try {
    history = train(model, train_docs, dev_docs, cfg.train_config());
  } catch (const TrainingDivergence& e) {
    std::cerr << "training diverged: " << e.what() << "\n";
    return kExitDivergence;
  }

  fs::create_directories(cfg.out);
  std::string hash = cfg.hash();
  {
    std::ofstream hist(fs::path(cfg.out) / "history.csv");
    hist << "# hdsf train config=" << hash << "\n";
    hist << "step,loss,dev_accuracy\n";
    hist << std::fixed << std::setprecision(6);
    for (const HistoryRow& row : history) {
      hist << row.step << ',' << row.loss << ',';
      if (row.has_dev) hist << row.dev_accuracy;
      hist << '\n';
    }
  }
  std::string ckpt = (fs::path(cfg.out) / "model.ckpt").string();
  model.save(ckpt, vocab, cfg.serialize());

  double dev_acc = dev_docs.empty() ? 0.0 : evaluate(model, dev_docs);
  double test_acc = test_docs.empty() ? 0.0 : evaluate(model, test_docs);
  std::cout << std::fixed << std::setprecision(4);
  std::cout << "final_train_loss " << history.back().loss << "\n";
  std::cout << "dev_accuracy " << dev_acc << "\n";
  std::cout << "test_accuracy " << test_acc << "\n";
  std::cout << "checkpoint " << ckpt << "\n";
  return 0;
}

int cmd_evaluate(const CommonArgs& args) {
  AppConfig cfg = resolve_config(args);
  if (cfg.checkpoint.empty() || cfg.corpus.empty()) {
    std::cerr << "evaluate: needs checkpoint and corpus paths\n";
    return kExitUsage;
  }
  Vocabulary vocab;
  Model model = Model::load(cfg.checkpoint, vocab);
  Preprocessor prep = make_preprocessor(cfg);
  auto raws = load_jsonl(cfg.corpus);
  auto docs = encode_with(cfg, prep, raws, vocab, false);
  if (docs.empty()) {
    std::cerr << "evaluate: no usable documents\n";
    return kExitUsage;
  }
  std::cout << std::fixed << std::setprecision(4) << "accuracy "
            << evaluate(model, docs) << "\n";
  return 0;
}

int cmd_parse(const CommonArgs& args) {
  AppConfig cfg = resolve_config(args);
  if (cfg.checkpoint.empty() || cfg.corpus.empty()) {
    std::cerr << "parse: needs checkpoint and corpus paths\n";
    return kExitUsage;
  }
  Vocabulary vocab;
  Model model = Model::load(cfg.checkpoint, vocab);
  Preprocessor prep = make_preprocessor(cfg);
  auto raws = load_jsonl(cfg.corpus);
  auto docs = encode_with(cfg, prep, raws, vocab, false);
  fs::create_directories(cfg.out);
  std::string hash = cfg.hash();
  for (const Document& d : docs) {
    AttentionState st = model.attention_state(d);
    DependencyTree tree = build_tree(st);
    std::ofstream out(fs::path(cfg.out) / (d.id + ".tree"));
    out << "# hdsf parse config=" << hash << " doc=" << d.id
        << " label=" << label_name(d.label) << " k=" << d.k() << "\n";
    write_tree(out, tree);
  }
  std::cout << "wrote " << docs.size() << " tree files to " << cfg.out << "\n";
  return 0;
}

// Tree files carry their label in the '# ... label=...' header.
std::pair<DependencyTree, Label> load_tree_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ContractViolation("cannot open tree file: " + path.string());
  std::string header;
  std::getline(in, header);
  std::size_t pos = header.find("label=");
  if (header.empty() || header[0] != '#' || pos == std::string::npos) {
    throw ContractViolation("tree file missing label header: " +
                            path.string());
  }
  std::istringstream label_field(header.substr(pos + 6));
  std::string label_str;
  label_field >> label_str;
  return {read_tree(in), parse_label(label_str)};
}

void write_report(const AppConfig& cfg,
                  const std::vector<std::pair<DependencyTree, Label>>& trees) {
  auto means = aggregate(trees);
  fs::create_directories(cfg.out);
  std::ostringstream report;
  report << "# hdsf analyze config=" << cfg.hash() << "\n";
  report << "label,n_docs,n_skipped,mean_P_l,mean_P_t,mean_P_c\n";
  report << std::fixed << std::setprecision(6);
  for (const ClassPropertyMeans& m : means) {
    report << label_name(m.label) << ',' << m.n_docs << ',' << m.n_skipped
           << ',' << m.mean_p_leaf << ',' << m.mean_p_preorder << ','
           << m.mean_p_distance << "\n";
  }
  std::ofstream out(fs::path(cfg.out) / "properties.csv");
  out << report.str();
  std::cout << report.str();

  std::ofstream per_doc(fs::path(cfg.out) / "properties_docs.csv");
  per_doc << "# hdsf analyze config=" << cfg.hash() << "\n";
  per_doc << "index,label,k,P_l,P_t,P_c\n";
  per_doc << std::fixed << std::setprecision(6);
  for (std::size_t i = 0; i < trees.size(); ++i) {
    auto props = compute_properties(trees[i].first);
    if (!props) continue;
    per_doc << i << ',' << label_name(trees[i].second) << ',' << props->k
            << ',' << props->p_leaf << ',' << props->p_preorder << ','
            << props->p_distance << "\n";
  }
}

int cmd_analyze(const CommonArgs& args) {
  AppConfig cfg = resolve_config(args);
  std::vector<std::pair<DependencyTree, Label>> trees;
  if (!cfg.trees.empty()) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(cfg.trees)) {
      if (entry.path().extension() == ".tree") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    for (const fs::path& f : files) trees.push_back(load_tree_file(f));
    if (trees.empty()) {
      std::cerr << "analyze: no .tree files in " << cfg.trees << "\n";
      return kExitUsage;
    }
  } else if (!cfg.checkpoint.empty() && !cfg.corpus.empty()) {
    Vocabulary vocab;
    Model model = Model::load(cfg.checkpoint, vocab);
    Preprocessor prep = make_preprocessor(cfg);
    auto raws = load_jsonl(cfg.corpus);
    auto docs = encode_with(cfg, prep, raws, vocab, false);
    for (const Document& d : docs) {
      trees.emplace_back(build_tree(model.attention_state(d)), d.label);
    }
    if (trees.empty()) {
      std::cerr << "analyze: no usable documents\n";
      return kExitUsage;
    }
  } else {
    std::cerr << "analyze: needs either trees dir or checkpoint + corpus\n";
    return kExitUsage;
  }
  write_report(cfg, trees);
  return 0;
}

int cmd_gradcheck(const CommonArgs& args, bool corrupt_backward) {
  AppConfig cfg = resolve_config(args);
  // A fixed 2-document toy batch over a tiny vocabulary.
  Vocabulary vocab;
  for (const char* w : {"alpha", "beta", "gamma", "delta", "epsilon"}) {
    vocab.add(w);
  }
  std::vector<Document> docs(2);
  docs[0].id = "toy-0";
  docs[0].label = Label::fake;
  docs[0].sentences = {{2, 3}, {4, 5, 6}};
  docs[1].id = "toy-1";
  docs[1].label = Label::real;
  docs[1].sentences = {{3, 6}, {2, 4}, {5}};

  // A fixed, well-conditioned probe model. With the training-time init
  // range (0.1) many coordinate gradients sit around 1e-10, below what
  // central differences at eps=1e-5 can resolve in doubles; unit weights
  // keep every gradient far above the noise floor.
  ModelConfig mc;
  mc.vocab_size = vocab.size();
  mc.emb_dim = 8;
  mc.hidden = 10;
  mc.init_range = 1.0;
  mc.leaky_slope = cfg.leaky_slope;
  mc.child_context = cfg.child_context;
  Model model(mc, 501);
  auto params = model.parameters();
  auto loss_fn = [&](bool compute_grad) {
    Graph g;
    std::vector<const Document*> batch{&docs[0], &docs[1]};
    Graph::Var loss = model.batch_loss(g, batch);
    if (compute_grad) {
      g.backward(loss);
      if (corrupt_backward) {
        for (double& v : model.w_c.grad.data()) v *= 1.5;
      }
    }
    return g.value(loss)[0];
  };
  GradCheckReport report = finite_difference_check(loss_fn, params, 1e-5);
  std::cout << std::scientific << std::setprecision(3);
  for (const auto& [name, err] : report.per_param) {
    std::cout << name << " " << err << "\n";
  }
  std::cout << "max_relative_error " << report.max_rel_error << "\n";
  if (report.max_rel_error > 1e-4) {
    std::cerr << "gradient check FAILED (tolerance 1e-4)\n";
    return kExitNumericCheck;
  }
  std::cout << "gradient check passed (tolerance 1e-4)\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hdsf: discourse-structure fake news classifier"};
  app.require_subcommand(1);

  CommonArgs train_args, eval_args, parse_args, analyze_args, grad_args;
  bool corrupt_backward = false;

  CLI::App* train_cmd =
      app.add_subcommand("train", "train a model and write a checkpoint");
  add_common(train_cmd, train_args);
  CLI::App* eval_cmd =
      app.add_subcommand("evaluate", "accuracy of a checkpoint on a corpus");
  add_common(eval_cmd, eval_args);
  CLI::App* parse_cmd =
      app.add_subcommand("parse", "emit one dependency tree per document");
  add_common(parse_cmd, parse_args);
  CLI::App* analyze_cmd = app.add_subcommand(
      "analyze", "per-class structural property report");
  add_common(analyze_cmd, analyze_args);
  CLI::App* grad_cmd = app.add_subcommand(
      "gradcheck", "compare backprop against finite differences");
  add_common(grad_cmd, grad_args);
  grad_cmd
      ->add_flag("--corrupt-backward", corrupt_backward,
                 "test hook: corrupt one gradient to force failure")
      ->group("");  // hidden

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (train_cmd->parsed()) return cmd_train(train_args);
    if (eval_cmd->parsed()) return cmd_evaluate(eval_args);
    if (parse_cmd->parsed()) return cmd_parse(parse_args);
    if (analyze_cmd->parsed()) return cmd_analyze(analyze_args);
    if (grad_cmd->parsed()) return cmd_gradcheck(grad_args, corrupt_backward);
  } catch (const ContractViolation& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const NumericError& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return kExitNumericCheck;
  }
  return kExitUsage;
}
