#include "hdsf/config.hpp"

#include <fstream>
#include <sstream>

namespace hdsf {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::size_t to_count(const std::string& key, const std::string& v) {
  try {
    return static_cast<std::size_t>(std::stoull(v));
  } catch (...) {
    throw ContractViolation("config " + key + ": not a count: '" + v + "'");
  }
}

double to_real(const std::string& key, const std::string& v) {
  try {
    return std::stod(v);
  } catch (...) {
    throw ContractViolation("config " + key + ": not a number: '" + v + "'");
  }
}

}  // namespace

void AppConfig::set(const std::string& key, const std::string& value) {
  if (key == "corpus") corpus = value;
  else if (key == "stopwords") stopwords = value;
  else if (key == "abbreviations") abbreviations = value;
  else if (key == "embeddings") embeddings = value;
  else if (key == "checkpoint") checkpoint = value;
  else if (key == "out") out = value;
  else if (key == "trees") trees = value;
  else if (key == "emb_dim") emb_dim = to_count(key, value);
  else if (key == "hidden") hidden = to_count(key, value);
  else if (key == "max_sentences") max_sentences = to_count(key, value);
  else if (key == "leaky_slope") leaky_slope = to_real(key, value);
  else if (key == "init_range") init_range = to_real(key, value);
  else if (key == "child_context") child_context = parse_child_context(value);
  else if (key == "dev_per_class") dev_per_class = to_count(key, value);
  else if (key == "test_per_class") test_per_class = to_count(key, value);
  else if (key == "steps") steps = to_count(key, value);
  else if (key == "batch_size") batch_size = to_count(key, value);
  else if (key == "lr0") lr0 = to_real(key, value);
  else if (key == "decay") decay = to_real(key, value);
  else if (key == "decay_every") decay_every = to_count(key, value);
  else if (key == "dev_every") dev_every = to_count(key, value);
  else if (key == "seed") seed = to_count(key, value);
  else if (key == "adam_beta1") adam_beta1 = to_real(key, value);
  else if (key == "adam_beta2") adam_beta2 = to_real(key, value);
  else if (key == "adam_eps") adam_eps = to_real(key, value);
  else throw ContractViolation("unknown config key: '" + key + "'");
}

void AppConfig::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ContractViolation("cannot open config file: " + path);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#' || t[0] == '[') continue;  // section headers
    std::size_t eq = t.find('=');
    if (eq == std::string::npos) {
      throw ContractViolation("config line " + std::to_string(lineno) +
                              ": expected key = value");
    }
    set(trim(t.substr(0, eq)), trim(t.substr(eq + 1)));
  }
}

std::string AppConfig::serialize() const {
  std::ostringstream s;
  s << "corpus = " << corpus << '\n'
    << "stopwords = " << stopwords << '\n'
    << "abbreviations = " << abbreviations << '\n'
    << "embeddings = " << embeddings << '\n'
    << "checkpoint = " << checkpoint << '\n'
    << "out = " << out << '\n'
    << "trees = " << trees << '\n'
    << "emb_dim = " << emb_dim << '\n'
    << "hidden = " << hidden << '\n'
    << "max_sentences = " << max_sentences << '\n'
    << "leaky_slope = " << leaky_slope << '\n'
    << "init_range = " << init_range << '\n'
    << "child_context = " << child_context_name(child_context) << '\n'
    << "dev_per_class = " << dev_per_class << '\n'
    << "test_per_class = " << test_per_class << '\n'
    << "steps = " << steps << '\n'
    << "batch_size = " << batch_size << '\n'
    << "lr0 = " << lr0 << '\n'
    << "decay = " << decay << '\n'
    << "decay_every = " << decay_every << '\n'
    << "dev_every = " << dev_every << '\n'
    << "seed = " << seed << '\n'
    << "adam_beta1 = " << adam_beta1 << '\n'
    << "adam_beta2 = " << adam_beta2 << '\n'
    << "adam_eps = " << adam_eps << '\n';
  return s.str();
}

std::string AppConfig::hash() const {
  std::uint64_t h = 1469598103934665603ull;  // FNV-1a
  for (unsigned char c : serialize()) {
    h ^= c;
    h *= 1099511628211ull;
  }
  std::ostringstream s;
  s << std::hex;
  for (int i = 15; i >= 0; --i) s << ((h >> (4 * i)) & 0xf);
  return s.str();
}

TrainConfig AppConfig::train_config() const {
  TrainConfig tc;
  tc.steps = steps;
  tc.batch_size = batch_size;
  tc.lr0 = lr0;
  tc.decay = decay;
  tc.decay_every = decay_every;
  tc.dev_every = dev_every;
  tc.seed = seed;
  tc.adam.beta1 = adam_beta1;
  tc.adam.beta2 = adam_beta2;
  tc.adam.eps = adam_eps;
  return tc;
}

}  // namespace hdsf
