#include "hdsf/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>

#include "json.hpp"

namespace hdsf {

namespace {

const char* kDefaultStopwords[] = {
    "a",       "about",   "above",  "after",   "again",   "against", "all",
    "am",      "an",      "and",    "any",     "are",     "as",      "at",
    "be",      "because", "been",   "before",  "being",   "below",   "between",
    "both",    "but",     "by",     "can",     "cannot",  "could",   "did",
    "do",      "does",    "doing",  "down",    "during",  "each",    "few",
    "for",     "from",    "further","had",     "has",     "have",    "having",
    "he",      "her",     "here",   "hers",    "herself", "him",     "himself",
    "his",     "how",     "i",      "if",      "in",      "into",    "is",
    "it",      "its",     "itself", "just",    "me",      "more",    "most",
    "my",      "myself",  "no",     "nor",     "not",     "now",     "of",
    "off",     "on",      "once",   "only",    "or",      "other",   "ought",
    "our",     "ours",    "ourselves", "out",  "over",    "own",     "same",
    "she",     "should",  "so",     "some",    "such",    "than",    "that",
    "the",     "their",   "theirs", "them",    "themselves", "then", "there",
    "these",   "they",    "this",   "those",   "through", "to",      "too",
    "under",   "until",   "up",     "very",    "was",     "we",      "were",
    "what",    "when",    "where",  "which",   "while",   "who",     "whom",
    "why",     "will",    "with",   "would",   "you",     "your",    "yours",
    "yourself","yourselves", "also", "been",   "may",     "might",   "must",
    "shall",   "upon",    "yet",    "however", "therefore", "thus",  "hence",
};

const char* kDefaultAbbreviations[] = {
    "mr.",  "mrs.", "ms.",  "dr.",  "prof.", "st.",  "jr.",   "sr.",
    "u.s.", "u.k.", "u.n.", "e.g.", "i.e.",  "etc.", "vs.",   "inc.",
    "ltd.", "co.",  "corp.","no.",  "gen.",  "sen.", "rep.",  "gov.",
    "capt.","col.", "lt.",  "sgt.", "rev.",  "jan.", "feb.",  "mar.",
    "apr.", "jun.", "jul.", "aug.", "sept.", "oct.", "nov.",  "dec.",
};

bool is_terminal(char c) { return c == '.' || c == '!' || c == '?'; }

bool is_basic_letter(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::string lower(std::string s) {
  for (char& c : s) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return s;
}

std::unordered_set<std::string> load_list(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ContractViolation("cannot open list file: " + path);
  std::unordered_set<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    line = trim(line);
    if (!line.empty()) out.insert(lower(line));
  }
  return out;
}

}  // namespace

const char* label_name(Label l) { return l == Label::fake ? "fake" : "real"; }

Label parse_label(const std::string& s) {
  if (s == "fake") return Label::fake;
  if (s == "real") return Label::real;
  throw ContractViolation("unknown label: '" + s + "' (expected fake|real)");
}

Vocabulary::Vocabulary() {
  id_to_token_ = {"<pad>", "<unk>"};
  token_to_id_ = {{"<pad>", kPad}, {"<unk>", kUnk}};
}

int Vocabulary::add(const std::string& token) {
  auto it = token_to_id_.find(token);
  if (it != token_to_id_.end()) return it->second;
  int id = static_cast<int>(id_to_token_.size());
  token_to_id_.emplace(token, id);
  id_to_token_.push_back(token);
  return id;
}

int Vocabulary::id(const std::string& token) const {
  auto it = token_to_id_.find(token);
  return it == token_to_id_.end() ? kUnk : it->second;
}

const std::string& Vocabulary::token(int id) const {
  if (id < 0 || static_cast<std::size_t>(id) >= id_to_token_.size()) {
    throw ContractViolation("token id out of range");
  }
  return id_to_token_[static_cast<std::size_t>(id)];
}

Preprocessor Preprocessor::with_defaults() {
  Preprocessor p;
  for (const char* w : kDefaultStopwords) p.stopwords.insert(w);
  for (const char* a : kDefaultAbbreviations) p.abbreviations.insert(a);
  return p;
}

void Preprocessor::load_stopwords(const std::string& path) {
  stopwords = load_list(path);
}

void Preprocessor::load_abbreviations(const std::string& path) {
  abbreviations = load_list(path);
}

std::string preprocess(const std::string& text, const Preprocessor& prep) {
  std::vector<std::string> out;
  std::istringstream iss(text);
  std::string chunk;
  while (iss >> chunk) {
    // Peel sentence punctuation off both ends; it survives as its own token.
    std::string lead, tail;
    std::size_t b = 0, e = chunk.size();
    while (b < e && !is_basic_letter(chunk[b]) &&
           !(static_cast<unsigned char>(chunk[b]) >= 0x80) &&
           !std::isdigit(static_cast<unsigned char>(chunk[b]))) {
      if (is_terminal(chunk[b])) lead.push_back(chunk[b]);
      ++b;
    }
    while (e > b && !is_basic_letter(chunk[e - 1]) &&
           !(static_cast<unsigned char>(chunk[e - 1]) >= 0x80) &&
           !std::isdigit(static_cast<unsigned char>(chunk[e - 1]))) {
      if (is_terminal(chunk[e - 1])) tail.insert(tail.begin(), chunk[e - 1]);
      --e;
    }
    for (char c : lead) out.emplace_back(1, c);
    std::string core = chunk.substr(b, e - b);
    bool clean = !core.empty();
    for (char c : core) {
      if (!is_basic_letter(c)) {
        clean = false;  // digits, non-English bytes, embedded punctuation
        break;
      }
    }
    if (clean) {
      core = lower(core);
      if (!prep.stopwords.count(core)) out.push_back(core);
    }
    for (char c : tail) out.emplace_back(1, c);
  }
  std::string joined;
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (i) joined.push_back(' ');
    joined += out[i];
  }
  return joined;
}

std::vector<std::string> segment_sentences(const std::string& text,
                                           const Preprocessor& prep) {
  std::vector<std::string> sentences;
  std::size_t start = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (!is_terminal(c)) continue;
    bool at_boundary = (i + 1 == text.size()) ||
                       std::isspace(static_cast<unsigned char>(text[i + 1]));
    if (!at_boundary) continue;
    if (c == '.') {
      // The word ending at this dot, back to the previous whitespace.
      std::size_t wb = i;
      while (wb > start &&
             !std::isspace(static_cast<unsigned char>(text[wb - 1]))) {
        --wb;
      }
      std::string word = lower(text.substr(wb, i - wb + 1));
      if (prep.abbreviations.count(word)) continue;
    }
    std::string seg = trim(text.substr(start, i - start + 1));
    if (!seg.empty()) sentences.push_back(seg);
    start = i + 1;
  }
  std::string rest = trim(text.substr(start));
  if (!rest.empty()) sentences.push_back(rest);
  return sentences;
}

std::vector<std::vector<std::string>> tokenize_document(
    const std::string& text, const Preprocessor& prep,
    std::size_t max_sentences) {
  std::vector<std::vector<std::string>> out;
  for (const std::string& seg : segment_sentences(text, prep)) {
    std::string cleaned = preprocess(seg, prep);
    std::vector<std::string> tokens;
    std::istringstream iss(cleaned);
    std::string tok;
    while (iss >> tok) tokens.push_back(tok);
    if (tokens.empty()) continue;
    out.push_back(std::move(tokens));
    if (max_sentences > 0 && out.size() == max_sentences) break;
  }
  return out;
}

std::vector<Document> encode_documents(const std::vector<RawDocument>& raws,
                                       const Preprocessor& prep,
                                       std::size_t max_sentences,
                                       Vocabulary& vocab, bool grow_vocab,
                                       CorpusStats* stats) {
  std::vector<Document> docs;
  docs.reserve(raws.size());
  for (const RawDocument& raw : raws) {
    auto sents = tokenize_document(raw.text, prep, max_sentences);
    if (sents.empty()) {
      if (stats) stats->skipped_empty += 1;
      std::cerr << "skip " << raw.id << ": no sentences after preprocessing\n";
      continue;
    }
    Document d;
    d.id = raw.id;
    d.label = raw.label;
    for (auto& sent : sents) {
      std::vector<int> ids;
      ids.reserve(sent.size());
      for (auto& tok : sent) {
        ids.push_back(grow_vocab ? vocab.add(tok) : vocab.id(tok));
      }
      d.sentences.push_back(std::move(ids));
    }
    docs.push_back(std::move(d));
  }
  return docs;
}

std::vector<RawDocument> load_jsonl(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ContractViolation("cannot open corpus file: " + path);
  std::vector<RawDocument> docs;
  std::unordered_set<std::string> seen;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw ContractViolation("line " + std::to_string(lineno) +
                              ": malformed JSON: " + e.what());
    }
    if (!j.contains("id") || !j.contains("text") || !j.contains("label")) {
      throw ContractViolation("line " + std::to_string(lineno) +
                              ": missing id/text/label field");
    }
    RawDocument d;
    try {
      d.id = j.at("id").get<std::string>();
      d.text = j.at("text").get<std::string>();
      d.label = parse_label(j.at("label").get<std::string>());
    } catch (const nlohmann::json::exception& e) {
      throw ContractViolation("line " + std::to_string(lineno) +
                              ": bad field type: " + e.what());
    } catch (const ContractViolation& e) {
      throw ContractViolation("line " + std::to_string(lineno) + ": " +
                              e.what());
    }
    if (d.text.empty()) {
      throw ContractViolation("line " + std::to_string(lineno) +
                              ": empty text");
    }
    if (!seen.insert(d.id).second) {
      throw ContractViolation("line " + std::to_string(lineno) +
                              ": duplicate id '" + d.id + "'");
    }
    docs.push_back(std::move(d));
  }
  if (docs.empty()) std::cerr << "warning: empty corpus " << path << "\n";
  return docs;
}

CorpusSplit split_corpus(const std::vector<RawDocument>& docs,
                         std::size_t dev_per_class,
                         std::size_t test_per_class, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  enum Dest { kTrain, kDev, kTest };
  std::vector<Dest> dest(docs.size(), kTrain);
  for (Label cls : {Label::fake, Label::real}) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < docs.size(); ++i) {
      if (docs[i].label == cls) idx.push_back(i);
    }
    if (idx.size() < dev_per_class + test_per_class) {
      throw ContractViolation(std::string("class '") + label_name(cls) +
                              "' has too few documents for the requested "
                              "dev/test sizes");
    }
    std::shuffle(idx.begin(), idx.end(), rng);
    for (std::size_t i = 0; i < dev_per_class; ++i) dest[idx[i]] = kDev;
    for (std::size_t i = 0; i < test_per_class; ++i) {
      dest[idx[dev_per_class + i]] = kTest;
    }
  }
  CorpusSplit split;
  for (std::size_t i = 0; i < docs.size(); ++i) {
    switch (dest[i]) {
      case kTrain: split.train.push_back(docs[i]); break;
      case kDev: split.dev.push_back(docs[i]); break;
      case kTest: split.test.push_back(docs[i]); break;
    }
  }
  return split;
}

std::size_t load_embeddings(const std::string& path, const Vocabulary& vocab,
                            Tensor& table) {
  std::ifstream in(path);
  if (!in) throw ContractViolation("cannot open embedding file: " + path);
  std::size_t dim = table.cols();
  std::size_t loaded = 0;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    std::istringstream iss(line);
    std::string word;
    iss >> word;
    std::vector<double> vals;
    double v;
    while (iss >> v) vals.push_back(v);
    if (vals.size() != dim) {
      throw ContractViolation("embedding line " + std::to_string(lineno) +
                              ": dimension " + std::to_string(vals.size()) +
                              " != " + std::to_string(dim));
    }
    int id = vocab.id(word);
    if (id != Vocabulary::kUnk || word == vocab.token(Vocabulary::kUnk)) {
      for (std::size_t j = 0; j < dim; ++j) {
        table.at(static_cast<std::size_t>(id), j) = vals[j];
      }
      ++loaded;
    }
  }
  return loaded;
}

}  // namespace hdsf
