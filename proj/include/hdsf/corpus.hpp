#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "hdsf/tensor.hpp"

namespace hdsf {

enum class Label { fake = 0, real = 1 };

const char* label_name(Label l);
Label parse_label(const std::string& s);  // throws ContractViolation

struct RawDocument {
  std::string id;
  std::string text;
  Label label = Label::fake;
};

// A tokenized document: ordered sentences of token ids.
struct Document {
  std::string id;
  std::vector<std::vector<int>> sentences;
  Label label = Label::fake;

  std::size_t k() const { return sentences.size(); }
};

class Vocabulary {
 public:
  static constexpr int kPad = 0;
  static constexpr int kUnk = 1;

  Vocabulary();

  int add(const std::string& token);       // insert if missing, return id
  int id(const std::string& token) const;  // kUnk if missing
  const std::string& token(int id) const;
  std::size_t size() const { return id_to_token_.size(); }

  const std::vector<std::string>& tokens() const { return id_to_token_; }

 private:
  std::unordered_map<std::string, int> token_to_id_;
  std::vector<std::string> id_to_token_;
};

// Stop-word and abbreviation lists driving preprocess/segment. Defaults are
// compiled in; either set can be replaced from a one-entry-per-line file.
struct Preprocessor {
  std::unordered_set<std::string> stopwords;
  std::unordered_set<std::string> abbreviations;  // lowercased, with dot

  static Preprocessor with_defaults();
  void load_stopwords(const std::string& path);
  void load_abbreviations(const std::string& path);
};

// Lowercases, drops digit tokens and tokens with non-Latin characters,
// drops stop-words, keeps sentence punctuation as its own token. Returns
// the surviving tokens joined by single spaces.
std::string preprocess(const std::string& text, const Preprocessor& prep);

// Splits raw text on '.', '!', '?'; the abbreviation list suppresses splits.
// Runs before preprocess so the punctuation is still present.
std::vector<std::string> segment_sentences(const std::string& text,
                                           const Preprocessor& prep);

// Full text -> sentences of token strings; empty sentences dropped,
// sentence count truncated to max_sentences (0 = unlimited).
std::vector<std::vector<std::string>> tokenize_document(
    const std::string& text, const Preprocessor& prep,
    std::size_t max_sentences);

struct CorpusStats {
  std::size_t skipped_empty = 0;  // documents with no usable sentence
};

// Encode raw documents against a vocabulary. When grow_vocab is true new
// tokens are added (training split); otherwise unknowns map to UNK.
std::vector<Document> encode_documents(const std::vector<RawDocument>& raws,
                                       const Preprocessor& prep,
                                       std::size_t max_sentences,
                                       Vocabulary& vocab, bool grow_vocab,
                                       CorpusStats* stats = nullptr);

// JSON-lines ingestion: one object per line with fields id, text, label.
std::vector<RawDocument> load_jsonl(const std::string& path);

struct CorpusSplit {
  std::vector<RawDocument> train;
  std::vector<RawDocument> dev;
  std::vector<RawDocument> test;
};

// Class-balanced dev/test selection, deterministic under seed; the
// remaining documents form the training split in input order.
CorpusSplit split_corpus(const std::vector<RawDocument>& docs,
                         std::size_t dev_per_class,
                         std::size_t test_per_class, std::uint64_t seed);

// Text-format embedding file: "word v1 v2 ... vD" per line. In-vocabulary
// rows of `table` are overwritten; others keep their initialization.
// Returns the number of rows replaced.
std::size_t load_embeddings(const std::string& path, const Vocabulary& vocab,
                            Tensor& table);

}  // namespace hdsf
