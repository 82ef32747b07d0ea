#include "hdsf/synthetic.hpp"

#include <random>

namespace hdsf {

namespace {

const char* kFakeWords[] = {"hoax",    "shocking", "conspiracy", "miracle",
                            "secret",  "exposed",  "outrage",    "scandal",
                            "bizarre", "cure"};
const char* kRealWords[] = {"report",   "council",  "budget",  "policy",
                            "official", "meeting",  "committee", "statement",
                            "quarterly", "review"};
const char* kSharedWords[] = {"news", "today", "city",  "people",
                              "week", "group", "plan",  "local"};

}  // namespace

std::vector<RawDocument> make_synthetic_corpus(const SyntheticConfig& cfg) {
  std::mt19937_64 rng(cfg.seed);
  std::uniform_int_distribution<std::size_t> n_sents(cfg.min_sentences,
                                                     cfg.max_sentences);
  std::uniform_int_distribution<std::size_t> n_toks(cfg.min_tokens,
                                                    cfg.max_tokens);
  std::uniform_int_distribution<std::size_t> fake_w(0, std::size(kFakeWords) - 1);
  std::uniform_int_distribution<std::size_t> real_w(0, std::size(kRealWords) - 1);
  std::uniform_int_distribution<std::size_t> shared_w(0,
                                                      std::size(kSharedWords) - 1);
  std::bernoulli_distribution use_class_word(0.5);

  std::vector<RawDocument> docs;
  docs.reserve(2 * cfg.docs_per_class);
  for (Label cls : {Label::fake, Label::real}) {
    for (std::size_t i = 0; i < cfg.docs_per_class; ++i) {
      std::string text;
      std::size_t sents = n_sents(rng);
      for (std::size_t s = 0; s < sents; ++s) {
        std::size_t toks = n_toks(rng);
        for (std::size_t t = 0; t < toks; ++t) {
          if (t) text += ' ';
          if (use_class_word(rng)) {
            text += cls == Label::fake ? kFakeWords[fake_w(rng)]
                                       : kRealWords[real_w(rng)];
          } else {
            text += kSharedWords[shared_w(rng)];
          }
        }
        text += ". ";
      }
      RawDocument d;
      d.id = std::string(label_name(cls)) + "-" + std::to_string(i);
      d.text = std::move(text);
      d.label = cls;
      docs.push_back(std::move(d));
    }
  }
  return docs;
}

}  // namespace hdsf
