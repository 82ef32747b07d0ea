#pragma once

#include <cstdint>

#include "hdsf/corpus.hpp"

namespace hdsf {

// Generator for a linearly separable toy corpus: each class draws from its
// own keyword list plus a shared filler list, so any content-sensitive
// classifier can tell them apart. Used by the acceptance tests; real
// corpora arrive through the JSON-lines loader instead.
struct SyntheticConfig {
  std::size_t docs_per_class = 100;
  std::size_t min_sentences = 3;
  std::size_t max_sentences = 6;
  std::size_t min_tokens = 4;
  std::size_t max_tokens = 8;
  std::uint64_t seed = 7;
};

std::vector<RawDocument> make_synthetic_corpus(const SyntheticConfig& cfg);

}  // namespace hdsf
