#pragma once

#include <optional>
#include <vector>

#include "hdsf/corpus.hpp"
#include "hdsf/structure.hpp"

namespace hdsf {

// The three tree coherence measures, each normalized by log10(k).
// Undefined for k < 2, where the normalizer vanishes.
struct StructuralProperties {
  double p_leaf = 0.0;      // leaf count / log10(k)
  double p_preorder = 0.0;  // preorder-vs-sequential displacement / log10(k)
  double p_distance = 0.0;  // sum of |child - parent| positions / log10(k)
  std::size_t k = 0;
};

std::optional<double> leaf_property(const DependencyTree& tree);
std::optional<double> preorder_property(const DependencyTree& tree);
std::optional<double> distance_property(const DependencyTree& tree);

std::optional<StructuralProperties> compute_properties(
    const DependencyTree& tree);

struct ClassPropertyMeans {
  Label label = Label::fake;
  std::size_t n_docs = 0;     // documents contributing to the means
  std::size_t n_skipped = 0;  // k < 2 documents excluded
  double mean_p_leaf = 0.0;
  double mean_p_preorder = 0.0;
  double mean_p_distance = 0.0;
};

// Per-class means over (tree, label) pairs, skipping k < 2 documents.
// A class with no defined-property document is an error.
std::vector<ClassPropertyMeans> aggregate(
    const std::vector<std::pair<DependencyTree, Label>>& corpus);

}  // namespace hdsf
