#include "hdsf/properties.hpp"

#include <cmath>
#include <cstdlib>

namespace hdsf {

namespace {
double norm(std::size_t k) { return std::log10(static_cast<double>(k)); }
}  // namespace

std::optional<double> leaf_property(const DependencyTree& tree) {
  std::size_t k = tree.k();
  if (k < 2) return std::nullopt;
  std::size_t leaves = 0;
  for (const auto& kids : tree.children) {
    if (kids.empty()) ++leaves;
  }
  return static_cast<double>(leaves) / norm(k);
}

std::optional<double> preorder_property(const DependencyTree& tree) {
  std::size_t k = tree.k();
  if (k < 2) return std::nullopt;
  std::vector<int> order = preorder(tree);
  long displacement = 0;
  for (std::size_t pos = 0; pos < order.size(); ++pos) {
    // sentence order[pos] sits at 1-based preorder position pos+1
    displacement += std::labs(static_cast<long>(pos + 1) -
                              static_cast<long>(order[pos] + 1));
  }
  return static_cast<double>(displacement) / norm(k);
}

std::optional<double> distance_property(const DependencyTree& tree) {
  std::size_t k = tree.k();
  if (k < 2) return std::nullopt;
  long total = 0;
  for (std::size_t j = 0; j < k; ++j) {
    int p = tree.parent[j];
    if (p < 0) continue;
    total += std::labs(static_cast<long>(j) - static_cast<long>(p));
  }
  return static_cast<double>(total) / norm(k);
}

std::optional<StructuralProperties> compute_properties(
    const DependencyTree& tree) {
  auto pl = leaf_property(tree);
  if (!pl) return std::nullopt;
  StructuralProperties props;
  props.p_leaf = *pl;
  props.p_preorder = *preorder_property(tree);
  props.p_distance = *distance_property(tree);
  props.k = tree.k();
  return props;
}

std::vector<ClassPropertyMeans> aggregate(
    const std::vector<std::pair<DependencyTree, Label>>& corpus) {
  std::vector<ClassPropertyMeans> out;
  for (Label cls : {Label::fake, Label::real}) {
    ClassPropertyMeans m;
    m.label = cls;
    double sl = 0.0, st = 0.0, sc = 0.0;
    for (const auto& [tree, label] : corpus) {
      if (label != cls) continue;
      auto props = compute_properties(tree);
      if (!props) {
        m.n_skipped += 1;
        continue;
      }
      m.n_docs += 1;
      sl += props->p_leaf;
      st += props->p_preorder;
      sc += props->p_distance;
    }
    if (m.n_docs == 0) {
      throw ContractViolation(
          std::string("class '") + label_name(cls) +
          "' has no document with defined properties (all k < 2?)");
    }
    m.mean_p_leaf = sl / static_cast<double>(m.n_docs);
    m.mean_p_preorder = st / static_cast<double>(m.n_docs);
    m.mean_p_distance = sc / static_cast<double>(m.n_docs);
    out.push_back(m);
  }
  return out;
}

}  // namespace hdsf
