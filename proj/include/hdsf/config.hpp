#pragma once

#include <cstdint>
#include <string>

#include "hdsf/representation.hpp"
#include "hdsf/trainer.hpp"

namespace hdsf {

// Everything a CLI run needs: paths, model sizes, schedule, flags.
// Unknown keys in a config file are rejected.
struct AppConfig {
  // paths
  std::string corpus;
  std::string stopwords;
  std::string abbreviations;
  std::string embeddings;
  std::string checkpoint;
  std::string out = ".";
  std::string trees;  // directory of .tree files for analyze

  // model sizes
  std::size_t emb_dim = 50;
  std::size_t hidden = 100;
  std::size_t max_sentences = 60;
  double leaky_slope = 0.01;
  double init_range = 0.1;
  ChildContextMode child_context = ChildContextMode::paper;

  // splits
  std::size_t dev_per_class = 67;
  std::size_t test_per_class = 67;

  // schedule
  std::size_t steps = 200;
  std::size_t batch_size = 40;
  double lr0 = 0.01;
  double decay = 0.9;
  std::size_t decay_every = 50;
  std::size_t dev_every = 10;
  std::uint64_t seed = 1;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_eps = 1e-8;

  // Apply one "key = value" assignment; unknown keys throw.
  void set(const std::string& key, const std::string& value);

  // Layer a key=value file over the current values ('#' comments allowed).
  void load_file(const std::string& path);

  // Canonical key=value dump, one per line, fixed order.
  std::string serialize() const;

  // FNV-1a over serialize(), as 16 hex digits.
  std::string hash() const;

  TrainConfig train_config() const;
};

}  // namespace hdsf
