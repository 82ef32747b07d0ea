#pragma once

#include <cstdint>
#include <vector>

#include "hdsf/model.hpp"
#include "hdsf/param.hpp"

namespace hdsf {

struct TrainConfig {
  std::size_t steps = 200;
  std::size_t batch_size = 40;
  double lr0 = 0.01;
  double decay = 0.9;
  std::size_t decay_every = 50;
  std::size_t dev_every = 10;
  std::uint64_t seed = 1;
  AdamConfig adam;

  void validate() const;
};

struct HistoryRow {
  std::size_t step = 0;
  double loss = 0.0;
  bool has_dev = false;
  double dev_accuracy = 0.0;
};

// Raised when the loss goes non-finite; carries diagnostics for the CLI.
struct TrainingDivergence : std::runtime_error {
  std::size_t step;
  explicit TrainingDivergence(std::size_t step_, const std::string& msg)
      : std::runtime_error(msg), step(step_) {}
};

// The training schedule: mini-batches sampled with replacement, ADAM
// updates, learning rate multiplied by `decay` after every `decay_every`
// steps, dev accuracy recorded every `dev_every` steps and at the end.
std::vector<HistoryRow> train(Model& model, const std::vector<Document>& train_docs,
                              const std::vector<Document>& dev_docs,
                              const TrainConfig& cfg);

// Fraction of argmax-correct predictions.
double evaluate(Model& model, const std::vector<Document>& docs);

}  // namespace hdsf
