#include "hdsf/trainer.hpp"

#include <cmath>
#include <random>
#include <sstream>

namespace hdsf {

void TrainConfig::validate() const {
  if (steps == 0 || batch_size == 0 || decay_every == 0 || dev_every == 0) {
    throw ContractViolation("train config: counts must be positive");
  }
  if (!(lr0 > 0.0)) throw ContractViolation("train config: lr0 must be > 0");
  if (!(decay > 0.0 && decay <= 1.0)) {
    throw ContractViolation("train config: decay must be in (0,1]");
  }
}

std::vector<HistoryRow> train(Model& model,
                              const std::vector<Document>& train_docs,
                              const std::vector<Document>& dev_docs,
                              const TrainConfig& cfg) {
  cfg.validate();
  if (train_docs.empty()) {
    throw ContractViolation("train: empty training split");
  }
  std::mt19937_64 rng(cfg.seed);
  std::uniform_int_distribution<std::size_t> pick(0, train_docs.size() - 1);
  auto params = model.parameters();
  double lr = cfg.lr0;
  std::vector<HistoryRow> history;
  history.reserve(cfg.steps);
  for (std::size_t step = 1; step <= cfg.steps; ++step) {
    std::vector<const Document*> batch;
    batch.reserve(cfg.batch_size);
    for (std::size_t i = 0; i < cfg.batch_size; ++i) {
      batch.push_back(&train_docs[pick(rng)]);
    }
    Graph g;
    Graph::Var loss = model.batch_loss(g, batch);
    double loss_val = g.value(loss)[0];
    if (!std::isfinite(loss_val)) {
      std::ostringstream msg;
      msg << "non-finite loss at step " << step << "; parameter norms:";
      for (Parameter* p : params) {
        double sq = 0.0;
        for (double v : p->value.data()) sq += v * v;
        msg << ' ' << p->name << '=' << std::sqrt(sq);
      }
      throw TrainingDivergence(step, msg.str());
    }
    for (Parameter* p : params) p->zero_grad();
    g.backward(loss);
    for (Parameter* p : params) adam_step(*p, lr, cfg.adam);
    HistoryRow row;
    row.step = step;
    row.loss = loss_val;
    if (!dev_docs.empty() &&
        (step % cfg.dev_every == 0 || step == cfg.steps)) {
      row.has_dev = true;
      row.dev_accuracy = evaluate(model, dev_docs);
    }
    history.push_back(row);
    if (step % cfg.decay_every == 0) lr *= cfg.decay;
  }
  return history;
}

double evaluate(Model& model, const std::vector<Document>& docs) {
  if (docs.empty()) throw ContractViolation("evaluate: empty split");
  std::size_t correct = 0;
  for (const Document& d : docs) {
    Tensor probs = model.predict(d);
    std::size_t pred = probs[0] >= probs[1] ? 0 : 1;
    if (pred == Model::target_index(d.label)) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(docs.size());
}

}  // namespace hdsf
