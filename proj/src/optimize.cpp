#include "seqpinn/optimize.hpp"

#include <algorithm>
#include <cmath>

#include "seqpinn/errors.hpp"
#include "seqpinn/rng.hpp"

namespace seqpinn {

void TrainConfig::validate() const {
  if (init_epochs < 1 || adapt_epochs < 0 || batch_size < 1 || posterior_k < 1 ||
      uncertainty_check_interval < 1 || phase1_epochs < 0)
    throw StructuralError("train config: counts must be positive");
  for (double lr : {init_lr_phase1, init_lr_phase2, adapt_lr})
    if (!(lr > 0)) throw StructuralError("train config: learning rates must be positive");
  if (workers < 1) throw StructuralError("train config: workers must be >= 1");
  if (early_stop_patience < 1) throw StructuralError("train config: patience must be >= 1");
  for (double w : {weight_residual, weight_boundary, weight_data})
    if (!(w >= 0)) throw StructuralError("train config: loss weights must be >= 0");
}

double lr_schedule(int epoch, const TrainConfig& cfg) {
  if (epoch < cfg.phase1_epochs) return cfg.init_lr_phase1;
  if (epoch < cfg.init_epochs) return cfg.init_lr_phase2;
  return cfg.adapt_lr;
}

void adam_step(AdamState& state, Vec& params, const Vec& grad, double lr,
               const AdamSettings& settings) {
  if (params.size() != grad.size() || state.m.size() != params.size() ||
      state.v.size() != params.size())
    throw StructuralError("adam_step: shape mismatch");
  state.t += 1;
  state.m = settings.beta1 * state.m + (1.0 - settings.beta1) * grad;
  state.v = (settings.beta2 * state.v.array() + (1.0 - settings.beta2) * grad.array().square())
                .matrix();
  const double bc1 = 1.0 - std::pow(settings.beta1, static_cast<double>(state.t));
  const double bc2 = 1.0 - std::pow(settings.beta2, static_cast<double>(state.t));
  params.array() -=
      lr * (state.m.array() / bc1) / ((state.v.array() / bc2).sqrt() + settings.epsilon);
}

void sgd_step(Vec& params, const Vec& grad, double lr) {
  if (params.size() != grad.size()) throw StructuralError("sgd_step: shape mismatch");
  params -= lr * grad;
}

bool early_stop(std::span<const double> loss_history, int patience, double min_delta) {
  if (loss_history.empty()) throw DegenerateInputError("early_stop: empty history");
  const auto n = static_cast<std::int64_t>(loss_history.size());
  if (n <= patience) return false;
  const auto window_begin = loss_history.begin() + (n - patience);
  const double best_in_window = *std::min_element(window_begin, loss_history.end());
  const double best_before = *std::min_element(loss_history.begin(), window_begin);
  return !(best_before - best_in_window > min_delta);
}

std::vector<std::int64_t> epoch_permutation(std::int64_t n, std::uint64_t seed, int epoch) {
  Rng rng(mix_seed(seed, static_cast<std::uint64_t>(epoch)));
  return rng.permutation(n);
}

std::vector<std::pair<std::int64_t, std::int64_t>> batch_ranges(std::int64_t n,
                                                                std::int64_t batch_size) {
  std::vector<std::pair<std::int64_t, std::int64_t>> ranges;
  if (n <= 0) return ranges;
  const std::int64_t n_batches = (n + batch_size - 1) / batch_size;
  const std::int64_t base = n / n_batches;
  const std::int64_t extra = n % n_batches;
  std::int64_t begin = 0;
  for (std::int64_t b = 0; b < n_batches; ++b) {
    const std::int64_t count = base + (b < extra ? 1 : 0);
    ranges.emplace_back(begin, count);
    begin += count;
  }
  return ranges;
}

}  // namespace seqpinn
