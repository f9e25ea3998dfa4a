#pragma once

#include <cstdint>
#include <vector>

#include "seqpinn/network.hpp"

namespace seqpinn {

/// Gaussian posterior over network parameters fitted from SGD iterates:
/// mean, exact per-parameter variance, and low-rank deviation columns for the
/// off-diagonal structure (the full covariance is never materialized).
struct PosteriorStats {
  Architecture arch;
  Vec mean;            // averaged samples
  Vec diag_var;        // (1/(k-1)) * sum_i (theta_i - mean)^2, elementwise
  Mat deviation_cols;  // column i-1 = theta_i - running_mean_i, i = 2..k
  int k = 0;           // sample count

  void validate() const;
  bool fitted() const { return k >= 1 && mean.size() > 0; }
};

/// Fit mean/variance/deviations from parameter samples (all sharing one
/// architecture). k = 1 yields zero variance and no deviation columns.
PosteriorStats swag_fit(const std::vector<NetworkParams>& samples);

/// Draw from the approximate posterior:
///   theta = mean + diag_var^(1/2) .* z1 / sqrt(2) + D * z2 / sqrt(2(k-1))
/// Deterministic per seed.
NetworkParams swag_sample(const PosteriorStats& stats, std::uint64_t seed);

/// Per-point standard deviation of the velocity magnitude sqrt(u^2 + v^2)
/// over n_samples posterior draws.
Vec uncertainty_map(const PosteriorStats& stats, const PointBatch& points, int n_samples = 30,
                    std::uint64_t seed = 0);

/// Same sampling, but per-component (u, v) standard deviations as columns.
Mat uncertainty_map_components(const PosteriorStats& stats, const PointBatch& points,
                               int n_samples = 30, std::uint64_t seed = 0);

/// Mean value of a std map.
double uncertainty_index(const Vec& std_map);

}  // namespace seqpinn
