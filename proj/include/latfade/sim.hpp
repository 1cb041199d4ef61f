#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "latfade/channels.hpp"
#include "latfade/codebook.hpp"

namespace latfade {

struct ExperimentConfig {
  FiniteCode code;
  ChannelModel model;
  std::size_t trials = 1000;
  std::uint64_t seed = 1;
  double epsilon = 0.5;
  /// Certified rh of code.base for group_of(model). When set, every trial
  /// checks d_H^2 >= alpha^2 det(HH^dagger)^{1/k} rh - 1e-6.
  std::optional<double> rh;
  bool zero_noise = false;
  bool keep_trials = false;
};

struct TrialResult {
  std::size_t transmitted = 0;
  std::size_t decoded = 0;
  bool error = false;
  double dh_sq = 0.0;     // min over other codewords of ||H[x - x']||^2
  double det_term = 0.0;  // det(H H^dagger)^{1/k}
  double noise_sq = 0.0;  // ||w||^2
  double log_det_sq = 0.0;
  bool violation = false;
};

struct Aggregate {
  std::size_t trials = 0;
  std::size_t errors = 0;
  double error_rate = 0.0;
  double ci_lo = 0.0;  // Wilson 95%
  double ci_hi = 0.0;
  double mu_hat = 0.0;
  double min_dh_sq = 0.0;
  std::size_t bound_violations = 0;
  /// Trials with ||w||^2 >= d_H^2 / 4; every ML error is one of them.
  std::size_t distance_events = 0;
  /// Trials with ||w||^2 / k >= 1 + eps, and with d_H^2 / (4k) < 1 + eps.
  std::size_t noise_exceed = 0;
  std::size_t distance_short = 0;
  std::vector<TrialResult> per_trial;
};

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

/// Wilson score interval at 95%.
Interval wilson_interval(std::size_t successes, std::size_t trials);

/// Index of the codeword minimizing ||y - H[x]||, lowest index on ties.
/// Throws EmptyCode.
std::size_t ml_decode(const CVector& y, const ChannelDraw& draw, const FiniteCode& code);

/// Monte Carlo transmission: uniform codeword, channel draw, noise, ML
/// decoding. Trial t is seeded with derive_seed(cfg.seed, t), so the result is
/// identical for any thread count.
Aggregate run_experiment(const ExperimentConfig& cfg);

/// AWGN rate threshold log2 P - log2(2 / (pi e c)).
double awgn_threshold_bits(double power, double c);

/// log2 P + mu - log2(2 / (pi e c)).
double fading_threshold_bits(double power, double mu, double c);

/// Constant gap log2(2G / (pi e)) of codes with rh = 2k/G.
double constant_gap_bits(double g);

struct GapOptions {
  bool allow_upper_bound = false;
  std::size_t capacity_samples = 1'000'000;
  std::uint64_t seed = 0xca9ac17ULL;
};

struct GapReport {
  double rate_bits = 0.0;
  double threshold_bits = 0.0;
  double capacity_bits = 0.0;
  double capacity_stderr = 0.0;
  double gap_bits = 0.0;  // capacity - threshold
  double mu = 0.0;
  bool upper_bound_only = false;
};

/// Ergodic capacity (1/k) E log2 det(I + P H H^dagger) by Monte Carlo.
std::pair<double, double> ergodic_capacity(const ChannelModel& model, double power,
                                           std::size_t samples, std::uint64_t seed);

/// Achieved rate versus the achievability threshold for c = rh/(2k), and the
/// gap to capacity. Throws UncertifiedInvariant when c is not certified unless
/// options.allow_upper_bound is set (the report is then flagged).
GapReport gap_report(const FiniteCode& code, const ChannelModel& model, double mu_hat, double c,
                     bool c_certified, const GapOptions& options = {});

namespace reference {

Aggregate run_experiment(const ExperimentConfig& cfg);

}  // namespace reference

}  // namespace latfade
