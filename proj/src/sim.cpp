#include "latfade/sim.hpp"

#include <cmath>
#include <limits>

#include "latfade/error.hpp"
#include "sum.hpp"

namespace latfade {
namespace {

constexpr double kDistanceTolerance = 1e-6;

double pi_e() { return std::acos(-1.0) * std::exp(1.0); }

void check_config(const ExperimentConfig& cfg) {
  if (cfg.trials == 0) throw Error(ErrorKind::InvalidTrials, "trials must be positive");
  if (cfg.code.codewords.empty()) throw Error(ErrorKind::EmptyCode, "code has no codewords");
  if (cfg.code.k() != cfg.model.k) {
    throw Error(ErrorKind::DimensionMismatch, "code k=" + std::to_string(cfg.code.k()) +
                                                  " but channel k=" + std::to_string(cfg.model.k));
  }
}

TrialResult run_trial(const ExperimentConfig& cfg, std::size_t t) {
  const auto& words = cfg.code.codewords;
  Engine rng(derive_seed(cfg.seed, t));
  std::uniform_int_distribution<std::size_t> pick(0, words.size() - 1);

  TrialResult r;
  r.transmitted = pick(rng);
  const ChannelDraw draw = sample_channel(cfg.model, rng);
  const CVector sent = apply_channel(draw, words[r.transmitted]);
  const CVector y = cfg.zero_noise ? sent : add_noise(sent, rng);
  r.noise_sq = (y - sent).squaredNorm();
  r.log_det_sq = draw.log_det_sq;
  r.det_term = draw.det_term();

  double best = std::numeric_limits<double>::infinity();
  r.dh_sq = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < words.size(); ++j) {
    const CVector image = apply_channel(draw, words[j]);
    const double d = (y - image).squaredNorm();
    if (d < best) {
      best = d;
      r.decoded = j;
    }
    if (j != r.transmitted) r.dh_sq = std::min(r.dh_sq, (sent - image).squaredNorm());
  }
  r.error = r.decoded != r.transmitted;
  if (cfg.rh && words.size() > 1) {
    const double floor = cfg.code.alpha * cfg.code.alpha * r.det_term * *cfg.rh;
    r.violation = r.dh_sq < floor - kDistanceTolerance;
  }
  return r;
}

Aggregate aggregate(const ExperimentConfig& cfg, std::vector<TrialResult> trials) {
  Aggregate a;
  a.trials = trials.size();
  const double k = cfg.model.k;
  std::vector<double> mu(trials.size());
  a.min_dh_sq = std::numeric_limits<double>::infinity();
  for (std::size_t t = 0; t < trials.size(); ++t) {
    const TrialResult& r = trials[t];
    a.errors += r.error ? 1 : 0;
    a.bound_violations += r.violation ? 1 : 0;
    a.distance_events += r.noise_sq >= r.dh_sq / 4.0 ? 1 : 0;
    a.noise_exceed += r.noise_sq / k >= 1.0 + cfg.epsilon ? 1 : 0;
    a.distance_short += r.dh_sq / (4.0 * k) < 1.0 + cfg.epsilon ? 1 : 0;
    a.min_dh_sq = std::min(a.min_dh_sq, r.dh_sq);
    mu[t] = r.log_det_sq / k;
  }
  a.error_rate = static_cast<double>(a.errors) / static_cast<double>(a.trials);
  const Interval ci = wilson_interval(a.errors, a.trials);
  a.ci_lo = ci.lo;
  a.ci_hi = ci.hi;
  a.mu_hat = detail::compensated_sum(mu) / static_cast<double>(a.trials);
  if (cfg.keep_trials) a.per_trial = std::move(trials);
  return a;
}

double capacity_sample(const ChannelDraw& draw, double power) {
  double total = 0.0;
  if (draw.kind == ChannelKind::mimo2_block) {
    for (int f = 0; f < draw.k / 4; ++f) {
      Eigen::Matrix2cd h;
      const Complex* m = &draw.coeffs[static_cast<std::size_t>(4 * f)];
      h << m[0], m[1], m[2], m[3];
      const Eigen::Matrix2cd g = Eigen::Matrix2cd::Identity() + power * h * h.adjoint();
      total += 2.0 * std::log2(std::abs(g.determinant()));
    }
  } else {
    for (const Complex& h : draw.coeffs) total += std::log2(1.0 + power * std::norm(h));
  }
  return total / draw.k;
}

}  // namespace

Interval wilson_interval(std::size_t successes, std::size_t trials) {
  if (trials == 0) return {0.0, 1.0};
  constexpr double z = 1.959963984540054;
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double denom = 1.0 + z * z / n;
  const double center = (p + z * z / (2.0 * n)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / n + z * z / (4.0 * n * n)) / denom;
  const double lo = successes == 0 ? 0.0 : std::max(0.0, center - half);
  const double hi = successes == trials ? 1.0 : std::min(1.0, center + half);
  return {lo, hi};
}

std::size_t ml_decode(const CVector& y, const ChannelDraw& draw, const FiniteCode& code) {
  if (code.codewords.empty()) throw Error(ErrorKind::EmptyCode, "code has no codewords");
  std::size_t best_index = 0;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < code.codewords.size(); ++j) {
    const double d = (y - apply_channel(draw, code.codewords[j])).squaredNorm();
    if (d < best) {
      best = d;
      best_index = j;
    }
  }
  return best_index;
}

Aggregate run_experiment(const ExperimentConfig& cfg) {
  check_config(cfg);
  std::vector<TrialResult> trials(cfg.trials);
#pragma omp parallel for schedule(dynamic, 256)
  for (std::size_t t = 0; t < cfg.trials; ++t) trials[t] = run_trial(cfg, t);
  return aggregate(cfg, std::move(trials));
}

namespace reference {

Aggregate run_experiment(const ExperimentConfig& cfg) {
  check_config(cfg);
  std::vector<TrialResult> trials;
  trials.reserve(cfg.trials);
  for (std::size_t t = 0; t < cfg.trials; ++t) trials.push_back(run_trial(cfg, t));
  return aggregate(cfg, std::move(trials));
}

}  // namespace reference

double awgn_threshold_bits(double power, double c) {
  return std::log2(power) - std::log2(2.0 / (pi_e() * c));
}

double fading_threshold_bits(double power, double mu, double c) {
  return awgn_threshold_bits(power, c) + mu;
}

double constant_gap_bits(double g) { return std::log2(2.0 * g / pi_e()); }

std::pair<double, double> ergodic_capacity(const ChannelModel& model, double power,
                                           std::size_t samples, std::uint64_t seed) {
  if (samples < 2) throw Error(ErrorKind::InvalidTrials, "need at least two capacity samples");
  std::vector<double> values(samples);
#pragma omp parallel for schedule(static)
  for (std::size_t t = 0; t < samples; ++t) {
    values[t] = capacity_sample(sample_channel(model, derive_seed(seed, t)), power);
  }
  const double n = static_cast<double>(samples);
  const double mean = detail::compensated_sum(values) / n;
  std::vector<double> dev(samples);
  for (std::size_t t = 0; t < samples; ++t) dev[t] = (values[t] - mean) * (values[t] - mean);
  return {mean, std::sqrt(detail::compensated_sum(dev) / (n - 1.0) / n)};
}

GapReport gap_report(const FiniteCode& code, const ChannelModel& model, double mu_hat, double c,
                     bool c_certified, const GapOptions& options) {
  if (!(c > 0.0)) throw Error(ErrorKind::InvalidArgument, "c must be positive");
  if (!c_certified && !options.allow_upper_bound) {
    throw Error(ErrorKind::UncertifiedInvariant,
                "rh is only an upper bound; refusing to state an achievability threshold");
  }
  if (code.k() != model.k) throw Error(ErrorKind::DimensionMismatch, "code and channel k differ");
  GapReport r;
  r.rate_bits = rate(code);
  r.mu = model.kind == ChannelKind::awgn ? 0.0 : mu_hat;
  r.threshold_bits = fading_threshold_bits(code.power, r.mu, c);
  if (model.kind == ChannelKind::awgn) {
    r.capacity_bits = std::log2(1.0 + code.power);
  } else {
    std::tie(r.capacity_bits, r.capacity_stderr) =
        ergodic_capacity(model, code.power, options.capacity_samples, options.seed);
  }
  r.gap_bits = r.capacity_bits - r.threshold_bits;
  r.upper_bound_only = !c_certified;
  return r;
}

}  // namespace latfade
