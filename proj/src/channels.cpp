#include "latfade/channels.hpp"

#include <cmath>

#include "latfade/error.hpp"
#include "sum.hpp"

namespace latfade {
namespace {

constexpr double kSingular = 1e-300;

void require_size(const CVector& x, int k) {
  if (x.size() != k) {
    throw Error(ErrorKind::DimensionMismatch, "vector has dimension " + std::to_string(x.size()) +
                                                  ", channel k=" + std::to_string(k));
  }
}

Complex draw_nonzero(Engine& rng, std::size_t& rejected) {
  for (;;) {
    const Complex h = complex_gaussian(rng);
    if (std::abs(h) >= kSingular) return h;
    ++rejected;
  }
}

MuEstimate summarize(const std::vector<double>& samples) {
  const double n = static_cast<double>(samples.size());
  const double mean = detail::compensated_sum(samples) / n;
  std::vector<double> dev(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) dev[i] = (samples[i] - mean) * (samples[i] - mean);
  const double var = detail::compensated_sum(dev) / (n - 1.0);
  return {mean, std::sqrt(var / n)};
}

void check_mu_args(std::size_t trials) {
  if (trials < 100) throw Error(ErrorKind::InvalidTrials, "estimate_mu needs at least 100 trials");
}

}  // namespace

ChannelModel make_channel(ChannelKind kind, int k, int block, bool iid_blocks) {
  if (k < 1) throw Error(ErrorKind::DimensionMismatch, "k must be positive");
  ChannelModel m{kind, k, 1, iid_blocks};
  if (kind == ChannelKind::block_fading_diag) {
    if (block < 1 || k % block != 0) {
      throw Error(ErrorKind::BlockMismatch, "block length " + std::to_string(block) +
                                                " does not divide k=" + std::to_string(k));
    }
    m.block = block;
  }
  if (kind == ChannelKind::mimo2_block && k % 4 != 0) {
    throw Error(ErrorKind::BlockMismatch, "mimo2_block needs k divisible by 4, got " + std::to_string(k));
  }
  return m;
}

std::string to_string(ChannelKind kind) {
  switch (kind) {
    case ChannelKind::awgn: return "awgn";
    case ChannelKind::iid_rayleigh_diag: return "rayleigh";
    case ChannelKind::block_fading_diag: return "block";
    case ChannelKind::mimo2_block: return "mimo2";
  }
  return "?";
}

double ChannelDraw::det_term() const { return std::exp2(log_det_sq / k); }

double ChannelDraw::normalization() const { return std::exp2(-log_det_sq / (2.0 * k)); }

CMatrix ChannelDraw::dense() const {
  CMatrix h = CMatrix::Zero(k, k);
  if (kind == ChannelKind::mimo2_block) {
    for (int f = 0; f < k / 4; ++f) {
      const Complex* m = &coeffs[static_cast<std::size_t>(4 * f)];
      for (int pair = 0; pair < 2; ++pair) {
        const int b = 4 * f + 2 * pair;
        h(b, b) = m[0];
        h(b, b + 1) = m[1];
        h(b + 1, b) = m[2];
        h(b + 1, b + 1) = m[3];
      }
    }
    return h;
  }
  for (int i = 0; i < k; ++i) h(i, i) = coeffs[static_cast<std::size_t>(i)];
  return h;
}

CMatrix ChannelDraw::normalized() const { return normalization() * dense(); }

ChannelDraw sample_channel(const ChannelModel& model, Engine& rng) {
  ChannelDraw d;
  d.kind = model.kind;
  d.k = model.k;
  switch (model.kind) {
    case ChannelKind::awgn:
      d.coeffs.assign(static_cast<std::size_t>(model.k), Complex(1.0, 0.0));
      d.log_det_sq = 0.0;
      break;
    case ChannelKind::iid_rayleigh_diag:
    case ChannelKind::block_fading_diag: {
      const int n = model.kind == ChannelKind::block_fading_diag ? model.block : 1;
      d.coeffs.resize(static_cast<std::size_t>(model.k));
      for (int j = 0; j < model.k / n; ++j) {
        const Complex h = draw_nonzero(rng, d.rejected);
        for (int i = 0; i < n; ++i) d.coeffs[static_cast<std::size_t>(j * n + i)] = h;
      }
      for (const Complex& h : d.coeffs) d.log_det_sq += std::log2(std::norm(h));
      break;
    }
    case ChannelKind::mimo2_block: {
      const int frames = model.k / 4;
      d.coeffs.resize(static_cast<std::size_t>(model.k));
      for (int f = 0; f < frames; ++f) {
        if (f > 0 && !model.iid_blocks) {
          std::copy_n(d.coeffs.begin(), 4, d.coeffs.begin() + 4 * f);
          continue;
        }
        for (;;) {
          Complex* m = &d.coeffs[static_cast<std::size_t>(4 * f)];
          for (int i = 0; i < 4; ++i) m[i] = complex_gaussian(rng);
          if (std::abs(m[0] * m[3] - m[1] * m[2]) >= kSingular) break;
          ++d.rejected;
        }
      }
      for (int f = 0; f < frames; ++f) {
        const Complex* m = &d.coeffs[static_cast<std::size_t>(4 * f)];
        // Each frame holds two copies of the 2x2 block.
        d.log_det_sq += 2.0 * std::log2(std::norm(m[0] * m[3] - m[1] * m[2]));
      }
      break;
    }
  }
  return d;
}

ChannelDraw sample_channel(const ChannelModel& model, std::uint64_t seed) {
  Engine rng(seed);
  return sample_channel(model, rng);
}

CVector apply_channel(const ChannelDraw& draw, const CVector& x) {
  require_size(x, draw.k);
  CVector y(draw.k);
  if (draw.kind == ChannelKind::mimo2_block) {
    for (int f = 0; f < draw.k / 4; ++f) {
      const Complex* m = &draw.coeffs[static_cast<std::size_t>(4 * f)];
      for (int pair = 0; pair < 2; ++pair) {
        const int b = 4 * f + 2 * pair;
        y(b) = m[0] * x(b) + m[1] * x(b + 1);
        y(b + 1) = m[2] * x(b) + m[3] * x(b + 1);
      }
    }
    return y;
  }
  for (int i = 0; i < draw.k; ++i) y(i) = draw.coeffs[static_cast<std::size_t>(i)] * x(i);
  return y;
}

CVector add_noise(const CVector& y0, Engine& rng) {
  CVector y = y0;
  for (Eigen::Index i = 0; i < y.size(); ++i) y(i) += complex_gaussian(rng);
  return y;
}

CVector add_noise(const CVector& y0, std::uint64_t seed) {
  Engine rng(seed);
  return add_noise(y0, rng);
}

MuEstimate estimate_mu(const ChannelModel& model, std::size_t trials, std::uint64_t seed) {
  check_mu_args(trials);
  std::vector<double> samples(trials);
#pragma omp parallel for schedule(static)
  for (std::size_t t = 0; t < trials; ++t) {
    samples[t] = sample_channel(model, derive_seed(seed, t)).log_det_sq / model.k;
  }
  return summarize(samples);
}

MatrixGroupSpec group_of(const ChannelModel& model) {
  switch (model.kind) {
    case ChannelKind::awgn: return make_group(GroupKind::identity, model.k);
    case ChannelKind::iid_rayleigh_diag: return make_group(GroupKind::diagonal, model.k);
    case ChannelKind::block_fading_diag:
      return make_group(GroupKind::block_diagonal, model.k, model.block);
    case ChannelKind::mimo2_block:
      return make_group(GroupKind::mimo2_block, model.k, 1, Det2Layout::channel);
  }
  throw Error(ErrorKind::UnsupportedGroup, "unknown channel kind");
}

namespace reference {

MuEstimate estimate_mu(const ChannelModel& model, std::size_t trials, std::uint64_t seed) {
  check_mu_args(trials);
  std::vector<double> samples;
  samples.reserve(trials);
  for (std::size_t t = 0; t < trials; ++t) {
    samples.push_back(sample_channel(model, derive_seed(seed, t)).log_det_sq / model.k);
  }
  return summarize(samples);
}

}  // namespace reference
}  // namespace latfade
