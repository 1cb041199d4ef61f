#include "latfade/forms.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "latfade/error.hpp"
#include "latfade/rng.hpp"
#include "select.hpp"

namespace latfade {
namespace {

struct ColumnPairs {
  std::array<int, 2> first;
  std::array<int, 2> second;
};

// Coordinates forming the two columns of the 2x2 matrix X.
ColumnPairs columns(Det2Layout layout) {
  if (layout == Det2Layout::printed) return {{0, 3}, {2, 1}};
  return {{0, 1}, {2, 3}};
}

void require_size(const CVector& x, int k) {
  if (x.size() != k) {
    throw Error(ErrorKind::DimensionMismatch, "vector has dimension " + std::to_string(x.size()) +
                                                  ", expected " + std::to_string(k));
  }
}

// m * (prod_j w_j)^{1/m}, evaluated through logs.
double balanced_product(const std::vector<double>& weights) {
  const double m = static_cast<double>(weights.size());
  double log_sum = 0.0;
  for (double w : weights) {
    if (w <= 0.0) return 0.0;
    log_sum += std::log(w);
  }
  return m * std::exp(log_sum / m);
}

std::vector<double> block_weights(const CVector& x, int block) {
  std::vector<double> w(static_cast<std::size_t>(x.size() / block), 0.0);
  for (Eigen::Index i = 0; i < x.size(); ++i) w[static_cast<std::size_t>(i / block)] += std::norm(x(i));
  return w;
}

// Weights c_j of f(t) = sum_j c_j exp(2 t_j) for the diagonal-type groups.
std::vector<double> descent_weights(const MatrixGroupSpec& group, const CVector& x) {
  switch (group.kind) {
    case GroupKind::identity: return {x.squaredNorm()};
    case GroupKind::diagonal: return block_weights(x, 1);
    case GroupKind::block_diagonal: return block_weights(x, group.block);
    case GroupKind::mimo2_block: break;
  }
  return {};
}

// Pairwise exact line minimization along e_i - e_j keeps sum_j t_j = 0.
double diagonal_descent(const std::vector<double>& c, int iterations, Engine& rng) {
  const std::size_t m = c.size();
  if (m == 1) return c[0];
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> t(m);
  for (double& v : t) v = normal(rng);
  const double mean = std::accumulate(t.begin(), t.end(), 0.0) / static_cast<double>(m);
  for (double& v : t) v -= mean;

  auto term = [&](std::size_t i) { return c[i] == 0.0 ? 0.0 : c[i] * std::exp(2.0 * t[i]); };
  auto value = [&] {
    double s = 0.0;
    for (std::size_t i = 0; i < m; ++i) s += term(i);
    return s;
  };

  double current = value();
  for (int sweep = 0; sweep < iterations; ++sweep) {
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = i + 1; j < m; ++j) {
        const double a = term(i);
        const double b = term(j);
        if (a == 0.0 && b == 0.0) continue;
        double d;
        if (a == 0.0) {
          d = 20.0;
        } else if (b == 0.0) {
          d = -20.0;
        } else {
          d = std::clamp(0.25 * std::log(b / a), -20.0, 20.0);
        }
        t[i] += d;
        t[j] -= d;
      }
    }
    const double next = value();
    const bool stalled = current - next <= 1e-15 * current;
    current = std::min(current, next);
    if (stalled) break;
  }
  return current;
}

// tr(exp(S) M) for the traceless Hermitian S = [[a, b - ic], [b + ic, -a]].
double mimo_objective(const std::array<double, 3>& s, const Eigen::Matrix2cd& m) {
  const double r = std::sqrt(s[0] * s[0] + s[1] * s[1] + s[2] * s[2]);
  const double sinhc = r < 1e-8 ? 1.0 + r * r / 6.0 : std::sinh(r) / r;
  Eigen::Matrix2cd p;
  p(0, 0) = std::cosh(r) + sinhc * s[0];
  p(1, 1) = std::cosh(r) - sinhc * s[0];
  p(0, 1) = sinhc * Complex(s[1], -s[2]);
  p(1, 0) = sinhc * Complex(s[1], s[2]);
  return (p * m).trace().real();
}

double golden_section(const std::array<double, 3>& base, int coord, const Eigen::Matrix2cd& m,
                      double& best_value, std::array<double, 3>& best) {
  constexpr double kLimit = 30.0;
  auto f = [&](double v) {
    auto s = base;
    s[coord] = v;
    return mimo_objective(s, m);
  };
  const double x0 = base[coord];
  double lo = x0 - 1.0, hi = x0 + 1.0;
  for (double step = 1.0; f(lo) < f(x0) && lo > -kLimit; step *= 2.0) lo = std::max(x0 - 2.0 * step, -kLimit);
  for (double step = 1.0; f(hi) < f(x0) && hi < kLimit; step *= 2.0) hi = std::min(x0 + 2.0 * step, kLimit);

  const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - ratio * (b - a), d = a + ratio * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > 1e-10 * (1.0 + std::fabs(a) + std::fabs(b))) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - ratio * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + ratio * (b - a);
      fd = f(d);
    }
  }
  const double v = 0.5 * (a + b);
  const double fv = f(v);
  if (fv < best_value) {
    best_value = fv;
    best = base;
    best[coord] = v;
  }
  return best_value;
}

double mimo_descent(const Eigen::Matrix2cd& m, int iterations, Engine& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::array<double, 3> s{normal(rng), normal(rng), normal(rng)};
  double current = mimo_objective(s, m);
  for (int sweep = 0; sweep < iterations; ++sweep) {
    const double before = current;
    for (int coord = 0; coord < 3; ++coord) {
      auto base = s;
      golden_section(base, coord, m, current, s);
    }
    if (before - current <= 1e-15 * before) break;
  }
  return current;
}

Eigen::Matrix2cd mimo_moment(const CVector& x, Det2Layout layout) {
  const auto cols = columns(layout);
  Eigen::Matrix2cd xm;
  xm << x(cols.first[0]), x(cols.second[0]), x(cols.first[1]), x(cols.second[1]);
  return xm * xm.adjoint();
}

double restart_value(const MatrixGroupSpec& group, const CVector& x, int iterations,
                     std::uint64_t seed) {
  Engine rng(seed);
  if (group.kind == GroupKind::mimo2_block) {
    return mimo_descent(mimo_moment(x, group.layout), iterations, rng);
  }
  return diagonal_descent(descent_weights(group, x), iterations, rng);
}

void check_numeric_args(const MatrixGroupSpec& group, const CVector& x, int iterations,
                        const NumericOptions& options) {
  require_size(x, group.k);
  if (group.kind == GroupKind::mimo2_block && group.k != 4) {
    throw Error(ErrorKind::UnsupportedGroup, "mimo2_block minimization is defined for k = 4");
  }
  if (x.squaredNorm() == 0.0) throw Error(ErrorKind::ZeroVector, "x must be nonzero");
  if (iterations < 1 || options.restarts < 1) {
    throw Error(ErrorKind::InvalidArgument, "iterations and restarts must be positive");
  }
}

}  // namespace

HomogeneousForm make_form(FormKind kind, int k, int block_size, Det2Layout layout) {
  if (k < 1) throw Error(ErrorKind::DimensionMismatch, "k must be positive");
  HomogeneousForm form{kind, k, 1, layout};
  if (kind == FormKind::block_product_sq) {
    if (block_size < 1 || k % block_size != 0) {
      throw Error(ErrorKind::BlockMismatch, "block size " + std::to_string(block_size) +
                                                " does not divide k=" + std::to_string(k));
    }
    form.block_size = block_size;
  }
  if (kind == FormKind::mimo_det2 && k != 4) {
    throw Error(ErrorKind::DimensionMismatch, "mimo_det2 is defined for k = 4 only");
  }
  return form;
}

MatrixGroupSpec make_group(GroupKind kind, int k, int block, Det2Layout layout) {
  if (k < 1) throw Error(ErrorKind::DimensionMismatch, "k must be positive");
  MatrixGroupSpec group{kind, k, 1, layout};
  if (kind == GroupKind::block_diagonal) {
    if (block < 1 || k % block != 0) {
      throw Error(ErrorKind::BlockMismatch, "block length " + std::to_string(block) +
                                                " does not divide k=" + std::to_string(k));
    }
    group.block = block;
  }
  if (kind == GroupKind::mimo2_block && k % 4 != 0) {
    throw Error(ErrorKind::BlockMismatch, "mimo2_block needs k divisible by 4");
  }
  return group;
}

std::string to_string(FormKind kind) {
  switch (kind) {
    case FormKind::euclidean_sq: return "euclidean_sq";
    case FormKind::product_sq: return "product_sq";
    case FormKind::block_product_sq: return "block_product_sq";
    case FormKind::mimo_det2: return "mimo_det2";
  }
  return "?";
}

std::string to_string(GroupKind kind) {
  switch (kind) {
    case GroupKind::identity: return "identity";
    case GroupKind::diagonal: return "diagonal";
    case GroupKind::block_diagonal: return "block_diagonal";
    case GroupKind::mimo2_block: return "mimo2_block";
  }
  return "?";
}

std::string to_string(Det2Layout layout) {
  return layout == Det2Layout::printed ? "printed" : "channel";
}

double product_norm(const CVector& x) {
  double p = 1.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) p *= std::abs(x(i));
  return p;
}

double evaluate(const HomogeneousForm& form, const CVector& x) {
  require_size(x, form.k);
  switch (form.kind) {
    case FormKind::euclidean_sq:
      return x.squaredNorm();
    case FormKind::product_sq:
      return balanced_product(block_weights(x, 1));
    case FormKind::block_product_sq:
      return balanced_product(block_weights(x, form.block_size));
    case FormKind::mimo_det2: {
      const auto cols = columns(form.layout);
      const Complex det = x(cols.first[0]) * x(cols.second[1]) - x(cols.second[0]) * x(cols.first[1]);
      return 2.0 * std::abs(det);
    }
  }
  return 0.0;
}

HomogeneousForm form_of(const MatrixGroupSpec& group) {
  switch (group.kind) {
    case GroupKind::identity: return make_form(FormKind::euclidean_sq, group.k);
    case GroupKind::diagonal: return make_form(FormKind::product_sq, group.k);
    case GroupKind::block_diagonal:
      return make_form(FormKind::block_product_sq, group.k, group.block);
    case GroupKind::mimo2_block:
      if (group.k != 4) {
        throw Error(ErrorKind::UnsupportedGroup,
                    "no closed-form reduced norm for mimo2_block with k=" + std::to_string(group.k));
      }
      return make_form(FormKind::mimo_det2, 4, 1, group.layout);
  }
  throw Error(ErrorKind::UnsupportedGroup, "unknown group");
}

double reduced_norm_sq_closed_form(const MatrixGroupSpec& group, const CVector& x) {
  return evaluate(form_of(group), x);
}

CMatrix sample_group_member(const MatrixGroupSpec& group, std::mt19937_64& rng) {
  const int k = group.k;
  CMatrix a = CMatrix::Zero(k, k);
  switch (group.kind) {
    case GroupKind::identity:
      a.setIdentity();
      return a;
    case GroupKind::diagonal:
    case GroupKind::block_diagonal: {
      const int block = group.kind == GroupKind::diagonal ? 1 : group.block;
      for (int j = 0; j < k / block; ++j) {
        const Complex h = complex_gaussian(rng);
        for (int i = 0; i < block; ++i) a(j * block + i, j * block + i) = h;
      }
      break;
    }
    case GroupKind::mimo2_block: {
      Eigen::Matrix2cd h;
      h << complex_gaussian(rng), complex_gaussian(rng), complex_gaussian(rng), complex_gaussian(rng);
      h /= std::sqrt(std::abs(h.determinant()));
      const auto cols = columns(group.layout);
      for (int base = 0; base < k; base += 4) {
        for (const auto& pair : {cols.first, cols.second}) {
          for (int r = 0; r < 2; ++r) {
            for (int c = 0; c < 2; ++c) a(base + pair[r], base + pair[c]) = h(r, c);
          }
        }
      }
      return a;
    }
  }
  const double log_abs_det = a.diagonal().array().abs().log().sum();
  return a * std::exp(-log_abs_det / k);
}

double reduced_norm_sq_numeric(const MatrixGroupSpec& group, const CVector& x, int iterations,
                               const NumericOptions& options) {
  check_numeric_args(group, x, iterations, options);
  if (group.kind == GroupKind::identity) return x.squaredNorm();
  std::vector<double> values(static_cast<std::size_t>(options.restarts));
#pragma omp parallel for schedule(static)
  for (int r = 0; r < options.restarts; ++r) {
    values[static_cast<std::size_t>(r)] =
        restart_value(group, x, iterations, derive_seed(options.seed, static_cast<std::uint64_t>(r)));
  }
  return *std::min_element(values.begin(), values.end());
}

namespace reference {

double reduced_norm_sq_numeric(const MatrixGroupSpec& group, const CVector& x, int iterations,
                               const NumericOptions& options) {
  check_numeric_args(group, x, iterations, options);
  if (group.kind == GroupKind::identity) return x.squaredNorm();
  double best = std::numeric_limits<double>::infinity();
  for (int r = 0; r < options.restarts; ++r) {
    best = std::min(best, restart_value(group, x, iterations,
                                        derive_seed(options.seed, static_cast<std::uint64_t>(r))));
  }
  return best;
}

}  // namespace reference

MinimumResult homogeneous_minimum(const HomogeneousForm& form, const Lattice& lattice,
                                  double search_radius, std::optional<double> lower_bound) {
  if (form.k != lattice.k()) {
    throw Error(ErrorKind::DimensionMismatch, "form and lattice dimensions differ");
  }
  const auto points = enumerate_ball(lattice, search_radius, CVector::Zero(lattice.k()));
  std::vector<double> values(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) values[i] = std::fabs(evaluate(form, points[i].embedding));
  const auto best = detail::select_minimizer(points, values);
  if (!best) {
    throw Error(ErrorKind::EmptySearch, "no nonzero lattice point within radius " +
                                            std::to_string(search_radius) + "; try a larger radius");
  }
  MinimumResult result{values[*best], points[*best], form.kind == FormKind::euclidean_sq};
  if (lower_bound) {
    const double tol = 1e-9 * std::max(std::fabs(*lower_bound), 1e-300);
    if (result.value < *lower_bound - tol) {
      throw Error(ErrorKind::InvalidArgument, "found value " + std::to_string(result.value) +
                                                  " below the supplied lower bound " +
                                                  std::to_string(*lower_bound));
    }
    if (result.value <= *lower_bound + tol) result.certified = true;
  }
  return result;
}

MinimumResult reduced_hermite_invariant(const MatrixGroupSpec& group, const Lattice& lattice,
                                        double search_radius,
                                        std::optional<double> form_lower_bound) {
  MinimumResult result =
      homogeneous_minimum(form_of(group), lattice, search_radius, form_lower_bound);
  result.value /= std::pow(lattice.volume(), 1.0 / lattice.k());
  return result;
}

MinimumResult normalized_product_distance(const Lattice& lattice, double search_radius,
                                          std::optional<double> product_lower_bound) {
  const auto points = enumerate_ball(lattice, search_radius, CVector::Zero(lattice.k()));
  std::vector<double> values(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) values[i] = product_norm(points[i].embedding);
  const auto best = detail::select_minimizer(points, values);
  if (!best) {
    throw Error(ErrorKind::EmptySearch, "no nonzero lattice point within radius " +
                                            std::to_string(search_radius));
  }
  MinimumResult result{values[*best], points[*best], false};
  if (product_lower_bound) {
    const double tol = 1e-9 * std::max(*product_lower_bound, 1e-300);
    if (result.value < *product_lower_bound - tol) {
      throw Error(ErrorKind::InvalidArgument, "product distance below the supplied lower bound");
    }
    result.certified = result.value <= *product_lower_bound + tol;
  }
  result.value /= std::sqrt(lattice.volume());
  return result;
}

}  // namespace latfade
