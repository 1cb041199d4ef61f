#include "latfade/numfield.hpp"

#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "latfade/error.hpp"
#include "select.hpp"

namespace latfade {
namespace {

using LMatrix = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;

LMatrix real_rows(const LCMatrix& rows) {
  LMatrix out(rows.rows(), 2 * rows.cols());
  for (Eigen::Index i = 0; i < rows.rows(); ++i) {
    for (Eigen::Index j = 0; j < rows.cols(); ++j) {
      out(i, 2 * j) = rows(i, j).real();
      out(i, 2 * j + 1) = rows(i, j).imag();
    }
  }
  return out;
}

Lattice lattice_from_rows(const LCMatrix& rows) {
  return Lattice(real_rows(rows).cast<double>());
}

void check_shape(const LCMatrix& embeddings) {
  if (embeddings.cols() < 1 || embeddings.rows() != 2 * embeddings.cols()) {
    throw Error(ErrorKind::DimensionMismatch,
                "embedding matrix must have 2k rows of k complex entries, got " +
                    std::to_string(embeddings.rows()) + "x" + std::to_string(embeddings.cols()));
  }
}

double default_radius(int k, long long norm, bool non_principal) {
  const double target = static_cast<double>(norm) * (non_principal ? 2.0 : 1.0);
  return 1.5 * std::sqrt(static_cast<double>(k)) * std::pow(target, 1.0 / (2.0 * k));
}

}  // namespace

long double embedded_volume(const LCMatrix& rows) {
  check_shape(rows);
  return std::fabs(real_rows(rows).partialPivLu().determinant());
}

long long discriminant_from_volume(const LCMatrix& embeddings) {
  const auto k = static_cast<int>(embeddings.cols());
  const long double scaled = std::ldexp(embedded_volume(embeddings), k);
  const long double raw = scaled * scaled;
  const long double nearest = std::nearbyint(raw);
  const long double gate = std::max(1e-6L, 1e-12L * raw);
  if (nearest < 1.0L || std::fabs(raw - nearest) > gate) {
    throw Error(ErrorKind::InconsistentDiscriminant,
                "(2^k Vol)^2 = " + std::to_string(static_cast<double>(raw)) +
                    " is not an integer discriminant");
  }
  return static_cast<long long>(nearest);
}

NumberFieldSpec make_field(std::string label, LCMatrix embeddings,
                           std::optional<long long> abs_discriminant,
                           std::optional<long long> n_min) {
  check_shape(embeddings);
  // Rank check through the lattice constructor.
  (void)lattice_from_rows(embeddings);
  NumberFieldSpec spec;
  spec.label = std::move(label);
  spec.k = static_cast<int>(embeddings.cols());
  spec.embeddings = std::move(embeddings);
  spec.n_min = n_min;
  if (abs_discriminant) {
    const long double scaled = std::ldexp(embedded_volume(spec.embeddings), spec.k);
    const long double raw = scaled * scaled;
    const auto supplied = static_cast<long double>(*abs_discriminant);
    if (*abs_discriminant <= 0 || std::fabs(raw - supplied) > 1e-6L * supplied) {
      throw Error(ErrorKind::InconsistentDiscriminant,
                  "supplied |d_K| = " + std::to_string(*abs_discriminant) +
                      " but the embedded volume implies " + std::to_string(static_cast<double>(raw)));
    }
    spec.abs_discriminant = *abs_discriminant;
  } else {
    spec.abs_discriminant = discriminant_from_volume(spec.embeddings);
  }
  if (n_min && *n_min < 1) throw Error(ErrorKind::InvalidArgument, "n_min must be positive");
  return spec;
}

NumberFieldSpec cyclotomic_field(int n) {
  if (n < 3 || n % 4 == 2) {
    throw Error(ErrorKind::BadConductor,
                "conductor must be >= 3 and not 2 mod 4, got " + std::to_string(n));
  }
  std::vector<int> reps;
  for (int a = 1; 2 * a < n; ++a) {
    if (std::gcd(a, n) == 1) reps.push_back(a);
  }
  const int k = static_cast<int>(reps.size());
  if (k == 0) throw Error(ErrorKind::NotTotallyComplex, "Q(zeta_n) has no complex places");
  const long double two_pi = 2.0L * std::acos(-1.0L);
  LCMatrix emb(2 * k, k);
  for (int i = 0; i < 2 * k; ++i) {
    for (int j = 0; j < k; ++j) {
      const long double angle = two_pi * static_cast<long double>((static_cast<long long>(reps[j]) * i) % n) / n;
      auto snap = [](long double v) { return std::fabs(v) < 1e-18L ? 0.0L : v; };
      emb(i, j) = LComplex(snap(std::cos(angle)), snap(std::sin(angle)));
    }
  }
  return make_field("Q(zeta_" + std::to_string(n) + ")", std::move(emb), std::nullopt);
}

Lattice embed_ring(const NumberFieldSpec& field) { return lattice_from_rows(field.embeddings); }

long long integer_determinant(const IMatrix& m) {
  const Eigen::Index n = m.rows();
  if (n != m.cols()) throw Error(ErrorKind::DimensionMismatch, "matrix must be square");
  if (n == 0) return 1;
  std::vector<std::vector<__int128>> a(n, std::vector<__int128>(n));
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) a[i][j] = m(i, j);
  int sign = 1;
  __int128 prev = 1;
  for (Eigen::Index p = 0; p < n - 1; ++p) {
    if (a[p][p] == 0) {
      Eigen::Index swap_row = p + 1;
      while (swap_row < n && a[swap_row][p] == 0) ++swap_row;
      if (swap_row == n) return 0;
      std::swap(a[p], a[swap_row]);
      sign = -sign;
    }
    for (Eigen::Index i = p + 1; i < n; ++i) {
      for (Eigen::Index j = p + 1; j < n; ++j) {
        a[i][j] = (a[i][j] * a[p][p] - a[i][p] * a[p][j]) / prev;
      }
    }
    prev = a[p][p];
  }
  return sign * static_cast<long long>(a[n - 1][n - 1]);
}

IdealSpec unit_ideal(const NumberFieldSpec& field) {
  return {IMatrix::Identity(field.degree(), field.degree()), 1, true};
}

Lattice embed_ideal(const NumberFieldSpec& field, const IdealSpec& ideal) {
  if (ideal.coeffs.rows() != field.degree() || ideal.coeffs.cols() != field.degree()) {
    throw Error(ErrorKind::DimensionMismatch, "ideal coefficient matrix must be 2k x 2k");
  }
  const long long det = integer_determinant(ideal.coeffs);
  if (ideal.norm < 1 || std::llabs(det) != ideal.norm) {
    throw Error(ErrorKind::NormMismatch, "|det(coeffs)| = " + std::to_string(std::llabs(det)) +
                                             " but N(I) = " + std::to_string(ideal.norm));
  }
  const LCMatrix rows = ideal.coeffs.cast<long double>().cast<LComplex>() * field.embeddings;
  Lattice lattice = lattice_from_rows(rows);
  const double expected = static_cast<double>(ideal.norm) * std::ldexp(1.0, -field.k) *
                          std::sqrt(static_cast<double>(field.abs_discriminant));
  if (std::fabs(lattice.volume() - expected) > 1e-8 * expected) {
    throw Error(ErrorKind::InconsistentDiscriminant, "embedded ideal volume disagrees with N(I)");
  }
  return lattice;
}

IdealSpec principal_multiple(const NumberFieldSpec& field, const IdealSpec& ideal,
                             const Coeffs& element) {
  const int n = field.degree();
  if (static_cast<int>(element.size()) != n) {
    throw Error(ErrorKind::DimensionMismatch, "element must have 2k integral-basis coordinates");
  }
  Eigen::Matrix<LComplex, 1, Eigen::Dynamic> x = Eigen::Matrix<LComplex, 1, Eigen::Dynamic>::Zero(field.k);
  for (int i = 0; i < n; ++i) x += static_cast<long double>(element[i]) * field.embeddings.row(i);

  const LMatrix basis_t = real_rows(field.embeddings).transpose();
  const auto lu = basis_t.partialPivLu();
  IdealSpec out;
  out.coeffs = IMatrix(n, n);
  for (int r = 0; r < n; ++r) {
    Eigen::Matrix<LComplex, 1, Eigen::Dynamic> g =
        ideal.coeffs.row(r).cast<long double>().cast<LComplex>() * field.embeddings;
    LCMatrix prod(1, field.k);
    for (int j = 0; j < field.k; ++j) prod(0, j) = g(j) * x(j);
    const Eigen::Matrix<long double, Eigen::Dynamic, 1> coords =
        lu.solve(real_rows(prod).row(0).transpose());
    for (int i = 0; i < n; ++i) {
      const long double rounded = std::nearbyint(coords(i));
      if (std::fabs(coords(i) - rounded) > 1e-6L) {
        throw Error(ErrorKind::NonIntegerNorm, "x*I is not integral in the given basis");
      }
      out.coeffs(r, i) = static_cast<long long>(rounded);
    }
  }
  out.norm = std::llabs(integer_determinant(out.coeffs));
  if (out.norm == 0) throw Error(ErrorKind::ZeroVector, "element must be nonzero");
  out.principal = ideal.principal;
  return out;
}

long long algebraic_norm(const CVector& embedded) {
  long double p = 1.0L;
  for (Eigen::Index i = 0; i < embedded.size(); ++i) p *= static_cast<long double>(std::norm(embedded(i)));
  const long double nearest = std::nearbyint(p);
  if (nearest < 1.0L || std::fabs(p - nearest) > 1e-6L) {
    throw Error(ErrorKind::NonIntegerNorm,
                "n(psi(x))^2 = " + std::to_string(static_cast<double>(p)) + " is not a positive integer");
  }
  return static_cast<long long>(nearest);
}

IdealMinimum min_of_ideal(const NumberFieldSpec& field, const IdealSpec& ideal,
                          double search_radius) {
  const Lattice lattice = embed_ideal(field, ideal);
  const auto points = enumerate_ball(lattice, search_radius, CVector::Zero(field.k));
  std::vector<double> values(points.size(), 0.0);
  std::vector<long long> norms(points.size(), 0);
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (points[i].is_zero()) continue;
    norms[i] = algebraic_norm(points[i].embedding);
    if (norms[i] % ideal.norm != 0) {
      throw Error(ErrorKind::NonIntegerNorm, "element norm " + std::to_string(norms[i]) +
                                                 " is not divisible by N(I) = " +
                                                 std::to_string(ideal.norm));
    }
    values[i] = std::sqrt(static_cast<double>(norms[i]) / static_cast<double>(ideal.norm));
  }
  const auto best = detail::select_minimizer(points, values);
  if (!best) {
    throw Error(ErrorKind::EmptySearch, "no nonzero ideal element within radius " +
                                            std::to_string(search_radius));
  }
  IdealMinimum result;
  result.min_i = values[*best];
  result.achiever = points[*best];
  result.achiever_norm = norms[*best];
  const long long ratio = norms[*best] / ideal.norm;
  result.certified = ratio == 1 || (ratio == 2 && ideal.principal == false);
  return result;
}

FieldLatticeReport field_report(const NumberFieldSpec& field, const std::optional<IdealSpec>& ideal,
                                double search_radius) {
  const IdealSpec id = ideal ? *ideal : unit_ideal(field);
  const Lattice lattice = embed_ideal(field, id);
  const int k = field.k;
  const double d = static_cast<double>(field.abs_discriminant);
  if (search_radius <= 0.0) search_radius = default_radius(k, id.norm, id.principal == false);

  FieldLatticeReport r;
  r.k = k;
  r.abs_discriminant = field.abs_discriminant;
  r.ideal_norm = id.norm;
  r.volume = lattice.volume();
  const double expected_volume = static_cast<double>(id.norm) * std::ldexp(1.0, -k) * std::sqrt(d);
  r.volume_certified = std::fabs(r.volume - expected_volume) <= 1e-8 * expected_volume;

  const IdealMinimum mi = min_of_ideal(field, id, search_radius);
  r.min_i = mi.min_i;
  r.min_i_certified = mi.certified;
  r.nd_pmin = std::pow(2.0, k / 2.0) * mi.min_i / std::pow(d, 0.25);
  r.rh = k * std::pow(r.nd_pmin, 2.0 / k);
  r.nd_certified = r.rh_certified = mi.certified;

  const double n_floor = std::sqrt(static_cast<double>(id.norm) * (id.principal == false ? 2.0 : 1.0));
  const auto nd = normalized_product_distance(lattice, search_radius, n_floor);
  r.nd_enumerated = nd.value;
  const double form_floor = k * std::pow(n_floor, 2.0 / k);
  const auto rh = reduced_hermite_invariant(make_group(GroupKind::diagonal, k), lattice,
                                            search_radius, form_floor);
  r.rh_enumerated = rh.value;

  if (field.n_min) {
    const double nm = static_cast<double>(*field.n_min);
    r.nd_optimal = std::pow(2.0, k / 2.0) * std::sqrt(nm) / std::pow(d, 0.25);
    r.rh_optimal = 2.0 * k * std::pow(nm, 1.0 / k) / std::pow(d, 1.0 / (2.0 * k));
  }
  return r;
}

VirtualFieldReport martinet_report(double g, int k) {
  if (!(g > 0.0) || k < 1) throw Error(ErrorKind::InvalidArgument, "G and k must be positive");
  VirtualFieldReport r;
  r.g = g;
  r.k = k;
  r.nd_pmin = std::pow(2.0 / g, k / 2.0);
  r.rh = 2.0 * k / g;
  r.gap_bits = std::log2(2.0 * g / (std::acos(-1.0) * std::exp(1.0)));
  return r;
}

CertifiedLattice certified_ring(const NumberFieldSpec& field) {
  return {embed_ring(field), make_form(FormKind::product_sq, field.k), static_cast<double>(field.k)};
}

CertifiedLattice blockwise_ring(const NumberFieldSpec& field, int block) {
  if (block < 1) throw Error(ErrorKind::BlockMismatch, "block length must be positive");
  const int k = field.k;
  const int dim = k * block;
  LCMatrix rows = LCMatrix::Zero(2 * dim, dim);
  for (int t = 0; t < block; ++t) {
    for (int i = 0; i < field.degree(); ++i) {
      for (int j = 0; j < k; ++j) rows(t * field.degree() + i, j * block + t) = field.embeddings(i, j);
    }
  }
  return {lattice_from_rows(rows), make_form(FormKind::block_product_sq, dim, block),
          static_cast<double>(k)};
}

CertifiedLattice golden_code_lattice() {
  const long double s5 = std::sqrt(5.0L);
  const LComplex theta((1.0L + s5) / 2.0L, 0.0L);
  const LComplex theta_bar((1.0L - s5) / 2.0L, 0.0L);
  const LComplex one(1.0L, 0.0L), i(0.0L, 1.0L);
  const LComplex gens[4] = {one, i, theta, i * theta};
  const LComplex conj_gens[4] = {one, i, theta_bar, i * theta_bar};
  LCMatrix rows = LCMatrix::Zero(8, 4);
  for (int g = 0; g < 4; ++g) {
    rows(g, 0) = gens[g];
    rows(g, 3) = conj_gens[g];
    rows(4 + g, 1) = gens[g];
    rows(4 + g, 2) = i * conj_gens[g];
  }
  return {lattice_from_rows(rows), make_form(FormKind::mimo_det2, 4, 1, Det2Layout::channel), 2.0};
}

}  // namespace latfade
