#pragma once

#include <complex>
#include <optional>
#include <string>

#include "latfade/forms.hpp"
#include "latfade/lattice.hpp"

namespace latfade {

using LComplex = std::complex<long double>;
using LCMatrix = Eigen::Matrix<LComplex, Eigen::Dynamic, Eigen::Dynamic>;
using IMatrix = Eigen::Matrix<long long, Eigen::Dynamic, Eigen::Dynamic>;

/// A totally complex number field of degree 2k given numerically through the
/// relative canonical embedding of an integral basis.
///
/// Row i of `embeddings` is psi(w_i) = (sigma_1(w_i), ..., sigma_k(w_i)), one
/// embedding per complex-conjugate pair. Entries are kept in long double so
/// discriminants of degree-16 fields can be recovered from the volume exactly.
struct NumberFieldSpec {
  std::string label;
  int k = 0;
  LCMatrix embeddings;
  long long abs_discriminant = 0;
  std::optional<long long> n_min;  // N_min(K), user-supplied

  int degree() const { return 2 * k; }
};

/// Integral ideal given by integer coordinates of a Z-basis (rows) in the
/// integral basis of the field, together with its norm N(I) = [O_K : I].
struct IdealSpec {
  IMatrix coeffs;
  long long norm = 1;
  std::optional<bool> principal;
};

/// A lattice together with a proven lower bound on a form over its nonzero points.
struct CertifiedLattice {
  Lattice lattice;
  HomogeneousForm form;
  double form_lower_bound = 0.0;
};

/// Q(zeta_n). Integral basis 1, zeta, ..., zeta^{2k-1}; embeddings zeta -> e^{2 pi i a/n}
/// for the smallest representative a of each pair {a, n - a} with gcd(a, n) = 1.
/// Throws BadConductor for n < 3 or n = 2 mod 4.
NumberFieldSpec cyclotomic_field(int n);

/// Validates raw embedding data: full rank, discriminant either checked against
/// the embedded volume (1e-6 relative) or derived from it.
NumberFieldSpec make_field(std::string label, LCMatrix embeddings,
                           std::optional<long long> abs_discriminant,
                           std::optional<long long> n_min = std::nullopt);

/// Reads the field JSON format (see io.hpp).
NumberFieldSpec field_from_file(const std::string& path);

/// |d_K| = (2^k Vol)^2 rounded; throws InconsistentDiscriminant when the value
/// is not within max(1e-6, 1e-12 |d_K|) of an integer.
long long discriminant_from_volume(const LCMatrix& embeddings);

/// Exact long double volume of the embedded lattice spanned by the rows.
long double embedded_volume(const LCMatrix& rows);

/// psi(O_K).
Lattice embed_ring(const NumberFieldSpec& field);

/// psi(I). Throws NormMismatch when |det(coeffs)| != N(I).
Lattice embed_ideal(const NumberFieldSpec& field, const IdealSpec& ideal);

/// Exact integer determinant (fraction-free elimination).
long long integer_determinant(const IMatrix& m);

/// Identity coefficients, norm 1.
IdealSpec unit_ideal(const NumberFieldSpec& field);

/// The ideal x*I for the element with integral-basis coordinates `element`.
IdealSpec principal_multiple(const NumberFieldSpec& field, const IdealSpec& ideal,
                             const Coeffs& element);

/// |nr_{K/Q}(x)| = n(psi(x))^2 of an embedded element, rounded; throws
/// NonIntegerNorm when it is not within 1e-6 of a positive integer.
long long algebraic_norm(const CVector& embedded);

struct IdealMinimum {
  double min_i = 0.0;   // min over searched x of sqrt(|nr(x)| / N(I))
  LatticePoint achiever;
  long long achiever_norm = 0;
  bool certified = false;
};

/// Enumerates ideal elements within `search_radius`. Certified when the value
/// is 1, or sqrt(2) for an ideal declared non-principal.
IdealMinimum min_of_ideal(const NumberFieldSpec& field, const IdealSpec& ideal,
                          double search_radius);

struct FieldLatticeReport {
  int k = 0;
  long long abs_discriminant = 0;
  long long ideal_norm = 1;
  double volume = 0.0;
  double nd_pmin = 0.0;
  double rh = 0.0;
  double min_i = 0.0;
  bool volume_certified = false;  // matches N(I) 2^{-k} sqrt|d_K|
  bool nd_certified = false;
  bool rh_certified = false;
  bool min_i_certified = false;
  double nd_enumerated = 0.0;   // independent enumeration of the product distance
  double rh_enumerated = 0.0;   // independent enumeration of the reduced norm minimum
  std::optional<double> nd_optimal;  // from N_min(K) when supplied
  std::optional<double> rh_optimal;
};

/// Volume, normalized product distance, reduced Hermite invariant and min(I)
/// of psi(I) (psi(O_K) when no ideal is given), each cross-checked against an
/// independent enumeration. A non-positive `search_radius` picks a default.
FieldLatticeReport field_report(const NumberFieldSpec& field,
                                const std::optional<IdealSpec>& ideal = std::nullopt,
                                double search_radius = 0.0);

/// Formula-only quantities for a field with root discriminant |d_K|^{1/k} = G^2
/// (Martinet-type towers, not constructed).
struct VirtualFieldReport {
  double g = 0.0;
  int k = 0;
  double nd_pmin = 0.0;  // (2/G)^{k/2}
  double rh = 0.0;       // 2k/G
  double gap_bits = 0.0; // log2(2G/(pi e))
};

VirtualFieldReport martinet_report(double g, int k);

inline constexpr double kMartinetG = 92.368;

/// psi(O_K) with its product-form certificate k * |nr(x)|^{1/k} >= k.
CertifiedLattice certified_ring(const NumberFieldSpec& field);

/// Block-interleaved copies of psi(O_K) for block fading with block length b:
/// x = (sigma_1(u_1..u_b), ..., sigma_k(u_1..u_b)) for u_1..u_b in O_K, a lattice
/// in C^{kb}. By Hoelder's inequality and norm integrality the block form with
/// m = k blocks is at least k on it.
CertifiedLattice blockwise_ring(const NumberFieldSpec& field, int block);

/// Golden-code lattice in C^4: x = (u, v, i*sigma(v), sigma(u)) with u, v in
/// Z[i][theta], theta = (1 + sqrt 5)/2 and sigma: sqrt 5 -> -sqrt 5. With the
/// `channel` layout det X = N(u) - i N(v) is a Gaussian integer, nonzero for
/// (u, v) != 0 since i is not a relative norm of Q(i, sqrt 5)/Q(i); so
/// mimo_det2 >= 2.
CertifiedLattice golden_code_lattice();

}  // namespace latfade
