#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>

#include "latfade/lattice.hpp"
#include "latfade/types.hpp"

namespace latfade {

enum class FormKind { euclidean_sq, product_sq, block_product_sq, mimo_det2 };

/// Which coordinates of (x1, x2, x3, x4) form the 2x2 matrix X whose
/// determinant the MIMO form measures.
///
/// `printed`: det = x1*x2 - x3*x4, X = [[x1, x3], [x4, x2]]; the matching group
///            acts on the coordinate pairs (x1, x4) and (x3, x2).
/// `channel`: det = x1*x4 - x2*x3, X = [[x1, x3], [x2, x4]]; the matching group
///            acts on (x1, x2) and (x3, x4), i.e. the 2x2 block-fading action
///            (h1 x1 + h2 x2, h3 x1 + h4 x2, h1 x3 + h2 x4, h3 x3 + h4 x4).
enum class Det2Layout { printed, channel };

/// A degree-2 homogeneous form on C^k.
struct HomogeneousForm {
  FormKind kind = FormKind::euclidean_sq;
  int k = 1;
  int block_size = 1;  // block_product_sq only
  Det2Layout layout = Det2Layout::printed;  // mimo_det2 only

  double degree() const { return 2.0; }
};

/// Validating constructor: block_product_sq needs block_size | k, mimo_det2 needs k = 4.
HomogeneousForm make_form(FormKind kind, int k, int block_size = 1,
                          Det2Layout layout = Det2Layout::printed);

enum class GroupKind { identity, diagonal, block_diagonal, mimo2_block };

/// A group of unit-|det| fading matrices acting on C^k.
struct MatrixGroupSpec {
  GroupKind kind = GroupKind::identity;
  int k = 1;
  int block = 1;  // repeat length of each diagonal entry (block_diagonal)
  Det2Layout layout = Det2Layout::printed;  // mimo2_block
};

MatrixGroupSpec make_group(GroupKind kind, int k, int block = 1,
                           Det2Layout layout = Det2Layout::printed);

std::string to_string(FormKind kind);
std::string to_string(GroupKind kind);
std::string to_string(Det2Layout layout);

/// F(x). Throws DimensionMismatch when x has the wrong size.
double evaluate(const HomogeneousForm& form, const CVector& x);

/// The homogeneous form equal to the squared reduced norm of the group.
/// Throws UnsupportedGroup for mimo2_block with k != 4.
HomogeneousForm form_of(const MatrixGroupSpec& group);

/// ||x||_G^2 = inf over A in G of ||A[x]||^2, from the closed form.
double reduced_norm_sq_closed_form(const MatrixGroupSpec& group, const CVector& x);

/// Dense k x k member of the group with |det| = 1, drawn at random.
CMatrix sample_group_member(const MatrixGroupSpec& group, std::mt19937_64& rng);

struct NumericOptions {
  int restarts = 200;
  std::uint64_t seed = 0x5eedULL;
};

/// Upper bound on inf over A in G of ||A[x]||^2 obtained by direct
/// minimization in log coordinates (diagonal and block groups) or over
/// positive-definite unit-determinant matrices exp(S) (2x2 MIMO group).
/// `iterations` caps the coordinate-descent sweeps per restart. Restarts run in
/// parallel; the result is the same for any thread count.
double reduced_norm_sq_numeric(const MatrixGroupSpec& group, const CVector& x, int iterations,
                               const NumericOptions& options = {});

/// Result of a minimum search over nonzero lattice points. `certified` means
/// the value is the exact minimum; otherwise it is an upper bound.
struct MinimumResult {
  double value = 0.0;
  LatticePoint achiever;
  bool certified = false;
};

/// Minimum of |F| over nonzero points of the lattice within `search_radius`.
/// Certified for euclidean_sq, or when `lower_bound` (a proven lower bound on
/// |F| over the whole lattice) matches the found value to 1e-9 relative.
/// Throws EmptySearch when the ball holds no nonzero point.
MinimumResult homogeneous_minimum(const HomogeneousForm& form, const Lattice& lattice,
                                  double search_radius,
                                  std::optional<double> lower_bound = std::nullopt);

/// rh_G(L): the homogeneous minimum of the group's reduced norm divided by
/// Vol(L)^{1/k}. `form_lower_bound` bounds the reduced norm on L as given.
MinimumResult reduced_hermite_invariant(const MatrixGroupSpec& group, const Lattice& lattice,
                                        double search_radius,
                                        std::optional<double> form_lower_bound = std::nullopt);

/// Nd_{p,min}(L) = min prod|x_i| / Vol(L)^{1/2}. `product_lower_bound` is a
/// proven lower bound of prod|x_i| over nonzero points of L as given.
MinimumResult normalized_product_distance(const Lattice& lattice, double search_radius,
                                          std::optional<double> product_lower_bound = std::nullopt);

/// prod_i |x_i|
double product_norm(const CVector& x);

namespace reference {

double reduced_norm_sq_numeric(const MatrixGroupSpec& group, const CVector& x, int iterations,
                               const NumericOptions& options = {});

}  // namespace reference

}  // namespace latfade
