#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "ballmaps/hermitian.hpp"

namespace ballmaps {

/// Raised when a request exceeds what the library supports, e.g. permutation
/// enumeration beyond n = 8 or origin-moving membership for l > 0.
class CapabilityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised by group_closure when the closure exceeds its cap.
class GroupClosureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// 0-based permutation; acts by (U z)_i = z_{perm[i]}.
using Permutation = std::vector<int>;

inline constexpr std::size_t kMaxPermutationDim = 8;

Matrix permutation_matrix(const Permutation& perm);
std::vector<Permutation> all_permutations(std::size_t n);

/// Subgroup {theta : v . theta in 2 pi Z for every lattice row v} of the
/// diagonal torus, described through a Smith normal form of the row lattice.
struct TorusSubgroup {
  std::size_t n = 0;
  /// Echelon basis of the integer row lattice.
  std::vector<std::vector<std::int64_t>> lattice;
  std::size_t torus_dim = 0;
  /// Invariant factors greater than one.
  std::vector<std::int64_t> finite_orders;
  /// Angle vectors generating the finite part, one per entry of finite_orders.
  std::vector<std::vector<double>> finite_generators;
  /// Integer directions spanning the identity component.
  std::vector<std::vector<std::int64_t>> torus_directions;

  bool is_full_torus() const { return torus_dim == n; }
  bool is_trivial() const { return torus_dim == 0 && finite_orders.empty(); }
  /// Product of finite_orders when the subgroup is finite; 0 otherwise.
  std::int64_t order() const;
  bool contains(std::span<const double> theta, double tol = 1e-9) const;
  std::vector<Matrix> generator_matrices() const;
};

/// Lattice machinery on explicit integer rows; exact int64 arithmetic with
/// overflow checks.
TorusSubgroup torus_subgroup(std::size_t n, const std::vector<std::vector<int>>& rows);

struct BlockPartition {
  /// 0-based variable indices; blocks ordered by their smallest member.
  std::vector<std::vector<std::size_t>> blocks;
};

struct MembershipResult {
  bool member = false;
  double c_gamma = 0.0;
  double residual = 0.0;
  double threshold = 0.0;
};

MembershipResult membership(const RationalMap& f, const BallAutomorphism& gamma, const Tolerances& tol = {});

TorusSubgroup diagonal_stabilizer(const RationalMap& f, const Tolerances& tol = {});
TorusSubgroup diagonal_stabilizer(const HermitianForm& h, const Tolerances& tol = {});

std::vector<Permutation> permutation_stabilizer(const RationalMap& f, const Tolerances& tol = {});

struct MonomialTerm {
  double weight = 0.0;
  MultiIndex exponent;
};

struct TorusTest {
  bool invariant = false;
  /// Present when f is a polynomial with f(0) = 0 and the test passes.
  std::optional<std::vector<MonomialTerm>> monomial_form;
};

TorusTest torus_test(const RationalMap& f, const Tolerances& tol = {});

struct PowerTerm {
  double weight = 0.0;
  int power = 0;
};

struct FullUnitaryTest {
  bool invariant = false;
  std::optional<std::vector<PowerTerm>> powers;
  /// True when a target automorphism moved f(0) to the origin first.
  bool target_normalized = false;
};

FullUnitaryTest full_unitary_test(const RationalMap& f, const Tolerances& tol = {});

BlockPartition block_partition(const RationalMap& f, const Tolerances& tol = {});
BlockPartition block_partition(const HermitianForm& h, const Tolerances& tol = {});

/// n - sum over blocks of (k_j - 1). With a conjugating automorphism the
/// partition of f o phi is used instead.
std::size_t source_rank_upper(const RationalMap& f, const std::optional<BallAutomorphism>& conjugator = std::nullopt,
                              const Tolerances& tol = {});

/// 0-based coordinates j for which z_j^k appears in f for every 1 <= k <= deg f.
std::set<std::size_t> power_chain_check(const RationalMap& f);

/// | (||p(a)||^2 - |q(a)|^2)(||p(Ua)||^2 - |q(Ua)|^2) - (1 - |a|^2)^(2d) |.
double eq15_residual(const RationalMap& f, const BallAutomorphism& gamma);

/// Breadth-first closure of the generated matrix group. Throws
/// GroupClosureError when more than cap elements appear.
std::vector<Matrix> group_closure(const std::vector<Matrix>& generators, std::size_t dim, std::size_t cap = 10000,
                                  double tol = 1e-7);

struct StrictStabilizer {
  TorusSubgroup diagonal;
  std::vector<Permutation> permutations;
  bool permutations_checked = true;
  /// Order of the group generated by the diagonal and permutation parts;
  /// empty when the diagonal part is infinite or closure failed.
  std::optional<std::size_t> order;
  std::vector<Matrix> generators;
};

StrictStabilizer strict_stabilizer(const RationalMap& f, const Tolerances& tol = {});

struct GroupReport {
  TorusTest torus;
  FullUnitaryTest full_unitary;
  BlockPartition blocks;
  TorusSubgroup diagonal;
  std::optional<std::vector<Permutation>> permutations;
  std::size_t source_rank_upper = 0;
  bool origin_moving_excluded = false;
  std::vector<std::string> notes;
};

GroupReport group_report(const RationalMap& f, const Tolerances& tol = {});

/// Polynomial equations in the entries of U in SU(n,1), row convention
/// x -> x U with x = (z, s). Unknowns are u_ab (row-major) followed by their
/// conjugates, so each equation is a polynomial in 2 (n+1)^2 variables.
struct InvarianceSystem {
  struct Equation {
    std::string kind;  // "invariance", "pseudo-unitary" or "determinant"
    MultiIndex x_alpha;
    MultiIndex x_beta;
    Polynomial poly;
  };

  std::size_t n = 0;
  int degree = 0;
  std::vector<std::string> unknowns;
  std::vector<Equation> equations;

  /// max |equation| at U with conjugates taken from U.
  double residual(const Matrix& u) const;
  /// Same, restricted to the invariance equations.
  double invariance_residual(const Matrix& u) const;
};

InvarianceSystem emit_invariance_system(const RationalMap& f);

}  // namespace ballmaps
