#pragma once

#include <optional>
#include <vector>

#include "ballmaps/hermitian.hpp"
#include "ballmaps/invariance.hpp"

namespace ballmaps {

/// h = sum |positive_i|^2 - sum |negative_j|^2.
struct FactorizationResult {
  std::vector<Polynomial> positive;
  std::vector<Polynomial> negative;
};

/// Eigenvectors scaled by sqrt|eigenvalue| become the components. Eigenvalues
/// with |v| <= drop_rel * max |v| are dropped.
FactorizationResult factor_form(const HermitianForm& h, double drop_rel);
FactorizationResult factor_form(const HermitianForm& h, const Tolerances& tol = {});

struct PadResult {
  double epsilon = 0.0;
  /// Largest admissible epsilon found by bisection (equals epsilon when supplied).
  double epsilon_sup = 0.0;
  std::vector<Polynomial> q;
  std::vector<double> lambda;
  std::vector<int> powers;
  /// epsilon p (+) q.
  RationalMap map;
};

struct PadOptions {
  std::optional<double> epsilon;
  /// Squared weights indexed by degree; overrides the equal weights over the
  /// degrees present in p. Must sum to one.
  std::optional<std::vector<double>> weights;
};

/// Finds epsilon and q with eps^2 ||p||^2 + ||q||^2 = sum lambda_j^2 ||z||^(2 m_j).
PadResult pad_to_proper(std::size_t n, const std::vector<Polynomial>& p, const PadOptions& options = {});
PadResult pad_to_proper(const RationalMap& p, const PadOptions& options = {});

/// A polynomial map whose squared norm is h; h must be positive semidefinite.
RationalMap map_from_psd_form(const HermitianForm& h, double drop_rel = 1e-13);

/// A map with squared norm ||q||^2 ||z||^(2k), built from the form instead of
/// the explicit tensor product. Unitarily equivalent to q (x) z^(x)k plus zeros.
RationalMap tensor_with_power(const std::vector<Polynomial>& q, std::size_t n, int k);

/// Degree-3 map with invariant group S_n; n = 1 gives the corollary-6-2 fixture.
RationalMap symmetric_group_map(std::size_t n);
/// Higher-degree alternative built from prod (1 + z_j).
RationalMap symmetric_group_map_v2(std::size_t n);

/// Map whose invariant group is the permutation group generated by the
/// 0-based permutations in generators.
RationalMap realize_subgroup(std::size_t n, const std::vector<Permutation>& generators);

/// Map whose invariant group is the finite unitary group generated by
/// generators, given generators h_i of its invariant algebra with h_i(0) = 0.
RationalMap realize_from_invariants(std::size_t n, const std::vector<Polynomial>& invariants,
                                    const std::vector<Matrix>& generators);

/// Closure of the generated permutation group.
std::vector<Permutation> permutation_group(std::size_t n, const std::vector<Permutation>& generators);

}  // namespace ballmaps
