#pragma once

#include <map>
#include <utility>
#include <vector>

#include "ballmaps/maps.hpp"
#include "ballmaps/tolerances.hpp"

namespace ballmaps {

/// Real polynomial sum c_{ab} z^a conj(z)^b stored as its Hermitian
/// coefficient matrix. Both triangles are stored explicitly.
class HermitianForm {
 public:
  using Key = std::pair<MultiIndex, MultiIndex>;
  using EntryMap = std::map<Key, Complex>;

  explicit HermitianForm(std::size_t nvars = 1) : nvars_(nvars) {}

  static HermitianForm constant(std::size_t nvars, double c);
  /// |p|^2.
  static HermitianForm squared_modulus(const Polynomial& p);
  /// ||z||^2.
  static HermitianForm squared_norm(std::size_t nvars);
  /// rho = ||z||^2 - 1, the defining function of the sphere.
  static HermitianForm sphere(std::size_t nvars);
  /// Takes ownership of raw accumulated entries and prunes them.
  static HermitianForm from_entries(std::size_t nvars, EntryMap entries);

  std::size_t nvars() const { return nvars_; }
  const EntryMap& entries() const { return entries_; }
  bool is_zero() const { return entries_.empty(); }
  Complex entry(const MultiIndex& a, const MultiIndex& b) const;
  /// Adds c at (a, b) only; callers keep the matrix Hermitian.
  void add(const MultiIndex& a, const MultiIndex& b, Complex c);

  /// Largest max(|a|, |b|) over stored entries; -1 for the zero form.
  int bidegree() const;
  double max_abs() const;
  /// Monomials that index a nonzero row, in graded-lex order.
  std::vector<MultiIndex> basis() const;
  /// max |c_ab - conj(c_ba)|.
  double hermitian_defect() const;
  Complex evaluate(std::span<const Complex> z) const;
  /// Variable substitution z_i -> z_{perm[i]} in both z and conj(z).
  HermitianForm permuted(std::span<const int> perm) const;
  /// True when every stored entry has a == b.
  bool is_diagonal() const;

  HermitianForm& operator+=(const HermitianForm& other);
  HermitianForm& operator-=(const HermitianForm& other);
  HermitianForm& operator*=(double c);
  friend HermitianForm operator+(HermitianForm a, const HermitianForm& b) { return a += b; }
  friend HermitianForm operator-(HermitianForm a, const HermitianForm& b) { return a -= b; }
  friend HermitianForm operator*(HermitianForm a, double c) { return a *= c; }
  friend HermitianForm operator*(double c, HermitianForm a) { return a *= c; }
  friend HermitianForm operator*(const HermitianForm& a, const HermitianForm& b);

 private:
  void check_same(const HermitianForm& other) const;

  std::size_t nvars_;
  EntryMap entries_;
};

HermitianForm pow(const HermitianForm& h, int k);
double max_entry_diff(const HermitianForm& a, const HermitianForm& b);

/// H_l(f) = sum_{j<=m} |p_j|^2 - sum_{j>m} |p_j|^2 - |q|^2.
HermitianForm form_of(const RationalMap& f);
/// sum_j |p_j|^2 over the positive block only.
HermitianForm positive_part(const RationalMap& f);

struct SphereQuotient {
  HermitianForm quotient;
  HermitianForm remainder;
};

/// Division h = u (||z||^2 - 1) + remainder with u of bidegree below that of h.
SphereQuotient quotient_by_sphere(const HermitianForm& h);

struct ProperCertificate {
  bool proper = false;
  HermitianForm quotient;
  double residual = 0.0;   // max |remainder entry|
  double threshold = 0.0;  // tol.div * (1 + max |c|)
};

ProperCertificate is_proper(const RationalMap& f, const Tolerances& tol = {});

/// Eigenpairs of one connected block of the coefficient matrix.
struct EigenBlock {
  std::vector<MultiIndex> basis;
  Eigen::VectorXd values;
  Matrix vectors;  // columns, phase-normalized so the largest entry is real positive
};

/// Splits the coefficient matrix into connected components of its sparsity
/// pattern and diagonalizes each one.
std::vector<EigenBlock> eigen_blocks(const HermitianForm& h);

struct Signature {
  std::size_t positive = 0;
  std::size_t negative = 0;
  std::size_t zero = 0;
  double spectral_norm = 0.0;
  double threshold = 0.0;
  /// Smallest |eigenvalue| classified nonzero and largest classified zero,
  /// both relative to the spectral norm; borderline cases show up here.
  double min_nonzero_rel = 0.0;
  double max_zero_rel = 0.0;

  std::size_t rank() const { return positive + negative; }
};

Signature signature(const HermitianForm& h, const Tolerances& tol = {});
std::size_t hermitian_rank(const RationalMap& f, const Tolerances& tol = {});
/// rank of the stacked coefficient matrix of (p, q) minus one; ball targets only.
std::size_t image_rank(const RationalMap& f, const Tolerances& tol = {});

/// prod_j (c_j rho + w_j) - prod_j w_j with c_j = 1 - |a_j|^2 and
/// w_j = |1 - <z, a_j>|^2.
HermitianForm automorphism_tensor_form(const std::vector<Vector>& points);
/// Forms B_0..B_K with prod_j (c_j rho + w_j) = sum_k B_k rho^k.
std::vector<HermitianForm> automorphism_tensor_expansion(const std::vector<Vector>& points);

}  // namespace ballmaps
