#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "ballmaps/poly.hpp"

namespace ballmaps {

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Rational map p/q from B^n into the generalized ball B^N_l, N = m + l.
/// The first m numerator components carry a plus sign in ||.||_l^2 and the
/// last l components a minus sign. Always normalized so that q(0) = 1;
/// lowest-terms status is the caller's assertion.
class RationalMap {
 public:
  std::size_t n() const { return n_; }
  std::size_t m() const { return numerator_.size() - l_; }
  std::size_t l() const { return l_; }
  std::size_t target_dim() const { return numerator_.size(); }
  const std::vector<Polynomial>& numerator() const { return numerator_; }
  const Polynomial& denominator() const { return denominator_; }

  /// max(deg numerator components, deg denominator), never below 0.
  int degree() const;
  bool is_polynomial() const;
  /// Value of p(0), i.e. f(0) since q(0) = 1.
  Vector value_at_origin() const;
  /// Evaluates f(z) = p(z)/q(z).
  Vector evaluate(std::span<const Complex> z) const;
  /// Human-readable notes on soft invariants, e.g. deg q > d - 1 for a map
  /// with f(0) = 0.
  std::vector<std::string> warnings() const;

  friend RationalMap make_rational_map(std::vector<Polynomial> numerator, Polynomial denominator,
                                       std::size_t l);

 private:
  RationalMap() = default;

  std::size_t n_ = 0;
  std::size_t l_ = 0;
  std::vector<Polynomial> numerator_;
  Polynomial denominator_;
};

/// Builds a map and rescales both parts by 1/q(0). Throws if q(0) = 0, the
/// numerator is empty, or variable counts disagree.
RationalMap make_rational_map(std::vector<Polynomial> numerator, Polynomial denominator,
                              std::size_t l = 0);
RationalMap make_polynomial_map(std::vector<Polynomial> components, std::size_t l = 0);

/// Automorphism gamma = U o phi_a of B^n, with
///   phi_a(z) = (a - L_a z) / (1 - <z,a>),  L_a z = <z,a> a/(s+1) + s z,
///   s = sqrt(1 - ||a||^2).
/// For a = 0 the automorphism is z -> Uz (the formula alone would give -Uz).
class BallAutomorphism {
 public:
  BallAutomorphism(Matrix u, Vector a, double tol = kEqTolerance);

  static BallAutomorphism identity(std::size_t dim);
  static BallAutomorphism unitary(Matrix u) { return BallAutomorphism(std::move(u), Vector::Zero(0)); }
  static BallAutomorphism phi(Vector a);
  /// Recovers (U, a) from an (n+1)x(n+1) matrix acting on homogeneous
  /// column vectors [z; 1]; the matrix is only meaningful up to scale.
  static BallAutomorphism from_matrix(const Matrix& m, double tol = kEqTolerance);

  std::size_t dim() const { return static_cast<std::size_t>(u_.rows()); }
  const Matrix& u() const { return u_; }
  const Vector& a() const { return a_; }
  double s() const { return s_; }
  bool is_unitary() const { return a_.norm() == 0.0; }

  Matrix l_a() const;
  Vector l_a(const Vector& z) const;
  Vector apply(const Vector& z) const;
  /// Matrix M with gamma([z;1]) = M [z;1] projectively.
  Matrix matrix() const;
  /// Representative of gamma in SU(n,1) acting on row vectors (z, s) -> (z, s) U.
  Matrix su_row_matrix() const;
  BallAutomorphism inverse() const;

 private:
  Matrix u_;
  Vector a_;
  double s_ = 1.0;
};

/// this o other, i.e. z -> first(second(z)).
BallAutomorphism compose(const BallAutomorphism& first, const BallAutomorphism& second);

/// Linear subspace of C^N with an orthonormal basis stored as matrix columns.
class Subspace {
 public:
  /// Orthonormalizes the span of the given column vectors; vectors whose
  /// residual norm falls below tol are treated as dependent.
  static Subspace span(std::size_t ambient, const std::vector<Vector>& vectors, double tol = 1e-10);
  static Subspace coordinate(std::size_t ambient, const std::vector<std::size_t>& indices);

  std::size_t ambient() const { return ambient_; }
  std::size_t dim() const { return static_cast<std::size_t>(basis_.cols()); }
  const Matrix& basis() const { return basis_; }
  /// Orthonormal basis of the orthogonal complement, built by projecting the
  /// standard basis vectors e_1..e_N in order.
  Subspace complement(double tol = 1e-10) const;

 private:
  std::size_t ambient_ = 0;
  Matrix basis_;
};

/// Rational map z -> gamma(z).
RationalMap automorphism_map(const BallAutomorphism& gamma);
RationalMap identity_map(std::size_t n);

/// f o gamma, renormalized so the new denominator is 1 at the origin.
RationalMap compose_source(const RationalMap& f, const BallAutomorphism& gamma);
/// psi o f for a ball target (l = 0).
RationalMap compose_target(const RationalMap& f, const BallAutomorphism& psi);

/// All products p_i(f) p_j(g), (i, j) in lexicographic order; denominator q_f q_g.
RationalMap tensor(const RationalMap& f, const RationalMap& g);
/// (c f) oplus (s g). Positive blocks of both maps come first, then the
/// negative blocks, so the result keeps the (m, l) layout. Denominators must agree.
RationalMap oplus(const RationalMap& f, const RationalMap& g, Complex c = 1.0, Complex s = 1.0);
/// f oplus 0 with k zero components appended to the positive block.
RationalMap pad_zero(const RationalMap& f, std::size_t k);
RationalMap juxtapose_theta(const RationalMap& f, const RationalMap& g, double theta);
RationalMap juxtapose_lambda(const std::vector<RationalMap>& maps, const std::vector<Complex>& lambda,
                             double tol = kEqTolerance);

/// E_{A,g} f: the complement part (1 - pi_A) f in coordinates of A's
/// complement basis, followed by (pi_A f) tensor g in coordinates of A's basis.
RationalMap descend(const RationalMap& f, const Subspace& a, const RationalMap& g);
/// Orthonormalized span of the coefficient vectors of the lowest-order
/// homogeneous part of a polynomial map.
Subspace lowest_order_subspace(const RationalMap& f, double tol = 1e-10);

/// z^{tensor m} with components sqrt(multinomial) z^alpha over |alpha| = m.
RationalMap tensor_power(std::size_t n, int m);
/// (z_1, ..., z_{n-1}, z_1 z_n, ..., z_{n-1} z_n, z_n^2).
RationalMap whitney(std::size_t n);

/// Fixture maps by stable name: faran-1..faran-4, example-3-1, example-7-2,
/// corollary-6-2, remark-4-1, whitney-seq-<k>, example-7-4-f, example-7-4-g.
/// The example-7-4 families take theta (default pi/4).
RationalMap catalog(const std::string& name, std::optional<double> theta = std::nullopt);
std::vector<std::string> catalog_names();

}  // namespace ballmaps
