#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <map>
#include <span>
#include <stdexcept>
#include <vector>

namespace ballmaps {

using Complex = std::complex<double>;

/// Coefficients with magnitude at or below this are dropped from every
/// polynomial and form, so representations stay canonical after cancellation.
inline constexpr double kZeroThreshold = 1e-13;

/// Default relative equality tolerance for coefficient comparisons.
inline constexpr double kEqTolerance = 1e-9;

/// Raised when operands disagree on the number of variables or on a point's
/// dimension.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Exponent vector of a monomial. Ordered graded-lexicographically: lower
/// total degree first, then larger exponent of the earlier variable first,
/// so that 1 < z1 < z2 < z1^2 < z1 z2 < z2^2 < ...
class MultiIndex {
 public:
  MultiIndex() = default;
  explicit MultiIndex(std::size_t nvars) : exps_(nvars, 0) {}
  explicit MultiIndex(std::vector<int> exps);
  MultiIndex(std::initializer_list<int> exps) : MultiIndex(std::vector<int>(exps)) {}

  static MultiIndex unit(std::size_t nvars, std::size_t i);

  std::size_t size() const { return exps_.size(); }
  int operator[](std::size_t i) const { return exps_[i]; }
  int total() const { return total_; }
  const std::vector<int>& exponents() const { return exps_; }

  MultiIndex operator+(const MultiIndex& other) const;
  /// Componentwise difference; may contain negative entries, so the result is
  /// a plain integer vector rather than a MultiIndex.
  std::vector<int> difference(const MultiIndex& other) const;
  /// True when every entry of `other` is <= the matching entry here.
  bool divisible_by(const MultiIndex& other) const;
  MultiIndex minus(const MultiIndex& other) const;
  MultiIndex permuted(std::span<const int> perm) const;

  friend bool operator==(const MultiIndex& a, const MultiIndex& b) { return a.exps_ == b.exps_; }
  friend bool operator<(const MultiIndex& a, const MultiIndex& b);

 private:
  std::vector<int> exps_;
  int total_ = 0;
};

/// All multi-indices of length `nvars` with total degree exactly `degree`,
/// in graded-lex order.
std::vector<MultiIndex> monomials_of_degree(std::size_t nvars, int degree);

/// Multinomial coefficient |alpha|! / (alpha_1! ... alpha_n!).
double multinomial(const MultiIndex& alpha);

/// Sparse multivariate polynomial with complex binary64 coefficients.
class Polynomial {
 public:
  using TermMap = std::map<MultiIndex, Complex>;

  explicit Polynomial(std::size_t nvars = 1) : nvars_(nvars) {}

  static Polynomial constant(std::size_t nvars, Complex c);
  static Polynomial variable(std::size_t nvars, std::size_t i, Complex c = 1.0);
  static Polynomial monomial(const MultiIndex& exps, Complex c = 1.0);
  /// Linear form sum_i coeffs[i] z_i + c0.
  static Polynomial linear(std::span<const Complex> coeffs, Complex c0 = 0.0);

  std::size_t nvars() const { return nvars_; }
  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  /// Maximum total degree over stored terms; -1 for the zero polynomial.
  int degree() const { return degree_; }
  /// Minimum total degree over stored terms; -1 for the zero polynomial.
  int order() const;
  Complex coefficient(const MultiIndex& alpha) const;
  Complex constant_term() const;
  double max_abs_coefficient() const;

  /// Accumulates c into the coefficient of z^alpha, pruning the result.
  void add_term(const MultiIndex& alpha, Complex c);

  Polynomial homogeneous_part(int degree) const;
  /// Variable substitution z_i -> z_{perm[i]}.
  Polynomial permuted(std::span<const int> perm) const;
  Complex evaluate(std::span<const Complex> point) const;

  Polynomial& operator+=(const Polynomial& other);
  Polynomial& operator-=(const Polynomial& other);
  Polynomial& operator*=(Complex c);

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(Polynomial a, Complex c) { return a *= c; }
  friend Polynomial operator*(Complex c, Polynomial a) { return a *= c; }
  Polynomial operator-() const { return *this * Complex(-1.0); }

 private:
  void check_same(const Polynomial& other) const;
  void refresh_degree();

  std::size_t nvars_;
  TermMap terms_;
  int degree_ = -1;
};

Polynomial pow(const Polynomial& p, int k);

/// Cleared-denominator substitution
///   sum_alpha coeff(alpha) * prod_i numerators_i^alpha_i * denominator^(degree_bound - |alpha|).
/// All numerators and the denominator must share one variable count.
Polynomial substitute_fractional(const Polynomial& p, std::span<const Polynomial> numerators,
                                 const Polynomial& denominator, int degree_bound);

/// Largest |a_alpha - b_alpha| over the union of supports.
double max_coefficient_diff(const Polynomial& a, const Polynomial& b);

/// Coefficientwise |a-b| <= tol * max(1, |a|, |b|).
bool approx_equal(const Polynomial& a, const Polynomial& b, double tol = kEqTolerance);

}  // namespace ballmaps
