#include "ballmaps/poly.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace ballmaps {

MultiIndex::MultiIndex(std::vector<int> exps) : exps_(std::move(exps)) {
  for (int e : exps_) {
    if (e < 0) throw std::invalid_argument("negative exponent in multi-index");
  }
  total_ = std::accumulate(exps_.begin(), exps_.end(), 0);
}

MultiIndex MultiIndex::unit(std::size_t nvars, std::size_t i) {
  std::vector<int> e(nvars, 0);
  e.at(i) = 1;
  return MultiIndex(std::move(e));
}

MultiIndex MultiIndex::operator+(const MultiIndex& other) const {
  if (size() != other.size()) throw DimensionError("multi-index length mismatch");
  MultiIndex r = *this;
  for (std::size_t i = 0; i < size(); ++i) r.exps_[i] += other.exps_[i];
  r.total_ = total_ + other.total_;
  return r;
}

std::vector<int> MultiIndex::difference(const MultiIndex& other) const {
  if (size() != other.size()) throw DimensionError("multi-index length mismatch");
  std::vector<int> d(size());
  for (std::size_t i = 0; i < size(); ++i) d[i] = exps_[i] - other.exps_[i];
  return d;
}

bool MultiIndex::divisible_by(const MultiIndex& other) const {
  if (size() != other.size()) return false;
  for (std::size_t i = 0; i < size(); ++i) {
    if (other.exps_[i] > exps_[i]) return false;
  }
  return true;
}

MultiIndex MultiIndex::minus(const MultiIndex& other) const {
  if (!divisible_by(other)) throw std::invalid_argument("multi-index subtraction would go negative");
  MultiIndex r = *this;
  for (std::size_t i = 0; i < size(); ++i) r.exps_[i] -= other.exps_[i];
  r.total_ = total_ - other.total_;
  return r;
}

MultiIndex MultiIndex::permuted(std::span<const int> perm) const {
  if (perm.size() != size()) throw DimensionError("permutation length mismatch");
  // z^alpha with z_i -> z_{perm[i]} gives exponent alpha_i on variable perm[i].
  std::vector<int> e(size(), 0);
  for (std::size_t i = 0; i < size(); ++i) e[static_cast<std::size_t>(perm[i])] += exps_[i];
  return MultiIndex(std::move(e));
}

bool operator<(const MultiIndex& a, const MultiIndex& b) {
  if (a.total_ != b.total_) return a.total_ < b.total_;
  // Same degree: larger leading exponent sorts first.
  return std::lexicographical_compare(b.exps_.begin(), b.exps_.end(), a.exps_.begin(), a.exps_.end());
}

namespace {

void enumerate_degree(std::size_t nvars, int degree, std::size_t pos, std::vector<int>& cur,
                      std::vector<MultiIndex>& out) {
  if (pos + 1 == nvars) {
    cur[pos] = degree;
    out.emplace_back(cur);
    return;
  }
  for (int e = degree; e >= 0; --e) {
    cur[pos] = e;
    enumerate_degree(nvars, degree - e, pos + 1, cur, out);
  }
}

}  // namespace

std::vector<MultiIndex> monomials_of_degree(std::size_t nvars, int degree) {
  std::vector<MultiIndex> out;
  if (nvars == 0 || degree < 0) return out;
  std::vector<int> cur(nvars, 0);
  enumerate_degree(nvars, degree, 0, cur, out);
  return out;
}

double multinomial(const MultiIndex& alpha) {
  double r = std::lgamma(alpha.total() + 1.0);
  for (std::size_t i = 0; i < alpha.size(); ++i) r -= std::lgamma(alpha[i] + 1.0);
  return std::round(std::exp(r));
}

Polynomial Polynomial::constant(std::size_t nvars, Complex c) {
  Polynomial p(nvars);
  p.add_term(MultiIndex(nvars), c);
  return p;
}

Polynomial Polynomial::variable(std::size_t nvars, std::size_t i, Complex c) {
  Polynomial p(nvars);
  p.add_term(MultiIndex::unit(nvars, i), c);
  return p;
}

Polynomial Polynomial::monomial(const MultiIndex& exps, Complex c) {
  Polynomial p(exps.size());
  p.add_term(exps, c);
  return p;
}

Polynomial Polynomial::linear(std::span<const Complex> coeffs, Complex c0) {
  Polynomial p(coeffs.size());
  p.add_term(MultiIndex(coeffs.size()), c0);
  for (std::size_t i = 0; i < coeffs.size(); ++i) p.add_term(MultiIndex::unit(coeffs.size(), i), coeffs[i]);
  return p;
}

int Polynomial::order() const { return terms_.empty() ? -1 : terms_.begin()->first.total(); }

Complex Polynomial::coefficient(const MultiIndex& alpha) const {
  auto it = terms_.find(alpha);
  return it == terms_.end() ? Complex(0.0) : it->second;
}

Complex Polynomial::constant_term() const { return coefficient(MultiIndex(nvars_)); }

double Polynomial::max_abs_coefficient() const {
  double m = 0.0;
  for (const auto& [_, c] : terms_) m = std::max(m, std::abs(c));
  return m;
}

void Polynomial::add_term(const MultiIndex& alpha, Complex c) {
  if (alpha.size() != nvars_) throw DimensionError("term has wrong number of variables");
  auto [it, inserted] = terms_.try_emplace(alpha, c);
  if (!inserted) it->second += c;
  if (std::abs(it->second) <= kZeroThreshold) {
    terms_.erase(it);
    refresh_degree();
  } else {
    degree_ = std::max(degree_, alpha.total());
  }
}

void Polynomial::refresh_degree() { degree_ = terms_.empty() ? -1 : terms_.rbegin()->first.total(); }

Polynomial Polynomial::homogeneous_part(int degree) const {
  Polynomial r(nvars_);
  for (const auto& [alpha, c] : terms_) {
    if (alpha.total() == degree) r.terms_.emplace_hint(r.terms_.end(), alpha, c);
  }
  r.refresh_degree();
  return r;
}

Polynomial Polynomial::permuted(std::span<const int> perm) const {
  Polynomial r(nvars_);
  for (const auto& [alpha, c] : terms_) r.add_term(alpha.permuted(perm), c);
  return r;
}

Complex Polynomial::evaluate(std::span<const Complex> point) const {
  if (point.size() != nvars_) throw DimensionError("evaluation point has wrong dimension");
  Complex sum = 0.0;
  for (const auto& [alpha, c] : terms_) {
    Complex m = c;
    for (std::size_t i = 0; i < nvars_; ++i) {
      for (int k = 0; k < alpha[i]; ++k) m *= point[i];
    }
    sum += m;
  }
  return sum;
}

void Polynomial::check_same(const Polynomial& other) const {
  if (nvars_ != other.nvars_) {
    throw DimensionError("polynomial variable-count mismatch: " + std::to_string(nvars_) + " vs " +
                         std::to_string(other.nvars_));
  }
}

Polynomial& Polynomial::operator+=(const Polynomial& other) {
  check_same(other);
  for (const auto& [alpha, c] : other.terms_) add_term(alpha, c);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& other) {
  check_same(other);
  for (const auto& [alpha, c] : other.terms_) add_term(alpha, -c);
  return *this;
}

Polynomial& Polynomial::operator*=(Complex c) {
  for (auto it = terms_.begin(); it != terms_.end();) {
    it->second *= c;
    if (std::abs(it->second) <= kZeroThreshold) {
      it = terms_.erase(it);
    } else {
      ++it;
    }
  }
  refresh_degree();
  return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  a.check_same(b);
  // Accumulate without pruning so that partial sums that pass through zero
  // are not lost; prune once at the end.
  Polynomial::TermMap acc;
  for (const auto& [alpha, ca] : a.terms_) {
    for (const auto& [beta, cb] : b.terms_) acc[alpha + beta] += ca * cb;
  }
  Polynomial r(a.nvars_);
  for (auto& [gamma, c] : acc) {
    if (std::abs(c) > kZeroThreshold) r.terms_.emplace_hint(r.terms_.end(), gamma, c);
  }
  r.refresh_degree();
  return r;
}

Polynomial pow(const Polynomial& p, int k) {
  if (k < 0) throw std::invalid_argument("negative polynomial power");
  Polynomial result = Polynomial::constant(p.nvars(), 1.0);
  Polynomial base = p;
  while (k > 0) {
    if (k & 1) result = result * base;
    k >>= 1;
    if (k > 0) base = base * base;
  }
  return result;
}

Polynomial substitute_fractional(const Polynomial& p, std::span<const Polynomial> numerators,
                                 const Polynomial& denominator, int degree_bound) {
  if (numerators.size() != p.nvars()) throw DimensionError("substitution needs one numerator per variable");
  if (degree_bound < p.degree()) throw std::invalid_argument("degree bound below polynomial degree");
  const std::size_t m = denominator.nvars();
  for (const auto& q : numerators) {
    if (q.nvars() != m) throw DimensionError("substitution numerators disagree on variable count");
  }

  // Power caches keep repeated exponents cheap.
  std::vector<std::vector<Polynomial>> num_pows(numerators.size());
  auto num_pow = [&](std::size_t i, int k) -> const Polynomial& {
    auto& cache = num_pows[i];
    if (cache.empty()) cache.push_back(Polynomial::constant(m, 1.0));
    while (static_cast<int>(cache.size()) <= k) cache.push_back(cache.back() * numerators[i]);
    return cache[static_cast<std::size_t>(k)];
  };
  std::vector<Polynomial> den_pows{Polynomial::constant(m, 1.0)};
  auto den_pow = [&](int k) -> const Polynomial& {
    while (static_cast<int>(den_pows.size()) <= k) den_pows.push_back(den_pows.back() * denominator);
    return den_pows[static_cast<std::size_t>(k)];
  };

  Polynomial result(m);
  for (const auto& [alpha, c] : p.terms()) {
    Polynomial term = Polynomial::constant(m, c);
    for (std::size_t i = 0; i < alpha.size(); ++i) {
      if (alpha[i] > 0) term = term * num_pow(i, alpha[i]);
    }
    term = term * den_pow(degree_bound - alpha.total());
    result += term;
  }
  return result;
}

double max_coefficient_diff(const Polynomial& a, const Polynomial& b) {
  double m = 0.0;
  for (const auto& [alpha, c] : a.terms()) m = std::max(m, std::abs(c - b.coefficient(alpha)));
  for (const auto& [alpha, c] : b.terms()) m = std::max(m, std::abs(c - a.coefficient(alpha)));
  return m;
}

bool approx_equal(const Polynomial& a, const Polynomial& b, double tol) {
  if (a.nvars() != b.nvars()) return false;
  auto close = [tol](Complex x, Complex y) {
    return std::abs(x - y) <= tol * std::max({1.0, std::abs(x), std::abs(y)});
  };
  for (const auto& [alpha, c] : a.terms()) {
    if (!close(c, b.coefficient(alpha))) return false;
  }
  for (const auto& [alpha, c] : b.terms()) {
    if (!close(c, a.coefficient(alpha))) return false;
  }
  return true;
}

}  // namespace ballmaps
