#include "ballmaps/maps.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace ballmaps {

namespace {

void check_nvars(const std::vector<Polynomial>& ps, const Polynomial& q) {
  for (const auto& p : ps) {
    if (p.nvars() != q.nvars()) throw DimensionError("map components disagree on variable count");
  }
}

bool same_polynomial(const Polynomial& a, const Polynomial& b) { return approx_equal(a, b, kEqTolerance); }

}  // namespace

RationalMap make_rational_map(std::vector<Polynomial> numerator, Polynomial denominator, std::size_t l) {
  if (numerator.empty()) throw std::invalid_argument("rational map needs at least one numerator component");
  if (l > numerator.size()) throw std::invalid_argument("negative block larger than target dimension");
  check_nvars(numerator, denominator);
  const Complex q0 = denominator.constant_term();
  if (std::abs(q0) <= kZeroThreshold) throw std::domain_error("denominator vanishes at the origin");
  RationalMap f;
  f.n_ = denominator.nvars();
  f.l_ = l;
  const Complex inv = 1.0 / q0;
  for (auto& p : numerator) p *= inv;
  denominator *= inv;
  // Pin q(0) to exactly 1 after rounding.
  denominator.add_term(MultiIndex(f.n_), 1.0 - denominator.constant_term());
  f.numerator_ = std::move(numerator);
  f.denominator_ = std::move(denominator);
  return f;
}

RationalMap make_polynomial_map(std::vector<Polynomial> components, std::size_t l) {
  if (components.empty()) throw std::invalid_argument("polynomial map needs at least one component");
  const std::size_t n = components.front().nvars();
  return make_rational_map(std::move(components), Polynomial::constant(n, 1.0), l);
}

int RationalMap::degree() const {
  int d = std::max(0, denominator_.degree());
  for (const auto& p : numerator_) d = std::max(d, p.degree());
  return d;
}

bool RationalMap::is_polynomial() const { return denominator_.degree() <= 0; }

Vector RationalMap::value_at_origin() const {
  Vector v(static_cast<Eigen::Index>(target_dim()));
  for (std::size_t j = 0; j < target_dim(); ++j) v(static_cast<Eigen::Index>(j)) = numerator_[j].constant_term();
  return v;
}

Vector RationalMap::evaluate(std::span<const Complex> z) const {
  const Complex q = denominator_.evaluate(z);
  Vector v(static_cast<Eigen::Index>(target_dim()));
  for (std::size_t j = 0; j < target_dim(); ++j) v(static_cast<Eigen::Index>(j)) = numerator_[j].evaluate(z) / q;
  return v;
}

std::vector<std::string> RationalMap::warnings() const {
  std::vector<std::string> out;
  const int d = degree();
  if (d >= 1 && value_at_origin().norm() <= kEqTolerance && denominator_.degree() > d - 1) {
    std::ostringstream os;
    os << "denominator degree " << denominator_.degree() << " exceeds d - 1 = " << d - 1
       << " for a map with f(0) = 0; not a proper map in lowest terms";
    out.push_back(os.str());
  }
  return out;
}

// ---------------------------------------------------------------------------
// Automorphisms

BallAutomorphism::BallAutomorphism(Matrix u, Vector a, double tol) : u_(std::move(u)), a_(std::move(a)) {
  if (u_.rows() != u_.cols()) throw DimensionError("automorphism matrix must be square");
  if (a_.size() == 0) a_ = Vector::Zero(u_.rows());
  if (a_.size() != u_.rows()) throw DimensionError("automorphism point has wrong dimension");
  const double norm_a = a_.norm();
  if (norm_a >= 1.0) throw std::domain_error("automorphism point must lie in the open unit ball");
  const Matrix defect = u_.adjoint() * u_ - Matrix::Identity(u_.rows(), u_.cols());
  if (defect.cwiseAbs().maxCoeff() > tol) throw std::domain_error("automorphism matrix is not unitary");
  s_ = std::sqrt(1.0 - norm_a * norm_a);
}

BallAutomorphism BallAutomorphism::identity(std::size_t dim) {
  const auto d = static_cast<Eigen::Index>(dim);
  return BallAutomorphism(Matrix::Identity(d, d), Vector::Zero(d));
}

BallAutomorphism BallAutomorphism::phi(Vector a) {
  const auto d = a.size();
  return BallAutomorphism(Matrix::Identity(d, d), std::move(a));
}

Matrix BallAutomorphism::l_a() const {
  const auto d = u_.rows();
  return a_ * a_.adjoint() / (s_ + 1.0) + s_ * Matrix::Identity(d, d);
}

Vector BallAutomorphism::l_a(const Vector& z) const { return l_a() * z; }

Vector BallAutomorphism::apply(const Vector& z) const {
  if (z.size() != u_.rows()) throw DimensionError("point has wrong dimension");
  if (is_unitary()) return u_ * z;
  const Complex za = a_.dot(z);  // <z,a> = sum z_i conj(a_i)
  return u_ * (a_ - l_a(z)) / (1.0 - za);
}

Matrix BallAutomorphism::matrix() const {
  const auto d = u_.rows();
  Matrix m = Matrix::Zero(d + 1, d + 1);
  m(d, d) = 1.0;
  if (is_unitary()) {
    m.topLeftCorner(d, d) = u_;
    return m;
  }
  m.topLeftCorner(d, d) = -u_ * l_a();
  m.topRightCorner(d, 1) = u_ * a_;
  m.bottomLeftCorner(1, d) = -a_.adjoint();
  return m;
}

Matrix BallAutomorphism::su_row_matrix() const {
  const auto d = u_.rows();
  Matrix m = matrix();
  Matrix j = Matrix::Identity(d + 1, d + 1);
  j(d, d) = -1.0;
  // M^* J M = kappa J with kappa > 0.
  const double kappa = -(m.adjoint() * j * m)(d, d).real();
  m /= std::sqrt(kappa);
  const Complex det = m.determinant();
  m *= std::polar(1.0, -std::arg(det) / static_cast<double>(d + 1));
  return m.transpose();
}

BallAutomorphism BallAutomorphism::from_matrix(const Matrix& m, double tol) {
  const auto d = m.rows() - 1;
  if (m.rows() != m.cols() || d < 1) throw DimensionError("homogeneous matrix must be square of size n+1");
  // With b = gamma^{-1}(0), gamma o phi_b fixes the origin and is therefore a
  // unitary V; phi_b is an involution, so gamma = V o phi_b.
  const Matrix inv = m.inverse();
  const Complex inv_last = inv(d, d);
  if (std::abs(inv_last) <= kZeroThreshold) throw std::domain_error("matrix does not preserve the ball");
  Vector b = inv.topRightCorner(d, 1) / inv_last;  // gamma^{-1}(0)
  if (b.norm() >= 1.0) throw std::domain_error("matrix does not preserve the ball");
  if (b.norm() <= 1e-14) {
    Matrix u = m.topLeftCorner(d, d) / m(d, d);
    return BallAutomorphism(std::move(u), Vector::Zero(d), tol);
  }
  const BallAutomorphism pb = phi(b);
  const Matrix lin = m * pb.matrix();  // gamma o phi_b fixes 0
  const Complex scale = lin(d, d);
  Matrix u = lin.topLeftCorner(d, d) / scale;
  return BallAutomorphism(std::move(u), std::move(b), tol);
}

BallAutomorphism BallAutomorphism::inverse() const { return from_matrix(matrix().inverse()); }

BallAutomorphism compose(const BallAutomorphism& first, const BallAutomorphism& second) {
  if (first.dim() != second.dim()) throw DimensionError("automorphism dimension mismatch");
  return BallAutomorphism::from_matrix(first.matrix() * second.matrix());
}

// ---------------------------------------------------------------------------
// Subspaces

Subspace Subspace::span(std::size_t ambient, const std::vector<Vector>& vectors, double tol) {
  Subspace s;
  s.ambient_ = ambient;
  std::vector<Vector> kept;
  for (const auto& v : vectors) {
    if (static_cast<std::size_t>(v.size()) != ambient) throw DimensionError("subspace vector has wrong dimension");
    Vector w = v;
    // Two passes of Gram-Schmidt for numerical orthogonality.
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& e : kept) w -= e * e.dot(w);
    }
    const double nrm = w.norm();
    if (nrm > tol * std::max(1.0, v.norm())) kept.push_back(w / nrm);
  }
  s.basis_ = Matrix(static_cast<Eigen::Index>(ambient), static_cast<Eigen::Index>(kept.size()));
  for (std::size_t k = 0; k < kept.size(); ++k) s.basis_.col(static_cast<Eigen::Index>(k)) = kept[k];
  return s;
}

Subspace Subspace::coordinate(std::size_t ambient, const std::vector<std::size_t>& indices) {
  std::vector<Vector> vs;
  for (std::size_t i : indices) {
    if (i >= ambient) throw DimensionError("coordinate index out of range");
    Vector e = Vector::Zero(static_cast<Eigen::Index>(ambient));
    e(static_cast<Eigen::Index>(i)) = 1.0;
    vs.push_back(e);
  }
  return span(ambient, vs);
}

Subspace Subspace::complement(double tol) const {
  std::vector<Vector> vs;
  for (Eigen::Index k = 0; k < basis_.cols(); ++k) vs.push_back(basis_.col(k));
  const std::size_t keep_from = vs.size();
  Subspace full = span(ambient_, vs, tol);
  std::vector<Vector> basis_vecs;
  for (Eigen::Index k = 0; k < full.basis_.cols(); ++k) basis_vecs.push_back(full.basis_.col(k));
  for (std::size_t i = 0; i < ambient_; ++i) {
    Vector e = Vector::Zero(static_cast<Eigen::Index>(ambient_));
    e(static_cast<Eigen::Index>(i)) = 1.0;
    basis_vecs.push_back(e);
  }
  Subspace all = span(ambient_, basis_vecs, 1e-8);
  Subspace out;
  out.ambient_ = ambient_;
  const auto start = static_cast<Eigen::Index>(std::min<std::size_t>(keep_from, full.dim()));
  out.basis_ = all.basis_.rightCols(all.basis_.cols() - start);
  return out;
}

// ---------------------------------------------------------------------------
// Map constructions

RationalMap identity_map(std::size_t n) {
  std::vector<Polynomial> comps;
  for (std::size_t i = 0; i < n; ++i) comps.push_back(Polynomial::variable(n, i));
  return make_polynomial_map(std::move(comps));
}

namespace {

// Rows of the homogeneous matrix as linear polynomials: numerators from the
// first n rows, the denominator from the last.
std::pair<std::vector<Polynomial>, Polynomial> automorphism_parts(const BallAutomorphism& gamma) {
  const auto n = static_cast<Eigen::Index>(gamma.dim());
  const Matrix m = gamma.matrix();
  auto row = [&](Eigen::Index i) {
    std::vector<Complex> coeffs(static_cast<std::size_t>(n));
    for (Eigen::Index j = 0; j < n; ++j) coeffs[static_cast<std::size_t>(j)] = m(i, j);
    return Polynomial::linear(coeffs, m(i, n));
  };
  std::vector<Polynomial> nums;
  for (Eigen::Index i = 0; i < n; ++i) nums.push_back(row(i));
  return {std::move(nums), row(n)};
}

}  // namespace

RationalMap automorphism_map(const BallAutomorphism& gamma) {
  auto [nums, den] = automorphism_parts(gamma);
  return make_rational_map(std::move(nums), std::move(den));
}

RationalMap compose_source(const RationalMap& f, const BallAutomorphism& gamma) {
  if (gamma.dim() != f.n()) throw DimensionError("source automorphism dimension differs from map source");
  const auto [nums, den] = automorphism_parts(gamma);
  const int d = f.degree();
  std::vector<Polynomial> new_num;
  new_num.reserve(f.target_dim());
  for (const auto& p : f.numerator()) new_num.push_back(substitute_fractional(p, nums, den, d));
  Polynomial new_den = substitute_fractional(f.denominator(), nums, den, d);
  if (std::abs(new_den.constant_term()) <= kEqTolerance) {
    throw std::domain_error("composed denominator vanishes at the origin");
  }
  return make_rational_map(std::move(new_num), std::move(new_den), f.l());
}

RationalMap compose_target(const RationalMap& f, const BallAutomorphism& psi) {
  if (f.l() != 0) throw std::domain_error("target automorphisms are supported only for ball targets (l = 0)");
  if (psi.dim() != f.target_dim()) throw DimensionError("target automorphism dimension differs from map target");
  const auto big_n = static_cast<Eigen::Index>(f.target_dim());
  const Matrix m = psi.matrix();
  // Homogeneous action on (p, q): row i of M applied to the column (p; q).
  auto row = [&](Eigen::Index i) {
    Polynomial acc = f.denominator() * m(i, big_n);
    for (Eigen::Index j = 0; j < big_n; ++j) {
      if (m(i, j) != Complex(0.0)) acc += f.numerator()[static_cast<std::size_t>(j)] * m(i, j);
    }
    return acc;
  };
  std::vector<Polynomial> num;
  for (Eigen::Index i = 0; i < big_n; ++i) num.push_back(row(i));
  Polynomial den = row(big_n);
  return make_rational_map(std::move(num), std::move(den), 0);
}

RationalMap tensor(const RationalMap& f, const RationalMap& g) {
  if (f.n() != g.n()) throw DimensionError("tensor product needs a common source");
  if (f.l() != 0 || g.l() != 0) throw std::domain_error("tensor product is defined here only for ball targets");
  std::vector<Polynomial> num;
  num.reserve(f.target_dim() * g.target_dim());
  for (const auto& p : f.numerator()) {
    for (const auto& r : g.numerator()) num.push_back(p * r);
  }
  return make_rational_map(std::move(num), f.denominator() * g.denominator());
}

RationalMap oplus(const RationalMap& f, const RationalMap& g, Complex c, Complex s) {
  if (f.n() != g.n()) throw DimensionError("orthogonal sum needs a common source");
  if (!same_polynomial(f.denominator(), g.denominator())) {
    throw std::domain_error("orthogonal sum of maps with different denominators is not supported");
  }
  std::vector<Polynomial> num;
  const auto& pf = f.numerator();
  const auto& pg = g.numerator();
  for (std::size_t j = 0; j < f.m(); ++j) num.push_back(pf[j] * c);
  for (std::size_t j = 0; j < g.m(); ++j) num.push_back(pg[j] * s);
  for (std::size_t j = f.m(); j < pf.size(); ++j) num.push_back(pf[j] * c);
  for (std::size_t j = g.m(); j < pg.size(); ++j) num.push_back(pg[j] * s);
  return make_rational_map(std::move(num), f.denominator(), f.l() + g.l());
}

RationalMap pad_zero(const RationalMap& f, std::size_t k) {
  std::vector<Polynomial> num;
  for (std::size_t j = 0; j < f.m(); ++j) num.push_back(f.numerator()[j]);
  for (std::size_t j = 0; j < k; ++j) num.emplace_back(f.n());
  for (std::size_t j = f.m(); j < f.target_dim(); ++j) num.push_back(f.numerator()[j]);
  return make_rational_map(std::move(num), f.denominator(), f.l());
}

RationalMap juxtapose_theta(const RationalMap& f, const RationalMap& g, double theta) {
  return oplus(f, g, std::cos(theta), std::sin(theta));
}

RationalMap juxtapose_lambda(const std::vector<RationalMap>& maps, const std::vector<Complex>& lambda,
                             double tol) {
  if (maps.empty() || maps.size() != lambda.size()) {
    throw std::invalid_argument("juxtaposition needs one weight per map");
  }
  double norm2 = 0.0;
  for (const auto& w : lambda) norm2 += std::norm(w);
  if (std::abs(norm2 - 1.0) > tol) throw std::invalid_argument("juxtaposition weights must have unit norm");
  std::vector<Polynomial> pos;
  std::vector<Polynomial> neg;
  std::size_t l = 0;
  for (std::size_t k = 0; k < maps.size(); ++k) {
    const auto& f = maps[k];
    if (f.n() != maps.front().n()) throw DimensionError("juxtaposition needs a common source");
    if (!same_polynomial(f.denominator(), maps.front().denominator())) {
      throw std::domain_error("juxtaposition of maps with different denominators is not supported");
    }
    for (std::size_t j = 0; j < f.m(); ++j) pos.push_back(f.numerator()[j] * lambda[k]);
    for (std::size_t j = f.m(); j < f.target_dim(); ++j) neg.push_back(f.numerator()[j] * lambda[k]);
    l += f.l();
  }
  pos.insert(pos.end(), neg.begin(), neg.end());
  return make_rational_map(std::move(pos), maps.front().denominator(), l);
}

namespace {

// Coordinates <p, e_k> = sum_j p_j conj(e_kj) of the numerator in a basis.
std::vector<Polynomial> project(const std::vector<Polynomial>& p, const Matrix& basis, std::size_t n) {
  std::vector<Polynomial> out;
  for (Eigen::Index k = 0; k < basis.cols(); ++k) {
    Polynomial acc(n);
    for (std::size_t j = 0; j < p.size(); ++j) {
      const Complex c = std::conj(basis(static_cast<Eigen::Index>(j), k));
      if (std::abs(c) > 0.0) acc += p[j] * c;
    }
    out.push_back(std::move(acc));
  }
  return out;
}

}  // namespace

RationalMap descend(const RationalMap& f, const Subspace& a, const RationalMap& g) {
  if (a.ambient() != f.target_dim()) throw DimensionError("subspace ambient dimension differs from map target");
  if (f.n() != g.n()) throw DimensionError("descendant needs a common source");
  if (f.l() != 0 || g.l() != 0) throw std::domain_error("descendants are defined here only for ball targets");
  const std::size_t n = f.n();
  const auto inside = project(f.numerator(), a.basis(), n);
  const auto outside = project(f.numerator(), a.complement().basis(), n);
  // Common denominator q_f q_g: the untouched part picks up a factor q_g.
  std::vector<Polynomial> num;
  for (const auto& p : outside) num.push_back(p * g.denominator());
  for (const auto& p : inside) {
    for (const auto& r : g.numerator()) num.push_back(p * r);
  }
  if (num.empty()) num.emplace_back(n);
  return make_rational_map(std::move(num), f.denominator() * g.denominator());
}

Subspace lowest_order_subspace(const RationalMap& f, double tol) {
  if (!f.is_polynomial()) throw std::domain_error("lowest-order subspace needs a polynomial map");
  int nu = -1;
  for (const auto& p : f.numerator()) {
    if (!p.is_zero()) nu = (nu < 0) ? p.order() : std::min(nu, p.order());
  }
  const std::size_t big_n = f.target_dim();
  if (nu < 0) return Subspace::span(big_n, {}, tol);
  std::vector<Vector> vecs;
  for (const auto& alpha : monomials_of_degree(f.n(), nu)) {
    Vector v(static_cast<Eigen::Index>(big_n));
    for (std::size_t j = 0; j < big_n; ++j) v(static_cast<Eigen::Index>(j)) = f.numerator()[j].coefficient(alpha);
    if (v.norm() > 0.0) vecs.push_back(v);
  }
  return Subspace::span(big_n, vecs, tol);
}

RationalMap tensor_power(std::size_t n, int m) {
  if (n < 1 || m < 0) throw std::invalid_argument("tensor power needs n >= 1 and m >= 0");
  std::vector<Polynomial> comps;
  for (const auto& alpha : monomials_of_degree(n, m)) {
    comps.push_back(Polynomial::monomial(alpha, std::sqrt(multinomial(alpha))));
  }
  return make_polynomial_map(std::move(comps));
}

RationalMap whitney(std::size_t n) {
  if (n < 1) throw std::invalid_argument("Whitney map needs n >= 1");
  std::vector<Polynomial> comps;
  const std::size_t last = n - 1;
  for (std::size_t i = 0; i < last; ++i) comps.push_back(Polynomial::variable(n, i));
  for (std::size_t i = 0; i < last; ++i) comps.push_back(Polynomial::variable(n, i) * Polynomial::variable(n, last));
  comps.push_back(pow(Polynomial::variable(n, last), 2));
  return make_polynomial_map(std::move(comps));
}

namespace {

Polynomial mono(std::initializer_list<int> e, Complex c = 1.0) { return Polynomial::monomial(MultiIndex(e), c); }

RationalMap whitney_sequence(int k) {
  if (k < 1) throw std::invalid_argument("Whitney sequence index starts at 1");
  // W_k = (z1, z1 z2, z1 z2^2, ..., z1 z2^k, z2^(k+1)).
  std::vector<Polynomial> comps;
  for (int j = 0; j <= k; ++j) comps.push_back(mono({1, j}));
  comps.push_back(mono({0, k + 1}));
  return make_polynomial_map(std::move(comps));
}

}  // namespace

std::vector<std::string> catalog_names() {
  return {"faran-1",       "faran-2",       "faran-3",    "faran-4",       "example-3-1",   "example-7-2",
          "corollary-6-2", "remark-4-1",    "whitney-seq-1", "whitney-seq-2", "whitney-seq-3", "example-7-4-f",
          "example-7-4-g"};
}

RationalMap catalog(const std::string& name, std::optional<double> theta) {
  const double r2 = std::sqrt(2.0);
  const double r3 = std::sqrt(3.0);
  if (name == "faran-1") return make_polynomial_map({mono({1, 0}), mono({0, 1}), Polynomial(2)});
  if (name == "faran-2") return make_polynomial_map({mono({1, 0}), mono({1, 1}), mono({0, 2})});
  if (name == "faran-3") return make_polynomial_map({mono({2, 0}), mono({1, 1}, r2), mono({0, 2})});
  if (name == "faran-4") return make_polynomial_map({mono({3, 0}), mono({1, 1}, r3), mono({0, 3})});
  if (name == "example-3-1") {
    return make_polynomial_map(
        {mono({1, 0, 0}), mono({0, 1, 0}), mono({1, 0, 1}), mono({0, 1, 1}), mono({0, 0, 2})});
  }
  if (name == "example-7-2") {
    // Variables (z, w).
    const double c = 1.0 / r2;
    const Polynomial z = mono({1, 0});
    const Polynomial w2 = mono({0, 2});
    const Polynomial zw = mono({1, 1});
    const Polynomial minus = (z - w2) * c;
    const Polynomial last = (minus - zw) * c;
    return make_polynomial_map({(z + w2) * c, (minus + zw) * c, last * z, last * mono({0, 1})});
  }
  if (name == "corollary-6-2") {
    const Polynomial z = mono({1});
    const Polynomial z2 = mono({2});
    const Polynomial z3 = mono({3});
    return make_polynomial_map({(z + z2) * 0.5, (z2 - z3) * 0.5});
  }
  if (name == "remark-4-1") {
    return juxtapose_lambda({tensor_power(2, 1), tensor_power(2, 2)}, {1.0 / r2, 1.0 / r2});
  }
  const std::string seq = "whitney-seq-";
  if (name.rfind(seq, 0) == 0) {
    int k = 0;
    try {
      k = std::stoi(name.substr(seq.size()));
    } catch (const std::exception&) {
      throw std::invalid_argument("unknown catalog name: " + name);
    }
    return whitney_sequence(k);
  }
  const double t = theta.value_or(std::numbers::pi / 4);
  const double c = std::cos(t);
  const double s = std::sin(t);
  if (name == "example-7-4-f") {
    return make_polynomial_map({mono({1, 0, 0}), mono({0, 1, 0}), mono({0, 0, 1}, c), mono({1, 0, 1}, s),
                                mono({0, 1, 1}, s), mono({0, 0, 2}, s)});
  }
  if (name == "example-7-4-g") {
    return make_polynomial_map({mono({1, 0, 0}, c), mono({0, 1, 0}), mono({2, 0, 0}, s), mono({1, 1, 0}, s),
                                mono({1, 0, 1}, std::sqrt(1.0 + s * s)), mono({0, 1, 1}), mono({0, 0, 2})});
  }
  throw std::invalid_argument("unknown catalog name: " + name);
}

}  // namespace ballmaps
