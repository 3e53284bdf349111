#include "ballmaps/hermitian.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

namespace ballmaps {

namespace {

void prune(HermitianForm::EntryMap& entries) {
  for (auto it = entries.begin(); it != entries.end();) {
    if (std::abs(it->second) <= kZeroThreshold) {
      it = entries.erase(it);
    } else {
      ++it;
    }
  }
}

Complex monomial_value(const MultiIndex& a, std::span<const Complex> z) {
  Complex m = 1.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (int k = 0; k < a[i]; ++k) m *= z[i];
  }
  return m;
}

}  // namespace

HermitianForm HermitianForm::from_entries(std::size_t nvars, EntryMap entries) {
  HermitianForm h(nvars);
  prune(entries);
  h.entries_ = std::move(entries);
  return h;
}

HermitianForm HermitianForm::constant(std::size_t nvars, double c) {
  HermitianForm h(nvars);
  h.add(MultiIndex(nvars), MultiIndex(nvars), c);
  return h;
}

HermitianForm HermitianForm::squared_modulus(const Polynomial& p) {
  EntryMap acc;
  for (const auto& [a, ca] : p.terms()) {
    for (const auto& [b, cb] : p.terms()) acc[{a, b}] += ca * std::conj(cb);
  }
  return from_entries(p.nvars(), std::move(acc));
}

HermitianForm HermitianForm::squared_norm(std::size_t nvars) {
  HermitianForm h(nvars);
  for (std::size_t i = 0; i < nvars; ++i) {
    const auto e = MultiIndex::unit(nvars, i);
    h.add(e, e, 1.0);
  }
  return h;
}

HermitianForm HermitianForm::sphere(std::size_t nvars) {
  return squared_norm(nvars) - constant(nvars, 1.0);
}

Complex HermitianForm::entry(const MultiIndex& a, const MultiIndex& b) const {
  auto it = entries_.find({a, b});
  return it == entries_.end() ? Complex(0.0) : it->second;
}

void HermitianForm::add(const MultiIndex& a, const MultiIndex& b, Complex c) {
  if (a.size() != nvars_ || b.size() != nvars_) throw DimensionError("form entry has wrong number of variables");
  auto [it, inserted] = entries_.try_emplace({a, b}, c);
  if (!inserted) it->second += c;
  if (std::abs(it->second) <= kZeroThreshold) entries_.erase(it);
}

int HermitianForm::bidegree() const {
  int d = -1;
  for (const auto& [key, _] : entries_) d = std::max({d, key.first.total(), key.second.total()});
  return d;
}

double HermitianForm::max_abs() const {
  double m = 0.0;
  for (const auto& [_, c] : entries_) m = std::max(m, std::abs(c));
  return m;
}

std::vector<MultiIndex> HermitianForm::basis() const {
  std::set<MultiIndex> rows;
  for (const auto& [key, _] : entries_) rows.insert(key.first);
  return {rows.begin(), rows.end()};
}

double HermitianForm::hermitian_defect() const {
  double m = 0.0;
  for (const auto& [key, c] : entries_) m = std::max(m, std::abs(c - std::conj(entry(key.second, key.first))));
  return m;
}

Complex HermitianForm::evaluate(std::span<const Complex> z) const {
  if (z.size() != nvars_) throw DimensionError("evaluation point has wrong dimension");
  Complex sum = 0.0;
  for (const auto& [key, c] : entries_) sum += c * monomial_value(key.first, z) * std::conj(monomial_value(key.second, z));
  return sum;
}

HermitianForm HermitianForm::permuted(std::span<const int> perm) const {
  EntryMap acc;
  for (const auto& [key, c] : entries_) acc[{key.first.permuted(perm), key.second.permuted(perm)}] += c;
  return from_entries(nvars_, std::move(acc));
}

bool HermitianForm::is_diagonal() const {
  return std::all_of(entries_.begin(), entries_.end(), [](const auto& kv) { return kv.first.first == kv.first.second; });
}

void HermitianForm::check_same(const HermitianForm& other) const {
  if (nvars_ != other.nvars_) throw DimensionError("form variable-count mismatch");
}

HermitianForm& HermitianForm::operator+=(const HermitianForm& other) {
  check_same(other);
  for (const auto& [key, c] : other.entries_) add(key.first, key.second, c);
  return *this;
}

HermitianForm& HermitianForm::operator-=(const HermitianForm& other) {
  check_same(other);
  for (const auto& [key, c] : other.entries_) add(key.first, key.second, -c);
  return *this;
}

HermitianForm& HermitianForm::operator*=(double c) {
  for (auto& [_, v] : entries_) v *= c;
  prune(entries_);
  return *this;
}

HermitianForm operator*(const HermitianForm& a, const HermitianForm& b) {
  a.check_same(b);
  HermitianForm::EntryMap acc;
  for (const auto& [ka, ca] : a.entries_) {
    for (const auto& [kb, cb] : b.entries_) acc[{ka.first + kb.first, ka.second + kb.second}] += ca * cb;
  }
  return HermitianForm::from_entries(a.nvars_, std::move(acc));
}

HermitianForm pow(const HermitianForm& h, int k) {
  if (k < 0) throw std::invalid_argument("negative form power");
  HermitianForm result = HermitianForm::constant(h.nvars(), 1.0);
  for (int i = 0; i < k; ++i) result = result * h;
  return result;
}

double max_entry_diff(const HermitianForm& a, const HermitianForm& b) {
  double m = 0.0;
  for (const auto& [key, c] : a.entries()) m = std::max(m, std::abs(c - b.entry(key.first, key.second)));
  for (const auto& [key, c] : b.entries()) m = std::max(m, std::abs(c - a.entry(key.first, key.second)));
  return m;
}

namespace {

void accumulate_modulus(HermitianForm::EntryMap& acc, const Polynomial& p, double sign) {
  for (const auto& [a, ca] : p.terms()) {
    for (const auto& [b, cb] : p.terms()) acc[{a, b}] += sign * ca * std::conj(cb);
  }
}

}  // namespace

HermitianForm form_of(const RationalMap& f) {
  HermitianForm::EntryMap acc;
  for (std::size_t j = 0; j < f.target_dim(); ++j) accumulate_modulus(acc, f.numerator()[j], j < f.m() ? 1.0 : -1.0);
  accumulate_modulus(acc, f.denominator(), -1.0);
  return HermitianForm::from_entries(f.n(), std::move(acc));
}

HermitianForm positive_part(const RationalMap& f) {
  HermitianForm::EntryMap acc;
  for (std::size_t j = 0; j < f.m(); ++j) accumulate_modulus(acc, f.numerator()[j], 1.0);
  return HermitianForm::from_entries(f.n(), std::move(acc));
}

// ---------------------------------------------------------------------------
// Division by the sphere

SphereQuotient quotient_by_sphere(const HermitianForm& h) {
  const std::size_t n = h.nvars();
  SphereQuotient out{HermitianForm(n), HermitianForm(n)};
  const int top = h.bidegree();
  if (top < 0) return out;

  // Entries with a fixed difference a - b form an independent chain: write
  // a = d+ + k, b = d- + k and recurse over k alone.
  struct Chain {
    MultiIndex plus;
    MultiIndex minus;
    std::map<MultiIndex, Complex> coeffs;
  };
  std::map<std::vector<int>, Chain> chains;
  for (const auto& [key, c] : h.entries()) {
    const auto diff = key.first.difference(key.second);
    auto it = chains.find(diff);
    if (it == chains.end()) {
      std::vector<int> pos(n), neg(n);
      for (std::size_t i = 0; i < n; ++i) {
        pos[i] = std::max(diff[i], 0);
        neg[i] = std::max(-diff[i], 0);
      }
      it = chains.emplace(diff, Chain{MultiIndex(pos), MultiIndex(neg), {}}).first;
    }
    it->second.coeffs[key.first.minus(it->second.plus)] += c;
  }

  HermitianForm::EntryMap quotient;
  HermitianForm::EntryMap remainder;
  for (const auto& [diff, chain] : chains) {
    const int offset = std::max(chain.plus.total(), chain.minus.total());
    const int depth = top - 1 - offset;  // largest |k| carried by the quotient
    auto coeff = [&](const MultiIndex& k) {
      auto it = chain.coeffs.find(k);
      return it == chain.coeffs.end() ? Complex(0.0) : it->second;
    };
    std::map<MultiIndex, Complex> u;
    auto u_at = [&](const MultiIndex& k) {
      auto it = u.find(k);
      return it == u.end() ? Complex(0.0) : it->second;
    };
    auto shifted_sum = [&](const MultiIndex& k) {
      Complex s = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (k[i] > 0) s += u_at(k.minus(MultiIndex::unit(n, i)));
      }
      return s;
    };
    // u_k = sum_i u_{k - e_i} - c_k, ascending in |k|.
    for (int deg = 0; deg <= depth; ++deg) {
      for (const auto& k : monomials_of_degree(n, deg)) {
        const Complex v = shifted_sum(k) - coeff(k);
        if (v != Complex(0.0)) u.emplace(k, v);
      }
    }
    for (const auto& [k, v] : u) quotient[{chain.plus + k, chain.minus + k}] += v;
    // remainder = c - (sum_i u_{k-e_i} - u_k) over every reachable k.
    for (int deg = 0; deg <= std::max(depth + 1, 0); ++deg) {
      for (const auto& k : monomials_of_degree(n, deg)) {
        const Complex r = coeff(k) - shifted_sum(k) + u_at(k);
        if (r != Complex(0.0)) remainder[{chain.plus + k, chain.minus + k}] += r;
      }
    }
  }
  out.quotient = HermitianForm::from_entries(n, std::move(quotient));
  out.remainder = HermitianForm::from_entries(n, std::move(remainder));
  return out;
}

ProperCertificate is_proper(const RationalMap& f, const Tolerances& tol) {
  const HermitianForm h = form_of(f);
  auto [u, rem] = quotient_by_sphere(h);
  ProperCertificate cert;
  cert.residual = rem.max_abs();
  cert.threshold = tol.div * (1.0 + h.max_abs());
  cert.proper = cert.residual <= cert.threshold;
  cert.quotient = std::move(u);
  return cert;
}

// ---------------------------------------------------------------------------
// Spectral data

std::vector<EigenBlock> eigen_blocks(const HermitianForm& h) {
  const auto basis = h.basis();
  std::map<MultiIndex, std::size_t> index;
  for (std::size_t i = 0; i < basis.size(); ++i) index.emplace(basis[i], i);

  std::vector<std::size_t> parent(basis.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& [key, _] : h.entries()) {
    const auto ra = find(index.at(key.first));
    const auto rb = find(index.at(key.second));
    if (ra != rb) parent[std::max(ra, rb)] = std::min(ra, rb);
  }
  std::map<std::size_t, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < basis.size(); ++i) groups[find(i)].push_back(i);

  std::vector<EigenBlock> blocks;
  for (const auto& [_, members] : groups) {
    const auto size = static_cast<Eigen::Index>(members.size());
    EigenBlock block;
    for (auto i : members) block.basis.push_back(basis[i]);
    if (size == 1) {
      block.values = Eigen::VectorXd::Constant(1, h.entry(block.basis[0], block.basis[0]).real());
      block.vectors = Matrix::Identity(1, 1);
      blocks.push_back(std::move(block));
      continue;
    }
    Matrix m(size, size);
    for (Eigen::Index r = 0; r < size; ++r) {
      for (Eigen::Index c = 0; c < size; ++c) m(r, c) = h.entry(block.basis[r], block.basis[c]);
    }
    // Symmetrize so that rounding in the input cannot leak into the solver.
    m = (m + m.adjoint()).eval() * 0.5;
    Eigen::SelfAdjointEigenSolver<Matrix> solver(m);
    block.values = solver.eigenvalues();
    block.vectors = solver.eigenvectors();
    for (Eigen::Index c = 0; c < size; ++c) {
      Eigen::Index top = 0;
      block.vectors.col(c).cwiseAbs().maxCoeff(&top);
      const Complex v = block.vectors(top, c);
      block.vectors.col(c) *= std::conj(v) / std::abs(v);
    }
    blocks.push_back(std::move(block));
  }
  return blocks;
}

Signature signature(const HermitianForm& h, const Tolerances& tol) {
  Signature sig;
  std::vector<double> values;
  for (const auto& block : eigen_blocks(h)) {
    for (Eigen::Index i = 0; i < block.values.size(); ++i) values.push_back(block.values(i));
  }
  for (double v : values) sig.spectral_norm = std::max(sig.spectral_norm, std::abs(v));
  sig.threshold = tol.sig * sig.spectral_norm;
  sig.min_nonzero_rel = values.empty() ? 0.0 : 1.0;
  for (double v : values) {
    const double rel = sig.spectral_norm > 0.0 ? std::abs(v) / sig.spectral_norm : 0.0;
    if (std::abs(v) <= sig.threshold) {
      ++sig.zero;
      sig.max_zero_rel = std::max(sig.max_zero_rel, rel);
    } else {
      (v > 0 ? sig.positive : sig.negative) += 1;
      sig.min_nonzero_rel = std::min(sig.min_nonzero_rel, rel);
    }
  }
  return sig;
}

std::size_t hermitian_rank(const RationalMap& f, const Tolerances& tol) { return signature(form_of(f), tol).rank(); }

std::size_t image_rank(const RationalMap& f, const Tolerances& tol) {
  if (f.l() != 0) throw std::domain_error("image rank is defined here only for ball targets");
  std::set<MultiIndex> support;
  for (const auto& p : f.numerator()) {
    for (const auto& [a, _] : p.terms()) support.insert(a);
  }
  for (const auto& [a, _] : f.denominator().terms()) support.insert(a);
  const std::vector<MultiIndex> cols(support.begin(), support.end());
  const auto rows = static_cast<Eigen::Index>(f.target_dim() + 1);
  Matrix m = Matrix::Zero(rows, static_cast<Eigen::Index>(cols.size()));
  for (std::size_t c = 0; c < cols.size(); ++c) {
    const auto col = static_cast<Eigen::Index>(c);
    for (std::size_t j = 0; j < f.target_dim(); ++j) m(static_cast<Eigen::Index>(j), col) = f.numerator()[j].coefficient(cols[c]);
    m(rows - 1, col) = f.denominator().coefficient(cols[c]);
  }
  Eigen::ColPivHouseholderQR<Matrix> qr(m);
  qr.setThreshold(tol.sig);
  const auto rank = static_cast<std::size_t>(qr.rank());
  return rank == 0 ? 0 : rank - 1;
}

// ---------------------------------------------------------------------------
// Tensor products of automorphisms

std::vector<HermitianForm> automorphism_tensor_expansion(const std::vector<Vector>& points) {
  if (points.empty()) throw std::invalid_argument("need at least one point");
  const auto n = static_cast<std::size_t>(points.front().size());
  std::vector<HermitianForm> coeffs{HermitianForm::constant(n, 1.0)};
  for (const auto& a : points) {
    if (static_cast<std::size_t>(a.size()) != n) throw DimensionError("points disagree on dimension");
    const double norm2 = a.squaredNorm();
    if (norm2 >= 1.0) throw std::domain_error("point must lie in the open unit ball");
    std::vector<Complex> lin(n);
    for (std::size_t i = 0; i < n; ++i) lin[i] = -std::conj(a(static_cast<Eigen::Index>(i)));
    const HermitianForm omega = HermitianForm::squared_modulus(Polynomial::linear(lin, 1.0));
    const double c = 1.0 - norm2;
    std::vector<HermitianForm> next(coeffs.size() + 1, HermitianForm(n));
    for (std::size_t k = 0; k < coeffs.size(); ++k) {
      next[k] += coeffs[k] * omega;
      next[k + 1] += coeffs[k] * c;
    }
    coeffs = std::move(next);
  }
  return coeffs;
}

HermitianForm automorphism_tensor_form(const std::vector<Vector>& points) {
  const auto coeffs = automorphism_tensor_expansion(points);
  const std::size_t n = coeffs.front().nvars();
  const HermitianForm rho = HermitianForm::sphere(n);
  HermitianForm result(n);
  HermitianForm rho_power = rho;
  for (std::size_t k = 1; k < coeffs.size(); ++k) {
    result += coeffs[k] * rho_power;
    rho_power = rho_power * rho;
  }
  return result;
}

}  // namespace ballmaps
