#include "ballmaps/realize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <numeric>
#include <set>

namespace ballmaps {

namespace {

HermitianForm squared_norm_of(std::size_t n, const std::vector<Polynomial>& comps) {
  HermitianForm h = HermitianForm::constant(n, 0.0);
  for (const auto& p : comps) h += HermitianForm::squared_modulus(p);
  return h;
}

HermitianForm radial(std::size_t n, int k) {
  return k == 0 ? HermitianForm::constant(n, 1.0) : pow(HermitianForm::squared_norm(n), k);
}

double min_eigenvalue(const HermitianForm& h) {
  double lo = 0.0;
  for (const auto& block : eigen_blocks(h)) lo = std::min(lo, block.values.minCoeff());
  return lo;
}

bool is_psd(const HermitianForm& h, double scale) { return min_eigenvalue(h) >= -1e-12 * std::max(1.0, scale); }

Polynomial sum_of_variables(std::size_t n) {
  Polynomial s(n);
  for (std::size_t i = 0; i < n; ++i) s += Polynomial::variable(n, i);
  return s;
}

RationalMap scaled(const RationalMap& f, double c) {
  std::vector<Polynomial> comps;
  for (const auto& p : f.numerator()) comps.push_back(p * Complex(c));
  return make_polynomial_map(std::move(comps), f.l());
}

}  // namespace

FactorizationResult factor_form(const HermitianForm& h, double drop_rel) {
  const auto blocks = eigen_blocks(h);
  double spectral = 0.0;
  for (const auto& b : blocks) spectral = std::max(spectral, b.values.cwiseAbs().maxCoeff());
  const double thr = drop_rel * spectral;
  FactorizationResult out;
  const std::size_t n = h.nvars();
  for (const auto& b : blocks) {
    for (Eigen::Index k = b.values.size() - 1; k >= 0; --k) {
      const double v = b.values(k);
      if (std::abs(v) <= thr) continue;
      const double s = std::sqrt(std::abs(v));
      Polynomial p(n);
      for (std::size_t i = 0; i < b.basis.size(); ++i) p.add_term(b.basis[i], s * b.vectors(static_cast<Eigen::Index>(i), k));
      (v > 0 ? out.positive : out.negative).push_back(std::move(p));
    }
  }
  return out;
}

FactorizationResult factor_form(const HermitianForm& h, const Tolerances& tol) { return factor_form(h, tol.sig); }

RationalMap map_from_psd_form(const HermitianForm& h, double drop_rel) {
  // Pivoted LDL^*: its error is bounded entrywise by sqrt(H_aa H_bb), which
  // keeps large radial factors accurate where an eigensolver would not.
  const auto basis = h.basis();
  const auto dim = static_cast<Eigen::Index>(basis.size());
  std::map<MultiIndex, Eigen::Index> index;
  for (Eigen::Index i = 0; i < dim; ++i) index[basis[static_cast<std::size_t>(i)]] = i;
  Matrix dense = Matrix::Zero(dim, dim);
  for (const auto& [key, c] : h.entries()) dense(index[key.first], index[key.second]) = c;
  std::vector<Polynomial> comps;
  if (dim > 0) {
    const Eigen::LDLT<Matrix> ldlt(dense);
    const Eigen::VectorXd d = ldlt.vectorD().real();
    const double top = std::max(d.cwiseAbs().maxCoeff(), 0.0);
    const double thr = drop_rel * top;
    if (d.minCoeff() < -std::max(1e-10 * std::max(1.0, h.max_abs()), thr)) {
      throw std::invalid_argument("form is not positive semidefinite");
    }
    const Matrix l = ldlt.transpositionsP().transpose() * Matrix(ldlt.matrixL());
    for (Eigen::Index k = 0; k < dim; ++k) {
      if (d(k) <= thr) continue;
      const double s = std::sqrt(d(k));
      Polynomial p(h.nvars());
      for (Eigen::Index i = 0; i < dim; ++i) {
        if (l(i, k) != Complex(0.0)) p.add_term(basis[static_cast<std::size_t>(i)], s * l(i, k));
      }
      comps.push_back(std::move(p));
    }
  }
  if (comps.empty()) comps.push_back(Polynomial(h.nvars()));
  return make_polynomial_map(std::move(comps));
}

RationalMap tensor_with_power(const std::vector<Polynomial>& q, std::size_t n, int k) {
  return map_from_psd_form(squared_norm_of(n, q) * radial(n, k));
}

PadResult pad_to_proper(std::size_t n, const std::vector<Polynomial>& p, const PadOptions& options) {
  for (const auto& c : p) {
    if (c.nvars() != n) throw DimensionError("component has the wrong number of variables");
  }
  int d = 0;
  std::vector<bool> present;
  for (const auto& c : p) d = std::max(d, c.degree());
  present.assign(static_cast<std::size_t>(d) + 1, false);
  for (const auto& c : p) {
    for (const auto& [alpha, _] : c.terms()) present[static_cast<std::size_t>(alpha.total())] = true;
  }

  std::vector<double> weights;
  if (options.weights) {
    weights = *options.weights;
    double total = 0.0;
    for (double w : weights) {
      if (w < 0.0) throw std::invalid_argument("weights must be non-negative");
      total += w;
    }
    if (std::abs(total - 1.0) > 1e-12) throw std::invalid_argument("weights must sum to one");
    for (std::size_t j = 0; j < present.size(); ++j) {
      if (present[j] && (j >= weights.size() || weights[j] == 0.0)) {
        throw std::invalid_argument("weights must be positive on every degree present in p");
      }
    }
  } else {
    const auto count = std::count(present.begin(), present.end(), true);
    if (count == 0) {
      weights = {1.0};
    } else {
      weights.assign(present.size(), 0.0);
      for (std::size_t j = 0; j < present.size(); ++j) {
        if (present[j]) weights[j] = 1.0 / static_cast<double>(count);
      }
    }
  }

  double epsilon = 0.0, epsilon_sup = 0.0;
  std::vector<double> lambda;
  std::vector<int> powers;
  HermitianForm target = HermitianForm::constant(n, 0.0);
  for (std::size_t j = 0; j < weights.size(); ++j) {
    if (weights[j] == 0.0) continue;
    target += radial(n, static_cast<int>(j)) * weights[j];
    lambda.push_back(std::sqrt(weights[j]));
    powers.push_back(static_cast<int>(j));
  }
  const HermitianForm pp = squared_norm_of(n, p);
  const double scale = target.max_abs();

  if (pp.is_zero()) {
    epsilon = epsilon_sup = options.epsilon.value_or(1.0);
  } else if (options.epsilon) {
    epsilon = epsilon_sup = *options.epsilon;
    if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
    if (!is_psd(target - pp * (epsilon * epsilon), scale)) {
      throw std::invalid_argument("epsilon too large: padding remainder is not positive semidefinite");
    }
  } else {
    // Diagonal entries bound the supremum from above.
    double hi = std::numeric_limits<double>::infinity();
    for (const auto& [key, c] : pp.entries()) {
      if (key.first == key.second && c.real() > 0.0) {
        hi = std::min(hi, std::sqrt(target.entry(key.first, key.first).real() / c.real()));
      }
    }
    double lo = 0.0;
    if (is_psd(target - pp * (hi * hi), scale)) {
      lo = hi;
    } else {
      while (hi - lo > 1e-3 * hi) {
        const double mid = 0.5 * (lo + hi);
        (is_psd(target - pp * (mid * mid), scale) ? lo : hi) = mid;
      }
    }
    if (lo <= 0.0) throw std::runtime_error("padding failed: no admissible epsilon");
    epsilon_sup = lo;
    epsilon = 0.5 * lo;
  }

  const HermitianForm remainder = target - pp * (epsilon * epsilon);
  auto q = map_from_psd_form(remainder).numerator();
  std::vector<Polynomial> comps;
  for (const auto& c : p) comps.push_back(c * Complex(epsilon));
  comps.insert(comps.end(), q.begin(), q.end());
  return PadResult{epsilon, epsilon_sup, std::move(q), std::move(lambda), std::move(powers),
                   make_polynomial_map(std::move(comps))};
}

PadResult pad_to_proper(const RationalMap& p, const PadOptions& options) {
  if (!p.is_polynomial() || p.l() != 0) throw std::invalid_argument("padding needs a polynomial map into a ball");
  return pad_to_proper(p.n(), p.numerator(), options);
}

RationalMap symmetric_group_map(std::size_t n) {
  if (n == 0) throw std::invalid_argument("dimension must be positive");
  if (n == 1) return catalog("corollary-6-2");
  const RationalMap z = identity_map(n);
  std::vector<Polynomial> mixed, squares;
  for (std::size_t j = 0; j < n; ++j) {
    squares.push_back(pow(Polynomial::variable(n, j), 2));
    for (std::size_t k = j + 1; k < n; ++k) mixed.push_back(Polynomial::variable(n, j) * Polynomial::variable(n, k));
  }
  // 2 ||mixed||^2 + ||squares||^2 = ||z||^4.
  const RationalMap g = oplus(tensor(scaled(make_polynomial_map(mixed), std::sqrt(2.0)), z), make_polynomial_map(squares));
  const Polynomial alpha = Polynomial::constant(n, 1.0) + sum_of_variables(n);
  const PadResult pad = pad_to_proper(n, {alpha});
  const RationalMap h = oplus(make_polynomial_map({alpha * Complex(pad.epsilon)}), tensor(make_polynomial_map(pad.q), z));
  return juxtapose_theta(g, h, std::numbers::pi / 4);
}

RationalMap symmetric_group_map_v2(std::size_t n) {
  if (n == 0) throw std::invalid_argument("dimension must be positive");
  Polynomial g = Polynomial::constant(n, 1.0);
  for (std::size_t j = 0; j < n; ++j) g = g * (Polynomial::constant(n, 1.0) + Polynomial::variable(n, j));
  const PadResult pad = pad_to_proper(n, {g});
  const RationalMap head = tensor(make_polynomial_map({g * Complex(pad.epsilon)}), identity_map(n));
  return oplus(head, tensor_with_power(pad.q, n, static_cast<int>(n) + 2));
}

std::vector<Permutation> permutation_group(std::size_t n, const std::vector<Permutation>& generators) {
  for (const auto& g : generators) {
    Permutation sorted = g;
    std::sort(sorted.begin(), sorted.end());
    Permutation expected(n);
    std::iota(expected.begin(), expected.end(), 0);
    if (g.size() != n || sorted != expected) throw std::invalid_argument("generator is not a permutation of the coordinates");
  }
  Permutation id(n);
  std::iota(id.begin(), id.end(), 0);
  std::vector<Permutation> elements{id};
  std::set<Permutation> seen{id};
  for (std::size_t next = 0; next < elements.size(); ++next) {
    for (const auto& g : generators) {
      Permutation prod(n);
      for (std::size_t i = 0; i < n; ++i) prod[i] = elements[next][static_cast<std::size_t>(g[i])];
      if (seen.insert(prod).second) elements.push_back(std::move(prod));
    }
  }
  std::sort(elements.begin(), elements.end());
  return elements;
}

RationalMap realize_subgroup(std::size_t n, const std::vector<Permutation>& generators) {
  if (n == 0) throw std::invalid_argument("dimension must be positive");
  if (n > kMaxPermutationDim) throw CapabilityError("subgroup realization is limited to n <= 8");
  const auto group = permutation_group(n, generators);
  std::size_t factorial = 1;
  for (std::size_t k = 2; k <= n; ++k) factorial *= k;
  if (group.size() == factorial) return symmetric_group_map(n);

  // tau = 1 + sum over the group of z_{s(1)}^1 z_{s(2)}^2 ... z_{s(n)}^n.
  Polynomial tau = Polynomial::constant(n, 1.0);
  for (const auto& s : group) {
    std::vector<int> e(n, 0);
    for (std::size_t i = 0; i < n; ++i) e[static_cast<std::size_t>(s[i])] = static_cast<int>(i) + 1;
    tau.add_term(MultiIndex(e), 1.0);
  }
  const int top = static_cast<int>(n * (n + 1) / 2);
  const int k3 = top + 1;
  const RationalMap sym = symmetric_group_map(n);
  const int k4 = sym.degree() + 1;
  const PadResult pad = pad_to_proper(n, {tau});
  const RationalMap lead = tensor(make_polynomial_map({tau * Complex(pad.epsilon)}), tensor_power(n, k4));
  const RationalMap second = oplus(lead, tensor_with_power(pad.q, n, k3 + k4));
  return juxtapose_theta(sym, second, std::numbers::pi / 4);
}

RationalMap realize_from_invariants(std::size_t n, const std::vector<Polynomial>& invariants,
                                    const std::vector<Matrix>& generators) {
  if (n == 0) throw std::invalid_argument("dimension must be positive");
  if (invariants.empty()) throw std::invalid_argument("at least one invariant is required");
  int top = 0;
  for (const auto& h : invariants) {
    if (h.nvars() != n) throw DimensionError("invariant has the wrong number of variables");
    if (std::abs(h.constant_term()) > kEqTolerance) throw std::invalid_argument("invariants must vanish at the origin");
    top = std::max(top, h.degree());
  }
  // Also rejects generators that are not unitary or generate an infinite group.
  group_closure(generators, n);
  for (const auto& g : generators) {
    const auto gamma = BallAutomorphism::unitary(g);
    for (const auto& h : invariants) {
      const auto moved = compose_source(make_polynomial_map({h}), gamma);
      if (!approx_equal(moved.numerator()[0], h, 1e-9 * std::max(1.0, h.max_abs_coefficient()))) {
        throw std::invalid_argument("supplied polynomial is not invariant under a generator");
      }
    }
  }

  // Summands (1 + h_i) (x) z^(x)m_i with pairwise disjoint monomial supports.
  constexpr int kScanCap = 256;
  std::set<MultiIndex> used;
  std::vector<Polynomial> comps;
  for (std::size_t i = 0; i < invariants.size(); ++i) {
    const Polynomial base = Polynomial::constant(n, 1.0) + invariants[i];
    const int start = static_cast<int>(i + 1) * (top + 1);
    bool placed = false;
    for (int m = start; m < start + kScanCap && !placed; ++m) {
      const RationalMap summand = tensor(make_polynomial_map({base}), tensor_power(n, m));
      std::set<MultiIndex> support;
      for (const auto& c : summand.numerator()) {
        for (const auto& [alpha, _] : c.terms()) support.insert(alpha);
      }
      if (std::any_of(support.begin(), support.end(), [&](const MultiIndex& a) { return used.count(a) > 0; })) continue;
      used.insert(support.begin(), support.end());
      comps.insert(comps.end(), summand.numerator().begin(), summand.numerator().end());
      placed = true;
    }
    if (!placed) throw std::runtime_error("could not separate invariant supports within the scan cap");
  }

  const PadResult pad = pad_to_proper(n, comps);
  int degree = 0;
  for (const auto& c : comps) degree = std::max(degree, c.degree());
  std::vector<Polynomial> head;
  for (const auto& c : comps) head.push_back(c * Complex(pad.epsilon));
  const RationalMap f = oplus(make_polynomial_map(std::move(head)), tensor_with_power(pad.q, n, degree + 1));

  for (const auto& g : generators) {
    if (!membership(f, BallAutomorphism::unitary(g)).member) {
      throw std::runtime_error("constructed map is not invariant under a generator");
    }
  }
  return f;
}

}  // namespace ballmaps
