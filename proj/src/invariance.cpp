#include "ballmaps/invariance.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace ballmaps {

namespace {

using Int = std::int64_t;
using IntRow = std::vector<Int>;

Int checked_mul(Int a, Int b) {
  Int r = 0;
  if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("integer overflow in lattice reduction");
  return r;
}

Int checked_add(Int a, Int b) {
  Int r = 0;
  if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("integer overflow in lattice reduction");
  return r;
}

// x a + y b = g >= 0.
Int extended_gcd(Int a, Int b, Int& x, Int& y) {
  Int old_r = a, r = b, old_s = 1, s = 0, old_t = 0, t = 1;
  while (r != 0) {
    const Int q = old_r / r;
    Int tmp = old_r - q * r;
    old_r = r;
    r = tmp;
    tmp = old_s - q * s;
    old_s = s;
    s = tmp;
    tmp = old_t - q * t;
    old_t = t;
    t = tmp;
  }
  if (old_r < 0) {
    old_r = -old_r;
    old_s = -old_s;
    old_t = -old_t;
  }
  x = old_s;
  y = old_t;
  return old_r;
}

std::size_t leading(const IntRow& v) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] != 0) return i;
  }
  return v.size();
}

// Adds v to an echelon basis (distinct leading columns, increasing).
void insert_row(std::vector<IntRow>& basis, IntRow v) {
  for (std::size_t k = 0; k < basis.size(); ++k) {
    const std::size_t lead_v = leading(v);
    if (lead_v == v.size()) return;
    const std::size_t p = leading(basis[k]);
    if (lead_v < p) {
      basis.insert(basis.begin() + static_cast<std::ptrdiff_t>(k), std::move(v));
      return;
    }
    if (lead_v > p || v[p] == 0) continue;
    Int x = 0, y = 0;
    const Int g = extended_gcd(basis[k][p], v[p], x, y);
    const Int bp = basis[k][p] / g;
    const Int vp = v[p] / g;
    IntRow nb(v.size()), nv(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
      nb[i] = checked_add(checked_mul(x, basis[k][i]), checked_mul(y, v[i]));
      nv[i] = checked_add(checked_mul(vp, basis[k][i]), -checked_mul(bp, v[i]));
    }
    basis[k] = std::move(nb);
    v = std::move(nv);
  }
  if (leading(v) < v.size()) basis.push_back(std::move(v));
}

struct SmithResult {
  std::vector<Int> diagonal;         // nonzero invariant factors, in order
  std::vector<IntRow> column_ops;    // V with R A V = D, stored as rows of V
};

SmithResult smith(std::vector<IntRow> a, std::size_t n) {
  std::vector<IntRow> v(n, IntRow(n, 0));
  for (std::size_t i = 0; i < n; ++i) v[i][i] = 1;
  const std::size_t rows = a.size();
  SmithResult out;
  auto col_axpy = [&](std::size_t dst, std::size_t src, Int q) {  // col_dst -= q col_src
    for (auto& row : a) row[dst] = checked_add(row[dst], -checked_mul(q, row[src]));
    for (auto& row : v) row[dst] = checked_add(row[dst], -checked_mul(q, row[src]));
  };
  auto swap_cols = [&](std::size_t i, std::size_t j) {
    for (auto& row : a) std::swap(row[i], row[j]);
    for (auto& row : v) std::swap(row[i], row[j]);
  };
  for (std::size_t t = 0; t < std::min(rows, n); ++t) {
    bool found = false;
    while (true) {
      // Smallest nonzero entry of the trailing block becomes the pivot.
      std::size_t bi = rows, bj = n;
      Int best = 0;
      for (std::size_t i = t; i < rows; ++i) {
        for (std::size_t j = t; j < n; ++j) {
          const Int m = a[i][j] < 0 ? -a[i][j] : a[i][j];
          if (m != 0 && (best == 0 || m < best)) {
            best = m;
            bi = i;
            bj = j;
          }
        }
      }
      if (best == 0) break;
      found = true;
      std::swap(a[t], a[bi]);
      swap_cols(t, bj);
      bool clean = true;
      for (std::size_t i = t + 1; i < rows; ++i) {
        const Int q = a[i][t] / a[t][t];
        if (q != 0) {
          for (std::size_t j = t; j < n; ++j) a[i][j] = checked_add(a[i][j], -checked_mul(q, a[t][j]));
        }
        if (a[i][t] != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < n; ++j) {
        const Int q = a[t][j] / a[t][t];
        if (q != 0) col_axpy(j, t, q);
        if (a[t][j] != 0) clean = false;
      }
      if (!clean) continue;
      bool divides = true;
      for (std::size_t i = t + 1; i < rows && divides; ++i) {
        for (std::size_t j = t + 1; j < n; ++j) {
          if (a[i][j] % a[t][t] != 0) {
            for (std::size_t k = t; k < n; ++k) a[t][k] = checked_add(a[t][k], a[i][k]);
            divides = false;
            break;
          }
        }
      }
      if (divides) break;
    }
    if (!found) break;
    out.diagonal.push_back(a[t][t] < 0 ? -a[t][t] : a[t][t]);
  }
  out.column_ops = std::move(v);
  return out;
}

double wrap_angle(double theta) {
  const double two_pi = 2.0 * std::numbers::pi;
  double r = std::fmod(theta, two_pi);
  if (r < 0) r += two_pi;
  return r;
}

double significance(const HermitianForm& h, const Tolerances& tol) { return tol.eq * std::max(1.0, h.max_abs()); }

// Applies z_a d/dz_b - conj(z_b) d/dconj(z_a) to a form.
HermitianForm::EntryMap derivation(const HermitianForm& h, std::size_t a, std::size_t b) {
  const std::size_t n = h.nvars();
  HermitianForm::EntryMap acc;
  const MultiIndex ea = MultiIndex::unit(n, a);
  const MultiIndex eb = MultiIndex::unit(n, b);
  for (const auto& [key, c] : h.entries()) {
    const auto& [alpha, beta] = key;
    if (alpha[b] > 0) acc[{alpha.minus(eb) + ea, beta}] += c * static_cast<double>(alpha[b]);
    if (beta[a] > 0) acc[{alpha, beta.minus(ea) + eb}] -= c * static_cast<double>(beta[a]);
  }
  return acc;
}

double norm_l(const Vector& w, std::size_t m) {
  double s = 0.0;
  for (Eigen::Index j = 0; j < w.size(); ++j) s += (static_cast<std::size_t>(j) < m ? 1.0 : -1.0) * std::norm(w(j));
  return s;
}

bool is_identity(const Permutation& p) {
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] != static_cast<int>(i)) return false;
  }
  return true;
}

}  // namespace

Matrix permutation_matrix(const Permutation& perm) {
  const auto d = static_cast<Eigen::Index>(perm.size());
  Matrix m = Matrix::Zero(d, d);
  for (Eigen::Index i = 0; i < d; ++i) m(i, perm[static_cast<std::size_t>(i)]) = 1.0;
  return m;
}

std::vector<Permutation> all_permutations(std::size_t n) {
  Permutation p(n);
  std::iota(p.begin(), p.end(), 0);
  std::vector<Permutation> out;
  do {
    out.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

// ---------------------------------------------------------------------------
// Torus subgroups

std::int64_t TorusSubgroup::order() const {
  if (torus_dim > 0) return 0;
  std::int64_t o = 1;
  for (auto d : finite_orders) o = checked_mul(o, d);
  return o;
}

bool TorusSubgroup::contains(std::span<const double> theta, double tol) const {
  if (theta.size() != n) throw DimensionError("angle vector has wrong dimension");
  for (const auto& row : lattice) {
    double dot = 0.0;
    for (std::size_t i = 0; i < n; ++i) dot += static_cast<double>(row[i]) * theta[i];
    const double turns = dot / (2.0 * std::numbers::pi);
    if (std::abs(turns - std::round(turns)) > tol) return false;
  }
  return true;
}

std::vector<Matrix> TorusSubgroup::generator_matrices() const {
  std::vector<Matrix> out;
  for (const auto& theta : finite_generators) {
    Matrix m = Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = std::polar(1.0, theta[i]);
    out.push_back(m);
  }
  return out;
}

TorusSubgroup torus_subgroup(std::size_t n, const std::vector<std::vector<int>>& rows) {
  TorusSubgroup t;
  t.n = n;
  for (const auto& r : rows) {
    if (r.size() != n) throw DimensionError("lattice row has wrong length");
    insert_row(t.lattice, IntRow(r.begin(), r.end()));
  }
  const auto snf = smith(t.lattice, n);
  const std::size_t rank = snf.diagonal.size();
  t.torus_dim = n - rank;
  for (std::size_t k = 0; k < rank; ++k) {
    const Int d = snf.diagonal[k];
    if (d <= 1) continue;
    t.finite_orders.push_back(d);
    std::vector<double> theta(n);
    for (std::size_t i = 0; i < n; ++i) {
      theta[i] = wrap_angle(2.0 * std::numbers::pi * static_cast<double>(snf.column_ops[i][k]) / static_cast<double>(d));
    }
    t.finite_generators.push_back(std::move(theta));
  }
  for (std::size_t k = rank; k < n; ++k) {
    IntRow dir(n);
    for (std::size_t i = 0; i < n; ++i) dir[i] = snf.column_ops[i][k];
    t.torus_directions.push_back(std::move(dir));
  }
  return t;
}

TorusSubgroup diagonal_stabilizer(const HermitianForm& h, const Tolerances& tol) {
  const double thr = significance(h, tol);
  std::set<std::vector<int>> rows;
  for (const auto& [key, c] : h.entries()) {
    if (key.first == key.second || std::abs(c) <= thr) continue;
    auto diff = key.first.difference(key.second);
    const auto lead = std::find_if(diff.begin(), diff.end(), [](int x) { return x != 0; });
    if (*lead < 0) {
      for (auto& x : diff) x = -x;
    }
    rows.insert(std::move(diff));
  }
  return torus_subgroup(h.nvars(), {rows.begin(), rows.end()});
}

TorusSubgroup diagonal_stabilizer(const RationalMap& f, const Tolerances& tol) {
  return diagonal_stabilizer(form_of(f), tol);
}

// ---------------------------------------------------------------------------
// Membership and permutations

MembershipResult membership(const RationalMap& f, const BallAutomorphism& gamma, const Tolerances& tol) {
  if (gamma.dim() != f.n()) throw DimensionError("automorphism dimension differs from map source");
  if (f.l() > 0 && !gamma.is_unitary()) {
    throw CapabilityError("membership for generalized-ball targets supports unitary automorphisms only");
  }
  const HermitianForm h = form_of(f);
  const HermitianForm g = form_of(compose_source(f, gamma));
  MembershipResult r;
  if (h.is_zero()) {
    r.member = g.is_zero();
    r.c_gamma = 1.0;
    return r;
  }
  const HermitianForm::Key* anchor = nullptr;
  double best = -1.0;
  for (const auto& [key, c] : h.entries()) {
    if (std::abs(c) > best) {
      best = std::abs(c);
      anchor = &key;
    }
  }
  const Complex c = (f.l() > 0) ? Complex(1.0) : g.entry(anchor->first, anchor->second) / h.entry(anchor->first, anchor->second);
  r.c_gamma = c.real();
  double worst = 0.0;
  for (const auto& [key, v] : h.entries()) worst = std::max(worst, std::abs(g.entry(key.first, key.second) - c * v));
  for (const auto& [key, v] : g.entries()) worst = std::max(worst, std::abs(v - c * h.entry(key.first, key.second)));
  r.residual = worst;
  r.threshold = tol.eq * std::max({1.0, std::abs(c) * h.max_abs(), g.max_abs()});
  r.member = r.residual <= r.threshold && std::abs(c.imag()) <= tol.eq * std::max(1.0, std::abs(c));
  if (gamma.is_unitary()) r.member = r.member && std::abs(c - 1.0) <= tol.eq;
  return r;
}

std::vector<Permutation> permutation_stabilizer(const RationalMap& f, const Tolerances& tol) {
  const std::size_t n = f.n();
  if (n > kMaxPermutationDim) throw CapabilityError("permutation enumeration is limited to n <= 8");
  const HermitianForm h = form_of(f);
  const double thr = significance(h, tol);
  std::vector<Permutation> out;
  for (const auto& p : all_permutations(n)) {
    // Unitary members have c = 1, so the permuted form must equal the form.
    if (max_entry_diff(h.permuted(p), h) <= thr) out.push_back(p);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Structural tests

TorusTest torus_test(const RationalMap& f, const Tolerances& tol) {
  const HermitianForm h = form_of(f);
  const double thr = significance(h, tol);
  TorusTest t;
  t.invariant = std::all_of(h.entries().begin(), h.entries().end(), [&](const auto& kv) {
    return kv.first.first == kv.first.second || std::abs(kv.second) <= thr;
  });
  if (!t.invariant || !f.is_polynomial() || f.value_at_origin().norm() > tol.eq) return t;
  std::vector<MonomialTerm> terms;
  for (const auto& [key, c] : h.entries()) {
    if (key.first != key.second || key.first.total() == 0) continue;
    if (c.real() < -thr) return t;
    if (c.real() > thr) terms.push_back({std::sqrt(c.real()), key.first});
  }
  t.monomial_form = std::move(terms);
  return t;
}

FullUnitaryTest full_unitary_test(const RationalMap& f, const Tolerances& tol) {
  FullUnitaryTest out;
  RationalMap g = f;
  const Vector origin = f.value_at_origin();
  if (f.l() == 0 && origin.norm() > tol.eq) {
    g = compose_target(f, BallAutomorphism::phi(origin));
    out.target_normalized = true;
  }
  const HermitianForm h = form_of(g);
  const double thr = significance(h, tol);
  std::vector<double> weights(static_cast<std::size_t>(std::max(h.bidegree(), 0)) + 1, 0.0);
  for (const auto& [key, c] : h.entries()) {
    if (key.first != key.second) {
      if (std::abs(c) > thr) return out;
      continue;
    }
    const auto k = static_cast<std::size_t>(key.first.total());
    const double w = c.real() / multinomial(key.first);
    if (std::abs(w) > std::abs(weights[k])) weights[k] = w;
  }
  const std::size_t n = f.n();
  for (std::size_t k = 0; k < weights.size(); ++k) {
    for (const auto& alpha : monomials_of_degree(n, static_cast<int>(k))) {
      const Complex c = h.entry(alpha, alpha);
      if (std::abs(c - weights[k] * multinomial(alpha)) > thr) return out;
    }
  }
  out.invariant = true;
  // Form is kappa (sum lambda_j^2 |z|^{2 m_j} - 1) with kappa = -w_0.
  const double kappa = -weights[0];
  if (kappa <= thr) return out;
  std::vector<PowerTerm> powers;
  for (std::size_t k = 1; k < weights.size(); ++k) {
    const double w = weights[k] / kappa;
    if (w < -tol.eq) return out;
    if (w > tol.eq) powers.push_back({std::sqrt(w), static_cast<int>(k)});
  }
  out.powers = std::move(powers);
  return out;
}

BlockPartition block_partition(const HermitianForm& h, const Tolerances& tol) {
  const std::size_t n = h.nvars();
  const double thr = significance(h, tol) * std::max(1, h.bidegree());
  auto vanishes = [&](std::size_t a, std::size_t b) {
    const auto acc = derivation(h, a, b);
    return std::all_of(acc.begin(), acc.end(), [&](const auto& kv) { return std::abs(kv.second) <= thr; });
  };
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (find(i) == find(j)) continue;
      if (vanishes(i, j) && vanishes(j, i)) parent[find(j)] = find(i);
    }
  }
  std::map<std::size_t, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < n; ++i) groups[find(i)].push_back(i);
  BlockPartition p;
  for (auto& [_, members] : groups) p.blocks.push_back(std::move(members));
  std::sort(p.blocks.begin(), p.blocks.end());
  return p;
}

BlockPartition block_partition(const RationalMap& f, const Tolerances& tol) { return block_partition(form_of(f), tol); }

std::size_t source_rank_upper(const RationalMap& f, const std::optional<BallAutomorphism>& conjugator,
                              const Tolerances& tol) {
  const auto p = conjugator ? block_partition(compose_source(f, *conjugator), tol) : block_partition(f, tol);
  // n - sum (k_j - 1) is the number of blocks.
  return p.blocks.size();
}

std::set<std::size_t> power_chain_check(const RationalMap& f) {
  if (!f.is_polynomial()) throw std::invalid_argument("power-chain check needs a polynomial map");
  const std::size_t n = f.n();
  const int d = f.degree();
  std::set<std::size_t> out;
  for (std::size_t j = 0; j < n; ++j) {
    bool chain = d >= 1;
    for (int k = 1; k <= d && chain; ++k) {
      std::vector<int> e(n, 0);
      e[j] = k;
      const MultiIndex alpha(e);
      chain = std::any_of(f.numerator().begin(), f.numerator().end(),
                          [&](const Polynomial& p) { return p.coefficient(alpha) != Complex(0.0); });
    }
    if (chain) out.insert(j);
  }
  return out;
}

double eq15_residual(const RationalMap& f, const BallAutomorphism& gamma) {
  if (gamma.dim() != f.n()) throw DimensionError("automorphism dimension differs from map source");
  if (f.value_at_origin().norm() > kEqTolerance) throw std::invalid_argument("residual check needs p(0) = 0");
  const Vector a = gamma.a();
  const Vector ua = gamma.u() * a;
  auto h = [&](const Vector& z) {
    const auto pt = std::vector<Complex>(z.data(), z.data() + z.size());
    Vector p(static_cast<Eigen::Index>(f.target_dim()));
    for (std::size_t j = 0; j < f.target_dim(); ++j) p(static_cast<Eigen::Index>(j)) = f.numerator()[j].evaluate(pt);
    return norm_l(p, f.m()) - std::norm(f.denominator().evaluate(pt));
  };
  const double lhs = h(a) * h(ua);
  const double rhs = std::pow(1.0 - a.squaredNorm(), 2 * f.degree());
  return std::abs(lhs - rhs);
}

std::vector<Matrix> group_closure(const std::vector<Matrix>& generators, std::size_t dim, std::size_t cap, double tol) {
  const auto d = static_cast<Eigen::Index>(dim);
  for (const auto& g : generators) {
    if (g.rows() != d || g.cols() != d) throw DimensionError("generator has wrong size");
    if ((g.adjoint() * g - Matrix::Identity(d, d)).cwiseAbs().maxCoeff() > kEqTolerance) {
      throw std::invalid_argument("group generator is not unitary");
    }
  }
  std::vector<Matrix> elements{Matrix::Identity(d, d)};
  auto known = [&](const Matrix& m) {
    return std::any_of(elements.begin(), elements.end(),
                       [&](const Matrix& e) { return (e - m).cwiseAbs().maxCoeff() <= tol; });
  };
  for (std::size_t next = 0; next < elements.size(); ++next) {
    for (const auto& g : generators) {
      Matrix prod = elements[next] * g;
      if (known(prod)) continue;
      if (elements.size() >= cap) throw GroupClosureError("group closure exceeded its cap");
      elements.push_back(std::move(prod));
    }
  }
  return elements;
}

StrictStabilizer strict_stabilizer(const RationalMap& f, const Tolerances& tol) {
  StrictStabilizer s;
  const std::size_t n = f.n();
  // A diagonal element fixes f exactly when it fixes every monomial present.
  std::set<std::vector<int>> rows;
  auto collect = [&](const Polynomial& p) {
    for (const auto& [alpha, _] : p.terms()) {
      if (alpha.total() > 0) rows.insert(alpha.exponents());
    }
  };
  for (const auto& p : f.numerator()) collect(p);
  collect(f.denominator());
  s.diagonal = torus_subgroup(n, {rows.begin(), rows.end()});

  if (n <= kMaxPermutationDim) {
    for (const auto& perm : all_permutations(n)) {
      bool fixed = approx_equal(f.denominator().permuted(perm), f.denominator(), tol.eq);
      for (std::size_t j = 0; j < f.target_dim() && fixed; ++j) {
        fixed = approx_equal(f.numerator()[j].permuted(perm), f.numerator()[j], tol.eq);
      }
      if (fixed) s.permutations.push_back(perm);
    }
  } else {
    s.permutations_checked = false;
  }

  s.generators = s.diagonal.generator_matrices();
  for (const auto& perm : s.permutations) {
    if (!is_identity(perm)) s.generators.push_back(permutation_matrix(perm));
  }
  if (s.diagonal.torus_dim == 0 && s.permutations_checked) {
    try {
      s.order = group_closure(s.generators, n, 10000, tol.group).size();
    } catch (const GroupClosureError&) {
      s.order.reset();
    }
  }
  return s;
}

GroupReport group_report(const RationalMap& f, const Tolerances& tol) {
  GroupReport r;
  const HermitianForm h = form_of(f);
  r.torus = torus_test(f, tol);
  r.full_unitary = full_unitary_test(f, tol);
  r.blocks = block_partition(h, tol);
  r.diagonal = diagonal_stabilizer(h, tol);
  if (f.n() <= kMaxPermutationDim) {
    r.permutations = permutation_stabilizer(f, tol);
  } else {
    r.notes.push_back("permutation stabilizer skipped: n > 8");
  }
  r.source_rank_upper = r.blocks.blocks.size();
  r.notes.push_back("source rank is an upper bound; no minimization over conjugating automorphisms");
  if (f.is_polynomial()) {
    r.origin_moving_excluded = power_chain_check(f).empty();
  } else {
    r.notes.push_back("power-chain criterion applies to polynomial maps only");
  }
  if (r.full_unitary.target_normalized) {
    r.notes.push_back("f(0) != 0: a target automorphism moved f(0) to the origin before the full unitary test");
  }
  return r;
}

// ---------------------------------------------------------------------------
// Equation system

namespace {

// Variable layout: x (n1), conj x (n1), u (n1^2), conj u (n1^2).
struct SystemLayout {
  std::size_t n1;
  std::size_t x(std::size_t a) const { return a; }
  std::size_t xbar(std::size_t a) const { return n1 + a; }
  std::size_t u(std::size_t a, std::size_t b) const { return 2 * n1 + a * n1 + b; }
  std::size_t ubar(std::size_t a, std::size_t b) const { return 2 * n1 + n1 * n1 + a * n1 + b; }
  std::size_t total() const { return 2 * n1 + 2 * n1 * n1; }
};

Polynomial var_product(std::size_t nvars, std::initializer_list<std::size_t> vars, Complex c = 1.0) {
  std::vector<int> e(nvars, 0);
  for (auto v : vars) ++e[v];
  return Polynomial::monomial(MultiIndex(e), c);
}

}  // namespace

double InvarianceSystem::residual(const Matrix& u) const {
  const auto n1 = static_cast<Eigen::Index>(n + 1);
  if (u.rows() != n1 || u.cols() != n1) throw DimensionError("matrix has wrong size for this system");
  std::vector<Complex> point;
  for (Eigen::Index a = 0; a < n1; ++a) {
    for (Eigen::Index b = 0; b < n1; ++b) point.push_back(u(a, b));
  }
  for (Eigen::Index a = 0; a < n1; ++a) {
    for (Eigen::Index b = 0; b < n1; ++b) point.push_back(std::conj(u(a, b)));
  }
  double worst = 0.0;
  for (const auto& eq : equations) worst = std::max(worst, std::abs(eq.poly.evaluate(point)));
  return worst;
}

double InvarianceSystem::invariance_residual(const Matrix& u) const {
  InvarianceSystem only = *this;
  std::erase_if(only.equations, [](const Equation& e) { return e.kind != "invariance"; });
  return only.residual(u);
}

InvarianceSystem emit_invariance_system(const RationalMap& f) {
  const std::size_t n = f.n();
  const std::size_t n1 = n + 1;
  const int d = f.degree();
  const SystemLayout L{n1};
  const std::size_t nv = L.total();
  InvarianceSystem sys;
  sys.n = n;
  sys.degree = d;
  for (const char* prefix : {"u", "conj(u"}) {
    for (std::size_t a = 0; a < n1; ++a) {
      for (std::size_t b = 0; b < n1; ++b) {
        std::string name = std::string(prefix) + std::to_string(a + 1) + "_" + std::to_string(b + 1);
        if (prefix[0] == 'c') name += ")";
        sys.unknowns.push_back(std::move(name));
      }
    }
  }

  // Homogenized form: exponent (alpha, d - |alpha|) in x = (z, s).
  const HermitianForm h = form_of(f);
  auto homogenize = [&](const MultiIndex& alpha) {
    std::vector<int> e(alpha.exponents());
    e.push_back(d - alpha.total());
    return e;
  };

  // Y_b = sum_a x_a u_ab and its conjugate; Ye_b is Y_b at x = (0, ..., 0, 1).
  std::vector<Polynomial> y, ybar, ye, yebar;
  for (std::size_t b = 0; b < n1; ++b) {
    Polynomial p(nv), pb(nv);
    for (std::size_t a = 0; a < n1; ++a) {
      p += var_product(nv, {L.x(a), L.u(a, b)});
      pb += var_product(nv, {L.xbar(a), L.ubar(a, b)});
    }
    y.push_back(std::move(p));
    ybar.push_back(std::move(pb));
    ye.push_back(var_product(nv, {L.u(n1 - 1, b)}));
    yebar.push_back(var_product(nv, {L.ubar(n1 - 1, b)}));
  }
  auto power_product = [&](const std::vector<Polynomial>& base, const std::vector<int>& e) {
    Polynomial r = Polynomial::constant(nv, 1.0);
    for (std::size_t b = 0; b < e.size(); ++b) {
      if (e[b] > 0) r = r * pow(base[b], e[b]);
    }
    return r;
  };

  Polynomial hxu(nv), heu(nv), hx(nv);
  std::map<MultiIndex, Polynomial> holo_cache, anti_cache;
  for (const auto& [key, c] : h.entries()) {
    const auto ea = homogenize(key.first);
    const auto eb = homogenize(key.second);
    auto hit = holo_cache.find(key.first);
    if (hit == holo_cache.end()) hit = holo_cache.emplace(key.first, power_product(y, ea)).first;
    auto ait = anti_cache.find(key.second);
    if (ait == anti_cache.end()) ait = anti_cache.emplace(key.second, power_product(ybar, eb)).first;
    hxu += hit->second * ait->second * c;
    heu += power_product(ye, ea) * power_product(yebar, eb) * c;
    std::vector<int> mono(nv, 0);
    for (std::size_t a = 0; a < n1; ++a) {
      mono[L.x(a)] = ea[a];
      mono[L.xbar(a)] = eb[a];
    }
    hx.add_term(MultiIndex(mono), c);
  }
  const Complex h_origin = h.entry(MultiIndex(n), MultiIndex(n));
  const Polynomial expr = hxu * h_origin - heu * hx;

  // Split by the x, conj(x) exponents; each coefficient is one equation in u.
  const std::size_t nu = 2 * n1 * n1;
  std::map<std::pair<MultiIndex, MultiIndex>, Polynomial> grouped;
  for (const auto& [alpha, c] : expr.terms()) {
    const auto& e = alpha.exponents();
    MultiIndex xa(std::vector<int>(e.begin(), e.begin() + static_cast<std::ptrdiff_t>(n1)));
    MultiIndex xb(std::vector<int>(e.begin() + static_cast<std::ptrdiff_t>(n1), e.begin() + static_cast<std::ptrdiff_t>(2 * n1)));
    MultiIndex ue(std::vector<int>(e.begin() + static_cast<std::ptrdiff_t>(2 * n1), e.end()));
    auto it = grouped.find({xa, xb});
    if (it == grouped.end()) it = grouped.emplace(std::make_pair(xa, xb), Polynomial(nu)).first;
    it->second.add_term(ue, c);
  }
  for (auto& [key, poly] : grouped) {
    if (!poly.is_zero()) sys.equations.push_back({"invariance", key.first, key.second, std::move(poly)});
  }

  // U J U^* = J with J = diag(1, ..., 1, -1).
  auto uvar = [&](std::size_t a, std::size_t b) { return a * n1 + b; };
  auto ubvar = [&](std::size_t a, std::size_t b) { return n1 * n1 + a * n1 + b; };
  for (std::size_t a = 0; a < n1; ++a) {
    for (std::size_t c = 0; c < n1; ++c) {
      Polynomial p(nu);
      for (std::size_t b = 0; b < n1; ++b) {
        const double j = (b + 1 == n1) ? -1.0 : 1.0;
        p += var_product(nu, {uvar(a, b), ubvar(c, b)}, j);
      }
      if (a == c) p -= Polynomial::constant(nu, (a + 1 == n1) ? -1.0 : 1.0);
      std::vector<int> ia(n1, 0), ic(n1, 0);
      ia[a] = 1;
      ic[c] = 1;
      sys.equations.push_back({"pseudo-unitary", MultiIndex(ia), MultiIndex(ic), std::move(p)});
    }
  }

  // det U = 1 by the Leibniz expansion.
  Polynomial det(nu);
  for (const auto& perm : all_permutations(n1)) {
    int inversions = 0;
    for (std::size_t i = 0; i < n1; ++i) {
      for (std::size_t j = i + 1; j < n1; ++j) inversions += perm[i] > perm[j] ? 1 : 0;
    }
    std::vector<int> e(nu, 0);
    for (std::size_t a = 0; a < n1; ++a) ++e[uvar(a, static_cast<std::size_t>(perm[a]))];
    det.add_term(MultiIndex(e), (inversions % 2 == 0) ? 1.0 : -1.0);
  }
  det -= Polynomial::constant(nu, 1.0);
  sys.equations.push_back({"determinant", MultiIndex(n1), MultiIndex(n1), std::move(det)});
  return sys;
}

}  // namespace ballmaps
