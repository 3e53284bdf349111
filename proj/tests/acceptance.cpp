// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fail.
#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "ballmaps/analysis.hpp"
#include "support.hpp"

using namespace ballmaps;
using namespace testing_support;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      if (pass) detail << "first failure: " << what << "; ";
      pass = false;
    }
  }
};

// Diagonal forms as polynomials in x_i = |z_i|^2, built independently of
// HermitianForm arithmetic.
using Exps = std::vector<int>;
using DiagPoly = std::map<Exps, double>;

DiagPoly diag_mul(const DiagPoly& a, const DiagPoly& b) {
  DiagPoly out;
  for (const auto& [ea, ca] : a) {
    for (const auto& [eb, cb] : b) {
      Exps e(ea.size());
      for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
      out[e] += ca * cb;
    }
  }
  return out;
}

DiagPoly diag_add(DiagPoly a, const DiagPoly& b, double scale = 1.0) {
  for (const auto& [e, c] : b) a[e] += scale * c;
  return a;
}

DiagPoly diag_const(std::size_t n, double c) { return {{Exps(n, 0), c}}; }

DiagPoly diag_var(std::size_t n, std::size_t i) {
  Exps e(n, 0);
  e[i] = 1;
  return {{e, 1.0}};
}

// Max coefficient error between a HermitianForm and a diagonal oracle.
double diag_error(const HermitianForm& h, const DiagPoly& expected) {
  double err = 0.0;
  std::set<Exps> seen;
  for (const auto& [key, c] : h.entries()) {
    if (!(key.first == key.second)) {
      err = std::max(err, std::abs(c));
      continue;
    }
    const auto& e = key.first.exponents();
    seen.insert(e);
    const auto it = expected.find(e);
    err = std::max(err, std::abs(c - (it == expected.end() ? 0.0 : it->second)));
  }
  for (const auto& [e, c] : expected) {
    if (!seen.count(e)) err = std::max(err, std::abs(c));
  }
  return err;
}

bool close_matrix(const Matrix& a, const Matrix& b, double tol = 1e-9) { return (a - b).cwiseAbs().maxCoeff() <= tol; }

bool same_matrix_set(const std::vector<Matrix>& a, const std::vector<Matrix>& b) {
  auto covered = [](const std::vector<Matrix>& x, const std::vector<Matrix>& y) {
    for (const auto& m : x) {
      if (std::none_of(y.begin(), y.end(), [&](const Matrix& k) { return close_matrix(m, k); })) return false;
    }
    return true;
  };
  return a.size() == b.size() && covered(a, b) && covered(b, a);
}

// ---------------------------------------------------------------------------

Outcome faran_table() {
  Outcome o;
  double worst = 0.0;
  auto timed = [&](const char* name) {
    const auto start = Clock::now();
    auto b = analyze(catalog(name));
    const double t = seconds_since(start);
    worst = std::max(worst, t);
    o.require(t < 1.0, std::string(name) + " took over 1 s");
    o.require(b.proper.proper, std::string(name) + " not proper");
    return b;
  };

  const auto f1 = timed("faran-1");
  o.require(f1.report.full_unitary.invariant, "faran-1 full unitary");
  o.require(f1.report.full_unitary.powers && f1.report.full_unitary.powers->size() == 1 &&
                std::abs(f1.report.full_unitary.powers->at(0).weight - 1.0) < 1e-12 &&
                f1.report.full_unitary.powers->at(0).power == 1,
            "faran-1 powers (1,1)");

  const auto f2 = timed("faran-2");
  o.require(f2.report.torus.invariant, "faran-2 torus");
  o.require(f2.report.blocks.blocks == std::vector<std::vector<std::size_t>>{{0}, {1}}, "faran-2 blocks");
  o.require(f2.strict.order == std::optional<std::size_t>(1), "faran-2 G_f trivial");

  const auto f3 = timed("faran-3");
  o.require(f3.report.full_unitary.invariant, "faran-3 full unitary");
  o.require(f3.strict.order == std::optional<std::size_t>(2), "faran-3 G_f order 2");

  const auto f4 = timed("faran-4");
  o.require(f4.report.diagonal.is_full_torus(), "faran-4 full 2-torus");
  o.require(f4.report.permutations && *f4.report.permutations == std::vector<Permutation>{{0, 1}, {1, 0}},
            "faran-4 permutations {id, swap}");
  o.require(f4.strict.order == std::optional<std::size_t>(3), "faran-4 G_f order 3");
  const Complex eta = std::polar(1.0, 2.0 * M_PI / 3.0);
  Matrix m35 = Matrix::Zero(2, 2);
  m35(0, 0) = eta;
  m35(1, 1) = eta * eta;
  const std::vector<Matrix> cyclic{Matrix::Identity(2, 2), m35, m35 * m35};
  o.require(same_matrix_set(group_closure(f4.strict.generators, 2), cyclic), "faran-4 group generated by diag(eta, eta^2)");
  o.detail << "slowest analyze " << worst << " s";
  return o;
}

Outcome cubic_form() {
  Outcome o;
  const std::size_t n = 2;
  const DiagPoly x = diag_var(n, 0), y = diag_var(n, 1);
  const DiagPoly rho = diag_add(diag_add(x, y), diag_const(n, -1.0));
  const DiagPoly r1 = diag_add(rho, diag_const(n, 1.0));
  DiagPoly expected = diag_add(diag_mul(diag_mul(r1, r1), r1), diag_const(n, -1.0));
  expected = diag_add(expected, diag_mul(rho, diag_mul(x, y)), -3.0);
  const double err = diag_error(form_of(catalog("faran-4")), expected);
  o.require(err <= 1e-12, "coefficient error");
  o.detail << "max coefficient error " << err;
  return o;
}

Outcome tensor_power_forms() {
  Outcome o;
  double worst = 0.0;
  for (std::size_t n = 1; n <= 4; ++n) {
    DiagPoly norm;
    for (std::size_t i = 0; i < n; ++i) norm = diag_add(norm, diag_var(n, i));
    DiagPoly power = diag_const(n, 1.0);
    for (int m = 1; m <= 5; ++m) {
      power = diag_mul(power, norm);
      const double err = diag_error(form_of(tensor_power(n, m)), diag_add(power, diag_const(n, -1.0)));
      worst = std::max(worst, err);
      o.require(err <= 1e-10, "n=" + std::to_string(n) + " m=" + std::to_string(m));
    }
  }
  o.detail << "max coefficient error " << worst << " over 20 cases";
  return o;
}

Outcome automorphism_tensors() {
  Outcome o;
  std::mt19937_64 rng(2701);
  double worst = 0.0, worst_top = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t k = 1 + static_cast<std::size_t>(trial % 3);
    std::vector<Vector> points;
    RationalMap explicit_tensor = make_polynomial_map({Polynomial::constant(2, 1.0)});
    double prod = 1.0;
    for (std::size_t j = 0; j < k; ++j) {
      points.push_back(random_ball_point(rng, 2, 0.9));
      prod *= 1.0 - points.back().squaredNorm();
      explicit_tensor = tensor(explicit_tensor, automorphism_map(BallAutomorphism::phi(points.back())));
    }
    const double err = max_entry_diff(automorphism_tensor_form(points), form_of(explicit_tensor));
    worst = std::max(worst, err);
    o.require(err <= 1e-8, "trial " + std::to_string(trial) + " form");
    const auto b = automorphism_tensor_expansion(points);
    const double top = max_entry_diff(b.back(), HermitianForm::constant(2, prod));
    worst_top = std::max(worst_top, top);
    o.require(top <= 1e-12, "trial " + std::to_string(trial) + " top coefficient");
  }
  o.detail << "max form error " << worst << ", top coefficient error " << worst_top;
  return o;
}

std::vector<RationalMap> polynomial_pool(std::size_t n) {
  std::vector<RationalMap> pool;
  for (const auto& name : catalog_names()) {
    auto f = catalog(name);
    if (f.n() == n && f.l() == 0 && f.is_polynomial() && f.value_at_origin().norm() == 0.0) pool.push_back(std::move(f));
  }
  return pool;
}

Outcome target_scaling() {
  Outcome o;
  std::mt19937_64 rng(909);
  const auto pool = polynomial_pool(2);
  std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
  std::uniform_real_distribution<double> angle(0.1, 1.4);
  double worst = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    // Random proper polynomial fixture: juxtaposition of two catalog maps,
    // precomposed with a random unitary.
    const auto f = compose_source(juxtapose_theta(pool[pick(rng)], pool[pick(rng)], angle(rng)),
                                  BallAutomorphism::unitary(random_unitary(rng, 2)));
    o.require(is_proper(f).proper, "fixture proper");
    const Vector a = random_ball_point(rng, f.target_dim(), 0.9);
    const auto moved = form_of(compose_target(f, BallAutomorphism::phi(a)));
    const double err = max_entry_diff(moved, form_of(f) * (1.0 - a.squaredNorm()));
    worst = std::max(worst, err);
    o.require(err <= 1e-9, "trial " + std::to_string(trial));
  }
  o.detail << "max coefficient error " << worst << " over 10 fixtures";
  return o;
}

// Subgroup of S_3 generated by gens, by brute-force closure on index lists.
std::set<Permutation> closure_s3(const std::vector<Permutation>& gens) {
  std::set<Permutation> group{{0, 1, 2}};
  bool grown = true;
  while (grown) {
    grown = false;
    const std::vector<Permutation> current(group.begin(), group.end());
    for (const auto& a : current) {
      for (const auto& b : gens) {
        Permutation c(3);
        for (int i = 0; i < 3; ++i) c[static_cast<std::size_t>(i)] = a[static_cast<std::size_t>(b[static_cast<std::size_t>(i)])];
        grown = group.insert(c).second || grown;
      }
    }
  }
  return group;
}

Outcome realization_suite() {
  Outcome o;
  const std::vector<std::vector<Permutation>> subgroups{
      {}, {{1, 0, 2}}, {{0, 2, 1}}, {{2, 1, 0}}, {{1, 2, 0}}, {{1, 2, 0}, {1, 0, 2}}};
  const auto start = Clock::now();
  double worst_residual = 0.0, worst_sample = 0.0;
  for (const auto& gens : subgroups) {
    const auto group = closure_s3(gens);
    const std::string tag = "|G|=" + std::to_string(group.size()) + " ";
    const auto f = realize_subgroup(3, gens);
    const auto cert = is_proper(f);
    worst_residual = std::max(worst_residual, cert.residual);
    o.require(cert.proper && cert.residual <= 1e-8, tag + "is_proper");
    const auto sample = sphere_sample_check(f, 1000, 1e-9);
    worst_sample = std::max(worst_sample, sample.max_residual);
    o.require(sample.pass, tag + "sphere sample");
    const auto stab = permutation_stabilizer(f);
    o.require(std::set<Permutation>(stab.begin(), stab.end()) == group, tag + "permutation stabilizer");
    o.require(diagonal_stabilizer(f).is_trivial(), tag + "diagonal stabilizer");
  }
  const double t = seconds_since(start);
  o.require(t < 60.0, "runtime");
  o.detail << "6 subgroups, max is_proper residual " << worst_residual << ", max sample residual " << worst_sample
           << ", " << t << " s";
  return o;
}

Outcome source_ranks() {
  Outcome o;
  for (std::size_t n = 2; n <= 4; ++n) {
    const auto w = whitney(n);
    std::vector<std::size_t> head(n - 1);
    std::iota(head.begin(), head.end(), 0);
    o.require(block_partition(w).blocks == std::vector<std::vector<std::size_t>>{head, {n - 1}},
              "whitney(" + std::to_string(n) + ") blocks");
    o.require(source_rank_upper(w) == 2, "whitney(" + std::to_string(n) + ") source rank");
  }
  o.require(source_rank_upper(catalog("example-3-1")) == 2, "example-3-1 source rank");
  for (int k = 1; k <= 3; ++k) {
    o.require(image_rank(catalog("whitney-seq-" + std::to_string(k))) == static_cast<std::size_t>(k) + 2,
              "whitney-seq-" + std::to_string(k) + " image rank");
  }
  o.detail << "whitney n=2..4, example-3-1, whitney-seq-1..3";
  return o;
}

Outcome negative_fixtures() {
  Outcome o;
  for (const char* name : {"corollary-6-2", "example-7-2"}) {
    const auto b = analyze(catalog(name));
    o.require(b.report.diagonal.is_trivial(), std::string(name) + " diagonal");
    o.require(b.report.permutations && b.report.permutations->size() == 1, std::string(name) + " permutations");
    o.require(!b.report.torus.invariant, std::string(name) + " torus");
  }
  o.detail << "corollary-6-2, example-7-2";
  return o;
}

// Unitary members of Gamma_f for a catalog-style map: the finite part and
// random points of the diagonal stabilizer, coordinate permutations, and
// random unitaries when the map is unitarily invariant.
std::vector<Matrix> known_members(const RationalMap& f, std::mt19937_64& rng) {
  const auto diag = diagonal_stabilizer(f);
  std::vector<Matrix> out = diag.generator_matrices();
  const auto d = static_cast<Eigen::Index>(f.n());
  std::uniform_real_distribution<double> t(0.0, 2.0 * M_PI);
  for (int k = 0; k < 2 && diag.torus_dim > 0; ++k) {
    std::vector<double> theta(f.n(), 0.0);
    for (const auto& dir : diag.torus_directions) {
      const double s = t(rng);
      for (std::size_t i = 0; i < f.n(); ++i) theta[i] += s * static_cast<double>(dir[i]);
    }
    Matrix u = Matrix::Zero(d, d);
    for (Eigen::Index i = 0; i < d; ++i) u(i, i) = std::polar(1.0, theta[static_cast<std::size_t>(i)]);
    out.push_back(u);
  }
  for (const auto& p : permutation_stabilizer(f)) {
    const Matrix m = ballmaps::permutation_matrix(p);
    if (!m.isIdentity()) out.push_back(m);
  }
  if (full_unitary_test(f).invariant) {
    out.push_back(random_unitary(rng, f.n()));
    out.push_back(random_unitary(rng, f.n()));
  }
  return out;
}

std::vector<Matrix> conjugated(const std::vector<Matrix>& members, const Matrix& v) {
  std::vector<Matrix> out;
  for (const auto& u : members) out.push_back(v.adjoint() * u * v);
  return out;
}

bool is_member(const RationalMap& f, const Matrix& u) { return membership(f, BallAutomorphism::unitary(u)).member; }

Outcome property_suites() {
  Outcome o;
  std::mt19937_64 rng(4141);
  std::size_t checks = 0, violations = 0;

  // Monotonicity under descend on the lowest-order subspace.
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = trial % 4 == 3 ? 3 : 2;
    // Only bases with a non-trivial unitary member carry information here.
    std::vector<RationalMap> pool;
    for (auto& f : polynomial_pool(n)) {
      if (!known_members(f, rng).empty()) pool.push_back(std::move(f));
    }
    const auto& base = pool[std::uniform_int_distribution<std::size_t>(0, pool.size() - 1)(rng)];
    const Matrix v = random_unitary(rng, n);
    const auto f = compose_source(base, BallAutomorphism::unitary(v));
    const auto members = conjugated(known_members(base, rng), v);
    const auto g = trial % 2 == 0 ? identity_map(n) : tensor_power(n, 2);
    const auto e = descend(f, lowest_order_subspace(f), g);
    for (const auto& u : members) {
      ++checks;
      if (!is_member(f, u) || !is_member(e, u)) ++violations;
    }
  }
  o.require(violations == 0, "descend monotonicity");
  const std::size_t mono_checks = checks;

  // Intersection law for J_theta(f, g (x) z^(x)m), m > deg f.
  std::size_t law_violations = 0, joint_members = 0;
  const auto pool = polynomial_pool(2);
  std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
  std::uniform_real_distribution<double> angle(0.2, 1.3);
  Matrix swap = Matrix::Zero(2, 2);
  swap(0, 1) = swap(1, 0) = 1.0;
  for (int trial = 0; trial < 20; ++trial) {
    const auto& bf = pool[pick(rng)];
    const auto& bg = pool[pick(rng)];
    const Matrix vf = random_unitary(rng, 2);
    const Matrix vg = trial % 2 == 0 ? vf : random_unitary(rng, 2);
    const auto f = compose_source(bf, BallAutomorphism::unitary(vf));
    const auto g = compose_source(bg, BallAutomorphism::unitary(vg));
    const int m = f.degree() + 1 + trial % 2;
    const auto j = juxtapose_theta(f, tensor(g, tensor_power(2, m)), angle(rng));
    std::vector<Matrix> candidates = conjugated(known_members(bf, rng), vf);
    for (auto& u : conjugated(known_members(bg, rng), vg)) candidates.push_back(std::move(u));
    candidates.push_back(random_unitary(rng, 2));
    candidates.push_back(swap);
    candidates.push_back(vf.adjoint() * swap * vf);
    for (const auto& u : candidates) {
      ++checks;
      const bool joint = is_member(f, u) && is_member(g, u);
      if (joint) ++joint_members;
      if (is_member(j, u) != joint) ++law_violations;
    }
  }
  o.require(law_violations == 0, "intersection law");
  o.detail << mono_checks << " monotonicity checks, " << checks - mono_checks << " intersection checks (" << joint_members << " joint members), "
           << violations + law_violations << " violations";
  return o;
}

Outcome necessary_condition() {
  Outcome o;
  std::mt19937_64 rng(1010);
  double worst = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t n = 2 + static_cast<std::size_t>(trial % 2);
    const std::size_t target = n + 1 + static_cast<std::size_t>(trial % 3);
    // Linear isometric embedding z -> W z with orthonormal columns.
    const Matrix w = random_unitary(rng, target).leftCols(static_cast<Eigen::Index>(n));
    std::vector<Polynomial> comps;
    for (Eigen::Index r = 0; r < w.rows(); ++r) {
      std::vector<Complex> row(w.cols());
      for (Eigen::Index c = 0; c < w.cols(); ++c) row[static_cast<std::size_t>(c)] = w(r, c);
      comps.push_back(Polynomial::linear(row));
    }
    const auto f = make_polynomial_map(std::move(comps));
    const BallAutomorphism gamma(random_unitary(rng, n), random_ball_point(rng, n, 0.9));
    const double r = eq15_residual(f, gamma);
    worst = std::max(worst, r);
    o.require(r <= 1e-10, "linear embedding trial " + std::to_string(trial));
  }
  Vector a(2);
  a << 0.5, 0.0;
  const double f3 = eq15_residual(catalog("faran-3"), BallAutomorphism::phi(a));
  o.require(f3 >= 1e-3, "faran-3 residual");
  o.detail << "max linear residual " << worst << ", faran-3 residual " << f3;
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"Faran table", faran_table},
      {"cubic form of faran-4", cubic_form},
      {"tensor power forms", tensor_power_forms},
      {"tensor of automorphisms", automorphism_tensors},
      {"target automorphism scaling", target_scaling},
      {"realization of S3 subgroups", realization_suite},
      {"source and image ranks", source_ranks},
      {"negative fixtures", negative_fixtures},
      {"descend and juxtaposition property suites", property_suites},
      {"necessary-condition residual", necessary_condition},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << "exception: " << e.what();
    }
    if (!o.pass) ++failed;
    std::printf("%s criterion %zu (%s): %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.str().c_str());
  }
  return failed == 0 ? 0 : 1;
}
