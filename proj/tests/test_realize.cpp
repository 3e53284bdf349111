#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ballmaps/realize.hpp"
#include "support.hpp"

using namespace ballmaps;
using namespace testing_support;

namespace {

Polynomial mono(std::initializer_list<int> e, Complex c = 1.0) { return Polynomial::monomial(MultiIndex(e), c); }

HermitianForm norm_squared(std::size_t n, const std::vector<Polynomial>& comps) {
  HermitianForm h = HermitianForm::constant(n, 0.0);
  for (const auto& p : comps) h += HermitianForm::squared_modulus(p);
  return h;
}

// sum lambda_j^2 |z|^(2 m_j), built term by term.
HermitianForm radial_target(std::size_t n, const PadResult& r) {
  HermitianForm h = HermitianForm::constant(n, 0.0);
  for (std::size_t j = 0; j < r.powers.size(); ++j) {
    HermitianForm term = HermitianForm::constant(n, r.lambda[j] * r.lambda[j]);
    for (int k = 0; k < r.powers[j]; ++k) term = term * HermitianForm::squared_norm(n);
    h += term;
  }
  return h;
}

void check_pad(std::size_t n, const std::vector<Polynomial>& p, const PadResult& r) {
  double total = 0.0;
  for (double l : r.lambda) total += l * l;
  CHECK(std::abs(total - 1.0) < 1e-12);
  const auto lhs = norm_squared(n, p) * (r.epsilon * r.epsilon) + norm_squared(n, r.q);
  CHECK(max_entry_diff(lhs, radial_target(n, r)) <= 1e-9);
  CHECK(is_proper(r.map).proper);
}

bool same_form(const RationalMap& a, const RationalMap& b) { return max_entry_diff(form_of(a), form_of(b)) < 1e-12; }

bool is_member(const RationalMap& f, const Permutation& p) {
  return membership(f, BallAutomorphism::unitary(ballmaps::permutation_matrix(p))).member;
}

}  // namespace

TEST_CASE("factor_form examples") {
  const auto sphere = factor_form(HermitianForm::sphere(2));
  CHECK(sphere.positive.size() == 2);
  CHECK(sphere.negative.size() == 1);
  CHECK(max_entry_diff(norm_squared(2, sphere.positive), HermitianForm::squared_norm(2)) < 1e-14);
  CHECK(max_entry_diff(norm_squared(2, sphere.negative), HermitianForm::constant(2, 1.0)) < 1e-14);

  const auto n2 = HermitianForm::squared_norm(2);
  const auto one = HermitianForm::constant(2, 1.0);
  const auto psd = factor_form(pow(one + n2, 2) - one);
  CHECK(psd.negative.empty());
  CHECK(max_entry_diff(norm_squared(2, psd.positive), n2 * 2.0 + n2 * n2) < 1e-13);

  const auto f4 = factor_form(form_of(catalog("faran-4")));
  CHECK(f4.positive.size() == 3);
  CHECK(f4.negative.size() == 1);
}

TEST_CASE("factor_form reconstructs random forms") {
  std::mt19937_64 rng(61);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<Polynomial> a, b;
    for (int j = 0; j < 3; ++j) a.push_back(random_polynomial(rng, 2, 3, 4));
    for (int j = 0; j < 2; ++j) b.push_back(random_polynomial(rng, 2, 3, 4));
    const auto h = norm_squared(2, a) - norm_squared(2, b);
    const auto fac = factor_form(h);
    CHECK(max_entry_diff(norm_squared(2, fac.positive) - norm_squared(2, fac.negative), h) <= 1e-9 * (1.0 + h.max_abs()));
    CHECK(fac.positive.size() <= 3);
    CHECK(fac.negative.size() <= 2);
  }
}

TEST_CASE("padding with forced epsilon") {
  const std::vector<Polynomial> p{mono({1, 1})};
  PadOptions opts;
  opts.epsilon = std::sqrt(2.0 / 3.0);
  opts.weights = std::vector<double>{1.0 / 3, 1.0 / 3, 1.0 / 3};
  const auto r = pad_to_proper(2, p, opts);
  check_pad(2, p, r);
  CHECK(r.q.size() == 5);
  const double c = 1.0 / std::sqrt(3.0);
  const std::vector<Polynomial> expected{Polynomial::constant(2, c), mono({1, 0}, c), mono({0, 1}, c), mono({2, 0}, c), mono({0, 2}, c)};
  CHECK(max_entry_diff(norm_squared(2, r.q), norm_squared(2, expected)) < 1e-14);
  CHECK(sphere_residual(r.map, 62) < 1e-12);

  opts.epsilon = 2.0;
  CHECK_THROWS(pad_to_proper(2, p, opts));
}

TEST_CASE("padding of the empty map and affine maps") {
  const auto empty = pad_to_proper(2, {});
  CHECK(empty.powers == std::vector<int>{0});
  REQUIRE(empty.q.size() == 1);
  CHECK(std::abs(std::abs(empty.q[0].constant_term()) - 1.0) < 1e-14);

  const std::vector<Polynomial> p{Polynomial::constant(2, 1.0) + mono({1, 0}) + mono({0, 1})};
  const auto r = pad_to_proper(2, p);
  CHECK(r.powers == std::vector<int>{0, 1});
  CHECK(r.epsilon > 0.0);
  check_pad(2, p, r);
  CHECK(sphere_residual(r.map, 63) < 1e-12);

  // Omitted degrees stay omitted.
  const auto cubic = pad_to_proper(2, {mono({3, 0}) + mono({1, 2})});
  CHECK(cubic.powers == std::vector<int>{3});
}

TEST_CASE("padding identity holds for random polynomials") {
  std::mt19937_64 rng(64);
  for (int trial = 0; trial < 8; ++trial) {
    std::vector<Polynomial> p;
    for (int j = 0; j < 2; ++j) p.push_back(random_polynomial(rng, 2, 3, 3));
    const auto r = pad_to_proper(2, p);
    check_pad(2, p, r);
    CHECK(sphere_residual(r.map, 65 + static_cast<std::uint64_t>(trial)) < 1e-9);
  }
}

TEST_CASE("tensor_with_power matches the explicit tensor form") {
  const std::vector<Polynomial> q{Polynomial::constant(2, 0.5) + mono({1, 0}), mono({1, 1}, 0.3)};
  const auto explicit_map = tensor(make_polynomial_map(q), tensor_power(2, 3));
  const auto compact = tensor_with_power(q, 2, 3);
  CHECK(max_entry_diff(form_of(compact), form_of(explicit_map)) < 1e-12);
}

TEST_CASE("symmetric group maps") {
  const auto f2 = symmetric_group_map(2);
  CHECK(f2.degree() == 3);
  CHECK(is_proper(f2).proper);
  CHECK(permutation_stabilizer(f2) == std::vector<Permutation>{{0, 1}, {1, 0}});
  CHECK(diagonal_stabilizer(f2).is_trivial());
  CHECK(power_chain_check(f2).empty());

  const auto f3 = symmetric_group_map(3);
  CHECK(is_proper(f3).proper);
  CHECK(permutation_stabilizer(f3).size() == 6);
  CHECK(diagonal_stabilizer(f3).is_trivial());
  CHECK(sphere_residual(f3, 66, 1000) <= 1e-9);

  CHECK(same_form(symmetric_group_map(1), catalog("corollary-6-2")));
}

TEST_CASE("second symmetric group construction") {
  const auto f1 = symmetric_group_map_v2(1);
  CHECK(is_proper(f1).proper);
  CHECK(diagonal_stabilizer(f1).is_trivial());
  CHECK(permutation_stabilizer(f1).size() == 1);

  const auto f2 = symmetric_group_map_v2(2);
  CHECK(is_proper(f2).proper);
  CHECK(permutation_stabilizer(f2).size() == 2);
  CHECK(diagonal_stabilizer(f2).is_trivial());

  const auto f3 = symmetric_group_map_v2(3);
  CHECK(is_proper(f3).proper);
  CHECK(permutation_stabilizer(f3).size() == 6);
  CHECK(sphere_residual(f3, 67, 1000) <= 1e-9);
}

TEST_CASE("permutation group closure") {
  CHECK(permutation_group(3, {{1, 2, 0}}).size() == 3);
  CHECK(permutation_group(3, {{1, 2, 0}, {1, 0, 2}}).size() == 6);
  CHECK(permutation_group(4, {}).size() == 1);
  CHECK_THROWS(permutation_group(3, {{0, 0, 1}}));
}

TEST_CASE("subgroup realization") {
  const auto a3 = realize_subgroup(3, {{1, 2, 0}});
  CHECK(is_proper(a3).proper);
  CHECK(permutation_stabilizer(a3) == permutation_group(3, {{1, 2, 0}}));
  CHECK(diagonal_stabilizer(a3).is_trivial());
  CHECK(sphere_residual(a3, 68, 1000) <= 1e-9);

  const auto trivial = realize_subgroup(2, {});
  CHECK(is_proper(trivial).proper);
  CHECK(permutation_stabilizer(trivial).size() == 1);
  CHECK(diagonal_stabilizer(trivial).is_trivial());

  CHECK(same_form(realize_subgroup(3, {{1, 0, 2}, {0, 2, 1}}), symmetric_group_map(3)));
  CHECK_THROWS(realize_subgroup(3, {{0, 1}}));
}

TEST_CASE("generators of the requested group are members with c = 1") {
  const std::vector<Permutation> gens{{1, 0, 2}};
  const auto f = realize_subgroup(3, gens);
  for (const auto& g : gens) {
    const auto r = membership(f, BallAutomorphism::unitary(ballmaps::permutation_matrix(g)));
    CHECK(r.member);
    CHECK(std::abs(r.c_gamma - 1.0) <= 1e-9);
  }
  CHECK_FALSE(is_member(f, {0, 2, 1}));
  CHECK_FALSE(is_member(f, {1, 2, 0}));
}

TEST_CASE("realization from supplied invariants") {
  Matrix minus(1, 1);
  minus(0, 0) = -1.0;
  const auto f = realize_from_invariants(1, {mono({2})}, {minus});
  CHECK(is_proper(f).proper);
  const auto d = diagonal_stabilizer(f);
  CHECK(d.torus_dim == 0);
  CHECK(d.order() == 2);
  CHECK(sphere_residual(f, 69, 1000) <= 1e-9);

  const Complex eta = std::polar(1.0, 2.0 * M_PI / 3.0);
  Matrix rot = Matrix::Zero(2, 2);
  rot(0, 0) = eta;
  rot(1, 1) = eta * eta;
  const auto g = realize_from_invariants(2, {mono({3, 0}), mono({0, 3}), mono({1, 1})}, {rot});
  CHECK(is_proper(g).proper);
  CHECK(membership(g, BallAutomorphism::unitary(rot)).member);
  CHECK(diagonal_stabilizer(g).order() == 3);
  CHECK(sphere_residual(g, 70, 1000) <= 1e-9);

  const auto t = realize_from_invariants(3, {mono({1, 0, 0}), mono({0, 1, 0}), mono({0, 0, 1})}, {});
  CHECK(is_proper(t).proper);
  CHECK(diagonal_stabilizer(t).is_trivial());

  CHECK_THROWS(realize_from_invariants(1, {Polynomial::constant(1, 1.0) + mono({2})}, {minus}));
  CHECK_THROWS(realize_from_invariants(1, {mono({1})}, {minus}));
}

TEST_CASE("pairwise products are preserved only by diagonal times permutation") {
  std::mt19937_64 rng(71);
  std::vector<Polynomial> p;
  for (std::size_t j = 0; j < 3; ++j) {
    for (std::size_t k = j + 1; k < 3; ++k) p.push_back(Polynomial::variable(3, j) * Polynomial::variable(3, k));
  }
  const auto f = make_polynomial_map(p);
  const auto base = positive_part(f);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * M_PI);
  const auto perms = all_permutations(3);
  for (int trial = 0; trial < 6; ++trial) {
    Matrix l = Matrix::Zero(3, 3);
    for (Eigen::Index i = 0; i < 3; ++i) l(i, i) = std::polar(1.0, angle(rng));
    const Matrix u = l * ballmaps::permutation_matrix(perms[static_cast<std::size_t>(trial)]);
    CHECK(max_entry_diff(positive_part(compose_source(f, BallAutomorphism::unitary(u))), base) < 1e-12);
    const Matrix w = random_unitary(rng, 3);
    CHECK(max_entry_diff(positive_part(compose_source(f, BallAutomorphism::unitary(w))), base) > 1e-3);
  }
}
