#pragma once

#include <Eigen/QR>
#include <cmath>
#include <random>
#include <vector>

#include "ballmaps/maps.hpp"

namespace testing_support {

using ballmaps::Complex;
using ballmaps::Matrix;
using ballmaps::MultiIndex;
using ballmaps::Polynomial;
using ballmaps::Vector;

inline Complex random_complex(std::mt19937_64& rng, double radius = 1.0) {
  std::uniform_real_distribution<double> u(-radius, radius);
  return {u(rng), u(rng)};
}

inline Polynomial random_polynomial(std::mt19937_64& rng, std::size_t nvars, int max_degree, int terms) {
  Polynomial p(nvars);
  std::uniform_int_distribution<int> deg(0, max_degree);
  for (int t = 0; t < terms; ++t) {
    const auto choices = ballmaps::monomials_of_degree(nvars, deg(rng));
    std::uniform_int_distribution<std::size_t> pick(0, choices.size() - 1);
    p.add_term(choices[pick(rng)], random_complex(rng));
  }
  return p;
}

inline std::vector<Complex> random_polydisc_point(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> r(0.0, 1.0);
  std::uniform_real_distribution<double> t(0.0, 2.0 * M_PI);
  std::vector<Complex> z(n);
  for (auto& v : z) v = std::polar(r(rng), t(rng));
  return z;
}

inline Vector random_ball_point(std::mt19937_64& rng, std::size_t n, double max_radius = 0.8) {
  Vector a(static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < a.size(); ++i) a(i) = random_complex(rng);
  std::uniform_real_distribution<double> r(0.05, max_radius);
  return a * (r(rng) / a.norm());
}

inline Matrix random_unitary(std::mt19937_64& rng, std::size_t n) {
  const auto d = static_cast<Eigen::Index>(n);
  Matrix m(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) m(i, j) = random_complex(rng);
  }
  Eigen::HouseholderQR<Matrix> qr(m);
  return qr.householderQ() * Matrix::Identity(d, d);
}

inline Matrix permutation_matrix(const std::vector<int>& perm) {
  // (U z)_i = z_{perm[i]}.
  const auto d = static_cast<Eigen::Index>(perm.size());
  Matrix m = Matrix::Zero(d, d);
  for (Eigen::Index i = 0; i < d; ++i) m(i, perm[static_cast<std::size_t>(i)]) = 1.0;
  return m;
}

inline std::vector<Complex> to_std(const Vector& v) { return {v.data(), v.data() + v.size()}; }

// Direct evaluation of | ||f(z)||^2 - 1 | on normalized complex Gaussians.
inline double sphere_residual(const ballmaps::RationalMap& f, std::uint64_t seed, int count = 200) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  double worst = 0.0;
  for (int k = 0; k < count; ++k) {
    Vector z(static_cast<Eigen::Index>(f.n()));
    for (Eigen::Index i = 0; i < z.size(); ++i) z(i) = Complex(g(rng), g(rng));
    z /= z.norm();
    const Vector w = f.evaluate(to_std(z));
    double s = 0.0;
    for (std::size_t j = 0; j < f.target_dim(); ++j) {
      s += (j < f.m() ? 1.0 : -1.0) * std::norm(w(static_cast<Eigen::Index>(j)));
    }
    worst = std::max(worst, std::abs(s - 1.0));
  }
  return worst;
}

}  // namespace testing_support
