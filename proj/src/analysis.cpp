#include "ballmaps/analysis.hpp"

#include <cmath>
#include <random>

namespace ballmaps {

namespace {

// Box-Muller on two open-interval uniforms built from the raw 53-bit stream.
class GaussianStream {
 public:
  explicit GaussianStream(std::uint64_t seed) : rng_(seed) {}

  double next() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double t = 2.0 * M_PI * u2;
    spare_ = r * std::sin(t);
    has_spare_ = true;
    return r * std::cos(t);
  }

 private:
  double uniform() { return (static_cast<double>(rng_() >> 11) + 0.5) * 0x1.0p-53; }

  std::mt19937_64 rng_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace

std::vector<Vector> sphere_samples(std::size_t n, std::size_t count, std::uint64_t seed) {
  GaussianStream g(seed);
  std::vector<Vector> out;
  out.reserve(count);
  while (out.size() < count) {
    Vector z(static_cast<Eigen::Index>(n));
    for (Eigen::Index i = 0; i < z.size(); ++i) {
      const double re = g.next();
      z(i) = {re, g.next()};
    }
    const double norm = z.norm();
    if (norm < 1e-300) continue;
    out.push_back(z / norm);
  }
  return out;
}

SampleCheck sphere_sample_check(const RationalMap& f, std::size_t count, double tol, std::uint64_t seed) {
  if (count == 0) throw std::invalid_argument("sample count must be at least 1");
  SampleCheck out;
  out.seed = seed;
  out.count = count;
  out.tol = tol;
  const std::size_t m = f.m();
  for (const auto& z : sphere_samples(f.n(), count, seed)) {
    const std::span<const Complex> pt(z.data(), static_cast<std::size_t>(z.size()));
    const Complex q = f.denominator().evaluate(pt);
    if (std::abs(q) < 1e-12) {
      ++out.singular;
      continue;
    }
    double value = 0.0;
    for (std::size_t k = 0; k < f.target_dim(); ++k) {
      const double s = std::norm(f.numerator()[k].evaluate(pt));
      value += k < m ? s : -s;
    }
    out.max_residual = std::max(out.max_residual, std::abs(value / std::norm(q) - 1.0));
  }
  out.pass = out.singular == 0 && out.max_residual <= tol;
  return out;
}

AnalysisBundle analyze(const RationalMap& f, const Tolerances& tol, bool strict_permutations) {
  if (strict_permutations && f.n() > kMaxPermutationDim) {
    throw CapabilityError("permutation stabilizer requested for n = " + std::to_string(f.n()) + " > " +
                          std::to_string(kMaxPermutationDim));
  }
  const HermitianForm h = form_of(f);
  AnalysisBundle b{f,
                   is_proper(f, tol),
                   signature(h, tol),
                   hermitian_rank(f, tol),
                   std::nullopt,
                   group_report(f, tol),
                   strict_stabilizer(f, tol),
                   power_chain_check(f),
                   {}};
  if (f.l() == 0) {
    b.image_rank = image_rank(f, tol);
  } else {
    b.notes.push_back("image rank is defined for ball targets only");
  }
  if (f.l() == 0 && b.proper.proper && b.image_rank && b.hermitian_rank != *b.image_rank + 1) {
    b.notes.push_back("hermitian rank differs from image rank + 1");
  }
  for (auto& w : f.warnings()) b.notes.push_back(std::move(w));
  return b;
}

Json to_json(const SampleCheck& s) {
  return {{"max_residual", s.max_residual}, {"pass", s.pass},  {"seed", s.seed},
          {"count", s.count},               {"tol", s.tol},    {"singular", s.singular},
          {"rng", "mt19937_64 + Box-Muller"}};
}

Json to_json(const AnalysisBundle& b) {
  Json j;
  j["map"] = to_json(b.map);
  j["proper"] = to_json(b.proper);
  j["signature"] = to_json(b.signature);
  j["hermitian_rank"] = b.hermitian_rank;
  j["image_rank"] = b.image_rank ? Json(*b.image_rank) : Json(nullptr);
  j["group_report"] = to_json(b.report);
  j["strict_stabilizer"] = to_json(b.strict);
  Json chain = Json::array();
  for (auto k : b.power_chain) chain.push_back(k + 1);
  j["power_chain"] = chain;
  j["notes"] = b.notes;
  return j;
}

}  // namespace ballmaps
