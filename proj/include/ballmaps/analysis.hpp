#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ballmaps/io.hpp"

namespace ballmaps {

inline constexpr std::uint64_t kDefaultSeed = 20240601;

struct SampleCheck {
  double max_residual = 0.0;
  bool pass = false;
  std::uint64_t seed = 0;
  std::size_t count = 0;
  double tol = 0.0;
  /// Samples where |q(z)| fell below 1e-12; these count as failures.
  std::size_t singular = 0;
};

/// Uniform points on the unit sphere of C^n from normalized complex
/// Gaussians. mt19937_64 plus Box-Muller, so the stream is identical on
/// every platform for a given seed.
std::vector<Vector> sphere_samples(std::size_t n, std::size_t count, std::uint64_t seed);

/// max over samples of | ||p(z)||_l^2 / |q(z)|^2 - 1 |.
SampleCheck sphere_sample_check(const RationalMap& f, std::size_t count, double tol,
                                std::uint64_t seed = kDefaultSeed);

struct AnalysisBundle {
  RationalMap map;
  ProperCertificate proper;
  Signature signature;
  std::size_t hermitian_rank = 0;
  std::optional<std::size_t> image_rank;
  GroupReport report;
  StrictStabilizer strict;
  std::set<std::size_t> power_chain;
  std::vector<std::string> notes;
};

AnalysisBundle analyze(const RationalMap& f, const Tolerances& tol = {}, bool strict_permutations = false);

Json to_json(const SampleCheck& s);
Json to_json(const AnalysisBundle& b);

}  // namespace ballmaps
