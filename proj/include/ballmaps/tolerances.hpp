#pragma once

#include "ballmaps/poly.hpp"

namespace ballmaps {

/// Numerical thresholds shared by every module. Each CLI command echoes the
/// effective values in its report.
struct Tolerances {
  double eq = kEqTolerance;  // relative coefficient equality
  double div = 1e-9;         // sphere-division remainder, scaled by 1 + max |c|
  double sig = 1e-8;         // eigenvalue zero threshold, relative to spectral norm
  double group = 1e-7;       // matrix equality during group closure
};

}  // namespace ballmaps
