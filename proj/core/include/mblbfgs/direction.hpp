#pragma once

#include <deque>

#include "mblbfgs/curvature.hpp"
#include "mblbfgs/numeric.hpp"

namespace mblbfgs {

struct DirectionResult {
  ParamVector direction;  // -H^{-1} g
  double gamma = 1.0;     // initial inverse-Hessian scaling
};

/// L-BFGS two-loop recursion over `pairs` (oldest first) with initial matrix
/// gamma * I, gamma = s.t / t.t of the newest pair (1 when empty).
DirectionResult two_loop_direction(const std::deque<CurvaturePair>& pairs, const ParamVector& g);

inline DirectionResult two_loop_direction(const CurvatureStore& store, const ParamVector& g) {
  return two_loop_direction(store.pairs(), g);
}

/// The initial scaling two_loop_direction uses for these pairs.
double initial_scaling(const std::deque<CurvaturePair>& pairs);

}  // namespace mblbfgs
