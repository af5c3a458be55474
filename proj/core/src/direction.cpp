#include "mblbfgs/direction.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "mblbfgs/errors.hpp"

namespace mblbfgs {

double initial_scaling(const std::deque<CurvaturePair>& pairs) {
  if (pairs.empty()) return 1.0;
  const auto& newest = pairs.back();
  return dot(newest.s, newest.t) / dot(newest.t, newest.t);
}

DirectionResult two_loop_direction(const std::deque<CurvaturePair>& pairs, const ParamVector& g) {
  const std::size_t q = pairs.size();
  for (std::size_t i = 0; i < q; ++i) {
    const auto& p = pairs[i];
    if (p.s.size() != g.size() || p.t.size() != g.size()) {
      throw DimensionError("two-loop: curvature pair " + std::to_string(i) + " has dimension " +
                           std::to_string(p.s.size()) + ", gradient has " + std::to_string(g.size()));
    }
    if (!std::isfinite(p.rho)) {
      throw CorruptStoreError("two-loop: curvature pair " + std::to_string(i) + " is corrupt");
    }
  }

  ParamVector r = g;
  std::vector<double> a(q);
  for (std::size_t i = q; i-- > 0;) {
    const auto& p = pairs[i];
    a[i] = p.rho * dot(p.s, r);
    axpy_inplace(-a[i], p.t.span(), r.span());
  }

  const double gamma = initial_scaling(pairs);
  if (!std::isfinite(gamma)) throw CorruptStoreError("two-loop: non-finite initial scaling");
  for (auto& v : r) v *= gamma;

  for (std::size_t i = 0; i < q; ++i) {
    const auto& p = pairs[i];
    const double b = p.rho * dot(p.t, r);
    axpy_inplace(a[i] - b, p.s.span(), r.span());
  }

  for (auto& v : r) v = -v;
  return {std::move(r), gamma};
}

}  // namespace mblbfgs
