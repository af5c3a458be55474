#pragma once

#include <span>
#include <vector>

namespace mblbfgs {

/// Correct classification rate in percent.
double ccr(std::span<const int> predictions, std::span<const int> labels);

/// Rank of each entry by descending CCR: the highest gets 1. Tied entries
/// share the mean of the positions they occupy, so ranks always sum to
/// n(n+1)/2.
std::vector<double> rnk(std::span<const double> ccrs);

struct MeanStd {
  double mean = 0.0;
  double std = 0.0;  // sample standard deviation; 0 for fewer than two values
};

MeanStd mean_std(std::span<const double> values);

}  // namespace mblbfgs
