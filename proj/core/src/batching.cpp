#include "mblbfgs/batching.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "mblbfgs/errors.hpp"

namespace mblbfgs {

OverlapSampler::OverlapSampler(std::size_t dataset_size, std::size_t batch_size, double overlap_ratio,
                               Rng rng)
    : dataset_size_(dataset_size), batch_size_(batch_size), overlap_count_(0), rng_(rng) {
  if (batch_size == 0) throw ConfigError("sampler: batch size must be positive");
  if (batch_size > dataset_size) {
    throw ConfigError("sampler: batch size " + std::to_string(batch_size) + " exceeds dataset size " +
                      std::to_string(dataset_size));
  }
  if (!(overlap_ratio >= 0.0 && overlap_ratio < 1.0)) {
    throw ConfigError("sampler: overlap ratio must be in [0, 1)");
  }
  overlap_count_ = static_cast<std::size_t>(std::lround(overlap_ratio * static_cast<double>(batch_size)));
  if (full_batch()) {
    overlap_count_ = batch_size;
    return;
  }
  const std::size_t fresh = batch_size - overlap_count_;
  if (dataset_size - batch_size < fresh) {
    throw ConfigError("sampler: dataset of " + std::to_string(dataset_size) + " rows cannot supply " +
                      std::to_string(fresh) + " fresh indices outside a batch of " +
                      std::to_string(batch_size));
  }
}

const std::vector<std::size_t>& OverlapSampler::next_batch() {
  previous_ = std::move(current_);
  if (full_batch()) {
    current_.resize(dataset_size_);
    std::iota(current_.begin(), current_.end(), std::size_t{0});
    return current_;
  }
  if (previous_.empty()) {
    current_ = uniform_indices(rng_, dataset_size_, batch_size_);
    return current_;
  }

  std::vector<std::size_t> next;
  next.reserve(batch_size_);
  for (auto pos : uniform_indices(rng_, previous_.size(), overlap_count_)) next.push_back(previous_[pos]);

  std::vector<bool> in_previous(dataset_size_, false);
  for (auto i : previous_) in_previous[i] = true;
  std::vector<std::size_t> complement;
  complement.reserve(dataset_size_ - previous_.size());
  for (std::size_t i = 0; i < dataset_size_; ++i) {
    if (!in_previous[i]) complement.push_back(i);
  }
  for (auto pos : uniform_indices(rng_, complement.size(), batch_size_ - overlap_count_)) {
    next.push_back(complement[pos]);
  }
  current_ = std::move(next);
  return current_;
}

std::vector<std::size_t> overlap_of(const std::vector<std::size_t>& prev,
                                    const std::vector<std::size_t>& curr) {
  std::vector<std::size_t> a = prev;
  std::vector<std::size_t> b = curr;
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::vector<std::size_t> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace mblbfgs
