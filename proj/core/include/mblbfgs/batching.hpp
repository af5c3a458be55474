#pragma once

#include <cstddef>
#include <vector>

#include "mblbfgs/numeric.hpp"

namespace mblbfgs {

/// Draws batches of fixed size r where each batch shares exactly
/// round(o * r) indices with its predecessor.
///
/// The shared indices are a uniform subset of the previous batch; the rest
/// are drawn uniformly without replacement from indices not in the previous
/// batch. When r equals the dataset size every batch is the full index set.
class OverlapSampler {
public:
  OverlapSampler(std::size_t dataset_size, std::size_t batch_size, double overlap_ratio, Rng rng);

  /// Returns the next batch. The first call has no predecessor and ignores the overlap.
  const std::vector<std::size_t>& next_batch();

  const std::vector<std::size_t>& current() const noexcept { return current_; }
  const std::vector<std::size_t>& previous() const noexcept { return previous_; }

  std::size_t overlap_count() const noexcept { return overlap_count_; }
  std::size_t batch_size() const noexcept { return batch_size_; }
  std::size_t dataset_size() const noexcept { return dataset_size_; }
  bool full_batch() const noexcept { return batch_size_ == dataset_size_; }

private:
  std::size_t dataset_size_;
  std::size_t batch_size_;
  std::size_t overlap_count_;
  Rng rng_;
  std::vector<std::size_t> previous_;
  std::vector<std::size_t> current_;
};

/// Sorted intersection of two index sets.
std::vector<std::size_t> overlap_of(const std::vector<std::size_t>& prev,
                                    const std::vector<std::size_t>& curr);

}  // namespace mblbfgs
