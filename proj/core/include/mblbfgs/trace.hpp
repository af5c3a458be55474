#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>

#include <nlohmann/json.hpp>

#include "mblbfgs/harness.hpp"
#include "mblbfgs/optimizers.hpp"

namespace mblbfgs {

inline constexpr const char* kTraceHeader = "k,train_loss,validation_loss,test_loss,test_ccr,m_k,q_k";

/// Trace as comma-separated text: a header row, then one row per kept
/// iteration with reals in fixed 10-decimal notation. Rows where k is a
/// multiple of `every` are kept, plus the final row.
std::string format_trace(std::span<const IterationRecord> history, std::size_t every = 1);

/// Writes format_trace to `path`. Requires a non-empty history.
void emit_trace(std::span<const IterationRecord> history, const std::filesystem::path& path,
                std::size_t every = 1);

/// Per-method mean (std) of CCR and RNK plus per-repetition detail.
nlohmann::json aggregate_to_json(const AggregateTable& table);

void write_json(const nlohmann::json& doc, const std::filesystem::path& path);

}  // namespace mblbfgs
