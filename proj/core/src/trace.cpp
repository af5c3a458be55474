#include "mblbfgs/trace.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "mblbfgs/errors.hpp"

namespace mblbfgs {
namespace {

void append_real(std::string& out, double v) {
  if (std::isnan(v)) {
    out += "nan";
    return;
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10f", v);
  out += buf;
}

nlohmann::json real_or_null(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); }

void write_text(const std::string& text, const std::filesystem::path& path) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  out.flush();
  if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace

std::string format_trace(std::span<const IterationRecord> history, std::size_t every) {
  if (every == 0) every = 1;
  std::string out = kTraceHeader;
  out += '\n';
  for (std::size_t i = 0; i < history.size(); ++i) {
    const auto& r = history[i];
    if (r.k % every != 0 && i + 1 != history.size()) continue;
    out += std::to_string(r.k);
    out += ',';
    append_real(out, r.train_loss);
    out += ',';
    append_real(out, r.validation_loss);
    out += ',';
    append_real(out, r.test_loss);
    out += ',';
    append_real(out, r.test_ccr);
    out += ',';
    out += std::to_string(r.m_k);
    out += ',';
    out += std::to_string(r.q_k);
    out += '\n';
  }
  return out;
}

void emit_trace(std::span<const IterationRecord> history, const std::filesystem::path& path, std::size_t every) {
  if (history.empty()) throw IoError("emit_trace: empty history for " + path.string());
  write_text(format_trace(history, every), path);
}

nlohmann::json aggregate_to_json(const AggregateTable& table) {
  using nlohmann::json;
  json methods = json::array();
  for (const auto& m : table.methods) {
    methods.push_back({{"method", std::string(to_string(m.method))},
                       {"ccr_mean", m.ccr.mean},
                       {"ccr_std", m.ccr.std},
                       {"rnk_mean", m.rnk.mean},
                       {"rnk_std", m.rnk.std},
                       {"completed", m.completed},
                       {"excluded", m.excluded}});
  }
  json reps = json::array();
  for (const auto& rep : table.repetitions) {
    json runs = json::array();
    for (std::size_t i = 0; i < rep.runs.size(); ++i) {
      const auto& run = rep.runs[i];
      json entry{{"method", std::string(to_string(run.method))},
                 {"final_ccr", run.final ? json(run.final->ccr) : json(nullptr)},
                 {"final_test_loss", run.final ? real_or_null(run.final->loss) : json(nullptr)},
                 {"iterations", run.history.size()},
                 {"skipped_pairs", run.skipped_pairs},
                 {"aborted", run.aborted}};
      if (!rep.ranks.empty()) entry["rnk"] = rep.ranks[i];
      if (run.aborted) entry["diagnostic"] = run.diagnostic;
      runs.push_back(entry);
    }
    reps.push_back({{"index", rep.index},
                    {"seed", rep.seed},
                    {"split_fingerprint", rep.split_fingerprint},
                    {"runs", runs}});
  }
  return json{{"methods", methods},
              {"excluded_runs", table.excluded_runs},
              {"ranked_repetitions", table.ranked_repetitions},
              {"repetitions", reps}};
}

void write_json(const nlohmann::json& doc, const std::filesystem::path& path) {
  write_text(doc.dump(2) + "\n", path);
}

}  // namespace mblbfgs
