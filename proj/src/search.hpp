#pragma once

#include <cstdint>
#include <optional>

#include "classify.hpp"

namespace dtwx {

/// Switches for the optimization stack. All combinations return the same
/// answer as the unoptimized search; only the work counters change.
/// `triangle` is the one exception: it admits heuristic pruning and is
/// therefore guarded by a post-hoc verification of the returned deletion.
struct OptimizationFlags {
  bool abandon = false;      // early-abandon DTW evaluations at the running threshold
  bool bounds = false;       // prefix/suffix row bounds from the initial alignments
  bool reuse = false;        // warm-restart DTW from cached grid rows
  bool triangle = false;     // heuristic repaired-triangle anchor bounds
  bool split_bound = false;  // combined prefix+suffix split-column bound (needs reuse)

  static OptimizationFlags none() { return {}; }
  static OptimizationFlags all() { return {true, true, true, false, false}; }
};

// Sized so that forward and reversed grids for 1000 instances of length 512
// fit before the cache degrades to row-minima only.
inline constexpr size_t kDefaultTableBudget = 2ull * 1000 * 513 * 513 * sizeof(double);

struct SearchConfig {
  size_t table_budget_bytes = kDefaultTableBudget;
  int threads = 0;  // <= 0: DTW_EXPLAIN_THREADS, then hardware parallelism
};

/// Outcome of the minimum-deletion search. On a flip, no strictly shorter
/// legal deletion flips and no equal-length deletion with a smaller start
/// flips; the deletion is the canonical first one in (length, start) order.
struct SearchResult {
  bool flipped = false;
  Deletion deletion;  // meaningful only when flipped
  std::string original_label;
  std::string flipped_label;  // empty when not flipped
  SearchStats stats;

  uint64_t digest() const;
};

struct RelevanceConfig {
  size_t stride = 1;                 // enumerate deletion starts every stride-th point
  std::optional<size_t> max_length;  // cap on deletion length; absent = n-2
  bool sound_bounds_only = true;     // refuse heuristic pruning regardless of flags
};

/// Per-point relevance: r(i) sums 1/len over every enumerated flipping
/// deletion that contains point i. End-points belong to no legal deletion,
/// so r(1) = r(n) = 0. Accumulation runs in canonical (length, start) order
/// regardless of worker scheduling, making the vector bit-reproducible.
struct RelevanceVector {
  std::vector<double> values;
  std::vector<double> normalized;  // values / max, all-zero when max == 0
  size_t stride = 1;
  std::optional<size_t> max_length;
  SearchStats stats;

  uint64_t digest() const;
};

/// Finds the minimum-length contiguous deletion that flips the predicted
/// label of `query` relative to its unmodified classification, enumerating
/// lengths 1..n-2 ascending and starts 2..n-len ascending. Returns NoFlip
/// when no legal deletion flips.
SearchResult find_min_deletion(const LabeledDataset& dataset, const TimeSeries& query,
                               size_t k, const DtwConfig& config = {},
                               const OptimizationFlags& flags = OptimizationFlags::all(),
                               const SearchConfig& search = {});

/// find_min_deletion with the full optimization stack: the initial
/// classification retains forward and reversed grids per instance, candidate
/// instances are pruned best-first via the row bounds, and surviving
/// distances resume from cached rows with early abandoning. Falls back to
/// bound-only reuse (grids dropped, row minima kept) when the grids exceed
/// the table budget; the result is unchanged either way.
SearchResult search_with_reuse(const LabeledDataset& dataset, const TimeSeries& query,
                               size_t k, const DtwConfig& config = {},
                               const SearchConfig& search = {});

RelevanceVector compute_relevance(const LabeledDataset& dataset, const TimeSeries& query,
                                  size_t k, const DtwConfig& config = {},
                                  const RelevanceConfig& relevance = {},
                                  const OptimizationFlags& flags = OptimizationFlags::all(),
                                  const SearchConfig& search = {});

}  // namespace dtwx
