#pragma once

#include <cstddef>
#include <optional>
#include <vector>

namespace dtwx::detail {

/// One run of the row-major cumulative-cost recurrence over raw spans.
/// Rows first_row .. n are computed from prev_row (row first_row - 1;
/// nullptr selects the standard boundary row <0, inf, ...>). The summation
/// order is identical in every mode, so resumed, rolling and full-grid runs
/// agree bit for bit wherever they are exact.
struct DpSpec {
  const double* query = nullptr;
  size_t n = 0;
  const double* candidate = nullptr;
  size_t m = 0;
  std::optional<int> window;
  std::optional<double> threshold;  // row-level abandoning + cell pruning
  size_t first_row = 1;
  const double* prev_row = nullptr;

  /// When set: filled as the full (n+1)x(m+1) grid (requires first_row == 1
  /// and no threshold).
  std::vector<double>* cells_out = nullptr;
  /// When set: resized to n+1 and filled with per-row minima for the
  /// computed rows (entry 0 is the boundary row's 0).
  std::vector<double>* row_mins_out = nullptr;
};

struct DpResult {
  bool abandoned = false;
  double value = 0.0;  // exact distance, or the threshold when abandoned
  size_t rows_computed = 0;
};

DpResult dtw_rows(const DpSpec& spec);

}  // namespace dtwx::detail
