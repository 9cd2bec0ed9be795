#pragma once

#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "timeseries.hpp"

namespace dtwx {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// DTW configuration. The local distance is fixed to the absolute difference.
/// `window` is a Sakoe-Chiba band half-width |i - j| <= w on the cumulative
/// cost grid; absent means unconstrained. A window is feasible for a pair of
/// lengths (n, m) only when w >= |n - m|, checked at call time.
struct DtwConfig {
  std::optional<int> window;

  bool operator==(const DtwConfig&) const = default;
};

enum class Direction { Forward, Reversed };

/// Full (n+1) x (m+1) cumulative-cost grid for one query/candidate pair.
/// Cell (0,0) is 0; the rest of row 0 and column 0 hold +infinity, encoding
/// the empty-prefix base cases of the recurrence. Row i, column j is the
/// cost of the best monotone alignment of the first i query points with the
/// first j candidate points; cell (n,m) is the DTW distance. Cells outside
/// the warping window, when one is configured, hold +infinity.
///
/// Row minima are kept alongside the cells: every warping path of the pair
/// crosses every row, so min over j of cell (i,j) lower-bounds the final
/// distance, and after deleting query points l0..l1 the first l0-1 rows of
/// the new grid coincide with this one. That makes row minima reusable as
/// deletion-independent lower bounds and full rows reusable as warm-restart
/// state.
class AlignmentTable {
public:
  AlignmentTable(size_t query_len, size_t candidate_len, Direction direction,
                 std::string candidate_ref, DtwConfig config,
                 std::vector<double> cells, std::vector<double> row_mins);

  size_t query_len() const { return query_len_; }
  size_t candidate_len() const { return candidate_len_; }
  Direction direction() const { return direction_; }
  const std::string& candidate_ref() const { return candidate_ref_; }
  const DtwConfig& config() const { return config_; }

  double at(size_t i, size_t j) const { return cells_[i * (candidate_len_ + 1) + j]; }
  const double* row(size_t i) const { return cells_.data() + i * (candidate_len_ + 1); }
  double row_min(size_t i) const { return row_mins_[i]; }
  double distance() const { return at(query_len_, candidate_len_); }
  size_t bytes() const { return cells_.capacity() * sizeof(double); }

private:
  size_t query_len_;
  size_t candidate_len_;
  Direction direction_;
  std::string candidate_ref_;
  DtwConfig config_;
  std::vector<double> cells_;
  std::vector<double> row_mins_;
};

/// Result of one distance evaluation. `abandoned` means the computation
/// stopped early with proof that the true distance is at least `value`
/// (the threshold); otherwise `value` is the exact distance.
struct DtwOutcome {
  bool abandoned = false;
  double value = 0.0;
  size_t rows_computed = 0;
  std::shared_ptr<const AlignmentTable> table;  // present when retention was requested

  bool exact() const { return !abandoned; }
};

/// Exact DTW distance between `query` and `candidate` by row-major dynamic
/// programming (rows follow the query). With a threshold, the computation
/// abandons after any row whose minimum finite entry reaches the threshold,
/// and skips cells whose cheapest predecessor already reaches it; both are
/// sound, so an Exact outcome always equals the unabridged computation.
/// `retain_table` forces a full exact computation (threshold ignored) and
/// attaches the grid for later reuse; `table_direction` only tags the grid
/// with the orientation the caller fed the pair in.
DtwOutcome dtw_distance(const TimeSeries& query, const TimeSeries& candidate,
                        const DtwConfig& config = {},
                        std::optional<double> threshold = {},
                        bool retain_table = false,
                        Direction table_direction = Direction::Forward);

/// Same as dtw_distance(modified, candidate, ...) where
/// modified == delete_subsequence(original, d) and `cached` is the retained
/// forward grid of (original, candidate): rows before d.first are copied
/// from the cache and only rows d.first .. |modified| are computed, in the
/// same summation order, so exact results match the from-scratch value
/// bit for bit.
DtwOutcome dtw_resume(const AlignmentTable& cached, const TimeSeries& modified,
                      const Deletion& d, const TimeSeries& candidate,
                      const DtwConfig& config, std::optional<double> threshold = {});

/// min over j of cached row d.first - 1: a lower bound on the distance
/// between the deletion-modified query and the candidate.
double row_lower_bound(const AlignmentTable& cached, const Deletion& d);

/// Mirror bound from the reversed pair's grid: min over j of row n - d.last,
/// where n is the original query length. Tighter than the prefix bound when
/// the deletion sits near the left end. Requires an unconstrained alignment;
/// a warping window breaks the reversal symmetry for unequal lengths.
double suffix_lower_bound(const AlignmentTable& cached_rev, const Deletion& d,
                          size_t original_len);

/// Combined bound over the split column: best over j of
/// prefix-row cost at j plus the reversed-grid cost of aligning the query
/// tail against the candidate tail starting at column j or j+1. At least as
/// tight as both row bounds; needs both full grids.
double split_lower_bound(const AlignmentTable& fwd, const AlignmentTable& rev,
                         const Deletion& d);

}  // namespace dtwx
