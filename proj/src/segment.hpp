#pragma once

#include <utility>

#include "search.hpp"

namespace dtwx {

inline constexpr const char* kWithLabel = "WITH";
inline constexpr const char* kWithoutLabel = "WITHOUT";

/// A known feature occurrence inside one series: 1-based inclusive
/// end-points. A removable segment must be a legal deletion, so
/// 2 <= start <= end <= n-1.
struct SegmentAnnotation {
  std::string series_id;
  size_t start = 0;
  size_t end = 0;
};

struct DetectionResult {
  bool found = false;
  size_t start = 0;  // 1-based inclusive, meaningful when found
  size_t end = 0;
  double threshold = 0.0;
  RelevanceVector relevance;
};

/// Builds the two-class detection dataset: class WITH holds the annotated
/// originals, class WITHOUT their copies with the annotated segment spliced
/// out. The output has 2x the input instances, WITH block first.
LabeledDataset build_detection_dataset(
    const std::vector<std::pair<TimeSeries, SegmentAnnotation>>& annotated);

/// Locates the feature in an unobserved query: requires the query to
/// classify as WITH under 1-NN (WrongClassError otherwise), computes its
/// relevance, thresholds at threshold_multiplier times the mean relevance
/// and returns the longest maximal run of points strictly above the
/// threshold (earliest run on ties). `found` is false when nothing exceeds
/// the threshold.
DetectionResult detect_segment(const LabeledDataset& dataset, const TimeSeries& query,
                               const DtwConfig& config = {},
                               const RelevanceConfig& relevance = {},
                               double threshold_multiplier = 2.0,
                               const OptimizationFlags& flags = OptimizationFlags::all(),
                               const SearchConfig& search = {});

}  // namespace dtwx
