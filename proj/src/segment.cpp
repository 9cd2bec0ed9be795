#include "segment.hpp"

namespace dtwx {

LabeledDataset build_detection_dataset(
    const std::vector<std::pair<TimeSeries, SegmentAnnotation>>& annotated) {
  if (annotated.empty()) {
    throw ArgumentError("segment detection needs at least one annotated series");
  }
  std::vector<TimeSeries> instances;
  instances.reserve(annotated.size() * 2);
  for (const auto& [series, annotation] : annotated) {
    const Deletion d{annotation.start, annotation.end};
    d.validate(series.size());
    instances.emplace_back(series.values(), series.id(), kWithLabel);
  }
  for (const auto& [series, annotation] : annotated) {
    const Deletion d{annotation.start, annotation.end};
    TimeSeries spliced = delete_subsequence(series, d);
    instances.emplace_back(spliced.values(), series.id(), kWithoutLabel);
  }
  return LabeledDataset(std::move(instances), "segment-detection");
}

DetectionResult detect_segment(const LabeledDataset& dataset, const TimeSeries& query,
                               const DtwConfig& config, const RelevanceConfig& relevance,
                               double threshold_multiplier, const OptimizationFlags& flags,
                               const SearchConfig& search) {
  if (threshold_multiplier <= 0.0) {
    throw ArgumentError("threshold multiplier must be positive");
  }
  const auto initial = classify(dataset, query, 1, config);
  if (initial.label != kWithLabel) {
    throw WrongClassError("query classified as " + initial.label +
                          "; the feature is likely absent");
  }

  DetectionResult result;
  result.relevance = compute_relevance(dataset, query, 1, config, relevance, flags, search);
  const auto& r = result.relevance.values;
  double mean = 0.0;
  for (double v : r) mean += v;
  mean /= static_cast<double>(r.size());
  result.threshold = threshold_multiplier * mean;

  // Longest maximal run strictly above the threshold; earliest on ties.
  size_t best_start = 0, best_len = 0;
  size_t run_start = 0, run_len = 0;
  for (size_t i = 0; i < r.size(); ++i) {
    if (r[i] > result.threshold) {
      if (run_len == 0) run_start = i;
      run_len += 1;
      if (run_len > best_len) {
        best_len = run_len;
        best_start = run_start;
      }
    } else {
      run_len = 0;
    }
  }
  if (best_len > 0) {
    result.found = true;
    result.start = best_start + 1;
    result.end = best_start + best_len;
  }
  return result;
}

}  // namespace dtwx
