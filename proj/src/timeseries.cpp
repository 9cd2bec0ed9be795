#include "timeseries.hpp"

#include <cmath>
#include <set>
#include <utility>

namespace dtwx {

TimeSeries::TimeSeries(std::vector<double> values, std::string id, std::string label)
    : values_(std::move(values)), id_(std::move(id)), label_(std::move(label)) {
  if (values_.empty()) {
    throw ArgumentError("a time series needs at least one value");
  }
  for (size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) {
      throw ArgumentError("non-finite value at index " + std::to_string(i + 1));
    }
  }
}

void Deletion::validate(size_t n) const {
  if (first < 2 || last < first || last > n - 1 || n < 3) {
    throw IndexError("deletion [" + std::to_string(first) + ", " + std::to_string(last) +
                     "] is illegal for a series of length " + std::to_string(n) +
                     " (end-points are not removable)");
  }
}

LabeledDataset::LabeledDataset(std::vector<TimeSeries> instances, std::string name)
    : instances_(std::move(instances)), name_(std::move(name)) {
  if (instances_.empty()) {
    throw ArgumentError("dataset '" + name_ + "' has no instances");
  }
  for (size_t i = 0; i < instances_.size(); ++i) {
    if (!instances_[i].labelled()) {
      throw ArgumentError("instance " + std::to_string(i + 1) + " of dataset '" + name_ +
                          "' has no label");
    }
  }
}

size_t LabeledDataset::distinct_labels() const {
  std::set<std::string> labels;
  for (const auto& inst : instances_) labels.insert(inst.label());
  return labels.size();
}

LabeledDataset LabeledDataset::without(size_t index) const {
  if (index >= instances_.size()) {
    throw IndexError("instance index " + std::to_string(index + 1) + " out of range");
  }
  std::vector<TimeSeries> rest;
  rest.reserve(instances_.size() - 1);
  for (size_t i = 0; i < instances_.size(); ++i) {
    if (i != index) rest.push_back(instances_[i]);
  }
  return LabeledDataset(std::move(rest), name_);
}

TimeSeries delete_subsequence(const TimeSeries& series, const Deletion& d) {
  const size_t n = series.size();
  d.validate(n);
  std::vector<double> out;
  out.reserve(n - d.length());
  const auto& v = series.values();
  out.insert(out.end(), v.begin(), v.begin() + static_cast<long>(d.first - 1));
  out.insert(out.end(), v.begin() + static_cast<long>(d.last), v.end());
  return TimeSeries(std::move(out), series.id(), series.label());
}

TimeSeries reverse_series(const TimeSeries& series) {
  std::vector<double> out(series.values().rbegin(), series.values().rend());
  return TimeSeries(std::move(out), series.id(), series.label());
}

TimeSeries z_normalize(const TimeSeries& series) {
  const auto& v = series.values();
  const double n = static_cast<double>(v.size());
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= n;
  double var = 0.0;
  for (double x : v) var += (x - mean) * (x - mean);
  var /= n;
  const double sd = std::sqrt(var);
  std::vector<double> out(v.size(), 0.0);
  if (sd > 0.0) {
    for (size_t i = 0; i < v.size(); ++i) out[i] = (v[i] - mean) / sd;
  }
  return TimeSeries(std::move(out), series.id(), series.label());
}

TimeSeries downsample(const TimeSeries& series, size_t factor) {
  if (factor < 1) {
    throw ArgumentError("down-sampling factor must be at least 1");
  }
  const auto& v = series.values();
  std::vector<double> out;
  out.reserve((v.size() + factor - 1) / factor);
  for (size_t i = 0; i < v.size(); i += factor) out.push_back(v[i]);
  return TimeSeries(std::move(out), series.id(), series.label());
}

}  // namespace dtwx
