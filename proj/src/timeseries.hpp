#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "errors.hpp"

namespace dtwx {

/// A fixed-length sequence of finite real measurements ordered in time.
/// Immutable after construction. Point indices are 1-based in every public
/// contract and error message; storage is 0-based.
class TimeSeries {
public:
  explicit TimeSeries(std::vector<double> values, std::string id = "",
                      std::string label = "");

  size_t size() const { return values_.size(); }
  const std::vector<double>& values() const { return values_; }
  const double* data() const { return values_.data(); }
  double operator[](size_t i) const { return values_[i]; }  // 0-based
  const std::string& id() const { return id_; }
  const std::string& label() const { return label_; }  // empty means unlabelled
  bool labelled() const { return !label_.empty(); }

private:
  std::vector<double> values_;
  std::string id_;
  std::string label_;
};

/// A contiguous 1-based inclusive index range [first, last] to remove from a
/// query series. End-points are never removable, so a legal deletion against
/// a series of length n satisfies 2 <= first <= last <= n-1.
struct Deletion {
  size_t first = 0;
  size_t last = 0;

  size_t length() const { return last - first + 1; }
  void validate(size_t n) const;  // throws IndexError when illegal for length n
  bool operator==(const Deletion&) const = default;
};

/// An ordered, immutable collection of labelled series used as 1-NN training
/// instances. Instance order is fixed at load time and doubles as the
/// tie-breaking order for equidistant neighbours.
class LabeledDataset {
public:
  LabeledDataset(std::vector<TimeSeries> instances, std::string name);

  size_t size() const { return instances_.size(); }
  const TimeSeries& operator[](size_t i) const { return instances_[i]; }
  const std::vector<TimeSeries>& instances() const { return instances_; }
  const std::string& name() const { return name_; }
  size_t distinct_labels() const;

  /// Copy with instance `index` (0-based) removed; used by leave-one-out runs.
  LabeledDataset without(size_t index) const;

private:
  std::vector<TimeSeries> instances_;
  std::string name_;
};

/// Splice out d from T. The result keeps id and label and is never shorter
/// than 2 points (both end-points survive by construction).
TimeSeries delete_subsequence(const TimeSeries& series, const Deletion& d);

TimeSeries reverse_series(const TimeSeries& series);

/// Shift/scale to sample mean 0 and population standard deviation 1
/// (divisor n). Constant series map to all-zeros.
TimeSeries z_normalize(const TimeSeries& series);

/// Plain decimation: every factor-th point starting from the first.
TimeSeries downsample(const TimeSeries& series, size_t factor);

}  // namespace dtwx
