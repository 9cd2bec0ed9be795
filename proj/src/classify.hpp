#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "dtw.hpp"

namespace dtwx {

struct Neighbor {
  size_t index = 0;  // position in dataset order, 0-based
  double distance = 0.0;
  std::string label;
};

/// Work counters shared by the classifier and the deletion search.
/// dtw_calls counts from-scratch evaluations (full or abandoned);
/// resumed_calls counts warm restarts from a cached grid.
struct SearchStats {
  uint64_t dtw_calls = 0;
  uint64_t resumed_calls = 0;
  uint64_t abandons = 0;
  uint64_t bound_prunes = 0;
  uint64_t resumed_rows = 0;
  bool degraded = false;  // table cache exceeded its budget; resume was disabled

  SearchStats& operator+=(const SearchStats& o) {
    dtw_calls += o.dtw_calls;
    resumed_calls += o.resumed_calls;
    abandons += o.abandons;
    bound_prunes += o.bound_prunes;
    resumed_rows += o.resumed_rows;
    degraded = degraded || o.degraded;
    return *this;
  }
};

/// Ordered cascade of lower-bound functions on the distance from the current
/// query to a training instance. Sound entries never exceed the true
/// distance and may prune candidates without changing the answer; heuristic
/// entries are ignored unless explicitly allowed.
struct BoundEntry {
  bool sound = true;
  std::function<double(size_t candidate_index)> bound;
};

struct BoundProvider {
  std::vector<BoundEntry> entries;
  bool allow_heuristic = false;

  double evaluate(size_t index) const {
    double best = 0.0;
    for (const auto& e : entries) {
      if (!e.sound && !allow_heuristic) continue;
      const double v = e.bound(index);
      if (v > best) best = v;
    }
    return best;
  }
};

struct ClassifyResult {
  std::string label;
  std::vector<Neighbor> neighbors;  // the k nearest, ordered by (distance, index)
  // Retained exact grids against every instance, in dataset order
  // (retain_tables mode only).
  std::vector<std::shared_ptr<const AlignmentTable>> forward;
  std::vector<std::shared_ptr<const AlignmentTable>> reversed;
  std::vector<double> distances;  // exact distance per instance (retain_tables mode only)
  SearchStats stats;
};

/// Keeps the k smallest (distance, index) pairs offered so far; the k-th
/// one is the pruning threshold tau.
struct BestK {
  size_t k;
  std::vector<Neighbor> items;  // ordered by (distance, index)

  explicit BestK(size_t k_) : k(k_) { items.reserve(k_ + 1); }

  double tau() const { return items.size() >= k ? items[k - 1].distance : kInf; }

  void offer(Neighbor nb) {
    auto pos = std::lower_bound(
        items.begin(), items.end(), nb, [](const Neighbor& a, const Neighbor& b) {
          return a.distance != b.distance ? a.distance < b.distance : a.index < b.index;
        });
    items.insert(pos, std::move(nb));
    if (items.size() > k) items.pop_back();
  }
};

/// Throws ArgumentError unless the dataset can answer a k-NN query.
void check_classifiable(const LabeledDataset& dataset, size_t k);

/// k-NN under DTW with deterministic tie-breaking: equal distances prefer
/// the lower instance index; a tied vote prefers the label whose members sit
/// closer, then the lexicographically smaller token. Candidates are visited
/// best-first by their cheapest lower bound and pruned once the bound
/// exceeds the k-th best distance so far; with sound bounds the outcome is
/// identical to a bound-free linear scan.
///
/// retain_tables switches to full exact evaluation and returns forward and
/// reversed alignment grids against every instance for later reuse.
ClassifyResult classify(const LabeledDataset& dataset, const TimeSeries& query, size_t k,
                        const DtwConfig& config = {}, const BoundProvider& bounds = {},
                        bool retain_tables = false);

/// Majority vote with the tie-breaks above. `neighbors` must be ordered by
/// (distance, index).
std::string majority_label(const std::vector<Neighbor>& neighbors);

/// Relaxed-triangle repair: the smallest c >= 1 with
/// d(x,z) <= c * (d(x,y) + d(y,z)) over the examined training triples,
/// plus the full pairwise distance matrix. The derived anchor bound
/// d(Q,a)/c - d(a,s) is heuristic unless c was computed over all triples
/// and the query behaves like a training instance, so it never runs in
/// exact-mode searches.
struct TriangleRepair {
  double stretch = 1.0;
  size_t size = 0;
  std::vector<double> pairwise;  // row-major size x size

  double distance(size_t i, size_t j) const { return pairwise[i * size + j]; }
  double anchor_bound(double query_to_anchor, size_t anchor, size_t candidate) const {
    return query_to_anchor / stretch - distance(anchor, candidate);
  }
};

/// Estimates the stretch constant from the dataset. With a sample count the
/// triples are drawn from a fixed-seed generator; otherwise all triples are
/// examined.
TriangleRepair estimate_triangle_repair(const LabeledDataset& dataset,
                                        const DtwConfig& config = {},
                                        std::optional<size_t> sample_triples = {});

}  // namespace dtwx
