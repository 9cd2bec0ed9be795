#include "classify.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>

namespace dtwx {

void check_classifiable(const LabeledDataset& dataset, size_t k) {
  if (k < 1) throw ArgumentError("k must be at least 1");
  if (k > dataset.size()) {
    throw ArgumentError("k = " + std::to_string(k) + " exceeds the dataset size " +
                        std::to_string(dataset.size()));
  }
  if (dataset.distinct_labels() < 2) {
    throw ArgumentError("dataset '" + dataset.name() + "' has fewer than 2 distinct labels");
  }
}

std::string majority_label(const std::vector<Neighbor>& neighbors) {
  struct Tally {
    size_t count = 0;
    double distance_sum = 0.0;
  };
  std::map<std::string, Tally> votes;
  for (const auto& nb : neighbors) {
    auto& t = votes[nb.label];
    t.count += 1;
    t.distance_sum += nb.distance;
  }
  const std::string* best = nullptr;
  const Tally* best_tally = nullptr;
  for (const auto& [label, tally] : votes) {
    bool wins = best == nullptr;
    if (!wins) {
      if (tally.count != best_tally->count) {
        wins = tally.count > best_tally->count;
      } else if (tally.distance_sum != best_tally->distance_sum) {
        wins = tally.distance_sum < best_tally->distance_sum;
      }
      // std::map iterates tokens in ascending order, so on a full tie the
      // lexicographically smaller label is already in place.
    }
    if (wins) {
      best = &label;
      best_tally = &tally;
    }
  }
  return *best;
}

ClassifyResult classify(const LabeledDataset& dataset, const TimeSeries& query, size_t k,
                        const DtwConfig& config, const BoundProvider& bounds,
                        bool retain_tables) {
  check_classifiable(dataset, k);
  ClassifyResult result;
  BestK best(k);

  if (retain_tables) {
    const TimeSeries query_rev = reverse_series(query);
    result.forward.reserve(dataset.size());
    result.reversed.reserve(dataset.size());
    result.distances.reserve(dataset.size());
    for (size_t i = 0; i < dataset.size(); ++i) {
      const TimeSeries& inst = dataset[i];
      auto fwd = dtw_distance(query, inst, config, {}, true);
      auto rev = dtw_distance(query_rev, reverse_series(inst), config, {}, true,
                              Direction::Reversed);
      result.stats.dtw_calls += 2;
      result.forward.push_back(fwd.table);
      result.reversed.push_back(rev.table);
      result.distances.push_back(fwd.value);
      best.offer({i, fwd.value, inst.label()});
    }
  } else {
    // Best-first by cheapest lower bound, then dataset order.
    std::vector<std::pair<double, size_t>> order(dataset.size());
    for (size_t i = 0; i < dataset.size(); ++i) order[i] = {bounds.evaluate(i), i};
    std::stable_sort(order.begin(), order.end());
    for (const auto& [lb, i] : order) {
      const double tau = best.tau();
      if (lb > tau) {
        result.stats.bound_prunes += 1;
        continue;
      }
      // Strictly-above threshold keeps equal-distance ties computable, so
      // index tie-breaking survives pruning.
      std::optional<double> thr;
      if (tau < kInf) thr = std::nextafter(tau, kInf);
      auto outcome = dtw_distance(query, dataset[i], config, thr, false);
      result.stats.dtw_calls += 1;
      if (outcome.abandoned) {
        result.stats.abandons += 1;
        continue;
      }
      best.offer({i, outcome.value, dataset[i].label()});
    }
  }

  result.neighbors = best.items;
  result.label = majority_label(result.neighbors);
  return result;
}

TriangleRepair estimate_triangle_repair(const LabeledDataset& dataset, const DtwConfig& config,
                                        std::optional<size_t> sample_triples) {
  const size_t n = dataset.size();
  if (n < 3) throw ArgumentError("triangle repair needs at least 3 instances");

  TriangleRepair repair;
  repair.size = n;
  repair.pairwise.assign(n * n, 0.0);
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = i + 1; j < n; ++j) {
      const double d = dtw_distance(dataset[i], dataset[j], config).value;
      repair.pairwise[i * n + j] = d;
      repair.pairwise[j * n + i] = d;
    }
  }

  double c = 1.0;
  auto consider = [&](size_t x, size_t y, size_t z) {
    const double denom = repair.distance(x, y) + repair.distance(y, z);
    if (denom <= 0.0) return;  // zero-distance chains cannot violate the inequality
    const double ratio = repair.distance(x, z) / denom;
    if (ratio > c) c = ratio;
  };
  if (sample_triples) {
    std::mt19937_64 rng(0x7452e9a1u);
    std::uniform_int_distribution<size_t> pick(0, n - 1);
    for (size_t t = 0; t < *sample_triples; ++t) {
      size_t x = pick(rng), y = pick(rng), z = pick(rng);
      if (x == y || y == z || x == z) continue;
      consider(x, y, z);
    }
  } else {
    for (size_t x = 0; x < n; ++x) {
      for (size_t z = x + 1; z < n; ++z) {
        for (size_t y = 0; y < n; ++y) {
          if (y == x || y == z) continue;
          consider(x, y, z);
        }
      }
    }
  }
  repair.stretch = c;
  return repair;
}

}  // namespace dtwx
