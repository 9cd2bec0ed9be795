#include "search.hpp"

#include <algorithm>
#include <cmath>

#include "digest.hpp"
#include "dtw_kernel.hpp"
#include "parallel.hpp"

namespace dtwx {

namespace {

// Candidates dispatched per scheduling block. A block is always evaluated
// in full before the early exit is decided, so both the answer and the work
// counters are independent of the worker count.
constexpr size_t kBlock = 256;

struct Candidate {
  size_t first = 0;
  size_t length = 0;

  Deletion deletion() const { return {first, first + length - 1}; }
};

// Canonical order: lengths ascending, starts ascending under the stride.
std::vector<Candidate> enumerate_deletions(size_t n, size_t stride,
                                           std::optional<size_t> max_length) {
  std::vector<Candidate> out;
  const size_t cap = max_length ? std::min(*max_length, n - 2) : n - 2;
  for (size_t len = 1; len <= cap; ++len) {
    for (size_t start = 2; start + len - 1 <= n - 1; start += stride) {
      out.push_back({start, len});
    }
  }
  return out;
}

void check_window_feasible(const DtwConfig& config, size_t n, size_t m) {
  if (!config.window) return;
  const size_t diff = n > m ? n - m : m - n;
  if (*config.window < 0 || static_cast<size_t>(*config.window) < diff) {
    throw ArgumentError("warping window " + std::to_string(*config.window) +
                        " cannot align series of lengths " + std::to_string(n) + " and " +
                        std::to_string(m));
  }
}

enum class BoundMode {
  PerFlags,  // whatever the optimization flags allow
  None,      // plain exact linear scan, used by the post-hoc verification
};

// Shared state for one (dataset, query, k) problem: the initial
// classification, cached grids or row minima per instance, and the
// per-deletion flip test. flips() is const and safe to call concurrently.
class Engine {
public:
  Engine(const LabeledDataset& dataset, const TimeSeries& query, size_t k,
         const DtwConfig& config, const OptimizationFlags& flags, const SearchConfig& search)
      : dataset_(dataset), query_(query), k_(k), config_(config), flags_(flags) {
    check_classifiable(dataset_, k_);
    n_ = query_.size();
    const size_t count = dataset_.size();
    const bool windowed = config_.window.has_value();
    const bool want_bound_state = flags_.bounds || flags_.reuse || flags_.split_bound;
    want_rev_ = want_bound_state && !windowed && (flags_.bounds || flags_.split_bound);

    BestK best(k_);
    if (want_bound_state) {
      size_t bytes_needed = 0;
      for (size_t s = 0; s < count; ++s) {
        bytes_needed +=
            (n_ + 1) * (dataset_[s].size() + 1) * sizeof(double) * (want_rev_ ? 2 : 1);
      }
      const bool want_full = flags_.reuse || flags_.split_bound;
      store_full_ = want_full && bytes_needed <= search.table_budget_bytes;
      setup_stats_.degraded = want_full && !store_full_;

      const TimeSeries query_rev = reverse_series(query_);
      if (store_full_) {
        forward_.resize(count);
        if (want_rev_) reversed_.resize(count);
      } else {
        forward_mins_.resize(count);
        if (want_rev_) reversed_mins_.resize(count);
      }
      for (size_t s = 0; s < count; ++s) {
        const TimeSeries& inst = dataset_[s];
        check_window_feasible(config_, n_, inst.size());
        double dist;
        if (store_full_) {
          auto fwd = dtw_distance(query_, inst, config_, {}, true);
          forward_[s] = fwd.table;
          dist = fwd.value;
          if (want_rev_) {
            auto rev = dtw_distance(query_rev, reverse_series(inst), config_, {}, true,
                                    Direction::Reversed);
            reversed_[s] = rev.table;
          }
        } else {
          detail::DpSpec spec;
          spec.query = query_.data();
          spec.n = n_;
          spec.candidate = inst.data();
          spec.m = inst.size();
          spec.window = config_.window;
          spec.row_mins_out = &forward_mins_[s];
          dist = detail::dtw_rows(spec).value;
          if (want_rev_) {
            std::vector<double> inst_rev(inst.values().rbegin(), inst.values().rend());
            detail::DpSpec rspec;
            rspec.query = query_rev.data();
            rspec.n = n_;
            rspec.candidate = inst_rev.data();
            rspec.m = inst_rev.size();
            rspec.window = config_.window;
            rspec.row_mins_out = &reversed_mins_[s];
            detail::dtw_rows(rspec);
          }
        }
        setup_stats_.dtw_calls += want_rev_ ? 2 : 1;
        best.offer({s, dist, inst.label()});
      }
    } else {
      for (size_t s = 0; s < count; ++s) {
        const double tau = best.tau();
        std::optional<double> thr;
        if (flags_.abandon && tau < kInf) thr = std::nextafter(tau, kInf);
        auto outcome = dtw_distance(query_, dataset_[s], config_, thr);
        setup_stats_.dtw_calls += 1;
        if (outcome.abandoned) {
          setup_stats_.abandons += 1;
          continue;
        }
        best.offer({s, outcome.value, dataset_[s].label()});
      }
    }
    original_label_ = majority_label(best.items);

    use_suffix_ = flags_.bounds && want_rev_;
    use_split_ = flags_.split_bound && store_full_ && want_rev_;
    // An anchor bound needs an anchor and a candidate distinct from the
    // query; below 3 instances the heuristic has nothing to work with.
    if (flags_.triangle && count >= 3) {
      repair_ = estimate_triangle_repair(dataset_, config_);
      setup_stats_.dtw_calls += count * (count - 1) / 2;
    }
  }

  const std::string& original_label() const { return original_label_; }
  const SearchStats& setup_stats() const { return setup_stats_; }

  /// Classifies the query with deletion d applied; returns the new label
  /// when it differs from the unmodified one. Work done is accumulated
  /// into st. Thread-safe across concurrent deletions.
  std::optional<std::string> flips(const Deletion& d, SearchStats& st, BoundMode mode) const {
    const size_t l0 = d.first;
    const size_t l1 = d.last;
    const size_t modified_len = n_ - d.length();

    thread_local std::vector<double> modified;
    modified.resize(modified_len);
    const double* qv = query_.data();
    std::copy(qv, qv + (l0 - 1), modified.begin());
    std::copy(qv + l1, qv + n_, modified.begin() + (l0 - 1));

    const bool use_bounds = mode == BoundMode::PerFlags && flags_.bounds;
    const bool use_resume = mode == BoundMode::PerFlags && flags_.reuse && store_full_;
    const bool use_abandon = mode == BoundMode::PerFlags && flags_.abandon;
    const bool use_triangle = mode == BoundMode::PerFlags && repair_.has_value();

    thread_local std::vector<std::pair<double, size_t>> order;
    order.clear();
    for (size_t s = 0; s < dataset_.size(); ++s) {
      double lb = 0.0;
      if (use_bounds) {
        lb = forward_min(s, l0 - 1);
        if (use_suffix_) lb = std::max(lb, reversed_min(s, n_ - l1));
        if (use_split_) lb = std::max(lb, split_lower_bound(*forward_[s], *reversed_[s], d));
      }
      order.emplace_back(lb, s);
    }
    if (use_bounds) std::sort(order.begin(), order.end());

    BestK best(k_);
    thread_local std::vector<std::pair<size_t, double>> anchors;
    anchors.clear();
    for (size_t pos = 0; pos < order.size(); ++pos) {
      const auto& [lb, s] = order[pos];
      const double tau = best.tau();
      if (lb > tau) {
        if (use_bounds) {
          // order is ascending in lb and tau only shrinks: everything
          // behind this candidate prunes too
          st.bound_prunes += order.size() - pos;
          break;
        }
        st.bound_prunes += 1;
        continue;
      }
      if (use_triangle && tau < kInf && !anchors.empty()) {
        double tri = -kInf;
        for (const auto& [a, dist_qa] : anchors) {
          tri = std::max(tri, repair_->anchor_bound(dist_qa, a, s));
        }
        if (tri > tau) {
          st.bound_prunes += 1;
          continue;
        }
      }
      const TimeSeries& inst = dataset_[s];
      check_window_feasible(config_, modified_len, inst.size());
      std::optional<double> thr;
      if (use_abandon && tau < kInf) thr = std::nextafter(tau, kInf);

      detail::DpSpec spec;
      spec.query = modified.data();
      spec.n = modified_len;
      spec.candidate = inst.data();
      spec.m = inst.size();
      spec.window = config_.window;
      spec.threshold = thr;
      if (use_resume) {
        spec.first_row = l0;
        spec.prev_row = forward_[s]->row(l0 - 1);
      }
      const auto res = detail::dtw_rows(spec);
      if (use_resume) {
        st.resumed_calls += 1;
        st.resumed_rows += res.rows_computed;
      } else {
        st.dtw_calls += 1;
      }
      if (res.abandoned) {
        st.abandons += 1;
        continue;
      }
      best.offer({s, res.value, inst.label()});
      if (use_triangle) anchors.emplace_back(s, res.value);
    }

    std::string label = majority_label(best.items);
    if (label != original_label_) return label;
    return std::nullopt;
  }

private:
  double forward_min(size_t s, size_t row) const {
    return store_full_ ? forward_[s]->row_min(row) : forward_mins_[s][row];
  }
  double reversed_min(size_t s, size_t row) const {
    return store_full_ ? reversed_[s]->row_min(row) : reversed_mins_[s][row];
  }

  const LabeledDataset& dataset_;
  const TimeSeries& query_;
  size_t k_;
  DtwConfig config_;
  OptimizationFlags flags_;
  size_t n_ = 0;
  bool want_rev_ = false;
  bool store_full_ = false;
  bool use_suffix_ = false;
  bool use_split_ = false;
  std::string original_label_;
  SearchStats setup_stats_;
  std::vector<std::shared_ptr<const AlignmentTable>> forward_;
  std::vector<std::shared_ptr<const AlignmentTable>> reversed_;
  std::vector<std::vector<double>> forward_mins_;
  std::vector<std::vector<double>> reversed_mins_;
  std::optional<TriangleRepair> repair_;
};

void require_deletable(const TimeSeries& query) {
  if (query.size() < 3) {
    throw ArgumentError("a query of length " + std::to_string(query.size()) +
                        " has no legal deletions");
  }
}

}  // namespace

uint64_t SearchResult::digest() const {
  Digest h;
  h.str(original_label);
  if (flipped) {
    h.str("FLIP");
    h.u64(deletion.first);
    h.u64(deletion.last);
    h.str(flipped_label);
  } else {
    h.str("NOFLIP");
  }
  return h.value();
}

uint64_t RelevanceVector::digest() const {
  Digest h;
  h.u64(values.size());
  for (double v : values) h.f64(v);
  h.u64(stride);
  h.u64(max_length ? *max_length : 0);
  return h.value();
}

SearchResult find_min_deletion(const LabeledDataset& dataset, const TimeSeries& query,
                               size_t k, const DtwConfig& config,
                               const OptimizationFlags& flags, const SearchConfig& search) {
  require_deletable(query);
  Engine engine(dataset, query, k, config, flags, search);

  SearchResult result;
  result.original_label = engine.original_label();
  result.stats = engine.setup_stats();

  const auto candidates = enumerate_deletions(query.size(), 1, {});
  std::vector<std::optional<std::string>> flip(kBlock);
  std::vector<SearchStats> stats(kBlock);
  for (size_t base = 0; base < candidates.size() && !result.flipped; base += kBlock) {
    const size_t count = std::min(kBlock, candidates.size() - base);
    parallel_for(count, search.threads, [&](size_t i) {
      stats[i] = SearchStats{};
      flip[i] = engine.flips(candidates[base + i].deletion(), stats[i], BoundMode::PerFlags);
    });
    for (size_t i = 0; i < count; ++i) result.stats += stats[i];
    for (size_t i = 0; i < count; ++i) {
      if (flip[i]) {
        result.flipped = true;
        result.deletion = candidates[base + i].deletion();
        result.flipped_label = *flip[i];
        break;
      }
    }
  }

  if (result.flipped && flags.triangle) {
    // Heuristic pruning ran; re-check the returned deletion bound-free and
    // fall back to the sound stack if it does not hold up.
    SearchStats verify_stats;
    auto verified = engine.flips(result.deletion, verify_stats, BoundMode::None);
    result.stats += verify_stats;
    if (!verified || *verified != result.flipped_label) {
      OptimizationFlags sound = flags;
      sound.triangle = false;
      return find_min_deletion(dataset, query, k, config, sound, search);
    }
  }
  return result;
}

SearchResult search_with_reuse(const LabeledDataset& dataset, const TimeSeries& query,
                               size_t k, const DtwConfig& config, const SearchConfig& search) {
  return find_min_deletion(dataset, query, k, config, OptimizationFlags::all(), search);
}

RelevanceVector compute_relevance(const LabeledDataset& dataset, const TimeSeries& query,
                                  size_t k, const DtwConfig& config,
                                  const RelevanceConfig& relevance,
                                  const OptimizationFlags& flags, const SearchConfig& search) {
  require_deletable(query);
  const size_t n = query.size();
  if (relevance.stride < 1) throw ArgumentError("stride must be at least 1");
  if (relevance.max_length && (*relevance.max_length < 1 || *relevance.max_length > n - 2)) {
    throw ArgumentError("max_length must lie in [1, n-2]");
  }
  OptimizationFlags effective = flags;
  if (relevance.sound_bounds_only) effective.triangle = false;
  Engine engine(dataset, query, k, config, effective, search);

  const auto candidates = enumerate_deletions(n, relevance.stride, relevance.max_length);
  std::vector<char> flipped(candidates.size(), 0);
  std::vector<SearchStats> stats(candidates.size());
  parallel_for(candidates.size(), search.threads, [&](size_t i) {
    stats[i] = SearchStats{};
    flipped[i] =
        engine.flips(candidates[i].deletion(), stats[i], BoundMode::PerFlags).has_value();
  });

  RelevanceVector rv;
  rv.stride = relevance.stride;
  rv.max_length = relevance.max_length;
  rv.values.assign(n, 0.0);
  rv.stats = engine.setup_stats();
  // Canonical fold: contributions land in (length, start) order no matter
  // which worker computed them.
  for (size_t i = 0; i < candidates.size(); ++i) {
    rv.stats += stats[i];
    if (!flipped[i]) continue;
    const double weight = 1.0 / static_cast<double>(candidates[i].length);
    for (size_t p = candidates[i].first - 1; p < candidates[i].first - 1 + candidates[i].length;
         ++p) {
      rv.values[p] += weight;
    }
  }
  rv.normalized.assign(n, 0.0);
  const double mx = *std::max_element(rv.values.begin(), rv.values.end());
  if (mx > 0.0) {
    for (size_t i = 0; i < n; ++i) rv.normalized[i] = rv.values[i] / mx;
  }
  return rv;
}

}  // namespace dtwx
