#include "dtw.hpp"

#include <cassert>
#include <cmath>
#include <cstdlib>

#include "dtw_kernel.hpp"

namespace dtwx {

namespace detail {

namespace {

void window_bounds(size_t i, size_t m, bool banded, long w, size_t* lo, size_t* hi) {
  *lo = 1;
  *hi = m;
  if (!banded) return;
  const long l = static_cast<long>(i) - w;
  const long h = static_cast<long>(i) + w;
  if (l > 1) *lo = static_cast<size_t>(l);
  if (h < static_cast<long>(m)) *hi = static_cast<size_t>(h);
}

}  // namespace

DpResult dtw_rows(const DpSpec& spec) {
  const size_t n = spec.n;
  const size_t m = spec.m;
  const bool has_thr = spec.threshold.has_value();
  const double thr = spec.threshold.value_or(kInf);
  const bool banded = spec.window.has_value();
  const long w = banded ? *spec.window : 0;
  assert(n >= 1 && m >= 1 && spec.first_row >= 1 && spec.first_row <= n);
  assert(!spec.cells_out || (spec.first_row == 1 && !has_thr));

  static thread_local std::vector<double> tl_prev;
  static thread_local std::vector<double> tl_cur;

  double* prev;
  double* cur;
  if (spec.cells_out) {
    spec.cells_out->assign((n + 1) * (m + 1), kInf);
    (*spec.cells_out)[0] = 0.0;
    prev = spec.cells_out->data();
    cur = prev + (m + 1);
  } else {
    tl_prev.resize(m + 1);
    tl_cur.resize(m + 1);
    if (spec.prev_row) {
      for (size_t j = 0; j <= m; ++j) tl_prev[j] = spec.prev_row[j];
    } else {
      tl_prev[0] = 0.0;
      for (size_t j = 1; j <= m; ++j) tl_prev[j] = kInf;
    }
    prev = tl_prev.data();
    cur = tl_cur.data();
  }
  if (spec.row_mins_out) {
    spec.row_mins_out->assign(n + 1, kInf);
    (*spec.row_mins_out)[0] = 0.0;
  }

  DpResult res;
  double last_val = kInf;
  for (size_t i = spec.first_row; i <= n; ++i) {
    size_t lo, hi;
    window_bounds(i, m, banded, w, &lo, &hi);
    if (banded && !spec.cells_out) {
      for (size_t j = 0; j < lo; ++j) cur[j] = kInf;
      for (size_t j = hi + 1; j <= m; ++j) cur[j] = kInf;
    } else {
      cur[0] = kInf;
    }
    const double qi = spec.query[i - 1];
    double row_min = kInf;
    for (size_t j = lo; j <= hi; ++j) {
      const double diag = prev[j - 1];
      const double up = prev[j];
      const double left = cur[j - 1];
      double best = diag < up ? diag : up;
      if (left < best) best = left;
      double v;
      if (has_thr && best >= thr) {
        v = kInf;  // any path through this cell already costs >= thr
      } else {
        v = std::fabs(qi - spec.candidate[j - 1]) + best;
      }
      cur[j] = v;
      if (v < row_min) row_min = v;
    }
    if (spec.row_mins_out) (*spec.row_mins_out)[i] = row_min;
    res.rows_computed = i - spec.first_row + 1;
    if (has_thr && row_min >= thr) {
      res.abandoned = true;
      res.value = thr;
      return res;
    }
    if (i == n) last_val = cur[m];
    if (spec.cells_out) {
      prev = cur;
      cur = prev + (m + 1);
    } else {
      std::swap(prev, cur);
    }
  }
  if (has_thr && std::isinf(last_val)) {
    // The corner cell itself was pruned: its true value reaches the
    // threshold even though the final row still had cheaper entries.
    res.abandoned = true;
    res.value = thr;
    return res;
  }
  res.value = last_val;
  return res;
}

}  // namespace detail

namespace {

void check_window(const DtwConfig& config, size_t n, size_t m) {
  if (!config.window) return;
  if (*config.window < 0) {
    throw ArgumentError("warping window must be non-negative");
  }
  const size_t diff = n > m ? n - m : m - n;
  if (static_cast<size_t>(*config.window) < diff) {
    throw ArgumentError("warping window " + std::to_string(*config.window) +
                        " cannot align series of lengths " + std::to_string(n) + " and " +
                        std::to_string(m));
  }
}

void check_legal(const AlignmentTable& table, const Deletion& d) {
  d.validate(table.query_len());
}

}  // namespace

AlignmentTable::AlignmentTable(size_t query_len, size_t candidate_len, Direction direction,
                               std::string candidate_ref, DtwConfig config,
                               std::vector<double> cells, std::vector<double> row_mins)
    : query_len_(query_len),
      candidate_len_(candidate_len),
      direction_(direction),
      candidate_ref_(std::move(candidate_ref)),
      config_(config),
      cells_(std::move(cells)),
      row_mins_(std::move(row_mins)) {
  assert(cells_.size() == (query_len_ + 1) * (candidate_len_ + 1));
  assert(row_mins_.size() == query_len_ + 1);
}

DtwOutcome dtw_distance(const TimeSeries& query, const TimeSeries& candidate,
                        const DtwConfig& config, std::optional<double> threshold,
                        bool retain_table, Direction table_direction) {
  check_window(config, query.size(), candidate.size());
  detail::DpSpec spec;
  spec.query = query.data();
  spec.n = query.size();
  spec.candidate = candidate.data();
  spec.m = candidate.size();
  spec.window = config.window;

  DtwOutcome out;
  if (retain_table) {
    // Retention implies a full exact grid; abandoning is disabled.
    std::vector<double> cells;
    std::vector<double> row_mins;
    spec.cells_out = &cells;
    spec.row_mins_out = &row_mins;
    const auto res = detail::dtw_rows(spec);
    out.value = res.value;
    out.rows_computed = res.rows_computed;
    out.table = std::make_shared<AlignmentTable>(spec.n, spec.m, table_direction,
                                                 candidate.id(), config, std::move(cells),
                                                 std::move(row_mins));
    return out;
  }
  spec.threshold = threshold;
  const auto res = detail::dtw_rows(spec);
  out.abandoned = res.abandoned;
  out.value = res.value;
  out.rows_computed = res.rows_computed;
  return out;
}

DtwOutcome dtw_resume(const AlignmentTable& cached, const TimeSeries& modified,
                      const Deletion& d, const TimeSeries& candidate,
                      const DtwConfig& config, std::optional<double> threshold) {
  if (cached.direction() != Direction::Forward) {
    throw ArgumentError("dtw_resume requires a forward alignment grid");
  }
  if (!(config == cached.config())) {
    throw ArgumentError("dtw_resume configuration differs from the cached grid's");
  }
  check_legal(cached, d);
  if (candidate.size() != cached.candidate_len()) {
    throw ArgumentError("cached grid was built against a candidate of length " +
                        std::to_string(cached.candidate_len()) + ", got " +
                        std::to_string(candidate.size()));
  }
  if (modified.size() + d.length() != cached.query_len()) {
    throw ArgumentError("modified series length " + std::to_string(modified.size()) +
                        " does not match the cached query length " +
                        std::to_string(cached.query_len()) + " minus the deletion");
  }
  check_window(config, modified.size(), candidate.size());

  DtwOutcome out;
  // The copied prefix ends with row d.first - 1; its minimum already
  // lower-bounds the final cost, so the threshold can fire before any
  // new row is computed.
  if (threshold && cached.row_min(d.first - 1) >= *threshold) {
    out.abandoned = true;
    out.value = *threshold;
    return out;
  }
  detail::DpSpec spec;
  spec.query = modified.data();
  spec.n = modified.size();
  spec.candidate = candidate.data();
  spec.m = candidate.size();
  spec.window = config.window;
  spec.threshold = threshold;
  spec.first_row = d.first;
  spec.prev_row = cached.row(d.first - 1);
  const auto res = detail::dtw_rows(spec);
  out.abandoned = res.abandoned;
  out.value = res.value;
  out.rows_computed = res.rows_computed;
  return out;
}

double row_lower_bound(const AlignmentTable& cached, const Deletion& d) {
  check_legal(cached, d);
  return cached.row_min(d.first - 1);
}

double suffix_lower_bound(const AlignmentTable& cached_rev, const Deletion& d,
                          size_t original_len) {
  if (cached_rev.query_len() != original_len) {
    throw ArgumentError("reversed grid length does not match the original query length");
  }
  if (cached_rev.config().window) {
    throw ArgumentError("the suffix bound requires an unconstrained alignment");
  }
  d.validate(original_len);
  return cached_rev.row_min(original_len - d.last);
}

double split_lower_bound(const AlignmentTable& fwd, const AlignmentTable& rev,
                         const Deletion& d) {
  const size_t n = fwd.query_len();
  const size_t m = fwd.candidate_len();
  if (rev.query_len() != n || rev.candidate_len() != m) {
    throw ArgumentError("forward and reversed grids describe different pairs");
  }
  if (fwd.config().window || rev.config().window) {
    throw ArgumentError("the split bound requires an unconstrained alignment");
  }
  d.validate(n);
  const double* prefix = fwd.row(d.first - 1);
  const double* suffix = rev.row(n - d.last);
  // A path leaves the prefix at some column j and re-enters the tail at
  // column j or j+1; the reversed grid prices the tail against the last
  // m-j+1 or m-j candidate points.
  double best = kInf;
  for (size_t j = 1; j <= m; ++j) {
    double tail = suffix[m - j + 1];
    if (j < m && suffix[m - j] < tail) tail = suffix[m - j];
    const double total = prefix[j] + tail;
    if (total < best) best = total;
  }
  if (std::isinf(best)) return best;
  // Both addends come from summations ordered differently than the exact
  // evaluation of the modified pair, so the sum can overshoot it by
  // accumulated rounding. Shave the worst case off so the returned value
  // stays below computed distances.
  const double slack =
      4.0 * static_cast<double>(n + m) * std::numeric_limits<double>::epsilon();
  return best * (1.0 - slack);
}

}  // namespace dtwx
