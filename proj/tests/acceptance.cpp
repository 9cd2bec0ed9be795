// Acceptance suite: every release-gating guarantee, one line per criterion.
//
//   1 exact DTW vs exhaustive path enumeration + metric-style properties
//   2 prefix/suffix row bounds below the exact modified distance
//   3 optimized search == transliterated naive search, minimality certified
//   4 relevance == brute-force enumeration; worked fixture values
//   5 optimized variant strictly cheaper than naive at size 500, n 80
//   6 ECG5000 directional reproduction (skipped without the dataset file)
//   7 synthetic segment-detection round trip
//   8 digests of 3-7 identical across worker counts 1, 2, 8
//
// Exits non-zero if any criterion fails; skips are not failures.

#include <chrono>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "digest.hpp"
#include "io.hpp"
#include "oracle.hpp"
#include "search.hpp"
#include "segment.hpp"
#include "synthetic.hpp"

using namespace dtwx;

namespace {

int g_failures = 0;

struct Timer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
};

void report(int criterion, bool pass, const std::string& detail, double seconds) {
  std::printf("[%s] criterion %d: %s [%.1fs]\n", pass ? "PASS" : "FAIL", criterion,
              detail.c_str(), seconds);
  std::fflush(stdout);
  if (!pass) g_failures += 1;
}

void report_skip(int criterion, const std::string& detail) {
  std::printf("[SKIP] criterion %d: %s\n", criterion, detail.c_str());
  std::fflush(stdout);
}

SearchConfig threaded(int threads) {
  SearchConfig cfg;
  cfg.threads = threads;
  return cfg;
}

// ---- criterion 1 -------------------------------------------------------

void criterion_1() {
  Timer timer;
  std::mt19937_64 rng(0xACCE01);
  size_t integer_mismatches = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const auto a = oracle::random_int_series(rng, 1, 8, 0, 9);
    const auto b = oracle::random_int_series(rng, 1, 8, 0, 9);
    const double reference = oracle::brute_dtw(a, b);
    if (dtw_distance(TimeSeries(a), TimeSeries(b)).value != reference) integer_mismatches++;
  }

  size_t property_violations = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const auto a = oracle::random_real_series(rng, 1, 20);
    const auto b = oracle::random_real_series(rng, 1, 20);
    const double ab = dtw_distance(TimeSeries(a), TimeSeries(b)).value;
    const double ba = dtw_distance(TimeSeries(b), TimeSeries(a)).value;
    const double tol = 1e-9 * std::max(1.0, std::fabs(ab));
    if (!(ab >= 0.0)) property_violations++;
    if (std::fabs(ab - ba) > tol) property_violations++;
    std::vector<double> ar(a.rbegin(), a.rend());
    std::vector<double> br(b.rbegin(), b.rend());
    if (std::fabs(ab - dtw_distance(TimeSeries(ar), TimeSeries(br)).value) > tol) {
      property_violations++;
    }
    if (dtw_distance(TimeSeries(a), TimeSeries(a)).value != 0.0) property_violations++;
  }

  const double secs = timer.seconds();
  const bool pass = integer_mismatches == 0 && property_violations == 0 && secs < 30.0;
  char detail[160];
  std::snprintf(detail, sizeof detail,
                "DTW oracle suite: 1000 integer pairs exact (%zu mismatches), 1000 float "
                "pairs within 1e-9 (%zu violations)",
                integer_mismatches, property_violations);
  report(1, pass, detail, secs);
}

// ---- criterion 2 -------------------------------------------------------

void criterion_2() {
  Timer timer;
  std::mt19937_64 rng(0xACCE02);
  size_t violations = 0;
  size_t checked = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const auto tv = oracle::random_real_series(rng, 3, 30);
    const auto sv = oracle::random_real_series(rng, 1, 30);
    const size_t n = tv.size();
    const TimeSeries t(tv), s(sv);
    const auto fwd = dtw_distance(t, s, {}, {}, true).table;
    const auto rev =
        dtw_distance(reverse_series(t), reverse_series(s), {}, {}, true, Direction::Reversed)
            .table;
    for (size_t l0 = 2; l0 <= n - 1; ++l0) {
      for (size_t l1 = l0; l1 <= n - 1; ++l1) {
        const Deletion d{l0, l1};
        const double exact = dtw_distance(delete_subsequence(t, d), s).value;
        if (row_lower_bound(*fwd, d) > exact) violations++;
        if (suffix_lower_bound(*rev, d, n) > exact) violations++;
        checked += 1;
      }
    }
  }
  const double secs = timer.seconds();
  char detail[160];
  std::snprintf(detail, sizeof detail,
                "bound soundness: %zu (pair, deletion) cases exhaustive, %zu violations",
                checked, violations);
  report(2, violations == 0 && secs < 60.0, detail, secs);
}

// ---- criteria 3 and 4 share one problem set ----------------------------

struct Problem {
  LabeledDataset dataset;
  TimeSeries query;
};

std::vector<Problem> shared_problems() {
  std::mt19937_64 rng(0xACCE34);
  std::vector<Problem> problems;
  problems.reserve(200);
  for (int trial = 0; trial < 200; ++trial) {
    auto ds = oracle::random_dataset(rng, 15, 25);
    TimeSeries q(oracle::random_int_series(rng, 5, 25, 0, 4), "q");
    problems.push_back({std::move(ds), std::move(q)});
  }
  return problems;
}

uint64_t criterion_3(const std::vector<Problem>& problems, int threads, bool verify,
                     bool* pass_out) {
  Timer timer;
  size_t mismatches = 0;
  size_t minimality_breaks = 0;
  size_t flips = 0;
  Digest fold;
  for (const auto& problem : problems) {
    const auto fast = search_with_reuse(problem.dataset, problem.query, 1, {},
                                        threaded(threads));
    fold.u64(fast.digest());
    if (!verify) continue;

    const auto reference = oracle::naive_search(problem.dataset, problem.query.values(), 1);
    const bool same = fast.flipped == reference.flipped &&
                      fast.original_label == reference.original_label &&
                      (!fast.flipped || (fast.deletion == reference.deletion &&
                                         fast.flipped_label == reference.flipped_label));
    if (!same) mismatches++;
    if (!fast.flipped) continue;
    flips += 1;
    // exhaustive minimality certificate
    const size_t n = problem.query.size();
    for (size_t len = 1; len <= fast.deletion.length() && minimality_breaks == 0; ++len) {
      for (size_t start = 2; start + len - 1 <= n - 1; ++start) {
        if (len == fast.deletion.length() && start >= fast.deletion.first) break;
        const auto label = oracle::naive_classify(
            problem.dataset, oracle::splice(problem.query.values(), start, start + len - 1),
            1);
        if (label != reference.original_label) {
          minimality_breaks++;
          break;
        }
      }
    }
  }
  const double secs = timer.seconds();
  if (verify) {
    char detail[160];
    std::snprintf(detail, sizeof detail,
                  "search equivalence: 200 problems, %zu mismatches, %zu minimality breaks "
                  "(%zu flips)",
                  mismatches, minimality_breaks, flips);
    const bool pass = mismatches == 0 && minimality_breaks == 0 && secs < 300.0;
    if (pass_out) *pass_out = pass;
    report(3, pass, detail, secs);
  }
  return fold.value();
}

uint64_t criterion_4(const std::vector<Problem>& problems, int threads, bool verify) {
  Timer timer;
  size_t mismatches = 0;
  Digest fold;
  for (const auto& problem : problems) {
    const auto rv = compute_relevance(problem.dataset, problem.query, 1, {}, {},
                                      OptimizationFlags::all(), threaded(threads));
    fold.u64(rv.digest());
    if (!verify) continue;
    const auto reference = oracle::naive_relevance(problem.dataset, problem.query.values(), 1);
    for (size_t i = 0; i < reference.size(); ++i) {
      if (std::fabs(rv.values[i] - reference[i]) > 1e-12) {
        mismatches++;
        break;
      }
    }
  }

  bool worked_ok = true;
  if (verify) {
    // worked fixture: relevance <0, 5/6, 7/3, 5/6, 0>, detection run [3,3]
    std::vector<TimeSeries> v;
    v.emplace_back(std::vector<double>{0, 0, 0, 0, 0}, "1", "A");
    v.emplace_back(std::vector<double>{0, 0, 5, 0, 0}, "2", "B");
    const LabeledDataset worked(std::move(v), "worked");
    const TimeSeries query(std::vector<double>{0, 0, 5, 0, 0}, "q");
    const auto rv = compute_relevance(worked, query, 1);
    const std::vector<double> expected{0.0, 5.0 / 6.0, 7.0 / 3.0, 5.0 / 6.0, 0.0};
    for (size_t i = 0; i < expected.size(); ++i) {
      if (std::fabs(rv.values[i] - expected[i]) > 1e-12) worked_ok = false;
    }
    const auto detection_ds = build_detection_dataset(
        {{TimeSeries(std::vector<double>{0, 0, 5, 0, 0}, "1"), {"1", 3, 3}}});
    const auto det = detect_segment(detection_ds, query);
    if (!det.found || det.start != 3 || det.end != 3) worked_ok = false;
    if (std::fabs(det.threshold - 1.6) > 1e-12) worked_ok = false;

    const double secs = timer.seconds();
    char detail[160];
    std::snprintf(detail, sizeof detail,
                  "relevance oracle: 200 problems within 1e-12 (%zu mismatches), worked "
                  "fixture %s",
                  mismatches, worked_ok ? "exact" : "WRONG");
    report(4, mismatches == 0 && worked_ok, detail, secs);
  }
  return fold.value();
}

// ---- criterion 5 -------------------------------------------------------

struct SpeedupOutcome {
  uint64_t digest = 0;
  double naive_wall = 0.0;
  double fast_wall = 0.0;
  uint64_t naive_calls = 0;
  uint64_t fast_calls = 0;
};

SpeedupOutcome speedup_run(int threads, bool run_naive) {
  const auto ds = synthetic_dataset(500, 80, 0xACCE05);
  const auto q = synthetic_query(80, 0xACCE05);
  SpeedupOutcome out;

  Timer fast_timer;
  const auto fast = compute_relevance(ds, q, 1, {}, {}, OptimizationFlags::all(),
                                      threaded(threads));
  out.fast_wall = fast_timer.seconds();
  out.fast_calls = fast.stats.dtw_calls;
  out.digest = fast.digest();

  if (run_naive) {
    Timer naive_timer;
    const auto naive = compute_relevance(ds, q, 1, {}, {}, OptimizationFlags::none(),
                                         threaded(threads));
    out.naive_wall = naive_timer.seconds();
    out.naive_calls = naive.stats.dtw_calls;
    if (naive.digest() != fast.digest()) out.digest = 0;  // poisoned: variants disagree
  }
  return out;
}

uint64_t criterion_5(int threads, bool verify) {
  Timer timer;
  const auto outcome = speedup_run(threads, verify);
  if (!verify) return outcome.digest;

  const double ratio = outcome.naive_wall / outcome.fast_wall;
  const bool digests_match = outcome.digest != 0;
  const bool fewer = outcome.fast_calls < outcome.naive_calls;
  const bool faster = ratio > 1.0;
  char detail[200];
  std::snprintf(detail, sizeof detail,
                "speedup at size 500, n 80: wall %.2fs -> %.2fs (%.1fx, target 2x %s), "
                "dtw_calls %" PRIu64 " -> %" PRIu64 ", digests %s",
                outcome.naive_wall, outcome.fast_wall, ratio,
                ratio >= 2.0 ? "met" : "missed", outcome.naive_calls, outcome.fast_calls,
                digests_match ? "match" : "MISMATCH");
  const double secs = timer.seconds();
  report(5, digests_match && fewer && faster && secs < 900.0, detail, secs);
  return outcome.digest;
}

// ---- criterion 6 -------------------------------------------------------

std::optional<std::string> find_ecg5000() {
  namespace fs = std::filesystem;
  if (const char* env = std::getenv("DTWX_ECG5000")) {
    if (fs::exists(env)) return std::string(env);
  }
  for (const char* candidate :
       {"ECG5000_TRAIN.tsv", "data/ECG5000_TRAIN.tsv", "ECG5000/ECG5000_TRAIN.tsv",
        "data/ECG5000/ECG5000_TRAIN.tsv", "ECG5000_TRAIN.txt", "data/ECG5000_TRAIN.txt"}) {
    if (fs::exists(candidate)) return std::string(candidate);
  }
  return std::nullopt;
}

struct Ecg5000Outcome {
  uint64_t digest = 0;
  size_t evaluated = 0;
  size_t hits = 0;
};

Ecg5000Outcome ecg5000_run(const std::string& path, int threads, size_t max_queries) {
  const auto full = load_dataset(path, DatasetFormat::Ucr);

  std::map<std::string, size_t> counts;
  for (const auto& inst : full.instances()) counts[inst.label()] += 1;
  std::vector<std::pair<size_t, std::string>> ranked;
  for (const auto& [label, count] : counts) ranked.push_back({count, label});
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    return a.first != b.first ? a.first > b.first : a.second < b.second;
  });
  const std::string major = ranked[0].second;
  const std::string minor = ranked[1].second;

  std::vector<TimeSeries> kept;
  for (const auto& inst : full.instances()) {
    if (inst.label() == major || inst.label() == minor) kept.push_back(inst);
  }
  const LabeledDataset two_class(std::move(kept), "ecg5000-two-class");

  Ecg5000Outcome out;
  Digest fold;
  RelevanceConfig rcfg;
  rcfg.stride = 2;
  for (size_t i = 0; i < two_class.size() && out.evaluated < max_queries; ++i) {
    if (two_class[i].label() != major) continue;
    const auto rest = two_class.without(i);
    if (classify(rest, two_class[i], 1).label != major) continue;  // leave-one-out filter
    const auto rv = compute_relevance(rest, two_class[i], 1, {}, rcfg,
                                      OptimizationFlags::all(), threaded(threads));
    size_t argmax = 0;
    for (size_t p = 1; p < rv.values.size(); ++p) {
      if (rv.values[p] > rv.values[argmax]) argmax = p;
    }
    const size_t argmax_1based = argmax + 1;
    if (argmax_1based >= 85 && argmax_1based <= 115) out.hits += 1;
    out.evaluated += 1;
    fold.u64(rv.digest());
  }
  out.digest = fold.value();
  return out;
}

uint64_t criterion_6(const std::optional<std::string>& path, int threads, bool verify,
                     size_t max_queries) {
  if (!path) return 0;
  Timer timer;
  const auto outcome = ecg5000_run(*path, threads, max_queries);
  if (!verify) return outcome.digest;
  const double fraction =
      outcome.evaluated ? static_cast<double>(outcome.hits) / outcome.evaluated : 0.0;
  char detail[200];
  std::snprintf(detail, sizeof detail,
                "ECG5000: argmax of relevance in [85,115] for %zu/%zu correctly-classified "
                "majority-class beats (%.0f%%, need 60%%)",
                outcome.hits, outcome.evaluated, fraction * 100.0);
  const double secs = timer.seconds();
  report(6, fraction >= 0.6 && secs < 1800.0, detail, secs);
  return outcome.digest;
}

// ---- criterion 7 -------------------------------------------------------

struct RoundTripOutcome {
  uint64_t digest = 0;
  size_t trials = 0;
  size_t hits = 0;
};

RoundTripOutcome round_trip_run(int threads) {
  std::mt19937_64 rng(0xACCE07);
  RoundTripOutcome out;
  Digest fold;
  out.trials = 50;
  for (size_t trial = 0; trial < out.trials; ++trial) {
    std::vector<std::pair<TimeSeries, SegmentAnnotation>> annotated;
    for (int i = 0; i < 6; ++i) {
      auto bump = baseline_bump_series(40, 0.15, 1.5, rng, std::to_string(i + 1));
      annotated.push_back({bump.series, {bump.series.id(), bump.bump_start, bump.bump_end}});
    }
    const auto ds = build_detection_dataset(annotated);
    const auto probe = baseline_bump_series(40, 0.15, 1.5, rng, "q");
    bool hit = false;
    try {
      const auto det = detect_segment(ds, probe.series, {}, {}, 2.0,
                                      OptimizationFlags::all(), threaded(threads));
      fold.u64(det.relevance.digest());
      if (det.found) {
        const size_t lo = std::max(det.start, probe.bump_start);
        const size_t hi = std::min(det.end, probe.bump_end);
        const size_t inter = hi >= lo ? hi - lo + 1 : 0;
        const size_t uni = (det.end - det.start + 1) +
                           (probe.bump_end - probe.bump_start + 1) - inter;
        hit = static_cast<double>(inter) / static_cast<double>(uni) >= 0.3;
      }
    } catch (const WrongClassError&) {
      fold.u64(0xBAD);
    }
    if (hit) out.hits += 1;
  }
  out.digest = fold.value();
  return out;
}

uint64_t criterion_7(int threads, bool verify) {
  Timer timer;
  const auto outcome = round_trip_run(threads);
  if (!verify) return outcome.digest;
  const double fraction = static_cast<double>(outcome.hits) / outcome.trials;
  char detail[160];
  std::snprintf(detail, sizeof detail,
                "segment round trip: Jaccard >= 0.3 in %zu/%zu seeded trials (%.0f%%, need "
                "80%%)",
                outcome.hits, outcome.trials, fraction * 100.0);
  const double secs = timer.seconds();
  report(7, fraction >= 0.8 && secs < 300.0, detail, secs);
  return outcome.digest;
}

// ---- criterion 8 -------------------------------------------------------

void criterion_8(const std::vector<Problem>& problems,
                 const std::optional<std::string>& ecg_path) {
  Timer timer;
  bool pass = true;
  std::string note;
  const int counts[] = {1, 2, 8};

  auto check_equal = [&](const char* what, uint64_t a, uint64_t b, uint64_t c) {
    if (a != b || a != c) {
      pass = false;
      note += std::string(" ") + what + " diverged;";
    }
  };

  check_equal("search", criterion_3(problems, 1, false, nullptr),
              criterion_3(problems, 2, false, nullptr),
              criterion_3(problems, 8, false, nullptr));
  check_equal("relevance", criterion_4(problems, 1, false), criterion_4(problems, 2, false),
              criterion_4(problems, 8, false));
  check_equal("speedup", criterion_5(1, false), criterion_5(2, false),
              criterion_5(8, false));
  if (ecg_path) {
    // capped to the first 10 queries to keep the re-runs affordable
    check_equal("ecg5000[10]", criterion_6(ecg_path, 1, false, 10),
                criterion_6(ecg_path, 2, false, 10), criterion_6(ecg_path, 8, false, 10));
  }
  check_equal("round-trip", criterion_7(1, false), criterion_7(2, false),
              criterion_7(8, false));

  char detail[200];
  std::snprintf(detail, sizeof detail,
                "determinism: digests of criteria 3-7 identical for 1, 2 and 8 workers%s%s",
                ecg_path ? "" : " (6 skipped: no dataset)", note.c_str());
  report(8, pass, detail, timer.seconds());
}

}  // namespace

int main() {
  std::printf("acceptance suite, library version 1.0.0\n");
  criterion_1();
  criterion_2();
  const auto problems = shared_problems();
  criterion_3(problems, 0, true, nullptr);
  criterion_4(problems, 0, true);
  criterion_5(0, true);
  const auto ecg = find_ecg5000();
  if (ecg) {
    criterion_6(ecg, 0, true, SIZE_MAX);
  } else {
    report_skip(6, "ECG5000 directional reproduction (file not found; set DTWX_ECG5000 or "
                   "place ECG5000_TRAIN.tsv under ./data)");
  }
  criterion_7(0, true);
  criterion_8(problems, ecg);

  if (g_failures == 0) {
    std::printf("all criteria passed%s\n", ecg ? "" : " (1 skipped)");
  } else {
    std::printf("%d criteria FAILED\n", g_failures);
  }
  return g_failures == 0 ? 0 : 1;
}
