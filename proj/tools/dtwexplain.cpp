// Command-line front end for the dtw_explain shared library. Everything
// here goes through the public C API; no core headers are included.

#include <charconv>
#include <chrono>
#include <cinttypes>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dtw_explain.h"

namespace {

// 0 ok, 1 internal invariant failure, 2 usage, 3 input parse/IO
constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitUsage = 2;
constexpr int kExitInput = 3;

int exit_code_for(dtwx_status status) {
  switch (status) {
    case DTWX_OK:
      return kExitOk;
    case DTWX_ERR_ARGUMENT:
    case DTWX_ERR_WRONG_CLASS:
      return kExitUsage;
    case DTWX_ERR_PARSE:
    case DTWX_ERR_IO:
    case DTWX_ERR_EMPTY_DATASET:
    case DTWX_ERR_INDEX:
      return kExitInput;
    case DTWX_ERR_INTERNAL:
      break;
  }
  return kExitInternal;
}

// Non-zero statuses unwind through this exception so every command exits
// with the scheme above and the library's message on stderr.
struct CommandError {
  int code;
  std::string message;
};

void check(dtwx_status status) {
  if (status != DTWX_OK) {
    throw CommandError{exit_code_for(status),
                       std::string(dtwx_status_name(status)) + ": " + dtwx_last_error()};
  }
}

std::string fmt_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string fmt_digest(uint64_t digest) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, digest);
  return buf;
}

struct SeriesHandle {
  dtwx_series* ptr = nullptr;
  ~SeriesHandle() { dtwx_series_free(ptr); }
};

struct DatasetHandle {
  dtwx_dataset* ptr = nullptr;
  ~DatasetHandle() { dtwx_dataset_free(ptr); }
};

dtwx_format parse_format(const std::string& name) {
  return name == "csv" ? DTWX_FORMAT_CSV : DTWX_FORMAT_UCR;
}

struct CommonOpts {
  std::string dataset_path;
  std::string query_path;
  size_t k = 1;
  int window = -1;
  std::string format = "ucr";
  int threads = 0;
};

void add_common(CLI::App* cmd, CommonOpts* opts, bool with_threads, bool with_k = true) {
  cmd->add_option("--dataset", opts->dataset_path, "training dataset file")->required();
  cmd->add_option("--query", opts->query_path, "query series file (first series is used)")
      ->required();
  if (with_k) cmd->add_option("--k", opts->k, "number of neighbours");
  cmd->add_option("--window", opts->window, "warping window half-width");
  cmd->add_option("--format", opts->format, "file format: ucr or csv")
      ->check(CLI::IsMember({"ucr", "csv"}));
  if (with_threads) {
    cmd->add_option("--threads", opts->threads,
                    "worker count (default: DTW_EXPLAIN_THREADS or hardware)");
  }
}

void load_problem(const CommonOpts& opts, DatasetHandle* dataset, SeriesHandle* query) {
  if (opts.k < 1) {
    throw CommandError{kExitUsage, "--k must be at least 1"};
  }
  check(dtwx_dataset_load(opts.dataset_path.c_str(), parse_format(opts.format), &dataset->ptr));
  check(dtwx_series_load(opts.query_path.c_str(), parse_format(opts.format), 0, &query->ptr));
}

void print_stats(const dtwx_stats& stats) {
  std::printf("stats dtw_calls=%" PRIu64 " resumed_calls=%" PRIu64 " abandons=%" PRIu64
              " bound_prunes=%" PRIu64 " resumed_rows=%" PRIu64 "%s\n",
              stats.dtw_calls, stats.resumed_calls, stats.abandons, stats.bound_prunes,
              stats.resumed_rows, stats.degraded ? " degraded=1" : "");
}

int cmd_classify(const CommonOpts& opts) {
  DatasetHandle dataset;
  SeriesHandle query;
  load_problem(opts, &dataset, &query);

  dtwx_classification* result = nullptr;
  check(dtwx_classify(dataset.ptr, query.ptr, opts.k, opts.window, &result));
  std::printf("label %s\n", dtwx_classification_label(result));
  const size_t count = dtwx_classification_neighbor_count(result);
  for (size_t i = 0; i < count; ++i) {
    size_t index = 0;
    double distance = 0.0;
    const char* label = nullptr;
    dtwx_classification_neighbor(result, i, &index, &distance, &label);
    std::printf("neighbor index=%zu distance=%s label=%s\n", index + 1,
                fmt_double(distance).c_str(), label);
  }
  dtwx_classification_free(result);
  return kExitOk;
}

int cmd_explain(const CommonOpts& opts, bool naive, bool unsound) {
  DatasetHandle dataset;
  SeriesHandle query;
  load_problem(opts, &dataset, &query);

  unsigned flags = naive ? DTWX_OPT_NONE : DTWX_OPT_ALL;
  if (unsound) flags |= DTWX_OPT_TRIANGLE;
  dtwx_explanation* result = nullptr;
  check(dtwx_explain(dataset.ptr, query.ptr, opts.k, opts.window, flags, opts.threads,
                     &result));
  if (dtwx_explanation_flipped(result)) {
    size_t start = 0, length = 0;
    dtwx_explanation_deletion(result, &start, &length);
    std::printf("FLIP start=%zu length=%zu from=%s to=%s\n", start, length,
                dtwx_explanation_original_label(result),
                dtwx_explanation_flipped_label(result));
  } else {
    std::printf("NOFLIP\n");
  }
  dtwx_stats stats;
  dtwx_explanation_stats(result, &stats);
  print_stats(stats);
  dtwx_explanation_free(result);
  return kExitOk;
}

int cmd_relevance(const CommonOpts& opts, size_t stride, size_t max_len,
                  const std::string& out, bool svg, bool naive, bool unsound) {
  DatasetHandle dataset;
  SeriesHandle query;
  load_problem(opts, &dataset, &query);

  unsigned flags = naive ? DTWX_OPT_NONE : DTWX_OPT_ALL;
  if (unsound) flags |= DTWX_OPT_TRIANGLE;
  dtwx_relevance* result = nullptr;
  check(dtwx_relevance_compute(dataset.ptr, query.ptr, opts.k, opts.window, stride, max_len,
                               flags, opts.threads, &result));
  const dtwx_status wrote = dtwx_relevance_write(result, query.ptr, out.c_str(), svg ? 1 : 0);
  if (wrote != DTWX_OK) {
    dtwx_relevance_free(result);
    check(wrote);
  }
  std::printf("wrote %s\n", out.c_str());
  if (svg) {
    const size_t dot = out.find_last_of('.');
    const size_t slash = out.find_last_of("/\\");
    const std::string svg_path =
        (dot != std::string::npos && (slash == std::string::npos || dot > slash))
            ? out.substr(0, dot) + ".svg"
            : out + ".svg";
    std::printf("wrote %s\n", svg_path.c_str());
  }
  dtwx_stats stats;
  dtwx_relevance_stats(result, &stats);
  print_stats(stats);
  dtwx_relevance_free(result);
  return kExitOk;
}

int cmd_detect_build(const std::string& series_path, const std::string& annotations_path,
                     const std::string& out, const std::string& format) {
  DatasetHandle dataset;
  check(dtwx_detection_dataset_build(series_path.c_str(), parse_format(format),
                                     annotations_path.c_str(), &dataset.ptr));
  check(dtwx_dataset_save(dataset.ptr, out.c_str()));
  std::printf("wrote %s instances=%zu\n", out.c_str(), dtwx_dataset_size(dataset.ptr));
  return kExitOk;
}

int cmd_detect_run(const CommonOpts& opts, double threshold_mult) {
  DatasetHandle dataset;
  SeriesHandle query;
  load_problem(opts, &dataset, &query);

  dtwx_detection* result = nullptr;
  check(dtwx_detect(dataset.ptr, query.ptr, opts.window, 1, 0, threshold_mult, DTWX_OPT_ALL,
                    opts.threads, &result));
  if (dtwx_detection_found(result)) {
    size_t start = 0, end = 0;
    dtwx_detection_segment(result, &start, &end);
    std::printf("SEGMENT start=%zu end=%zu\n", start, end);
  } else {
    std::printf("ABSENT\n");
  }
  dtwx_detection_free(result);
  return kExitOk;
}

struct BenchRow {
  std::string variant;
  size_t length;
  size_t size;
  double wall_seconds;
  uint64_t dtw_calls;
  uint64_t prunes;
  uint64_t digest;
};

int cmd_bench(const std::vector<size_t>& sizes, const std::vector<size_t>& lengths,
              uint64_t seed, const std::string& out, int threads) {
  struct Variant {
    const char* name;
    unsigned flags;
  };
  const Variant variants[] = {
      {"naive", DTWX_OPT_NONE},
      {"abandon", DTWX_OPT_ABANDON},
      {"abandon+bounds", DTWX_OPT_ABANDON | DTWX_OPT_BOUNDS},
      {"abandon+bounds+reuse", DTWX_OPT_ALL},
  };

  std::vector<BenchRow> rows;
  for (const size_t size : sizes) {
    for (const size_t length : lengths) {
      DatasetHandle dataset;
      SeriesHandle query;
      check(dtwx_synthetic_dataset(size, length, seed, &dataset.ptr));
      check(dtwx_synthetic_query(length, seed, &query.ptr));

      uint64_t first_digest = 0;
      bool have_digest = false;
      for (const auto& variant : variants) {
        dtwx_relevance* result = nullptr;
        const auto t0 = std::chrono::steady_clock::now();
        check(dtwx_relevance_compute(dataset.ptr, query.ptr, 1, -1, 1, 0, variant.flags,
                                     threads, &result));
        const auto t1 = std::chrono::steady_clock::now();
        dtwx_stats stats;
        dtwx_relevance_stats(result, &stats);
        BenchRow row{variant.name,
                     length,
                     size,
                     std::chrono::duration<double>(t1 - t0).count(),
                     stats.dtw_calls,
                     stats.bound_prunes,
                     dtwx_relevance_digest(result)};
        dtwx_relevance_free(result);

        if (!have_digest) {
          first_digest = row.digest;
          have_digest = true;
        } else if (row.digest != first_digest) {
          std::fprintf(stderr,
                       "internal: digest mismatch at n=%zu size=%zu variant=%s "
                       "(%s vs %s)\n",
                       length, size, variant.name, fmt_digest(row.digest).c_str(),
                       fmt_digest(first_digest).c_str());
          return kExitInternal;
        }
        std::printf("variant=%s n=%zu dataset_size=%zu wall=%s dtw_calls=%" PRIu64
                    " prunes=%" PRIu64 " digest=%s\n",
                    row.variant.c_str(), row.length, row.size,
                    fmt_double(row.wall_seconds).c_str(), row.dtw_calls, row.prunes,
                    fmt_digest(row.digest).c_str());
        rows.push_back(row);
      }
    }
  }

  std::ofstream csv(out, std::ios::binary);
  if (!csv) {
    throw CommandError{kExitInput, "cannot write " + out};
  }
  csv << "variant,n,dataset_size,wall_seconds,dtw_calls,prunes,digest\n";
  for (const auto& row : rows) {
    csv << row.variant << ',' << row.length << ',' << row.size << ','
        << fmt_double(row.wall_seconds) << ',' << row.dtw_calls << ',' << row.prunes << ','
        << fmt_digest(row.digest) << '\n';
  }
  std::printf("wrote %s\n", out.c_str());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"explain 1-NN DTW time-series classifications by minimal deletions"};
  app.require_subcommand(1);
  app.set_version_flag("--version", dtwx_version());

  CommonOpts classify_opts;
  auto* classify_cmd = app.add_subcommand("classify", "k-NN classification under DTW");
  add_common(classify_cmd, &classify_opts, false);

  CommonOpts explain_opts;
  bool naive = false, unsound = false;
  auto* explain_cmd =
      app.add_subcommand("explain", "minimum-length deletion that flips the label");
  add_common(explain_cmd, &explain_opts, true);
  explain_cmd->add_flag("--naive", naive, "disable all optimizations");
  explain_cmd->add_flag("--unsound-bounds", unsound,
                        "enable heuristic triangle-repair pruning (post-verified)");

  CommonOpts relevance_opts;
  size_t stride = 1, max_len = 0;
  std::string relevance_out;
  bool svg = false;
  bool relevance_naive = false, relevance_unsound = false;
  auto* relevance_cmd = app.add_subcommand("relevance", "per-point relevance scores");
  add_common(relevance_cmd, &relevance_opts, true);
  relevance_cmd->add_flag("--naive", relevance_naive, "disable all optimizations");
  relevance_cmd->add_flag("--unsound-bounds", relevance_unsound,
                          "enable heuristic triangle-repair pruning");
  relevance_cmd->add_option("--stride", stride, "enumerate deletion starts every Nth point");
  relevance_cmd->add_option("--max-len", max_len, "cap on deletion length");
  relevance_cmd->add_option("--out", relevance_out, "output CSV path")->required();
  relevance_cmd->add_flag("--svg", svg, "also write an SVG plot next to the CSV");

  auto* detect_cmd = app.add_subcommand("detect", "segment detection via relevance");
  detect_cmd->require_subcommand(1);
  std::string build_series, build_annotations, build_out, build_format = "ucr";
  auto* build_cmd = detect_cmd->add_subcommand("build", "construct the WITH/WITHOUT dataset");
  build_cmd->add_option("--series", build_series, "annotated series file")->required();
  build_cmd->add_option("--annotations", build_annotations, "series_id,start,end lines")
      ->required();
  build_cmd->add_option("--out", build_out, "output dataset path")->required();
  build_cmd->add_option("--format", build_format, "series file format")
      ->check(CLI::IsMember({"ucr", "csv"}));

  CommonOpts detect_opts;
  double threshold_mult = 2.0;
  auto* run_cmd = detect_cmd->add_subcommand("run", "locate the segment in a query");
  add_common(run_cmd, &detect_opts, true, /*with_k=*/false);  // detection is 1-NN
  run_cmd->add_option("--threshold-mult", threshold_mult,
                      "multiplier on the mean relevance");

  std::vector<size_t> sizes{16, 100, 500};
  std::vector<size_t> lengths{20, 40, 60, 80};
  uint64_t seed = 42;
  std::string bench_out;
  int bench_threads = 0;
  auto* bench_cmd = app.add_subcommand("bench", "seeded scalability benchmark");
  bench_cmd->add_option("--sizes", sizes, "dataset sizes")->delimiter(',');
  bench_cmd->add_option("--lengths", lengths, "series lengths")->delimiter(',');
  bench_cmd->add_option("--seed", seed, "generator seed");
  bench_cmd->add_option("--out", bench_out, "report CSV path")->required();
  bench_cmd->add_option("--threads", bench_threads, "worker count");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help / --version
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (classify_cmd->parsed()) return cmd_classify(classify_opts);
    if (explain_cmd->parsed()) return cmd_explain(explain_opts, naive, unsound);
    if (relevance_cmd->parsed()) {
      return cmd_relevance(relevance_opts, stride, max_len, relevance_out, svg,
                           relevance_naive, relevance_unsound);
    }
    if (build_cmd->parsed()) {
      return cmd_detect_build(build_series, build_annotations, build_out, build_format);
    }
    if (run_cmd->parsed()) return cmd_detect_run(detect_opts, threshold_mult);
    if (bench_cmd->parsed()) return cmd_bench(sizes, lengths, seed, bench_out, bench_threads);
  } catch (const CommandError& e) {
    std::fprintf(stderr, "%s\n", e.message.c_str());
    return e.code;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "internal: %s\n", e.what());
    return kExitInternal;
  }
  return kExitUsage;
}
