#include "dtw_explain.h"

#include <cstring>
#include <map>
#include <mutex>
#include <string>

#include "io.hpp"
#include "search.hpp"
#include "segment.hpp"
#include "synthetic.hpp"

// Handle types wrap the core objects one-to-one. All exceptions are caught
// at this boundary and turned into status codes plus a thread-local message.

struct dtwx_series {
  dtwx::TimeSeries value;
};

struct dtwx_dataset {
  dtwx::LabeledDataset value;
  // lazily materialized instance views handed out by dtwx_dataset_instance;
  // they live exactly as long as the dataset handle
  std::map<size_t, dtwx_series> views;
  std::mutex views_mutex;
};

struct dtwx_classification {
  dtwx::ClassifyResult value;
};

struct dtwx_explanation {
  dtwx::SearchResult value;
};

struct dtwx_relevance {
  dtwx::RelevanceVector value;
};

struct dtwx_detection {
  dtwx::DetectionResult value;
  dtwx_relevance relevance_view;
};

namespace {

thread_local std::string g_last_error;

dtwx_status fail(dtwx_status status, const std::string& message) {
  g_last_error = message;
  return status;
}

template <typename Fn>
dtwx_status guarded(Fn&& fn) {
  try {
    fn();
    return DTWX_OK;
  } catch (const dtwx::ParseError& e) {
    return fail(DTWX_ERR_PARSE, e.what());
  } catch (const dtwx::EmptyDatasetError& e) {
    return fail(DTWX_ERR_EMPTY_DATASET, e.what());
  } catch (const dtwx::WrongClassError& e) {
    return fail(DTWX_ERR_WRONG_CLASS, e.what());
  } catch (const dtwx::IndexError& e) {
    return fail(DTWX_ERR_INDEX, e.what());
  } catch (const dtwx::IoError& e) {
    return fail(DTWX_ERR_IO, e.what());
  } catch (const dtwx::ArgumentError& e) {
    return fail(DTWX_ERR_ARGUMENT, e.what());
  } catch (const std::bad_alloc&) {
    return fail(DTWX_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(DTWX_ERR_INTERNAL, e.what());
  }
}

dtwx_status require(bool ok, const char* what) {
  return ok ? DTWX_OK : fail(DTWX_ERR_ARGUMENT, std::string("null argument: ") + what);
}

dtwx::DtwConfig make_config(int window) {
  dtwx::DtwConfig cfg;
  if (window >= 0) cfg.window = window;
  return cfg;
}

dtwx::OptimizationFlags make_flags(unsigned optimizations) {
  dtwx::OptimizationFlags flags;
  flags.abandon = (optimizations & DTWX_OPT_ABANDON) != 0;
  flags.bounds = (optimizations & DTWX_OPT_BOUNDS) != 0;
  flags.reuse = (optimizations & DTWX_OPT_REUSE) != 0;
  flags.triangle = (optimizations & DTWX_OPT_TRIANGLE) != 0;
  flags.split_bound = (optimizations & DTWX_OPT_SPLIT_BOUND) != 0;
  return flags;
}

dtwx::SearchConfig make_search(int threads) {
  dtwx::SearchConfig search;
  search.threads = threads;
  return search;
}

void copy_stats(const dtwx::SearchStats& in, dtwx_stats* out) {
  out->dtw_calls = in.dtw_calls;
  out->resumed_calls = in.resumed_calls;
  out->abandons = in.abandons;
  out->bound_prunes = in.bound_prunes;
  out->resumed_rows = in.resumed_rows;
  out->degraded = in.degraded ? 1 : 0;
}

dtwx::DatasetFormat make_format(dtwx_format format) {
  return format == DTWX_FORMAT_CSV ? dtwx::DatasetFormat::Csv : dtwx::DatasetFormat::Ucr;
}

}  // namespace

extern "C" {

const char* dtwx_version(void) { return "1.0.0"; }

const char* dtwx_status_name(dtwx_status status) {
  switch (status) {
    case DTWX_OK: return "ok";
    case DTWX_ERR_ARGUMENT: return "argument";
    case DTWX_ERR_INDEX: return "index";
    case DTWX_ERR_PARSE: return "parse";
    case DTWX_ERR_IO: return "io";
    case DTWX_ERR_EMPTY_DATASET: return "empty-dataset";
    case DTWX_ERR_WRONG_CLASS: return "wrong-class";
    case DTWX_ERR_INTERNAL: return "internal";
  }
  return "unknown";
}

const char* dtwx_last_error(void) { return g_last_error.c_str(); }

dtwx_status dtwx_series_create(const double* values, size_t length, const char* id,
                               const char* label, dtwx_series** out) {
  if (auto st = require(values && out, "values/out")) return st;
  return guarded([&] {
    *out = new dtwx_series{dtwx::TimeSeries(std::vector<double>(values, values + length),
                                            id ? id : "", label ? label : "")};
  });
}

void dtwx_series_free(dtwx_series* series) { delete series; }

size_t dtwx_series_length(const dtwx_series* series) { return series->value.size(); }

const double* dtwx_series_values(const dtwx_series* series) { return series->value.data(); }

const char* dtwx_series_id(const dtwx_series* series) { return series->value.id().c_str(); }

const char* dtwx_series_label(const dtwx_series* series) {
  return series->value.label().c_str();
}

dtwx_status dtwx_series_delete_range(const dtwx_series* series, size_t first, size_t last,
                                     dtwx_series** out) {
  if (auto st = require(series && out, "series/out")) return st;
  return guarded([&] {
    *out = new dtwx_series{dtwx::delete_subsequence(series->value, {first, last})};
  });
}

dtwx_status dtwx_series_reverse(const dtwx_series* series, dtwx_series** out) {
  if (auto st = require(series && out, "series/out")) return st;
  return guarded([&] { *out = new dtwx_series{dtwx::reverse_series(series->value)}; });
}

dtwx_status dtwx_series_znormalize(const dtwx_series* series, dtwx_series** out) {
  if (auto st = require(series && out, "series/out")) return st;
  return guarded([&] { *out = new dtwx_series{dtwx::z_normalize(series->value)}; });
}

dtwx_status dtwx_series_downsample(const dtwx_series* series, size_t factor,
                                   dtwx_series** out) {
  if (auto st = require(series && out, "series/out")) return st;
  return guarded([&] { *out = new dtwx_series{dtwx::downsample(series->value, factor)}; });
}

dtwx_status dtwx_series_load(const char* path, dtwx_format format, size_t index,
                             dtwx_series** out) {
  if (auto st = require(path && out, "path/out")) return st;
  return guarded([&] {
    auto series = dtwx::load_series_file(path, make_format(format));
    if (index >= series.size()) {
      throw dtwx::IndexError("series index " + std::to_string(index + 1) +
                             " out of range for " + std::to_string(series.size()) +
                             " series in " + path);
    }
    *out = new dtwx_series{std::move(series[index])};
  });
}

dtwx_status dtwx_dataset_load(const char* path, dtwx_format format, dtwx_dataset** out) {
  if (auto st = require(path && out, "path/out")) return st;
  return guarded([&] {
    *out = new dtwx_dataset{dtwx::load_dataset(path, make_format(format)), {}, {}};
  });
}

dtwx_status dtwx_dataset_create(const dtwx_series* const* instances, size_t count,
                                const char* name, dtwx_dataset** out) {
  if (auto st = require(instances && out, "instances/out")) return st;
  return guarded([&] {
    std::vector<dtwx::TimeSeries> copies;
    copies.reserve(count);
    for (size_t i = 0; i < count; ++i) {
      if (!instances[i]) throw dtwx::ArgumentError("null instance handle");
      copies.push_back(instances[i]->value);
    }
    *out = new dtwx_dataset{dtwx::LabeledDataset(std::move(copies), name ? name : "dataset"), {}, {}};
  });
}

dtwx_status dtwx_dataset_save(const dtwx_dataset* dataset, const char* path) {
  if (auto st = require(dataset && path, "dataset/path")) return st;
  return guarded([&] { dtwx::save_dataset(dataset->value, path); });
}

void dtwx_dataset_free(dtwx_dataset* dataset) { delete dataset; }

size_t dtwx_dataset_size(const dtwx_dataset* dataset) { return dataset->value.size(); }

const char* dtwx_dataset_name(const dtwx_dataset* dataset) {
  return dataset->value.name().c_str();
}

const dtwx_series* dtwx_dataset_instance(const dtwx_dataset* dataset, size_t index) {
  if (!dataset || index >= dataset->value.size()) return nullptr;
  auto* self = const_cast<dtwx_dataset*>(dataset);
  std::lock_guard<std::mutex> lock(self->views_mutex);
  auto it = self->views.find(index);
  if (it == self->views.end()) {
    it = self->views.emplace(index, dtwx_series{self->value[index]}).first;
  }
  return &it->second;
}

dtwx_status dtwx_dtw_distance(const dtwx_series* a, const dtwx_series* b, int window,
                              double* out_distance) {
  if (auto st = require(a && b && out_distance, "a/b/out_distance")) return st;
  return guarded([&] {
    *out_distance = dtwx::dtw_distance(a->value, b->value, make_config(window)).value;
  });
}

dtwx_status dtwx_classify(const dtwx_dataset* dataset, const dtwx_series* query, size_t k,
                          int window, dtwx_classification** out) {
  if (auto st = require(dataset && query && out, "dataset/query/out")) return st;
  return guarded([&] {
    *out = new dtwx_classification{
        dtwx::classify(dataset->value, query->value, k, make_config(window))};
  });
}

void dtwx_classification_free(dtwx_classification* c) { delete c; }

const char* dtwx_classification_label(const dtwx_classification* c) {
  return c->value.label.c_str();
}

size_t dtwx_classification_neighbor_count(const dtwx_classification* c) {
  return c->value.neighbors.size();
}

dtwx_status dtwx_classification_neighbor(const dtwx_classification* c, size_t i,
                                         size_t* out_index, double* out_distance,
                                         const char** out_label) {
  if (auto st = require(c, "classification")) return st;
  if (i >= c->value.neighbors.size()) {
    return fail(DTWX_ERR_INDEX, "neighbor index out of range");
  }
  const auto& nb = c->value.neighbors[i];
  if (out_index) *out_index = nb.index;
  if (out_distance) *out_distance = nb.distance;
  if (out_label) *out_label = nb.label.c_str();
  return DTWX_OK;
}

dtwx_status dtwx_explain(const dtwx_dataset* dataset, const dtwx_series* query, size_t k,
                         int window, unsigned optimizations, int threads,
                         dtwx_explanation** out) {
  if (auto st = require(dataset && query && out, "dataset/query/out")) return st;
  return guarded([&] {
    *out = new dtwx_explanation{dtwx::find_min_deletion(dataset->value, query->value, k,
                                                        make_config(window),
                                                        make_flags(optimizations),
                                                        make_search(threads))};
  });
}

void dtwx_explanation_free(dtwx_explanation* e) { delete e; }

int dtwx_explanation_flipped(const dtwx_explanation* e) { return e->value.flipped ? 1 : 0; }

dtwx_status dtwx_explanation_deletion(const dtwx_explanation* e, size_t* out_start,
                                      size_t* out_length) {
  if (auto st = require(e, "explanation")) return st;
  if (!e->value.flipped) {
    return fail(DTWX_ERR_ARGUMENT, "no deletion: the classification never flipped");
  }
  if (out_start) *out_start = e->value.deletion.first;
  if (out_length) *out_length = e->value.deletion.length();
  return DTWX_OK;
}

const char* dtwx_explanation_original_label(const dtwx_explanation* e) {
  return e->value.original_label.c_str();
}

const char* dtwx_explanation_flipped_label(const dtwx_explanation* e) {
  return e->value.flipped_label.c_str();
}

void dtwx_explanation_stats(const dtwx_explanation* e, dtwx_stats* out) {
  copy_stats(e->value.stats, out);
}

uint64_t dtwx_explanation_digest(const dtwx_explanation* e) { return e->value.digest(); }

dtwx_status dtwx_relevance_compute(const dtwx_dataset* dataset, const dtwx_series* query,
                                   size_t k, int window, size_t stride, size_t max_length,
                                   unsigned optimizations, int threads, dtwx_relevance** out) {
  if (auto st = require(dataset && query && out, "dataset/query/out")) return st;
  return guarded([&] {
    dtwx::RelevanceConfig rcfg;
    rcfg.stride = stride;
    if (max_length > 0) rcfg.max_length = max_length;
    rcfg.sound_bounds_only = (optimizations & DTWX_OPT_TRIANGLE) == 0;
    *out = new dtwx_relevance{dtwx::compute_relevance(dataset->value, query->value, k,
                                                      make_config(window), rcfg,
                                                      make_flags(optimizations),
                                                      make_search(threads))};
  });
}

void dtwx_relevance_free(dtwx_relevance* r) { delete r; }

size_t dtwx_relevance_length(const dtwx_relevance* r) { return r->value.values.size(); }

const double* dtwx_relevance_values(const dtwx_relevance* r) {
  return r->value.values.data();
}

const double* dtwx_relevance_normalized(const dtwx_relevance* r) {
  return r->value.normalized.data();
}

void dtwx_relevance_stats(const dtwx_relevance* r, dtwx_stats* out) {
  copy_stats(r->value.stats, out);
}

uint64_t dtwx_relevance_digest(const dtwx_relevance* r) { return r->value.digest(); }

dtwx_status dtwx_relevance_write(const dtwx_relevance* r, const dtwx_series* query,
                                 const char* csv_path, int emit_svg) {
  if (auto st = require(r && query && csv_path, "relevance/query/csv_path")) return st;
  return guarded([&] {
    dtwx::write_relevance(csv_path, query->value, r->value, emit_svg != 0);
  });
}

dtwx_status dtwx_detection_dataset_build(const char* series_path, dtwx_format format,
                                         const char* annotations_path, dtwx_dataset** out) {
  if (auto st = require(series_path && annotations_path && out, "paths/out")) return st;
  return guarded([&] {
    const auto series = dtwx::load_series_file(series_path, make_format(format));
    const auto annotations = dtwx::load_annotations(annotations_path);
    if (annotations.empty()) {
      throw dtwx::ArgumentError(std::string(annotations_path) + " holds no annotations");
    }
    const auto paired = dtwx::pair_annotations(series, annotations);
    *out = new dtwx_dataset{dtwx::build_detection_dataset(paired), {}, {}};
  });
}

dtwx_status dtwx_detect(const dtwx_dataset* dataset, const dtwx_series* query, int window,
                        size_t stride, size_t max_length, double threshold_multiplier,
                        unsigned optimizations, int threads, dtwx_detection** out) {
  if (auto st = require(dataset && query && out, "dataset/query/out")) return st;
  return guarded([&] {
    dtwx::RelevanceConfig rcfg;
    rcfg.stride = stride;
    if (max_length > 0) rcfg.max_length = max_length;
    rcfg.sound_bounds_only = (optimizations & DTWX_OPT_TRIANGLE) == 0;
    auto result = dtwx::detect_segment(dataset->value, query->value, make_config(window),
                                       rcfg, threshold_multiplier, make_flags(optimizations),
                                       make_search(threads));
    auto* d = new dtwx_detection{std::move(result), {}};
    d->relevance_view.value = d->value.relevance;
    *out = d;
  });
}

void dtwx_detection_free(dtwx_detection* d) { delete d; }

int dtwx_detection_found(const dtwx_detection* d) { return d->value.found ? 1 : 0; }

dtwx_status dtwx_detection_segment(const dtwx_detection* d, size_t* out_start,
                                   size_t* out_end) {
  if (auto st = require(d, "detection")) return st;
  if (!d->value.found) {
    return fail(DTWX_ERR_ARGUMENT, "no segment: nothing exceeded the threshold");
  }
  if (out_start) *out_start = d->value.start;
  if (out_end) *out_end = d->value.end;
  return DTWX_OK;
}

double dtwx_detection_threshold(const dtwx_detection* d) { return d->value.threshold; }

const dtwx_relevance* dtwx_detection_relevance(const dtwx_detection* d) {
  return &d->relevance_view;
}

dtwx_status dtwx_synthetic_dataset(size_t size, size_t length, uint64_t seed,
                                   dtwx_dataset** out) {
  if (auto st = require(out, "out")) return st;
  return guarded([&] {
    *out = new dtwx_dataset{dtwx::synthetic_dataset(size, length, seed), {}, {}};
  });
}

dtwx_status dtwx_synthetic_query(size_t length, uint64_t seed, dtwx_series** out) {
  if (auto st = require(out, "out")) return st;
  return guarded([&] { *out = new dtwx_series{dtwx::synthetic_query(length, seed)}; });
}

}  // extern "C"
