/*
 * dtw_explain: explaining 1-NN DTW time-series classifications by minimal
 * contiguous deletions and per-point relevance scores.
 *
 * All objects are opaque handles created and freed by the library. Every
 * fallible call returns a dtwx_status; on failure the thread-local message
 * from dtwx_last_error() describes the cause. Series point indices (deletion
 * ranges, detected segments, relevance rows) are 1-based; dataset instance
 * indices are plain 0-based array positions.
 */
#ifndef DTW_EXPLAIN_H
#define DTW_EXPLAIN_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define DTWX_API __declspec(dllexport)
#else
#define DTWX_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum dtwx_status {
  DTWX_OK = 0,
  DTWX_ERR_ARGUMENT = 1,      /* invalid argument or configuration */
  DTWX_ERR_INDEX = 2,         /* out-of-range point index */
  DTWX_ERR_PARSE = 3,         /* malformed input file */
  DTWX_ERR_IO = 4,            /* file system failure */
  DTWX_ERR_EMPTY_DATASET = 5, /* file holds no data lines */
  DTWX_ERR_WRONG_CLASS = 6,   /* detection query lacks the feature */
  DTWX_ERR_INTERNAL = 7
} dtwx_status;

typedef enum dtwx_format {
  DTWX_FORMAT_UCR = 0, /* label token followed by values, one series per line */
  DTWX_FORMAT_CSV = 1  /* pure numerics; labels in a <path>.labels side file */
} dtwx_format;

/* Optimization switches for the deletion search and relevance. Any
 * combination returns the same answer as DTWX_OPT_NONE; only the work
 * counters change. DTWX_OPT_TRIANGLE admits heuristic pruning and is
 * guarded by a post-hoc verification of the returned deletion. */
enum {
  DTWX_OPT_NONE = 0u,
  DTWX_OPT_ABANDON = 1u << 0,
  DTWX_OPT_BOUNDS = 1u << 1,
  DTWX_OPT_REUSE = 1u << 2,
  DTWX_OPT_ALL = (1u << 0) | (1u << 1) | (1u << 2),
  DTWX_OPT_TRIANGLE = 1u << 3,
  DTWX_OPT_SPLIT_BOUND = 1u << 4
};

typedef struct dtwx_series dtwx_series;
typedef struct dtwx_dataset dtwx_dataset;
typedef struct dtwx_classification dtwx_classification;
typedef struct dtwx_explanation dtwx_explanation;
typedef struct dtwx_relevance dtwx_relevance;
typedef struct dtwx_detection dtwx_detection;

typedef struct dtwx_stats {
  uint64_t dtw_calls;     /* from-scratch evaluations, full or abandoned */
  uint64_t resumed_calls; /* warm restarts from cached grid rows */
  uint64_t abandons;
  uint64_t bound_prunes;
  uint64_t resumed_rows;
  int degraded; /* grid cache exceeded its budget; fell back to bounds only */
} dtwx_stats;

DTWX_API const char* dtwx_version(void);
DTWX_API const char* dtwx_status_name(dtwx_status status);
/* Message for the most recent failure on this thread; valid until the next
 * library call from the same thread. */
DTWX_API const char* dtwx_last_error(void);

/* ---- series ---------------------------------------------------------- */

DTWX_API dtwx_status dtwx_series_create(const double* values, size_t length, const char* id,
                                        const char* label, dtwx_series** out);
DTWX_API void dtwx_series_free(dtwx_series* series);
DTWX_API size_t dtwx_series_length(const dtwx_series* series);
DTWX_API const double* dtwx_series_values(const dtwx_series* series);
DTWX_API const char* dtwx_series_id(const dtwx_series* series);
DTWX_API const char* dtwx_series_label(const dtwx_series* series); /* "" when unlabelled */

/* first/last are 1-based inclusive; end-points are not removable. */
DTWX_API dtwx_status dtwx_series_delete_range(const dtwx_series* series, size_t first,
                                              size_t last, dtwx_series** out);
DTWX_API dtwx_status dtwx_series_reverse(const dtwx_series* series, dtwx_series** out);
/* Sample mean 0, population standard deviation 1; constant series map to
 * all-zeros. */
DTWX_API dtwx_status dtwx_series_znormalize(const dtwx_series* series, dtwx_series** out);
DTWX_API dtwx_status dtwx_series_downsample(const dtwx_series* series, size_t factor,
                                            dtwx_series** out);
/* Loads the index-th series (0-based) of the file. */
DTWX_API dtwx_status dtwx_series_load(const char* path, dtwx_format format, size_t index,
                                      dtwx_series** out);

/* ---- datasets -------------------------------------------------------- */

DTWX_API dtwx_status dtwx_dataset_load(const char* path, dtwx_format format,
                                       dtwx_dataset** out);
/* Builds a dataset from labelled series; the instances are copied. */
DTWX_API dtwx_status dtwx_dataset_create(const dtwx_series* const* instances, size_t count,
                                         const char* name, dtwx_dataset** out);
/* Writes comma-delimited UCR layout; loading it back reproduces the dataset
 * exactly. */
DTWX_API dtwx_status dtwx_dataset_save(const dtwx_dataset* dataset, const char* path);
DTWX_API void dtwx_dataset_free(dtwx_dataset* dataset);
DTWX_API size_t dtwx_dataset_size(const dtwx_dataset* dataset);
DTWX_API const char* dtwx_dataset_name(const dtwx_dataset* dataset);
/* Borrowed reference, valid while the dataset lives; NULL when out of
 * range. */
DTWX_API const dtwx_series* dtwx_dataset_instance(const dtwx_dataset* dataset, size_t index);

/* ---- distance -------------------------------------------------------- */

/* Exact DTW distance with absolute-difference local cost. window < 0 means
 * unconstrained; otherwise it is a band half-width that must cover the
 * length difference of the pair. */
DTWX_API dtwx_status dtwx_dtw_distance(const dtwx_series* a, const dtwx_series* b, int window,
                                       double* out_distance);

/* ---- classification --------------------------------------------------- */

DTWX_API dtwx_status dtwx_classify(const dtwx_dataset* dataset, const dtwx_series* query,
                                   size_t k, int window, dtwx_classification** out);
DTWX_API void dtwx_classification_free(dtwx_classification* c);
DTWX_API const char* dtwx_classification_label(const dtwx_classification* c);
DTWX_API size_t dtwx_classification_neighbor_count(const dtwx_classification* c);
DTWX_API dtwx_status dtwx_classification_neighbor(const dtwx_classification* c, size_t i,
                                                  size_t* out_index, double* out_distance,
                                                  const char** out_label);

/* ---- minimal flipping deletion ---------------------------------------- */

/* threads <= 0 resolves through DTW_EXPLAIN_THREADS, then the hardware. */
DTWX_API dtwx_status dtwx_explain(const dtwx_dataset* dataset, const dtwx_series* query,
                                  size_t k, int window, unsigned optimizations, int threads,
                                  dtwx_explanation** out);
DTWX_API void dtwx_explanation_free(dtwx_explanation* e);
DTWX_API int dtwx_explanation_flipped(const dtwx_explanation* e);
/* start is 1-based; fails with DTWX_ERR_ARGUMENT when nothing flipped. */
DTWX_API dtwx_status dtwx_explanation_deletion(const dtwx_explanation* e, size_t* out_start,
                                               size_t* out_length);
DTWX_API const char* dtwx_explanation_original_label(const dtwx_explanation* e);
DTWX_API const char* dtwx_explanation_flipped_label(const dtwx_explanation* e); /* "" if none */
DTWX_API void dtwx_explanation_stats(const dtwx_explanation* e, dtwx_stats* out);
DTWX_API uint64_t dtwx_explanation_digest(const dtwx_explanation* e);

/* ---- relevance --------------------------------------------------------- */

/* stride >= 1 enumerates deletion starts every stride-th point;
 * max_length == 0 leaves lengths uncapped. */
DTWX_API dtwx_status dtwx_relevance_compute(const dtwx_dataset* dataset,
                                            const dtwx_series* query, size_t k, int window,
                                            size_t stride, size_t max_length,
                                            unsigned optimizations, int threads,
                                            dtwx_relevance** out);
DTWX_API void dtwx_relevance_free(dtwx_relevance* r);
DTWX_API size_t dtwx_relevance_length(const dtwx_relevance* r);
DTWX_API const double* dtwx_relevance_values(const dtwx_relevance* r);
DTWX_API const double* dtwx_relevance_normalized(const dtwx_relevance* r);
DTWX_API void dtwx_relevance_stats(const dtwx_relevance* r, dtwx_stats* out);
DTWX_API uint64_t dtwx_relevance_digest(const dtwx_relevance* r);
/* Writes index,value,relevance,relevance_normalized rows (1-based indices,
 * shortest round-trip reals); with emit_svg also a plot next to the CSV. */
DTWX_API dtwx_status dtwx_relevance_write(const dtwx_relevance* r, const dtwx_series* query,
                                          const char* csv_path, int emit_svg);

/* ---- segment detection ------------------------------------------------- */

/* Builds the two-class WITH/WITHOUT dataset from a series file and an
 * annotation file (`series_id,start,end` lines, 1-based inclusive, '#'
 * comments). Series ids are their 1-based file positions. */
DTWX_API dtwx_status dtwx_detection_dataset_build(const char* series_path, dtwx_format format,
                                                  const char* annotations_path,
                                                  dtwx_dataset** out);
/* Thresholds relevance at threshold_multiplier times its mean and returns
 * the longest run strictly above it. Fails with DTWX_ERR_WRONG_CLASS when
 * the query classifies as WITHOUT. */
DTWX_API dtwx_status dtwx_detect(const dtwx_dataset* dataset, const dtwx_series* query,
                                 int window, size_t stride, size_t max_length,
                                 double threshold_multiplier, unsigned optimizations,
                                 int threads, dtwx_detection** out);
DTWX_API void dtwx_detection_free(dtwx_detection* d);
DTWX_API int dtwx_detection_found(const dtwx_detection* d);
DTWX_API dtwx_status dtwx_detection_segment(const dtwx_detection* d, size_t* out_start,
                                            size_t* out_end);
DTWX_API double dtwx_detection_threshold(const dtwx_detection* d);
/* Borrowed reference, valid while the detection lives. */
DTWX_API const dtwx_relevance* dtwx_detection_relevance(const dtwx_detection* d);

/* ---- synthetic benchmark data ------------------------------------------ */

/* Seeded two-class random walks with and without an injected bump. */
DTWX_API dtwx_status dtwx_synthetic_dataset(size_t size, size_t length, uint64_t seed,
                                            dtwx_dataset** out);
DTWX_API dtwx_status dtwx_synthetic_query(size_t length, uint64_t seed, dtwx_series** out);

#ifdef __cplusplus
}
#endif

#endif /* DTW_EXPLAIN_H */
