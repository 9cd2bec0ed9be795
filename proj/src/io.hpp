#pragma once

#include <string>
#include <vector>

#include "segment.hpp"

namespace dtwx {

/// On-disk dataset layouts. Ucr: one series per line, a label token followed
/// by the values. Csv: one series of pure numerics per line, labels in a
/// side file `<path>.labels` with one token per line. The field delimiter is
/// auto-detected per file among comma, tab and runs of spaces; the first
/// data line decides and mixing delimiters is a parse error. UTF-8, LF or
/// CRLF.
enum class DatasetFormat { Ucr, Csv };

LabeledDataset load_dataset(const std::string& path, DatasetFormat format);

/// Like load_dataset but without requiring labels; used for query files and
/// un-labelled series collections. Csv files need no side file here.
std::vector<TimeSeries> load_series_file(const std::string& path, DatasetFormat format);

/// Writes the dataset in comma-delimited Ucr layout with shortest
/// round-trip number rendering, so load(save(ds)) == ds exactly.
void save_dataset(const LabeledDataset& dataset, const std::string& path);

/// Annotation records: `series_id,start,end` per line, 1-based inclusive,
/// `#`-prefixed comment lines ignored.
std::vector<SegmentAnnotation> load_annotations(const std::string& path);

/// Pairs every annotation with the series whose id matches; unknown ids are
/// an error.
std::vector<std::pair<TimeSeries, SegmentAnnotation>> pair_annotations(
    const std::vector<TimeSeries>& series, const std::vector<SegmentAnnotation>& annotations);

/// Writes `index,value,relevance,relevance_normalized` rows, 1-based
/// indices, shortest round-trip reals. With emit_svg also writes a
/// self-contained plot next to the CSV (extension swapped to .svg): the
/// series as a polyline with per-point markers on a blue-to-yellow ramp by
/// normalized relevance.
void write_relevance(const std::string& path, const TimeSeries& series,
                     const RelevanceVector& relevance, bool emit_svg);

/// Shortest decimal string that parses back to exactly v.
std::string format_double(double v);

}  // namespace dtwx
