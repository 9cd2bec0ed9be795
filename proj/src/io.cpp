#include "io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace dtwx {

namespace {

struct Token {
  std::string text;
  size_t column;  // 1-based byte offset of the first character
};

enum class Delim { Comma, Tab, Space };

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  if (!lines.empty() && lines[0].size() >= 3 && lines[0].compare(0, 3, "\xEF\xBB\xBF") == 0) {
    lines[0].erase(0, 3);  // UTF-8 BOM
  }
  return lines;
}

bool is_blank(const std::string& line) {
  return line.find_first_not_of(" \t") == std::string::npos;
}

Delim detect_delimiter(const std::string& line) {
  if (line.find(',') != std::string::npos) return Delim::Comma;
  if (line.find('\t') != std::string::npos) return Delim::Tab;
  return Delim::Space;
}

void check_unmixed(const std::string& line, Delim delim, size_t line_no) {
  const bool has_comma = line.find(',') != std::string::npos;
  const bool has_tab = line.find('\t') != std::string::npos;
  if ((delim == Delim::Comma && has_tab) || (delim == Delim::Tab && has_comma) ||
      (delim == Delim::Space && (has_comma || has_tab))) {
    throw ParseError("mixed delimiters", line_no);
  }
}

std::vector<Token> split_line(const std::string& line, Delim delim, size_t line_no) {
  check_unmixed(line, delim, line_no);
  std::vector<Token> tokens;
  if (delim == Delim::Space) {
    size_t i = 0;
    while (i < line.size()) {
      while (i < line.size() && line[i] == ' ') ++i;
      if (i >= line.size()) break;
      const size_t start = i;
      while (i < line.size() && line[i] != ' ') ++i;
      tokens.push_back({line.substr(start, i - start), start + 1});
    }
    return tokens;
  }
  const char sep = delim == Delim::Comma ? ',' : '\t';
  size_t field_start = 0;
  for (size_t i = 0; i <= line.size(); ++i) {
    if (i == line.size() || line[i] == sep) {
      size_t a = field_start;
      size_t b = i;
      while (a < b && line[a] == ' ') ++a;  // pad spaces around fields are ignored
      while (b > a && line[b - 1] == ' ') --b;
      tokens.push_back({line.substr(a, b - a), a + 1});
      field_start = i + 1;
    }
  }
  return tokens;
}

double parse_value(const Token& tok, size_t line_no) {
  double v = 0.0;
  const char* first = tok.text.data();
  const char* last = first + tok.text.size();
  const auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc() || res.ptr != last || tok.text.empty()) {
    throw ParseError("malformed number '" + tok.text + "'", line_no, tok.column);
  }
  if (!std::isfinite(v)) {
    throw ParseError("non-finite value '" + tok.text + "'", line_no, tok.column);
  }
  return v;
}

size_t parse_index(const Token& tok, size_t line_no) {
  size_t v = 0;
  const char* first = tok.text.data();
  const char* last = first + tok.text.size();
  const auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc() || res.ptr != last || tok.text.empty()) {
    throw ParseError("malformed index '" + tok.text + "'", line_no, tok.column);
  }
  return v;
}

struct ParsedFile {
  std::vector<std::vector<Token>> rows;  // data lines only
  std::vector<size_t> line_numbers;      // 1-based
};

ParsedFile parse_table(const std::string& path) {
  const auto lines = read_lines(path);
  ParsedFile parsed;
  bool have_delim = false;
  Delim delim = Delim::Space;
  for (size_t i = 0; i < lines.size(); ++i) {
    if (is_blank(lines[i])) continue;
    if (!have_delim) {
      delim = detect_delimiter(lines[i]);
      have_delim = true;
    }
    parsed.rows.push_back(split_line(lines[i], delim, i + 1));
    parsed.line_numbers.push_back(i + 1);
  }
  return parsed;
}

std::vector<std::string> load_label_file(const std::string& path) {
  const auto lines = read_lines(path);
  std::vector<std::string> labels;
  for (size_t i = 0; i < lines.size(); ++i) {
    if (is_blank(lines[i])) continue;
    size_t a = lines[i].find_first_not_of(" \t");
    size_t b = lines[i].find_last_not_of(" \t");
    labels.push_back(lines[i].substr(a, b - a + 1));
  }
  return labels;
}

std::vector<TimeSeries> load_series_impl(const std::string& path, DatasetFormat format,
                                         bool require_labels) {
  const auto parsed = parse_table(path);
  if (parsed.rows.empty()) throw EmptyDatasetError(path + " holds no data lines");

  std::vector<std::string> side_labels;
  if (format == DatasetFormat::Csv && require_labels) {
    side_labels = load_label_file(path + ".labels");
    if (side_labels.size() != parsed.rows.size()) {
      throw ParseError("label file " + path + ".labels holds " +
                           std::to_string(side_labels.size()) + " labels for " +
                           std::to_string(parsed.rows.size()) + " series",
                       1);
    }
  }

  std::vector<TimeSeries> series;
  series.reserve(parsed.rows.size());
  for (size_t r = 0; r < parsed.rows.size(); ++r) {
    const auto& row = parsed.rows[r];
    const size_t line_no = parsed.line_numbers[r];
    std::string label;
    size_t value_from = 0;
    if (format == DatasetFormat::Ucr) {
      if (row[0].text.empty()) throw ParseError("empty label token", line_no, row[0].column);
      label = row[0].text;
      value_from = 1;
    } else if (!side_labels.empty()) {
      label = side_labels[r];
    }
    if (row.size() <= value_from) {
      throw ParseError("expected at least one value", line_no);
    }
    std::vector<double> values;
    values.reserve(row.size() - value_from);
    for (size_t c = value_from; c < row.size(); ++c) {
      values.push_back(parse_value(row[c], line_no));
    }
    series.emplace_back(std::move(values), std::to_string(r + 1), label);
  }
  return series;
}

void color_ramp(double v, int* red, int* green, int* blue) {
  // blue (low) to yellow (high)
  if (v < 0.0) v = 0.0;
  if (v > 1.0) v = 1.0;
  *red = static_cast<int>(std::lround(255.0 * v));
  *green = static_cast<int>(std::lround(255.0 * v));
  *blue = static_cast<int>(std::lround(255.0 * (1.0 - v)));
}

std::string svg_path_for(const std::string& csv_path) {
  const size_t dot = csv_path.find_last_of('.');
  const size_t slash = csv_path.find_last_of("/\\");
  if (dot != std::string::npos && (slash == std::string::npos || dot > slash)) {
    return csv_path.substr(0, dot) + ".svg";
  }
  return csv_path + ".svg";
}

void write_svg(const std::string& path, const TimeSeries& series,
               const RelevanceVector& relevance) {
  const size_t n = series.size();
  const double width = 900.0, height = 320.0, margin = 40.0;
  double lo = series[0], hi = series[0];
  for (size_t i = 1; i < n; ++i) {
    lo = std::min(lo, series[i]);
    hi = std::max(hi, series[i]);
  }
  if (hi <= lo) hi = lo + 1.0;
  auto x_of = [&](size_t i) {
    return n == 1 ? width / 2
                  : margin + (width - 2 * margin) * static_cast<double>(i) /
                                 static_cast<double>(n - 1);
  };
  auto y_of = [&](double v) { return height - margin - (height - 2 * margin) * (v - lo) / (hi - lo); };

  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
      << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<polyline fill=\"none\" stroke=\"#888888\" stroke-width=\"1\" points=\"";
  for (size_t i = 0; i < n; ++i) {
    if (i) out << ' ';
    out << x_of(i) << ',' << y_of(series[i]);
  }
  out << "\"/>\n";
  for (size_t i = 0; i < n; ++i) {
    int red, green, blue;
    color_ramp(relevance.normalized[i], &red, &green, &blue);
    out << "<circle cx=\"" << x_of(i) << "\" cy=\"" << y_of(series[i])
        << "\" r=\"4\" fill=\"rgb(" << red << ',' << green << ',' << blue << ")\"/>\n";
  }
  out << "</svg>\n";
  if (!out) throw IoError("failed writing " + path);
}

}  // namespace

std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

LabeledDataset load_dataset(const std::string& path, DatasetFormat format) {
  auto series = load_series_impl(path, format, true);
  const size_t slash = path.find_last_of("/\\");
  return LabeledDataset(std::move(series),
                        slash == std::string::npos ? path : path.substr(slash + 1));
}

std::vector<TimeSeries> load_series_file(const std::string& path, DatasetFormat format) {
  return load_series_impl(path, format, false);
}

void save_dataset(const LabeledDataset& dataset, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  for (const auto& inst : dataset.instances()) {
    out << inst.label();
    for (double v : inst.values()) out << ',' << format_double(v);
    out << '\n';
  }
  if (!out) throw IoError("failed writing " + path);
}

std::vector<SegmentAnnotation> load_annotations(const std::string& path) {
  const auto lines = read_lines(path);
  std::vector<SegmentAnnotation> annotations;
  for (size_t i = 0; i < lines.size(); ++i) {
    if (is_blank(lines[i])) continue;
    const size_t first = lines[i].find_first_not_of(" \t");
    if (lines[i][first] == '#') continue;
    const auto tokens = split_line(lines[i], Delim::Comma, i + 1);
    if (tokens.size() != 3) {
      throw ParseError("expected series_id,start,end", i + 1);
    }
    if (tokens[0].text.empty()) throw ParseError("empty series id", i + 1, tokens[0].column);
    SegmentAnnotation a;
    a.series_id = tokens[0].text;
    a.start = parse_index(tokens[1], i + 1);
    a.end = parse_index(tokens[2], i + 1);
    annotations.push_back(std::move(a));
  }
  return annotations;
}

std::vector<std::pair<TimeSeries, SegmentAnnotation>> pair_annotations(
    const std::vector<TimeSeries>& series, const std::vector<SegmentAnnotation>& annotations) {
  std::map<std::string, const TimeSeries*> by_id;
  for (const auto& s : series) by_id[s.id()] = &s;
  std::vector<std::pair<TimeSeries, SegmentAnnotation>> out;
  out.reserve(annotations.size());
  for (const auto& a : annotations) {
    const auto it = by_id.find(a.series_id);
    if (it == by_id.end()) {
      throw ArgumentError("annotation references unknown series id '" + a.series_id + "'");
    }
    out.emplace_back(*it->second, a);
  }
  return out;
}

void write_relevance(const std::string& path, const TimeSeries& series,
                     const RelevanceVector& relevance, bool emit_svg) {
  if (relevance.values.size() != series.size()) {
    throw ArgumentError("relevance length " + std::to_string(relevance.values.size()) +
                        " does not match the series length " + std::to_string(series.size()));
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out << "index,value,relevance,relevance_normalized\n";
  for (size_t i = 0; i < series.size(); ++i) {
    out << (i + 1) << ',' << format_double(series[i]) << ','
        << format_double(relevance.values[i]) << ',' << format_double(relevance.normalized[i])
        << '\n';
  }
  if (!out) throw IoError("failed writing " + path);
  if (emit_svg) write_svg(svg_path_for(path), series, relevance);
}

}  // namespace dtwx
