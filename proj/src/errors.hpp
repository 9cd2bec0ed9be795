#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dtwx {

// Invalid argument or configuration (bad k, infeasible window, bad factor).
struct ArgumentError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Out-of-range point index; messages use 1-based indices.
struct IndexError : std::out_of_range {
  using std::out_of_range::out_of_range;
};

// Malformed input file. line/column are 1-based; column 0 means "whole line".
struct ParseError : std::runtime_error {
  size_t line;
  size_t column;
  ParseError(const std::string& msg, size_t line_, size_t column_ = 0)
      : std::runtime_error("line " + std::to_string(line_) +
                           (column_ ? ", column " + std::to_string(column_) : std::string()) +
                           ": " + msg),
        line(line_),
        column(column_) {}
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct EmptyDatasetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Segment detection was asked to locate a feature in a query that the
// classifier says does not carry it.
struct WrongClassError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InternalError : std::logic_error {
  using std::logic_error::logic_error;
};

}  // namespace dtwx
