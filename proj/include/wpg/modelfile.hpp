#pragma once

#include <string>

#include "wpg/model.hpp"

namespace wpg {

struct ParseError : std::runtime_error {
  ParseError(const std::string& msg, int line, int col)
      : std::runtime_error(msg + " (line " + std::to_string(line) + ", column " +
                           std::to_string(col) + ")"),
        line(line),
        col(col) {}
  int line, col;
};

// Model document: key-value header plus [[coeff]] table blocks.  Rational
// fields are quoted "p/q" strings (bare integers also accepted); any float
// in a matrix or coefficient entry is rejected.  base_point carries plain
// [re, im] numbers.
VHSModel load_model_file(const std::string& path);
VHSModel parse_model_text(const std::string& text);

std::string model_to_text(const VHSModel& model);
void save_model_file(const VHSModel& model, const std::string& path);

// FNV-1a 64-bit content hash, hex encoded; embedded in reports.
std::string content_hash(const std::string& text);
std::string file_hash(const std::string& path);

}  // namespace wpg
