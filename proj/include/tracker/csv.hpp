#pragma once

#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

// Minimal CSV output. Files are written in binary mode so line endings are
// LF everywhere, and doubles carry 17 significant digits so values round
// trip exactly. Numbers are therefore reproducible byte for byte.

namespace tracker {

/// Shortest-round-trip style formatting is deliberately avoided; a fixed
/// %.17g keeps output stable across standard library implementations.
std::string csv_double(double v);

/// Quote a field if it contains a comma, quote or newline.
std::string csv_field(const std::string& s);

class CsvWriter {
 public:
  explicit CsvWriter(const std::string& path);

  bool ok() const { return bool(out_); }

  /// Write one row; fields are used verbatim, so numeric fields should
  /// already be formatted (csv_double) and text fields escaped (csv_field).
  void row(const std::vector<std::string>& fields);

 private:
  std::ofstream out_;
};

}  // namespace tracker
