#pragma once

// Bit-exact output files: RFC-4180 CSV with 17 significant digits, 16-bit
// binary PGM renders of distribution maps, and a JSON sidecar next to every
// file with the resolved config and the file's SHA-256.

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "twinbeam/analysis.hpp"

namespace twinbeam {

/// Always 17 significant digits ("%.17g"); -0 prints as 0.
std::string format_number(double value);

class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);

  void add_row(std::vector<std::string> fields);
  std::size_t rows() const { return rows_.size(); }
  /// CRLF line endings, fields quoted only when they need it.
  std::string render() const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

/// Long-format CSV of a map: axis_x, axis_y, value, with x fastest.
std::string map_to_csv(const DistributionMap& map);

/// P5 with maxval 65535, big-endian samples, linear [0, 1] -> [0, 65535].
/// The first image row is the largest y so the picture reads with y up.
std::string map_to_pgm(const DistributionMap& map);

std::string sha256_hex(std::string_view data);

/// Writes data files into one directory, each with `<name>.json` beside it.
class OutputSink {
 public:
  OutputSink(std::filesystem::path dir, std::string command, nlohmann::json config);

  /// Returns the path written. Throws std::runtime_error on I/O failure.
  std::filesystem::path write(const std::string& name, const std::string& contents, const std::string& format,
                              const nlohmann::json& metadata = nlohmann::json::object());
  const std::vector<std::filesystem::path>& written() const { return written_; }

 private:
  std::filesystem::path dir_;
  std::string command_;
  nlohmann::json config_;
  std::vector<std::filesystem::path> written_;
};

}  // namespace twinbeam
