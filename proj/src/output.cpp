#include "twinbeam/output.hpp"

#include <fmt/format.h>
#include <openssl/evp.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace twinbeam {

namespace {

std::string quote_if_needed(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

void write_file(const std::filesystem::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

}  // namespace

std::string format_number(double value) {
  // -0 and 0 print the same so mirror-symmetric grids give identical text
  if (value == 0.0) value = 0.0;
  return fmt::format("{:.17g}", value);
}

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

void CsvTable::add_row(std::vector<std::string> fields) {
  if (fields.size() != header_.size()) throw std::logic_error("CsvTable: row width does not match the header");
  rows_.push_back(std::move(fields));
}

std::string CsvTable::render() const {
  std::string out;
  auto line = [&](const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i) out += ',';
      out += quote_if_needed(fields[i]);
    }
    out += "\r\n";
  };
  line(header_);
  for (const auto& r : rows_) line(r);
  return out;
}

std::string map_to_csv(const DistributionMap& map) {
  CsvTable t({map.axis_x + "_m", map.axis_y + "_m", "value"});
  const int n = map.grid.size();
  for (int iy = 0; iy < n; ++iy)
    for (int ix = 0; ix < n; ++ix)
      t.add_row({format_number(map.grid.coordinate(ix)), format_number(map.grid.coordinate(iy)),
                 format_number(map.at(ix, iy))});
  return t.render();
}

std::string map_to_pgm(const DistributionMap& map) {
  const int n = map.grid.size();
  std::string out = fmt::format("P5\n{} {}\n65535\n", n, n);
  out.reserve(out.size() + 2 * static_cast<std::size_t>(n) * n);
  for (int iy = n - 1; iy >= 0; --iy) {
    for (int ix = 0; ix < n; ++ix) {
      const double v = std::clamp(map.at(ix, iy), 0.0, 1.0);
      const auto s = static_cast<unsigned>(std::lround(v * 65535.0));
      out += static_cast<char>((s >> 8) & 0xff);
      out += static_cast<char>(s & 0xff);
    }
  }
  return out;
}

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("SHA-256 digest failed");
  std::string hex;
  for (unsigned int i = 0; i < len; ++i) hex += fmt::format("{:02x}", digest[i]);
  return hex;
}

OutputSink::OutputSink(std::filesystem::path dir, std::string command, nlohmann::json config)
    : dir_(std::move(dir)), command_(std::move(command)), config_(std::move(config)) {
  std::error_code ec;
  std::filesystem::create_directories(dir_, ec);
  if (ec) throw std::runtime_error("cannot create output directory " + dir_.string() + ": " + ec.message());
}

std::filesystem::path OutputSink::write(const std::string& name, const std::string& contents,
                                        const std::string& format, const nlohmann::json& metadata) {
  const std::filesystem::path path = dir_ / name;
  write_file(path, contents);
  const nlohmann::json sidecar = {
      {"file", name},
      {"format", format},
      {"bytes", contents.size()},
      {"sha256", sha256_hex(contents)},
      {"command", command_},
      {"metadata", metadata},
      {"config", config_},
  };
  write_file(dir_ / (name + ".json"), sidecar.dump(2) + "\n");
  written_.push_back(path);
  return path;
}

}  // namespace twinbeam
