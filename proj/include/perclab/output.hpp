#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace perclab {

/// Writes `contents` to `<path>.tmp` and renames it over `path`, so a reader
/// never observes a partial file.
void write_atomically(const std::filesystem::path& path, std::string_view contents);

/// Shortest decimal that round-trips the double ("%.17g" trimmed), used for
/// every real in CSV/JSON output so reruns are byte-identical.
std::string format_real(double value);

/// Minimal CSV table: a header row and rows of preformatted cells.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

  void add_row(std::vector<std::string> cells);
  [[nodiscard]] std::string str() const;
  [[nodiscard]] std::size_t rows() const noexcept { return rows_.size(); }

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

}  // namespace perclab
