#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace spinthermal::cli {

/// Shortest decimal representation that round-trips to the same double.
std::string format_double(double value);

std::string format_bool(bool value);

/// Ordered key/value echo of a resolved configuration. Keys appear in CSV
/// comment headers and in the manifest; execution details that must not
/// influence the output bytes (worker count, timestamps) stay out of it.
using ConfigEcho = std::vector<std::pair<std::string, std::string>>;

/// CSV file with a commented config block. Rows are preformatted strings.
class CsvFile {
 public:
  CsvFile(std::filesystem::path path, const ConfigEcho& echo,
          std::vector<std::string> columns);

  void add_row(const std::vector<std::string>& cells);
  void write() const;

  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
  std::string contents_;
  std::size_t column_count_;
};

std::string sha256_hex(const std::filesystem::path& path);

/// JSON sidecar tying the written files to the resolved configuration.
void write_manifest(const std::filesystem::path& directory,
                    const std::string& command, const ConfigEcho& echo,
                    int threads,
                    const std::vector<std::filesystem::path>& outputs);

}  // namespace spinthermal::cli
