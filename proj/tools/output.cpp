#include "output.hpp"

#include <openssl/evp.h>

#include <array>
#include <charconv>
#include <chrono>
#include <ctime>
#include <fstream>
#include <stdexcept>

#include "json.hpp"
#include "spinthermal/prng.hpp"
#include "spinthermal/version.hpp"

namespace spinthermal::cli {

std::string format_double(double value) {
  std::array<char, 32> buffer{};
  const auto [end, ec] =
      std::to_chars(buffer.data(), buffer.data() + buffer.size(), value);
  if (ec != std::errc{}) throw std::runtime_error("number formatting failed");
  return std::string(buffer.data(), end);
}

std::string format_bool(bool value) { return value ? "true" : "false"; }

CsvFile::CsvFile(std::filesystem::path path, const ConfigEcho& echo,
                 std::vector<std::string> columns)
    : path_(std::move(path)), column_count_(columns.size()) {
  contents_ += std::string("# tool = ") + kToolName + " " + kVersion + "\n";
  for (const auto& [key, value] : echo) {
    contents_ += "# " + key + " = " + value + "\n";
  }
  for (std::size_t i = 0; i < columns.size(); ++i) {
    contents_ += columns[i];
    contents_ += i + 1 < columns.size() ? ',' : '\n';
  }
}

void CsvFile::add_row(const std::vector<std::string>& cells) {
  if (cells.size() != column_count_) {
    throw std::logic_error("row width does not match the header");
  }
  for (std::size_t i = 0; i < cells.size(); ++i) {
    contents_ += cells[i];
    contents_ += i + 1 < cells.size() ? ',' : '\n';
  }
}

void CsvFile::write() const {
  std::ofstream out(path_, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw std::runtime_error("cannot open " + path_.string() + " for writing");
  }
  out << contents_;
  if (!out) throw std::runtime_error("write failed for " + path_.string());
}

std::string sha256_hex(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());

  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  if (!ctx || EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr) != 1) {
    EVP_MD_CTX_free(ctx);
    throw std::runtime_error("digest initialization failed");
  }
  std::array<char, 1 << 16> buffer;
  while (in) {
    in.read(buffer.data(), buffer.size());
    if (in.gcount() > 0) {
      EVP_DigestUpdate(ctx, buffer.data(),
                       static_cast<std::size_t>(in.gcount()));
    }
  }
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int length = 0;
  EVP_DigestFinal_ex(ctx, digest.data(), &length);
  EVP_MD_CTX_free(ctx);

  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * length);
  for (unsigned int i = 0; i < length; ++i) {
    out.push_back(hex[digest[i] >> 4]);
    out.push_back(hex[digest[i] & 0xf]);
  }
  return out;
}

void write_manifest(const std::filesystem::path& directory,
                    const std::string& command, const ConfigEcho& echo,
                    int threads,
                    const std::vector<std::filesystem::path>& outputs) {
  nlohmann::ordered_json manifest;
  manifest["tool"] = kToolName;
  manifest["version"] = kVersion;
  manifest["command"] = command;
  manifest["prng"] = kPrngVersion;
  const std::time_t now =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm utc{};
  gmtime_r(&now, &utc);
  std::array<char, 32> stamp{};
  std::strftime(stamp.data(), stamp.size(), "%Y-%m-%dT%H:%M:%SZ", &utc);
  manifest["timestamp_utc"] = stamp.data();
  manifest["threads"] = threads;
  nlohmann::ordered_json config;
  for (const auto& [key, value] : echo) config[key] = value;
  manifest["config"] = config;

  nlohmann::ordered_json files = nlohmann::ordered_json::array();
  for (const auto& path : outputs) {
    files.push_back({{"file", path.filename().string()},
                     {"sha256", sha256_hex(path)},
                     {"bytes", std::filesystem::file_size(path)}});
  }
  manifest["outputs"] = files;

  const auto path = directory / (command + "_manifest.json");
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << manifest.dump(2) << "\n";
}

}  // namespace spinthermal::cli
