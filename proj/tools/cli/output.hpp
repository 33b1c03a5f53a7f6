#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

namespace flarevt::cli {

/// Row-oriented CSV writer; every numeric cell uses shortest round-trip text.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

  CsvTable& row();
  CsvTable& cell(double value);
  CsvTable& cell(std::size_t value);
  CsvTable& cell(const std::string& value);
  CsvTable& cell(bool value);

  void write(const std::filesystem::path& path) const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

void write_text(const std::filesystem::path& path, const std::string& text);
void write_json(const std::filesystem::path& path, const nlohmann::ordered_json& j);
std::string read_text(const std::filesystem::path& path);

/// JSON number, or null for non-finite values.
nlohmann::ordered_json number(double value);

}  // namespace flarevt::cli
