#include "output.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "flarevt/error.hpp"
#include "flarevt/serialize.hpp"

namespace flarevt::cli {

CsvTable& CsvTable::row() {
  rows_.emplace_back();
  return *this;
}

CsvTable& CsvTable::cell(double value) {
  rows_.back().push_back(std::isfinite(value) ? format_double(value) : std::string());
  return *this;
}

CsvTable& CsvTable::cell(std::size_t value) {
  rows_.back().push_back(std::to_string(value));
  return *this;
}

CsvTable& CsvTable::cell(const std::string& value) {
  rows_.back().push_back(value);
  return *this;
}

CsvTable& CsvTable::cell(bool value) {
  rows_.back().push_back(value ? "true" : "false");
  return *this;
}

void CsvTable::write(const std::filesystem::path& path) const {
  std::ostringstream out;
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << cells[i];
    out << '\n';
  };
  line(header_);
  for (const auto& r : rows_) line(r);
  write_text(path, out.str());
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  out << text;
  if (!out) throw DataError("error writing " + path.string());
}

void write_json(const std::filesystem::path& path, const nlohmann::ordered_json& j) {
  write_text(path, j.dump(2) + "\n");
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

nlohmann::ordered_json number(double value) {
  return std::isfinite(value) ? nlohmann::ordered_json(value) : nlohmann::ordered_json(nullptr);
}

}  // namespace flarevt::cli
