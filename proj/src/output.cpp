#include "kinlim/output.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "kinlim/errors.hpp"

namespace kinlim {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

CsvWriter::CsvWriter(const std::vector<std::string>& header) : width_(header.size()) {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) text_ += ',';
    text_ += header[i];
  }
  text_ += '\n';
}

void CsvWriter::row(const std::vector<double>& values) {
  if (values.size() != width_) throw std::logic_error("csv: row width mismatch");
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) text_ += ',';
    text_ += format_double(values[i]);
  }
  text_ += '\n';
}

int CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return static_cast<int>(i);
  }
  throw InputError("csv: missing column '" + name + "'");
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read file '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

CsvTable read_csv(const std::string& path) {
  std::istringstream in(read_text(path));
  CsvTable t;
  std::string line;
  auto split = [](const std::string& s) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream ls(s);
    while (std::getline(ls, cell, ',')) out.push_back(cell);
    return out;
  };
  if (!std::getline(in, line)) throw InputError("csv: '" + path + "' is empty");
  t.header = split(line);
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto cells = split(line);
    if (cells.size() != t.header.size()) {
      throw InputError("csv: '" + path + "' line " + std::to_string(lineno) + " has the wrong number of fields");
    }
    std::vector<double> row;
    for (const auto& c : cells) {
      double v = 0.0;
      const auto res = std::from_chars(c.data(), c.data() + c.size(), v);
      if (res.ec != std::errc() || res.ptr != c.data() + c.size()) {
        throw InputError("csv: '" + path + "' line " + std::to_string(lineno) + ": bad number '" + c + "'");
      }
      row.push_back(v);
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << content;
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

std::string kernel_csv(const KernelCoeffs1D& c) {
  CsvWriter w({"d", "dprime", "value"});
  for (int d = 0; d <= c.extent(); ++d)
    for (int dp = 0; dp <= c.extent(); ++dp) w.row({double(d), double(dp), c.quadrant(d, dp)});
  return w.str();
}

nlohmann::json kernel_json(const KernelCoeffs1D& c) {
  const int E = c.extent();
  nlohmann::json j;
  j["N"] = c.N();
  std::vector<int> offsets;
  for (int d = -E; d <= E; ++d) offsets.push_back(d);
  j["offsets"] = offsets;
  nlohmann::json mat = nlohmann::json::array();
  for (int d = -E; d <= E; ++d) {
    std::vector<double> row;
    for (int dp = -E; dp <= E; ++dp) row.push_back(c(d, dp));
    mat.push_back(row);
  }
  j["matrix"] = mat;
  return j;
}

}  // namespace kinlim
