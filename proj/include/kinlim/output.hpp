#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "kinlim/kernel1d.hpp"

namespace kinlim {

// Shortest decimal that reads back to the same double.
std::string format_double(double v);

class CsvWriter {
 public:
  explicit CsvWriter(const std::vector<std::string>& header);
  void row(const std::vector<double>& values);
  const std::string& str() const { return text_; }

 private:
  std::size_t width_;
  std::string text_;
};

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
  int column(const std::string& name) const;  // throws InputError if absent
};
CsvTable read_csv(const std::string& path);

void write_file(const std::string& path, const std::string& content);
std::string read_text(const std::string& path);

// Rows d,dprime,value over the nonnegative quadrant 0..2N.
std::string kernel_csv(const KernelCoeffs1D& c);
// {"N", "offsets": [-2N..2N], "matrix": dense (4N+1)^2}
nlohmann::json kernel_json(const KernelCoeffs1D& c);

}  // namespace kinlim
