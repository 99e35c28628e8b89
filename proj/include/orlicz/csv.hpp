#pragma once

#include <string>
#include <vector>

namespace orlicz {

// Deterministic CSV assembly: shortest round-trip number formatting and
// RFC-4180 quoting, so identical data always serializes to identical bytes.
std::string csv_field(double v);
std::string csv_field(const std::string& s);

class CsvWriter {
  public:
    explicit CsvWriter(std::vector<std::string> header);
    void add_row(std::vector<std::string> fields);
    std::string str() const;
    size_t rows() const { return rows_.size(); }

  private:
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

// Write-to-temp-then-rename so partial output never lands under the final
// name.  Creates parent directories as needed.
void atomic_write(const std::string& path, const std::string& content);

// Two-column t, a(t) loader for tabulated densities (header optional).
std::pair<std::vector<double>, std::vector<double>> load_density_csv(const std::string& path);

} // namespace orlicz
