#ifndef STRETCHLAB_CSV_HPP
#define STRETCHLAB_CSV_HPP

#include <fstream>
#include <string>
#include <vector>

namespace stretchlab {

/// Deterministic number formatting shared by every CSV emitter, so byte-exact
/// replay only depends on the values computed.
std::string csv_num(double x);

class CsvWriter {
  public:
    /// Opens (truncates) the file and writes the header row.
    CsvWriter(const std::string& path, const std::vector<std::string>& columns);

    void row(const std::vector<std::string>& cells);

    const std::string& path() const { return path_; }

  private:
    std::string path_;
    std::ofstream out_;
    std::size_t n_cols_;
};

}  // namespace stretchlab

#endif
