#pragma once

// Scenario runners behind the `twotime` command-line tool. Each command
// writes its tables after all computation is done and returns the process
// exit status: 0 when every check passes, 1 when a check fails. I/O and
// usage problems are reported by throwing.

#include <cstdint>
#include <filesystem>
#include <initializer_list>
#include <fstream>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace twotime::cli {

enum class TableFormat { csv, tsv };

TableFormat parse_format(std::string_view name);

/// $TWOTIME_OUT_DIR when set, otherwise the working directory.
std::filesystem::path default_out_dir();

struct RunConfig {
  static constexpr std::uint64_t kDefaultSeed = 20240001;
  std::uint64_t seed = kDefaultSeed;
  std::size_t samples = 10000;
  std::filesystem::path out_dir = default_out_dir();
  TableFormat format = TableFormat::csv;
};

/// Delimited text table; numbers are written with 12 significant digits.
class TableWriter {
 public:
  struct Cell {
    Cell(double v) : number(v) {}
    Cell(bool v) : text(v ? "true" : "false"), is_text(true) {}
    double number = 0;
    std::string text;
    bool is_text = false;
  };

  TableWriter(const std::filesystem::path& path, TableFormat format,
              const std::vector<std::string>& header);

  void row(std::initializer_list<Cell> cells);
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
  std::ofstream out_;
  char sep_;
};

/// File name `stem` with the extension matching the format.
std::filesystem::path table_path(const RunConfig& cfg, std::string_view stem);

/// Default radii of the torque-irreality scan.
std::vector<double> default_radii();

int cmd_figure1(const RunConfig& cfg, const std::vector<double>& r_values, std::ostream& log);
int cmd_lambda(const RunConfig& cfg, std::size_t theta_steps, std::ostream& log);
int cmd_tpm_gap(const RunConfig& cfg, int dim, std::size_t trials, std::ostream& log);
int cmd_report(const RunConfig& cfg, std::string_view name, std::ostream& log);

}  // namespace twotime::cli
