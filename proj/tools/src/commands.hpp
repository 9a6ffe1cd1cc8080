#pragma once

#include <bellsim/cli/app.hpp>
#include <iosfwd>
#include <string>
#include <vector>

namespace bellsim::cli {

struct RunConfig {
  std::string command;
  Postprocessing model = Postprocessing::NaiveOnOff;
  std::vector<double> etas;
  std::vector<double> noises;
  std::string tanh_chi_text;
  std::vector<double> tanh_chi;
  std::string cutoff_text = "auto";
  CutoffPolicy cutoff = AdaptiveCutoff{};
  std::string basis_name = "fig4a";
  TomographyBasis basis = TomographyBasis::pauli();
  std::string out_path;
  unsigned workers = 1;

  /// One line of key=value pairs, written as the CSV comment.
  std::string describe() const;
};

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

/// Header comment, column row and data rows, '\n' line endings.
void write_csv(std::ostream& os, const RunConfig& config, const Table& table);

/// Writes the table to config.out_path (plus a matplotlib script next to it)
/// or to `out` when no path is set. `plot_body` is the script text after the
/// shared CSV loader.
void emit_table(const RunConfig& config, const Table& table, const std::string& plot_body,
                std::ostream& out, std::ostream& err);

int cmd_sweep_bell(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_tomography_scan(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_optimize_bell(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_validate(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace bellsim::cli
