#pragma once

#include <bellsim/detector_model.hpp>
#include <bellsim/fock_engine.hpp>
#include <bellsim/tomography.hpp>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace bellsim::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitNumerical = 2;

/// Bad flags, values or files; maps to exit code 1.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A run that completed but produced no usable result or failed a check;
/// maps to exit code 2.
class NumericalFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// `start:stop:step` or a single value. Points are start + i * step for
/// i = 0, 1, ... while they do not exceed stop (with a 1e-9 step slack), so
/// the count never depends on accumulated rounding. Throws UsageError on a
/// malformed or empty range.
std::vector<double> parse_range(const std::string& text);

/// `auto` or a non-negative pair count.
CutoffPolicy parse_cutoff(const std::string& text);

/// `fig4a`, `fig4b`, or a JSON file
///   {"site_a": [{"theta": .., "phi": ..} x3], "site_b": [...]}.
TomographyBasis load_basis(const std::string& name);

/// printf("%.17g"), with nan/inf spelled the same on every platform.
std::string format_double(double value);

/// Runs the command line `args` (without the program name). Tables go to
/// `out` unless --out names a file; diagnostics go to `err`. Returns the
/// process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace bellsim::cli
