#include <bellsim/chsh.hpp>
#include <bellsim/errors.hpp>
#include <bellsim/parallel.hpp>
#include <optional>
#include <ostream>
#include <string>

#include "commands.hpp"

namespace bellsim::cli {

namespace {

struct GridPoint {
  double eta;
  double noise;
  double tanh_chi;
};

std::vector<GridPoint> grid_of(const RunConfig& config) {
  std::vector<GridPoint> points;
  for (double eta : config.etas)
    for (double noise : config.noises)
      for (double t : config.tanh_chi) points.push_back({eta, noise, t});
  return points;
}

constexpr const char* kBellPlot = R"(
groups = {}
for row in rows:
    key = (row["model"], row["eta"], row["noise"])
    groups.setdefault(key, []).append(row)
fig, ax = plt.subplots()
for (model, eta, noise), group in groups.items():
    ok = [r for r in group if r["status"] == "ok"]
    ax.plot([float(r["tanh_chi"]) for r in ok], [float(r["bell_max"]) for r in ok],
            label=f"{model}, eta={eta}, N={noise}")
ax.axhline(2 * 2 ** 0.5, color="grey", linestyle="--", label="2 sqrt 2")
ax.axhline(2, color="grey", linestyle=":")
ax.set_xlabel("tanh chi")
ax.set_ylabel("max Bell parameter")
ax.legend()
fig.savefig(CSV.rsplit(".", 1)[0] + ".png", dpi=150)
)";

constexpr const char* kTomographyPlot = R"(
groups = {}
for row in rows:
    key = (row["basis"], row["model"], row["eta"], row["noise"])
    groups.setdefault(key, []).append(row)
fig, ax = plt.subplots()
for (basis, model, eta, noise), group in groups.items():
    ok = [r for r in group if r["status"] == "ok"]
    ax.plot([float(r["tanh_chi"]) for r in ok], [float(r["min_eigenvalue"]) for r in ok],
            label=f"{basis}, {model}, eta={eta}, N={noise}")
ax.axhline(0, color="grey", linestyle="--")
ax.set_xlabel("tanh chi")
ax.set_ylabel("minimum eigenvalue")
ax.legend()
fig.savefig(CSV.rsplit(".", 1)[0] + ".png", dpi=150)
)";

std::vector<std::string> bell_row(const RunConfig& config, const GridPoint& p,
                                  const BellResult* result) {
  std::vector<std::string> row = {std::string(to_string(config.model)), format_double(p.eta),
                                  format_double(p.noise), format_double(p.tanh_chi)};
  if (result == nullptr) {
    row.insert(row.end(), 9, "");
    row.emplace_back("no-coincidence");
    return row;
  }
  row.push_back(format_double(result->bell_value));
  const auto& s = result->settings;
  for (double v : {s.theta_a1, s.theta_a2, s.theta_b1, s.theta_b2}) {
    row.push_back(format_double(v));
  }
  for (double e : result->correlations) row.push_back(format_double(e));
  row.emplace_back("ok");
  return row;
}

const std::vector<std::string> kBellHeader = {
    "model", "eta", "noise", "tanh_chi", "bell_max", "theta_a1", "theta_a2", "theta_b1",
    "theta_b2", "E11", "E12", "E22", "E21", "status"};

int bell_grid(const RunConfig& config, std::ostream& out, std::ostream& err) {
  const auto points = grid_of(config);
  std::vector<std::optional<BellResult>> results(points.size());
  parallel_for(points.size(), config.workers, [&](std::size_t i) {
    const auto& p = points[i];
    try {
      results[i] = maximize_bell(PdcSource(p.tanh_chi, config.cutoff), {p.eta, p.noise},
                                 config.model);
    } catch (const NoCoincidenceError&) {
      results[i].reset();
    }
  });
  Table table{kBellHeader, {}};
  std::size_t defined = 0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (results[i]) ++defined;
    table.rows.push_back(bell_row(config, points[i], results[i] ? &*results[i] : nullptr));
  }
  emit_table(config, table, kBellPlot, out, err);
  if (defined == 0) throw NumericalFailure("no coincidences at any grid point");
  return kExitOk;
}

}  // namespace

int cmd_sweep_bell(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return bell_grid(config, out, err);
}

int cmd_optimize_bell(const RunConfig& config, std::ostream& out, std::ostream& err) {
  // One tanh_chi value; several eta/noise values still give one row each.
  return bell_grid(config, out, err);
}

int cmd_tomography_scan(const RunConfig& config, std::ostream& out, std::ostream& err) {
  const auto points = grid_of(config);
  struct Outcome {
    bool ok = false;
    TwoQubitDensityMatrix rho;
  };
  std::vector<Outcome> results(points.size());
  parallel_for(points.size(), config.workers, [&](std::size_t i) {
    const auto& p = points[i];
    try {
      const auto e = measure_correlation_matrix(PdcSource(p.tanh_chi, config.cutoff),
                                                {p.eta, p.noise}, config.model, config.basis);
      results[i] = {true, reconstruct_density(e, config.basis)};
    } catch (const NoCoincidenceError&) {
      results[i] = {};
    }
  });
  Table table{{"basis", "model", "eta", "noise", "tanh_chi", "min_eigenvalue", "eigenvalue_1",
               "eigenvalue_2", "eigenvalue_3", "eigenvalue_4", "trace", "status"},
              {}};
  std::size_t defined = 0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto& p = points[i];
    std::vector<std::string> row = {config.basis_name, std::string(to_string(config.model)),
                                    format_double(p.eta), format_double(p.noise),
                                    format_double(p.tanh_chi)};
    if (results[i].ok) {
      ++defined;
      const auto& rho = results[i].rho;
      row.push_back(format_double(rho.min_eigenvalue));
      for (double v : rho.eigenvalues) row.push_back(format_double(v));
      row.push_back(format_double(rho.trace().real()));
      row.emplace_back("ok");
    } else {
      row.insert(row.end(), 6, "");
      row.emplace_back("no-coincidence");
    }
    table.rows.push_back(std::move(row));
  }
  emit_table(config, table, kTomographyPlot, out, err);
  if (defined == 0) throw NumericalFailure("no coincidences at any grid point");
  return kExitOk;
}

}  // namespace bellsim::cli
