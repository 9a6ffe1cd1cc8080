#include <CLI11.hpp>
#include <bellsim/errors.hpp>
#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "commands.hpp"

namespace bellsim::cli {

namespace {

double parse_number(const std::string& text, const std::string& what) {
  const char* begin = text.c_str();
  char* end = nullptr;
  errno = 0;
  const double value = std::strtod(begin, &end);
  if (end == begin || *end != '\0' || errno == ERANGE || !std::isfinite(value)) {
    throw UsageError("invalid " + what + ": '" + text + "'");
  }
  return value;
}

// Shortest round-trip spelling, so the config line reads as typed.
std::string join(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) out += ',';
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, values[i]);
    out.append(buf, res.ptr);
  }
  return out;
}

SiteSettings parse_site(const nlohmann::json& site, const std::string& name) {
  if (!site.is_array() || site.size() != 3) {
    throw UsageError("basis file: '" + name + "' must list exactly three settings");
  }
  SiteSettings out;
  for (std::size_t i = 0; i < 3; ++i) {
    const auto& entry = site[i];
    if (!entry.is_object() || !entry.contains("theta") || !entry["theta"].is_number()) {
      throw UsageError("basis file: " + name + "[" + std::to_string(i) + "] needs a numeric theta");
    }
    out[i].theta = entry["theta"].get<double>();
    out[i].phi = entry.value("phi", 0.0);
  }
  return out;
}

std::filesystem::path plot_path_for(const std::filesystem::path& csv) {
  auto p = csv;
  p.replace_extension(".plot.py");
  return p;
}

constexpr const char* kPlotPreamble = R"(#!/usr/bin/env python3
import csv
import os
import sys

import matplotlib.pyplot as plt

HERE = os.path.dirname(os.path.abspath(__file__))
CSV = sys.argv[1] if len(sys.argv) > 1 else os.path.join(HERE, {csv!r})


def load(path):
    with open(path, newline="") as handle:
        rows = csv.DictReader(line for line in handle if not line.startswith("#"))
        return list(rows)


rows = load(CSV)
)";

std::string python_repr(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\\' || c == '\'') out += '\\';
    out += c;
  }
  return out + "'";
}

}  // namespace

std::vector<double> parse_range(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string piece;
  while (std::getline(ss, piece, ':')) parts.push_back(piece);
  if (!text.empty() && text.back() == ':') parts.emplace_back();
  if (parts.size() == 1) return {parse_number(parts[0], "tanh-chi value")};
  if (parts.size() != 3) {
    throw UsageError("tanh-chi range must be start:stop:step, got '" + text + "'");
  }
  const double start = parse_number(parts[0], "range start");
  const double stop = parse_number(parts[1], "range stop");
  const double step = parse_number(parts[2], "range step");
  if (!(step > 0.0)) throw UsageError("range step must be positive");
  if (stop < start) throw UsageError("empty range '" + text + "'");
  const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
  std::vector<double> values(count);
  for (std::size_t i = 0; i < count; ++i) values[i] = start + static_cast<double>(i) * step;
  return values;
}

CutoffPolicy parse_cutoff(const std::string& text) {
  if (text == "auto") return AdaptiveCutoff{};
  char* end = nullptr;
  const long value = std::strtol(text.c_str(), &end, 10);
  if (text.empty() || *end != '\0' || value < 0 || value > kMaxPairLimit) {
    throw UsageError("cutoff must be 'auto' or an integer in [0, " +
                     std::to_string(kMaxPairLimit) + "], got '" + text + "'");
  }
  return FixedCutoff{static_cast<int>(value)};
}

TomographyBasis load_basis(const std::string& name) {
  if (name == "fig4a") return TomographyBasis::pauli();
  if (name == "fig4b") return TomographyBasis::skewed();
  std::ifstream in(name);
  if (!in) throw UsageError("basis must be fig4a, fig4b or a readable JSON file: '" + name + "'");
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw UsageError("basis file '" + name + "': " + e.what());
  }
  if (!doc.is_object()) throw UsageError("basis file must hold a JSON object");
  TomographyBasis basis{parse_site(doc.value("site_a", nlohmann::json()), "site_a"),
                        parse_site(doc.value("site_b", nlohmann::json()), "site_b")};
  try {
    metric_tensor(basis.site_a);
    metric_tensor(basis.site_b);
  } catch (const DegenerateBasisError& e) {
    throw UsageError(std::string("basis file: ") + e.what());
  }
  return basis;
}

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

std::string RunConfig::describe() const {
  std::string s = "command=" + command;
  s += " model=" + std::string(to_string(model));
  s += " eta=" + join(etas);
  s += " noise=" + join(noises);
  s += " tanh_chi=" + tanh_chi_text;
  s += " cutoff=" + cutoff_text;
  if (command == "tomography-scan") s += " basis=" + basis_name;
  s += " workers=" + std::to_string(workers);
  return s;
}

void write_csv(std::ostream& os, const RunConfig& config, const Table& table) {
  os << "# config: " << config.describe() << '\n';
  for (std::size_t i = 0; i < table.header.size(); ++i) {
    os << (i ? "," : "") << table.header[i];
  }
  os << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
    os << '\n';
  }
}

void emit_table(const RunConfig& config, const Table& table, const std::string& plot_body,
                std::ostream& out, std::ostream& err) {
  if (config.out_path.empty()) {
    write_csv(out, config, table);
    return;
  }
  const std::filesystem::path csv_path(config.out_path);
  if (csv_path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(csv_path.parent_path(), ec);
  }
  {
    std::ofstream file(csv_path, std::ios::binary);
    if (!file) throw UsageError("cannot write '" + config.out_path + "'");
    write_csv(file, config, table);
  }
  const auto plot_path = plot_path_for(csv_path);
  std::ofstream plot(plot_path, std::ios::binary);
  if (!plot) throw UsageError("cannot write '" + plot_path.string() + "'");
  std::string preamble = kPlotPreamble;
  const std::string marker = "{csv!r}";
  preamble.replace(preamble.find(marker), marker.size(),
                   python_repr(csv_path.filename().string()));
  plot << preamble << plot_body;
  err << "wrote " << csv_path.string() << " and " << plot_path.string() << '\n';
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Fake Bell violations and tomography artefacts from on-off detection of PDC light",
               "bellsim"};
  app.set_config("--config", "", "TOML or INI file with option defaults; flags override it");
  app.require_subcommand(1);

  std::string model_name = "onoff-naive";
  std::vector<double> etas;
  std::vector<double> noises;
  std::string tanh_chi;
  std::string cutoff = "auto";
  std::string basis = "fig4a";
  std::string out_path;
  unsigned workers = 1;

  app.add_option("--model", model_name, "onoff-naive | onoff-squash | pnr")
      ->capture_default_str();
  app.add_option("--eta", etas, "Detection efficiencies (list)")->delimiter(',');
  app.add_option("--noise", noises, "Mean noise counts per detector window (list)")
      ->delimiter(',');
  app.add_option("--tanh-chi", tanh_chi, "start:stop:step, or one value");
  app.add_option("--cutoff", cutoff, "auto | N (pair blocks)")->capture_default_str();
  app.add_option("--basis", basis, "fig4a | fig4b | JSON file")->capture_default_str();
  app.add_option("--out", out_path, "CSV path; a .plot.py script is written next to it");
  app.add_option("--workers", workers, "Worker threads")->capture_default_str();

  auto* sweep = app.add_subcommand("sweep-bell", "Maximal Bell parameter vs tanh chi");
  auto* tomo = app.add_subcommand("tomography-scan", "Minimum eigenvalue of the reconstructed state");
  auto* optimize = app.add_subcommand("optimize-bell", "Maximal Bell parameter at one point");
  auto* validate = app.add_subcommand("validate", "Closed forms against the Fock-space oracle");
  for (auto* sub : {sweep, tomo, optimize, validate}) sub->fallthrough();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "bellsim: " << e.what() << '\n';
    return kExitUsage;
  }

  RunConfig config;
  try {
    const auto model = parse_postprocessing(model_name);
    if (!model) throw UsageError("unknown model '" + model_name + "'");
    config.model = *model;
    config.cutoff_text = cutoff;
    config.cutoff = parse_cutoff(cutoff);
    config.out_path = out_path;
    if (workers < 1) throw UsageError("--workers must be at least 1");
    config.workers = workers;

    if (sweep->parsed()) {
      config.command = "sweep-bell";
      if (etas.empty()) etas = {0.9, 0.6, 0.4};
      if (tanh_chi.empty()) tanh_chi = "0:0.7:0.01";
    } else if (tomo->parsed()) {
      config.command = "tomography-scan";
      if (etas.empty()) etas = {0.6};
      if (tanh_chi.empty()) tanh_chi = "0.01:0.7:0.01";
      config.basis_name = basis;
      config.basis = load_basis(basis);
    } else if (optimize->parsed()) {
      config.command = "optimize-bell";
      if (etas.empty()) etas = {0.9};
      if (tanh_chi.empty()) tanh_chi = "0.5";
    } else {
      config.command = "validate";
      if (etas.empty()) etas = {0.4, 0.6, 0.9, 1.0};
      if (noises.empty()) noises = {0.0, 1e-6, 1e-3};
      if (tanh_chi.empty()) tanh_chi = "0.05:0.7:0.05";
    }
    if (noises.empty()) noises = {1e-6};
    config.etas = etas;
    config.noises = noises;
    config.tanh_chi_text = tanh_chi;
    config.tanh_chi = parse_range(tanh_chi);
    for (double eta : etas)
      for (double noise : noises) DetectorParams{eta, noise}.validate();
    for (double t : config.tanh_chi) {
      if (!(t >= 0.0 && t < 1.0)) throw UsageError("tanh-chi values must lie in [0, 1)");
    }
    if (config.command == "optimize-bell" && config.tanh_chi.size() != 1) {
      throw UsageError("optimize-bell takes a single --tanh-chi value");
    }
  } catch (const UsageError& e) {
    err << "bellsim: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DomainError& e) {
    err << "bellsim: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (config.command == "sweep-bell") return cmd_sweep_bell(config, out, err);
    if (config.command == "tomography-scan") return cmd_tomography_scan(config, out, err);
    if (config.command == "optimize-bell") return cmd_optimize_bell(config, out, err);
    return cmd_validate(config, out, err);
  } catch (const UsageError& e) {
    err << "bellsim: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DomainError& e) {
    err << "bellsim: " << e.what() << '\n';
    return kExitUsage;
  } catch (const NumericalFailure& e) {
    err << "bellsim: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::runtime_error& e) {
    err << "bellsim: numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  }
}

}  // namespace bellsim::cli
