#include <bellsim/cli/app.hpp>
#include <bellsim/errors.hpp>
#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace bellsim::cli {
namespace {

namespace fs = std::filesystem;

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run_cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> lines;
  std::stringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) lines.push_back(line);
  return lines;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

class TempDir {
 public:
  TempDir() {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    path_ = fs::temp_directory_path() /
            (std::string("bellsim_cli_") + info->test_suite_name() + "_" + info->name());
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

TEST(ParseRange, IndexBasedPoints) {
  const auto values = parse_range("0.05:0.7:0.05");
  ASSERT_EQ(values.size(), 14u);
  EXPECT_DOUBLE_EQ(values.front(), 0.05);
  EXPECT_NEAR(values.back(), 0.7, 1e-15);
  EXPECT_DOUBLE_EQ(values[3], 0.05 + 3 * 0.05);
  EXPECT_EQ(parse_range("0:0.7:0.01").size(), 71u);
  EXPECT_EQ(parse_range("0.5"), std::vector<double>{0.5});
  EXPECT_EQ(parse_range("0.2:0.2:0.1").size(), 1u);
}

TEST(ParseRange, RejectsMalformedOrEmpty) {
  for (const char* bad : {"", "0.5:0.1:0.1", "0:1:0", "0:1:-0.1", "a:b:c", "0:1", "0:1:0.1:2",
                          "0.1x", "nan"}) {
    EXPECT_THROW(parse_range(bad), UsageError) << bad;
  }
}

TEST(ParseCutoff, AutoOrCount) {
  EXPECT_TRUE(std::holds_alternative<AdaptiveCutoff>(parse_cutoff("auto")));
  EXPECT_EQ(std::get<FixedCutoff>(parse_cutoff("12")).max_pairs, 12);
  for (const char* bad : {"", "-1", "3.5", "many", "100000"}) {
    EXPECT_THROW(parse_cutoff(bad), UsageError) << bad;
  }
}

TEST(FormatDouble, SeventeenSignificantDigits) {
  EXPECT_EQ(format_double(0.1), "0.10000000000000001");
  EXPECT_EQ(format_double(2.0), "2");
  EXPECT_EQ(format_double(NAN), "nan");
  EXPECT_EQ(format_double(-INFINITY), "-inf");
}

TEST(LoadBasis, PresetsAndFiles) {
  EXPECT_EQ(load_basis("fig4a").site_a[1].phi, TomographyBasis::pauli().site_a[1].phi);
  EXPECT_EQ(load_basis("fig4b").site_b[0].theta, TomographyBasis::skewed().site_b[0].theta);

  TempDir dir;
  const auto good = dir.path() / "basis.json";
  std::ofstream(good) << R"({"site_a": [{"theta": 0.7854, "phi": 0}, {"theta": 0.7854, "phi": 1.5708},
                                       {"theta": 0}],
                            "site_b": [{"theta": 0.3}, {"theta": 0.9, "phi": 1.0}, {"theta": 1.3, "phi": -0.5}]})";
  const auto basis = load_basis(good.string());
  EXPECT_DOUBLE_EQ(basis.site_b[1].phi, 1.0);
  EXPECT_DOUBLE_EQ(basis.site_a[2].phi, 0.0);

  const auto degenerate = dir.path() / "degenerate.json";
  std::ofstream(degenerate) << R"({"site_a": [{"theta": 0.3}, {"theta": 0.3}, {"theta": 0.0}],
                                  "site_b": [{"theta": 0.3}, {"theta": 0.9}, {"theta": 0.5, "phi": 1}]})";
  EXPECT_THROW(load_basis(degenerate.string()), UsageError);

  const auto short_site = dir.path() / "short.json";
  std::ofstream(short_site) << R"({"site_a": [{"theta": 0.3}], "site_b": []})";
  EXPECT_THROW(load_basis(short_site.string()), UsageError);

  const auto garbage = dir.path() / "garbage.json";
  std::ofstream(garbage) << "{not json";
  EXPECT_THROW(load_basis(garbage.string()), UsageError);
  EXPECT_THROW(load_basis((dir.path() / "missing.json").string()), UsageError);
}

TEST(SweepBell, CsvStructure) {
  const auto r = run_cli({"sweep-bell", "--model", "onoff-naive", "--eta", "1", "--noise", "0",
                          "--tanh-chi", "0.3:0.5:0.1"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto lines = lines_of(r.out);
  ASSERT_EQ(lines.size(), 5u);
  EXPECT_EQ(lines[0].rfind("# config: command=sweep-bell model=onoff-naive eta=1 noise=0 "
                           "tanh_chi=0.3:0.5:0.1",
                           0),
            0u)
      << lines[0];
  const auto header = split(lines[1]);
  EXPECT_EQ(header.front(), "model");
  EXPECT_EQ(header[4], "bell_max");
  EXPECT_EQ(header.back(), "status");
  for (std::size_t i = 2; i < lines.size(); ++i) {
    const auto cells = split(lines[i]);
    ASSERT_EQ(cells.size(), header.size());
    EXPECT_EQ(cells.back(), "ok");
    EXPECT_GT(std::stod(cells[4]), 2.8284271247461903);
  }
  EXPECT_EQ(split(lines[4])[3], "0.5");
}

TEST(SweepBell, DeterministicAcrossRunsAndWorkers) {
  const std::vector<std::string> base = {"sweep-bell", "--model", "pnr",      "--eta",
                                         "0.9,0.6",    "--noise", "1e-6",     "--tanh-chi",
                                         "0.1:0.4:0.1"};
  auto with_workers = [&](const char* w) {
    auto args = base;
    args.insert(args.end(), {"--workers", w});
    return run_cli(args);
  };
  const auto first = with_workers("1");
  const auto again = with_workers("1");
  const auto parallel = with_workers("3");
  ASSERT_EQ(first.code, 0);
  EXPECT_EQ(first.out, again.out);
  auto body = [](const std::string& text) { return text.substr(text.find('\n') + 1); };
  EXPECT_EQ(body(first.out), body(parallel.out));
  EXPECT_EQ(lines_of(first.out).size(), 2u + 8u);
}

TEST(SweepBell, NoCoincidenceAnywhereIsNumericalFailure) {
  const auto r = run_cli({"sweep-bell", "--tanh-chi", "0", "--noise", "0", "--eta", "1"});
  EXPECT_EQ(r.code, kExitNumerical);
  EXPECT_NE(r.out.find("no-coincidence"), std::string::npos);
}

TEST(Cli, UsageErrors) {
  const std::vector<std::vector<std::string>> cases = {
      {},
      {"frobnicate"},
      {"sweep-bell", "--model", "onoff"},
      {"sweep-bell", "--tanh-chi", "0.5:0.1:0.1"},
      {"sweep-bell", "--tanh-chi", "0.1:0.5:0"},
      {"sweep-bell", "--eta", "1.5"},
      {"sweep-bell", "--noise", "-1"},
      {"sweep-bell", "--tanh-chi", "1.0"},
      {"sweep-bell", "--cutoff", "lots"},
      {"sweep-bell", "--bogus"},
      {"sweep-bell", "--workers", "0"},
      {"tomography-scan", "--basis", "fig4c"},
      {"optimize-bell", "--tanh-chi", "0.1:0.3:0.1"},
      {"validate", "--tanh-chi", "0.7:0.05:0.05"},
  };
  for (const auto& args : cases) {
    const auto r = run_cli(args);
    std::string joined;
    for (const auto& a : args) joined += a + " ";
    EXPECT_EQ(r.code, kExitUsage) << joined;
    EXPECT_FALSE(r.err.empty()) << joined;
  }
}

TEST(Cli, HelpExitsCleanly) {
  const auto r = run_cli({"--help"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("sweep-bell"), std::string::npos);
}

TEST(Cli, ConfigFileWithFlagOverride) {
  TempDir dir;
  const auto config = dir.path() / "run.toml";
  std::ofstream(config) << "model = \"pnr\"\neta = [0.7]\nnoise = [0.001]\ntanh-chi = \"0.2\"\n";
  const auto from_file = run_cli({"optimize-bell", "--config", config.string()});
  ASSERT_EQ(from_file.code, 0) << from_file.err;
  EXPECT_NE(from_file.out.find("model=pnr eta=0.7 noise=0.001 tanh_chi=0.2"), std::string::npos)
      << from_file.out;
  const auto overridden =
      run_cli({"optimize-bell", "--config", config.string(), "--model", "onoff-squash"});
  ASSERT_EQ(overridden.code, 0) << overridden.err;
  EXPECT_NE(overridden.out.find("model=onoff-squash eta=0.7"), std::string::npos)
      << overridden.out;
}

TEST(Cli, OutWritesCsvAndPlotScript) {
  TempDir dir;
  const auto csv = dir.path() / "tomo.csv";
  const auto r = run_cli({"tomography-scan", "--basis", "fig4b", "--tanh-chi", "0.5", "--out",
                          csv.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(r.out.empty());
  const auto lines = lines_of(read_file(csv));
  ASSERT_EQ(lines.size(), 3u);
  EXPECT_NE(lines[0].find("basis=fig4b"), std::string::npos);
  const auto header = split(lines[1]);
  const auto row = split(lines[2]);
  ASSERT_EQ(header[5], "min_eigenvalue");
  EXPECT_NEAR(std::stod(row[5]), -0.0079279875749903601, 1e-9);
  EXPECT_NEAR(std::stod(row[10]), 1.0, 1e-12);
  const auto script = read_file(dir.path() / "tomo.plot.py");
  EXPECT_NE(script.find("'tomo.csv'"), std::string::npos);
  EXPECT_NE(script.find("matplotlib"), std::string::npos);
}

TEST(Validate, ReducedGridPasses) {
  TempDir dir;
  const auto csv = dir.path() / "validate.csv";
  const auto r = run_cli({"validate", "--tanh-chi", "0.1:0.3:0.1", "--eta", "0.4,1",
                          "--out", csv.string()});
  ASSERT_EQ(r.code, 0) << r.out << r.err;
  EXPECT_NE(r.out.find("result: PASS"), std::string::npos);
  EXPECT_NE(r.out.find("SMALL-TANH_CHI"), std::string::npos);
  EXPECT_NE(r.out.find("unavailable"), std::string::npos);
  const auto lines = lines_of(read_file(csv));
  // 3 tanh_chi x 9 delta x 2 eta x 3 noise x 4 pairs x 2 variants, plus
  // (2 + 3) x 9 squash rows.
  EXPECT_EQ(lines.size(), 2u + 3 * 9 * 2 * 3 * 4 * 2 + 5 * 9);
}

}  // namespace
}  // namespace bellsim::cli
