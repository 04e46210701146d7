#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "htype/catalog.hpp"
#include "htype/cli.hpp"
#include "htype/config.hpp"
#include "htype/csv.hpp"
#include "htype/errors.hpp"

using namespace htype;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "htype");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

class TempDir {
 public:
  TempDir() : path_(fs::temp_directory_path() / ("htype_cli_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) + "_" +
                                                 ::testing::UnitTest::GetInstance()->current_test_info()->name())) {
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  std::string file(const std::string& name, const std::string& content = "") const {
    const auto p = path_ / name;
    if (!content.empty()) std::ofstream(p, std::ios::binary) << content;
    return p.string();
  }

 private:
  fs::path path_;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::stringstream ss(text);
  for (std::string line; std::getline(ss, line);) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> fields;
    std::stringstream ls(line);
    for (std::string f; std::getline(ls, f, ',');) fields.push_back(f);
    rows.push_back(fields);
  }
  return rows;
}

const char* kHeisenbergJson = R"({"rank": 2, "corank": 1, "spectrum": [{"alpha": 1, "pair_multiplicity": 1}], "kernel_dim": 0})";

}  // namespace

TEST(Csv, ShortestRoundTrip) {
  for (double x : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, 0.0, 1e-5, std::numbers::pi})
    EXPECT_EQ(parse_double(format_double(x)), x);
  EXPECT_EQ(format_double(0.5), "0.5");
  EXPECT_THROW(parse_double("1.0x"), Error);
  EXPECT_THROW(parse_double(""), Error);
  std::ostringstream os;
  const double row[] = {1.0, 0.25};
  write_csv_row(os, row);
  EXPECT_EQ(os.str(), "1,0.25\n");
}

TEST(Config, SpectralAndExplicitForms) {
  const auto c = parse_config(kHeisenbergJson);
  ASSERT_TRUE(c.spectral);
  EXPECT_EQ(c.spectral->rank, 2);
  EXPECT_EQ(c.seed, kDefaultSeed);
  const auto e = parse_config(R"({"S_diagonal": [1, 1], "L_matrices": [[0, 1, -1, 0]], "seed": 7, "tolerance": 1e-10})");
  ASSERT_TRUE(e.explicit_form);
  EXPECT_EQ(e.seed, 7u);
  EXPECT_EQ(e.tolerance, 1e-10);
  EXPECT_EQ(e.explicit_form->L[0](0, 1), 1.0);
  const auto nested = parse_config(R"({"S_diagonal": [1, 1], "L_matrices": [[[0, 1], [-1, 0]]]})");
  EXPECT_EQ(nested.explicit_form->L[0], e.explicit_form->L[0]);
  const auto sc = realize(nested, "explicit");
  EXPECT_EQ(sc.spec.spectrum.size(), 1u);
}

TEST(Config, Malformed) {
  EXPECT_THROW(parse_config(R"({"rank": 2, "corank": 1)"), Error);
  EXPECT_THROW(parse_config(R"({"rank": 2, "corank": 1, "spectrum": [], "S_diagonal": [1]})"), Error);
  EXPECT_THROW(parse_config(R"({"S_diagonal": [1, 1], "L_matrices": [[0, 1, -1]]})"), Error);
  EXPECT_THROW(parse_config(R"({"rank": "two", "corank": 1, "spectrum": []})"), Error);
  EXPECT_THROW(parse_config(R"({})"), Error);
  EXPECT_THROW(parse_config(R"({"S_diagonal": [1, 1], "L_matrices": [[0, 1, -1, 0]], "seed": -3})"), Error);
}

TEST(Catalog, AllGroupsBuild) {
  for (const auto& name : catalog_names()) EXPECT_EQ(catalog_group(name).name, name);
  EXPECT_THROW(catalog_group("nope"), Error);
}

TEST(CliValidate, Examples) {
  TempDir dir;
  EXPECT_EQ(run({"validate", dir.file("h.json", kHeisenbergJson)}).code, 0);
  const auto bad = run({"validate", dir.file("bad.json", R"({"rank": 2, "corank": 2, "spectrum": [{"alpha": 1, "pair_multiplicity": 1}]})")});
  EXPECT_EQ(bad.code, 1);
  EXPECT_NE(bad.err.find("Hurwitz–Radon bound violated"), std::string::npos);
  EXPECT_EQ(run({"validate", dir.file("trunc.json", R"({"rank": 2, "corank")")}).code, 3);
  EXPECT_EQ(run({"validate", dir.file("missing.json")}).code, 3);
  const auto dep = run({"validate", dir.file("dep.json", R"({"S_diagonal": [1, 1], "L_matrices": [[0, 1, -1, 0], [0, -1, 1, 0]]})")});
  EXPECT_EQ(dep.code, 1);
  EXPECT_NE(dep.out.find("linear_independence: FAIL"), std::string::npos);
  for (const auto& name : catalog_names()) EXPECT_EQ(run({"validate", "--group", name}).code, 0);
  EXPECT_EQ(run({"validate"}).code, 3);
  EXPECT_EQ(run({"validate", "--group", "heisenberg3", "--quiet"}).out, "");
}

TEST(CliExp, FullTurnAndStraightLine) {
  TempDir dir;
  const auto out = dir.file("exp.csv");
  const auto r = run({"exp", "--group", "heisenberg3", "--u", "1,0", "--v", "6.28318530717958648", "--steps", "4", "--out", out});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("cut_time: 1"), std::string::npos);
  EXPECT_NE(r.out.find("minimizing: yes"), std::string::npos);
  const auto text = slurp(out);
  EXPECT_EQ(text.find('\r'), std::string::npos);
  const auto rows = csv_rows(text);
  ASSERT_EQ(rows.size(), 6u);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"t", "x1", "x2", "z1"}));
  EXPECT_LE(std::hypot(parse_double(rows[5][1]), parse_double(rows[5][2])), 1e-12);
  for (const auto& row : rows)
    if (row[0] != "t")
      for (const auto& f : row) EXPECT_EQ(format_double(parse_double(f)), f);

  const auto line = run({"exp", "--group", "heisenberg3", "--u", "1,2", "--v", "0", "--steps", "2"});
  ASSERT_EQ(line.code, 0);
  EXPECT_EQ(line.out, "t,x1,x2,z1\n0,0,0,0\n0.5,0.5,1,0\n1,1,2,0\n");
  EXPECT_NE(line.err.find("cut_time: inf"), std::string::npos);

  EXPECT_EQ(run({"exp", "--group", "heisenberg3", "--u", "1,0", "--v", "1", "--steps", "0"}).code, 3);
  EXPECT_EQ(run({"exp", "--group", "heisenberg3", "--u", "1,0,0", "--v", "1"}).code, 3);
}

TEST(CliLog, Examples) {
  const auto straight = run({"log", "--group", "heisenberg3", "--x", "1,0", "--z", "0"});
  ASSERT_EQ(straight.code, 0);
  EXPECT_NE(straight.out.find("u: 1,0"), std::string::npos);
  EXPECT_NE(straight.out.find("v: 0"), std::string::npos);
  EXPECT_NE(straight.out.find("distance: 1\n"), std::string::npos);
  const auto cut = run({"log", "--group", "heisenberg3", "--x", "0,0", "--z", "1"});
  EXPECT_EQ(cut.code, 2);
  EXPECT_NE(cut.err.find("cut locus target"), std::string::npos);
  const auto pos = cut.out.find("distance_bound: ");
  ASSERT_NE(pos, std::string::npos);
  const auto value = parse_double(cut.out.substr(pos + 16, cut.out.find('\n', pos) - pos - 16));
  EXPECT_NEAR(value, std::sqrt(4 * std::numbers::pi), 1e-6);
  EXPECT_EQ(run({"log", "--group", "heisenberg3", "--x", "0,0", "--z", "0"}).code, 3);
}

TEST(CliMcp, Examples) {
  TempDir dir;
  const auto out = dir.file("mcp.csv");
  const auto ok = run({"mcp", "--group", "heisenberg3", "--N", "5", "--out", out});
  EXPECT_EQ(ok.code, 0) << ok.err;
  const auto rows = csv_rows(slurp(out));
  ASSERT_EQ(rows.size(), 10u);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"t", "ratio", "bound", "margin", "verdict"}));
  EXPECT_EQ(rows[1][4], "pass");
  EXPECT_EQ(run({"mcp", "--group", "heisenberg3", "--N", "4.5", "--box", "sharpness"}).code, 2);
  const auto pos = run({"mcp", "--group", "heisenberg3", "--K", "0.1"});
  EXPECT_EQ(pos.code, 3);
  EXPECT_NE(pos.err.find("unbounded"), std::string::npos);
  EXPECT_EQ(run({"mcp", "--group", "heisenberg3", "--K", "-1"}).code, 0);
  EXPECT_EQ(run({"mcp", "--group", "heisenberg3", "--box", "0.5:1.5,0.5:1.5,0.5:7"}).code, 3);
  EXPECT_EQ(run({"mcp", "--group", "heisenberg3", "--box", "0.5:1.5,0.5:1.5,0.5:1.5", "--t-grid", "0.25,0.5"}).code, 0);
  EXPECT_EQ(run({"mcp", "--group", "heisenberg3", "--t-grid", "0:1:3"}).code, 3);
}

TEST(CliMcp, ByteIdenticalAcrossRunsAndWorkers) {
  TempDir dir;
  const auto a = dir.file("a.csv"), b = dir.file("b.csv"), c = dir.file("c.csv");
  ASSERT_EQ(run({"mcp", "--group", "htype4x3", "--quad", "5", "--workers", "1", "--out", a}).code, 0);
  ASSERT_EQ(run({"mcp", "--group", "htype4x3", "--quad", "5", "--workers", "1", "--out", b}).code, 0);
  ASSERT_EQ(run({"mcp", "--group", "htype4x3", "--quad", "5", "--workers", "4", "--out", c}).code, 0);
  EXPECT_EQ(slurp(a), slurp(b));
  EXPECT_EQ(slurp(a), slurp(c));
}

TEST(CliSharpness, Examples) {
  TempDir dir;
  const auto out = dir.file("sharp.csv");
  const auto ok = run({"sharpness", "--group", "heisenberg3", "--epsilon", "0.5", "--out", out});
  ASSERT_EQ(ok.code, 0) << ok.err;
  const auto text = slurp(out);
  EXPECT_EQ(text.rfind("# group heisenberg3\n", 0), 0u);
  EXPECT_EQ(csv_rows(text).size(), 33u);
  EXPECT_EQ(run({"sharpness", "--group", "heisenberg3", "--epsilon", "0"}).code, 3);
  EXPECT_EQ(run({"sharpness", "--group", "htype4x3", "--epsilon", "0.5", "--quiet"}).code, 0);
}

TEST(CliParsing, ListsGridsAndUnknownFlags) {
  EXPECT_EQ(cli::parse_list("1,-2.5,3e-1"), (std::vector<double>{1, -2.5, 0.3}));
  EXPECT_THROW(cli::parse_list("1,,2"), Error);
  const auto g = cli::parse_t_grid("0.1:0.9:9");
  ASSERT_EQ(g.size(), 9u);
  EXPECT_DOUBLE_EQ(g[4], 0.5);
  EXPECT_EQ(run({"mcp", "--group", "heisenberg3", "--bogus"}).code, 3);
  EXPECT_EQ(run({}).code, 3);
  EXPECT_EQ(run({"--help"}).code, 0);
}
