#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>

#include "uwoc/config.hpp"
#include "uwoc/export.hpp"

using namespace uwoc;

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("uwoc_test_" + name)).string();
}

const config::RunConfig& short_case1() {
  static const config::RunConfig cfg =
      config::parse_config("preset = \"case1\"\nscenario.duration = 40");
  return cfg;
}

}  // namespace

TEST(Fnv1a, ReferenceVectors) {
  EXPECT_EQ(io::fnv1a(""), 0xcbf29ce484222325ull);
  EXPECT_EQ(io::fnv1a("a"), 0xaf63dc4c8601ec8cull);
  EXPECT_EQ(io::fnv1a("foobar"), 0x85944171f73967e8ull);
}

TEST(Timeseries, LayoutOfNominalRun) {
  const sim::RunRecord rec = sim::run(sim::Scenario{}, {});
  std::ostringstream out;
  io::write_timeseries(out, rec);
  const std::string text = out.str();
  EXPECT_EQ(text.find('\r'), std::string::npos);
  ASSERT_EQ(text.back(), '\n');

  const auto lines = split(text, '\n');
  ASSERT_EQ(lines.size(), 30002u);
  EXPECT_EQ(lines[0],
            "t,x,y,rho,u,v,r,x_ref,y_ref,rho_ref,tau1,tau2,tau3,d,psi,"
            "log10_bitrate,inside_cone,lyapunov_v");
  const std::size_t ncols = io::timeseries_columns().size();
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto cells = split(lines[i], ',');
    ASSERT_EQ(cells.size(), ncols) << "row " << i;
    ASSERT_TRUE(cells[16] == "0" || cells[16] == "1") << "row " << i;
  }
  const auto first = split(lines[1], ',');
  EXPECT_EQ(std::stod(first[0]), 0.0);
  EXPECT_EQ(std::stod(first[1]), 5.0);
  EXPECT_NEAR(std::stod(first[13]), 8.03, 0.02);
  EXPECT_EQ(std::stod(split(lines.back(), ',')[0]), 150.0);
}

TEST(Timeseries, ValuesRoundTripExactly) {
  const sim::RunRecord rec = sim::run(short_case1().scenario, short_case1().target);
  std::ostringstream out;
  io::write_timeseries(out, rec);
  const auto lines = split(out.str(), '\n');
  for (std::size_t i = 1; i < lines.size(); i += 97) {
    const auto cells = split(lines[i], ',');
    const sim::RunRow& row = rec.rows[i - 1];
    EXPECT_EQ(std::stod(cells[1]), row.state.eta[0]);
    EXPECT_EQ(std::stod(cells[11]), row.tau.tau[1]);
    EXPECT_EQ(std::stod(cells[17]), row.lyapunov);
  }
}

TEST(Timeseries, ExportIsByteIdenticalAcrossRuns) {
  const auto& cfg = short_case1();
  const std::string a = temp_path("a.csv"), b = temp_path("b.csv");
  io::export_timeseries(sim::run(cfg.scenario, cfg.target), a);
  io::export_timeseries(sim::run(cfg.scenario, cfg.target), b);
  const std::string ta = read_file(a);
  EXPECT_FALSE(ta.empty());
  EXPECT_EQ(ta, read_file(b));
  std::filesystem::remove(a);
  std::filesystem::remove(b);
}

TEST(Timeseries, UnwritablePathThrows) {
  EXPECT_THROW(io::export_timeseries({}, "/nonexistent_dir/x/y.csv"), io::IoError);
}

TEST(Metrics, JsonCarriesConfigAndReproduces) {
  const auto& cfg = short_case1();
  const sim::RunRecord rec = sim::run(cfg.scenario, cfg.target);
  const nlohmann::json j = io::metrics_json(cfg, rec);
  EXPECT_EQ(j["name"], "case1");
  EXPECT_EQ(j["controller"], "pd");
  EXPECT_EQ(j["seed"], 1u);
  EXPECT_EQ(j["steps"], 8000u);
  const std::string text = j["config"];
  char expected[40];
  std::snprintf(expected, sizeof(expected), "fnv1a64:%016llx",
                static_cast<unsigned long long>(io::fnv1a(text)));
  EXPECT_EQ(j["config_hash"], expected);
  ASSERT_TRUE(j.contains("max_distance_after_disturbance"));

  const config::RunConfig again = config::parse_config(text);
  EXPECT_EQ(again, cfg);
  const sim::RunRecord rec2 = sim::run(again.scenario, again.target);
  EXPECT_EQ(io::metrics_json(again, rec2), j);
}

TEST(Metrics, UnsetValuesAreNull) {
  config::RunConfig cfg;
  cfg.scenario.duration = 0.5;
  const nlohmann::json j = io::metrics_json(cfg, sim::run(cfg.scenario, cfg.target));
  EXPECT_TRUE(j["seed"].is_null());
  EXPECT_TRUE(j["arrival_time"].is_null());
  EXPECT_TRUE(j["established_time"].is_null());
  EXPECT_TRUE(j["rmse"].is_null());
  EXPECT_FALSE(j.contains("max_distance_after_disturbance"));
}

TEST(Metrics, ExportWrapsRuns) {
  const std::string path = temp_path("metrics.json");
  io::export_metrics({nlohmann::json{{"name", "a"}}, nlohmann::json{{"name", "b"}}}, path);
  const nlohmann::json doc = nlohmann::json::parse(read_file(path));
  ASSERT_EQ(doc["runs"].size(), 2u);
  EXPECT_EQ(doc["runs"][1]["name"], "b");
  std::filesystem::remove(path);
}

TEST(Contour, DefaultGrid) {
  const sim::CommTarget target;
  const io::ContourGrid g = io::contour_grid(target, {});
  ASSERT_EQ(g.depths.size(), 161u);
  ASSERT_EQ(g.offsets.size(), 201u);
  ASSERT_EQ(g.values.size(), 161u);
  for (const auto& row : g.values) ASSERT_EQ(row.size(), 201u);

  EXPECT_TRUE(std::isnan(g.values[0][100]));
  EXPECT_TRUE(std::isinf(g.values[0][0]) && g.values[0][0] < 0);
  EXPECT_TRUE(std::isinf(g.values[20][0]) && g.values[20][0] < 0);
  for (std::size_t i = 0; i < g.depths.size(); ++i) {
    for (std::size_t j = 0; j < g.offsets.size(); ++j) {
      ASSERT_EQ(std::isnan(g.values[i][j]), i == 0 && j == 100);
      if (std::isfinite(g.values[i][j])) {
        EXPECT_NEAR(g.values[i][j], g.values[i][200 - j], 1e-9);
      } else if (!std::isnan(g.values[i][j])) {
        EXPECT_EQ(g.values[i][j], g.values[i][200 - j]);
      }
    }
  }
}

TEST(Contour, MatchesLinkModelAndDecreasesAlongRay) {
  const sim::CommTarget target;
  const io::ContourGrid g = io::contour_grid(target, {});
  double prev = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < g.depths.size(); ++i) {
    const double v = g.values[i][100];
    EXPECT_LT(v, prev);
    prev = v;
  }
  const std::size_t i = 80, j = 130;
  const double depth = g.depths[i], offset = g.offsets[j];
  const double d = std::hypot(depth, offset);
  const double rate = optics::bit_rate(target.link,
                                       {d, std::atan(offset / depth), depth},
                                       target.target_ber);
  EXPECT_NEAR(g.values[i][j], std::log10(rate), 1e-12);
}

TEST(Contour, CsvLayout) {
  const sim::CommTarget target;
  const io::ContourGrid g = io::contour_grid(target, {});
  std::ostringstream out;
  io::write_contour(out, g, target);
  const auto lines = split(out.str(), '\n');
  ASSERT_EQ(lines.size(), 163u);
  EXPECT_EQ(lines[0], "quantity,log10_bitrate,target_ber,0.0001,solar_model,aperture");
  const auto header = split(lines[1], ',');
  ASSERT_EQ(header.size(), 202u);
  EXPECT_EQ(header[0], "depth\\offset");
  EXPECT_EQ(std::stod(header[1]), -5.0);
  EXPECT_EQ(split(lines[2], ',').size(), 202u);
  EXPECT_EQ(split(lines[2], ',')[1], "-inf");
}
