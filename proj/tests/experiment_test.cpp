#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>

#include <mdf/experiment.hpp>
#include <mdf/report.hpp>

using namespace mdf;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("mdf_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

ExperimentConfig parse(const std::string& text, const fs::path& base = ".") {
  std::istringstream in(text);
  return parse_config(in, base);
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(MDF_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

const char* kSmoke = R"(
[experiment]
name = smoke
family = flat_torus
sizes = 10
trials = 1
seed = 3

[column.uniform]
variant = uniform

[column.cross_noise]
variant = cross_noise
noise = 0.1

[column.cross]
variant = cross
)";

}  // namespace

TEST(Config, ParsesAllSections) {
  const auto cfg = parse(R"(
[experiment]
name = spheres
family = hypersphere
sizes = 100, 200
ambient_dimensions = 6, 8
trials = 4
seed = 11
workers = 2

[grid]
steps = 50
r_max = auto
quantile = 0.3
cap = 0.5

[model]
dimension = auto
volume = analytic

[distances]
method = exact
disconnected = bridge

[column.scaled]
variant = uniform
scaling = lambda1
lambda1 = dimension
)");
  EXPECT_EQ(cfg.name, "spheres");
  EXPECT_EQ(cfg.family, Family::Hypersphere);
  EXPECT_EQ(cfg.sizes, (std::vector<std::size_t>{100, 200}));
  EXPECT_EQ(cfg.ambient_dimensions, (std::vector<std::size_t>{6, 8}));
  EXPECT_EQ(cfg.trials, 4u);
  EXPECT_EQ(cfg.grid.steps, 50u);
  EXPECT_FALSE(cfg.grid.r_max.has_value());
  EXPECT_EQ(cfg.grid.cap, 0.5);
  EXPECT_EQ(cfg.dimension, 0);
  EXPECT_EQ(cfg.disconnected, Disconnected::Bridge);
  ASSERT_EQ(cfg.columns.size(), 1u);
  EXPECT_EQ(cfg.columns[0].scaling, ColumnScaling::Lambda1);
  EXPECT_FALSE(cfg.columns[0].lambda1.has_value());
}

TEST(Config, RejectsInvalidDocuments) {
  EXPECT_THROW(parse("[experiment]\nfamily = flat_torus\nsizes = 10\n"), ConfigError);
  EXPECT_THROW(parse("[experiment]\nsizes = 10\ntrials = 0\n[column.a]\n"), ConfigError);
  EXPECT_THROW(parse("[experiment]\nsizes =\n[column.a]\n"), ConfigError);
  EXPECT_THROW(parse("[experiment]\nsizes = 10\ncolour = red\n[column.a]\n"), ConfigError);
  EXPECT_THROW(parse("[experiment]\nsizes = 10\n[bogus]\n[column.a]\n"), ConfigError);
  EXPECT_THROW(parse("[experiment]\nsizes = ten\n[column.a]\n"), ConfigError);
  EXPECT_THROW(parse("[experiment]\nsizes = 10\nfamily = cube\n[column.a]\n"), ConfigError);
  EXPECT_THROW(parse("[experiment]\nsizes = 10\nfamily = klein_bottle\n[column.a]\n"), ConfigError);
  EXPECT_THROW(parse("[experiment]\nsizes = 10\n[column.a]\nvariant = sine\n"), ConfigError);
  EXPECT_THROW(parse("[experiment]\nsizes = 10\n[column.a]\nscaling = sometimes\n"), ConfigError);
  EXPECT_THROW(parse("[experiment]\nsizes = 10\n[distances]\ndisconnected = ignore\n[column.a]\n"), ConfigError);
}

TEST(Config, MissingEmbeddingFileFailsAtLoad) {
  const auto dir = scratch("missing");
  std::ofstream(dir / "cfg.ini") << "[experiment]\nfamily = klein_bottle\nsizes = 10\n"
                                    "[distances]\nmethod = graph\n"
                                    "[column.tsne]\ninput = embeddings/tsne.csv\n";
  try {
    load_config(dir / "cfg.ini");
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("tsne.csv"), std::string::npos);
  }
  fs::create_directories(dir / "embeddings");
  std::ofstream(dir / "embeddings" / "tsne.csv") << "x0,x1\n0,0\n1,0\n0,1\n1,1\n";
  EXPECT_NO_THROW(load_config(dir / "cfg.ini"));
}

TEST(Config, ShippedConfigsLoad) {
  std::size_t count = 0;
  for (const auto& entry : fs::directory_iterator(MDF_CONFIG_DIR)) {
    if (entry.path().extension() != ".ini") continue;
    EXPECT_NO_THROW(load_config(entry.path())) << entry.path();
    ++count;
  }
  EXPECT_GE(count, 5u);
}

TEST(Experiment, SmokeRunEmitsOneScorePerVariant) {
  const auto cfg = parse(kSmoke);
  const auto res = run_experiment(cfg);
  ASSERT_EQ(res.cells.size(), 3u);
  for (const auto& c : res.cells) {
    EXPECT_TRUE(c.ok) << c.column << ": " << c.message;
    EXPECT_EQ(c.size, 10u);
  }
  EXPECT_FALSE(res.any_failed());
  const auto dir = scratch("smoke");
  write_experiment(cfg, res, dir);
  const auto table = slurp(dir / "table.csv");
  EXPECT_EQ(table.substr(0, table.find('\n')), "ambient_dimension,size,uniform,cross_noise,cross");
  EXPECT_NE(table.find(" ± "), std::string::npos);
  EXPECT_TRUE(fs::exists(dir / "summary.csv"));
  EXPECT_TRUE(fs::exists(dir / "scores.csv"));
  EXPECT_TRUE(fs::exists(dir / "curves" / "d3_m10_t0_cross.csv"));
}

TEST(Experiment, ColumnsWithTheSameVariantShareSamples) {
  const auto cfg = parse(R"(
[experiment]
family = sphere
sizes = 60
trials = 2
[distances]
method = graph
[column.plain]
variant = uniform
[column.chi2]
variant = uniform
scaling = chi
chi = 2
)");
  const auto res = run_experiment(cfg);
  ASSERT_EQ(res.cells.size(), 4u);
  EXPECT_EQ(res.cells[0].seed, res.cells[1].seed);
  EXPECT_EQ(res.cells[0].r_max, res.cells[1].r_max);
  EXPECT_NE(res.cells[0].seed, res.cells[2].seed);
}

TEST(Experiment, CellFailuresAreRecordedAndTheRunContinues) {
  const auto cfg = parse(R"(
[experiment]
sizes = 20
trials = 2
[grid]
r_max = 0.2
[column.ok]
variant = uniform
[column.singular]
variant = uniform
scaling = chi
chi = 9
)");
  const auto res = run_experiment(cfg);
  EXPECT_TRUE(res.any_failed());
  std::size_t ok = 0;
  for (const auto& c : res.cells) {
    if (c.column == "ok") {
      EXPECT_TRUE(c.ok);
      ++ok;
    } else {
      EXPECT_FALSE(c.ok);
      EXPECT_NE(c.message.find("non-positive"), std::string::npos);
    }
  }
  EXPECT_EQ(ok, 2u);
  const auto* row = res.find(3, 20, "singular");
  ASSERT_NE(row, nullptr);
  EXPECT_EQ(row->failed, 2u);
}

TEST(Experiment, OutputIsByteIdenticalAcrossWorkerCounts) {
  const auto cfg = parse(R"(
[experiment]
family = sphere
sizes = 40, 80
trials = 3
seed = 5
[distances]
method = graph
[column.uniform]
variant = uniform
scaling = chi
chi = 2
[column.cross]
variant = cross
)");
  const auto a = scratch("det_a");
  const auto b = scratch("det_b");
  write_experiment(cfg, run_experiment(cfg, 1), a);
  write_experiment(cfg, run_experiment(cfg, 4), b);
  for (const auto& entry : fs::recursive_directory_iterator(a)) {
    if (!entry.is_regular_file()) continue;
    const auto rel = fs::relative(entry.path(), a);
    EXPECT_EQ(slurp(entry.path()), slurp(b / rel)) << rel;
  }
}

TEST(Experiment, SampleStandardDeviation) {
  auto cfg = parse(kSmoke);
  cfg.trials = 4;
  cfg.sizes = {30};
  const auto res = run_experiment(cfg);
  const auto* row = res.find(3, 30, "uniform");
  ASSERT_NE(row, nullptr);
  std::vector<double> s;
  for (const auto& c : res.cells) {
    if (c.column == "uniform") s.push_back(c.score);
  }
  ASSERT_EQ(s.size(), 4u);
  const double mean = (s[0] + s[1] + s[2] + s[3]) / 4;
  double ss = 0;
  for (double x : s) ss += (x - mean) * (x - mean);
  EXPECT_NEAR(row->mean, mean, 1e-15);
  EXPECT_NEAR(row->sd, std::sqrt(ss / 3), 1e-15);
}

TEST(ScoreEmbedding, DeterministicReport) {
  const auto pts = sample_points({Family::Sphere, Variant::Uniform, 200, 4, 3});
  GridSettings grid;
  grid.cap = 0.3;
  auto render = [&] {
    const auto r = score_embedding(pts, ManifoldModel(2, 4 * std::numbers::pi), 6, grid);
    std::ostringstream out;
    write_report(out, r.report);
    return out.str();
  };
  const auto first = render();
  EXPECT_EQ(first, render());
  EXPECT_NE(first.find("r_max=0.3"), std::string::npos);
  const auto fitted = score_embedding(pts, ManifoldModel(2), 6, grid);
  EXPECT_TRUE(fitted.volume_fitted);
}

TEST(ScoreEmbedding, DisconnectedGraph) {
  const PointSample pts(4, 1, {0.0, 0.1, 10.0, 10.1});
  EXPECT_THROW(score_embedding(pts, ManifoldModel(1, 1.0), 1, {}), ConnectivityError);
}

TEST(Report, KeyValueFormat) {
  const auto grid = build_radius_grid(1.0, 4);
  const DensityFunction one(grid, std::vector<double>(4, 1.0));
  const DensityFunction zero(grid, std::vector<double>(4, 0.0));
  std::ostringstream out;
  write_report(out, manifold_score(one, zero, 5, "flat"));
  EXPECT_EQ(out.str(),
            "score=-1\nerror_counts=10\nsample_size=5\ngrid_steps=4\nr_max=1\n"
            "scaling=flat\nintrinsic=true\nstatus=degenerate_fit\n");
}

TEST(Cli, ExitCodes) {
  const auto dir = scratch("cli");
  const std::string d = dir.string();
  EXPECT_EQ(run_cli("sample --family sphere --size 80 --seed 2 --output-dir " + d), 0);
  EXPECT_TRUE(fs::exists(dir / "points.csv"));
  EXPECT_EQ(run_cli("score --input " + d + "/points.csv --dimension 2 --volume 12.566370614359172 --chi 2"), 0);
  EXPECT_EQ(run_cli("score --input " + d + "/points.csv"), 2);
  EXPECT_EQ(run_cli("score --input " + d + "/points.csv --dimension 2 --k-neighbors 1"), 1);
  EXPECT_EQ(run_cli("distances --input " + d + "/points.csv --method great-circle --output-dir " + d), 0);
  EXPECT_EQ(run_cli("search-chi --input " + d + "/distances.csv --volume 12.566370614359172"), 0);
  EXPECT_EQ(run_cli("nonsense"), 2);

  std::ofstream(dir / "bad.ini") << "[experiment]\nsizes = 10\n";
  EXPECT_EQ(run_cli("experiment --config " + d + "/bad.ini"), 2);
  std::ofstream(dir / "smoke.ini") << kSmoke;
  EXPECT_EQ(run_cli("experiment --config " + d + "/smoke.ini --output-dir " + d + "/out"), 0);
  EXPECT_TRUE(fs::exists(dir / "out" / "table.csv"));
  std::ofstream(dir / "partial.ini")
      << "[experiment]\nsizes = 20\n[grid]\nr_max = 0.2\n[column.a]\nscaling = chi\nchi = 9\n";
  EXPECT_EQ(run_cli("experiment --config " + d + "/partial.ini --output-dir " + d + "/p"), 1);
}

TEST(Experiment, FlatTorusOrderingHasPairwiseGaps) {
  auto cfg = load_config(fs::path(MDF_CONFIG_DIR) / "flat_torus.ini");
  cfg.sizes = {1000};
  const auto res = run_experiment(cfg, 1);
  const double u = res.find(3, 1000, "uniform")->mean;
  const double n = res.find(3, 1000, "cross_noise")->mean;
  const double c = res.find(3, 1000, "cross")->mean;
  EXPECT_GE(u - n, 0.05);
  EXPECT_GE(n - c, 0.05);
}
