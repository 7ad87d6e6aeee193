// mdf: command-line front end for the manifold density function library.

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <mdf/mdf.hpp>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitInvalid = 2;

struct Common {
  std::string input;
  std::string output_dir;
  std::uint64_t seed = 0;
  std::size_t grid_steps = 100;
  std::optional<double> r_max;
  std::optional<double> r_cap;
  double quantile = 0.25;
  std::size_t k_neighbors = 6;
  std::optional<int> dimension;
  std::optional<double> volume;
  std::optional<int> chi;
  std::optional<double> area;
  std::optional<double> lambda1;
  std::optional<std::size_t> trials;
  bool include_self = true;
  bool symmetrize = false;
  bool bridge = false;
  std::size_t workers = 1;
};

void add_input(CLI::App* app, Common& c) {
  app->add_option("--input", c.input, "Input CSV")->required();
}

void add_output(CLI::App* app, Common& c) {
  app->add_option("--output-dir", c.output_dir, "Directory for CSV output");
}

void add_grid(CLI::App* app, Common& c) {
  app->add_option("--grid-steps", c.grid_steps, "Number of radii G")->check(CLI::Range(2, 1000000));
  app->add_option("--r-max", c.r_max, "Largest radius (default: distance quantile)");
  app->add_option("--r-cap", c.r_cap, "Upper bound on the largest radius");
  app->add_option("--quantile", c.quantile, "Quantile of positive distances used as R")
      ->check(CLI::Range(0.0, 1.0));
}

void add_distance_flags(CLI::App* app, Common& c) {
  app->add_option("--k-neighbors", c.k_neighbors, "k for the nearest-neighbour graph");
  app->add_flag("--symmetrize", c.symmetrize, "Average near-symmetric distance entries");
  app->add_flag("--bridge-components", c.bridge,
                "Join neighbour-graph components by their closest pair instead of failing");
  app->add_option("--workers", c.workers, "Worker threads (0 = all cores)");
}

void add_estimator(CLI::App* app, Common& c) {
  app->add_option("--include-self", c.include_self, "Count the centre point in its own ball");
}

void add_model(CLI::App* app, Common& c, bool curvature) {
  app->add_option("--dimension", c.dimension, "Intrinsic dimension n");
  app->add_option("--volume", c.volume, "Manifold volume (fitted when absent)");
  if (curvature) {
    auto* chi = app->add_option("--chi", c.chi, "Euler characteristic (surface scaling)");
    app->add_option("--area", c.area, "Surface area for the exact surface scaling")->needs(chi);
    app->add_option("--lambda1", c.lambda1, "First Laplacian eigenvalue (hypersurface scaling)")
        ->excludes(chi);
  }
}

mdf::Disconnected policy(const Common& c) {
  return c.bridge ? mdf::Disconnected::Bridge : mdf::Disconnected::Error;
}

bool is_point_table(const mdf::csv::Table& t) {
  return !t.header.empty() && t.header.front() == "x0";
}

/// Points are turned into k-NN graph geodesics; anything else is read as a
/// distance matrix.
mdf::DistanceMatrix load_distances(const Common& c) {
  auto in = mdf::csv::open_input(c.input);
  const auto table = mdf::csv::read_table(in, c.input);
  if (is_point_table(table)) {
    auto points = mdf::csv::read_point_sample(c.input);
    return mdf::graph_geodesic_distances(points, c.k_neighbors, c.workers, policy(c));
  }
  if (!table.header.empty()) throw mdf::ValidationError(c.input + ": unrecognized header");
  return mdf::validate_distance_matrix(table.values, table.rows, table.cols, c.symmetrize);
}

mdf::RadiusGrid make_grid(const Common& c, const mdf::DistanceMatrix& d) {
  double r = c.r_max.value_or(mdf::positive_distance_quantile(d, c.quantile));
  if (c.r_cap) r = std::min(r, *c.r_cap);
  return mdf::build_radius_grid(r, c.grid_steps);
}

mdf::Curvature make_curvature(const Common& c) {
  if (c.chi) return mdf::curvature::Surface{*c.chi, c.area};
  if (c.lambda1) return mdf::curvature::Hypersurface{*c.lambda1};
  return mdf::curvature::Flat{};
}

int require_dimension(const Common& c) {
  if (!c.dimension) throw mdf::MissingParameter("--dimension is required");
  return *c.dimension;
}

struct ResolvedVolume {
  double value;
  bool fitted;
};

ResolvedVolume resolve_volume(const Common& c, const mdf::SortedDistanceMatrix& s,
                              const mdf::RadiusGrid& grid, int n) {
  if (c.volume) return {*c.volume, false};
  const mdf::EstimatorOptions opts{c.include_self, c.workers};
  return {mdf::fit_volume(mdf::aggregated_mdf(s, grid, mdf::ManifoldModel(n), opts), n), true};
}

void print_volume(const ResolvedVolume& v) {
  std::cout << "volume=" << mdf::csv::format_double(v.value) << '\n'
            << "volume_source=" << (v.fitted ? "fitted" : "supplied") << '\n';
}

std::ostream& output(const Common& c, const std::string& file, std::optional<std::ofstream>& holder) {
  if (c.output_dir.empty()) return std::cout;
  holder = mdf::csv::open_output(std::filesystem::path(c.output_dir) / file);
  return *holder;
}

// --- subcommands --------------------------------------------------------------

int cmd_sample(const Common& c, const std::string& family, const std::string& variant,
               std::size_t size, std::size_t ambient, double noise, std::size_t lift,
               std::size_t embed) {
  mdf::SamplerSpec spec{mdf::parse_family(family), mdf::parse_variant(variant), size, c.seed,
                        ambient, noise};
  spec.validate();
  auto pts = mdf::sample_points(spec);
  if (lift) pts = mdf::lift_to_dimension(pts, lift, mdf::derive_seed(c.seed, {lift}));
  if (embed) pts = mdf::pca_embed(pts, embed);
  std::optional<std::ofstream> f;
  mdf::csv::write_point_sample(output(c, "points.csv", f), pts);
  return kExitOk;
}

int cmd_distances(const Common& c, const std::string& method) {
  const auto pts = mdf::csv::read_point_sample(c.input);
  std::optional<mdf::DistanceMatrix> d;
  if (method == "graph") d = mdf::graph_geodesic_distances(pts, c.k_neighbors, c.workers, policy(c));
  else if (method == "euclidean") d = mdf::euclidean_distance_matrix(pts);
  else if (method == "torus") d = mdf::torus_distance_matrix(pts);
  else if (method == "great-circle") d = mdf::great_circle_distance_matrix(pts);
  else throw mdf::InvalidArgument("unknown distance method '" + method + "'");
  std::optional<std::ofstream> f;
  mdf::csv::write_distance_matrix(output(c, "distances.csv", f), *d);
  return kExitOk;
}

int cmd_mdf(const Common& c, std::optional<std::size_t> point) {
  const auto d = load_distances(c);
  const auto grid = make_grid(c, d);
  const auto s = mdf::sort_rows(d, c.workers);
  const int n = require_dimension(c);
  const auto vol = resolve_volume(c, s, grid, n);
  const mdf::ManifoldModel model(n, vol.value, make_curvature(c));
  const mdf::EstimatorOptions opts{c.include_self, c.workers};
  const auto est = point ? mdf::local_mdf(s, *point, grid, model, opts)
                         : mdf::aggregated_mdf(s, grid, model, opts);
  std::optional<std::ofstream> f;
  mdf::csv::write_function_pair(output(c, "mdf.csv", f), mdf::theoretical_mdf(model, grid), est);
  return kExitOk;
}

int cmd_score(const Common& c, std::optional<std::size_t> point) {
  const auto d = load_distances(c);
  const auto grid = make_grid(c, d);
  const auto s = mdf::sort_rows(d, c.workers);
  const int n = require_dimension(c);
  const auto vol = resolve_volume(c, s, grid, n);
  const mdf::ManifoldModel model(n, vol.value, make_curvature(c));
  const mdf::EstimatorOptions opts{c.include_self, c.workers};
  const auto theo = mdf::theoretical_mdf(model, grid);
  const auto est = point ? mdf::local_mdf(s, *point, grid, model, opts)
                         : mdf::aggregated_mdf(s, grid, model, opts);
  const auto report = mdf::manifold_score(theo, est, s.size(), mdf::describe_scaling(model));
  mdf::write_report(std::cout, report);
  print_volume(vol);
  if (!c.output_dir.empty()) {
    auto f = mdf::csv::open_output(std::filesystem::path(c.output_dir) / "function.csv");
    mdf::csv::write_function_pair(f, theo, est);
  }
  return kExitOk;
}

int cmd_search_chi(const Common& c, int chi_min, int chi_max) {
  const auto d = load_distances(c);
  const auto grid = make_grid(c, d);
  const auto s = mdf::sort_rows(d, c.workers);
  const auto vol = resolve_volume(c, s, grid, 2);
  const auto res = mdf::search_euler_characteristic(s, grid, vol.value, chi_min, chi_max,
                                                    {c.include_self, c.workers});
  std::cout << "chi=" << res.chi << '\n';
  mdf::write_report(std::cout, res.report);
  print_volume(vol);
  std::optional<std::ofstream> f;
  if (!c.output_dir.empty()) {
    auto& out = output(c, "candidates.csv", f);
    out << "chi,score\n";
    for (const auto& [chi, score] : res.candidates) out << chi << ',' << mdf::csv::format_double(score) << '\n';
  }
  return kExitOk;
}

int cmd_search_lambda1(const Common& c, const std::vector<double>& explicit_values) {
  const auto d = load_distances(c);
  const auto grid = make_grid(c, d);
  const auto s = mdf::sort_rows(d, c.workers);
  const int n = require_dimension(c);
  const auto vol = resolve_volume(c, s, grid, n);
  std::vector<mdf::Lambda1Candidate> candidates;
  if (explicit_values.empty()) {
    candidates = mdf::lambda1_catalog(n, vol.value);
  } else {
    for (double v : explicit_values) candidates.push_back({"given", v, false});
  }
  const auto res = mdf::search_lambda1(s, grid, vol.value, n, candidates, {c.include_self, c.workers});
  std::cout << "lambda1=" << mdf::csv::format_double(res.candidate.value) << '\n'
            << "candidate=" << res.candidate.name << '\n';
  mdf::write_report(std::cout, res.report);
  print_volume(vol);
  std::optional<std::ofstream> f;
  if (!c.output_dir.empty()) {
    auto& out = output(c, "candidates.csv", f);
    out << "name,lambda1,score\n";
    for (const auto& [cand, score] : res.candidates) {
      out << cand.name << ',' << mdf::csv::format_double(cand.value) << ','
          << mdf::csv::format_double(score) << '\n';
    }
  }
  return kExitOk;
}

int cmd_search_dim(const Common& c, int dim_min, int dim_max) {
  const auto d = load_distances(c);
  const auto grid = make_grid(c, d);
  const auto s = mdf::sort_rows(d, c.workers);
  if (!c.volume) throw mdf::MissingParameter("--volume is required for a dimension search");
  const auto res = mdf::search_dimension(s, grid, *c.volume, dim_min, dim_max, make_curvature(c),
                                         {c.include_self, c.workers});
  std::cout << "dimension=" << res.dimension << '\n';
  mdf::write_report(std::cout, res.report);
  std::optional<std::ofstream> f;
  if (!c.output_dir.empty()) {
    auto& out = output(c, "candidates.csv", f);
    out << "dimension,score\n";
    for (const auto& [n, score] : res.candidates) out << n << ',' << mdf::csv::format_double(score) << '\n';
  }
  return kExitOk;
}

int cmd_ripley(const Common& c, const std::vector<double>& lower, const std::vector<double>& upper,
               const std::string& weights, std::optional<std::size_t> point,
               const std::string& normalization) {
  const auto pts = mdf::csv::read_point_sample(c.input);
  const mdf::RectDomain dom(lower, upper);
  if (!c.r_max) throw mdf::MissingParameter("--r-max is required for the Ripley estimator");
  const auto grid = mdf::build_radius_grid(*c.r_max, c.grid_steps);
  mdf::RipleyNormalization norm = mdf::RipleyNormalization::Raw;
  if (normalization == "proportion") norm = mdf::RipleyNormalization::Proportion;
  else if (normalization != "raw") throw mdf::InvalidArgument("normalization must be raw or proportion");
  std::optional<mdf::DensityFunction> k;
  if (!weights.empty()) {
    if (!point) throw mdf::MissingParameter("--point is required with --weights");
    const auto w = mdf::csv::read_weights(weights);
    k = mdf::ripley_inhomogeneous(pts, w, *point, grid, dom);
  } else if (point) {
    k = mdf::ripley_local(pts, *point, grid, dom, norm);
  } else {
    k = mdf::ripley_aggregated(pts, grid, dom, norm);
  }
  std::optional<std::ofstream> f;
  mdf::csv::write_density_function(output(c, "ripley.csv", f), *k);
  return kExitOk;
}

int cmd_experiment(const Common& c, const std::string& config_path,
                   std::optional<std::size_t> workers) {
  auto cfg = mdf::load_config(config_path);
  if (c.trials) cfg.trials = *c.trials;
  if (!c.output_dir.empty()) cfg.output_dir = c.output_dir;
  cfg.validate();
  const auto result = mdf::run_experiment(cfg, workers);
  mdf::write_experiment(cfg, result, cfg.output_dir);
  std::size_t failed = 0;
  for (const auto& cell : result.cells) {
    if (!cell.ok) {
      ++failed;
      std::cerr << "cell d=" << cell.ambient_dimension << " m=" << cell.size << " trial="
                << cell.trial << " column=" << cell.column << " failed: " << cell.message << '\n';
    }
  }
  std::cout << "cells=" << result.cells.size() << '\n'
            << "failed=" << failed << '\n'
            << "output_dir=" << cfg.output_dir.string() << '\n';
  return failed ? kExitFailure : kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Manifold density function: scores how well distances resemble a uniform manifold sample"};
  app.require_subcommand(1);
  Common c;

  auto* sample = app.add_subcommand("sample", "Draw a point sample");
  std::string family = "flat_torus";
  std::string variant = "uniform";
  std::size_t size = 1000;
  std::size_t ambient = 3;
  double noise = 0.1;
  std::size_t lift = 0;
  std::size_t embed = 0;
  sample->add_option("--family", family, "flat_torus | sphere | klein_bottle | hypersphere");
  sample->add_option("--variant", variant, "uniform | cross | cross_noise | sine");
  sample->add_option("--size", size, "Number of points")->check(CLI::PositiveNumber);
  sample->add_option("--ambient-dimension", ambient, "Ambient dimension for spheres");
  sample->add_option("--noise", noise, "Uniform fraction for cross_noise");
  sample->add_option("--lift", lift, "Pad with uniform coordinates up to this dimension");
  sample->add_option("--embed-dimension", embed, "PCA target dimension");
  sample->add_option("--seed", c.seed, "Random seed");
  add_output(sample, c);

  auto* distances = app.add_subcommand("distances", "Build a distance matrix from points");
  std::string method = "graph";
  add_input(distances, c);
  add_output(distances, c);
  distances->add_option("--method", method, "graph | euclidean | torus | great-circle");
  add_distance_flags(distances, c);

  std::optional<std::size_t> point;

  auto* mdf_cmd = app.add_subcommand("mdf", "Empirical MDF next to the theoretical one");
  add_input(mdf_cmd, c);
  add_output(mdf_cmd, c);
  add_grid(mdf_cmd, c);
  add_distance_flags(mdf_cmd, c);
  add_estimator(mdf_cmd, c);
  add_model(mdf_cmd, c, true);
  mdf_cmd->add_option("--point", point, "Local estimate at this point index");

  auto* score = app.add_subcommand("score", "Manifold score of a distance matrix or embedding");
  add_input(score, c);
  add_output(score, c);
  add_grid(score, c);
  add_distance_flags(score, c);
  add_estimator(score, c);
  add_model(score, c, true);
  score->add_option("--point", point, "Local score at this point index");

  auto* search_chi = app.add_subcommand("search-chi", "Best-fitting Euler characteristic");
  int chi_min = -4;
  int chi_max = 4;
  add_input(search_chi, c);
  add_output(search_chi, c);
  add_grid(search_chi, c);
  add_distance_flags(search_chi, c);
  add_estimator(search_chi, c);
  search_chi->add_option("--volume", c.volume, "Surface area (fitted when absent)");
  search_chi->add_option("--chi-min", chi_min, "Smallest candidate");
  search_chi->add_option("--chi-max", chi_max, "Largest candidate");

  auto* search_l1 = app.add_subcommand("search-lambda1", "Best-fitting first Laplacian eigenvalue");
  std::vector<double> lambda_values;
  add_input(search_l1, c);
  add_output(search_l1, c);
  add_grid(search_l1, c);
  add_distance_flags(search_l1, c);
  add_estimator(search_l1, c);
  add_model(search_l1, c, false);
  search_l1->add_option("--lambda1", lambda_values, "Explicit candidates (default: catalog)")->delimiter(',');

  auto* search_dim = app.add_subcommand("search-dim", "Best-fitting intrinsic dimension");
  int dim_min = 1;
  int dim_max = 10;
  add_input(search_dim, c);
  add_output(search_dim, c);
  add_grid(search_dim, c);
  add_distance_flags(search_dim, c);
  add_estimator(search_dim, c);
  search_dim->add_option("--volume", c.volume, "Manifold volume")->required();
  auto* sd_chi = search_dim->add_option("--chi", c.chi, "Apply surface scaling at every n");
  search_dim->add_option("--lambda1", c.lambda1, "Apply hypersurface scaling at every n")->excludes(sd_chi);
  search_dim->add_option("--dim-min", dim_min, "Smallest candidate");
  search_dim->add_option("--dim-max", dim_max, "Largest candidate");

  auto* ripley = app.add_subcommand("ripley", "Ripley K-function in a rectangular window");
  std::vector<double> lower;
  std::vector<double> upper;
  std::string weights;
  std::string normalization = "raw";
  add_input(ripley, c);
  add_output(ripley, c);
  ripley->add_option("--lower", lower, "Window lower corner")->required()->delimiter(',');
  ripley->add_option("--upper", upper, "Window upper corner")->required()->delimiter(',');
  ripley->add_option("--r-max", c.r_max, "Largest radius")->required();
  ripley->add_option("--grid-steps", c.grid_steps, "Number of radii");
  ripley->add_option("--weights", weights, "Intensity per point (inhomogeneous estimator)");
  ripley->add_option("--point", point, "Local K-function at this point index");
  ripley->add_option("--normalization", normalization, "raw | proportion");

  auto* experiment = app.add_subcommand("experiment", "Run a configured experiment table");
  std::string config;
  std::optional<std::size_t> exp_workers;
  experiment->add_option("--config", config, "Experiment INI file")->required();
  add_output(experiment, c);
  experiment->add_option("--trials", c.trials, "Override the trial count");
  experiment->add_option("--workers", exp_workers, "Override the worker count (0 = all cores)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitInvalid;
  }

  try {
    if (*sample) return cmd_sample(c, family, variant, size, ambient, noise, lift, embed);
    if (*distances) return cmd_distances(c, method);
    if (*mdf_cmd) return cmd_mdf(c, point);
    if (*score) return cmd_score(c, point);
    if (*search_chi) return cmd_search_chi(c, chi_min, chi_max);
    if (*search_l1) return cmd_search_lambda1(c, lambda_values);
    if (*search_dim) return cmd_search_dim(c, dim_min, dim_max);
    if (*ripley) return cmd_ripley(c, lower, upper, weights, point, normalization);
    if (*experiment) return cmd_experiment(c, config, exp_workers);
  } catch (const mdf::ConnectivityError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  } catch (const mdf::SingularScaling& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  } catch (const mdf::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const mdf::InvalidArgument& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const mdf::ShapeError& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const mdf::ValidationError& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const mdf::MissingParameter& e) {
    std::cerr << "missing parameter: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitInvalid;
}
