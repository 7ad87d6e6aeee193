#pragma once

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <bit>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "csv.hpp"
#include "estimator.hpp"
#include "geodesic.hpp"
#include "parallel.hpp"
#include "random.hpp"
#include "sampler.hpp"

namespace mdf {

enum class DistanceMethod { Exact, Graph };
enum class VolumeRule { Analytic, Fit, Fixed };
enum class ColumnScaling { None, Chi, Lambda1 };

struct GridSettings {
  std::size_t steps = 100;
  /// Explicit R; when absent, the `quantile` of positive pairwise distances.
  std::optional<double> r_max;
  double quantile = 0.25;
  /// Upper bound applied after the rule above.
  std::optional<double> cap;
};

/// One table column: how a sample is drawn, post-processed and scaled.
struct ColumnSpec {
  std::string name;
  Variant variant = Variant::Uniform;
  double noise = 0.1;
  ColumnScaling scaling = ColumnScaling::None;
  int chi = 0;
  std::optional<double> area;
  /// For lambda1 scaling; absent means lambda1 = intrinsic dimension.
  std::optional<double> lambda1;
  std::size_t lift = 0;
  std::size_t embed_dimension = 0;
  std::optional<std::filesystem::path> input;
  std::optional<DistanceMethod> distances;
};

struct ExperimentConfig {
  std::string name = "experiment";
  Family family = Family::FlatTorus;
  std::vector<std::size_t> sizes;
  std::vector<std::size_t> ambient_dimensions{3};
  std::size_t trials = 1;
  std::uint64_t seed = 0;
  std::size_t workers = 1;
  bool include_self = true;

  GridSettings grid;
  /// 0 means the family's intrinsic dimension.
  int dimension = 0;
  VolumeRule volume_rule = VolumeRule::Analytic;
  double volume = 0.0;

  DistanceMethod distances = DistanceMethod::Exact;
  std::size_t k_neighbors = 6;
  Disconnected disconnected = Disconnected::Error;

  std::vector<ColumnSpec> columns;
  std::filesystem::path output_dir = "results";

  DistanceMethod distance_method(const ColumnSpec& c) const {
    if (c.lift || c.embed_dimension || c.input) return DistanceMethod::Graph;
    return c.distances.value_or(distances);
  }

  void validate() const {
    if (trials < 1) throw ConfigError("trials must be >= 1");
    if (sizes.empty()) throw ConfigError("sizes must not be empty");
    for (auto m : sizes) {
      if (m < 2) throw ConfigError("sample sizes must be >= 2");
    }
    if (ambient_dimensions.empty()) throw ConfigError("ambient_dimensions must not be empty");
    if (columns.empty()) throw ConfigError("at least one [column.*] section is required");
    if (grid.steps < 2) throw ConfigError("grid steps must be >= 2");
    if (grid.r_max && !(*grid.r_max > 0.0)) throw ConfigError("r_max must be positive");
    if (grid.cap && !(*grid.cap > 0.0)) throw ConfigError("cap must be positive");
    if (!(grid.quantile > 0.0 && grid.quantile <= 1.0)) throw ConfigError("quantile must lie in (0,1]");
    if (volume_rule == VolumeRule::Fixed && !(volume > 0.0)) throw ConfigError("volume must be positive");
    if (dimension < 0) throw ConfigError("dimension must be >= 1 (or 0 for automatic)");
    std::set<std::string> names;
    for (const auto& c : columns) {
      if (!names.insert(c.name).second) throw ConfigError("duplicate column '" + c.name + "'");
      if (c.input && !std::filesystem::exists(*c.input)) {
        throw ConfigError("column '" + c.name + "': input file '" + c.input->string() +
                          "' does not exist");
      }
      if (!c.input) {
        SamplerSpec probe{family, c.variant, 10, 0, ambient_dimensions.front(), c.noise};
        try {
          probe.validate();
        } catch (const Error& e) {
          throw ConfigError("column '" + c.name + "': " + e.what());
        }
      }
      if (distance_method(c) == DistanceMethod::Exact && family == Family::KleinBottle) {
        throw ConfigError("column '" + c.name + "': exact distances are unavailable for the Klein bottle");
      }
      if (c.scaling == ColumnScaling::Chi && dimension != 0 && dimension != 2) {
        throw ConfigError("column '" + c.name + "': chi scaling requires dimension 2");
      }
      if (c.lift && c.embed_dimension && c.embed_dimension > c.lift) {
        throw ConfigError("column '" + c.name + "': embed_dimension exceeds the lifted dimension");
      }
      if (distance_method(c) == DistanceMethod::Graph && k_neighbors < 1) {
        throw ConfigError("k_neighbors must be >= 1");
      }
    }
  }
};

namespace detail {

inline std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  for (auto f : csv::split(s)) {
    if (!f.empty()) out.emplace_back(f);
  }
  return out;
}

template <typename T>
T parse_number(const std::string& key, const std::string& s) {
  std::istringstream in(s);
  T v{};
  in >> v;
  if (!in || !(in >> std::ws).eof()) throw ConfigError("'" + key + "': cannot parse '" + s + "'");
  return v;
}

inline void check_keys(const boost::property_tree::ptree& section, const std::string& where,
                       const std::set<std::string>& allowed) {
  for (const auto& [key, _] : section) {
    if (!allowed.contains(key)) throw ConfigError("[" + where + "]: unknown key '" + key + "'");
  }
}

inline std::optional<std::string> get(const boost::property_tree::ptree& section,
                                      const std::string& key) {
  if (auto v = section.get_optional<std::string>(boost::property_tree::ptree::path_type(key, '\0'))) {
    return std::string(csv::trim(*v));
  }
  return std::nullopt;
}

inline DistanceMethod parse_distance_method(const std::string& s) {
  if (s == "exact") return DistanceMethod::Exact;
  if (s == "graph") return DistanceMethod::Graph;
  throw ConfigError("distance method must be 'exact' or 'graph', got '" + s + "'");
}

inline Disconnected parse_disconnected(const std::string& s) {
  if (s == "error") return Disconnected::Error;
  if (s == "bridge") return Disconnected::Bridge;
  throw ConfigError("disconnected must be 'error' or 'bridge', got '" + s + "'");
}

}  // namespace detail

/// Parses an INI experiment description. Relative `input` paths resolve
/// against `base_dir`. See configs/ for complete examples.
inline ExperimentConfig parse_config(std::istream& in, const std::filesystem::path& base_dir = ".") {
  namespace pt = boost::property_tree;
  using detail::get;
  pt::ptree tree;
  try {
    pt::ini_parser::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }
  ExperimentConfig cfg;
  try {
    for (const auto& [section_name, section] : tree) {
      if (section_name == "experiment") {
        detail::check_keys(section, section_name,
                           {"name", "family", "sizes", "ambient_dimensions", "trials", "seed",
                            "workers", "include_self", "output_dir"});
        if (auto v = get(section, "name")) cfg.name = *v;
        if (auto v = get(section, "family")) cfg.family = parse_family(*v);
        if (auto v = get(section, "sizes")) {
          cfg.sizes.clear();
          for (const auto& s : detail::split_list(*v)) cfg.sizes.push_back(detail::parse_number<std::size_t>("sizes", s));
        }
        if (auto v = get(section, "ambient_dimensions")) {
          cfg.ambient_dimensions.clear();
          for (const auto& s : detail::split_list(*v)) {
            cfg.ambient_dimensions.push_back(detail::parse_number<std::size_t>("ambient_dimensions", s));
          }
        }
        if (auto v = get(section, "trials")) cfg.trials = detail::parse_number<std::size_t>("trials", *v);
        if (auto v = get(section, "seed")) cfg.seed = detail::parse_number<std::uint64_t>("seed", *v);
        if (auto v = get(section, "workers")) cfg.workers = detail::parse_number<std::size_t>("workers", *v);
        if (auto v = get(section, "include_self")) {
          if (*v != "true" && *v != "false") throw ConfigError("include_self must be true or false");
          cfg.include_self = *v == "true";
        }
        if (auto v = get(section, "output_dir")) cfg.output_dir = *v;
      } else if (section_name == "grid") {
        detail::check_keys(section, section_name, {"steps", "r_max", "quantile", "cap"});
        if (auto v = get(section, "steps")) cfg.grid.steps = detail::parse_number<std::size_t>("steps", *v);
        if (auto v = get(section, "r_max"); v && *v != "auto") {
          cfg.grid.r_max = detail::parse_number<double>("r_max", *v);
        }
        if (auto v = get(section, "quantile")) cfg.grid.quantile = detail::parse_number<double>("quantile", *v);
        if (auto v = get(section, "cap")) cfg.grid.cap = detail::parse_number<double>("cap", *v);
      } else if (section_name == "model") {
        detail::check_keys(section, section_name, {"dimension", "volume"});
        if (auto v = get(section, "dimension"); v && *v != "auto") {
          cfg.dimension = detail::parse_number<int>("dimension", *v);
        }
        if (auto v = get(section, "volume")) {
          if (*v == "analytic") {
            cfg.volume_rule = VolumeRule::Analytic;
          } else if (*v == "fit") {
            cfg.volume_rule = VolumeRule::Fit;
          } else {
            cfg.volume_rule = VolumeRule::Fixed;
            cfg.volume = detail::parse_number<double>("volume", *v);
          }
        }
      } else if (section_name == "distances") {
        detail::check_keys(section, section_name, {"method", "k_neighbors", "disconnected"});
        if (auto v = get(section, "method")) cfg.distances = detail::parse_distance_method(*v);
        if (auto v = get(section, "k_neighbors")) cfg.k_neighbors = detail::parse_number<std::size_t>("k_neighbors", *v);
        if (auto v = get(section, "disconnected")) cfg.disconnected = detail::parse_disconnected(*v);
      } else if (section_name.starts_with("column.")) {
        detail::check_keys(section, section_name,
                           {"variant", "noise", "scaling", "chi", "area", "lambda1", "lift",
                            "embed_dimension", "input", "distances"});
        ColumnSpec c;
        c.name = section_name.substr(7);
        if (c.name.empty()) throw ConfigError("column sections need a name: [column.<name>]");
        if (auto v = get(section, "variant")) c.variant = parse_variant(*v);
        if (auto v = get(section, "noise")) c.noise = detail::parse_number<double>("noise", *v);
        if (auto v = get(section, "scaling")) {
          if (*v == "none") c.scaling = ColumnScaling::None;
          else if (*v == "chi") c.scaling = ColumnScaling::Chi;
          else if (*v == "lambda1") c.scaling = ColumnScaling::Lambda1;
          else throw ConfigError("scaling must be none, chi or lambda1");
        }
        if (auto v = get(section, "chi")) c.chi = detail::parse_number<int>("chi", *v);
        if (auto v = get(section, "area")) c.area = detail::parse_number<double>("area", *v);
        if (auto v = get(section, "lambda1"); v && *v != "dimension") {
          c.lambda1 = detail::parse_number<double>("lambda1", *v);
        }
        if (auto v = get(section, "lift")) c.lift = detail::parse_number<std::size_t>("lift", *v);
        if (auto v = get(section, "embed_dimension")) {
          c.embed_dimension = detail::parse_number<std::size_t>("embed_dimension", *v);
        }
        if (auto v = get(section, "input")) {
          std::filesystem::path p(*v);
          c.input = p.is_absolute() ? p : base_dir / p;
        }
        if (auto v = get(section, "distances")) c.distances = detail::parse_distance_method(*v);
        cfg.columns.push_back(std::move(c));
      } else {
        throw ConfigError("unknown section [" + section_name + "]");
      }
    }
  } catch (const InvalidArgument& e) {
    throw ConfigError(e.what());
  }
  cfg.validate();
  return cfg;
}

inline ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path.string() + "'");
  return parse_config(in, path.parent_path().empty() ? std::filesystem::path(".") : path.parent_path());
}

/// Everything produced when scoring one embedding.
struct EmbeddingScore {
  ScoreReport report;
  DensityFunction theoretical;
  DensityFunction estimate;
  double volume = 0.0;
  bool volume_fitted = false;
};

/// Scores a point embedding by its own k-NN graph geodesics. R defaults to
/// the grid quantile rule, bounded by `grid.cap`; the model's volume is
/// fitted from small radii when absent.
inline EmbeddingScore score_embedding(const PointSample& points, const ManifoldModel& model,
                                      std::size_t k, const GridSettings& grid,
                                      const EstimatorOptions& opts = {},
                                      Disconnected policy = Disconnected::Error) {
  const auto dist = graph_geodesic_distances(points, k, opts.workers, policy);
  double r_max = grid.r_max.value_or(positive_distance_quantile(dist, grid.quantile));
  if (grid.cap) r_max = std::min(r_max, *grid.cap);
  const auto radii = build_radius_grid(r_max, grid.steps);
  const auto sorted = sort_rows(dist, opts.workers);
  double vol = 0.0;
  bool fitted = false;
  if (model.volume()) {
    vol = *model.volume();
  } else {
    vol = fit_volume(aggregated_mdf(sorted, radii, ManifoldModel(model.dimension()), opts),
                     model.dimension());
    fitted = true;
  }
  const ManifoldModel full(model.dimension(), vol, model.curvature());
  auto theo = theoretical_mdf(full, radii);
  auto est = aggregated_mdf(sorted, radii, full, opts);
  auto report = manifold_score(theo, est, sorted.size(), describe_scaling(full));
  return {std::move(report), std::move(theo), std::move(est), vol, fitted};
}

// ---------------------------------------------------------------------------
// Running
// ---------------------------------------------------------------------------

struct CellResult {
  std::size_t ambient_dimension = 0;
  std::size_t size = 0;
  std::size_t trial = 0;
  std::string column;
  std::uint64_t seed = 0;
  bool ok = false;
  std::string message;
  double score = 0.0;
  double error_counts = 0.0;
  double r_max = 0.0;
  double volume = 0.0;
  std::string scaling;
  std::optional<DensityFunction> theoretical;
  std::optional<DensityFunction> estimate;
};

struct SummaryRow {
  std::size_t ambient_dimension = 0;
  std::size_t size = 0;
  std::string column;
  double mean = 0.0;
  double sd = 0.0;
  std::size_t ok = 0;
  std::size_t failed = 0;
};

struct ExperimentResult {
  std::vector<CellResult> cells;
  std::vector<SummaryRow> summary;
  bool any_failed() const {
    for (const auto& c : cells) {
      if (!c.ok) return true;
    }
    return false;
  }
  const SummaryRow* find(std::size_t ambient_dimension, std::size_t size,
                         const std::string& column) const {
    for (const auto& r : summary) {
      if (r.ambient_dimension == ambient_dimension && r.size == size && r.column == column) return &r;
    }
    return nullptr;
  }
};

namespace detail {

struct PreparedSample {
  std::optional<SortedDistanceMatrix> sorted;
  double auto_r_max = 0.0;
  std::uint64_t seed = 0;
  std::string error;
};

inline std::uint64_t variant_seed(const ExperimentConfig& cfg, const ColumnSpec& c, std::size_t d,
                                  std::size_t m, std::size_t trial) {
  return derive_seed(cfg.seed, {static_cast<std::uint64_t>(d), static_cast<std::uint64_t>(m),
                                static_cast<std::uint64_t>(trial),
                                static_cast<std::uint64_t>(c.variant),
                                std::bit_cast<std::uint64_t>(c.noise)});
}

inline std::string sample_key(const ColumnSpec& c, DistanceMethod method) {
  std::string k = to_string(c.variant) + "|" + csv::format_double(c.noise) + "|" +
                  std::to_string(c.lift) + "|" + std::to_string(c.embed_dimension) + "|" +
                  (method == DistanceMethod::Exact ? "exact" : "graph");
  if (c.input) k += "|" + c.input->string();
  return k;
}

inline DistanceMatrix exact_distances(Family family, const PointSample& pts) {
  switch (family) {
    case Family::FlatTorus: return torus_distance_matrix(pts);
    case Family::Sphere:
    case Family::Hypersphere: return great_circle_distance_matrix(pts);
    case Family::KleinBottle: break;
  }
  throw InvalidArgument("exact distances are unavailable for " + to_string(family));
}

inline PreparedSample prepare(const ExperimentConfig& cfg, const ColumnSpec& c, std::size_t d,
                              std::size_t m, std::size_t trial) {
  PreparedSample out;
  out.seed = variant_seed(cfg, c, d, m, trial);
  try {
    std::optional<PointSample> pts;
    if (c.input) {
      pts = csv::read_point_sample(*c.input);
    } else {
      SamplerSpec spec{cfg.family, c.variant, m, out.seed, d, c.noise};
      pts = sample_points(spec);
    }
    if (c.lift) pts = lift_to_dimension(*pts, c.lift, derive_seed(out.seed, {c.lift}));
    if (c.embed_dimension) pts = pca_embed(*pts, c.embed_dimension);
    const auto method = cfg.distance_method(c);
    const DistanceMatrix dist = method == DistanceMethod::Exact
                                    ? exact_distances(cfg.family, *pts)
                                    : graph_geodesic_distances(*pts, cfg.k_neighbors, 1, cfg.disconnected);
    out.auto_r_max = positive_distance_quantile(dist, cfg.grid.quantile);
    out.sorted = sort_rows(dist);
  } catch (const std::exception& e) {
    out.error = e.what();
  }
  return out;
}

inline CellResult score_cell(const ExperimentConfig& cfg, const ColumnSpec& c,
                             const PreparedSample& prep, std::size_t d, std::size_t m,
                             std::size_t trial) {
  CellResult cell;
  cell.ambient_dimension = d;
  cell.size = m;
  cell.trial = trial;
  cell.column = c.name;
  cell.seed = prep.seed;
  if (!prep.sorted) {
    cell.message = prep.error;
    return cell;
  }
  try {
    const auto& s = *prep.sorted;
    double r_max = cfg.grid.r_max.value_or(prep.auto_r_max);
    if (cfg.grid.cap) r_max = std::min(r_max, *cfg.grid.cap);
    cell.r_max = r_max;
    const RadiusGrid grid = build_radius_grid(r_max, cfg.grid.steps);
    const int n = cfg.dimension > 0 ? cfg.dimension : intrinsic_dimension(cfg.family, d);
    Curvature curv = curvature::Flat{};
    if (c.scaling == ColumnScaling::Chi) {
      if (n != 2) throw InvalidArgument("chi scaling requires a 2-dimensional model");
      curv = curvature::Surface{c.chi, c.area};
    } else if (c.scaling == ColumnScaling::Lambda1) {
      curv = curvature::Hypersurface{c.lambda1.value_or(static_cast<double>(n))};
    }
    const EstimatorOptions opts{cfg.include_self, 1};
    double vol = 0.0;
    switch (cfg.volume_rule) {
      case VolumeRule::Analytic: vol = analytic_volume(cfg.family, d); break;
      case VolumeRule::Fixed: vol = cfg.volume; break;
      case VolumeRule::Fit:
        vol = fit_volume(aggregated_mdf(s, grid, ManifoldModel(n), opts), n);
        break;
    }
    cell.volume = vol;
    const ManifoldModel model(n, vol, curv);
    auto theo = theoretical_mdf(model, grid);
    auto est = aggregated_mdf(s, grid, model, opts);
    const auto report = manifold_score(theo, est, s.size(), describe_scaling(model));
    cell.score = report.score;
    cell.error_counts = report.error_counts;
    cell.scaling = report.scaling;
    cell.theoretical = std::move(theo);
    cell.estimate = std::move(est);
    cell.ok = true;
  } catch (const std::exception& e) {
    cell.message = e.what();
  }
  return cell;
}

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) {
    if (ch == '"') q += '"';
    q += ch == '\n' ? ' ' : ch;
  }
  return q + "\"";
}

}  // namespace detail

/// Runs every (ambient dimension, size, trial) cell, in parallel over
/// `workers` threads. Randomness derives only from (seed, dimension, size,
/// trial, variant), so the result does not depend on the worker count.
inline ExperimentResult run_experiment(const ExperimentConfig& cfg,
                                       std::optional<std::size_t> workers = std::nullopt) {
  cfg.validate();
  struct Task {
    std::size_t d, m, trial;
  };
  std::vector<Task> tasks;
  for (auto d : cfg.ambient_dimensions) {
    for (auto m : cfg.sizes) {
      for (std::size_t t = 0; t < cfg.trials; ++t) tasks.push_back({d, m, t});
    }
  }
  std::vector<std::vector<CellResult>> per_task(tasks.size());
  parallel_for(tasks.size(), workers.value_or(cfg.workers), [&](std::size_t i) {
    const auto [d, m, trial] = tasks[i];
    std::map<std::string, detail::PreparedSample> cache;
    for (const auto& c : cfg.columns) {
      const auto key = detail::sample_key(c, cfg.distance_method(c));
      auto it = cache.find(key);
      if (it == cache.end()) it = cache.emplace(key, detail::prepare(cfg, c, d, m, trial)).first;
      per_task[i].push_back(detail::score_cell(cfg, c, it->second, d, m, trial));
    }
  });

  ExperimentResult result;
  for (auto& v : per_task) {
    for (auto& c : v) result.cells.push_back(std::move(c));
  }
  for (auto d : cfg.ambient_dimensions) {
    for (auto m : cfg.sizes) {
      for (const auto& col : cfg.columns) {
        SummaryRow row{d, m, col.name};
        std::vector<double> scores;
        for (const auto& c : result.cells) {
          if (c.ambient_dimension != d || c.size != m || c.column != col.name) continue;
          if (c.ok) scores.push_back(c.score);
          else ++row.failed;
        }
        row.ok = scores.size();
        if (!scores.empty()) {
          double sum = 0.0;
          for (double s : scores) sum += s;
          row.mean = sum / static_cast<double>(scores.size());
          if (scores.size() > 1) {
            double ss = 0.0;
            for (double s : scores) ss += (s - row.mean) * (s - row.mean);
            row.sd = std::sqrt(ss / static_cast<double>(scores.size() - 1));
          }
        } else {
          row.mean = std::nan("");
          row.sd = std::nan("");
        }
        result.summary.push_back(row);
      }
    }
  }
  return result;
}

/// Writes table.csv (mean ± sd per cell), summary.csv, scores.csv and the
/// per-trial K-function curves under `dir`.
inline void write_experiment(const ExperimentConfig& cfg, const ExperimentResult& result,
                             const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir / "curves");
  {
    auto out = csv::open_output(dir / "table.csv");
    out << "ambient_dimension,size";
    for (const auto& c : cfg.columns) out << ',' << c.name;
    out << '\n';
    for (auto d : cfg.ambient_dimensions) {
      for (auto m : cfg.sizes) {
        out << d << ',' << m;
        for (const auto& c : cfg.columns) {
          const auto* row = result.find(d, m, c.name);
          out << ',';
          if (row && row->ok > 0) {
            out << csv::format_fixed(row->mean, 4) << " ± " << csv::format_fixed(row->sd, 4);
          } else {
            out << "failed";
          }
        }
        out << '\n';
      }
    }
  }
  {
    auto out = csv::open_output(dir / "summary.csv");
    out << "ambient_dimension,size,column,mean,sd,trials_ok,trials_failed\n";
    for (const auto& r : result.summary) {
      out << r.ambient_dimension << ',' << r.size << ',' << detail::csv_field(r.column) << ','
          << csv::format_double(r.mean) << ',' << csv::format_double(r.sd) << ',' << r.ok << ','
          << r.failed << '\n';
    }
  }
  {
    auto out = csv::open_output(dir / "scores.csv");
    out << "ambient_dimension,size,trial,column,seed,status,score,error_counts,r_max,volume,scaling,message\n";
    for (const auto& c : result.cells) {
      out << c.ambient_dimension << ',' << c.size << ',' << c.trial << ','
          << detail::csv_field(c.column) << ',' << c.seed << ',' << (c.ok ? "ok" : "failed") << ','
          << (c.ok ? csv::format_double(c.score) : "") << ','
          << (c.ok ? csv::format_double(c.error_counts) : "") << ','
          << (c.ok ? csv::format_double(c.r_max) : "") << ','
          << (c.ok ? csv::format_double(c.volume) : "") << ',' << detail::csv_field(c.scaling)
          << ',' << detail::csv_field(c.message) << '\n';
    }
  }
  for (const auto& c : result.cells) {
    if (!c.ok) continue;
    auto out = csv::open_output(dir / "curves" /
                                ("d" + std::to_string(c.ambient_dimension) + "_m" +
                                 std::to_string(c.size) + "_t" + std::to_string(c.trial) + "_" +
                                 c.column + ".csv"));
    csv::write_function_pair(out, *c.theoretical, *c.estimate);
  }
}

}  // namespace mdf
