#pragma once

// Repeated-draw experiments: for every draw, factorize the Laplacian once up
// to the largest budget while snapshotting Û at each grid point, evaluate all
// per-mode errors, then take elementwise medians over draws.

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "fgft/csv.hpp"
#include "fgft/error.hpp"
#include "fgft/graph.hpp"
#include "fgft/jacobi.hpp"
#include "fgft/matrix.hpp"
#include "fgft/spectral_errors.hpp"
#include "fgft/transform.hpp"
#include "json.hpp"

namespace fgft {

inline constexpr const char* kVersion = "1.0.0";

struct ExperimentConfig {
  ModelKind model = ModelKind::erdos_renyi;
  std::size_t n = 128;
  std::optional<double> p;        // erdos_renyi; defaults to c/(n−1)
  std::size_t m = 8;              // sbm
  double c = 10.0;                // erdos_renyi default degree, sbm degree
  std::optional<double> epsilon;  // sbm; defaults to ε_c/10
  double tau = 0.161;             // sensor
  std::size_t draws = 100;
  std::vector<std::size_t> j_grid;  // empty: default_j_grid(n)
  std::uint64_t seed = 0;
  double delta = kDefaultDensityDelta;
  std::string output_dir;

  double er_probability() const { return p.value_or(c / static_cast<double>(n - 1)); }
  double sbm_epsilon() const { return epsilon.value_or(sbm_epsilon_critical(c, m) / 10.0); }
};

/// 0 followed by 25 log-spaced budgets from 1 to n(n−1)/4. Points that round
/// onto their predecessor are bumped by one so the grid stays strictly increasing.
inline std::vector<std::size_t> default_j_grid(std::size_t n) {
  const double top = static_cast<double>(n * (n - 1) / 4);
  std::vector<std::size_t> grid{0};
  if (top < 1.0) return grid;
  constexpr int kPoints = 25;
  for (int i = 0; i < kPoints; ++i) {
    const double v = std::exp(std::log(top) * i / (kPoints - 1));
    const auto j = static_cast<std::size_t>(std::llround(v));
    const std::size_t next = std::max(j, grid.back() + 1);
    if (next > static_cast<std::size_t>(top)) break;
    grid.push_back(next);
  }
  return grid;
}

/// Validated snapshot points for a single factorization pass.
struct SnapshotSchedule {
  std::vector<std::size_t> points;
  std::size_t j_max = 0;
};

inline SnapshotSchedule snapshot_schedule(std::size_t j_max, std::vector<std::size_t> grid) {
  require(!grid.empty(), "snapshot schedule: empty J grid");
  for (std::size_t i = 1; i < grid.size(); ++i)
    require(grid[i] > grid[i - 1], "snapshot schedule: J grid must be strictly increasing");
  require(grid.back() <= j_max, "snapshot schedule: J grid exceeds the rotation budget");
  return {std::move(grid), j_max};
}

inline void validate(const ExperimentConfig& cfg) {
  require(cfg.n >= 2, "experiment: need n >= 2");
  require(cfg.draws >= 1, "experiment: need at least one draw");
  require(cfg.delta > 0.0, "experiment: delta must be positive");
  if (!cfg.j_grid.empty()) {
    require(cfg.j_grid.front() == 0, "experiment: J grid must start at 0");
    snapshot_schedule(cfg.j_grid.back(), cfg.j_grid);
  }
  switch (cfg.model) {
    case ModelKind::erdos_renyi: {
      const double p = cfg.er_probability();
      require(p >= 0.0 && p <= 1.0, "experiment: edge probability outside [0, 1]");
      break;
    }
    case ModelKind::sbm:
      sbm_probabilities(cfg.n, cfg.m, cfg.c, cfg.sbm_epsilon());
      break;
    case ModelKind::sensor:
      require(cfg.tau > 0.0, "experiment: tau must be positive");
      break;
    case ModelKind::custom:
      throw InvalidArgument("experiment: model must be erdos_renyi, sbm or sensor");
  }
}

inline std::vector<std::size_t> effective_grid(const ExperimentConfig& cfg) {
  return cfg.j_grid.empty() ? default_j_grid(cfg.n) : cfg.j_grid;
}

inline Graph generate_graph(const ExperimentConfig& cfg, std::uint64_t draw) {
  const RngSpec rng{cfg.seed, draw};
  switch (cfg.model) {
    case ModelKind::erdos_renyi: return erdos_renyi(cfg.n, cfg.er_probability(), rng);
    case ModelKind::sbm: return sbm(cfg.n, cfg.m, cfg.c, cfg.sbm_epsilon(), rng);
    case ModelKind::sensor: return random_sensor(cfg.n, cfg.tau, rng);
    case ModelKind::custom: break;
  }
  throw InvalidArgument("experiment: unsupported model");
}

inline constexpr std::array<ErrorKind, 4> kAllErrorKinds = {
    ErrorKind::err1, ErrorKind::err2, ErrorKind::err1_norm, ErrorKind::err2_norm};

inline std::size_t kind_index(ErrorKind kind) { return static_cast<std::size_t>(kind); }

struct DrawSummary {
  double mean_degree = 0.0;
  std::size_t edges = 0;
  std::size_t components = 0;
};

/// Everything measured on one random graph.
struct DrawResult {
  std::array<ErrorSurface, 4> surfaces;  // indexed by kind_index
  std::vector<double> lambdas;
  std::vector<std::size_t> density;
  std::vector<double> baseline_err1;
  std::vector<double> baseline_err2;
  DrawSummary summary;
};

/// Error surfaces for a fixed graph. One factorization pass; Û is read off
/// the accumulated rotation product at each grid point.
inline DrawResult analyze_graph(const Graph& g, const std::vector<std::size_t>& grid, double delta) {
  const auto schedule = snapshot_schedule(grid.empty() ? 0 : grid.back(), grid);
  const std::size_t n = g.size();
  const Laplacian lap(g);
  const Matrix& l = lap.matrix();
  const EigenDecomposition eig = full_jacobi(lap);
  const auto sigma = degree_permutation(g);

  DrawResult out;
  out.lambdas = eig.eigenvalues;
  out.density = eigenvalue_density(eig.eigenvalues, delta);
  out.baseline_err1.resize(n);
  out.baseline_err2.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    out.baseline_err1[k] = err1_baseline(eig, sigma, k);
    out.baseline_err2[k] = err2_baseline(l, eig.eigenvalues, sigma, k);
  }
  out.summary = {g.mean_degree(), g.edge_count(), g.component_count()};

  ErrorSurface e1{ErrorKind::err1, schedule.points, Matrix(n, schedule.points.size()),
                  out.baseline_err1, out.density, delta};
  ErrorSurface e2{ErrorKind::err2, schedule.points, Matrix(n, schedule.points.size()),
                  out.baseline_err2, out.density, delta};

  JacobiDiagonalizer jd(l, /*accumulate=*/true);
  bool diagonal = false;
  for (std::size_t col = 0; col < schedule.points.size(); ++col) {
    while (!diagonal && jd.rotations().size() < schedule.points[col])
      diagonal = !jd.step().has_value();
    const Matrix u_hat = permute_columns(jd.product(), jd.frequency_order());
    for (std::size_t k = 0; k < n; ++k) {
      const auto column = u_hat.column(k);
      e1.values(k, col) = err1(eig, orient(column, eig.eigenvectors.column(k)), k);
      e2.values(k, col) = err2(eig.eigenvalues, l, column, k);
    }
  }
  out.surfaces[kind_index(ErrorKind::err1_norm)] = normalize_surface(e1);
  out.surfaces[kind_index(ErrorKind::err2_norm)] = normalize_surface(e2);
  out.surfaces[kind_index(ErrorKind::err1)] = std::move(e1);
  out.surfaces[kind_index(ErrorKind::err2)] = std::move(e2);
  return out;
}

/// Lower-middle order statistic (⌈d/2⌉-th smallest) of the defined values.
/// NaN when none is defined.
inline double lower_median(std::vector<double> values) {
  std::erase_if(values, [](double v) { return is_undefined(v); });
  if (values.empty()) return kUndefined;
  const std::size_t idx = (values.size() + 1) / 2 - 1;
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(idx), values.end());
  return values[idx];
}

struct ExperimentResult {
  ExperimentConfig config;
  std::vector<std::size_t> j_grid;
  std::array<ErrorSurface, 4> surfaces;           // medians, indexed by kind_index
  std::array<std::size_t, 4> undefined_counts{};  // sentinel entries skipped per kind
  std::vector<std::size_t> density;               // median f(k)
  std::vector<double> lambdas;                    // median λ_k
  std::vector<double> baseline_err1;              // median err1(k, 0)
  std::vector<double> baseline_err2;              // median err2(k, 0)
  std::vector<DrawSummary> draws;

  const ErrorSurface& surface(ErrorKind kind) const { return surfaces[kind_index(kind)]; }
};

/// Elementwise medians over draws.
inline ExperimentResult aggregate(const ExperimentConfig& cfg, const std::vector<std::size_t>& grid,
                                  const std::vector<DrawResult>& draws) {
  require(!draws.empty(), "aggregate: no draws");
  const std::size_t n = draws.front().lambdas.size();
  const std::size_t d = draws.size();
  ExperimentResult res;
  res.config = cfg;
  res.j_grid = grid;
  std::vector<double> buf(d);
  auto median_of = [&](auto&& get) {
    for (std::size_t i = 0; i < d; ++i) buf[i] = get(draws[i]);
    return lower_median(buf);
  };
  res.lambdas.resize(n);
  res.baseline_err1.resize(n);
  res.baseline_err2.resize(n);
  res.density.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    res.lambdas[k] = median_of([&](const DrawResult& r) { return r.lambdas[k]; });
    res.baseline_err1[k] = median_of([&](const DrawResult& r) { return r.baseline_err1[k]; });
    res.baseline_err2[k] = median_of([&](const DrawResult& r) { return r.baseline_err2[k]; });
    res.density[k] = static_cast<std::size_t>(
        median_of([&](const DrawResult& r) { return static_cast<double>(r.density[k]); }));
  }
  for (ErrorKind kind : kAllErrorKinds) {
    const std::size_t ki = kind_index(kind);
    ErrorSurface s;
    s.kind = kind;
    s.j_grid = grid;
    s.values = Matrix(n, grid.size());
    const bool first = kind == ErrorKind::err1 || kind == ErrorKind::err1_norm;
    s.baseline = first ? res.baseline_err1 : res.baseline_err2;
    s.density = res.density;
    s.delta = cfg.delta;
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t j = 0; j < grid.size(); ++j) {
        for (std::size_t i = 0; i < d; ++i) {
          buf[i] = draws[i].surfaces[ki].values(k, j);
          if (is_undefined(buf[i])) ++res.undefined_counts[ki];
        }
        s.values(k, j) = lower_median(buf);
      }
    res.surfaces[ki] = std::move(s);
  }
  res.draws.reserve(d);
  for (const auto& r : draws) res.draws.push_back(r.summary);
  return res;
}

/// FGFT_THREADS if set and positive, else the hardware concurrency.
inline std::size_t worker_count(std::size_t jobs) {
  std::size_t threads = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("FGFT_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) threads = static_cast<std::size_t>(v);
  }
  return std::max<std::size_t>(1, std::min(threads, jobs));
}

inline ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  validate(cfg);
  const auto grid = effective_grid(cfg);
  std::vector<DrawResult> results(cfg.draws);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t d; (d = next.fetch_add(1)) < cfg.draws;) {
      try {
        results[d] = analyze_graph(generate_graph(cfg, d), grid, cfg.delta);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = cfg.draws;
      }
    }
  };
  const std::size_t threads = worker_count(cfg.draws);
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
  return aggregate(cfg, grid, results);
}

// ---------------------------------------------------------------------------
// Output

inline nlohmann::json config_to_json(const ExperimentConfig& cfg) {
  nlohmann::json j = {
      {"model", std::string(to_string(cfg.model))},
      {"n", cfg.n},
      {"draws", cfg.draws},
      {"j_grid", effective_grid(cfg)},
      {"seed", cfg.seed},
      {"delta", cfg.delta},
      {"output_dir", cfg.output_dir},
  };
  switch (cfg.model) {
    case ModelKind::erdos_renyi: j["p"] = cfg.er_probability(); break;
    case ModelKind::sbm:
      j["m"] = cfg.m;
      j["c"] = cfg.c;
      j["epsilon"] = cfg.sbm_epsilon();
      break;
    case ModelKind::sensor: j["tau"] = cfg.tau; break;
    case ModelKind::custom: break;
  }
  return j;
}

/// Inverse of config_to_json; missing fields keep their defaults.
inline ExperimentConfig config_from_json(const nlohmann::json& j) {
  try {
    ExperimentConfig cfg;
    if (j.contains("model")) cfg.model = parse_model_kind(j.at("model").get<std::string>());
    if (j.contains("n")) cfg.n = j.at("n").get<std::size_t>();
    if (j.contains("p")) cfg.p = j.at("p").get<double>();
    if (j.contains("m")) cfg.m = j.at("m").get<std::size_t>();
    if (j.contains("c")) cfg.c = j.at("c").get<double>();
    if (j.contains("epsilon")) cfg.epsilon = j.at("epsilon").get<double>();
    if (j.contains("tau")) cfg.tau = j.at("tau").get<double>();
    if (j.contains("draws")) cfg.draws = j.at("draws").get<std::size_t>();
    if (j.contains("j_grid")) cfg.j_grid = j.at("j_grid").get<std::vector<std::size_t>>();
    if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("delta")) cfg.delta = j.at("delta").get<double>();
    if (j.contains("output_dir")) cfg.output_dir = j.at("output_dir").get<std::string>();
    return cfg;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("experiment config: ") + e.what());
  }
}

/// Heatmap CSV: header "k\J,<J1>,<J2>,…", one row per mode (1-based k).
inline void write_surface_csv(std::ostream& os, const ErrorSurface& s) {
  os << "k\\J";
  for (std::size_t j : s.j_grid) os << ',' << j;
  os << '\n';
  for (std::size_t k = 0; k < s.modes(); ++k) {
    os << (k + 1);
    for (std::size_t j = 0; j < s.values.cols(); ++j) os << ',' << format_real(s.values(k, j));
    os << '\n';
  }
}

namespace detail {

inline std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open '" + path.string() + "' for writing");
  return os;
}

inline void write_gnuplot(const std::filesystem::path& dir) {
  auto os = open_output(dir / "plot.gp");
  os << "set datafile separator ','\n"
        "set terminal pngcairo size 1400,1000\n"
        "set xlabel 'J index'\nset ylabel 'k'\nset view map\n";
  for (ErrorKind kind : kAllErrorKinds) {
    const std::string name(to_string(kind));
    os << "set output '" << name << ".png'\n"
       << "set title '" << name << "'\n"
       << (name.starts_with("err2") ? "set logscale cb\n" : "unset logscale cb\n")
       << "plot '" << name << ".csv' matrix rowheaders columnheaders using 1:2:3 with image notitle\n";
  }
  os << "set output 'density.png'\nset title 'eigenvalue density'\n"
        "plot 'density.csv' using 1:3 with lines notitle\n";
}

}  // namespace detail

/// Writes config.json, one CSV per error kind, density.csv, baselines.csv and
/// summary.json (plus plot.gp when asked) into `dir`.
inline void write_result(const std::filesystem::path& dir, const ExperimentResult& res,
                         bool gnuplot = false, const nlohmann::json& extra = {}) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create '" + dir.string() + "': " + ec.message());

  detail::open_output(dir / "config.json") << config_to_json(res.config).dump(2) << '\n';
  for (ErrorKind kind : kAllErrorKinds) {
    auto os = detail::open_output(dir / (std::string(to_string(kind)) + ".csv"));
    write_surface_csv(os, res.surface(kind));
  }
  {
    auto os = detail::open_output(dir / "density.csv");
    os << "k,lambda,density\n";
    for (std::size_t k = 0; k < res.density.size(); ++k)
      os << (k + 1) << ',' << format_real(res.lambdas[k]) << ',' << res.density[k] << '\n';
  }
  {
    auto os = detail::open_output(dir / "baselines.csv");
    os << "k,err1_baseline,err2_baseline\n";
    for (std::size_t k = 0; k < res.baseline_err1.size(); ++k)
      os << (k + 1) << ',' << format_real(res.baseline_err1[k]) << ','
         << format_real(res.baseline_err2[k]) << '\n';
  }
  nlohmann::json draws = nlohmann::json::array();
  for (const auto& d : res.draws)
    draws.push_back({{"mean_degree", d.mean_degree}, {"edges", d.edges}, {"components", d.components}});
  nlohmann::json undefined = nlohmann::json::object();
  for (ErrorKind kind : kAllErrorKinds)
    undefined[std::string(to_string(kind))] = res.undefined_counts[kind_index(kind)];
  nlohmann::json summary = {
      {"provenance", {{"version", kVersion}, {"config", config_to_json(res.config)}}},
      {"undefined_entries", undefined},
      {"draws", draws},
  };
  if (!extra.is_null()) summary["extra"] = extra;
  detail::open_output(dir / "summary.json") << summary.dump(2) << '\n';
  if (gnuplot) detail::write_gnuplot(dir);
}

// ---------------------------------------------------------------------------
// Figure presets

struct Preset {
  std::string name;
  std::vector<ModelKind> models;
  std::string primary_output;  // file holding the figure's quantity
};

inline std::vector<Preset> presets() {
  using M = ModelKind;
  return {
      {"fig2a", {M::erdos_renyi}, "err1.csv"},
      {"fig2b", {M::sensor}, "err1.csv"},
      {"fig2c", {M::sbm}, "err1.csv"},
      {"fig3a", {M::erdos_renyi}, "err1_norm.csv"},
      {"fig3b", {M::sensor}, "err1_norm.csv"},
      {"fig3c", {M::sbm}, "err1_norm.csv"},
      {"fig4", {M::erdos_renyi, M::sensor, M::sbm}, "baselines.csv"},
      {"fig5a", {M::erdos_renyi}, "err2.csv"},
      {"fig5b", {M::sensor}, "err2.csv"},
      {"fig5c", {M::sbm}, "err2.csv"},
      {"fig5d", {M::erdos_renyi}, "err2_norm.csv"},
      {"fig5e", {M::sensor}, "err2_norm.csv"},
      {"fig5f", {M::sbm}, "err2_norm.csv"},
  };
}

inline const Preset& find_preset(std::string_view name) {
  static const auto all = presets();
  for (const auto& p : all)
    if (p.name == name) return p;
  throw InvalidArgument("unknown preset '" + std::string(name) + "'");
}

/// Preset configuration for one model: n = 128, average degree 10.
inline ExperimentConfig preset_config(ModelKind model, std::size_t draws, std::uint64_t seed) {
  ExperimentConfig cfg;
  cfg.model = model;
  cfg.n = 128;
  cfg.m = 8;
  cfg.c = 10.0;
  cfg.tau = 0.161;
  cfg.draws = draws;
  cfg.seed = seed;
  return cfg;
}

/// Runs a preset; multi-model presets write one subdirectory per model.
inline void run_preset(const Preset& preset, std::size_t draws, std::uint64_t seed,
                       const std::filesystem::path& out, bool gnuplot = false) {
  for (ModelKind model : preset.models) {
    ExperimentConfig cfg = preset_config(model, draws, seed);
    const auto dir = preset.models.size() == 1 ? out : out / std::string(to_string(model));
    cfg.output_dir = dir.string();
    const auto res = run_experiment(cfg);
    write_result(dir, res, gnuplot,
                 {{"preset", preset.name}, {"primary_output", preset.primary_output}});
  }
}

}  // namespace fgft
