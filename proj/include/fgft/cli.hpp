#pragma once

// Command-line front end. Exit codes: 0 success, 1 usage error,
// 2 numerical failure, 3 I/O error.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fgft/experiment.hpp"
#include "fgft/graph.hpp"
#include "fgft/graph_io.hpp"
#include "fgft/jacobi.hpp"
#include "fgft/spectral_errors.hpp"
#include "fgft/transform.hpp"
#include "json.hpp"

namespace fgft {

enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitNumerical = 2, kExitIo = 3 };

namespace cli_detail {

inline std::ifstream open_in(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open '" + path + "'");
  return is;
}

// Writes to `path`, or to `fallback` when the path is empty.
template <typename Fn>
void emit(const std::string& path, std::ostream& fallback, Fn&& write) {
  if (path.empty()) {
    write(fallback);
    return;
  }
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open '" + path + "' for writing");
  write(os);
  if (!os) throw IoError("failed writing '" + path + "'");
}

struct ModelFlags {
  std::string model = "erdos_renyi";
  std::size_t n = 128;
  std::optional<double> p;
  std::size_t m = 8;
  double c = 10.0;
  std::optional<double> epsilon;
  double tau = 0.161;

  void add_to(CLI::App& app) {
    app.add_option("--model", model, "erdos_renyi | sbm | sensor")
        ->check(CLI::IsMember({"erdos_renyi", "sbm", "sensor"}));
    app.add_option("--n", n, "vertex count");
    app.add_option("--p", p, "Erdos-Renyi edge probability (default c/(n-1))");
    app.add_option("--m", m, "SBM community count");
    app.add_option("--c", c, "target average degree");
    app.add_option("--epsilon", epsilon, "SBM ratio q2/q1 (default eps_c/10)");
    app.add_option("--tau", tau, "sensor distance threshold");
  }

  void apply_to(ExperimentConfig& cfg) const {
    cfg.model = parse_model_kind(model);
    cfg.n = n;
    cfg.p = p;
    cfg.m = m;
    cfg.c = c;
    cfg.epsilon = epsilon;
    cfg.tau = tau;
  }
};

inline std::vector<std::size_t> parse_grid(const std::string& text) {
  std::vector<std::size_t> grid;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) {
    try {
      std::size_t pos = 0;
      const long long v = std::stoll(item, &pos);
      if (pos != item.size() || v < 0) throw std::invalid_argument(item);
      grid.push_back(static_cast<std::size_t>(v));
    } catch (const std::exception&) {
      throw InvalidArgument("bad J grid entry '" + item + "'");
    }
  }
  return grid;
}

}  // namespace cli_detail

inline int run_cli(int argc, const char* const* argv, std::ostream& out = std::cout,
                   std::ostream& err = std::cerr) {
  using namespace cli_detail;
  CLI::App app{"Approximate fast graph Fourier transforms via truncated Jacobi", "fgft"};
  app.require_subcommand(1);

  // generate
  auto* gen = app.add_subcommand("generate", "draw a random graph and write it as an edge list");
  ModelFlags gen_model;
  gen_model.add_to(*gen);
  std::uint64_t gen_seed = 0, gen_stream = 0;
  std::string gen_out;
  gen->add_option("--seed", gen_seed, "base seed");
  gen->add_option("--stream", gen_stream, "stream index");
  gen->add_option("--out", gen_out, "graph file (metadata goes to <file>.json)")->required();

  // factorize
  auto* fac = app.add_subcommand("factorize", "truncated Jacobi factorization of a graph Laplacian");
  std::string fac_graph, fac_out;
  std::size_t fac_j = 0;
  std::optional<double> fac_tol;
  fac->add_option("graph", fac_graph, "edge-list file")->required();
  fac->add_option("--J", fac_j, "rotation budget")->required();
  fac->add_option("--tol", fac_tol, "also stop once the off-diagonal mass is below tol*|L|_F");
  fac->add_option("--out", fac_out, "transform file (default: stdout)");

  // apply
  auto* apl = app.add_subcommand("apply", "apply a transform (or its inverse) to a signal");
  std::string apl_transform, apl_signal, apl_out;
  bool apl_inverse = false;
  apl->add_option("transform", apl_transform, "transform file")->required();
  apl->add_option("signal", apl_signal, "signal CSV")->required();
  apl->add_flag("--inverse", apl_inverse, "synthesize instead of analyze");
  apl->add_option("--out", apl_out, "output signal CSV (default: stdout)");

  // eig
  auto* eig_cmd = app.add_subcommand("eig", "exact eigendecomposition of a graph Laplacian");
  std::string eig_graph, eig_out;
  double eig_tol = kDefaultEigenTolerance;
  eig_cmd->add_option("graph", eig_graph, "edge-list file")->required();
  std::optional<std::size_t> eig_cap;
  eig_cmd->add_option("--tol", eig_tol, "relative off-diagonal tolerance");
  eig_cmd->add_option("--max-rotations", eig_cap, "rotation cap before reporting non-convergence");
  eig_cmd->add_option("--out", eig_out, "CSV (default: stdout)");

  // analyze
  auto* ana = app.add_subcommand("analyze", "per-mode errors of a transform against the exact basis");
  std::string ana_graph, ana_transform, ana_out;
  double ana_delta = kDefaultDensityDelta;
  ana->add_option("graph", ana_graph, "edge-list file")->required();
  ana->add_option("transform", ana_transform, "transform file")->required();
  ana->add_option("--delta", ana_delta, "eigenvalue density half-width");
  ana->add_option("--out", ana_out, "CSV (default: stdout)");

  // experiment
  auto* exp = app.add_subcommand("experiment", "median error surfaces over random draws");
  std::string exp_config, exp_grid, exp_out;
  ModelFlags exp_model;
  exp_model.add_to(*exp);
  std::size_t exp_draws = 100;
  std::uint64_t exp_seed = 0;
  double exp_delta = kDefaultDensityDelta;
  bool exp_gnuplot = false;
  exp->add_option("--config", exp_config, "JSON config; explicit flags override it");
  exp->add_option("--draws", exp_draws, "number of random draws");
  exp->add_option("--j-grid", exp_grid, "comma-separated rotation budgets starting at 0");
  exp->add_option("--seed", exp_seed, "base seed");
  exp->add_option("--delta", exp_delta, "eigenvalue density half-width");
  exp->add_option("--out", exp_out, "output directory");
  exp->add_flag("--gnuplot", exp_gnuplot, "also write plot.gp");

  // reproduce
  auto* rep = app.add_subcommand("reproduce", "run a named figure preset");
  std::string rep_preset, rep_out;
  std::size_t rep_draws = 100;
  std::uint64_t rep_seed = 0;
  bool rep_gnuplot = false;
  std::vector<std::string> preset_names;
  for (const auto& p : presets()) preset_names.push_back(p.name);
  rep->add_option("preset", rep_preset, "figure preset")->required()->check(CLI::IsMember(preset_names));
  rep->add_option("--draws", rep_draws, "number of random draws");
  rep->add_option("--seed", rep_seed, "base seed");
  rep->add_option("--out", rep_out, "output directory")->required();
  rep->add_flag("--gnuplot", rep_gnuplot, "also write plot.gp");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*gen) {
      ExperimentConfig cfg;
      gen_model.apply_to(cfg);
      cfg.seed = gen_seed;
      validate(cfg);
      const Graph g = generate_graph(cfg, gen_stream);
      save_graph(gen_out, g);
      err << "wrote " << gen_out << ": n=" << g.size() << " edges=" << g.edge_count()
          << " components=" << g.component_count() << '\n';
    } else if (*fac) {
      const Graph g = load_graph(fac_graph);
      const auto t = truncated_jacobi(laplacian(g), fac_j, fac_tol);
      emit(fac_out, out, [&](std::ostream& os) { write_transform(os, t); });
    } else if (*apl) {
      auto ts = open_in(apl_transform);
      const auto t = read_transform(ts);
      auto ss = open_in(apl_signal);
      const auto x = read_signal(ss);
      const auto y = apl_inverse ? synthesize(t, x) : analyze(t, x);
      emit(apl_out, out, [&](std::ostream& os) { write_signal(os, y); });
    } else if (*eig_cmd) {
      const Graph g = load_graph(eig_graph);
      const auto e = full_jacobi(laplacian(g), eig_tol, eig_cap);
      emit(eig_out, out, [&](std::ostream& os) {
        os << "k,lambda";
        for (std::size_t i = 0; i < e.size(); ++i) os << ",u" << (i + 1);
        os << '\n';
        for (std::size_t k = 0; k < e.size(); ++k) {
          os << (k + 1) << ',' << format_real(e.eigenvalues[k]);
          for (std::size_t i = 0; i < e.size(); ++i) os << ',' << format_real(e.eigenvectors(i, k));
          os << '\n';
        }
      });
    } else if (*ana) {
      const Graph g = load_graph(ana_graph);
      auto ts = open_in(ana_transform);
      const auto t = read_transform(ts);
      require(t.size() == g.size(), "analyze: transform and graph sizes differ");
      const Laplacian lap(g);
      const auto e = full_jacobi(lap);
      const auto sigma = degree_permutation(g);
      const auto density = eigenvalue_density(e.eigenvalues, ana_delta);
      const Matrix u_hat = orient_columns(to_dense(t), e.eigenvectors);
      emit(ana_out, out, [&](std::ostream& os) {
        os << "k,lambda,lambda_hat,err1,err2,err1_norm,err2_norm,density\n";
        for (std::size_t k = 0; k < g.size(); ++k) {
          const auto col = u_hat.column(k);
          const double e1 = err1(e, col, k);
          const double e2 = err2(e.eigenvalues, lap.matrix(), col, k);
          const double b1 = err1_baseline(e, sigma, k);
          const double b2 = err2_baseline(lap.matrix(), e.eigenvalues, sigma, k);
          auto ratio = [](double v, double b) {
            return b * b < kBaselineFloor ? kUndefined : (v * v) / (b * b);
          };
          os << (k + 1) << ',' << format_real(e.eigenvalues[k]) << ',' << format_real(t.lambda_hat()[k])
             << ',' << format_real(e1) << ',' << format_real(e2) << ',' << format_real(ratio(e1, b1))
             << ',' << format_real(ratio(e2, b2)) << ',' << density[k] << '\n';
        }
      });
      err << "global_error=" << format_real(global_error(e, u_hat)) << '\n';
    } else if (*exp) {
      ExperimentConfig cfg;
      if (!exp_config.empty()) {
        auto cs = open_in(exp_config);
        try {
          cfg = config_from_json(nlohmann::json::parse(cs));
        } catch (const nlohmann::json::parse_error& e) {
          throw IoError(std::string("config: ") + e.what());
        }
      }
      auto given = [&](const char* flag) { return exp->count(flag) > 0; };
      if (exp_config.empty() || given("--model")) cfg.model = parse_model_kind(exp_model.model);
      if (exp_config.empty() || given("--n")) cfg.n = exp_model.n;
      if (given("--p")) cfg.p = exp_model.p;
      if (exp_config.empty() || given("--m")) cfg.m = exp_model.m;
      if (exp_config.empty() || given("--c")) cfg.c = exp_model.c;
      if (given("--epsilon")) cfg.epsilon = exp_model.epsilon;
      if (exp_config.empty() || given("--tau")) cfg.tau = exp_model.tau;
      if (exp_config.empty() || given("--draws")) cfg.draws = exp_draws;
      if (exp_config.empty() || given("--seed")) cfg.seed = exp_seed;
      if (exp_config.empty() || given("--delta")) cfg.delta = exp_delta;
      if (given("--j-grid")) cfg.j_grid = parse_grid(exp_grid);
      if (given("--out")) cfg.output_dir = exp_out;
      require(!cfg.output_dir.empty(), "experiment: no output directory (use --out)");
      const auto res = run_experiment(cfg);
      write_result(cfg.output_dir, res, exp_gnuplot);
      err << "wrote " << cfg.output_dir << '\n';
    } else if (*rep) {
      run_preset(find_preset(rep_preset), rep_draws, rep_seed, rep_out, rep_gnuplot);
      err << "wrote " << rep_out << " (" << find_preset(rep_preset).primary_output << ")\n";
    }
  } catch (const NumericalError& e) {
    err << "fgft: numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const IoError& e) {
    err << "fgft: I/O error: " << e.what() << '\n';
    return kExitIo;
  } catch (const Error& e) {
    err << "fgft: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitOk;
}

}  // namespace fgft
