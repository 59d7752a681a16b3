// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "fgft/fgft.hpp"
#include "oracle.hpp"

using namespace fgft;
namespace fs = std::filesystem;

namespace {

constexpr std::size_t kDraws = 50;
constexpr std::uint64_t kSeed = 2024;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

std::vector<double> gaussian(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  std::vector<double> v(n);
  for (double& x : v) x = g(rng);
  return v;
}

// Median runs shared by criteria 7-9, computed once per model.
const ExperimentResult& median_run(ModelKind model) {
  static std::map<ModelKind, ExperimentResult> cache;
  auto it = cache.find(model);
  if (it == cache.end()) it = cache.emplace(model, run_experiment(preset_config(model, kDraws, kSeed))).first;
  return it->second;
}

double sq(double v) { return v * v; }

Outcome off_diagonal_decrease() {
  const auto t0 = Clock::now();
  double worst = 0.0;
  std::size_t steps = 0;
  for (std::uint64_t s = 0; s < 20; ++s) {
    const Laplacian l = laplacian(erdos_renyi(64, 10.0 / 63.0, {kSeed, s}));
    JacobiDiagonalizer jd(l.matrix());
    double before = offdiag_norm_sq(jd.working());
    for (std::size_t j = 0; j < 64 * 63 / 2; ++j) {
      const auto st = jd.step();
      if (!st) break;
      const double after = offdiag_norm_sq(jd.working());
      const double predicted = before - 2.0 * sq(st->pivot_value);
      worst = std::max(worst, std::abs(after - predicted) / before);
      before = after;
      ++steps;
    }
  }
  const double secs = seconds_since(t0);
  return {worst <= 1e-10 && secs < 5.0,
          fmt("%zu steps, worst relative deviation %.3g, %.2fs", steps, worst, secs)};
}

Outcome oracle_correctness() {
  const auto t0 = Clock::now();
  const Laplacian p3 = laplacian(make_graph(3, {{0, 1, 1.0}, {1, 2, 1.0}}));
  std::vector<std::tuple<std::size_t, std::size_t, double>> k4_edges;
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = i + 1; j < 4; ++j) k4_edges.emplace_back(i, j, 1.0);
  const Laplacian k4 = laplacian(make_graph(4, k4_edges));
  double worst = 0.0;
  auto check = [&](const Laplacian& l, const std::vector<double>& expected) {
    const auto got = full_jacobi(l).eigenvalues;
    const auto roots = oracle::char_poly_roots(l.matrix());
    for (std::size_t k = 0; k < got.size(); ++k) {
      worst = std::max(worst, std::abs(got[k] - roots[k]));
      worst = std::max(worst, std::abs(got[k] - expected[k]));
    }
  };
  check(p3, {0.0, 1.0, 3.0});
  check(k4, {0.0, 4.0, 4.0, 4.0});
  const double secs = seconds_since(t0);
  return {worst <= 1e-10 && secs < 1.0, fmt("max deviation %.3g, %.3fs", worst, secs)};
}

Outcome orthogonality_parseval() {
  const Laplacian l = laplacian(erdos_renyi(128, 10.0 / 127.0, {kSeed, 100}));
  const auto t = truncated_jacobi(l, 1000);
  const double defect = orthogonality_defect(to_dense(t));
  std::mt19937_64 rng(kSeed);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    SignalVector x{gaussian(128, rng), SignalDomain::vertex};
    const double ratio = norm2(analyze(t, x).values) / norm2(x.values);
    worst = std::max(worst, std::abs(ratio - 1.0));
  }
  return {defect <= 1e-12 && worst <= 1e-12,
          fmt("J=%zu, orthogonality defect %.3g, worst |ratio-1| %.3g", t.j_actual(), defect, worst)};
}

Outcome error_identity_chain() {
  double worst_global = 0.0, worst_err2 = 0.0;
  for (std::uint64_t s = 0; s < 10; ++s) {
    const Graph g = sbm(64, 4, 8.0, sbm_epsilon_critical(8.0, 4) / 10.0, {kSeed, 200 + s});
    const Laplacian l(g);
    const auto eig = full_jacobi(l);
    const Matrix u_hat = orient_columns(to_dense(truncated_jacobi(l, 300 + 100 * s)), eig.eigenvectors);
    double mean_sq = 0.0;
    for (std::size_t k = 0; k < 64; ++k) {
      const auto col = u_hat.column(k);
      mean_sq += sq(err1(eig, col, k)) / 64.0;
      const double e2 = err2(eig.eigenvalues, l.matrix(), col, k);
      worst_err2 = std::max(worst_err2, std::abs(e2 - err2_spectral(eig, col, k)));
    }
    worst_global = std::max(worst_global, std::abs(sq(global_error(eig, u_hat)) - mean_sq));
  }
  return {worst_global <= 1e-10 && worst_err2 <= 1e-9,
          fmt("global-vs-mean deviation %.3g, err2-vs-spectral deviation %.3g", worst_global, worst_err2)};
}

Outcome analytic_example() {
  const Graph g = random_sensor(40, 0.3, {kSeed, 300});
  const Laplacian l(g);
  const auto eig = full_jacobi(l);
  double worst1 = 0.0, worst2 = 0.0;
  std::size_t used = 0;
  for (std::size_t k = 0; k + 1 < g.size(); ++k) {
    if (eig.eigenvalues[k + 1] - eig.eigenvalues[k] < 1e-6) continue;
    std::vector<double> u_hat(g.size());
    for (std::size_t i = 0; i < g.size(); ++i)
      u_hat[i] = 0.8 * eig.eigenvectors(i, k) + 0.6 * eig.eigenvectors(i, k + 1);
    worst1 = std::max(worst1, std::abs(sq(err1(eig, u_hat, k)) - 0.4));
    const double gap = eig.eigenvalues[k + 1] - eig.eigenvalues[k];
    worst2 = std::max(worst2, std::abs(sq(err2(eig.eigenvalues, l.matrix(), u_hat, k)) - gap * gap * 0.36));
    ++used;
  }
  return {g.component_count() == 1 && used > 0 && worst1 <= 1e-10 && worst2 <= 1e-10,
          fmt("%zu modes, components %zu, err1^2 deviation %.3g, err2^2 deviation %.3g", used,
              g.component_count(), worst1, worst2)};
}

Outcome convergence_endpoint() {
  const Laplacian l = laplacian(erdos_renyi(64, 10.0 / 63.0, {kSeed, 400}));
  const auto t = truncated_jacobi(l, default_rotation_cap(64), kDefaultEigenTolerance);
  const auto reference = oracle::sturm_eigenvalues(l.matrix());
  double worst = 0.0;
  for (std::size_t k = 0; k < 64; ++k) worst = std::max(worst, std::abs(t.lambda_hat()[k] - reference[k]));
  const double residual = approx_laplacian_residual(t, l) / frobenius_norm(l.matrix());
  return {worst <= 1e-8 && residual <= 1e-8,
          fmt("J=%zu, eigenvalue deviation %.3g, relative residual %.3g", t.j_actual(), worst, residual)};
}

Outcome sbm_fast_decay() {
  const auto t0 = Clock::now();
  const auto& res = median_run(ModelKind::sbm);
  const auto& e1 = res.surface(ErrorKind::err1);
  const std::size_t n = res.config.n;
  std::string best;
  double best_ratio = INFINITY;
  for (std::size_t j = 0; j < res.j_grid.size(); ++j) {
    const std::size_t budget = res.j_grid[j];
    if (budget == 0 || budget >= n * (n - 1) / 8) continue;
    const double ratio = sq(e1.values(7, j)) / sq(e1.values(63, j));
    if (ratio < best_ratio) {
      best_ratio = ratio;
      best = fmt("J=%zu", budget);
    }
  }
  const double secs = seconds_since(t0);
  return {best_ratio < 0.5 && secs < 600.0,
          fmt("%zu draws, best ratio err1(8)^2/err1(64)^2 = %.3g at %s, %.1fs", res.draws.size(), best_ratio,
              best.c_str(), secs)};
}

Outcome high_degree_localization() {
  bool pass = true;
  std::string detail;
  for (ModelKind model : {ModelKind::erdos_renyi, ModelKind::sensor, ModelKind::sbm}) {
    const auto& res = median_run(model);
    const auto& e1 = res.surface(ErrorKind::err1);
    const std::size_t n = res.config.n;
    double top = 0.0, mid = 0.0;
    std::size_t top_count = 0, mid_count = 0;
    for (std::size_t k = 1; k <= n; ++k) {
      const double v = sq(e1.values(k - 1, 0));
      if (10 * k > 9 * n) {
        top += v;
        ++top_count;
      }
      if (k + 6 >= n / 2 && k <= n / 2 + 6) {
        mid += v;
        ++mid_count;
      }
    }
    top /= static_cast<double>(top_count);
    mid /= static_cast<double>(mid_count);
    pass = pass && top < mid;
    detail += fmt("%s top %.3f vs middle %.3f; ", std::string(to_string(model)).c_str(), top, mid);
  }
  detail.resize(detail.size() - 2);
  return {pass, detail};
}

Outcome density_correlation() {
  const auto& res = median_run(ModelKind::sensor);
  const auto& norm = res.surface(ErrorKind::err1_norm);
  std::vector<double> js(res.j_grid.begin(), res.j_grid.end());
  const double j_med = lower_median(js);
  const auto col = static_cast<std::size_t>(
      std::find(res.j_grid.begin(), res.j_grid.end(), static_cast<std::size_t>(j_med)) - res.j_grid.begin());
  std::vector<double> f, e;
  for (std::size_t k = 0; k < res.config.n; ++k) {
    const double v = norm.values(k, col);
    if (is_undefined(v)) continue;
    f.push_back(static_cast<double>(res.density[k]));
    e.push_back(v);
  }
  const double rho = oracle::spearman(f, e);
  return {rho > 0.3, fmt("J=%.0f, %zu modes, Spearman %.3f", j_med, f.size(), rho)};
}

Outcome performance() {
  const Laplacian l = laplacian(erdos_renyi(128, 10.0 / 127.0, {kSeed, 500}));
  const std::size_t j = 8 * 128 * 7;
  auto best_of = [&](std::size_t budget, std::size_t& taken) {
    double best = INFINITY;
    for (int rep = 0; rep < 5; ++rep) {
      const auto t0 = Clock::now();
      taken = truncated_jacobi(l, budget).j_actual();
      best = std::min(best, seconds_since(t0));
    }
    return best;
  };
  std::size_t taken_half = 0, taken_j = 0, taken_2j = 0;
  const double t_half = best_of(j / 2, taken_half);
  const double t_j = best_of(j, taken_j);
  const double t_2j = best_of(2 * j, taken_2j);
  const double ratio = t_2j / t_j;
  const double ratio_low = t_j / t_half;
  const bool linear = ratio >= 1.5 && ratio <= 3.0 && taken_2j == 2 * j;
  return {t_j < 1.0 && linear,
          fmt("J=%zu in %.3fs; T(%zu)/T(%zu)=%.2f, T(%zu)/T(%zu)=%.2f", j, t_j, 2 * j, j, ratio, j, j / 2,
              ratio_low)};
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

Outcome determinism() {
  const auto base = fs::temp_directory_path() / "fgft_acceptance_determinism";
  fs::remove_all(base);
  const auto& preset = find_preset("fig4");
  run_preset(preset, 4, kSeed, base / "a");
  run_preset(preset, 4, kSeed, base / "b");
  std::size_t files = 0, differing = 0;
  for (const auto& entry : fs::recursive_directory_iterator(base / "a")) {
    if (entry.path().extension() != ".csv") continue;
    ++files;
    const auto other = base / "b" / fs::relative(entry.path(), base / "a");
    if (slurp(entry.path()) != slurp(other)) ++differing;
  }
  fs::remove_all(base);
  return {files == 18 && differing == 0, fmt("preset fig4: %zu CSVs compared, %zu differ", files, differing)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"off-diagonal decrease identity", off_diagonal_decrease},
      {"exact eigenvalues on P3 and K4", oracle_correctness},
      {"orthogonality and Parseval", orthogonality_parseval},
      {"error identity chain", error_identity_chain},
      {"two-mode analytic example", analytic_example},
      {"convergence endpoint", convergence_endpoint},
      {"SBM fast decay near k=8", sbm_fast_decay},
      {"high-frequency modes localize on high degree", high_degree_localization},
      {"density correlation on sensor graphs", density_correlation},
      {"performance and linear scaling in J", performance},
      {"reproduce determinism", determinism},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::printf("%s %2zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
