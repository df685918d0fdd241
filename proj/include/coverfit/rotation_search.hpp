#pragma once

#include "coverfit/circumscribe.hpp"
#include "coverfit/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <thread>
#include <vector>

namespace coverfit {

struct SearchConfig {
  int restarts = 200;
  double tol = 1e-10;  // on |g|
  int max_iters = 5000;
  std::uint64_t seed = 0;
  int threads = 1;  // 0 = hardware concurrency
  int recenter_every = 100;
  double initial_step = 0.25;  // radians, chart coordinates

  void validate() const {
    if (restarts < 1) throw InputError("search: restarts must be >= 1");
    if (!(tol > 0)) throw InputError("search: tol must be > 0");
    if (max_iters < 0) throw InputError("search: max_iters must be >= 0");
    if (recenter_every < 1) throw InputError("search: recenter_every must be >= 1");
  }
};

struct SearchOutcome {
  Rotation rotation = Rotation::identity(2);
  FitResult fit;
  double g_norm = std::numeric_limits<double>::infinity();
  int starts = 0;         // starts consumed, counting the winning one
  int best_start = -1;
  int iterations = 0;     // Nelder-Mead iterations spent by the winning start
  bool converged = false;  // g_norm <= tol
  std::uint64_t seed = 0;
};

namespace detail {

struct StartResult {
  Rotation rotation = Rotation::identity(2);
  double objective = std::numeric_limits<double>::infinity();
  int iterations = 0;
};

inline std::mt19937_64 start_rng(std::uint64_t seed, int start) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(start)};
  return std::mt19937_64(seq);
}

inline double objective(const ConvexBody& body, const SymmetricPolytope& p, const Rotation& tau) {
  return residual_map(body, p, tau).residual.squaredNorm();
}

// One start: Haar draw, then Nelder-Mead on |g(tau exp(a))|^2 with the chart
// re-centred at the incumbent every `recenter_every` iterations.
inline StartResult run_start(const ConvexBody& body, const SymmetricPolytope& p, const SearchConfig& cfg, int start) {
  auto rng = start_rng(cfg.seed, start);
  StartResult out;
  out.rotation = random_rotation(body.dim(), rng);
  out.objective = objective(body, p, out.rotation);
  const double target = cfg.tol * cfg.tol;
  const Vec origin = Vec::Zero(chart_dim(body.dim()));
  double step = cfg.initial_step;
  while (out.objective > target && out.iterations < cfg.max_iters) {
    const Rotation centre = out.rotation;
    auto f = [&](const Vec& a) { return objective(body, p, exp_chart(centre, a)); };
    const int budget = std::min(cfg.recenter_every, cfg.max_iters - out.iterations);
    const NelderMeadResult nm = nelder_mead(f, origin, step, budget, target);
    out.iterations += std::max(nm.iterations, 1);
    if (nm.value < out.objective) {
      out.rotation = exp_chart(centre, nm.x);
      out.objective = objective(body, p, out.rotation);
    }
    step = std::clamp(nm.simplex_size, 1e-13, cfg.initial_step);
  }
  return out;
}

}  // namespace detail

// Multistart search for a zero of the residual map. Starts are independent and
// may run on several threads; the winner is the lowest converged start index,
// else the lowest objective (ties to the lowest index), so the outcome does not
// depend on the thread count.
inline SearchOutcome minimize(const ConvexBody& body, const SymmetricPolytope& p, const SearchConfig& cfg) {
  cfg.validate();
  require_dim(p.dim(), body.dim(), "minimize");
  int workers = cfg.threads > 0 ? cfg.threads : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  workers = std::max(1, std::min(workers, cfg.restarts));
  const double target = cfg.tol * cfg.tol;

  std::optional<detail::StartResult> best;
  int best_index = -1;
  int consumed = cfg.restarts;
  bool done = false;
  for (int batch = 0; batch < cfg.restarts && !done; batch += workers) {
    const int count = std::min(workers, cfg.restarts - batch);
    std::vector<detail::StartResult> results(static_cast<std::size_t>(count));
    if (count == 1) {
      results[0] = detail::run_start(body, p, cfg, batch);
    } else {
      std::vector<std::jthread> pool;
      for (int i = 0; i < count; ++i) {
        pool.emplace_back([&, i] { results[static_cast<std::size_t>(i)] = detail::run_start(body, p, cfg, batch + i); });
      }
    }
    for (int i = 0; i < count; ++i) {
      const auto& r = results[static_cast<std::size_t>(i)];
      if (r.objective <= target) {
        best = r;
        best_index = batch + i;
        consumed = batch + i + 1;
        done = true;
        break;
      }
      if (!best || r.objective < best->objective) {
        best = r;
        best_index = batch + i;
      }
    }
  }

  SearchOutcome outcome;
  outcome.rotation = best->rotation;
  outcome.fit = residual_map(body, p, outcome.rotation);
  outcome.g_norm = outcome.fit.residual_norm();
  outcome.starts = consumed;
  outcome.best_start = best_index;
  outcome.iterations = best->iterations;
  outcome.converged = outcome.g_norm <= cfg.tol;
  outcome.seed = cfg.seed;
  return outcome;
}

struct Bracket {
  double lo = 0.0;
  double hi = 0.0;
  bool degenerate = false;  // residual is exactly zero at lo == hi
};

struct ScanResult {
  std::vector<double> angles;
  std::vector<double> residuals;
  std::vector<Bracket> brackets;
};

inline double scalar_residual_2d(const ConvexBody& body, const SymmetricPolytope& p, double theta) {
  return residual_map(body, p, Rotation::from_angle(theta)).residual(0);
}

// Sign changes of the scalar residual over [0, pi), each refined by 60
// bisection steps. The residual is odd under theta -> theta + pi, so the last
// interval closes at pi and the rest of the circle adds nothing.
inline ScanResult scan_2d(const ConvexBody& body, const SymmetricPolytope& p, int samples) {
  if (body.dim() != 2 || p.dim() != 2) throw InputError("scan_2d: dimension 2 only");
  if (p.strips() != 3) throw InputError("scan_2d: polytope must have exactly 3 strips");
  if (samples < 1) throw InputError("scan_2d: samples must be >= 1");

  ScanResult scan;
  for (int i = 0; i < samples; ++i) {
    const double theta = std::numbers::pi * i / samples;
    scan.angles.push_back(theta);
    scan.residuals.push_back(scalar_residual_2d(body, p, theta));
  }

  auto refine = [&](double lo, double flo, double hi) {
    for (int step = 0; step < 60; ++step) {
      const double mid = 0.5 * (lo + hi);
      const double fm = scalar_residual_2d(body, p, mid);
      if (fm == 0.0) return Bracket{mid, mid, true};
      if ((fm < 0) == (flo < 0)) {
        lo = mid;
        flo = fm;
      } else {
        hi = mid;
      }
    }
    return Bracket{lo, hi, false};
  };

  for (int i = 0; i < samples; ++i) {
    const double a = scan.angles[i], fa = scan.residuals[i];
    if (fa == 0.0) {
      scan.brackets.push_back({a, a, true});
      continue;
    }
    const double b = i + 1 < samples ? scan.angles[i + 1] : std::numbers::pi;
    const double fb = i + 1 < samples ? scan.residuals[i + 1] : scalar_residual_2d(body, p, std::numbers::pi);
    if (fb != 0.0 && (fa < 0) != (fb < 0)) scan.brackets.push_back(refine(a, fa, b));
  }
  return scan;
}

}  // namespace coverfit
