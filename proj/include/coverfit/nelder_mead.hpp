#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <numeric>
#include <vector>

namespace coverfit {

struct NelderMeadResult {
  Eigen::VectorXd x;
  double value = 0.0;
  int iterations = 0;
  double simplex_size = 0.0;  // max distance of a vertex from the best one
};

// Downhill simplex with the standard coefficients (reflect 1, expand 2,
// contract 1/2, shrink 1/2). Stops when the best value reaches `target` or
// after `max_iters` iterations.
template <class F>
NelderMeadResult nelder_mead(F&& f, const Eigen::VectorXd& x0, double step, int max_iters, double target) {
  const auto m = x0.size();
  std::vector<Eigen::VectorXd> pts(static_cast<std::size_t>(m) + 1, x0);
  std::vector<double> vals(pts.size());
  for (Eigen::Index i = 0; i < m; ++i) pts[static_cast<std::size_t>(i) + 1](i) += step;
  for (std::size_t i = 0; i < pts.size(); ++i) vals[i] = f(pts[i]);

  std::vector<std::size_t> order(pts.size());
  auto sort_vertices = [&] {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return vals[a] < vals[b]; });
  };

  int iter = 0;
  sort_vertices();
  while (iter < max_iters && vals[order.front()] > target) {
    ++iter;
    const std::size_t worst = order.back();
    const std::size_t second = order[order.size() - 2];
    const std::size_t best = order.front();

    Eigen::VectorXd centroid = Eigen::VectorXd::Zero(m);
    for (std::size_t i = 0; i + 1 < order.size(); ++i) centroid += pts[order[i]];
    centroid /= static_cast<double>(m);

    const Eigen::VectorXd reflected = centroid + (centroid - pts[worst]);
    const double fr = f(reflected);
    if (fr < vals[best]) {
      const Eigen::VectorXd expanded = centroid + 2.0 * (centroid - pts[worst]);
      const double fe = f(expanded);
      if (fe < fr) {
        pts[worst] = expanded;
        vals[worst] = fe;
      } else {
        pts[worst] = reflected;
        vals[worst] = fr;
      }
    } else if (fr < vals[second]) {
      pts[worst] = reflected;
      vals[worst] = fr;
    } else {
      const bool outside = fr < vals[worst];
      const Eigen::VectorXd contracted =
          outside ? Eigen::VectorXd(centroid + 0.5 * (reflected - centroid)) : Eigen::VectorXd(centroid + 0.5 * (pts[worst] - centroid));
      const double fc = f(contracted);
      if (fc < (outside ? fr : vals[worst])) {
        pts[worst] = contracted;
        vals[worst] = fc;
      } else {
        for (std::size_t i = 0; i < pts.size(); ++i) {
          if (i == best) continue;
          pts[i] = pts[best] + 0.5 * (pts[i] - pts[best]);
          vals[i] = f(pts[i]);
        }
      }
    }
    sort_vertices();
  }

  NelderMeadResult result;
  result.x = pts[order.front()];
  result.value = vals[order.front()];
  result.iterations = iter;
  for (const auto& p : pts) result.simplex_size = std::max(result.simplex_size, (p - result.x).norm());
  return result;
}

}  // namespace coverfit
