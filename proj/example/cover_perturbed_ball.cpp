// Fits a random constant-width body in R^4 into the 14-facet preset and prints
// the covering rotation, translation and containment margin.

#include "coverfit/coverfit.hpp"

#include <cstdlib>
#include <iostream>

int main(int argc, char** argv) {
  const std::uint64_t seed = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 7;
  const coverfit::ConvexBody body = coverfit::make_perturbed_ball(4, 3, 0.05, seed);
  const coverfit::SymmetricPolytope p = coverfit::preset("axisdiag14_4d");

  coverfit::SearchConfig cfg;
  cfg.seed = seed;
  const coverfit::SearchOutcome out = coverfit::minimize(body, p, cfg);

  std::cout << "converged: " << std::boolalpha << out.converged << "\n"
            << "|g|:       " << out.g_norm << "\n"
            << "margin:    " << out.fit.margin << "\n"
            << "starts:    " << out.starts << "\n"
            << "rotation:\n" << out.rotation.matrix() << "\n"
            << "x:         " << out.fit.x.transpose() << "\n";
  return out.converged ? 0 : 2;
}
