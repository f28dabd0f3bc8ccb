// Moves the unit circle by the Böttcher motion and prints γ, α and the trace
// length as λ shrinks to 0. γ stays at 1 while α drops from 1 to 0 at λ = 0.

#include <cstdio>

#include "caplab/motion.hpp"

using namespace caplab;

int main() {
  std::vector<cplx> lambdas;
  for (int n = 1; n <= 8; ++n) lambdas.push_back(1.0 / (n + 2));
  lambdas.push_back(0.0);

  motion::ScanOptions opt;
  opt.length_depths = {12};
  const auto rows = motion::motion_scan(*motion::boettcher(), sets::unit_circle(), lambdas,
                                        {"gamma_leja", "alpha_rules", "length"}, opt);

  std::printf("%8s  %10s  %6s  %12s\n", "lambda", "gamma", "alpha", "length");
  for (std::size_t i = 0; i + 2 < rows.size(); i += 3) {
    auto v = [&](std::size_t k) { return rows[i + k].value.value_or(-1.0); };
    std::printf("%8.5f  %10.6f  %6.0f  %12.6f\n", rows[i].lambda.real(), v(0), v(1), v(2));
  }
}
