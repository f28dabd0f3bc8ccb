// Runs every γ engine that applies on a few sets and prints the estimates
// side by side with the known value.

#include <cstdio>

#include "caplab/capacity.hpp"

using namespace caplab;
using capacity::Engine;

int main() {
  struct Row {
    const char* name;
    sets::SetSpec set;
    double known;
  };
  const std::vector<Row> rows{
      {"unit disk", sets::disk(0.0, 1.0), 1.0},
      {"segment [0,1]", sets::segment(0.0, 1.0), 0.25},
      {"half circle", sets::make(sets::CircleArcs{{{0.0, kPi}}}), std::sin(kPi / 4)},
      {"J(0.2)", sets::julia(0.2), 1.0},
  };
  const std::pair<const char*, Engine> engines[] = {
      {"rules", Engine::rules}, {"leja", Engine::leja}, {"lp", Engine::lp}, {"tolsa", Engine::tolsa}};

  std::printf("%-14s %8s", "set", "known");
  for (const auto& [n, e] : engines) std::printf(" %10s", n);
  std::printf("\n");
  for (const auto& r : rows) {
    std::printf("%-14s %8.5f", r.name, r.known);
    for (const auto& [n, e] : engines) {
      capacity::GammaOptions o;
      o.engine = e;
      try {
        std::printf(" %10.5f", capacity::gamma_estimate(r.set, o).value);
      } catch (const std::exception&) {
        std::printf(" %10s", "-");
      }
    }
    std::printf("\n");
  }
  std::printf("\nlp is a lower bound in its function space; tolsa agrees with gamma only up to absolute constants\n");
}
