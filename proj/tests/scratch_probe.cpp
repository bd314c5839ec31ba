// Temporary diagnostic: eigen-relation and stationarity margins per grid.
#include <cstdio>

#include "levymech/cauchy_examples.hpp"
#include "levymech/doob.hpp"
#include "levymech/evolution.hpp"

using namespace levymech;

static void probe(const ExampleSet& ex, double xmax, Index n, double t_final) {
  const Grid g = Grid::symmetric(xmax, n);
  const GroundState gs = ex.ground_state(g);
  const auto t = ex.triplet();
  const Hamiltonian H = make_hamiltonian(gs, t);
  const GridFunction Hphi = H.apply(gs.phi);
  const double resid =
      GridFunction(g, Hphi.values - ex.energy * gs.phi.values).l2_norm() / gs.phi.l2_norm();
  printf("%s xmax=%g n=%ld: eigen-resid %.3e", ex.name.c_str(), xmax, (long)n, resid);

  EvolutionConfig cfg;
  cfg.dt = 2e-3;
  cfg.t_final = t_final;
  cfg.record_every = 250;
  cfg.boundary_pad_tol = 1.0;  // silence warnings for the probe
  const auto run = evolve(gs.phi, H.potential, H.symbol, cfg);
  printf("  stationarity(t<=%.0f) %.3e  norm-drift %.1e\n", t_final,
         stationarity_residual(gs.phi, ex.energy, run), run.max_norm_drift);
}

int main() {
  probe(student3(1.0), 320.0, 32768, 5.0);
  
  probe(cauchy1(1.0), 400.0, 32768, 5.0);
  return 0;
}
