#pragma once

#include <string>
#include <vector>

#include "levymech/grid.hpp"
#include "levymech/levy_core.hpp"

namespace levymech {

struct EvolutionConfig {
  double dt = 2e-3;
  double t_final = 1.0;
  int record_every = 100;       // steps between snapshots
  double potential_clip = 1e6;  // |V| clamp guarding tail-fit noise
  double boundary_pad_tol = 1e-8;
};

struct Snapshot {
  double time = 0.0;
  GridFunction psi;
  double l2_norm = 0.0;
};

struct EvolutionResult {
  std::vector<Snapshot> snapshots;
  double dt_effective = 0.0;
  long steps = 0;
  double max_norm_drift = 0.0;  // max |‖psi_t‖ - ‖psi_0‖|
  long clipped_potential_points = 0;
  std::vector<std::string> warnings;
};

class EvolveError : public std::runtime_error {
 public:
  EvolveError(const std::string& what, long step) : std::runtime_error(what), step_(step) {}
  long step() const { return step_; }

 private:
  long step_;
};

/// Split-step spectral propagation of i d/dt psi = (-L0 + V) psi: half-step
/// e^{-i V dt/2} in position space, full kinetic step e^{+i eta(u) dt} in
/// spectral space, half potential step again. Each factor is unitary on the
/// grid, so the L2 norm is conserved to rounding. V must be real.
EvolutionResult evolve(const GridFunction& psi0, const GridFunction& V,
                       const SpectralSymbol& sym, const EvolutionConfig& cfg);

/// max over snapshots of ‖psi_t - e^{-i E t} psi_0‖_2.
double stationarity_residual(const GridFunction& psi0, double energy,
                             const EvolutionResult& run);

}  // namespace levymech
