#pragma once

#include <optional>

#include "levymech/grid.hpp"
#include "levymech/levy_core.hpp"
#include "levymech/spectral_ops.hpp"

namespace levymech {

/// Strictly positive ground state phi with its energy origin E. Proper states
/// are L2-normalized (tail-corrected integral of phi^2 equal to 1 within
/// 1e-6); improper states (phi == 1, plane waves) skip that check and carry
/// the constant-tail extension instead.
struct GroundState {
  GridFunction phi;
  double energy = 0.0;
  double gauge_momentum = 0.0;  // S(x) = p x for the plane-wave case
  bool improper = false;
  GridInterpolant interp;

  static GroundState make(GridFunction phi, double energy, bool improper = false,
                          double gauge_momentum = 0.0,
                          TailModel tail = TailModel::Auto,
                          double positivity_floor = 1e-12);
  /// phi == 1 with Lebesgue invariant measure.
  static GroundState lebesgue(const Grid& g, double energy = 0.0,
                              double gauge_momentum = 0.0);

  double phi_at(double x) const { return interp(x); }
  /// Tail-corrected int phi^2 dx.
  double mass() const { return interp.square_integral_with_tails(); }
};

/// State-dependent jump data of the Doob-transformed generator:
///   gamma(x, y)      = phi(x)/phi(x+y) 1_{|y| <= 1}
///   lambda(x; dy)    = phi(x+y)/phi(x) l(dy).
struct LevyTypeKernel {
  std::function<double(double)> phi;
  GeneratingTriplet base;

  double gamma(double x, double y) const;
  double lambda_density(double x, double y) const;
};

LevyTypeKernel make_kernel(const GroundState& g, const GeneratingTriplet& t);
/// Kernel over a closed-form phi (presets bypass the grid interpolant).
LevyTypeKernel make_kernel(std::function<double(double)> phi, const GeneratingTriplet& t);

/// gamma and lambda density at one (x, y); y must be nonzero.
std::pair<double, double> levy_type_kernel_eval(const GroundState& g,
                                                const GeneratingTriplet& t, double x,
                                                double y);

/// V(x) = [L0 phi](x)/phi(x) + E with L0 phi by the quadrature route.
GridFunction potential_from_ground_state(const GroundState& g, const GeneratingTriplet& t,
                                         const GeneratorOptions& opt = {},
                                         QuadratureDiagnostics* diag = nullptr);

/// L f = (L0(phi f) - f L0 phi)/phi — the conjugation route.
GridFunction apply_levy_type_generator(const GroundState& g, const GeneratingTriplet& t,
                                       const GridFunction& f,
                                       const GeneratorOptions& opt = {});

/// L f by the explicit Lévy-type form: jump integral against lambda(x; dy)
/// with compensator weight gamma(x, y), plus the diffusion part
/// a (f''/2 + (phi'/phi) f') when a > 0. Must agree with the conjugation
/// route.
GridFunction apply_levy_type_generator_kernel(const GroundState& g,
                                              const GeneratingTriplet& t,
                                              const GridFunction& f,
                                              const GeneratorOptions& opt = {});

/// Hamiltonian H = -L0 + V with the spectral route for L0 and a precomputed
/// potential. For f = phi this returns E phi up to cross-route error.
struct Hamiltonian {
  SpectralSymbol symbol;
  GridFunction potential;

  GridFunction apply(const GridFunction& f) const;
};

Hamiltonian make_hamiltonian(const GroundState& g, const GeneratingTriplet& t,
                             const GeneratorOptions& opt = {});

/// Drift b = phi'/phi of the Wiener-case transformed generator.
GridFunction gaussian_drift(const GroundState& g);

struct EnergyEstimate {
  double value = 0.0;
  double spread = 0.0;
};

/// Estimates E from the decay region via E = -L0 phi/phi at the grid edges
/// (valid when V(±inf) = 0); reported with the spread across the window.
EnergyEstimate estimate_energy_from_decay(const GroundState& g, const GeneratingTriplet& t,
                                          const GeneratorOptions& opt = {});

}  // namespace levymech
