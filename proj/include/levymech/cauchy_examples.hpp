#pragma once

#include <functional>
#include <string>

#include "levymech/doob.hpp"
#include "levymech/levy_core.hpp"

namespace levymech {

/// Closed-form stationary solutions of the Cauchy-noise Schrödinger equation;
/// ground truth for the acceptance tests of every other module.
struct ExampleSet {
  std::string name;
  double a = 1.0;
  std::function<double(double)> phi;
  std::function<double(double)> rho;  // phi^2
  std::function<double(double)> potential;
  double energy = 0.0;
  std::function<double(double, double)> gamma;           // (x, y)
  std::function<double(double, double)> lambda_density;  // (x, y)
  /// Thinning bound M(x) >= phi(x+y)/phi(x) for all y.
  std::function<double(double)> thinning_bound;
  Grid preset_grid;

  GeneratingTriplet triplet() const { return GeneratingTriplet::cauchy(); }
  GroundState ground_state(const Grid& g) const;
  GroundState ground_state() const { return ground_state(preset_grid); }
  /// Kernel over the closed-form phi (exact gamma/lambda, preset sampling).
  LevyTypeKernel kernel() const { return make_kernel(phi, triplet()); }
};

/// Student T_a(3) stationary density: phi = sqrt(2a/pi) a/(a^2+x^2),
/// V = -2a/(x^2+a^2), E = -1/a.
ExampleSet student3(double a);

/// Cauchy C(a) stationary density: phi = sqrt(a/pi)/sqrt(a^2+x^2),
/// V(x) = -(2/pi)[1/sqrt(a^2+x^2) + x/(a^2+x^2) log(sqrt(1+x^2/a^2) - x/a)],
/// E = 0. Heavier tails: the preset grid is much wider.
ExampleSet cauchy1(double a);

ExampleSet example_from_name(const std::string& name, double a);
std::vector<std::string> example_names();

}  // namespace levymech
