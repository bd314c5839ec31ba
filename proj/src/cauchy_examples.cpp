#include "levymech/cauchy_examples.hpp"

#include <cmath>
#include <stdexcept>

namespace levymech {

GroundState ExampleSet::ground_state(const Grid& g) const {
  GridFunction sampled = sample_real(g, phi);
  return GroundState::make(std::move(sampled), energy, /*improper=*/false, 0.0,
                           TailModel::Algebraic);
}

ExampleSet student3(double a) {
  if (!(a > 0.0)) throw std::invalid_argument("student3 requires a > 0");
  ExampleSet e;
  e.name = "student3";
  e.a = a;
  const double norm = std::sqrt(2.0 * a / M_PI) * a;
  e.phi = [norm, a](double x) { return norm / (a * a + x * x); };
  e.rho = [a](double x) {
    const double d = a * a + x * x;
    return (2.0 * a * a * a / M_PI) / (d * d);
  };
  e.potential = [a](double x) { return -2.0 * a / (x * x + a * a); };
  e.energy = -1.0 / a;
  e.gamma = [a](double x, double y) {
    if (std::abs(y) > 1.0) return 0.0;
    return (a * a + (x + y) * (x + y)) / (a * a + x * x);
  };
  e.lambda_density = [a](double x, double y) {
    return (a * a + x * x) / (a * a + (x + y) * (x + y)) / (M_PI * y * y);
  };
  // phi is maximal at the origin, so sup_y phi(x+y)/phi(x) = phi(0)/phi(x).
  e.thinning_bound = [a](double x) { return (a * a + x * x) / (a * a); };
  e.preset_grid = Grid::symmetric(40.0 * a, 4096);
  return e;
}

ExampleSet cauchy1(double a) {
  if (!(a > 0.0)) throw std::invalid_argument("cauchy1 requires a > 0");
  ExampleSet e;
  e.name = "cauchy1";
  e.a = a;
  const double norm = std::sqrt(a / M_PI);
  e.phi = [norm, a](double x) { return norm / std::sqrt(a * a + x * x); };
  e.rho = [a](double x) { return (a / M_PI) / (a * a + x * x); };
  // log(sqrt(1 + x^2/a^2) - x/a) = -asinh(x/a), the cancellation-free form.
  e.potential = [a](double x) {
    const double d = a * a + x * x;
    return -(2.0 / M_PI) * (1.0 / std::sqrt(d) - x * std::asinh(x / a) / d);
  };
  e.energy = 0.0;
  e.gamma = [a](double x, double y) {
    if (std::abs(y) > 1.0) return 0.0;
    return std::sqrt((a * a + (x + y) * (x + y)) / (a * a + x * x));
  };
  e.lambda_density = [a](double x, double y) {
    return std::sqrt((a * a + x * x) / (a * a + (x + y) * (x + y))) / (M_PI * y * y);
  };
  e.thinning_bound = [a](double x) { return std::sqrt((a * a + x * x) / (a * a)); };
  // Slowly decaying rho: a wide box keeps the truncated mass below the
  // normalization tolerance (documented preset).
  e.preset_grid = Grid::symmetric(200.0 * a, 16384);
  return e;
}

ExampleSet example_from_name(const std::string& name, double a) {
  if (name == "student3") return student3(a);
  if (name == "cauchy1") return cauchy1(a);
  throw std::invalid_argument("unknown example '" + name + "' (student3, cauchy1)");
}

std::vector<std::string> example_names() { return {"student3", "cauchy1"}; }

}  // namespace levymech
