#include "levymech/doob.hpp"

#include <cmath>

#include "levymech/parallel.hpp"

namespace levymech {

GroundState GroundState::make(GridFunction phi, double energy, bool improper,
                              double gauge_momentum, TailModel tail,
                              double positivity_floor) {
  if (!phi.is_real(1e-9)) throw GridError("ground state must be real");
  const ArrayXd v = phi.values.real();
  const double vmax = v.maxCoeff();
  const double vmin = v.minCoeff();
  if (!(vmin > 0.0)) throw GridError("ground state must be strictly positive");
  if (vmin < positivity_floor * vmax)
    throw GridError("ground state below the positivity floor (min/max = " +
                    std::to_string(vmin / vmax) + ")");

  GroundState g;
  g.phi = std::move(phi);
  g.energy = energy;
  g.gauge_momentum = gauge_momentum;
  g.improper = improper;
  if (tail == TailModel::Auto && improper) tail = TailModel::Constant;
  g.interp = GridInterpolant::make(g.phi, tail);

  if (!improper) {
    const double mass = g.mass();
    if (std::abs(mass - 1.0) > 1e-6)
      throw GridError("ground state not normalized: int phi^2 = " + std::to_string(mass) +
                      " (flag improper to skip)");
  }
  return g;
}

GroundState GroundState::lebesgue(const Grid& g, double energy, double gauge_momentum) {
  return make(sample_real(g, [](double) { return 1.0; }), energy, /*improper=*/true,
              gauge_momentum, TailModel::Constant);
}

double LevyTypeKernel::gamma(double x, double y) const {
  if (y == 0.0) throw GridError("kernel gamma requires y != 0");
  if (std::abs(y) > 1.0) return 0.0;
  return phi(x) / phi(x + y);
}

double LevyTypeKernel::lambda_density(double x, double y) const {
  if (y == 0.0) throw GridError("kernel lambda requires y != 0");
  if (!base.levy) return 0.0;
  return phi(x + y) / phi(x) * base.levy->density(y);
}

LevyTypeKernel make_kernel(const GroundState& g, const GeneratingTriplet& t) {
  LevyTypeKernel k;
  k.phi = [interp = g.interp](double x) { return interp(x); };
  k.base = t;
  return k;
}

LevyTypeKernel make_kernel(std::function<double(double)> phi, const GeneratingTriplet& t) {
  LevyTypeKernel k;
  k.phi = std::move(phi);
  k.base = t;
  return k;
}

std::pair<double, double> levy_type_kernel_eval(const GroundState& g,
                                                const GeneratingTriplet& t, double x,
                                                double y) {
  const LevyTypeKernel k = make_kernel(g, t);
  return {k.gamma(x, y), k.lambda_density(x, y)};
}

GridFunction potential_from_ground_state(const GroundState& g, const GeneratingTriplet& t,
                                         const GeneratorOptions& opt,
                                         QuadratureDiagnostics* diag) {
  GeneratorOptions o = opt;
  if (o.tail == TailModel::Auto && g.improper) o.tail = TailModel::Constant;
  const GridFunction l0_phi = apply_generator_quadrature(g.phi, t, o, diag);
  ArrayXd v = l0_phi.values.real() / g.phi.values.real() + g.energy;
  return GridFunction(g.phi.grid, v.cast<Complex>());
}

GridFunction apply_levy_type_generator(const GroundState& g, const GeneratingTriplet& t,
                                       const GridFunction& f, const GeneratorOptions& opt) {
  if (!(f.grid == g.phi.grid)) throw GridError("grid mismatch");
  // phi == 1 degenerates to the base generator; skip the two extra
  // applications entirely so the collapse is exact.
  if (g.improper && (g.phi.values.real() == 1.0).all() && g.phi.values.imag().isZero())
    return apply_generator_quadrature(f, t, opt);
  // The product phi f keeps the caller's tail handling; only phi itself needs
  // the improper constant extension.
  GeneratorOptions o_phi = opt;
  if (o_phi.tail == TailModel::Auto && g.improper) o_phi.tail = TailModel::Constant;
  const ArrayXd phi_v = g.phi.values.real();
  GridFunction pf(f.grid, g.phi.values * f.values);
  const GridFunction l0_pf = apply_generator_quadrature(pf, t, opt);
  const GridFunction l0_p = apply_generator_quadrature(g.phi, t, o_phi);
  const ArrayXcd out = (l0_pf.values - f.values * l0_p.values) / phi_v.cast<Complex>();
  return GridFunction(f.grid, out);
}

GridFunction apply_levy_type_generator_kernel(const GroundState& g,
                                              const GeneratingTriplet& t,
                                              const GridFunction& f,
                                              const GeneratorOptions& opt) {
  if (!(f.grid == g.phi.grid)) throw GridError("grid mismatch");
  if (!f.is_real(1e-9))
    throw GridError("kernel route expects real test functions");
  const Grid& grid = f.grid;
  const Index n = grid.n;
  const ArrayXd fv = f.values.real();
  const ArrayXd pv = g.phi.values.real();

  TailModel f_tail = opt.tail;
  const GridInterpolant F = GridInterpolant::make(f, f_tail);
  const auto& P = g.interp;

  const SpectralEngine engine(grid);
  const ArrayXd f1 = engine.derivative_real(fv, 1);
  const ArrayXd f2 = engine.derivative_real(fv, 2);
  const ArrayXd f3 = engine.derivative_real(fv, 3);
  const ArrayXd f4 = engine.derivative_real(fv, 4);
  const ArrayXd p1 = engine.derivative_real(pv, 1);
  const ArrayXd p2 = engine.derivative_real(pv, 2);
  const ArrayXd p3 = engine.derivative_real(pv, 3);

  ArrayXd out = ArrayXd::Zero(n);
  if (t.a > 0.0) out = 0.5 * t.a * f2 + t.a * (p1 / pv) * f1;
  if (!t.levy) return GridFunction(grid, out.cast<Complex>());

  const LevyMeasure& m = *t.levy;
  quad::Options q;
  q.abs_tol = opt.abs_tol;
  q.rel_tol = opt.rel_tol;
  const double eps = opt.taylor_band > 0.0 ? opt.taylor_band
                                           : std::clamp(8.0 * grid.spacing(), 1e-6, 1.0);
  const double s2 = small_moment(m, 2, eps, q);
  const double s4 = small_moment(m, 4, eps, q);
  const double far_start = std::max(1.0, 2.0 * grid.length());
  const double panel = std::max(0.25, opt.far_panel_width);
  const long n_panels = std::max<long>(1, static_cast<long>(std::ceil((far_start - 1.0) / panel)));
  quad::Options panel_q = q;
  panel_q.abs_tol = std::max(q.abs_tol / (2.0 * n_panels), 1e-300);

  const ArrayXd xs = grid.points();
  parallel_for(n, [&](std::ptrdiff_t i) {
    const double x = xs[i];
    const double fi = fv[i];
    const double phx = pv[i];

    // Even Taylor coefficients of [r(y) delta_y f - y f'] with
    // r(y) = phi(x+y)/phi(x) = 1 + y b1 + y^2 b2 + y^3 b3 + ...
    const double b1 = p1[i] / phx;
    const double b2 = p2[i] / (2.0 * phx);
    const double b3 = p3[i] / (6.0 * phx);
    const double c2 = 0.5 * f2[i] + b1 * f1[i];
    const double c4 = f4[i] / 24.0 + b1 * f3[i] / 6.0 + b2 * f2[i] / 2.0 + b3 * f1[i];
    double value = c2 * s2 + c4 * s4;

    // Symmetrized band integrand: the compensator gamma y f' lambda equals
    // y f' l(dy) and cancels pairwise for symmetric l.
    const auto band = [&](double y) {
      const double ray = (P(x + y) / phx) * (F(x + y) - fi);
      const double ram = (P(x - y) / phx) * (F(x - y) - fi);
      return (ray + ram) * m.density(y);
    };
    if (eps < 1.0) value += quad::integrate(band, eps, 1.0, q).value;
    double lo = std::max(1.0, eps);
    for (long k = 0; k < n_panels && lo < far_start; ++k) {
      const double hi =
          (k + 1 == n_panels) ? far_start : std::min(far_start, 1.0 + (k + 1) * panel);
      if (hi <= lo) continue;
      value += quad::integrate(band, lo, hi, panel_q).value;
      lo = hi;
    }
    value += quad::integrate_to_infinity(band, lo, q).value;
    out[i] += value;
  });
  return GridFunction(grid, out.cast<Complex>());
}

GridFunction Hamiltonian::apply(const GridFunction& f) const {
  const GridFunction l0f = apply_generator_spectral(f, symbol);
  return GridFunction(f.grid, potential.values * f.values - l0f.values);
}

Hamiltonian make_hamiltonian(const GroundState& g, const GeneratingTriplet& t,
                             const GeneratorOptions& opt) {
  quad::Options q;
  q.abs_tol = opt.abs_tol;
  q.rel_tol = opt.rel_tol;
  return Hamiltonian{make_symbol(t, q), potential_from_ground_state(g, t, opt)};
}

GridFunction gaussian_drift(const GroundState& g) {
  const SpectralEngine engine(g.phi.grid);
  const ArrayXd pv = g.phi.values.real();
  const ArrayXd p1 = engine.derivative_real(pv, 1);
  return GridFunction(g.phi.grid, (p1 / pv).cast<Complex>());
}

EnergyEstimate estimate_energy_from_decay(const GroundState& g, const GeneratingTriplet& t,
                                          const GeneratorOptions& opt) {
  const GridFunction l0_phi = apply_generator_quadrature(g.phi, t, opt);
  const ArrayXd ratio = -l0_phi.values.real() / g.phi.values.real();
  const Index n = g.phi.size();
  // Window: outer 10% per side, skipping the outermost 2% where the
  // interpolant stencil degrades.
  const Index w = std::max<Index>(4, n / 10);
  const Index skip = std::max<Index>(1, n / 50);
  double sum = 0.0, sq = 0.0;
  Index count = 0;
  for (Index i = skip; i < w; ++i) {
    for (const Index j : {i, n - 1 - i}) {
      sum += ratio[j];
      sq += ratio[j] * ratio[j];
      ++count;
    }
  }
  EnergyEstimate e;
  e.value = sum / count;
  e.spread = std::sqrt(std::max(0.0, sq / count - e.value * e.value));
  return e;
}

}  // namespace levymech
