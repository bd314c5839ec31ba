#include "levymech/dirichlet.hpp"

#include <cmath>

#include "levymech/parallel.hpp"

namespace levymech {

namespace {

void require_compact_support(const GridFunction& f, double tol, const char* who) {
  const double scale = f.values.abs().maxCoeff();
  if (scale == 0.0) return;
  const double edge = std::max(std::abs(f.values[0]), std::abs(f.values[f.size() - 1]));
  if (edge > tol * scale)
    throw GridError(std::string(who) +
                    ": input not compactly supported inside the grid (edge/max = " +
                    std::to_string(edge / scale) + ")");
}

struct SeriesCoef {
  // Even Taylor coefficients A2..A6 of delta_y f delta_y g and the first
  // derivatives needed for the phi weighting.
  double A2, A3, A4, A5, A6;
};

SeriesCoef delta_product_series(double f1, double f2, double f3, double f4, double f5,
                                double g1, double g2, double g3, double g4, double g5) {
  SeriesCoef c;
  c.A2 = f1 * g1;
  c.A3 = (f1 * g2 + f2 * g1) / 2.0;
  c.A4 = f2 * g2 / 4.0 + (f1 * g3 + f3 * g1) / 6.0;
  c.A5 = (f2 * g3 + f3 * g2) / 12.0 + (f1 * g4 + f4 * g1) / 24.0;
  c.A6 = f3 * g3 / 36.0 + (f2 * g4 + f4 * g2) / 48.0 + (f1 * g5 + f5 * g1) / 120.0;
  return c;
}

struct BandScheme {
  double eps;
  double far_start;
  double panel;
  long n_panels;
  quad::Options q;
  quad::Options panel_q;

  BandScheme(const Grid& grid, const FormOptions& opt) {
    eps = std::clamp(8.0 * grid.spacing(), 1e-6, 1.0);
    far_start = std::max(1.0, 2.0 * grid.length());
    panel = std::max(0.25, opt.far_panel_width);
    n_panels = std::max<long>(1, static_cast<long>(std::ceil((far_start - 1.0) / panel)));
    q.abs_tol = opt.abs_tol;
    q.rel_tol = opt.rel_tol;
    panel_q = q;
    panel_q.abs_tol = std::max(q.abs_tol / (2.0 * n_panels), 1e-300);
  }

  double integrate(const std::function<double(double)>& side_integrand) const {
    double total = quad::integrate(side_integrand, eps, std::min(1.0, far_start), q).value;
    double lo = 1.0;
    for (long k = 0; k < n_panels && lo < far_start; ++k) {
      const double hi = (k + 1 == n_panels) ? far_start : std::min(far_start, 1.0 + (k + 1) * panel);
      if (hi <= lo) continue;
      total += quad::integrate(side_integrand, lo, hi, panel_q).value;
      lo = hi;
    }
    total += quad::integrate_to_infinity(side_integrand, lo, q).value;
    return total;
  }
};

struct Derivatives5 {
  ArrayXd d1, d2, d3, d4, d5;
};

Derivatives5 derivs5(const SpectralEngine& e, const ArrayXd& v) {
  return {e.derivative_real(v, 1), e.derivative_real(v, 2), e.derivative_real(v, 3),
          e.derivative_real(v, 4), e.derivative_real(v, 5)};
}

}  // namespace

double form_levy(const GridFunction& f, const GridFunction& g, const GeneratingTriplet& t,
                 const FormOptions& opt) {
  if (!(f.grid == g.grid)) throw GridError("form_levy: grid mismatch");
  if (!f.is_real(1e-9) || !g.is_real(1e-9)) throw GridError("form_levy expects real data");
  // Constants have vanishing differences and gradient: the form is 0 without
  // any compact-support requirement.
  if (f.values.real().maxCoeff() == f.values.real().minCoeff() ||
      g.values.real().maxCoeff() == g.values.real().minCoeff())
    return 0.0;
  require_compact_support(f, opt.support_tol, "form_levy(f)");
  require_compact_support(g, opt.support_tol, "form_levy(g)");

  const Grid& grid = f.grid;
  const double h = grid.spacing();
  const ArrayXd fv = f.values.real();
  const ArrayXd gv = g.values.real();
  const SpectralEngine engine(grid);

  double total = 0.0;
  const Derivatives5 df = derivs5(engine, fv);
  const Derivatives5 dg = derivs5(engine, gv);
  if (t.a > 0.0) total += 0.5 * t.a * h * (df.d1 * dg.d1).sum();
  if (!t.levy) return total;

  const LevyMeasure& m = *t.levy;
  const BandScheme band(grid, opt);
  const double s2 = small_moment(m, 2, band.eps, band.q);
  const double s4 = small_moment(m, 4, band.eps, band.q);
  const double s6 = small_moment(m, 6, band.eps, band.q);

  const GridInterpolant F = GridInterpolant::make(f, TailModel::Zero);
  const GridInterpolant G = GridInterpolant::make(g, TailModel::Zero);
  const ArrayXd xs = grid.points();
  const Index n = grid.n;
  ArrayXd inner(n);
  parallel_for(n, [&](std::ptrdiff_t i) {
    const double x = xs[i];
    const double fi = fv[i], gi = gv[i];
    const SeriesCoef c = delta_product_series(df.d1[i], df.d2[i], df.d3[i], df.d4[i], df.d5[i],
                                              dg.d1[i], dg.d2[i], dg.d3[i], dg.d4[i], dg.d5[i]);
    double v = c.A2 * s2 + c.A4 * s4 + c.A6 * s6;
    for (const double sign : {1.0, -1.0}) {
      v += band.integrate([&](double y) {
        const double z = x + sign * y;
        return (F(z) - fi) * (G(z) - gi) * m.density(y);
      });
    }
    inner[i] = v;
  });
  total += 0.5 * h * inner.sum();

  // Outer-x slab beyond the grid: there f = g = 0, so the integrand reduces to
  // (f g)(x+y) and Fubini turns it into a tail-mass weight on supp(f g).
  double slab = 0.0;
  for (Index i = 0; i < n; ++i) {
    const double w = fv[i] * gv[i];
    if (w == 0.0) continue;
    const double z = xs[i];
    slab += w * (tail_mass_one_sided(m, z - grid.x_min, band.q) +
                 tail_mass_one_sided(m, grid.x_max - z, band.q));
  }
  total += 0.5 * h * slab;
  return total;
}

double form_doob(const GridFunction& f, const GridFunction& g, const GroundState& gs,
                 const GeneratingTriplet& t, const FormOptions& opt) {
  if (!(f.grid == g.grid) || !(f.grid == gs.phi.grid))
    throw GridError("form_doob: grid mismatch");
  if (!f.is_real(1e-9) || !g.is_real(1e-9)) throw GridError("form_doob expects real data");
  if (f.values.real().maxCoeff() == f.values.real().minCoeff() ||
      g.values.real().maxCoeff() == g.values.real().minCoeff())
    return 0.0;
  require_compact_support(f, opt.support_tol, "form_doob(f)");
  require_compact_support(g, opt.support_tol, "form_doob(g)");

  const Grid& grid = f.grid;
  const double h = grid.spacing();
  const ArrayXd fv = f.values.real();
  const ArrayXd gv = g.values.real();
  const ArrayXd pv = gs.phi.values.real();
  const SpectralEngine engine(grid);
  const Derivatives5 df = derivs5(engine, fv);
  const Derivatives5 dg = derivs5(engine, gv);

  double total = 0.0;
  if (t.a > 0.0) total += 0.5 * t.a * h * (df.d1 * dg.d1 * pv.square()).sum();
  if (!t.levy) return total;

  const LevyMeasure& m = *t.levy;
  const BandScheme band(grid, opt);
  const double s2 = small_moment(m, 2, band.eps, band.q);
  const double s4 = small_moment(m, 4, band.eps, band.q);
  const double s6 = small_moment(m, 6, band.eps, band.q);

  const ArrayXd p1 = engine.derivative_real(pv, 1);
  const ArrayXd p2 = engine.derivative_real(pv, 2);
  const ArrayXd p3 = engine.derivative_real(pv, 3);
  const ArrayXd p4 = engine.derivative_real(pv, 4);

  const GridInterpolant F = GridInterpolant::make(f, TailModel::Zero);
  const GridInterpolant G = GridInterpolant::make(g, TailModel::Zero);
  const auto& P = gs.interp;
  const ArrayXd xs = grid.points();
  const Index n = grid.n;
  ArrayXd inner(n);
  parallel_for(n, [&](std::ptrdiff_t i) {
    const double x = xs[i];
    const double fi = fv[i], gi = gv[i];
    const SeriesCoef c = delta_product_series(df.d1[i], df.d2[i], df.d3[i], df.d4[i], df.d5[i],
                                              dg.d1[i], dg.d2[i], dg.d3[i], dg.d4[i], dg.d5[i]);
    // Even coefficients of delta f delta g phi(x+y).
    const double c2 = c.A2 * pv[i];
    const double c4 = c.A4 * pv[i] + c.A3 * p1[i] + c.A2 * p2[i] / 2.0;
    const double c6 = c.A6 * pv[i] + c.A5 * p1[i] + c.A4 * p2[i] / 2.0 + c.A3 * p3[i] / 6.0 +
                      c.A2 * p4[i] / 24.0;
    double v = c2 * s2 + c4 * s4 + c6 * s6;
    for (const double sign : {1.0, -1.0}) {
      v += band.integrate([&](double y) {
        const double z = x + sign * y;
        return (F(z) - fi) * (G(z) - gi) * P(z) * m.density(y);
      });
    }
    inner[i] = v * pv[i];
  });
  total += 0.5 * h * inner.sum();

  // Beyond-grid slab: weight W(z) = int_{x outside} phi(x) l(z-x) dx on
  // supp(f g), with phi evaluated through its tail model.
  double slab = 0.0;
  for (Index i = 0; i < n; ++i) {
    const double w = fv[i] * gv[i] * pv[i];
    if (w == 0.0) continue;
    const double z = xs[i];
    const double right = quad::integrate_to_infinity(
        [&](double s) { return P(grid.x_max + s) * m.density(grid.x_max + s - z); }, 1e-6,
        band.q).value;
    const double left = quad::integrate_to_infinity(
        [&](double s) { return P(grid.x_min - s) * m.density(grid.x_min - s - z); }, 1e-6,
        band.q).value;
    slab += w * (left + right);
  }
  total += 0.5 * h * slab;
  return total;
}

BeurlingDenyComponents beurling_deny_extract(const GroundState& gs,
                                             const GeneratingTriplet& t) {
  BeurlingDenyComponents c;
  const auto phi = [interp = gs.interp](double x) { return interp(x); };
  c.killing_density = [](double) { return 0.0; };
  if (t.a > 0.0) {
    const double a = t.a;
    c.diffusion_density = [phi, a](double x) { return 0.5 * a * phi(x) * phi(x); };
  } else {
    c.diffusion_density = [](double) { return 0.0; };
  }
  if (t.levy) {
    const LevyMeasure m = *t.levy;
    c.jump_density = [phi, m](double x, double z) {
      if (x == z) throw GridError("jump density requires x != z");
      return 0.5 * phi(x) * phi(z) * m.density(z - x);
    };
  } else {
    c.jump_density = [](double x, double z) {
      if (x == z) throw GridError("jump density requires x != z");
      return 0.0;
    };
  }
  return c;
}

double invariance_residual(const GridFunction& f, const GroundState& gs,
                           const GeneratingTriplet& t, const FormOptions& opt) {
  if (!(f.grid == gs.phi.grid)) throw GridError("invariance_residual: grid mismatch");
  require_compact_support(f, opt.support_tol, "invariance_residual(f)");

  const Grid& grid = f.grid;
  const double h = grid.spacing();
  const ArrayXd pv = gs.phi.values.real();
  GridFunction pf(grid, gs.phi.values * f.values);

  GeneratorOptions gopt;
  gopt.abs_tol = opt.abs_tol;
  gopt.rel_tol = opt.rel_tol;
  gopt.far_panel_width = opt.far_panel_width;
  GeneratorOptions gopt_phi = gopt;
  if (gs.improper) gopt_phi.tail = TailModel::Constant;

  const GridFunction l0_pf = apply_generator_quadrature(pf, t, gopt);
  const GridFunction l0_p = apply_generator_quadrature(gs.phi, t, gopt_phi);

  // int [Lf] phi^2 = int phi L0(phi f) - int (phi f) L0 phi over all of R.
  double total = h * (pv * l0_pf.values.real() - pf.values.real() * l0_p.values.real()).sum();

  // Beyond-grid slab of the first integrand: L0(phi f)(x) there is the pure
  // convolution of phi f against l(. - x); Fubini gives a weight on supp(phi f).
  if (t.levy) {
    quad::Options q;
    q.abs_tol = opt.abs_tol;
    q.rel_tol = opt.rel_tol;
    const auto& P = gs.interp;
    const LevyMeasure& m = *t.levy;
    const ArrayXd xs = grid.points();
    double slab = 0.0;
    for (Index i = 0; i < grid.n; ++i) {
      const double w = pf.values[i].real();
      if (w == 0.0) continue;
      const double z = xs[i];
      const double right = quad::integrate_to_infinity(
          [&](double s) { return P(grid.x_max + s) * m.density(grid.x_max + s - z); }, 1e-6,
          q).value;
      const double left = quad::integrate_to_infinity(
          [&](double s) { return P(grid.x_min - s) * m.density(grid.x_min - s - z); }, 1e-6,
          q).value;
      slab += w * (left + right);
    }
    total += h * slab;
  }
  return std::abs(total);
}

}  // namespace levymech
