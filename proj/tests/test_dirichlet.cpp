#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "levymech/cauchy_examples.hpp"
#include "levymech/dirichlet.hpp"

using namespace levymech;

namespace {

GridFunction bump(const Grid& g, double center, double width) {
  return sample_real(g, [center, width](double x) {
    const double z = (x - center) / width;
    return std::exp(-z * z);
  });
}

double simpson(const std::function<double(double)>& f, double a, double b, int n) {
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 == 1 ? 4.0 : 2.0);
  return s * h / 3.0;
}

}  // namespace

TEST_CASE("gaussian form equals the gradient integral") {
  const Grid g = Grid::symmetric(40.0, 2048);
  const GridFunction f = bump(g, 0.0, 1.0);
  const auto t = GeneratingTriplet::gaussian(1.0);
  // Oracle: (1/2) int (f')^2 with f' = -2 z e^{-z^2} by Simpson.
  const double oracle = 0.5 * simpson(
                                  [](double x) {
                                    const double d = -2.0 * x * std::exp(-x * x);
                                    return d * d;
                                  },
                                  -12.0, 12.0, 20000);
  CHECK(form_levy(f, f, t) == doctest::Approx(oracle).epsilon(1e-8));
  CHECK(form_levy(f, f, t) > 0.0);
}

TEST_CASE("constants give zero form") {
  const Grid g = Grid::symmetric(20.0, 512);
  const GridFunction one = sample_real(g, [](double) { return 1.0; });
  const GridFunction f = bump(g, 1.0, 2.0);
  CHECK(form_levy(one, f, GeneratingTriplet::cauchy()) == 0.0);
  CHECK(form_levy(one, one, GeneratingTriplet::gaussian(2.0)) == 0.0);
}

TEST_CASE("non-compact input is rejected with the offender named") {
  const Grid g = Grid::symmetric(10.0, 256);
  const GridFunction slow = sample_real(g, [](double x) { return 1.0 / (1.0 + x * x); });
  const GridFunction f = bump(g, 0.0, 1.0);
  CHECK_THROWS_WITH_AS(form_levy(slow, f, GeneratingTriplet::cauchy()),
                       doctest::Contains("form_levy(f)"), GridError);
}

TEST_CASE("form-generator duality, lebesgue case") {
  const Grid g = Grid::symmetric(40.0, 2048);
  const auto t = GeneratingTriplet::cauchy();
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> cdist(-4.0, 4.0), wdist(1.0, 3.0);
  for (int k = 0; k < 4; ++k) {
    const GridFunction f = bump(g, cdist(rng), wdist(rng));
    const GridFunction gg = bump(g, cdist(rng), wdist(rng));
    const double form = form_levy(f, gg, t);
    const GridFunction l0f = apply_generator_quadrature(f, t);
    const double dual = -inner_product(l0f, gg).real();
    CHECK(std::abs(form - dual) < 1e-6);
    // Symmetry under argument swap.
    CHECK(form == form_levy(gg, f, t));
  }
}

TEST_CASE("doob form: duality, symmetry, cauchy-schwarz") {
  const auto ex = student3(1.0);
  const Grid g = Grid::symmetric(40.0, 2048);
  const GroundState gs = ex.ground_state(g);
  const auto t = ex.triplet();

  const GridFunction f = bump(g, 0.5, 1.5);
  const GridFunction q = bump(g, -1.0, 2.0);

  const double e_fq = form_doob(f, q, gs, t);
  const double e_qf = form_doob(q, f, gs, t);
  CHECK(e_fq == e_qf);

  const double e_ff = form_doob(f, f, gs, t);
  const double e_qq = form_doob(q, q, gs, t);
  CHECK(e_ff > 0.0);
  CHECK(e_qq > 0.0);
  CHECK(e_fq * e_fq <= e_ff * e_qq * (1.0 + 1e-12));

  // E(f,g) = -<Lf, g>_mu with mu = phi^2 dx.
  const GridFunction lf = apply_levy_type_generator(gs, t, f);
  const ArrayXd mu = gs.phi.values.real().square();
  const double dual = -(f.grid.spacing() *
                        (lf.values.real() * q.values.real() * mu).sum());
  CHECK(std::abs(e_fq - dual) < 1e-3 * f.l2_norm() * q.l2_norm());

  // mu-symmetry of the generator.
  const GridFunction lq = apply_levy_type_generator(gs, t, q);
  const double a_ = f.grid.spacing() * (lf.values.real() * q.values.real() * mu).sum();
  const double b_ = f.grid.spacing() * (lq.values.real() * f.values.real() * mu).sum();
  CHECK(std::abs(a_ - b_) < 1e-6);

  // Negativity on the diagonal.
  const double self = f.grid.spacing() * (lf.values.real() * f.values.real() * mu).sum();
  CHECK(self < 1e-8);
}

TEST_CASE("beurling-deny components") {
  const auto ex = student3(1.0);
  const GroundState gs = ex.ground_state();
  const auto t = ex.triplet();
  const auto c = beurling_deny_extract(gs, t);

  SUBCASE("pure-jump case: J = phi(x) phi(z) l(z-x)/2, no diffusion/killing") {
    // Oracle: phi(0) = sqrt(2/pi), phi(1) = sqrt(2/pi)/2, l(1) = 1/pi.
    const double expected = 0.5 * std::sqrt(2.0 / M_PI) * (std::sqrt(2.0 / M_PI) / 2.0) *
                            (1.0 / M_PI);
    CHECK(c.jump_density(0.0, 1.0) == doctest::Approx(expected).epsilon(1e-9));
    CHECK(c.diffusion_density(0.3) == 0.0);
    CHECK(c.killing_density(0.3) == 0.0);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> xs(-5.0, 5.0);
    for (int i = 0; i < 20; ++i) {
      const double x = xs(rng), z = xs(rng);
      if (std::abs(x - z) < 1e-3) continue;
      CHECK(c.jump_density(x, z) == doctest::Approx(c.jump_density(z, x)).epsilon(1e-12));
      CHECK(c.jump_density(x, z) >= 0.0);
    }
    CHECK_THROWS(c.jump_density(1.0, 1.0));
  }

  SUBCASE("gaussian case: diffusion density (a/2) phi^2, zero jump") {
    const Grid g = Grid::symmetric(7.0, 1024);
    const double nrm = std::pow(M_PI, -0.25);
    auto gauss_gs = GroundState::make(
        sample_real(g, [nrm](double x) { return nrm * std::exp(-x * x / 2.0); }), 0.5);
    const auto tg = GeneratingTriplet::gaussian(1.0);
    const auto cg = beurling_deny_extract(gauss_gs, tg);
    // The integrated-by-parts form carries a/2; at x = 0 this is phi(0)^2/2.
    CHECK(cg.diffusion_density(0.0) ==
          doctest::Approx(0.5 * nrm * nrm).epsilon(1e-9));
    CHECK(cg.jump_density(0.0, 1.0) == 0.0);

    // The decomposition reproduces the form: int f' g' D dx == form.
    const GridFunction f = bump(g, 0.3, 0.8);
    const GridFunction q = bump(g, -0.2, 1.1);
    const SpectralEngine engine(g);
    const ArrayXd f1 = engine.derivative_real(f.values.real(), 1);
    const ArrayXd q1 = engine.derivative_real(q.values.real(), 1);
    ArrayXd dens(g.n);
    for (Index i = 0; i < g.n; ++i) dens[i] = cg.diffusion_density(g.point(i));
    const double assembled = g.spacing() * (f1 * q1 * dens).sum();
    CHECK(assembled == doctest::Approx(form_doob(f, q, gauss_gs, tg)).epsilon(1e-10));
  }
}

TEST_CASE("jump form is finite and stable under refinement") {
  const auto ex = student3(1.0);
  const auto t = ex.triplet();
  const Grid g1 = Grid::symmetric(40.0, 1024);
  const Grid g2 = Grid::symmetric(40.0, 2048);
  const double v1 = form_doob(bump(g1, 0.5, 1.5), bump(g1, 0.5, 1.5), ex.ground_state(g1), t);
  const double v2 = form_doob(bump(g2, 0.5, 1.5), bump(g2, 0.5, 1.5), ex.ground_state(g2), t);
  CHECK(std::isfinite(v1));
  CHECK(std::abs(v1 - v2) < 0.01 * std::abs(v2));
}

TEST_CASE("invariance residual") {
  const auto ex = student3(1.0);
  const Grid g = Grid::symmetric(40.0, 2048);
  const GroundState gs = ex.ground_state(g);
  const auto t = ex.triplet();

  SUBCASE("student3 bump vanishes") {
    const GridFunction f = bump(g, 0.7, 1.5);
    CHECK(invariance_residual(f, gs, t) < 1e-6);
  }
  SUBCASE("zero input") {
    const GridFunction z = sample_real(g, [](double) { return 0.0; });
    CHECK(invariance_residual(z, gs, t) == 0.0);
  }
  SUBCASE("lebesgue case: zero spectral mode") {
    const GroundState one = GroundState::lebesgue(g);
    const GridFunction f = bump(g, 0.0, 2.0);
    CHECK(invariance_residual(f, one, t) < 1e-6);
  }
}
