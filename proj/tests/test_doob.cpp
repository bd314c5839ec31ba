#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "levymech/cauchy_examples.hpp"
#include "levymech/doob.hpp"

using namespace levymech;

TEST_CASE("ground state construction enforces the contract") {
  const Grid g = Grid::symmetric(10.0, 256);

  SUBCASE("unnormalized proper states are rejected") {
    auto phi = sample_real(g, [](double x) { return 2.0 / (1.0 + x * x); });
    CHECK_THROWS(GroundState::make(std::move(phi), 0.0));
  }
  SUBCASE("non-positive states are rejected") {
    auto phi = sample_real(g, [](double x) { return x; });
    CHECK_THROWS(GroundState::make(std::move(phi), 0.0));
  }
  SUBCASE("positivity floor") {
    auto phi = sample_real(g, [](double x) { return std::exp(-10.0 * x * x) + 1e-15; });
    CHECK_THROWS(GroundState::make(std::move(phi), 0.0));
  }
  SUBCASE("improper states skip normalization") {
    const GroundState one = GroundState::lebesgue(g);
    CHECK(one.improper);
    CHECK(one.phi_at(3.33) == 1.0);
  }
  SUBCASE("preset states are normalized within 1e-6") {
    for (const auto& name : example_names()) {
      const auto ex = example_from_name(name, 1.0);
      const GroundState gs = ex.ground_state();
      CHECK(std::abs(gs.mass() - 1.0) < 1e-6);
    }
  }
}

TEST_CASE("kernel evaluation matches the closed-form displays") {
  const auto ex = student3(1.0);

  SUBCASE("closed-form kernel is exact") {
    const auto k = ex.kernel();
    CHECK(k.gamma(0.0, 0.5) == doctest::Approx(1.25).epsilon(1e-14));
    CHECK(k.gamma(0.0, 2.0) == 0.0);
    CHECK(k.gamma(0.0, -2.0) == 0.0);
    CHECK(k.lambda_density(0.0, 1.0) == doctest::Approx(1.0 / (2.0 * M_PI)).epsilon(1e-14));
    CHECK_THROWS(k.gamma(0.0, 0.0));
    CHECK_THROWS(k.lambda_density(0.0, 0.0));
    // Consistency with the ExampleSet displays over a sweep.
    for (double x : {-3.0, -0.4, 0.0, 1.7}) {
      for (double y : {-0.9, -0.3, 0.2, 0.8}) {
        CHECK(k.gamma(x, y) == doctest::Approx(ex.gamma(x, y)).epsilon(1e-13));
        CHECK(k.lambda_density(x, y) ==
              doctest::Approx(ex.lambda_density(x, y)).epsilon(1e-13));
      }
    }
  }

  SUBCASE("grid-backed kernel agrees at on-grid offsets to near machine precision") {
    const GroundState gs = ex.ground_state();
    const double h = gs.phi.h();
    const double y = 26.0 * h;  // on-grid shift
    auto [gamma, lambda] = levy_type_kernel_eval(gs, ex.triplet(), 0.0, y);
    CHECK(gamma == doctest::Approx(ex.gamma(0.0, y)).epsilon(1e-12));
    CHECK(lambda == doctest::Approx(ex.lambda_density(0.0, y)).epsilon(1e-12));
    // Off-grid: limited by cubic interpolation only.
    auto [g2, l2] = levy_type_kernel_eval(gs, ex.triplet(), 0.0, 0.5);
    CHECK(g2 == doctest::Approx(ex.gamma(0.0, 0.5)).epsilon(1e-7));
    CHECK(l2 == doctest::Approx(ex.lambda_density(0.0, 0.5)).epsilon(1e-7));
  }
}

TEST_CASE("potential reconstruction") {
  SUBCASE("student3: closed form on [-5,5] within 1e-3") {
    const auto ex = student3(1.0);
    const GroundState gs = ex.ground_state();  // n = 4096, x_max = 40
    const GridFunction V = potential_from_ground_state(gs, ex.triplet());
    CHECK(V.is_real(1e-12));
    double sup = 0.0;
    const Grid& g = gs.phi.grid;
    for (Index i = 0; i < g.n; ++i) {
      const double x = g.point(i);
      if (std::abs(x) > 5.0) continue;
      sup = std::max(sup, std::abs(V.values[i].real() - ex.potential(x)));
    }
    CHECK(sup < 1e-3);
    const Index mid = g.n / 2;
    CHECK(std::abs(V.values[mid].real() - (-2.0)) < 1e-3);
  }

  SUBCASE("improper phi == 1 gives V identically E") {
    const Grid g = Grid::symmetric(20.0, 512);
    const GroundState one = GroundState::lebesgue(g, 0.0);
    const GridFunction V = potential_from_ground_state(one, GeneratingTriplet::cauchy());
    CHECK(V.values.abs().maxCoeff() < 1e-10);
  }

  SUBCASE("gaussian oscillator control: V = x^2/2 within 1e-6 for |x| <= 4") {
    const Grid g = Grid::symmetric(7.0, 1024);
    const double nrm = std::pow(M_PI, -0.25);
    auto gs = GroundState::make(
        sample_real(g, [nrm](double x) { return nrm * std::exp(-x * x / 2.0); }), 0.5);
    const GridFunction V = potential_from_ground_state(gs, GeneratingTriplet::gaussian(1.0));
    double sup = 0.0;
    for (Index i = 0; i < g.n; ++i) {
      const double x = g.point(i);
      if (std::abs(x) > 4.0) continue;
      sup = std::max(sup, std::abs(V.values[i].real() - x * x / 2.0));
    }
    CHECK(sup < 1e-6);
  }

  SUBCASE("potential is gauge free: shifting E shifts V rigidly") {
    const auto ex = student3(1.0);
    const Grid g = Grid::symmetric(40.0, 1024);
    GroundState g1 = ex.ground_state(g);
    GroundState g2 = ex.ground_state(g);
    g2.energy = g1.energy + 3.25;
    const GridFunction v1 = potential_from_ground_state(g1, ex.triplet());
    const GridFunction v2 = potential_from_ground_state(g2, ex.triplet());
    const double drift =
        ((v2.values - v1.values).real() - 3.25).abs().maxCoeff();
    CHECK(drift < 1e-12);
  }
}

TEST_CASE("levy-type generator routes") {
  const auto ex = student3(1.0);
  const Grid g = Grid::symmetric(40.0, 2048);
  const GroundState gs = ex.ground_state(g);
  const auto t = ex.triplet();

  SUBCASE("constants are annihilated") {
    const GridFunction one = sample_real(g, [](double) { return 1.0; });
    const GridFunction l51 = apply_levy_type_generator(gs, t, one);
    const GridFunction l53 = apply_levy_type_generator_kernel(gs, t, one);
    CHECK(l51.values.abs().maxCoeff() < 1e-8);
    CHECK(l53.values.abs().maxCoeff() < 1e-8);
  }

  SUBCASE("phi == 1 degenerates to the base generator exactly") {
    const GroundState one = GroundState::lebesgue(g);
    const GridFunction f =
        sample_real(g, [](double x) { return std::exp(-(x - 1.0) * (x - 1.0)); });
    const GridFunction lf = apply_levy_type_generator(one, t, f);
    const GridFunction l0f = apply_generator_quadrature(f, t);
    CHECK((lf.values - l0f.values).abs().maxCoeff() == 0.0);  // bit-exact collapse
  }

  SUBCASE("conjugation route and kernel route agree") {
    const GridFunction f =
        sample_real(g, [](double x) { return std::exp(-(x - 0.5) * (x - 0.5) / 4.0); });
    const GridFunction l51 = apply_levy_type_generator(gs, t, f);
    const GridFunction l53 = apply_levy_type_generator_kernel(gs, t, f);
    CHECK((l51.values - l53.values).abs().maxCoeff() < 1e-3);
  }
}

TEST_CASE("hamiltonian") {
  SUBCASE("ground state is an eigenvector: student3") {
    // Wide box: the spectral route acts on the periodized phi, and the heavy
    // tail needs room before the image terms drop below the tolerance.
    const auto ex = student3(1.0);
    const GroundState gs = ex.ground_state(Grid::symmetric(160.0, 16384));
    const Hamiltonian H = make_hamiltonian(gs, ex.triplet());
    const GridFunction Hphi = H.apply(gs.phi);
    const double resid =
        GridFunction(gs.phi.grid, Hphi.values - ex.energy * gs.phi.values).l2_norm() /
        gs.phi.l2_norm();
    CHECK(resid < 1e-3);
  }

  SUBCASE("plane wave in the free gaussian case: H f = p^2/2 f") {
    const Grid g = Grid::symmetric(20.0, 512);
    const GroundState one = GroundState::lebesgue(g);
    const auto t = GeneratingTriplet::gaussian(1.0);
    const Hamiltonian H = make_hamiltonian(one, t);
    const double p = 2.0 * M_PI * 5.0 / g.length();  // on-lattice momentum
    const GridFunction f = sample(g, [p](double x) { return std::exp(Complex(0.0, p * x)); });
    const GridFunction Hf = H.apply(f);
    const GridFunction expect(g, (0.5 * p * p) * f.values);
    CHECK((Hf.values - expect.values).abs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("gaussian drift") {
  const Grid g = Grid::symmetric(7.0, 1024);
  const double nrm = std::pow(M_PI, -0.25);
  auto gs = GroundState::make(
      sample_real(g, [nrm](double x) { return nrm * std::exp(-x * x / 2.0); }), 0.5);
  const GridFunction b = gaussian_drift(gs);
  for (Index i = 0; i < g.n; i += 37) {
    const double x = g.point(i);
    if (std::abs(x) > 4.0) continue;
    CHECK(std::abs(b.values[i].real() + x) < 1e-6);
  }

  const GroundState one = GroundState::lebesgue(g);
  CHECK(gaussian_drift(one).values.abs().maxCoeff() < 1e-12);

  const auto ex = student3(1.0);
  const GroundState st = ex.ground_state();
  const GridFunction bs = gaussian_drift(st);
  CHECK(std::abs(bs.values[st.phi.grid.n / 2].real()) < 1e-10);  // even phi
}

TEST_CASE("energy from decay recovers the student3 origin") {
  const auto ex = student3(1.0);
  const GroundState gs = ex.ground_state();
  const auto est = estimate_energy_from_decay(gs, ex.triplet());
  CHECK(std::abs(est.value - ex.energy) < 5e-3);
  CHECK(est.spread < 5e-3);
}
