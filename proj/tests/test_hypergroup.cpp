#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "hyper/hypergroup.hpp"
#include "hyper/rng.hpp"
#include "hyper/specfun.hpp"

using namespace hyper;
using std::numbers::pi;

namespace {

template <class F>
double simpson(F f, double a, double b, int n) {
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return s * h / 3.0;
}

std::vector<double> quarter_grid() {
  std::vector<double> g;
  for (int k = 1; k <= 12; ++k) g.push_back(0.25 * k);
  return g;
}

}  // namespace

TEST_CASE("instance metadata") {
  CHECK(instance_names().size() == 4);
  for (const auto& name : instance_names()) {
    const auto H = make_instance(name, 0.5);
    CHECK(H.name == name);
    CHECK(H.M0 >= 1.0);
    CHECK(H.plancherel_constant.has_value());
  }
  CHECK(make_instance("jacobi_sl2c").omega0 == 1.0);
  CHECK(make_instance("mehler_fock").omega0 == 0.5);
  CHECK(make_instance("bessel_kingman", 1.0).omega0 == 0.0);
  CHECK_THROWS_AS(make_instance("heisenberg"), UnknownInstance);
  CHECK_THROWS_AS(make_instance("bessel_kingman", -0.7), std::invalid_argument);
  CHECK_FALSE(make_instance("multiplicative").laplace_kernel.has_value());
}

TEST_CASE("jacobi character values") {
  const auto H = make_instance("jacobi_sl2c");
  CHECK(std::abs(H.character(1.0, 1.0) - std::sin(1.0) / std::sinh(1.0)) < 1e-15);
  CHECK(H.character(2.0, 0.0) == cplx(1.0));
  CHECK(std::abs(H.character(0.0, 2.0) - 2.0 / std::sinh(2.0)) < 1e-15);
  // phi_{+-i} is trivial
  for (double x : {0.1, 1.0, 5.0, 30.0}) {
    CHECK(std::abs(H.character(cplx(0, 1), x) - 1.0) < 1e-13);
    CHECK(std::abs(H.character(cplx(0, -1), x) - 1.0) < 1e-13);
  }
  // small arguments use series limits
  const cplx l(0.7, 0.3);
  const double x = 1e-6;
  const cplx direct = std::sin(l * x) / (l * std::sinh(x));
  CHECK(std::abs(H.character(l, x) - direct) < 1e-12);
}

TEST_CASE("bessel character: real and complex branches agree with series") {
  for (double g : {0.0, 0.5, 1.5}) {
    const auto H = make_instance("bessel_kingman", g);
    for (double z : {0.3, 2.0, 9.0}) {
      // direct hypergeometric series as oracle
      double term = 1.0, sum = 1.0;
      for (int k = 1; k < 80; ++k) {
        term *= -0.25 * z * z / (k * (k + g));
        sum += term;
      }
      CHECK(std::abs(H.character(z, 1.0).real() - sum) < 1e-12);
    }
    // lambda = i t gives the modified Bessel character, which is positive and increasing
    CHECK(H.character(cplx(0, 1.0), 2.0).real() > H.character(cplx(0, 1.0), 1.0).real());
  }
  // gamma = 3/2 has the closed form 3 (sin z - z cos z) / z^3 on both sides of the series radius
  for (double x : {2.0, 6.0, 12.0}) {
    const cplx z = cplx(3.0, 0.2) * x;
    const cplx ref = 3.0 * (std::sin(z) - z * std::cos(z)) / (z * z * z);
    CHECK(std::abs(bessel_kingman_character(1.5, cplx(3.0, 0.2), x) - ref) < 1e-9 * (1.0 + std::abs(ref)));
  }
  const cplx big = bessel_kingman_character(0.5, cplx(4.0, 0.5), 10.0);
  // gamma = 1/2: sin(z)/z in closed form
  const cplx w = cplx(4.0, 0.5) * 10.0;
  CHECK(std::abs(big - std::sin(w) / w) < 1e-9 * std::abs(std::sin(w) / w) + 1e-12);
}

TEST_CASE("point convolutions: identity, mass, support") {
  const auto mf = make_instance("mehler_fock");
  const auto id = mf.conv_point(1.7, 0.0);
  REQUIRE(id.is_atomic());
  CHECK(id.atoms.size() == 1);
  CHECK(id.atoms[0].location == 1.7);
  CHECK(id.atoms[0].weight == 1.0);

  const auto jac = make_instance("jacobi_sl2c");
  CHECK(std::abs(total_mass(jac.conv_point(1.0, 1.0), translate_spec()) - 1.0) < 1e-9);
  const auto one = [](double) { return 1.0; };
  for (double x : {0.3, 1.0, 4.0})
    for (double y : {0.2, 2.5}) CHECK(std::abs(translate(mf, one, x, y) - 1.0) < 1e-9);

  const auto s = mf.conv_point(1.0, 2.0);
  CHECK(s.support_lo == doctest::Approx(1.0));
  CHECK(s.support_hi == doctest::Approx(3.0));

  const auto mult = make_instance("multiplicative");
  const auto ident = [](double t) { return t; };
  CHECK(translate(mult, ident, 2.0, 3.0) == 6.0);
}

TEST_CASE("axioms hold on the quarter grid") {
  for (const auto& name : instance_names()) {
    const auto H = make_instance(name, 0.75);
    const auto rep = check_hypergroup_axioms(H, quarter_grid());
    INFO(name);
    CHECK(rep.pairs == 144);
    CHECK(rep.max_mass_violation < 1e-8);
    CHECK(rep.max_commutativity_violation < 1e-8);
    CHECK(rep.max_identity_violation < 1e-8);
    CHECK(rep.max_support_violation < 1e-8);
    CHECK(rep.passed(1e-8));
  }
  const auto exact = check_hypergroup_axioms(make_instance("multiplicative"), quarter_grid());
  CHECK(exact.max_mass_violation == 0.0);
  CHECK(exact.max_commutativity_violation == 0.0);
  CHECK(exact.max_identity_violation == 0.0);
}

TEST_CASE("translated characters factor") {
  const auto jac = make_instance("jacobi_sl2c");
  const auto phi = [&](double t) { return jac.character(1.3, t); };
  CHECK(std::abs(translate(jac, phi, 0.7, 1.1) - phi(0.7) * phi(1.1)) < 1e-7);

  for (const auto& name : instance_names()) {
    const auto H = make_instance(name, 0.3);
    const auto rep = check_multiplicativity(H, 24, 7);
    INFO(name << " worst at lambda=" << rep.worst_lambda_re << "+" << rep.worst_lambda_im << "i x=" << rep.worst_x
              << " y=" << rep.worst_y);
    CHECK(rep.trials == 24);
    CHECK(rep.max_scaled_error < 1e-6);
  }
}

TEST_CASE("multiplicativity report is identical serial and parallel") {
  const auto H = make_instance("mehler_fock");
  const auto a = check_multiplicativity(H, 8, 99, 0.95, 4.0, Exec::serial);
  const auto b = check_multiplicativity(H, 8, 99, 0.95, 4.0, Exec::parallel);
  CHECK(a.max_scaled_error == b.max_scaled_error);
  CHECK(a.worst_x == b.worst_x);
}

TEST_CASE("Laplace representation reproduces the characters") {
  for (const auto& name : {"jacobi_sl2c", "mehler_fock", "bessel_kingman"}) {
    for (double g : {0.0, 1.25}) {
      const auto H = make_instance(name, g);
      const auto& tau = *H.laplace_kernel;
      for (double x : {0.0, 0.4, 1.5, 3.0}) {
        for (double l : {0.0, 0.8, 2.5}) {
          const double v = integrate_measure([l](double t) { return std::cos(l * t); }, tau(x), translate_spec()).value;
          INFO(name << " g=" << g << " x=" << x << " lambda=" << l);
          CHECK(std::abs(v - H.character(l, x).real()) < 1e-7);
        }
        // total mass of tau_x is phi_0(x)
        CHECK(std::abs(total_mass(tau(x), translate_spec()) - H.phi0(x)) < 1e-8);
        // the growth bound with omega0
        const double w = H.omega0;
        const double c = integrate_measure([w](double t) { return std::cosh(w * t); }, tau(x), translate_spec()).value;
        CHECK(c <= H.M0 + 1e-9);
      }
    }
  }
  const auto jac = make_instance("jacobi_sl2c");
  for (double x : {0.5, 2.0, 6.0}) {
    const double c = integrate_measure([](double t) { return std::cosh(t); }, (*jac.laplace_kernel)(x), translate_spec()).value;
    CHECK(std::abs(c - 1.0) < 1e-9);
  }
}

TEST_CASE("Haar measure is translation invariant") {
  const double R = 2.0;
  const auto bump = [R](double t) { return t < R ? std::pow(1.0 - (t / R) * (t / R), 4) : 0.0; };
  for (const auto& name : {"jacobi_sl2c", "mehler_fock", "bessel_kingman"}) {
    const auto H = make_instance(name, 0.5);
    QuadSpec outer;
    outer.abs_tol = 1e-11;
    outer.rel_tol = 1e-10;
    const double base = integrate([&](double y) { return bump(y) * H.haar_density(y); }, 0.0, R, outer).value;
    for (double x : {0.5, 1.0, 2.5}) {
      auto shifted = [&](double y) { return translate(H, bump, x, y, translate_spec(), R) * H.haar_density(y); };
      const double lo = std::max(0.0, x - R);
      const double v = integrate(shifted, lo, x + R, outer).value;
      INFO(name << " x=" << x);
      CHECK(std::abs(v - base) < 1e-6 * std::max(1.0, base));
    }
  }
}

TEST_CASE("character bound inside the strip") {
  CounterRng rng(2024);
  for (const auto& name : instance_names()) {
    const auto H = make_instance(name, 0.5);
    for (int k = 0; k < 40; ++k) {
      const double alpha = rng.uniform();
      const cplx l(rng.uniform(0.0, 5.0), alpha * H.omega0 * rng.uniform(-1.0, 1.0));
      const double x = H.inverse_involution ? std::exp(rng.uniform(-3.0, 3.0)) : rng.uniform(0.0, 6.0);
      const double bound = std::pow(H.M0, alpha) * std::pow(H.phi0(x), 1.0 - alpha);
      INFO(name << " lambda=" << l << " x=" << x);
      CHECK(std::abs(H.character(l, x)) <= bound * (1.0 + 1e-10));
    }
  }
}

TEST_CASE("grid interpolation is exact for panel polynomials") {
  const auto H = make_instance("jacobi_sl2c");
  const auto grid = Grid::composite(H, 0.0, 4.0, 8, 10);
  CHECK(grid.size() == 80);
  const auto f = GridFunction::sample(grid, [](double x) { return cplx(x * x * x - 2 * x, x); });
  for (double x : {0.0, 0.13, 1.0, 2.71, 4.0}) CHECK(std::abs(f(x) - cplx(x * x * x - 2 * x, x)) < 1e-12);
  CHECK(f(4.5) == cplx(0.0));
  double w = 0.0;
  for (double v : grid.haar_weights) w += v;
  CHECK(std::abs(w - (std::sinh(8.0) / 4.0 - 2.0)) < 1e-9 * w);
  const auto g = GridFunction::sample(grid, [](double x) { return std::exp(-x); });
  CHECK(g.sup_norm() == doctest::Approx(std::exp(-grid.nodes[0])));
  const double l2 = simpson([](double x) { return std::exp(-2 * x) * std::sinh(x) * std::sinh(x); }, 0.0, 4.0, 4000);
  CHECK(g.lp_norm(2.0) == doctest::Approx(std::sqrt(l2)).epsilon(1e-9));

  const auto mg = Grid::composite(make_instance("multiplicative"), 0.1, 10.0, 4, 8);
  CHECK(mg.log_scale);
  double lw = 0.0;
  for (double v : mg.haar_weights) lw += v;
  CHECK(std::abs(lw - 2.0 * std::log(10.0)) < 1e-12);
}

TEST_CASE("convolution with a narrow bump approximates the identity") {
  const auto H = make_instance("jacobi_sl2c");
  const auto grid = Grid::composite(H, 0.0, 3.0, 30, 8);
  const double R = 0.1;
  auto f = GridFunction::sample(grid, [R](double y) { return y < R ? std::pow(1.0 - (y / R) * (y / R), 4) : 0.0; });
  double mass = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) mass += grid.haar_weights[i] * f.values[i].real();
  for (auto& v : f.values) v /= mass;
  const auto g = GridFunction::sample(grid, [](double x) { return std::exp(-x * x); });
  const auto fg = convolve(H, f, g, Exec::serial);
  double err = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i)
    if (grid.nodes[i] < 2.5) err = std::max(err, std::abs(fg.values[i] - g.values[i]));
  CHECK(err < 2e-2);

  const auto par = convolve(H, f, g, Exec::parallel);
  for (std::size_t i = 0; i < grid.size(); ++i) CHECK(par.values[i] == fg.values[i]);
}

TEST_CASE("multiplicative convolution is Mellin convolution") {
  const auto H = make_instance("multiplicative");
  const auto grid = Grid::composite(H, std::exp(-9.0), std::exp(9.0), 24, 12);
  const auto gauss = [](double x) { return std::exp(-std::log(x) * std::log(x)); };
  const auto f = GridFunction::sample(grid, gauss);
  const auto fg = convolve(H, f, f);
  // int e^{-v^2} e^{-(u-v)^2} dv = sqrt(pi/2) e^{-u^2/2}
  double err = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double u = std::log(grid.nodes[i]);
    if (std::abs(u) > 6.0) continue;
    err = std::max(err, std::abs(fg.values[i] - std::sqrt(pi / 2) * std::exp(-u * u / 2)));
  }
  CHECK(err < 1e-7);
}
