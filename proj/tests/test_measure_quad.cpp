#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "hyper/measure.hpp"
#include "hyper/quadrature.hpp"
#include "hyper/rng.hpp"

using namespace hyper;

namespace {

// Composite Simpson, independent of the engine under test.
template <class F>
double simpson(F f, double a, double b, int n) {
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return s * h / 3.0;
}

// Integral of g(t)/sqrt(cosh x - cosh t) over [0, x]: plain part on [0, x/2],
// then s = sqrt(cosh x - cosh t) on [x/2, x], which makes the integrand smooth.
template <class G>
double cosh_sqrt_oracle(G g, double x) {
  const double c = x / 2.0;
  const double plain = simpson([&](double t) { return g(t) / std::sqrt(std::cosh(x) - std::cosh(t)); }, 0.0, c, 4000);
  const double smax = std::sqrt(std::cosh(x) - std::cosh(c));
  const double sub = simpson(
      [&](double s) {
        const double t = std::acosh(std::cosh(x) - s * s);
        return 2.0 * g(t) / std::sinh(t);
      },
      0.0, smax, 4000);
  return plain + sub;
}

}  // namespace

TEST_CASE("integrate handles smooth integrands") {
  CHECK(integrate([](double) { return 1.0; }, 0.0, 1.0).value == doctest::Approx(1.0).epsilon(1e-14));
  const double v = integrate([](double t) { return std::cos(t); }, -1.0, 1.0).value;
  CHECK(std::abs(v - 2.0 * std::sin(1.0)) < 1e-13);
  CHECK(integrate([](double) { return 3.0; }, 2.0, 2.0).value == 0.0);
}

TEST_CASE("complex and matrix integrands share one mesh") {
  auto f = [](double t) { return cplx(std::cos(t), std::sin(t)); };
  const cplx v = integrate(f, 0.0, 1.0).value;
  CHECK(std::abs(v - cplx(std::sin(1.0), 1.0 - std::cos(1.0))) < 1e-13);
  auto m = [](double t) {
    Eigen::Matrix2cd r;
    r << std::exp(t), 0.0, t, t * t;
    return r;
  };
  const Eigen::Matrix2cd r = integrate(m, 0.0, 1.0).value;
  CHECK(std::abs(r(0, 0) - (std::exp(1.0) - 1.0)) < 1e-13);
  CHECK(std::abs(r(1, 0) - 0.5) < 1e-14);
  CHECK(std::abs(r(1, 1) - 1.0 / 3.0) < 1e-14);
}

TEST_CASE("inverse sqrt cosh endpoint matches the substitution oracle") {
  const double x = 1.0;
  QuadSpec spec;
  spec.upper = EndpointWeight::cosh_gap();
  const double v = integrate([](double) { return 1.0; }, 0.0, x, spec).value;
  const double oracle = cosh_sqrt_oracle([](double) { return 1.0; }, x);
  CHECK(std::abs(v - oracle) < 1e-8);
}

TEST_CASE("substitution consistency on a random battery") {
  CounterRng rng(20241);
  for (int k = 0; k < 12; ++k) {
    const double x = rng.uniform(0.2, 3.0);
    const double a = rng.uniform(-2.0, 2.0);
    const double b = rng.uniform(0.5, 3.0);
    auto g = [&](double t) { return std::cos(b * t) + a * t * t; };
    QuadSpec spec;
    spec.upper = EndpointWeight::cosh_gap();
    const double v = integrate(g, 0.0, x, spec).value;
    CHECK(std::abs(v - cosh_sqrt_oracle(g, x)) < 1e-8);
  }
}

TEST_CASE("cosh flags at both ends") {
  // With u = cosh t = (A+B)/2 + (B-A)/2 cos(phi) the weight
  // 1/sqrt((cosh t - A)(B - cosh t)) dt becomes dphi / sinh t.
  const double a = 0.5, b = 1.7;
  const double A = std::cosh(a), B = std::cosh(b);
  auto g = [](double t) { return std::cos(0.8 * t) + t; };
  const double oracle = simpson(
      [&](double phi) {
        const double u = 0.5 * (A + B) + 0.5 * (B - A) * std::cos(phi);
        return g(std::acosh(u)) / std::sqrt(u * u - 1.0);
      },
      0.0, std::numbers::pi, 2000);
  QuadSpec spec;
  spec.lower = EndpointWeight::cosh_gap();
  spec.upper = EndpointWeight::cosh_gap();
  CHECK(std::abs(integrate(g, a, b, spec).value - oracle) < 1e-9);
}

TEST_CASE("polynomial endpoint weights") {
  QuadSpec spec;
  spec.upper = EndpointWeight::poly_gap();
  CHECK(std::abs(integrate([](double) { return 1.0; }, 0.0, 1.0, spec).value - 2.0) < 1e-12);
  spec = QuadSpec{}.with_lower(EndpointWeight::poly_gap(-0.75));
  CHECK(std::abs(integrate([](double) { return 1.0; }, 0.0, 1.0, spec).value - 4.0) < 1e-11);
  // Beta function B(1/2, 1/2) = pi with both ends weighted.
  spec = QuadSpec{}.with_lower(EndpointWeight::poly_gap()).with_upper(EndpointWeight::poly_gap());
  CHECK(std::abs(integrate([](double) { return 1.0; }, 0.0, 1.0, spec).value - std::numbers::pi) < 1e-11);
}

TEST_CASE("cosh weight with general exponent") {
  // (cosh x - cosh t)^{1/2} sinh t integrates to (2/3)(cosh x - 1)^{3/2}.
  const double x = 2.0;
  QuadSpec spec = QuadSpec{}.with_upper(EndpointWeight::cosh_gap(0.5));
  const double v = integrate([](double t) { return std::sinh(t); }, 0.0, x, spec).value;
  CHECK(std::abs(v - (2.0 / 3.0) * std::pow(std::cosh(x) - 1.0, 1.5)) < 1e-10);
  spec = QuadSpec{}.with_upper(EndpointWeight::cosh_gap(-0.8));
  const double w = integrate([](double t) { return std::sinh(t); }, 0.0, x, spec).value;
  CHECK(std::abs(w - 5.0 * std::pow(std::cosh(x) - 1.0, 0.2)) < 1e-9);
}

TEST_CASE("budget exhaustion raises NonConvergence") {
  QuadSpec spec;
  spec.max_subdivisions = 3;
  CHECK_THROWS_AS(integrate([](double t) { return std::sin(200.0 * t * t); }, 0.0, 5.0, spec), NonConvergence);
}

TEST_CASE("integrate_measure on atoms and densities") {
  RadonMeasure delta = RadonMeasure::point(2.0, 0.5);
  CHECK(integrate_measure([](double) { return 1.0; }, delta).value == 0.5);

  const double x = 1.0;
  RadonMeasure tau;
  tau.support_lo = -x;
  tau.support_hi = x;
  tau.densities.push_back({-x, x, [x](double) { return 1.0 / (2.0 * std::sinh(x)); }, {}, {}});
  const double v = integrate_measure([](double t) { return std::cos(t); }, tau).value;
  CHECK(std::abs(v - std::sin(1.0) / std::sinh(1.0)) < 1e-12);

  const double x3 = 3.0;
  RadonMeasure tau3;
  tau3.support_lo = -x3;
  tau3.support_hi = x3;
  tau3.densities.push_back({-x3, x3, [x3](double) { return 1.0 / (2.0 * std::sinh(x3)); }, {}, {}});
  CHECK(std::abs(integrate_measure([](double t) { return std::cosh(t); }, tau3).value - 1.0) < 1e-12);
}

TEST_CASE("integrate_measure is linear and positive") {
  RadonMeasure mu;
  mu.support_lo = 0.0;
  mu.support_hi = 2.0;
  mu.atoms.push_back({0.5, 0.25});
  mu.densities.push_back({0.0, 2.0, [](double t) { return 1.0 + t; }, {}, EndpointWeight::cosh_gap()});
  mu.validate();
  auto f = [](double t) { return std::exp(-t); };
  auto g = [](double t) { return t * t; };
  const double a = 1.7, b = -0.3;
  const double lhs = integrate_measure([&](double t) { return a * f(t) + b * g(t); }, mu).value;
  const double rhs = a * integrate_measure(f, mu).value + b * integrate_measure(g, mu).value;
  CHECK(std::abs(lhs - rhs) < 1e-9);
  CHECK(integrate_measure([](double t) { return t * t; }, mu).value >= -1e-10);
}

TEST_CASE("pushforward pieces integrate in the auxiliary variable") {
  RadonMeasure mu;
  mu.support_lo = 0.0;
  mu.support_hi = 1.0;
  mu.pushforwards.push_back({0.0, std::numbers::pi, [](double th) { return std::sin(th / 2.0); },
                             [](double th) { return 0.5 * std::sin(th); }, {}, {}});
  CHECK(std::abs(total_mass(mu) - 1.0) < 1e-13);
}

TEST_CASE("semi-infinite integrals") {
  const double e = integrate_semi_infinite([](double x) { return std::exp(-x); }, 0.0, Decay::exponential).value;
  CHECK(std::abs(e - 1.0) < 1e-12);
  QuadSpec spec;
  spec.rel_tol = 1e-8;
  const double d = integrate_semi_infinite([](double x) { return x == 0.0 ? 1.0 : std::sin(x) / x; }, 0.0,
                                           Decay::oscillatory, spec)
                       .value;
  CHECK(std::abs(d - std::numbers::pi / 2.0) < 1e-7);
  CHECK_THROWS_AS(integrate_semi_infinite([](double x) { return std::exp(0.1 * x); }, 0.0, Decay::exponential),
                  NonConvergence);
}

TEST_CASE("neville extrapolation is exact on polynomials") {
  std::vector<double> h = {0.4, 0.2, 0.1, 0.05};
  std::vector<double> v;
  for (double t : h) v.push_back(3.0 - 2.0 * t + 0.5 * t * t * t);
  CHECK(std::abs(neville_to_zero(h, v).first - 3.0) < 1e-13);
}

TEST_CASE("gauss legendre integrates polynomials exactly") {
  auto [x, w] = gauss_legendre(12);
  double s = 0.0;
  for (int i = 0; i < 12; ++i) s += w[i] * std::pow(x[i], 22);
  CHECK(std::abs(s - 2.0 / 23.0) < 1e-15);
}
