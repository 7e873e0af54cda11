#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "hyper/geom.hpp"

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

// I_k(x) = int_0^x sinh^k, from I_0 = x, I_1 = cosh x - 1 and
// I_k = sinh^{k-1} cosh / k - ((k-1)/k) I_{k-2}.
double sinh_power_recurrence(int k, double x) {
  if (k == 0) return x;
  if (k == 1) return std::cosh(x) - 1.0;
  return std::pow(std::sinh(x), k - 1) * std::cosh(x) / k - (k - 1.0) / k * sinh_power_recurrence(k - 2, x);
}

}  // namespace

TEST_CASE("sphere areas collapse to closed forms") {
  for (double r : {0.1, 1.0, 3.0}) {
    CHECK(std::abs(sigma_kappa({2, -1.0}, r) - 2 * pi * std::sinh(r)) < 1e-12 * sigma_kappa({2, -1.0}, r));
    CHECK(std::abs(sigma_kappa({3, -1.0}, r) - 4 * pi * std::pow(std::sinh(r), 2)) < 1e-12 * sigma_kappa({3, -1.0}, r));
  }
  for (int n = 2; n <= 6; ++n) {
    const double c = n * std::pow(pi, n / 2.0) / std::tgamma(n / 2.0 + 1.0);
    const double r = 1e-4;
    CHECK(std::abs(sigma_kappa({n, -1.0}, r) / std::pow(r, n - 1) - c) < 1e-7 * c);
    CHECK(std::abs(sigma_kappa({n, -4.0}, r) / std::pow(r, n - 1) - c) < 1e-7 * c);
  }
}

TEST_CASE("ball volume") {
  CHECK(m_kappa({3, -1.0}, 0.0) == 0.0);
  for (double r : {0.2, 1.0, 2.5, 6.0}) {
    const double ref = pi * (std::sinh(2 * r) - 2 * r);
    CHECK(std::abs(m_kappa({3, -1.0}, r) - ref) < 1e-10 * ref);
  }
  double prev = 0.0;
  for (double r = 0.1; r < 8.0; r += 0.1) {
    const double m = m_kappa({4, -0.5}, r);
    CHECK(m > prev);
    prev = m;
  }
}

TEST_CASE("sigma is the derivative of m") {
  const double h = 1e-3;
  for (int n = 2; n <= 5; ++n) {
    for (double r : {0.3, 1.0, 2.0, 4.0}) {
      const SpaceForm sf{n, -1.0};
      auto m = [&](double x) { return m_kappa(sf, x); };
      const double d = (m(r - 2 * h) - 8 * m(r - h) + 8 * m(r + h) - m(r + 2 * h)) / (12 * h);
      CHECK(std::abs(sigma_kappa(sf, r) - d) < 1e-8 * std::max(1.0, sigma_kappa(sf, r)));
    }
  }
}

TEST_CASE("hyperbolic convolution of point masses") {
  const RadonMeasure at = hyperbolic_conv(3, 0.0, 1.3);
  REQUIRE(at.is_atomic());
  CHECK(at.atoms[0].location == 1.3);
  CHECK(std::abs(total_mass(hyperbolic_conv(4, 1.2, 0.7)) - 1.0) < 1e-9);
  const RadonMeasure mu = hyperbolic_conv(2, 1.0, 2.0);
  CHECK(mu.support_lo == 1.0);
  CHECK(mu.support_hi == 3.0);
  mu.validate();
}

TEST_CASE("distance density equals the angular pushforward") {
  // c_n int_0^pi f(d(theta)) sin^{n-2} theta d theta, cosh d = cosh r cosh s + sinh r sinh s cos theta.
  for (int n = 2; n <= 6; ++n) {
    const double cn = std::tgamma(n / 2.0) / (std::sqrt(pi) * std::tgamma((n - 1) / 2.0));
    for (auto [r, s] : {std::pair{0.4, 1.1}, std::pair{2.0, 2.0}, std::pair{5.0, 3.5}}) {
      auto f = [](double d) { return std::cos(1.3 * d) / (1.0 + d); };
      const double oracle =
          cn * simpson(
                   [&](double th) {
                     const double d = std::acosh(std::max(1.0, std::cosh(r) * std::cosh(s) + std::sinh(r) * std::sinh(s) * std::cos(th)));
                     return f(d) * std::pow(std::sin(th), n - 2);
                   },
                   0.0, pi, 20000);
      const double v = integrate_measure(f, hyperbolic_conv(n, r, s)).value;
      CHECK(std::abs(v - oracle) < 1e-8);
    }
  }
}

TEST_CASE("log-concavity witnesses") {
  std::vector<double> xs;
  for (int i = 0; i <= 60; ++i) xs.push_back(0.1 * i);
  for (int n = 2; n <= 6; ++n) {
    const LogConcavityReport rep = log_concavity_witness(n, xs);
    CHECK(rep.h0[0] == 0.0);
    CHECK(rep.h1[0] == 0.0);
    CHECK(rep.max_h0 <= 0.0);
    CHECK(rep.max_h1 <= 0.0);
    CHECK(rep.max_d2_log_m <= 1e-8);
    for (std::size_t i = 1; i < xs.size(); ++i) {
      const double x = xs[i];
      const double h1 = -(n - 1.0) * sinh_power_recurrence(n - 2, x) / std::pow(std::sinh(x), n - 1);
      CHECK(std::abs(rep.h1[i] - h1) < 1e-9 * std::max(1.0, std::abs(h1)));
    }
  }
  const LogConcavityReport three = log_concavity_witness(3, {0.5, 1.0, 3.0, 6.0});
  for (double v : three.h0) CHECK(v < 0.0);
}

TEST_CASE("second log-derivative of m against finite differences") {
  const double h = 2e-3;
  for (int n = 2; n <= 6; ++n) {
    const SpaceForm sf{n, -1.0};
    for (double x : {0.5, 2.0, 5.0}) {
      auto l = [&](double r) { return std::log(m_kappa(sf, r)); };
      const double fd = (-l(x + 2 * h) + 16 * l(x + h) - 30 * l(x) + 16 * l(x - h) - l(x - 2 * h)) / (12 * h * h);
      CHECK(std::abs(log_concavity_witness(n, {x}).d2_log_m[0] - fd) < 1e-8);
    }
  }
}

TEST_CASE("tail slope of log m tends to n - 1") {
  for (int n = 2; n <= 6; ++n) CHECK(std::abs(log_volume_slope(n, 15.0) - (n - 1)) < 1e-3);
}

TEST_CASE("radial table checker") {
  RadialTable t;
  for (double r = 0.25; r <= 10.0; r += 0.25) {
    t.r.push_back(r);
    t.sigma.push_back(sigma_kappa({3, -1.0}, r));
    t.m.push_back(m_kappa({3, -1.0}, r));
  }
  const RadialTableReport rep = check_radial_table(t);
  CHECK(rep.ratio_decreasing);
  CHECK(rep.max_sigma_vs_dm < 1e-2);
  CHECK(std::abs(rep.ratio_tail - 2.0) < 1e-3);
  CHECK(rep.max_log_m_second_derivative <= 0.0);
}
