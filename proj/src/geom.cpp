#include "hyper/geom.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace hyper {

namespace {

QuadSpec tight() {
  QuadSpec s;
  s.abs_tol = 1e-300;
  s.rel_tol = 1e-14;
  s.max_subdivisions = 10000;
  return s;
}

double sphere_constant(int n) {
  return n * std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n + 1.0);
}

void check(const SpaceForm& sf) {
  if (sf.n < 2) throw std::invalid_argument("space form dimension must be >= 2");
  if (!(sf.kappa < 0.0)) throw std::invalid_argument("space form curvature must be negative");
}

double sinh_power_integral(int n, double x) {
  return integrate([n](double t) { return std::pow(std::sinh(t), n); }, 0.0, x, tight()).value;
}

}  // namespace

double sigma_kappa(const SpaceForm& sf, double r) {
  check(sf);
  const double k = std::sqrt(-sf.kappa);
  return sphere_constant(sf.n) * std::pow(std::sinh(r * k) / k, sf.n - 1);
}

double sigma_kappa_derivative(const SpaceForm& sf, double r) {
  check(sf);
  const double k = std::sqrt(-sf.kappa);
  const double s = std::sinh(r * k) / k;
  return sphere_constant(sf.n) * (sf.n - 1) * std::pow(s, sf.n - 2) * std::cosh(r * k);
}

double m_kappa(const SpaceForm& sf, double r) {
  check(sf);
  if (r <= 0.0) return 0.0;
  return integrate([&](double s) { return sigma_kappa(sf, s); }, 0.0, r, tight()).value;
}

RadonMeasure hyperbolic_conv(int n, double r, double s) {
  if (n < 2) throw std::invalid_argument("hyperbolic_conv needs n >= 2");
  if (r < 0.0 || s < 0.0) throw std::invalid_argument("hyperbolic_conv needs r, s >= 0");
  if (r == 0.0) return RadonMeasure::point(s);
  if (s == 0.0) return RadonMeasure::point(r);
  const double lo = std::abs(r - s);
  const double hi = r + s;
  const double cn = std::tgamma(0.5 * n) / (std::sqrt(std::numbers::pi) * std::tgamma(0.5 * (n - 1)));
  const double scale = cn / std::pow(std::sinh(r) * std::sinh(s), n - 2);
  RadonMeasure mu;
  mu.support_lo = lo;
  mu.support_hi = hi;
  const double beta = 0.5 * (n - 3);
  EndpointWeight w = beta == 0.0 ? EndpointWeight{} : EndpointWeight::cosh_gap(beta);
  mu.densities.push_back({lo, hi, [scale](double d) { return scale * std::sinh(d); }, w, w});
  return mu;
}

LogConcavityReport log_concavity_witness(int n, const std::vector<double>& x) {
  if (n < 2) throw std::invalid_argument("log_concavity_witness needs n >= 2");
  LogConcavityReport rep;
  rep.n = n;
  rep.x = x;
  rep.max_h0 = rep.max_h1 = rep.max_d2_log_m = -std::numeric_limits<double>::infinity();
  for (double xi : x) {
    if (xi == 0.0) {
      rep.h0.push_back(0.0);
      rep.h1.push_back(0.0);
      rep.d2_log_m.push_back(-std::numeric_limits<double>::infinity());
      continue;
    }
    const double sh = std::sinh(xi);
    const double ch = std::cosh(xi);
    const double in = sinh_power_integral(n, xi);
    const double h0 = n * ch * (in / std::pow(sh, n + 1)) - 1.0;
    const double h1 = n * (in / std::pow(sh, n - 1)) - ch;
    const SpaceForm sf{n, -1.0};
    const double m = m_kappa(sf, xi);
    const double sig = sigma_kappa(sf, xi);
    const double ratio = sig / m;
    const double d2 = sigma_kappa_derivative(sf, xi) / m - ratio * ratio;
    rep.h0.push_back(h0);
    rep.h1.push_back(h1);
    rep.d2_log_m.push_back(d2);
    rep.max_h0 = std::max(rep.max_h0, h0);
    rep.max_h1 = std::max(rep.max_h1, h1);
    rep.max_d2_log_m = std::max(rep.max_d2_log_m, d2);
  }
  return rep;
}

double log_volume_slope(int n, double r) {
  const SpaceForm sf{n, -1.0};
  return sigma_kappa(sf, r) / m_kappa(sf, r);
}

RadialTableReport check_radial_table(const RadialTable& t) {
  const std::size_t k = t.r.size();
  if (k < 3 || t.sigma.size() != k || t.m.size() != k) throw std::invalid_argument("radial table needs >= 3 rows");
  RadialTableReport rep;
  rep.ratio_infimum = std::numeric_limits<double>::infinity();
  double prev = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < k; ++i) {
    if (t.m[i] <= 0.0) continue;
    const double q = t.sigma[i] / t.m[i];
    if (q > prev * (1.0 + 1e-12)) rep.ratio_decreasing = false;
    prev = q;
    rep.ratio_infimum = std::min(rep.ratio_infimum, q);
    rep.ratio_tail = q;
  }
  rep.max_log_m_second_derivative = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i + 1 < k; ++i) {
    // m(r_{i+1}) - m(r_{i-1}) against the integral of sigma over the same span.
    const double ha = t.r[i] - t.r[i - 1], hb = t.r[i + 1] - t.r[i];
    const double dm = t.m[i + 1] - t.m[i - 1];
    const double area = std::abs(ha - hb) <= 1e-12 * (ha + hb)
                            ? ha / 3.0 * (t.sigma[i - 1] + 4.0 * t.sigma[i] + t.sigma[i + 1])
                            : 0.5 * (ha * (t.sigma[i - 1] + t.sigma[i]) + hb * (t.sigma[i] + t.sigma[i + 1]));
    if (dm != 0.0) rep.max_sigma_vs_dm = std::max(rep.max_sigma_vs_dm, std::abs(area - dm) / std::abs(dm));
    if (t.m[i - 1] <= 0.0) continue;
    const double h1 = t.r[i] - t.r[i - 1], h2 = t.r[i + 1] - t.r[i];
    const double l0 = std::log(t.m[i - 1]), l1 = std::log(t.m[i]), l2 = std::log(t.m[i + 1]);
    const double d2 = 2.0 * (h1 * l2 - (h1 + h2) * l1 + h2 * l0) / (h1 * h2 * (h1 + h2));
    rep.log_m_second_derivative.push_back(d2);
    rep.max_log_m_second_derivative = std::max(rep.max_log_m_second_derivative, d2);
  }
  return rep;
}

RadialTable read_radial_table_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  RadialTable t;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream row(line);
    std::string a, b, c;
    if (!std::getline(row, a, ',') || !std::getline(row, b, ',') || !std::getline(row, c, ',')) continue;
    try {
      const double r = std::stod(a), s = std::stod(b), m = std::stod(c);
      t.r.push_back(r);
      t.sigma.push_back(s);
      t.m.push_back(m);
    } catch (const std::invalid_argument&) {
      continue;  // header row
    }
  }
  return t;
}

}  // namespace hyper
