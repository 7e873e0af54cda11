#pragma once

#include <string>
#include <vector>

#include "hyper/measure.hpp"

namespace hyper {

// Space form of dimension n >= 2 and constant curvature kappa < 0.
struct SpaceForm {
  int n = 2;
  double kappa = -1.0;
};

double sigma_kappa(const SpaceForm& sf, double r);
double m_kappa(const SpaceForm& sf, double r);
// d/dr sigma_kappa, closed form.
double sigma_kappa_derivative(const SpaceForm& sf, double r);

/// eps_r * eps_s for the radial hypergroup of hyperbolic n-space, written as a
/// density in the distance d on [|r-s|, r+s]:
///   c_n sinh d [(cosh(r+s) - cosh d)(cosh d - cosh(r-s))]^{(n-3)/2} / (sinh r sinh s)^{n-2},
/// with c_n = Gamma(n/2) / (sqrt(pi) Gamma((n-1)/2)). r = 0 or s = 0 gives a point mass.
RadonMeasure hyperbolic_conv(int n, double r, double s);

struct LogConcavityReport {
  int n = 0;
  std::vector<double> x;
  std::vector<double> h0;        // h0 / sinh^{n+1}(x)
  std::vector<double> h1;        // h1 / sinh^{n-1}(x)
  std::vector<double> d2_log_m;  // (log m_{-1})'' in dimension n
  double max_h0 = 0.0;
  double max_h1 = 0.0;
  double max_d2_log_m = 0.0;
};

/// h0(x) = n cosh x I_n(x) - sinh^{n+1} x and h1(x) = n I_n(x) - cosh x sinh^{n-1} x,
/// I_n(x) = int_0^x sinh^n t dt, together with (log m)'' for the unit-curvature ball volume.
LogConcavityReport log_concavity_witness(int n, const std::vector<double>& x);

// sigma/m at radius r for curvature -1; tends to n - 1.
double log_volume_slope(int n, double r);

struct RadialTable {
  std::vector<double> r, sigma, m;
};

struct RadialTableReport {
  double max_sigma_vs_dm = 0.0;     // max relative gap between m increments and the integral of sigma
  bool ratio_decreasing = true;     // sigma/m nonincreasing along the table
  double ratio_infimum = 0.0;       // inf over the table of sigma/m
  double ratio_tail = 0.0;          // sigma/m at the last row
  std::vector<double> log_m_second_derivative;
  double max_log_m_second_derivative = 0.0;
};

/// Checks a tabulated (r, sigma, m) profile of geodesic spheres and balls.
RadialTableReport check_radial_table(const RadialTable& table);
RadialTable read_radial_table_csv(const std::string& path);

}  // namespace hyper
