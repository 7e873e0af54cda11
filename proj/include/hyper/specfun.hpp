#pragma once

#include <complex>

#include "hyper/quadrature.hpp"

namespace hyper {

/// Gamma function on the complex plane (Lanczos, g = 7, with reflection).
/// Throws PoleError at nonpositive integers.
cplx gamma_complex(cplx z);

/// Bessel function of the first kind J_nu(x) for nu > -1 and x >= 0.
/// Power series below max(12, 2 nu), Hankel asymptotics above; falls back to
/// Bessel's integral when the asymptotic series cannot reach full accuracy.
double bessel_j(double nu, double x);

/// Normalized Bessel character 2^g Gamma(g+1) (z)^-g J_g(z) for real z >= 0.
double bessel_normalized(double gamma, double z);

/// Quadrature settings used by the Legendre integrals.
QuadSpec legendre_spec();

/// Conical function P_{i lambda - 1/2}(cosh x) from
///   (sqrt 2 / pi) int_0^x cos(lambda y) / sqrt(cosh x - cosh y) dy.
/// For x >= 3, |lambda| >= 1/4 and |Im lambda| <= 0.4 the hypergeometric
/// connection formula in sech^2 x is summed instead; spec is then unused.
/// Other x >= 3 use the Laplace integral (1/pi) int_0^pi (cosh x + sinh x cos t)^{i lambda - 1/2} dt.
cplx legendre_conical(cplx lambda, double x, const QuadSpec& spec = legendre_spec());

/// Associated Legendre function P_nu^mu(cosh x).
/// For mu < 1/2:
///   sqrt(2/pi) sinh(x)^mu / Gamma(1/2 - mu) int_0^x cosh((nu+1/2) y) (cosh x - cosh y)^(-mu-1/2) dy.
/// For mu = 1 the function is d/dx P_nu(cosh x), evaluated from a smooth
/// angular form of the same integral. Other mu >= 1/2 are rejected.
/// Throws PoleError when mu - 1/2 is a nonnegative integer, and at x = 0 when 0 < mu < 1/2.
cplx assoc_legendre(cplx nu, double mu, double x, const QuadSpec& spec = legendre_spec());

}  // namespace hyper
