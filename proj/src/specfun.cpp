#include "hyper/specfun.hpp"

#include <array>
#include <cmath>
#include <numbers>

namespace hyper {

namespace {

constexpr double kPi = std::numbers::pi;

constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
    771.32342877765313,   -176.61502916214059,   12.507343278686905,
    -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};

cplx lanczos(cplx z) {
  z -= 1.0;
  cplx a = kLanczos[0];
  const cplx t = z + 7.5;
  for (int i = 1; i < 9; ++i) a += kLanczos[i] / (z + double(i));
  return std::sqrt(2.0 * kPi) * std::pow(t, z + 0.5) * std::exp(-t) * a;
}

bool is_nonpositive_integer(cplx z) {
  return z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::floor(z.real());
}

double bessel_series(double nu, double x) {
  const double h = 0.5 * x;
  double term = std::pow(h, nu) / std::tgamma(nu + 1.0);
  double sum = term;
  const double h2 = h * h;
  for (int k = 1; k < 500; ++k) {
    term *= -h2 / (k * (k + nu));
    sum += term;
    if (std::abs(term) < 1e-17 * std::abs(sum)) break;
  }
  return sum;
}

// Hankel expansion; returns false when the terms stop decreasing before
// reaching relative size 1e-15.
bool bessel_asymptotic(double nu, double x, double& out) {
  const double mu = 4.0 * nu * nu;
  double p = 1.0, q = 0.0;
  double term = 1.0;
  double last = 1.0;
  bool converged = false;
  for (int k = 1; k < 200; ++k) {
    const double odd = 2.0 * k - 1.0;
    term *= (mu - odd * odd) / (k * 8.0 * x);
    const double mag = std::abs(term);
    if (mag > last && k > 2) break;
    last = mag;
    // terms alternate between the Q (odd k) and P (even k) series with signs
    // following (-1)^{floor(k/2)}
    const int r = k % 4;
    if (r == 1) q += term;
    if (r == 2) p -= term;
    if (r == 3) q -= term;
    if (r == 0) p += term;
    if (mag < 1e-16) {
      converged = true;
      break;
    }
  }
  if (!converged) return false;
  const double chi = x - (0.5 * nu + 0.25) * kPi;
  out = std::sqrt(2.0 / (kPi * x)) * (p * std::cos(chi) - q * std::sin(chi));
  return true;
}

// J_nu(x) = (1/pi) int_0^pi cos(nu t - x sin t) dt - sin(nu pi)/pi int_0^inf exp(-x sinh t - nu t) dt
double bessel_integral(double nu, double x) {
  QuadSpec spec;
  spec.abs_tol = 1e-16;
  spec.rel_tol = 1e-14;
  spec.max_subdivisions = 20000;
  const double a = integrate([&](double t) { return std::cos(nu * t - x * std::sin(t)); }, 0.0, kPi, spec).value / kPi;
  const double s = std::sin(nu * kPi);
  if (s == 0.0) return a;
  const double b = integrate_semi_infinite([&](double t) { return std::exp(-x * std::sinh(t) - nu * t); }, 0.0,
                                           Decay::exponential, spec)
                       .value;
  return a - s / kPi * b;
}

// Connection formula in powers of sech^2 x:
//   P = A(l) (2 cosh x)^{-1/2 + i l} F(1/4 - i l/2, 3/4 - i l/2; 1 - i l; sech^2 x) + (l -> -l),
//   A(l) = Gamma(i l) / (sqrt(pi) Gamma(1/2 + i l)).
cplx conical_far(cplx lambda, double x) {
  const cplx I(0.0, 1.0);
  const double log2z = x + std::log1p(std::exp(-2.0 * x));
  const double w = 1.0 / (std::cosh(x) * std::cosh(x));
  auto half = [&](cplx l) {
    const cplx a = 0.25 - 0.5 * I * l, b = 0.75 - 0.5 * I * l, c = 1.0 - I * l;
    cplx term = 1.0, sum = 1.0;
    for (int k = 0; k < 200; ++k) {
      term *= (a + double(k)) * (b + double(k)) / ((c + double(k)) * double(k + 1)) * w;
      sum += term;
      if (std::abs(term) < 1e-17 * std::abs(sum)) break;
    }
    const cplx A = gamma_complex(I * l) / (std::sqrt(kPi) * gamma_complex(0.5 + I * l));
    return A * std::exp((-0.5 + I * l) * log2z) * sum;
  };
  return half(lambda) + half(-lambda);
}

// Laplace form (1/pi) int_0^pi (e^{-x} + 2 sinh x cos^2(t/2))^nu dt with nu = i l - 1/2.
// The base collapses to e^{-x} near t = pi; on cos(t/2) <= 1/2 the substitution
// cos(t/2) = kappa sinh w, kappa = e^{-x} / sqrt(1 - e^{-2x}), turns it into e^{-x} cosh^2 w.
cplx conical_laplace(cplx lambda, double x, const QuadSpec& spec) {
  const cplx nu(-0.5 - lambda.imag(), lambda.real());
  const double sh2 = 2.0 * std::sinh(x);
  const double em = std::exp(-x);
  QuadSpec s = spec.plain();
  auto outer = [&](double t) {
    const double c = std::cos(0.5 * t);
    return std::exp(nu * std::log(em + sh2 * c * c));
  };
  const cplx a = integrate(outer, 0.0, 2.0 * kPi / 3.0, s).value;
  const double kappa = em / std::sqrt(-std::expm1(-2.0 * x));
  const double w_hi = std::asinh(0.5 / kappa);
  auto inner = [&](double w) {
    const double logcosh = w + std::log1p(std::exp(-2.0 * w)) - std::log(2.0);
    const double c = kappa * std::sinh(w);
    return std::exp((2.0 * nu + 1.0) * logcosh) / std::sqrt(1.0 - c * c);
  };
  const cplx b = 2.0 * kappa * std::exp(-x * nu) * integrate(inner, 0.0, w_hi, s).value;
  return (a + b) / kPi;
}

}  // namespace

cplx gamma_complex(cplx z) {
  if (is_nonpositive_integer(z)) throw PoleError("gamma_complex: pole at nonpositive integer");
  if (z.real() < 0.5) return kPi / (std::sin(kPi * z) * lanczos(1.0 - z));
  return lanczos(z);
}

double bessel_j(double nu, double x) {
  if (!(nu > -1.0)) throw std::domain_error("bessel_j requires order > -1");
  if (!(x >= 0.0)) throw std::domain_error("bessel_j requires x >= 0");
  if (x == 0.0) return nu == 0.0 ? 1.0 : 0.0;
  if (x < std::max(12.0, 2.0 * nu)) return bessel_series(nu, x);
  double v = 0.0;
  if (bessel_asymptotic(nu, x, v)) return v;
  return bessel_integral(nu, x);
}

double bessel_normalized(double gamma, double z) {
  if (z == 0.0) return 1.0;
  if (z < 1e-3) {
    // Even series 1 - z^2/(4(g+1)) + z^4/(32(g+1)(g+2)).
    const double z2 = z * z;
    return 1.0 - z2 / (4.0 * (gamma + 1.0)) + z2 * z2 / (32.0 * (gamma + 1.0) * (gamma + 2.0));
  }
  return std::pow(2.0, gamma) * std::tgamma(gamma + 1.0) * std::pow(z, -gamma) * bessel_j(gamma, z);
}

QuadSpec legendre_spec() {
  QuadSpec spec;
  spec.abs_tol = 1e-15;
  spec.rel_tol = 1e-12;
  spec.max_subdivisions = 20000;
  return spec;
}

cplx legendre_conical(cplx lambda, double x, const QuadSpec& spec) {
  if (!(x >= 0.0)) throw std::domain_error("legendre_conical requires x >= 0");
  if (x == 0.0) return 1.0;
  if (x >= 3.0 && std::abs(lambda) >= 0.25 && std::abs(lambda.imag()) <= 0.4) return conical_far(lambda, x);
  if (x >= 3.0) return conical_laplace(lambda, x, spec);
  QuadSpec s = spec;
  s.lower = EndpointWeight{};
  s.upper = EndpointWeight::cosh_gap(-0.5);
  auto g = [lambda](double y) { return std::cos(lambda * y); };
  return std::sqrt(2.0) / kPi * integrate(g, 0.0, x, s).value;
}

cplx assoc_legendre(cplx nu, double mu, double x, const QuadSpec& spec) {
  const double shifted = mu - 0.5;
  if (shifted >= 0.0 && shifted == std::floor(shifted)) throw PoleError("assoc_legendre: Gamma(1/2 - mu) has a pole");
  if (!(x >= 0.0)) throw std::domain_error("assoc_legendre requires x >= 0");
  const cplx kappa = nu + 0.5;
  if (mu == 1.0) {
    if (x == 0.0) return 0.0;
    // cosh y = 1 + c v with c = cosh x - 1 and v = sin^2(theta/2) turns the
    // integral into int_0^pi cosh(kappa y) / sqrt(2 + c v) d theta;
    // differentiate in c and multiply by dc/dx = sinh x.
    const double sh = std::sinh(0.5 * x);
    const double c = 2.0 * sh * sh;
    QuadSpec s = spec.plain();
    auto integrand = [&](double theta) -> cplx {
      const double sv = std::sin(0.5 * theta);
      const double v = sv * sv;
      const double w = 2.0 + c * v;
      const double y = acosh_shift(0.0, c * v);
      const cplx ratio = y < 1e-8 ? kappa : std::sinh(kappa * y) / std::sinh(y);
      return (kappa * ratio * v) / std::sqrt(w) - std::cosh(kappa * y) * v / (2.0 * w * std::sqrt(w));
    };
    return std::sinh(x) * std::sqrt(2.0) / kPi * integrate(integrand, 0.0, kPi, s).value;
  }
  if (mu > 0.5) throw std::domain_error("assoc_legendre supports mu < 1/2 and mu = 1");
  if (x == 0.0) {
    if (mu == 0.0) return 1.0;
    if (mu < 0.0) return 0.0;
    throw PoleError("assoc_legendre: unbounded at x = 0 for 0 < mu < 1/2");
  }
  QuadSpec s = spec;
  s.lower = EndpointWeight{};
  s.upper = EndpointWeight::cosh_gap(-mu - 0.5);
  auto g = [kappa](double y) { return std::cosh(kappa * y); };
  const cplx pref = std::sqrt(2.0 / kPi) * std::pow(std::sinh(x), mu) / gamma_complex(0.5 - mu);
  return pref * integrate(g, 0.0, x, s).value;
}

}  // namespace hyper
