#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "hyper/measure.hpp"
#include "hyper/parallel.hpp"

namespace hyper {

using ComplexFn = std::function<cplx(double)>;
using CharacterFn = std::function<cplx(cplx lambda, double x)>;
using PointConvFn = std::function<RadonMeasure(double x, double y)>;
using KernelFn = std::function<RadonMeasure(double x)>;

struct HypergroupInstance {
  std::string name;
  RealFn haar_density;
  PointConvFn conv_point;
  CharacterFn character;
  std::optional<KernelFn> laplace_kernel;
  RealFn plancherel_density;
  double plancherel_lo = 0.0;  // Plancherel support is [plancherel_lo, inf)
  double omega0 = 0.0;
  double M0 = 1.0;
  double gamma = 0.0;
  double identity = 0.0;
  bool inverse_involution = false;  // x^- = 1/x (multiplicative); otherwise x^- = x
  double domain_lo = 0.0;           // functions live on (domain_lo, inf)
  std::optional<double> plancherel_constant;
  std::string haar_formula;
  std::string character_formula;
  std::string plancherel_formula;

  double involution(double x) const { return inverse_involution ? 1.0 / x : x; }
  // The positive character in the Plancherel support.
  double phi0(double x) const { return character(0.0, x).real(); }
};

/// Instances: "multiplicative", "bessel_kingman" (uses gamma > -1/2),
/// "jacobi_sl2c", "mehler_fock". Throws UnknownInstance otherwise.
HypergroupInstance make_instance(const std::string& name, double gamma = 0.0);
std::vector<std::string> instance_names();

// Closed-form character of the Jacobi / SL(2,C) instance, sin(lambda x) / (lambda sinh x).
cplx jacobi_character(cplx lambda, double x);
// Normalized Bessel character for complex lambda.
cplx bessel_kingman_character(double gamma, cplx lambda, double x);

/// Quadrature settings for translations; tolerances relative to unit-size data.
QuadSpec translate_spec();

/// Lambda_x f(y) = int f d(eps_x * eps_y). f vanishes above clip_hi when given.
template <class F>
auto translate(const HypergroupInstance& H, F&& f, double x, double y, const QuadSpec& spec = translate_spec(),
               double clip_hi = std::numeric_limits<double>::infinity()) {
  return integrate_measure(std::forward<F>(f), H.conv_point(x, y), spec, clip_hi).value;
}

/// Composite Gauss-Legendre grid. For the multiplicative instance the panels
/// are uniform in log x. haar_weights include m(x).
struct Grid {
  double lo = 0.0, hi = 0.0;
  int panels = 0, order = 0;
  bool log_scale = false;
  std::vector<double> nodes;
  std::vector<double> dx_weights;
  std::vector<double> haar_weights;
  std::vector<double> bary;  // barycentric weights on one panel

  static Grid composite(const HypergroupInstance& H, double lo, double hi, int panels, int order = 12);
  std::size_t size() const { return nodes.size(); }
  // Piecewise polynomial interpolant of nodal values; zero outside [lo, hi].
  cplx interpolate(const std::vector<cplx>& values, double x) const;
  std::string describe() const;
};

struct GridFunction {
  Grid grid;
  std::vector<cplx> values;

  static GridFunction sample(const Grid& grid, const std::function<cplx(double)>& f);
  cplx operator()(double x) const { return grid.interpolate(values, x); }
  const std::vector<double>& nodes() const { return grid.nodes; }
  const std::vector<double>& weights() const { return grid.haar_weights; }
  double sup_norm() const;
  double lp_norm(double p) const;
};

/// (f*g)(x_i) = int f(y) g(x_i * y^-) m(dy) on the grid of f.
GridFunction convolve(const HypergroupInstance& H, const GridFunction& f, const GridFunction& g,
                      Exec exec = Exec::parallel, const QuadSpec& spec = translate_spec());

struct AxiomReport {
  std::string instance;
  int pairs = 0;
  double max_mass_violation = 0.0;
  double max_commutativity_violation = 0.0;
  double max_identity_violation = 0.0;
  double max_support_violation = 0.0;
  bool passed(double tol) const {
    return max_mass_violation <= tol && max_commutativity_violation <= tol && max_identity_violation <= tol &&
           max_support_violation <= tol;
  }
};

/// Probability mass, commutativity, identity and support checks over all
/// pairs of grid points, using a fixed battery of test functions.
AxiomReport check_hypergroup_axioms(const HypergroupInstance& H, const std::vector<double>& grid,
                                    const QuadSpec& spec = translate_spec());

struct MultiplicativityReport {
  int trials = 0;
  double max_scaled_error = 0.0;  // |phi(x*y) - phi(x)phi(y)| / (1 + |phi(x)phi(y)|)
  double worst_lambda_re = 0.0, worst_lambda_im = 0.0, worst_x = 0.0, worst_y = 0.0;
};

/// Randomized check of phi_lambda(x*y) = phi_lambda(x) phi_lambda(y) with
/// lambda drawn from the closed strip of half-width strip_fraction * omega0.
MultiplicativityReport check_multiplicativity(const HypergroupInstance& H, int trials, std::uint64_t seed,
                                              double strip_fraction = 0.95, double x_max = 4.0,
                                              Exec exec = Exec::parallel);

}  // namespace hyper
