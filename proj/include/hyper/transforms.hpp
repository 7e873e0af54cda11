#pragma once

#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "hyper/hypergroup.hpp"

namespace hyper {

using ComplexOfComplex = std::function<cplx(cplx)>;

struct TransformTable {
  std::string instance;
  std::string descriptor;  // what f is
  std::string character_source;
  std::vector<cplx> lambda;
  std::vector<cplx> values;
  std::vector<double> errors;  // quadrature error estimates
};

/// Large-x behaviour of f(x) phi_lambda(x) m(x), which picks the tail method.
enum class Tail { exponential, oscillatory, compact };

struct TransformInput {
  std::function<cplx(double)> f;
  std::string descriptor;
  Tail tail = Tail::exponential;
  double support_hi = std::numeric_limits<double>::infinity();  // used with Tail::compact
};

QuadSpec transform_spec();

struct ForwardOptions {
  bool allow_outside_strip = false;
  QuadSpec spec = transform_spec();
  int ladder = 7;  // regulator values for oscillatory tails
  Exec exec = Exec::parallel;
};

/// f^(lambda) = int_0^inf f(x) phi_lambda(x) m(x) dx at each node.
/// The multiplicative instance is routed through mellin_forward at s = i lambda.
/// Throws StripViolation for |Im lambda| > omega0 unless allowed.
TransformTable forward(const HypergroupInstance& H, const TransformInput& f, const std::vector<cplx>& lambdas,
                       const ForwardOptions& opt = {});
/// Grid quadrature sum_i W_i f(x_i) phi_lambda(x_i).
TransformTable forward(const HypergroupInstance& H, const GridFunction& f, const std::vector<cplx>& lambdas,
                       const ForwardOptions& opt = {});

struct MellinInput {
  std::function<cplx(double)> f;
  std::string descriptor;
  // 0: x^{s-1} f(x) decays at least algebraically and the upper half is done in
  // log x. Otherwise f oscillates at this angular frequency for large x and
  // the upper half [1, inf) uses the regulated oscillatory integral in x.
  double upper_frequency = 0.0;
};

/// f*(s) = int_0^inf f(x) x^{s-1} dx. The lower half (0, 1] is always taken in log x.
TransformTable mellin_forward(const MellinInput& f, const std::vector<cplx>& s_nodes, const ForwardOptions& opt = {});

struct InverseOptions {
  double lambda_max = 40.0;
  double sigma = 0.0;  // Mellin line Re s = sigma
  QuadSpec spec = transform_spec();
  Exec exec = Exec::parallel;
};

struct InverseResult {
  std::vector<double> x;
  std::vector<cplx> values;
  double tail_envelope = 0.0;  // max |integrand| at the truncation point
};

/// f(z) = (1/2 pi) int_R z^{-(sigma + i tau)} f*(sigma + i tau) d tau, truncation free:
/// both halves are integrated to infinity with the exponential-decay rule.
/// Throws NonConvergence when the halves do not settle.
InverseResult mellin_inverse(const ComplexOfComplex& f_star, const std::vector<double>& z_nodes,
                             const InverseOptions& opt = {});

/// f(x) = c_H int_S f^(lambda) phi_lambda(x)^* pi0(lambda) d lambda with S cut at lambda_max.
/// Throws NormalizationUnset when the instance carries no constant.
InverseResult inverse_plancherel(const HypergroupInstance& H, const std::function<cplx(double)>& fhat,
                                 const std::vector<double>& x_nodes, const InverseOptions& opt = {});

struct NormCheck {
  double lhs = 0.0;  // int |f|^2 m
  double rhs = 0.0;  // c_H int |f^|^2 pi0
};

/// Both sides of the Plancherel identity; f^ is computed by forward().
NormCheck plancherel_norm_check(const HypergroupInstance& H, const TransformInput& f, double lambda_max = 40.0);

/// Known transform pairs used to fit c_H.
struct TransformPair {
  TransformInput f;
  std::function<cplx(double)> fhat;
};
std::vector<TransformPair> calibration_pairs(const HypergroupInstance& H);

struct Calibration {
  double constant = 0.0;
  double residual = 0.0;  // relative l2 misfit of the fitted inversion
  int samples = 0;
};

/// Least-squares c_H from the inversions of the calibration pairs on x_nodes,
/// evaluated with c = 1 and compared with f.
Calibration calibrate_plancherel(const HypergroupInstance& H, const std::vector<double>& x_nodes,
                                 const InverseOptions& opt = {});

struct StripReport {
  int probes = 0;
  double cr_residual = 0.0;      // max |dF/dx + i dF/dy| / max(1, |F|)
  double cauchy_residual = 0.0;  // max |F(z0) - circle average| / max(1, |F|)
  double sup_bound = 0.0;        // max |F| over probes
  bool diverged = false;
  std::string divergence;
};

/// Probes F at n_probe points of the strip |Im z| < width (real parts in [re_lo, re_hi]).
/// Numerical failures of F are reported as divergence, not thrown.
StripReport strip_analyticity_check(const ComplexOfComplex& F, double width, int n_probe, double re_lo = 0.25,
                                    double re_hi = 4.0, std::uint64_t seed = 1);

struct LpBound {
  double p = 0.0, q = 0.0;
  double sup_fhat = 0.0;  // over the probe set in the strip of half-width alpha omega0
  double bound = 0.0;     // M0^alpha ||f||_p (int phi0^{(1-alpha) q} m)^{1/q}
};

/// The L^p extension bound with p = nu / (nu + alpha - 1).
LpBound lp_extension_bound(const HypergroupInstance& H, const TransformInput& f, double nu, double alpha,
                           int n_probe = 24, std::uint64_t seed = 3);

}  // namespace hyper
