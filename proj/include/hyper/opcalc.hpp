#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "hyper/hypergroup.hpp"
#include "hyper/rng.hpp"
#include "hyper/transforms.hpp"

namespace hyper {

using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

/// t -> cos(tA) with a growth bound ||cos(tA)|| <= kappa cosh(omega0 t).
/// Spectral families hold A = V diag(eigenvalues) V^-1; dense ones only A.
struct CosineFamily {
  int n = 0;
  CMatrix generator;
  bool spectral = false;
  CVector eigenvalues;
  CMatrix basis, basis_inv;
  double kappa = 1.0;
  double omega0 = 0.0;
  double omega0_band = 0.0;  // half-width of the fitted exponent's confidence band (dense only)
  bool certified = false;
  std::string method_tag;

  CMatrix cos(double t) const;
  /// V diag(g(lambda_j)) V^-1; spectral families only.
  CMatrix apply(const std::function<cplx(cplx)>& g) const;
  /// The family t -> cos(alpha t A).
  CosineFamily scaled(double alpha) const;
};

struct OperatorResult {
  CMatrix matrix;
  std::string method_tag;
  std::string quadrature_report;
  double error = 0.0;
};

/// Spectral family from eigenvalues and a unitary basis.
/// Throws SpectrumOutsideStrip when some |Im lambda_j| > omega0.
CosineFamily cos_family_normal(const CVector& eigenvalues, const CMatrix& unitary, double omega0);

/// Scaled Taylor series plus cos(2X) = 2 cos(X)^2 - I. omega0 and kappa are
/// fitted from log ||cos(tA)||_2 on [0, t_scale].
/// Throws OverflowRisk when ||A||_1 t_scale exceeds norm_budget.
CosineFamily cos_family_dense(const CMatrix& A, double t_scale = 10.0, double norm_budget = 300.0);

/// cos(X) for a dense matrix by the same scaled series.
CMatrix cos_matrix(const CMatrix& X);

double spectral_norm(const CMatrix& M);

/// Max over random (s, t) in [-t_max, t_max]^2 of the d'Alembert defect
/// ||C(s+t) + C(s-t) - 2 C(s) C(t)|| / (kappa^2 cosh(omega0 s) cosh(omega0 t)).
double dalembert_defect(const CosineFamily& C, int trials, std::uint64_t seed, double t_max = 4.0);

/// Random unitary (QR of a complex Gaussian matrix with phases fixed).
CMatrix random_unitary(int n, CounterRng& rng);
/// Normal matrix with eigenvalues Re in [-re_max, re_max], |Im| <= strip.
CosineFamily random_normal_family(int n, double strip, double omega0, CounterRng& rng, double re_max = 3.0);
/// Hermitian positive definite matrix with log-uniform eigenvalues in [lo, hi].
CMatrix random_positive_definite(int n, CounterRng& rng, double lo = 0.3, double hi = 3.0);

QuadSpec operator_spec();

/// phi_A(x) = int cos(tA) tau_x(dt) on a shared mesh for all entries.
OperatorResult phi_A(const HypergroupInstance& H, const CosineFamily& C, double x, const QuadSpec& spec = operator_spec());

/// T_{alpha A}(f) = int_0^inf f(x) phi_{alpha A}(x) m(x) dx. Tail::oscillatory is not supported.
OperatorResult T_A(const HypergroupInstance& H, const CosineFamily& C, const TransformInput& f, double alpha = 1.0,
                   const QuadSpec& spec = operator_spec());
/// Grid quadrature sum_i W_i f(x_i) phi_{alpha A}(x_i).
OperatorResult T_A(const HypergroupInstance& H, const CosineFamily& C, const GridFunction& f, double alpha = 1.0,
                   const QuadSpec& spec = operator_spec(), Exec exec = Exec::parallel);

/// sin(xA)/A, exact at eigenvalue 0 (series for |lambda x| < 1e-4).
CMatrix sin_over(const CosineFamily& C, double x);

/// int_0^inf sin(alpha x A)/(alpha A) f(x) sinh x dx.
OperatorResult T_jacobi_sine(const CosineFamily& C, const TransformInput& f, double alpha = 1.0,
                             const QuadSpec& spec = operator_spec());
/// Same integral by grid quadrature on [grid.lo, grid.hi] (dx weights).
OperatorResult T_jacobi_sine(const CosineFamily& C, const std::function<cplx(double)>& f, const Grid& grid,
                             double alpha = 1.0);

/// (1/2 pi) int_R A^{-i tau} f*(i tau) d tau for A with positive spectrum.
/// Throws std::invalid_argument when the spectrum is not positive real.
OperatorResult mellin_operator_calculus(const CMatrix& A, const ComplexOfComplex& f_star, const QuadSpec& spec = transform_spec());

/// Discretized Lambda_f on L^2(m) over f's grid: (K g)_i ~ (f*g)(x_i),
/// K_ij = W_j f(x_i * x_j), symmetrized in the m-weighted inner product.
struct LambdaOperator {
  Grid grid;
  CMatrix K;
  /// ||K|| on L^2(m) = ||W^{1/2} K W^{-1/2}||_2.
  double norm() const;
  /// max |W_i K_ij - conj(W_j K_ji)| / max |W_i K_ij|, before symmetrization.
  double asymmetry = 0.0;
};
LambdaOperator lambda_op(const HypergroupInstance& H, const std::function<cplx(double)>& f, const Grid& grid,
                         Exec exec = Exec::parallel, const QuadSpec& spec = translate_spec());

/// Shift group S_t f(x) = f(x + t) on a uniform grid over [-half_width, half_width]
/// in L^p(q dx), with sigma_t = (S_t + S_-t)/2 = cos(tA).
struct TranslationCosine {
  std::function<double(double)> q;
  double p = 2.0;
  double h = 0.0;
  std::vector<double> nodes;
  double kappa_lo = 0.0, kappa_hi = 0.0;  // bounds of q'/q over the grid

  /// w_p = max(|kappa_lo|, |kappa_hi|) / p.
  double w_p() const;
  /// Exact ||S_t|| on the grid space: (max_y q(y - t) / q(y))^{1/p}; t is rounded to a step multiple.
  double shift_norm(double t) const;
  /// ||sigma_t|| for p = 2 by SVD of the weighted matrix.
  double cosine_norm(double t) const;
  std::vector<double> shift(const std::vector<double>& f, double t) const;
  std::vector<double> cosine(const std::vector<double>& f, double t) const;
};

TranslationCosine translation_cosine(const std::function<double(double)>& q, double p, double half_width, int steps);

struct GrowthFit {
  double exponent = 0.0;
  double intercept = 0.0;
  double bound = 0.0;  // w_p
};
/// Least-squares slope of log ||S_t|| over t in [0, t_max].
GrowthFit fit_shift_growth(const TranslationCosine& T, double t_max, int samples = 41);

/// f(s) = int_0^band a(l) cos(l s) dl. Returns max over (t, x) of
/// |int_0^band a(l) cos(l t) phi_l(x) dl - int sigma_t f d tau_x|.
double intertwining_residual(const HypergroupInstance& H, const std::function<double(double)>& a, double band,
                             const std::vector<double>& t_values, const std::vector<double>& x_values);

enum class FracKind { W, U };

/// W_a f(x) = (1/Gamma(a)) int_0^x (cosh x - cosh t)^{a-1} sinh t f(t) dt,
/// U_a f(x) = (1/Gamma(a)) int_0^x (cosh x - cosh t)^{a-1} f(t) dt, Re a > 0.
std::vector<cplx> frac_integrate(FracKind kind, cplx alpha, const std::function<cplx(double)>& f,
                                 const std::vector<double>& x_nodes, const QuadSpec& spec = operator_spec());
cplx frac_integrate(FracKind kind, cplx alpha, const std::function<cplx(double)>& f, double x,
                    const QuadSpec& spec = operator_spec());

/// U_{1/2}(t -> cos(tA))(x).
OperatorResult frac_cosine_family(const CosineFamily& C, double x, const QuadSpec& spec = operator_spec());

/// Random battery for T_A(f*g) = T_A(f) T_A(g) with normal A and bump pairs.
struct HomomorphismTrial {
  int index = 0;
  std::vector<cplx> eigenvalues;
  double f_center = 0.0, f_width = 0.0, g_center = 0.0, g_width = 0.0;
  double norm_f = 0.0, norm_g = 0.0;
  double rel_error = 0.0;  // ||T(f*g) - T(f)T(g)||_F / (||T(f)||_F ||T(g)||_F)
};

struct BatteryOptions {
  int trials = 20;
  int dimension = 4;
  std::uint64_t seed = 20240607;
  double strip_fraction = 0.9;
  Exec exec = Exec::parallel;
};

/// Smooth bump (1 - ((x - c)/w)^2)^8 on |x - c| < w.
double battery_bump(double x, double center, double width);

std::vector<HomomorphismTrial> homomorphism_battery(const HypergroupInstance& H, const BatteryOptions& opt = {});

struct BoundednessTrial {
  int index = 0;
  double sup_phi = 0.0;      // max over the x grid of ||phi_A(x)||_2
  double bound = 0.0;        // kappa M0
  double cosine_ratio = 0.0; // max over t of ||cos(tA)||_2 / cosh(omega0 t)
};

/// Same draws as homomorphism_battery; x in {0, 0.25, ..., x_max}.
std::vector<BoundednessTrial> boundedness_battery(const HypergroupInstance& H, const BatteryOptions& opt = {},
                                                  double x_max = 8.0);

struct MellinCalculusTrial {
  int index = 0;
  std::vector<double> eigenvalues;
  double error = 0.0;  // max entry of |f(A)_mellin - U diag(f(lambda)) U*|
};

/// Positive definite batteries for h_2(A) through the Mellin calculus.
std::vector<MellinCalculusTrial> mellin_calculus_battery(int trials, int dimension, std::uint64_t seed,
                                                         Exec exec = Exec::parallel);

}  // namespace hyper
