#include "hyper/opcalc.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "hyper/specfun.hpp"

namespace hyper {

namespace {

constexpr double kPi = std::numbers::pi;

double norm1(const CMatrix& M) { return M.size() == 0 ? 0.0 : M.cwiseAbs().colwise().sum().maxCoeff(); }

std::string report(int evaluations, int intervals, double error) {
  std::ostringstream os;
  os << "evaluations=" << evaluations << " intervals=" << intervals << " error=" << error;
  return os.str();
}

// Slope and intercept of the least-squares line through (t_i, y_i), with the slope's standard error.
struct Line {
  double slope = 0.0, intercept = 0.0, slope_se = 0.0;
};

Line fit_line(const std::vector<double>& t, const std::vector<double>& y) {
  const double n = static_cast<double>(t.size());
  double st = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    st += t[i];
    sy += y[i];
  }
  const double tm = st / n, ym = sy / n;
  double stt = 0.0, sty = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    stt += (t[i] - tm) * (t[i] - tm);
    sty += (t[i] - tm) * (y[i] - ym);
  }
  Line L;
  L.slope = stt > 0.0 ? sty / stt : 0.0;
  L.intercept = ym - L.slope * tm;
  if (t.size() > 2 && stt > 0.0) {
    double rss = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
      const double r = y[i] - L.intercept - L.slope * t[i];
      rss += r * r;
    }
    L.slope_se = std::sqrt(rss / (n - 2.0) / stt);
  }
  return L;
}

cplx sinc_times(cplx lambda, double x) {
  const cplx z = lambda * x;
  if (std::abs(z) < 1e-4) return x * (1.0 - z * z / 6.0 + z * z * z * z / 120.0);
  return std::sin(z) / lambda;
}

double h2(double x) { return 4.0 / kPi * x * x / (1.0 + x * x * x * x); }

// phi_{alpha A}(x) with the shared-mesh operator integral.
QuadResult<CMatrix> phi_integral(const HypergroupInstance& H, const CosineFamily& C, double x, double alpha,
                                 const QuadSpec& spec) {
  if (!H.laplace_kernel) throw std::invalid_argument(H.name + " has no Laplace representation");
  auto g = [&](double t) { return C.cos(alpha * t); };
  return integrate_measure(g, (*H.laplace_kernel)(x), spec);
}

}  // namespace

CMatrix CosineFamily::cos(double t) const {
  if (spectral) {
    CVector d(eigenvalues.size());
    for (Eigen::Index j = 0; j < d.size(); ++j) d[j] = std::cos(t * eigenvalues[j]);
    return basis * d.asDiagonal() * basis_inv;
  }
  return cos_matrix(t * generator);
}

CMatrix CosineFamily::apply(const std::function<cplx(cplx)>& g) const {
  if (!spectral) throw std::logic_error("apply needs a spectral cosine family");
  CVector d(eigenvalues.size());
  for (Eigen::Index j = 0; j < d.size(); ++j) d[j] = g(eigenvalues[j]);
  return basis * d.asDiagonal() * basis_inv;
}

CosineFamily CosineFamily::scaled(double alpha) const {
  CosineFamily out = *this;
  out.generator *= alpha;
  out.eigenvalues *= alpha;
  out.omega0 *= std::abs(alpha);
  out.omega0_band *= std::abs(alpha);
  out.method_tag += " scaled";
  return out;
}

CMatrix cos_matrix(const CMatrix& X) {
  const Eigen::Index n = X.rows();
  const CMatrix I = CMatrix::Identity(n, n);
  const double nrm = norm1(X);
  int s = 0;
  if (nrm > 0.25) s = static_cast<int>(std::ceil(std::log2(nrm / 0.25)));
  const CMatrix Y = X / std::ldexp(1.0, s);
  const CMatrix Y2 = Y * Y;
  CMatrix term = I, C = I;
  for (int k = 1; k <= 14; ++k) {
    term = -(term * Y2) / static_cast<double>((2 * k - 1) * (2 * k));
    C += term;
    if (norm1(term) < 1e-18) break;
  }
  for (int i = 0; i < s; ++i) C = 2.0 * C * C - I;
  return C;
}

double spectral_norm(const CMatrix& M) {
  if (M.size() == 0) return 0.0;
  Eigen::JacobiSVD<CMatrix> svd(M);
  return svd.singularValues()(0);
}

CosineFamily cos_family_normal(const CVector& eigenvalues, const CMatrix& unitary, double omega0) {
  const Eigen::Index n = eigenvalues.size();
  if (unitary.rows() != n || unitary.cols() != n) throw std::invalid_argument("cos_family_normal: basis size mismatch");
  if ((unitary.adjoint() * unitary - CMatrix::Identity(n, n)).cwiseAbs().maxCoeff() > 1e-10)
    throw std::invalid_argument("cos_family_normal: basis is not unitary");
  for (Eigen::Index j = 0; j < n; ++j) {
    if (std::abs(eigenvalues[j].imag()) > omega0 * (1.0 + 1e-12)) {
      std::ostringstream os;
      os << "eigenvalue " << eigenvalues[j] << " outside the strip |Im| <= " << omega0;
      throw SpectrumOutsideStrip(os.str());
    }
  }
  CosineFamily C;
  C.n = static_cast<int>(n);
  C.spectral = true;
  C.eigenvalues = eigenvalues;
  C.basis = unitary;
  C.basis_inv = unitary.adjoint();
  C.generator = unitary * eigenvalues.asDiagonal() * C.basis_inv;
  C.kappa = 1.0;
  C.omega0 = omega0;
  C.certified = true;
  C.method_tag = "normal: U diag(cos(t lambda)) U*";
  return C;
}

CosineFamily cos_family_dense(const CMatrix& A, double t_scale, double norm_budget) {
  if (!A.allFinite()) throw std::invalid_argument("cos_family_dense: non-finite entries");
  if (A.rows() != A.cols()) throw std::invalid_argument("cos_family_dense: matrix is not square");
  if (norm1(A) * t_scale > norm_budget) {
    std::ostringstream os;
    os << "||A||_1 t_scale = " << norm1(A) * t_scale << " exceeds the budget " << norm_budget;
    throw OverflowRisk(os.str());
  }
  CosineFamily C;
  C.n = static_cast<int>(A.rows());
  C.generator = A;
  C.method_tag = "dense: scaled Taylor + double angle";
  // The running maximum of ||cos(tA)|| is a monotone envelope; fit its log on the upper half.
  const int samples = 201;
  std::vector<double> ts, env;
  double running = 0.0;
  for (int i = 0; i < samples; ++i) {
    const double t = t_scale * i / (samples - 1);
    running = std::max(running, spectral_norm(cos_matrix(t * A)));
    ts.push_back(t);
    env.push_back(running);
  }
  std::vector<double> tf, yf;
  for (int i = samples / 2; i < samples; ++i) {
    tf.push_back(ts[i]);
    yf.push_back(std::log(env[i]));
  }
  const Line L = fit_line(tf, yf);
  C.omega0 = std::max(0.0, L.slope);
  C.omega0_band = 2.0 * L.slope_se;
  double kappa = 1.0;
  for (int i = 0; i < samples; ++i) kappa = std::max(kappa, env[i] / std::cosh(C.omega0 * ts[i]));
  C.kappa = kappa;
  C.certified = false;
  return C;
}

double dalembert_defect(const CosineFamily& C, int trials, std::uint64_t seed, double t_max) {
  CounterRng rng(seed);
  double worst = 0.0;
  for (int k = 0; k < trials; ++k) {
    const double s = rng.uniform(-t_max, t_max), t = rng.uniform(-t_max, t_max);
    const CMatrix D = C.cos(s + t) + C.cos(s - t) - 2.0 * C.cos(s) * C.cos(t);
    const double scale = C.kappa * C.kappa * std::cosh(C.omega0 * s) * std::cosh(C.omega0 * t);
    worst = std::max(worst, spectral_norm(D) / scale);
  }
  return worst;
}

CMatrix random_unitary(int n, CounterRng& rng) {
  CMatrix Z(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) Z(i, j) = cplx(rng.normal(), rng.normal()) / std::sqrt(2.0);
  Eigen::HouseholderQR<CMatrix> qr(Z);
  CMatrix Q = qr.householderQ();
  const CMatrix R = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < n; ++j) {
    const cplx r = R(j, j);
    if (std::abs(r) > 0.0) Q.col(j) *= r / std::abs(r);
  }
  return Q;
}

CosineFamily random_normal_family(int n, double strip, double omega0, CounterRng& rng, double re_max) {
  CVector eig(n);
  for (int j = 0; j < n; ++j) eig[j] = cplx(rng.uniform(-re_max, re_max), rng.uniform(-strip, strip));
  const CMatrix U = random_unitary(n, rng);
  return cos_family_normal(eig, U, omega0);
}

CMatrix random_positive_definite(int n, CounterRng& rng, double lo, double hi) {
  const CMatrix U = random_unitary(n, rng);
  CVector d(n);
  for (int j = 0; j < n; ++j) d[j] = std::exp(rng.uniform(std::log(lo), std::log(hi)));
  CMatrix A = U * d.asDiagonal() * U.adjoint();
  return 0.5 * (A + A.adjoint());
}

QuadSpec operator_spec() {
  QuadSpec s;
  s.abs_tol = 1e-14;
  s.rel_tol = 1e-11;
  s.max_subdivisions = 4000;
  return s;
}

OperatorResult phi_A(const HypergroupInstance& H, const CosineFamily& C, double x, const QuadSpec& spec) {
  const auto r = phi_integral(H, C, x, 1.0, spec);
  OperatorResult out;
  out.matrix = r.value;
  out.method_tag = "phi_A: Laplace kernel, " + C.method_tag;
  out.quadrature_report = report(r.evaluations, r.intervals, r.error);
  if (C.omega0 > H.omega0 * (1.0 + 1e-12)) out.quadrature_report += " warning: cosine growth exceeds omega0 of " + H.name;
  out.error = r.error;
  return out;
}

OperatorResult T_A(const HypergroupInstance& H, const CosineFamily& C, const TransformInput& f, double alpha,
                   const QuadSpec& spec) {
  if (f.tail == Tail::oscillatory) throw std::invalid_argument("T_A: oscillatory tails are not supported");
  QuadSpec inner = spec;
  QuadSpec outer = spec;
  outer.rel_tol = std::max(spec.rel_tol, 1e-9);
  int inner_evals = 0;
  auto g = [&](double x) -> CMatrix {
    const cplx fx = f.f(x);
    if (fx == 0.0) return CMatrix::Zero(C.n, C.n);
    const auto r = phi_integral(H, C, x, alpha, inner);
    inner_evals += r.evaluations;
    return (fx * H.haar_density(x)) * r.value;
  };
  QuadResult<CMatrix> r = f.tail == Tail::compact ? integrate(g, 0.0, f.support_hi, outer)
                                                  : integrate_semi_infinite(g, 0.0, Decay::exponential, outer);
  OperatorResult out;
  out.matrix = r.value;
  out.method_tag = "T_A: nested quadrature, " + C.method_tag;
  out.quadrature_report = report(r.evaluations + inner_evals, r.intervals, r.error);
  out.error = r.error;
  return out;
}

OperatorResult T_A(const HypergroupInstance& H, const CosineFamily& C, const GridFunction& f, double alpha,
                   const QuadSpec& spec, Exec exec) {
  const std::size_t N = f.grid.size();
  std::vector<CMatrix> terms(N, CMatrix::Zero(C.n, C.n));
  parallel_for(N, exec, [&](std::size_t i) {
    if (f.values[i] == 0.0) return;
    terms[i] = (f.grid.haar_weights[i] * f.values[i]) * phi_integral(H, C, f.grid.nodes[i], alpha, spec).value;
  });
  OperatorResult out;
  out.matrix = CMatrix::Zero(C.n, C.n);
  for (const CMatrix& t : terms) out.matrix += t;
  out.method_tag = "T_A: grid quadrature " + f.grid.describe() + ", " + C.method_tag;
  return out;
}

CMatrix sin_over(const CosineFamily& C, double x) {
  if (C.spectral) return C.apply([x](cplx l) { return sinc_times(l, x); });
  if (x == 0.0) return CMatrix::Zero(C.n, C.n);
  QuadSpec s = operator_spec();
  return integrate([&](double t) { return C.cos(t); }, 0.0, x, s).value;
}

OperatorResult T_jacobi_sine(const CosineFamily& C, const TransformInput& f, double alpha, const QuadSpec& spec) {
  if (f.tail == Tail::oscillatory) throw std::invalid_argument("T_jacobi_sine: oscillatory tails are not supported");
  QuadSpec outer = spec;
  outer.rel_tol = std::max(spec.rel_tol, 1e-10);
  auto g = [&](double x) -> CMatrix { return (f.f(x) * std::sinh(x) / alpha) * sin_over(C, alpha * x); };
  QuadResult<CMatrix> r = f.tail == Tail::compact ? integrate(g, 0.0, f.support_hi, outer)
                                                  : integrate_semi_infinite(g, 0.0, Decay::exponential, outer);
  OperatorResult out;
  out.matrix = r.value;
  out.method_tag = "sine integral, " + C.method_tag;
  out.quadrature_report = report(r.evaluations, r.intervals, r.error);
  out.error = r.error;
  return out;
}

OperatorResult T_jacobi_sine(const CosineFamily& C, const std::function<cplx(double)>& f, const Grid& grid, double alpha) {
  OperatorResult out;
  out.matrix = CMatrix::Zero(C.n, C.n);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double x = grid.nodes[i];
    out.matrix += (grid.dx_weights[i] * f(x) * std::sinh(x) / alpha) * sin_over(C, alpha * x);
  }
  out.method_tag = "sine integral on " + grid.describe() + ", " + C.method_tag;
  return out;
}

OperatorResult mellin_operator_calculus(const CMatrix& A, const ComplexOfComplex& f_star, const QuadSpec& spec) {
  Eigen::ComplexEigenSolver<CMatrix> es(A);
  if (es.info() != Eigen::Success) throw std::invalid_argument("mellin_operator_calculus: eigen decomposition failed");
  const CVector ev = es.eigenvalues();
  Eigen::VectorXd logs(ev.size());
  for (Eigen::Index j = 0; j < ev.size(); ++j) {
    if (!(ev[j].real() > 0.0) || std::abs(ev[j].imag()) > 1e-10 * std::abs(ev[j]))
      throw std::invalid_argument("mellin_operator_calculus: spectrum is not in (0, inf)");
    logs[j] = std::log(ev[j].real());
  }
  const CMatrix V = es.eigenvectors();
  const CMatrix Vinv = V.inverse();
  auto half = [&](double sign) {
    auto g = [&](double tau) -> CMatrix {
      const cplx s(0.0, sign * tau);
      CVector d(ev.size());
      for (Eigen::Index j = 0; j < d.size(); ++j) d[j] = std::exp(-s * logs[j]);
      return (V * d.asDiagonal() * Vinv) * f_star(s);
    };
    return integrate_semi_infinite(g, 0.0, Decay::exponential, spec);
  };
  const auto a = half(1.0);
  const auto b = half(-1.0);
  OperatorResult out;
  out.matrix = (a.value + b.value) / (2.0 * kPi);
  out.method_tag = "Mellin calculus: (1/2 pi) int A^{-i tau} f*(i tau) d tau";
  out.quadrature_report = report(a.evaluations + b.evaluations, a.intervals + b.intervals, a.error + b.error);
  out.error = (a.error + b.error) / (2.0 * kPi);
  return out;
}

double LambdaOperator::norm() const {
  const Eigen::Index n = K.rows();
  Eigen::VectorXd s(n);
  for (Eigen::Index i = 0; i < n; ++i) s[i] = std::sqrt(grid.haar_weights[i]);
  CMatrix S = K;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) S(i, j) *= s[i] / s[j];
  if ((S - S.adjoint()).cwiseAbs().maxCoeff() <= 1e-14 * S.cwiseAbs().maxCoeff()) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(S, Eigen::EigenvaluesOnly);
    return es.eigenvalues().cwiseAbs().maxCoeff();
  }
  Eigen::BDCSVD<CMatrix> svd(S);
  return svd.singularValues()(0);
}

LambdaOperator lambda_op(const HypergroupInstance& H, const std::function<cplx(double)>& f, const Grid& grid, Exec exec,
                         const QuadSpec& spec) {
  const std::size_t N = grid.size();
  const bool geodesic = !H.inverse_involution;
  // Support of f, used to skip pairs whose product measure misses it.
  double support_hi = 0.0;
  for (std::size_t i = 0; i < N; ++i)
    if (f(grid.nodes[i]) != 0.0) support_hi = std::max(support_hi, grid.nodes[i]);
  support_hi = std::min(grid.hi, support_hi + (grid.hi - grid.lo) / grid.panels);
  LambdaOperator L;
  L.grid = grid;
  L.K = CMatrix::Zero(N, N);
  CMatrix T = CMatrix::Zero(N, N);
  parallel_for(N, exec, [&](std::size_t i) {
    for (std::size_t j = 0; j < N; ++j) {
      const double y = H.involution(grid.nodes[j]);
      if (geodesic && std::abs(grid.nodes[i] - y) >= support_hi) continue;
      T(i, j) = translate(H, f, grid.nodes[i], y, spec, support_hi);
    }
  });
  double asym = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j) {
      const cplx a = grid.haar_weights[i] * grid.haar_weights[j] * T(i, j);
      const cplx b = grid.haar_weights[j] * grid.haar_weights[i] * std::conj(T(j, i));
      asym = std::max(asym, std::abs(a - b));
      scale = std::max(scale, std::abs(a));
    }
  L.asymmetry = scale > 0.0 ? asym / scale : 0.0;
  if (geodesic) T = 0.5 * (T + T.adjoint()).eval();
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j) L.K(i, j) = grid.haar_weights[j] * T(i, j);
  return L;
}

double TranslationCosine::w_p() const { return std::max(std::abs(kappa_lo), std::abs(kappa_hi)) / p; }

double TranslationCosine::shift_norm(double t) const {
  const long m = std::lround(t / h);
  const long n = static_cast<long>(nodes.size());
  double ratio = 0.0;
  for (long j = 0; j < n; ++j) {
    const long k = j - m;
    if (k < 0 || k >= n) continue;
    ratio = std::max(ratio, q(nodes[k]) / q(nodes[j]));
  }
  return std::pow(ratio, 1.0 / p);
}

double TranslationCosine::cosine_norm(double t) const {
  if (p != 2.0) throw std::invalid_argument("cosine_norm is implemented for p = 2");
  const long m = std::lround(t / h);
  const long n = static_cast<long>(nodes.size());
  Eigen::MatrixXd S = Eigen::MatrixXd::Zero(n, n);
  for (long k = 0; k < n; ++k) {
    for (long sgn : {1L, -1L}) {
      const long j = k + sgn * m;
      if (j >= 0 && j < n) S(k, j) += 0.5 * std::sqrt(q(nodes[k]) / q(nodes[j]));
    }
  }
  Eigen::BDCSVD<Eigen::MatrixXd> svd(S);
  return svd.singularValues()(0);
}

std::vector<double> TranslationCosine::shift(const std::vector<double>& f, double t) const {
  const long m = std::lround(t / h);
  const long n = static_cast<long>(f.size());
  std::vector<double> out(f.size(), 0.0);
  for (long k = 0; k < n; ++k)
    if (k + m >= 0 && k + m < n) out[k] = f[k + m];
  return out;
}

std::vector<double> TranslationCosine::cosine(const std::vector<double>& f, double t) const {
  const auto a = shift(f, t);
  const auto b = shift(f, -t);
  std::vector<double> out(f.size());
  for (std::size_t k = 0; k < f.size(); ++k) out[k] = 0.5 * (a[k] + b[k]);
  return out;
}

TranslationCosine translation_cosine(const std::function<double(double)>& q, double p, double half_width, int steps) {
  if (!(p >= 1.0)) throw std::invalid_argument("translation_cosine requires p >= 1");
  if (steps < 1) throw std::invalid_argument("translation_cosine requires steps >= 1");
  TranslationCosine T;
  T.q = q;
  T.p = p;
  T.h = half_width / steps;
  for (int k = -steps; k <= steps; ++k) T.nodes.push_back(k * T.h);
  T.kappa_lo = std::numeric_limits<double>::infinity();
  T.kappa_hi = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 1; k + 1 < T.nodes.size(); ++k) {
    const double d = (std::log(q(T.nodes[k + 1])) - std::log(q(T.nodes[k - 1]))) / (2.0 * T.h);
    T.kappa_lo = std::min(T.kappa_lo, d);
    T.kappa_hi = std::max(T.kappa_hi, d);
  }
  if (T.nodes.size() < 3) T.kappa_lo = T.kappa_hi = 0.0;
  return T;
}

GrowthFit fit_shift_growth(const TranslationCosine& T, double t_max, int samples) {
  std::vector<double> ts, ys;
  for (int i = 0; i < samples; ++i) {
    const double t = T.h * std::round(t_max * i / (samples - 1) / T.h);
    ts.push_back(t);
    ys.push_back(std::log(T.shift_norm(t)));
  }
  const Line L = fit_line(ts, ys);
  return {L.slope, L.intercept, T.w_p()};
}

double intertwining_residual(const HypergroupInstance& H, const std::function<double(double)>& a, double band,
                             const std::vector<double>& t_values, const std::vector<double>& x_values) {
  if (!H.laplace_kernel) throw std::invalid_argument(H.name + " has no Laplace representation");
  QuadSpec s;
  s.abs_tol = 1e-13;
  s.rel_tol = 1e-11;
  s.max_subdivisions = 4000;
  auto f = [&](double u) { return integrate([&](double l) { return a(l) * std::cos(l * u); }, 0.0, band, s).value; };
  double worst = 0.0;
  for (double t : t_values) {
    for (double x : x_values) {
      const double lhs =
          integrate([&](double l) { return a(l) * std::cos(l * t) * H.character(l, x).real(); }, 0.0, band, s).value;
      const double rhs =
          integrate_measure([&](double u) { return 0.5 * (f(u + t) + f(u - t)); }, (*H.laplace_kernel)(x), s).value;
      worst = std::max(worst, std::abs(lhs - rhs));
    }
  }
  return worst;
}

cplx frac_integrate(FracKind kind, cplx alpha, const std::function<cplx(double)>& f, double x, const QuadSpec& spec) {
  if (!(alpha.real() > 0.0)) throw std::domain_error("frac_integrate requires Re alpha > 0");
  if (!(x >= 0.0)) throw std::domain_error("frac_integrate requires x >= 0");
  if (x == 0.0) return 0.0;
  const double beta = alpha.real() - 1.0;
  const double theta = alpha.imag();
  const bool flagged = beta < 0.0;
  // For complex alpha the factor gap^{i theta} oscillates without end at t = x.
  // Subtracting c sinh t, with int_0^x gap^{alpha-1} sinh t dt = (cosh x - 1)^alpha / alpha,
  // leaves an integrand that vanishes there.
  cplx c = 0.0;
  if (theta != 0.0) c = kind == FracKind::W ? f(x) : f(x) / std::sinh(x);
  auto g = [&](double t) -> cplx {
    cplx v = kind == FracKind::W ? f(t) * std::sinh(t) : f(t);
    v -= c * std::sinh(t);
    const double gap = cosh_gap(x, t);
    if (!flagged) v *= std::pow(gap, beta);
    if (theta != 0.0 && gap > 0.0) v *= std::exp(cplx(0.0, theta * std::log(gap)));
    return v;
  };
  QuadSpec s = spec.plain();
  if (flagged) s.upper = EndpointWeight::cosh_gap(beta);
  cplx total = integrate(g, 0.0, x, s).value;
  if (theta != 0.0) {
    const double sh = std::sinh(0.5 * x);
    total += c * std::exp(alpha * std::log(2.0 * sh * sh)) / alpha;
  }
  return total / gamma_complex(alpha);
}

std::vector<cplx> frac_integrate(FracKind kind, cplx alpha, const std::function<cplx(double)>& f,
                                 const std::vector<double>& x_nodes, const QuadSpec& spec) {
  std::vector<cplx> out;
  out.reserve(x_nodes.size());
  for (double x : x_nodes) out.push_back(frac_integrate(kind, alpha, f, x, spec));
  return out;
}

OperatorResult frac_cosine_family(const CosineFamily& C, double x, const QuadSpec& spec) {
  OperatorResult out;
  out.method_tag = "U_{1/2} of cos(tA), " + C.method_tag;
  if (x == 0.0) {
    out.matrix = CMatrix::Zero(C.n, C.n);
    return out;
  }
  QuadSpec s = spec.plain();
  s.upper = EndpointWeight::cosh_gap(-0.5);
  const auto r = integrate([&](double t) { return C.cos(t); }, 0.0, x, s);
  out.matrix = r.value / std::sqrt(kPi);
  out.quadrature_report = report(r.evaluations, r.intervals, r.error);
  out.error = r.error / std::sqrt(kPi);
  return out;
}

double battery_bump(double x, double center, double width) {
  const double u = (x - center) / width;
  return std::abs(u) < 1.0 ? std::pow(1.0 - u * u, 8) : 0.0;
}

namespace {

struct Draw {
  CosineFamily C;
  double fc, fw, gc, gw;
};

std::vector<Draw> battery_draws(const HypergroupInstance& H, const BatteryOptions& opt) {
  CounterRng root(opt.seed);
  std::vector<Draw> draws;
  for (int k = 0; k < opt.trials; ++k) {
    CounterRng rng = root.substream(static_cast<std::uint64_t>(k));
    Draw d;
    d.C = random_normal_family(opt.dimension, opt.strip_fraction * H.omega0, H.omega0, rng);
    d.fc = rng.uniform(0.0, 0.6);
    d.fw = rng.uniform(0.6, 1.0);
    d.gc = rng.uniform(0.0, 0.6);
    d.gw = rng.uniform(0.6, 1.0);
    draws.push_back(d);
  }
  return draws;
}

}  // namespace

std::vector<HomomorphismTrial> homomorphism_battery(const HypergroupInstance& H, const BatteryOptions& opt) {
  if (!H.laplace_kernel) throw std::invalid_argument(H.name + " has no Laplace representation");
  const auto draws = battery_draws(H, opt);
  const Grid grid = Grid::composite(H, 0.0, 3.5, 20, 12);
  std::vector<HomomorphismTrial> out(draws.size());
  parallel_for(draws.size(), opt.exec, [&](std::size_t k) {
    const Draw& d = draws[k];
    const auto F = GridFunction::sample(grid, [&](double x) { return cplx(battery_bump(x, d.fc, d.fw)); });
    const auto G = GridFunction::sample(grid, [&](double x) { return cplx(battery_bump(x, d.gc, d.gw)); });
    const auto FG = convolve(H, F, G, Exec::serial);
    std::vector<CMatrix> phi(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) phi[i] = phi_integral(H, d.C, grid.nodes[i], 1.0, operator_spec()).value;
    auto T = [&](const GridFunction& u) {
      CMatrix M = CMatrix::Zero(d.C.n, d.C.n);
      for (std::size_t i = 0; i < grid.size(); ++i)
        if (u.values[i] != 0.0) M += (grid.haar_weights[i] * u.values[i]) * phi[i];
      return M;
    };
    const CMatrix tf = T(F), tg = T(G), tfg = T(FG);
    HomomorphismTrial& r = out[k];
    r.index = static_cast<int>(k);
    r.eigenvalues.assign(d.C.eigenvalues.data(), d.C.eigenvalues.data() + d.C.eigenvalues.size());
    r.f_center = d.fc;
    r.f_width = d.fw;
    r.g_center = d.gc;
    r.g_width = d.gw;
    r.norm_f = tf.norm();
    r.norm_g = tg.norm();
    r.rel_error = (tfg - tf * tg).norm() / (r.norm_f * r.norm_g);
  });
  return out;
}

std::vector<BoundednessTrial> boundedness_battery(const HypergroupInstance& H, const BatteryOptions& opt, double x_max) {
  if (!H.laplace_kernel) throw std::invalid_argument(H.name + " has no Laplace representation");
  const auto draws = battery_draws(H, opt);
  std::vector<BoundednessTrial> out(draws.size());
  parallel_for(draws.size(), opt.exec, [&](std::size_t k) {
    const CosineFamily& C = draws[k].C;
    BoundednessTrial& r = out[k];
    r.index = static_cast<int>(k);
    r.bound = C.kappa * H.M0;
    const int nx = static_cast<int>(std::round(x_max / 0.25));
    for (int i = 0; i <= nx; ++i) r.sup_phi = std::max(r.sup_phi, spectral_norm(phi_A(H, C, 0.25 * i).matrix));
    for (int i = 0; i <= 100; ++i) {
      const double t = 0.1 * i;
      r.cosine_ratio = std::max(r.cosine_ratio, spectral_norm(C.cos(t)) / std::cosh(C.omega0 * t));
    }
  });
  return out;
}

std::vector<MellinCalculusTrial> mellin_calculus_battery(int trials, int dimension, std::uint64_t seed, Exec exec) {
  CounterRng root(seed);
  std::vector<CMatrix> mats;
  for (int k = 0; k < trials; ++k) {
    CounterRng rng = root.substream(static_cast<std::uint64_t>(k));
    mats.push_back(random_positive_definite(dimension, rng));
  }
  std::vector<MellinCalculusTrial> out(mats.size());
  const auto sec = [](cplx s) { return 1.0 / std::cos(kPi * s / 4.0); };
  parallel_for(mats.size(), exec, [&](std::size_t k) {
    const CMatrix& A = mats[k];
    Eigen::SelfAdjointEigenSolver<CMatrix> es(A);
    const Eigen::VectorXd ev = es.eigenvalues();
    CVector d(ev.size());
    for (Eigen::Index j = 0; j < ev.size(); ++j) d[j] = h2(ev[j]);
    const CMatrix ref = es.eigenvectors() * d.asDiagonal() * es.eigenvectors().adjoint();
    const CMatrix got = mellin_operator_calculus(A, sec).matrix;
    MellinCalculusTrial& r = out[k];
    r.index = static_cast<int>(k);
    r.eigenvalues.assign(ev.data(), ev.data() + ev.size());
    r.error = (got - ref).cwiseAbs().maxCoeff();
  });
  return out;
}

}  // namespace hyper
