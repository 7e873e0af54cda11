#include "hyper/measure.hpp"

#include <stdexcept>

namespace hyper {

double DensityPiece::at(double t) const {
  if (t < lo || t > hi) return 0.0;
  return regular(t) * endpoint_factor(lower, lo, t) * endpoint_factor(upper, hi, t);
}

RadonMeasure RadonMeasure::point(double x, double weight) {
  RadonMeasure mu;
  mu.support_lo = mu.support_hi = x;
  mu.atoms.push_back({x, weight});
  return mu;
}

double RadonMeasure::density(double t) const {
  double sum = 0.0;
  for (const auto& p : densities) sum += p.at(t);
  return sum;
}

void RadonMeasure::validate() const {
  if (!(support_lo <= support_hi)) throw std::invalid_argument("measure support is empty");
  for (const auto& a : atoms) {
    if (a.location < support_lo || a.location > support_hi) throw std::invalid_argument("atom outside support");
    if (!(a.weight >= 0.0)) throw std::invalid_argument("negative atom weight");
  }
  for (const auto& p : densities) {
    if (p.lo < support_lo || p.hi > support_hi || !(p.lo <= p.hi)) throw std::invalid_argument("density piece outside support");
    for (int k = 1; k < 8; ++k) {
      const double t = p.lo + (p.hi - p.lo) * k / 8.0;
      if (p.at(t) < 0.0) throw std::invalid_argument("negative density");
    }
  }
}

double total_mass(const RadonMeasure& mu, const QuadSpec& spec) {
  return integrate_measure([](double) { return 1.0; }, mu, spec).value;
}

}  // namespace hyper
