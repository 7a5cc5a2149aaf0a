#include "eprb/quantum_ref.hpp"

#include <cmath>

#include "eprb/types.hpp"

namespace eprb {

double singlet_correlation(double alpha, double beta) {
  return -std::cos(2.0 * (alpha - beta));
}

double singlet_single_1(double) { return 0.0; }
double singlet_single_2(double) { return 0.0; }

double quantum_smax() { return 2.0 * std::sqrt(2.0); }

ChshAngles canonical_chsh_angles() {
  return {0.0, kPi / 4.0, kPi / 8.0, 3.0 * kPi / 8.0};
}

double sawtooth_correlation(double alpha, double beta) {
  double delta = std::fmod(std::abs(alpha - beta), kPi);
  if (delta > 0.5 * kPi) delta = kPi - delta;
  return -(1.0 - 4.0 * delta / kPi);
}

double ReferenceCurve::operator()(double alpha, double beta) const {
  return kind == ReferenceKind::singlet ? singlet_correlation(alpha, beta)
                                        : sawtooth_correlation(alpha, beta);
}

}  // namespace eprb
