#pragma once

// Closed-form reference correlations used as oracles.

#include <array>

namespace eprb {

/// Singlet two-particle average, -cos 2(alpha - beta).
double singlet_correlation(double alpha, double beta);
/// Single-particle averages of the singlet; both vanish.
double singlet_single_1(double alpha);
double singlet_single_2(double beta);

/// 2 sqrt 2.
double quantum_smax();

struct ChshAngles {
  double a, b;  // station 1
  double c, d;  // station 2
};

/// (0, pi/4) at station 1, (pi/8, 3pi/8) at station 2; |S| of the singlet
/// reaches quantum_smax() there.
ChshAngles canonical_chsh_angles();

/// Large-N average of x1 * x2 when every index pair is kept (no time
/// selection): -(1 - 4 delta / pi), delta = |alpha - beta| folded into
/// [0, pi/2].
double sawtooth_correlation(double alpha, double beta);

enum class ReferenceKind { singlet, sawtooth };

struct ReferenceCurve {
  ReferenceKind kind;
  double operator()(double alpha, double beta) const;
};

}  // namespace eprb
