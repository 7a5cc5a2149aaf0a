#include "doctest.h"

#include <cmath>

#include "eprb/quantum_ref.hpp"
#include "eprb/types.hpp"

using namespace eprb;

namespace {

double s_combination(double (*f)(double, double), double a, double b, double c,
                     double d) {
  return f(a, c) - f(a, d) + f(b, c) + f(b, d);
}

// Midpoint quadrature over xi of x1 * x2 with the detection rule written out
// directly: x1 = sign cos 2(xi - alpha), x2 = sign cos 2(xi - beta + pi/2).
double integrated_sign_correlation(double alpha, double beta, int points) {
  double sum = 0.0;
  for (int k = 0; k < points; ++k) {
    const double xi = kTwoPi * (k + 0.5) / points;
    const double x1 = std::cos(2.0 * (xi - alpha)) > 0 ? 1.0 : -1.0;
    const double x2 = std::cos(2.0 * (xi - beta) + kPi) > 0 ? 1.0 : -1.0;
    sum += x1 * x2;
  }
  return sum / points;
}

}  // namespace

TEST_CASE("singlet correlation examples") {
  CHECK(singlet_correlation(0, 0) == doctest::Approx(-1.0));
  CHECK(singlet_correlation(0, kPi / 4) == doctest::Approx(0.0));
  CHECK(singlet_correlation(0, kPi / 2) == doctest::Approx(1.0));
  CHECK(singlet_single_1(0.3) == 0.0);
  CHECK(singlet_single_2(1.3) == 0.0);
}

TEST_CASE("quantum_smax is 2 sqrt 2 and attained at the canonical angles") {
  CHECK(quantum_smax() == doctest::Approx(2.8284271247461903).epsilon(1e-15));
  const auto q = canonical_chsh_angles();
  const double s = s_combination(singlet_correlation, q.a, q.b, q.c, q.d);
  CHECK(std::abs(std::abs(s) - quantum_smax()) < 1e-12);
}

TEST_CASE("grid search never exceeds 2 sqrt 2 (singlet) or 2 (sawtooth)") {
  // S depends on angle differences only, so a = 0 loses no generality.
  constexpr double step = 0.01;
  const int n = static_cast<int>(kPi / step) + 1;
  double best_singlet = 0.0, best_sawtooth = 0.0;
  for (int i = 0; i < n; ++i) {
    const double b = i * step;
    for (int j = 0; j < n; ++j) {
      const double c = j * step;
      for (int k = 0; k < n; ++k) {
        const double d = k * step;
        best_singlet = std::max(
            best_singlet,
            std::abs(s_combination(singlet_correlation, 0.0, b, c, d)));
        best_sawtooth = std::max(
            best_sawtooth,
            std::abs(s_combination(sawtooth_correlation, 0.0, b, c, d)));
      }
    }
  }
  CHECK(best_singlet <= quantum_smax() + 1e-6);
  CHECK(best_singlet > 2.82);
  CHECK(best_sawtooth <= 2.0 + 1e-12);
}

TEST_CASE("sawtooth closed form matches brute-force integration of the sign rule") {
  constexpr int points = 1'000'000;
  CHECK(std::abs(integrated_sign_correlation(0, kPi / 8, points) -
                 sawtooth_correlation(0, kPi / 8)) < 1e-3);
  for (double a : {0.0, 0.4, 1.1, 2.9}) {
    for (double b : {0.0, 0.25, 0.9, 1.7, 3.0, 5.5}) {
      CAPTURE(a);
      CAPTURE(b);
      CHECK(std::abs(integrated_sign_correlation(a, b, 200'000) -
                     sawtooth_correlation(a, b)) < 1e-3);
    }
  }
}

TEST_CASE("sawtooth examples") {
  CHECK(sawtooth_correlation(0, 0) == doctest::Approx(-1.0));
  CHECK(sawtooth_correlation(0, kPi / 4) == doctest::Approx(0.0));
  CHECK(sawtooth_correlation(0, kPi / 2) == doctest::Approx(1.0));
  CHECK(sawtooth_correlation(0, kPi / 8) == doctest::Approx(-0.5));
}

TEST_CASE("both references depend on alpha - beta only, with period pi") {
  for (double a = -3.0; a < 3.0; a += 0.37) {
    for (double b = -3.0; b < 3.0; b += 0.41) {
      for (const ReferenceCurve f : {ReferenceCurve{ReferenceKind::singlet},
                                     ReferenceCurve{ReferenceKind::sawtooth}}) {
        CHECK(f(a + 0.7, b + 0.7) == doctest::Approx(f(a, b)).epsilon(1e-12));
        CHECK(f(a + kPi, b) == doctest::Approx(f(a, b)).epsilon(1e-12));
        CHECK(std::abs(f(a, b)) <= 1.0);
      }
    }
  }
}

TEST_CASE("singlet and sawtooth agree at 0, pi/4, pi/2 and the singlet is never weaker") {
  for (double diff : {0.0, kPi / 4, kPi / 2}) {
    CHECK(singlet_correlation(diff, 0) ==
          doctest::Approx(sawtooth_correlation(diff, 0)).scale(1.0));
  }
  for (double diff = 0.0; diff < kPi; diff += 0.01) {
    CHECK(std::abs(singlet_correlation(diff, 0)) + 1e-12 >=
          std::abs(sawtooth_correlation(diff, 0)));
  }
}
