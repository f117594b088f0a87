#pragma once

#include <array>
#include <cmath>
#include <complex>

#include "qgraph/graph.hpp"

namespace qgraph {

// Asymptotic edge fractions: nu1 = V1/V, nu2 = V2/V, nu3 = M/V.
struct NuParams {
  double nu1 = 1.0;
  double nu2 = 0.0;
  double nu3 = 0.0;

  // Validates nu_i >= 0 and nu1 + nu2 + nu3 = 1 within 1e-15 (scaled).
  static NuParams make(double nu1, double nu2, double nu3);
  static NuParams from_shape(const QuasarShape& shape);

  double a() const { return nu1 + nu3; }
  double b() const { return nu2 + nu3; }
  template <class T> T tau1(T tau) const { return tau / a(); }
  template <class T> T tau2(T tau) const { return tau / b(); }
};

// Cubic coefficients c0..c3 of a polynomial in tau.
template <class S> using Cubic = std::array<S, 4>;

template <class S, class T> T evaluate(const Cubic<S>& c, T tau) {
  return T(c[0]) + tau * (T(c[1]) + tau * (T(c[2]) + tau * T(c[3])));
}

// Single star: 1 - 4 tau + 8 tau^2 - (8/3) tau^3.
template <class S = double> Cubic<S> star_coefficients() {
  return {S(1), S(-4), S(8), S(-8) / S(3)};
}

template <class T> T star_expansion(T tau) { return evaluate(star_coefficients<double>(), tau); }

// Coefficients of nu1 K_st(tau/nu1) + nu2 K_st(tau/nu2).
template <class S> Cubic<S> unglued_coefficients(const S& nu1, const S& nu2) {
  const Cubic<S> k = star_coefficients<S>();
  Cubic<S> c;
  S p1 = nu1;
  S p2 = nu2;
  for (int j = 0; j < 4; ++j) {
    c[j] = k[j] * (p1 + p2);
    p1 /= nu1;
    p2 /= nu2;
  }
  return c;
}

// Requires nu3 = 0 and nu1, nu2 > 0.
double unglued_combination(const NuParams& nu, double tau);

// Glued-star polynomial through tau^3:
//   1 - 8 tau + 8 (1 + 3 nu3) / (A B) tau^2
//     - (8/3) (nu1^2 + 14 nu3 nu1 + 14 nu3 nu2 + 17 nu3^2 + nu2^2) / (A^2 B^2) tau^3
// with A = nu1 + nu3, B = nu2 + nu3.
template <class S> Cubic<S> quasar_tau3_coefficients(const S& nu1, const S& nu2, const S& nu3) {
  const S a = nu1 + nu3;
  const S b = nu2 + nu3;
  const S ab = a * b;
  return {S(1), S(-8), S(8) * (S(1) + S(3) * nu3) / ab,
          S(-8) / S(3) *
              (nu1 * nu1 + S(14) * nu3 * nu1 + S(14) * nu3 * nu2 + S(17) * nu3 * nu3 + nu2 * nu2) /
              (ab * ab)};
}

inline Cubic<double> quasar_tau3_coefficients(const NuParams& nu) {
  return quasar_tau3_coefficients(nu.nu1, nu.nu2, nu.nu3);
}

template <class T> T quasar_tau3_polynomial(const NuParams& nu, T tau) {
  return evaluate(quasar_tau3_coefficients(nu), tau);
}

// nu1 = nu2, nu3 = 1 - 2 nu1, taken from the general polynomial. Its tau^2
// coefficient is 16 (2 - 3 nu1) / (1 - nu1)^2.
template <class S> Cubic<S> equal_nu_coefficients(const S& nu1) {
  return quasar_tau3_coefficients(nu1, nu1, S(1) - S(2) * nu1);
}

// Orbits without normal scattering: one star-1 edge, one star-2 edge, one glue edge.
template <class T> struct NoScatteringParts {
  T star1, star2, glue;
  T total() const { return star1 + star2 + glue; }
};

template <class T> NoScatteringParts<T> no_scattering_parts(const NuParams& nu, T tau) {
  using std::exp;
  NoScatteringParts<T> p{T(0), T(0), T(0)};
  if (nu.nu1 > 0) p.star1 = nu.nu1 * exp(T(-4) * nu.tau1(tau));
  if (nu.nu2 > 0) p.star2 = nu.nu2 * exp(T(-4) * nu.tau2(tau));
  if (nu.nu3 > 0) p.glue = nu.nu3 * exp(T(-4) * (nu.tau1(tau) + nu.tau2(tau)));
  return p;
}

// nu1 e^{-4 tau1} + nu2 e^{-4 tau2} + nu3 e^{-4 (tau1 + tau2)}
template <class T> T no_scattering_term(const NuParams& nu, T tau) {
  return no_scattering_parts(nu, tau).total();
}

// Two-edge single-block families in their large-V form. The glue pair is
// split by parity of the visit counts:
//   even: 8 tau^3 nu3^2 e^{-4(tau1+tau2)} (1/A^2 + 1/B^2)^2
//   odd:  8 tau^3 nu3^2 e^{-4(tau1+tau2)} / (A^2 B^2)
template <class T> struct TwoScatteringParts {
  T star1_pair, star2_pair, glue_pair_even, glue_pair_odd, mixed1, mixed2;
  T glue_pair() const { return glue_pair_even + glue_pair_odd; }
  T total() const {
    return star1_pair + star2_pair + glue_pair_even + glue_pair_odd + mixed1 + mixed2;
  }
};

template <class T> TwoScatteringParts<T> two_scattering_parts(const NuParams& nu, T tau) {
  using std::exp;
  const double a = nu.a();
  const double b = nu.b();
  const T tau3 = tau * tau * tau;
  const T e1 = a > 0 ? exp(T(-4) * nu.tau1(tau)) : T(0);
  const T e2 = b > 0 ? exp(T(-4) * nu.tau2(tau)) : T(0);
  TwoScatteringParts<T> p{T(0), T(0), T(0), T(0), T(0), T(0)};
  if (nu.nu1 > 0) p.star1_pair = T(8) * tau3 * (nu.nu1 * nu.nu1 / std::pow(a, 4)) * e1;
  if (nu.nu2 > 0) p.star2_pair = T(8) * tau3 * (nu.nu2 * nu.nu2 / std::pow(b, 4)) * e2;
  if (nu.nu3 > 0) {
    const double inv = 1.0 / (a * a) + 1.0 / (b * b);
    p.glue_pair_even = T(8) * tau3 * (nu.nu3 * nu.nu3 * inv * inv) * e1 * e2;
    p.glue_pair_odd = T(8) * tau3 * (nu.nu3 * nu.nu3 / (a * a * b * b)) * e1 * e2;
    if (nu.nu1 > 0)
      p.mixed1 = tau * tau * (4.0 * nu.nu3 * nu.nu1 * b / std::pow(a, 4)) * e1 * (T(1) - e2);
    if (nu.nu2 > 0)
      p.mixed2 = tau * tau * (4.0 * nu.nu3 * nu.nu2 * a / std::pow(b, 4)) * e2 * (T(1) - e1);
  }
  return p;
}

template <class T> T two_scattering_term(const NuParams& nu, T tau) {
  return two_scattering_parts(nu, tau).total();
}

// Leading tau^3 coefficient of two_scattering_term:
// 8 (1/A^2 + 1/B^2 + 3 nu3^2 / (A^2 B^2)).
double two_scattering_leading_coefficient(const NuParams& nu);

// Single-glue-edge classes at finite size:
// (1 / 4V) M (2n)^2 ((r1 r2)^n / n)^2 with r_i = -1 + 2 / (V_i + M).
// Tends to nu3 exp(-4 (tau1 + tau2)) at fixed tau = n / V.
double single_glue_finite_term(int v1, int v2, int m, int n);

}  // namespace qgraph
