#include "qgraph/expansions.hpp"

#include <stdexcept>

namespace qgraph {

NuParams NuParams::make(double nu1, double nu2, double nu3) {
  if (nu1 < 0 || nu2 < 0 || nu3 < 0) throw std::invalid_argument("nu must be nonnegative");
  if (std::abs(nu1 + nu2 + nu3 - 1.0) > 1e-15)
    throw std::invalid_argument("nu1 + nu2 + nu3 must equal 1");
  return {nu1, nu2, nu3};
}

NuParams NuParams::from_shape(const QuasarShape& shape) {
  return make(to_double(shape.nu1()), to_double(shape.nu2()), to_double(shape.nu3()));
}

double unglued_combination(const NuParams& nu, double tau) {
  if (nu.nu3 != 0.0) throw std::invalid_argument("unglued combination needs nu3 = 0");
  if (!(nu.nu1 > 0.0) || !(nu.nu2 > 0.0))
    throw std::invalid_argument("unglued combination needs nu1, nu2 > 0");
  return nu.nu1 * star_expansion(tau / nu.nu1) + nu.nu2 * star_expansion(tau / nu.nu2);
}

double two_scattering_leading_coefficient(const NuParams& nu) {
  const double a2 = nu.a() * nu.a();
  const double b2 = nu.b() * nu.b();
  double c = nu.nu3 > 0 ? 3.0 * nu.nu3 * nu.nu3 / (a2 * b2) : 0.0;
  if (a2 > 0) c += 1.0 / a2;
  if (b2 > 0) c += 1.0 / b2;
  return 8.0 * c;
}

double single_glue_finite_term(int v1, int v2, int m, int n) {
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  if (m == 0) return 0.0;
  const double v = v1 + v2 + m;
  const double r1 = -1.0 + 2.0 / (v1 + m);
  const double r2 = -1.0 + 2.0 / (v2 + m);
  // Each class is one orbit with A = (r1 r2)^n and repetition n, so it enters
  // K as l^2 (A / n)^2 / (4V) with l = 2n.
  const double twice_n = 2.0 * n;
  return m * twice_n * twice_n * std::pow(r1 * r2, 2 * n) / (4.0 * v * n * n);
}

}  // namespace qgraph
