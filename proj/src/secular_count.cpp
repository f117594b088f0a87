#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "qgraph/spectral.hpp"
#include "spectrum_trim.hpp"

namespace qgraph {

namespace {

// Positive eigenvalues of [[x, q], [q, y]] from the signs of the LDL^T pivots,
// pivoting on the larger diagonal entry.
int positive_inertia(double x, double q, double y) {
  if (std::abs(y) > std::abs(x)) std::swap(x, y);
  if (x == 0.0) return q != 0.0 ? 1 : 0;
  const double schur = y - q * (q / x);
  return (x > 0.0 ? 1 : 0) + (schur > 0.0 ? 1 : 0);
}

}  // namespace

// Eliminating every edge with Dirichlet values at the centers leaves the
// Dirichlet-to-Neumann matrix Lambda(lambda) on the centers:
//   leaf edge at center c contributes tan(lambda l) to Lambda_cc,
//   glue edge contributes -cot(lambda l) to both diagonals and csc(lambda l)
//   off the diagonal.
// In the basis (c1 +- c2)/sqrt2 the glue part becomes +tan(x/2) and
// -cot(x/2), which avoids the cot/csc cancellation near glue poles.
long count_eigenvalues_below(const MetricGraph& g, double lambda) {
  if (!(lambda > 0.0)) return 0;
  const auto lengths = g.edge_lengths();
  long dirichlet = 0;
  double a = 0.0;
  double b = 0.0;
  double tan_half = 0.0;
  double cot_half = 0.0;
  // Reduce each phase once and take both the Dirichlet count and the
  // trigonometric terms from the reduced value, so a pole and its count jump
  // always land on the same side under round-off.
  constexpr double pi = std::numbers::pi;
  for (int e = 0; e < g.edge_count(); ++e) {
    const double x = lambda * lengths[e];
    if (g.edge_kind(e) == EdgeKind::glue) {
      // y in [0, 2 pi); the Dirichlet count steps at y = pi, where tan(y/2)
      // has its pole.
      double k = std::floor(x / (2.0 * pi));
      double y = x - k * 2.0 * pi;
      if (y < 0.0) y += 2.0 * pi, k -= 1.0;
      if (y >= 2.0 * pi) y -= 2.0 * pi, k += 1.0;
      double t;
      double c;
      if (y < pi) {
        t = std::tan(0.5 * y);
        c = 1.0 / t;
        dirichlet += static_cast<long>(2.0 * k);
      } else {
        c = -std::tan(0.5 * (y - pi));
        t = 1.0 / c;
        dirichlet += static_cast<long>(2.0 * k) + 1;
      }
      tan_half += t;
      cot_half += c;
    } else {
      // y in [-pi/2, pi/2); the count steps where tan(y) jumps to -inf.
      double k = std::floor(x / pi + 0.5);
      double y = x - k * pi;
      if (y < -0.5 * pi) y += pi, k -= 1.0;
      if (y >= 0.5 * pi) y -= pi, k += 1.0;
      dirichlet += static_cast<long>(k);
      (g.edge_kind(e) == EdgeKind::star1 ? a : b) += std::tan(y);
    }
  }

  int positive = 0;
  if (g.shape().m > 0) {
    const double p = 0.5 * (a + b);
    const double q = 0.5 * (a - b);
    positive = positive_inertia(p + tan_half, q, p - cot_half);
  } else {
    if (g.degree(g.center1()) > 0 && a > 0.0) ++positive;
    if (g.topology() == Topology::quasar && g.degree(g.center2()) > 0 && b > 0.0) ++positive;
  }
  return dirichlet + positive - g.edge_components();
}

namespace {

struct CountingRefiner {
  const MetricGraph& g;
  TrackingOptions options;
  std::vector<double> values;
  std::vector<int> mult;
  int clusters = 0;

  void refine(double lo, long n_lo, double hi, long n_hi) {
    const long count = n_hi - n_lo;
    if (count <= 0) return;
    const double width = hi - lo;
    if (count == 1 && width <= options.tolerance) {
      push(0.5 * (lo + hi), 1);
      return;
    }
    if (count > 1 && width <= std::max(options.merge_tolerance * hi, options.tolerance)) {
      push(0.5 * (lo + hi), static_cast<int>(count));
      ++clusters;
      return;
    }
    const double mid = 0.5 * (lo + hi);
    long n_mid = count_eigenvalues_below(g, mid);
    // Round-off next to a root can push the count one step outside the bracket.
    n_mid = std::clamp(n_mid, n_lo, n_hi);
    refine(lo, n_lo, mid, n_mid);
    refine(mid, n_mid, hi, n_hi);
  }

  void push(double v, int m) {
    if (!values.empty() && v - values.back() <= options.merge_tolerance * v) {
      mult.back() += m;
      ++clusters;
      return;
    }
    values.push_back(v);
    mult.push_back(m);
  }
};

}  // namespace

Spectrum find_eigenvalues_by_counting(const MetricGraph& g, double lambda_max,
                                      const TrackingOptions& options) {
  return find_eigenvalues_by_counting(g, 0.0, lambda_max, options);
}

Spectrum find_eigenvalues_by_counting(const MetricGraph& g, double lambda_min, double lambda_max,
                                      const TrackingOptions& options) {
  if (!(lambda_max > 0.0)) throw std::invalid_argument("lambda_max must be positive");
  if (!(lambda_min >= 0.0) || !(lambda_min < lambda_max))
    throw std::invalid_argument("need 0 <= lambda_min < lambda_max");
  const double step = std::numbers::pi / (4.0 * g.undirected_length());

  CountingRefiner r{g, options, {}, {}, 0};
  const double end = lambda_max + 4.0 * options.tolerance;
  double lambda = lambda_min;
  const long below = count_eigenvalues_below(g, lambda_min);
  long n = below;
  while (lambda < end) {
    const double next = std::min(lambda + step, end);
    long n_next = count_eigenvalues_below(g, next);
    if (n_next < n) throw std::runtime_error("eigenvalue counting function decreased");
    r.refine(lambda, n, next, n_next);
    lambda = next;
    n = n_next;
  }

  Spectrum s;
  s.values = std::move(r.values);
  s.multiplicity = std::move(r.mult);
  s.lambda_min = lambda_min;
  s.levels_below = below;
  s.lambda_max = lambda_max;
  s.grid_step = step;
  s.tolerance = options.tolerance;
  s.merge_tolerance = options.merge_tolerance;
  s.solver = "dirichlet-to-neumann-counting";
  s.winding_count = n;
  s.unresolved_clusters = r.clusters;
  s.shape = g.shape();
  s.topology = g.topology();
  s.winding_count -= drop_roots_above(s, lambda_max + options.tolerance);
  n = s.winding_count - below;
  if (s.level_count() != n) throw std::runtime_error("refined roots do not match the count");
  return s;
}

}  // namespace qgraph
