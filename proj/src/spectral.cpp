#include "qgraph/spectral.hpp"
#include "spectrum_trim.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace qgraph {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

Eigen::MatrixXcd bond_unitary(const MetricGraph& g, const Eigen::MatrixXd& s, double lambda) {
  const int n = g.bond_count();
  Eigen::MatrixXcd u(n, n);
  for (int b = 0; b < n; ++b) {
    const std::complex<double> phase = std::polar(1.0, lambda * g.bond(b).length);
    u.row(b) = phase * s.row(b).cast<std::complex<double>>();
  }
  return u;
}

std::vector<double> unitary_phases(const Eigen::MatrixXcd& u) {
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(u, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) throw std::runtime_error("eigendecomposition failed");
  std::vector<double> phases(u.rows());
  for (int j = 0; j < u.rows(); ++j) phases[j] = std::arg(solver.eigenvalues()[j]);
  return phases;
}

// Phases sorted ascending in [0, 2pi).
std::vector<double> wrap_sorted(std::vector<double> phases) {
  for (double& p : phases) {
    if (p < 0.0) p += kTwoPi;
    if (p >= kTwoPi) p = 0.0;
  }
  std::sort(phases.begin(), phases.end());
  return phases;
}

struct PhaseStep {
  int crossings = 0;
  double total_advance = 0.0;
};

// Matches the sorted phases before and after a step of width h. Every branch
// must advance by an amount in [l_min h, l_max h] (up to slack); the branches
// that pass 2pi are the crossings. Sorted order is preserved up to swaps of
// branches closer than (l_max - l_min) h, which the slack absorbs.
PhaseStep match_phases(std::span<const double> before, std::span<const double> after, double h,
                       double l_min, double l_max) {
  const int n = static_cast<int>(before.size());
  const double lo = l_min * h;
  const double hi = l_max * h;
  const double slack = (hi - lo) + 1e-9;

  int c_lo = 0;
  int c_hi = 0;
  for (double w : before) {
    if (w >= kTwoPi - lo + slack) ++c_lo;
    if (w > kTwoPi - hi - slack) ++c_hi;
  }

  int best = -1;
  double best_score = 0.0;
  double best_total = 0.0;
  for (int c = c_lo; c <= c_hi; ++c) {
    bool ok = true;
    double score = 0.0;
    double total = 0.0;
    for (int i = 0; i < n && ok; ++i) {
      double adv = after[(i + c) % n] - before[i];
      if (i >= n - c) adv += kTwoPi;
      ok = adv >= lo - slack && adv <= hi + slack;
      score = std::max(score, std::abs(adv - 0.5 * (lo + hi)));
      total += adv;
    }
    if (ok && (best < 0 || score < best_score)) {
      best = c;
      best_score = score;
      best_total = total;
    }
  }
  if (best < 0)
    throw std::runtime_error("eigenphase monotonicity violated: no consistent branch matching");
  return {best, best_total};
}

struct Tracker {
  const MetricGraph& g;
  Eigen::MatrixXd s;
  double l_min;
  double l_max;
  TrackingOptions options;
  std::vector<double> roots;
  std::vector<int> mult;
  int clusters = 0;

  std::vector<double> phases_at(double lambda) const {
    return wrap_sorted(unitary_phases(bond_unitary(g, s, lambda)));
  }

  int crossings(std::span<const double> before, std::span<const double> after, double h) const {
    return match_phases(before, after, h, l_min, l_max).crossings;
  }

  // `count` crossings lie in (lo, hi]; `at_lo` are the sorted phases at lo.
  void refine(double lo, double hi, const std::vector<double>& at_lo, int count) {
    if (count <= 0) return;
    const double width = hi - lo;
    if (count == 1 && width <= options.tolerance) {
      roots.push_back(0.5 * (lo + hi));
      mult.push_back(1);
      return;
    }
    if (count > 1 && width <= std::max(options.merge_tolerance * hi, options.tolerance)) {
      roots.push_back(0.5 * (lo + hi));
      mult.push_back(count);
      ++clusters;
      return;
    }
    const double mid = 0.5 * (lo + hi);
    std::vector<double> at_mid = phases_at(mid);
    const int left = crossings(at_lo, at_mid, mid - lo);
    if (left > count)
      throw std::runtime_error("inconsistent crossing count during bisection");
    refine(lo, mid, at_lo, left);
    refine(mid, hi, at_mid, count - left);
  }
};

}  // namespace

std::complex<double> secular_value(const MetricGraph& g, double lambda) {
  if (!(lambda > 0.0)) throw std::invalid_argument("secular_value needs lambda > 0");
  const Eigen::MatrixXcd u = bond_unitary(g, scattering_matrix(g).matrix, lambda);
  const Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(u.rows(), u.cols()) - u;
  return m.partialPivLu().determinant();
}

std::vector<double> eigenphases(const MetricGraph& g, double lambda) {
  return unitary_phases(bond_unitary(g, scattering_matrix(g).matrix, lambda));
}

long Spectrum::level_count() const {
  long n = 0;
  for (int m : multiplicity) n += m;
  return n;
}

std::vector<double> Spectrum::levels() const {
  std::vector<double> out;
  out.reserve(level_count());
  for (std::size_t i = 0; i < values.size(); ++i)
    out.insert(out.end(), multiplicity[i], values[i]);
  return out;
}

namespace {

// Merges sorted roots closer than merge_tolerance * lambda.
void merge_close_roots(Spectrum& s, std::vector<double> roots, std::vector<int> mult) {
  std::vector<std::size_t> order(roots.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return roots[a] < roots[b]; });
  for (std::size_t i : order) {
    if (!s.values.empty() && roots[i] - s.values.back() <= s.merge_tolerance * roots[i]) {
      s.multiplicity.back() += mult[i];
      ++s.unresolved_clusters;
      continue;
    }
    s.values.push_back(roots[i]);
    s.multiplicity.push_back(mult[i]);
  }
}

}  // namespace

long drop_roots_above(Spectrum& s, double limit) {
  long dropped = 0;
  while (!s.values.empty() && s.values.back() > limit) {
    dropped += s.multiplicity.back();
    s.values.pop_back();
    s.multiplicity.pop_back();
  }
  return dropped;
}

Spectrum find_eigenvalues(const MetricGraph& g, double lambda_max, double grid_step,
                          const TrackingOptions& options) {
  if (!(lambda_max > 0.0)) throw std::invalid_argument("lambda_max must be positive");
  if (!(grid_step > 0.0)) throw std::invalid_argument("grid_step must be positive");
  if (grid_step > std::numbers::pi / (10.0 * g.undirected_length()) * (1.0 + 1e-12))
    throw std::invalid_argument("grid_step must be <= pi / (10 L)");

  Tracker t{g, scattering_matrix(g).matrix, g.min_length(), g.max_length(), options, {}, {}, 0};

  // At lambda = 0 the unitary is S itself; its phases at 0 belong to the
  // zero mode(s) and are not positive eigenvalues.
  std::vector<double> phases = unitary_phases(t.s.cast<std::complex<double>>());
  for (double& p : phases)
    if (std::abs(p) < 1e-9) p = 0.0;
  phases = wrap_sorted(std::move(phases));

  // Scan slightly past lambda_max so a root sitting exactly on it is kept.
  const double end = lambda_max + 4.0 * options.tolerance;
  long winding = 0;
  double advance = 0.0;
  double lambda = 0.0;
  while (lambda < end) {
    const double next = std::min(lambda + grid_step, end);
    std::vector<double> after = t.phases_at(next);
    const PhaseStep step = match_phases(phases, after, next - lambda, t.l_min, t.l_max);
    winding += step.crossings;
    advance += step.total_advance;
    t.refine(lambda, next, phases, step.crossings);
    phases = std::move(after);
    lambda = next;
  }

  Spectrum s;
  s.lambda_max = lambda_max;
  s.grid_step = grid_step;
  s.tolerance = options.tolerance;
  s.merge_tolerance = options.merge_tolerance;
  s.solver = "eigenphase-tracking";
  s.winding_count = winding;
  s.shape = g.shape();
  s.topology = g.topology();
  merge_close_roots(s, std::move(t.roots), std::move(t.mult));
  s.unresolved_clusters += t.clusters;
  winding -= drop_roots_above(s, lambda_max + options.tolerance);

  const double expected_advance = end * g.directed_length();
  if (std::abs(advance - expected_advance) > 1e-6 * std::max(1.0, expected_advance))
    throw std::runtime_error("tracked phase advance disagrees with lambda * L");
  if (s.level_count() != winding)
    throw std::runtime_error("reported eigenvalue count differs from phase winding");
  return s;
}

double lambda_for_levels(const MetricGraph& g, long levels, double margin) {
  return static_cast<double>(levels) * std::numbers::pi / g.undirected_length() * (1.0 + margin);
}

}  // namespace qgraph
