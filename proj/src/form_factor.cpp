#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "qgraph/spectral.hpp"

namespace qgraph {

std::string to_string(CurveMethod method) {
  switch (method) {
    case CurveMethod::spectral: return "spectral";
    case CurveMethod::orbit: return "orbit";
    case CurveMethod::expansion: return "expansion";
  }
  return "?";
}

std::vector<double> unfold(const Spectrum& s) {
  const long n = s.level_count();
  if (n < 100) throw std::invalid_argument("unfolding needs at least 100 levels");
  const double density = static_cast<double>(n + s.levels_below) / s.lambda_max;
  std::vector<double> x = s.levels();
  for (double& v : x) v *= density;
  return x;
}

namespace {

std::vector<double> hann(int n) {
  std::vector<double> w(n);
  for (int k = 0; k < n; ++k) {
    const double s = std::sin(std::numbers::pi * (k + 0.5) / n);
    w[k] = s * s;
  }
  return w;
}

// Mean over windows and tau samples of one unfolded spectrum, for one tau.
struct RealizationEstimate {
  double mean = 0.0;
  std::vector<double> window_values;
};

RealizationEstimate estimate(std::span<const double> x, std::span<const double> taus,
                             int window, std::span<const double> w, double norm) {
  RealizationEstimate est;
  const int n = static_cast<int>(x.size());
  const int hop = std::max(1, window / 2);
  for (int start = 0; start + window <= n; start += hop) {
    double acc = 0.0;
    for (double tau : taus) {
      std::complex<double> sum = 0.0;
      const double omega = 2.0 * std::numbers::pi * tau;
      for (int k = 0; k < window; ++k) sum += w[k] * std::polar(1.0, omega * x[start + k]);
      acc += std::norm(sum) / norm;
    }
    est.window_values.push_back(acc / static_cast<double>(taus.size()));
  }
  est.mean = std::accumulate(est.window_values.begin(), est.window_values.end(), 0.0) /
             static_cast<double>(est.window_values.size());
  return est;
}

double sample_stderr(std::span<const double> v) {
  const double n = static_cast<double>(v.size());
  if (v.size() < 2) return std::numeric_limits<double>::infinity();
  const double mean = std::accumulate(v.begin(), v.end(), 0.0) / n;
  double ss = 0.0;
  for (double a : v) ss += (a - mean) * (a - mean);
  return std::sqrt(ss / (n - 1.0) / n);
}

}  // namespace

FormFactorCurve spectral_form_factor(std::span<const Spectrum> spectra,
                                     std::span<const double> tau_grid,
                                     const FormFactorOptions& options) {
  if (spectra.empty()) throw std::invalid_argument("form factor needs at least one spectrum");
  for (std::size_t i = 0; i < tau_grid.size(); ++i) {
    if (!(tau_grid[i] > 0.0)) throw std::invalid_argument("tau grid must be positive (tau = 0 excluded)");
    if (i > 0 && !(tau_grid[i] > tau_grid[i - 1]))
      throw std::invalid_argument("tau grid must be strictly increasing");
  }

  std::vector<std::vector<double>> unfolded;
  unfolded.reserve(spectra.size());
  for (const Spectrum& s : spectra) unfolded.push_back(unfold(s));

  int window = options.window;
  for (const auto& x : unfolded) window = std::min<int>(window, static_cast<int>(x.size()));

  FormFactorCurve curve;
  curve.method = CurveMethod::spectral;
  curve.realizations = static_cast<int>(spectra.size());
  curve.window = window;
  curve.bin_width =
      options.bin_width > 0.0 ? options.bin_width : 1.0 / spectra.front().shape.total();
  if (window < options.window) {
    std::ostringstream msg;
    msg << "window shortened to " << window << " levels (spectrum too short)";
    curve.warnings.push_back(msg.str());
  }

  const std::vector<double> w = hann(window);
  double norm = 0.0;
  for (double v : w) norm += v * v;

  const int samples = std::max(1, options.bin_samples);
  const double floor_tau = 0.25 / window;
  for (double tau : tau_grid) {
    std::vector<double> taus;
    for (int s = 0; s < samples; ++s) {
      const double offset =
          samples == 1 ? 0.0 : (static_cast<double>(s) / (samples - 1) - 0.5) * curve.bin_width;
      if (tau + offset > floor_tau) taus.push_back(tau + offset);
    }
    if (taus.empty()) taus.push_back(tau);

    // Per-realization results are kept in index order and reduced afterwards.
    std::vector<RealizationEstimate> per(unfolded.size());
    for (std::size_t r = 0; r < unfolded.size(); ++r)
      per[r] = estimate(unfolded[r], taus, window, w, norm);

    std::vector<double> means;
    for (const auto& e : per) means.push_back(e.mean);
    const double k = std::accumulate(means.begin(), means.end(), 0.0) / means.size();
    double err;
    if (means.size() >= 2) {
      err = sample_stderr(means);
    } else {
      // Half-overlapping windows: roughly half of them are independent.
      err = sample_stderr(per.front().window_values) * std::sqrt(2.0);
    }
    curve.points.push_back({tau, k, err});
    if (!(err <= options.max_relative_stderr * std::abs(k))) {
      std::ostringstream msg;
      msg << "relative standard error " << err / std::abs(k) << " exceeds "
          << options.max_relative_stderr << " at tau=" << tau;
      curve.warnings.push_back(msg.str());
    }
  }
  return curve;
}

}  // namespace qgraph
