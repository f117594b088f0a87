#include "qgraph/families.hpp"

#include <cmath>
#include <stdexcept>

namespace qgraph {

FamilyContributions finite_family_contributions(int v1, int v2, int m, int n,
                                                int odd_glue_orbits) {
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  if (v1 < 0 || v2 < 0 || m < 0 || v1 + v2 + m < 1) throw std::invalid_argument("bad shape");
  const double v = v1 + v2 + m;
  FamilyContributions f;
  f.tau = n / v;
  const double scale = f.tau * f.tau * v;

  const double r1 = v1 + m > 0 ? -1.0 + 2.0 / (v1 + m) : 0.0;
  const double r2 = v2 + m > 0 ? -1.0 + 2.0 / (v2 + m) : 0.0;
  const double t1 = v1 + m > 0 ? 2.0 / (v1 + m) : 0.0;
  const double t2 = v2 + m > 0 ? 2.0 / (v2 + m) : 0.0;
  auto sq = [](double x) { return x * x; };
  const double dn = n;

  f.star1_single = scale * v1 * sq(std::pow(r1, n) / dn);
  f.star2_single = scale * v2 * sq(std::pow(r2, n) / dn);
  f.glue_single = scale * m * sq(std::pow(r1 * r2, n) / dn);

  f.glue_pair_odd =
      scale * 0.5 * m * (m - 1.0) * dn * sq(odd_glue_orbits * t1 * t2 * std::pow(r1 * r2, n - 1));
  if (n < 2) return f;

  const double splits = n - 1;
  f.star1_pair = scale * 0.5 * v1 * (v1 - 1.0) * splits * sq(t1 * t1 * std::pow(r1, n - 2));
  f.star2_pair = scale * 0.5 * v2 * (v2 - 1.0) * splits * sq(t2 * t2 * std::pow(r2, n - 2));

  const double glue_pairs = 0.5 * m * (m - 1.0);
  const double even_weight = t1 * t1 * std::pow(r1, n - 2) * std::pow(r2, n) +
                             t2 * t2 * std::pow(r2, n - 2) * std::pow(r1, n);
  f.glue_pair_even = scale * glue_pairs * splits * sq(even_weight);

  // Glue edge visited 2j times, star edge 2(n - j) times.
  double geo1 = 0.0;
  double geo2 = 0.0;
  for (int j = 1; j < n; ++j) {
    geo1 += std::pow(r2, 2 * j);
    geo2 += std::pow(r1, 2 * j);
  }
  f.mixed1 = scale * m * v1 * sq(t1 * t1 * std::pow(r1, n - 2)) * geo1;
  f.mixed2 = scale * m * v2 * sq(t2 * t2 * std::pow(r2, n - 2)) * geo2;
  return f;
}

FamilyContributions family_contributions_from_classes(const MetricGraph& g,
                                                      std::span<const OrbitClass> classes, int n) {
  const double v = g.size_parameter();
  FamilyContributions f;
  f.tau = n / v;
  const double scale = f.tau * f.tau * v;
  for (const OrbitClass& c : classes) {
    int star1 = 0, star2 = 0, glue = 0;
    bool odd = false;
    for (int e = 0; e < g.edge_count(); ++e) {
      if (c.visits[e] == 0) continue;
      switch (g.edge_kind(e)) {
        case EdgeKind::star1: ++star1; break;
        case EdgeKind::star2: ++star2; break;
        case EdgeKind::glue:
          ++glue;
          odd = odd || c.visits[e] % 2 != 0;
          break;
      }
    }
    const double w2 = scale * c.weight * c.weight;
    const int edges = star1 + star2 + glue;
    if (edges == 1) {
      (star1 ? f.star1_single : star2 ? f.star2_single : f.glue_single) += w2;
    } else if (edges == 2) {
      if (star1 == 2) f.star1_pair += w2;
      else if (star2 == 2) f.star2_pair += w2;
      else if (glue == 2) (odd ? f.glue_pair_odd : f.glue_pair_even) += w2;
      else if (star1 == 1 && glue == 1) f.mixed1 += w2;
      else if (star2 == 1 && glue == 1) f.mixed2 += w2;
      else throw std::invalid_argument("two-edge class spanning both stars cannot be closed");
    } else {
      throw std::invalid_argument("class outside the one- and two-edge families");
    }
  }
  return f;
}

}  // namespace qgraph
