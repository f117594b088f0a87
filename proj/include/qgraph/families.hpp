#pragma once

#include <span>

#include "qgraph/graph.hpp"
#include "qgraph/orbits.hpp"

namespace qgraph {

// Contribution tau^2 V sum W^2 of each most-backscattering orbit family at
// period 2n, tau = n/V. Single: one edge. Pair: two edges of one star.
// Glue pair: two glue edges, split by parity of the visit counts. Mixed: a
// glue edge and an edge of star i.
struct FamilyContributions {
  double tau = 0.0;
  double star1_single = 0.0;
  double star2_single = 0.0;
  double glue_single = 0.0;
  double star1_pair = 0.0;
  double star2_pair = 0.0;
  double glue_pair_even = 0.0;
  double glue_pair_odd = 0.0;
  double mixed1 = 0.0;
  double mixed2 = 0.0;

  double single_total() const { return star1_single + star2_single + glue_single; }
  double pair_total() const {
    return star1_pair + star2_pair + glue_pair_even + glue_pair_odd + mixed1 + mixed2;
  }
};

// Orbits in one odd-parity glue-pair class: the single-block word and its
// time reversal, which differ as cyclic sequences.
inline constexpr int kOddGluePairOrbits = 2;

// Closed-form family sums at finite (V1, V2, M) using exact class counts and
// r_i = -1 + 2/(V_i + M), t_i = 2/(V_i + M). `odd_glue_orbits` is the number
// of orbits per odd glue-pair class.
FamilyContributions finite_family_contributions(int v1, int v2, int m, int n,
                                                int odd_glue_orbits = kOddGluePairOrbits);

// The same sums accumulated class by class from an explicit enumeration
// (most-backscattering mode) of a quasar or star graph.
FamilyContributions family_contributions_from_classes(const MetricGraph& g,
                                                      std::span<const OrbitClass> classes, int n);

}  // namespace qgraph
