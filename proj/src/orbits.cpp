#include "qgraph/orbits.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace qgraph {

std::vector<int> least_rotation(std::span<const int> word) {
  const int n = static_cast<int>(word.size());
  if (n == 0) return {};
  std::vector<int> failure(2 * n, -1);
  int k = 0;
  for (int j = 1; j < 2 * n; ++j) {
    const int sj = word[j % n];
    int i = failure[j - k - 1];
    while (i != -1 && sj != word[(k + i + 1) % n]) {
      if (sj < word[(k + i + 1) % n]) k = j - i - 1;
      i = failure[i];
    }
    if (sj != word[(k + i + 1) % n]) {
      if (sj < word[k % n]) k = j;
      failure[j - k] = -1;
    } else {
      failure[j - k] = i + 1;
    }
  }
  std::vector<int> out(n);
  for (int i = 0; i < n; ++i) out[i] = word[(k + i) % n];
  return out;
}

int repetition_number(std::span<const int> word) {
  const int n = static_cast<int>(word.size());
  if (n == 0) return 1;
  std::vector<int> prefix(n, 0);
  for (int i = 1; i < n; ++i) {
    int j = prefix[i - 1];
    while (j > 0 && word[i] != word[j]) j = prefix[j - 1];
    if (word[i] == word[j]) ++j;
    prefix[i] = j;
  }
  const int p = n - prefix[n - 1];
  return n % p == 0 ? n / p : 1;
}

Orbit Orbit::from_sequence(std::span<const int> bonds) {
  Orbit o;
  o.bonds = least_rotation(bonds);
  o.repetition = repetition_number(o.bonds);
  return o;
}

bool is_closed_walk(const MetricGraph& g, std::span<const int> bonds) {
  const std::size_t n = bonds.size();
  if (n == 0) return false;
  for (std::size_t i = 0; i < n; ++i)
    if (g.bond(bonds[i]).head != g.bond(bonds[(i + 1) % n]).tail) return false;
  return true;
}

double amplitude(const BondScatteringMatrix& s, std::span<const int> bonds) {
  double a = 1.0;
  const std::size_t n = bonds.size();
  for (std::size_t i = 0; i < n; ++i) a *= s(bonds[i], bonds[(i + 1) % n]);
  return a;
}

Rational amplitude_exact(const MetricGraph& g, std::span<const int> bonds) {
  Rational a = 1;
  const std::size_t n = bonds.size();
  for (std::size_t i = 0; i < n; ++i) a *= scattering_entry_exact(g, bonds[i], bonds[(i + 1) % n]);
  return a;
}

std::vector<int> visit_counts(const MetricGraph& g, std::span<const int> bonds) {
  std::vector<int> c(g.edge_count(), 0);
  for (int b : bonds) ++c[g.bond(b).edge];
  return c;
}

namespace {

// Closed walks of the given length whose first bond is their smallest, kept
// only when the sequence is its own least rotation.
void search_orbits(const MetricGraph& g, int period, std::vector<Orbit>& out) {
  std::vector<int> word;
  word.reserve(period);
  auto extend = [&](auto&& self, int start) -> void {
    if (static_cast<int>(word.size()) == period) {
      if (g.bond(word.back()).head != g.bond(start).tail) return;
      if (least_rotation(word) == word) out.push_back(Orbit::from_sequence(word));
      return;
    }
    for (int next : g.outgoing(g.bond(word.back()).head)) {
      if (next < start) continue;
      word.push_back(next);
      self(self, start);
      word.pop_back();
    }
  };
  for (int start = 0; start < g.bond_count(); ++start) {
    word.assign(1, start);
    extend(extend, start);
  }
}

// The bond leaving `vertex` along edge e, or -1.
int bond_from(const MetricGraph& g, int edge, int vertex) {
  if (g.bond(2 * edge).tail == vertex) return 2 * edge;
  if (g.bond(2 * edge + 1).tail == vertex) return 2 * edge + 1;
  return -1;
}

// Appends `count` alternating traversals of `edge` starting at `vertex`;
// returns the end vertex or -1.
int append_block(const MetricGraph& g, int edge, int vertex, int count, std::vector<int>& word) {
  int b = bond_from(g, edge, vertex);
  if (b < 0) return -1;
  for (int i = 0; i < count; ++i) {
    word.push_back(b);
    b = MetricGraph::reverse(b);
  }
  return g.bond(word.back()).head;
}

void single_block_orbits(const MetricGraph& g, int period, std::vector<Orbit>& out) {
  if (period < 2 || period % 2 != 0) return;
  std::set<std::vector<int>> seen;
  auto keep = [&](const std::vector<int>& word) {
    Orbit o = Orbit::from_sequence(word);
    if (seen.insert(o.bonds).second) out.push_back(std::move(o));
  };

  std::vector<int> word;
  for (int e = 0; e < g.edge_count(); ++e) {
    word.clear();
    append_block(g, e, g.bond(2 * e).tail, period, word);
    keep(word);
  }
  for (int e = 0; e < g.edge_count(); ++e) {
    for (int f = e + 1; f < g.edge_count(); ++f) {
      for (int ce = 1; ce < period; ++ce) {
        for (int start : {g.bond(2 * e).tail, g.bond(2 * e).head}) {
          word.clear();
          const int mid = append_block(g, e, start, ce, word);
          if (mid < 0) continue;
          const int end = append_block(g, f, mid, period - ce, word);
          if (end != start) continue;
          keep(word);
        }
      }
    }
  }
}

}  // namespace

std::vector<OrbitClass> enumerate_classes(const MetricGraph& g, int period, EnumerationMode mode,
                                          const EnumerationOptions& options) {
  if (period < 1) throw std::invalid_argument("period must be positive");
  std::vector<Orbit> orbits;
  if (mode == EnumerationMode::full) {
    if (period > options.max_period)
      throw std::invalid_argument("period exceeds the full-enumeration cutoff");
    if (g.edge_count() > options.max_edges)
      throw std::invalid_argument("graph exceeds the full-enumeration edge cutoff");
    search_orbits(g, period, orbits);
  } else {
    single_block_orbits(g, period, orbits);
  }

  const BondScatteringMatrix s = scattering_matrix(g);
  const auto lengths = g.edge_lengths();
  std::map<std::vector<int>, OrbitClass> classes;
  for (Orbit& o : orbits) {
    std::vector<int> visits = visit_counts(g, o.bonds);
    auto [it, inserted] = classes.try_emplace(visits);
    OrbitClass& c = it->second;
    if (inserted) {
      c.visits = visits;
      c.period = period;
      for (int e = 0; e < g.edge_count(); ++e) c.length += visits[e] * lengths[e];
      if (options.exact) c.weight_exact = Rational(0);
    }
    c.weight += amplitude(s, o.bonds) / o.repetition;
    if (options.exact) *c.weight_exact += amplitude_exact(g, o.bonds) / o.repetition;
    c.orbits.push_back(std::move(o));
  }

  std::vector<OrbitClass> out;
  out.reserve(classes.size());
  for (auto& [key, c] : classes) out.push_back(std::move(c));
  return out;
}

OrbitFormFactor orbit_form_factor(const MetricGraph& g, std::span<const OrbitClass> classes,
                                  int n) {
  const double v = g.size_parameter();
  OrbitFormFactor k;
  k.tau = n / v;
  double sum_l2w2 = 0.0;
  double sum_w2 = 0.0;
  for (const OrbitClass& c : classes) {
    sum_l2w2 += c.length * c.length * c.weight * c.weight;
    sum_w2 += c.weight * c.weight;
  }
  k.exact_length = sum_l2w2 / (4.0 * v);
  k.approximate = k.tau * k.tau * v * sum_w2;
  return k;
}

OrbitFormFactor orbit_form_factor(const MetricGraph& g, int n, EnumerationMode mode,
                                  const EnumerationOptions& options) {
  EnumerationOptions o = options;
  o.exact = false;
  return orbit_form_factor(g, enumerate_classes(g, 2 * n, mode, o), n);
}

double pair_sum_oracle(const MetricGraph& g, int n, const EnumerationOptions& options) {
  const int period = 2 * n;
  if (period > options.max_period || g.edge_count() > options.max_edges)
    throw std::invalid_argument("pair sum oracle exceeds the enumeration cutoff");
  std::vector<Orbit> orbits;
  search_orbits(g, period, orbits);

  const BondScatteringMatrix s = scattering_matrix(g);
  struct Term {
    std::vector<int> visits;
    double length;
    double weight;
  };
  std::vector<Term> terms;
  terms.reserve(orbits.size());
  for (const Orbit& o : orbits) {
    double l = 0.0;
    for (int b : o.bonds) l += g.bond(b).length;
    terms.push_back({visit_counts(g, o.bonds), l, amplitude(s, o.bonds) / o.repetition});
  }

  // Only pairs with equal visit vectors contribute; sorting makes them adjacent.
  std::sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) { return a.visits < b.visits; });
  // Neumaier summation: classes hold thousands of orbits, so millions of
  // pair terms of both signs.
  double sum = 0.0;
  double carry = 0.0;
  for (std::size_t lo = 0; lo < terms.size();) {
    std::size_t hi = lo;
    while (hi < terms.size() && terms[hi].visits == terms[lo].visits) ++hi;
    for (std::size_t i = lo; i < hi; ++i)
      for (std::size_t j = lo; j < hi; ++j) {
        const double x = terms[i].length * terms[j].length * terms[i].weight * terms[j].weight;
        const double t = sum + x;
        carry += std::abs(sum) >= std::abs(x) ? (sum - t) + x : (x - t) + sum;
        sum = t;
      }
    lo = hi;
  }
  return (sum + carry) / (4.0 * g.size_parameter());
}

void write_classes_csv(std::ostream& out, std::span<const OrbitClass> classes) {
  out << "period,visit_vector,n_orbits,W_exact_num,W_exact_den,W_float\n";
  out.precision(17);
  for (const OrbitClass& c : classes) {
    out << c.period << ',';
    bool first = true;
    for (std::size_t e = 0; e < c.visits.size(); ++e) {
      if (c.visits[e] == 0) continue;
      if (!first) out << ';';
      out << e << ':' << c.visits[e];
      first = false;
    }
    out << ',' << c.orbit_count() << ',';
    if (c.weight_exact)
      out << numerator(*c.weight_exact) << ',' << denominator(*c.weight_exact);
    else
      out << ',';
    out << ',' << c.weight << '\n';
  }
}

}  // namespace qgraph
