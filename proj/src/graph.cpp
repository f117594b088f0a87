#include "qgraph/graph.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "qgraph/rng.hpp"

namespace qgraph {

std::string to_string(EdgeKind kind) {
  switch (kind) {
    case EdgeKind::star1: return "star1";
    case EdgeKind::star2: return "star2";
    case EdgeKind::glue: return "glue";
  }
  return "?";
}

EdgeKind edge_kind_from_string(const std::string& s) {
  if (s == "star1") return EdgeKind::star1;
  if (s == "star2") return EdgeKind::star2;
  if (s == "glue") return EdgeKind::glue;
  throw std::invalid_argument("unknown edge kind '" + s + "'");
}

MetricGraph::MetricGraph(Topology topology, QuasarShape shape, std::vector<double> edge_lengths,
                         bool check_interval)
    : topology_(topology), shape_(shape), edge_lengths_(std::move(edge_lengths)) {
  if (shape_.v1 < 0 || shape_.v2 < 0 || shape_.m < 0)
    throw std::invalid_argument("shape parameters must be nonnegative");
  if (shape_.total() < 1) throw std::invalid_argument("graph needs at least one edge");
  if (topology_ == Topology::star && (shape_.v2 != 0 || shape_.m != 0))
    throw std::invalid_argument("a star is described by (V, 0, 0)");
  if (static_cast<int>(edge_lengths_.size()) != shape_.total())
    throw std::invalid_argument("edge length count does not match shape");

  const double half_width = 0.5 / shape_.total();
  for (double l : edge_lengths_) {
    if (!(l > 0.0)) throw std::invalid_argument("edge lengths must be positive");
    if (check_interval && (l < 1.0 - half_width || l > 1.0 + half_width))
      throw std::invalid_argument("edge length outside [1 - 1/2V, 1 + 1/2V]");
  }

  const int centers = topology_ == Topology::quasar ? 2 : 1;
  const int leaves = shape_.v1 + shape_.v2;
  degree_.assign(centers + leaves, 0);
  outgoing_.assign(centers + leaves, {});
  bonds_.reserve(2 * edge_lengths_.size());

  int leaf = centers;
  for (int e = 0; e < edge_count(); ++e) {
    EdgeKind kind;
    int from;
    int to;
    if (e < shape_.v1) {
      kind = EdgeKind::star1;
      from = 0;
      to = leaf++;
    } else if (e < shape_.v1 + shape_.v2) {
      kind = EdgeKind::star2;
      from = 1;
      to = leaf++;
    } else {
      kind = EdgeKind::glue;
      from = 0;
      to = 1;
    }
    const double l = edge_lengths_[e];
    bonds_.push_back({from, to, e, l, kind});
    bonds_.push_back({to, from, e, l, kind});
    ++degree_[from];
    ++degree_[to];
    outgoing_[from].push_back(2 * e);
    outgoing_[to].push_back(2 * e + 1);
  }
}

double MetricGraph::undirected_length() const {
  return std::accumulate(edge_lengths_.begin(), edge_lengths_.end(), 0.0);
}

double MetricGraph::min_length() const {
  return *std::min_element(edge_lengths_.begin(), edge_lengths_.end());
}

double MetricGraph::max_length() const {
  return *std::max_element(edge_lengths_.begin(), edge_lengths_.end());
}

int MetricGraph::edge_components() const {
  if (topology_ == Topology::star) return 1;
  if (shape_.m > 0) return 1;
  return (shape_.v1 > 0 ? 1 : 0) + (shape_.v2 > 0 ? 1 : 0);
}

bool MetricGraph::operator==(const MetricGraph& other) const {
  return topology_ == other.topology_ && shape_ == other.shape_ &&
         edge_lengths_ == other.edge_lengths_;
}

namespace {

std::vector<double> sample_lengths(int count, std::uint64_t seed) {
  SplitMix64 rng(seed);
  std::vector<double> lengths(count);
  for (double& l : lengths) l = 1.0 + (rng.uniform() - 0.5) / count;
  return lengths;
}

}  // namespace

MetricGraph build_star(int v, std::uint64_t seed) {
  if (v < 1) throw std::invalid_argument("a star needs V >= 1");
  return MetricGraph(Topology::star, QuasarShape{v, 0, 0, seed}, sample_lengths(v, seed));
}

MetricGraph build_quasar(const QuasarShape& shape) {
  if (shape.v1 < 0 || shape.v2 < 0 || shape.m < 0 || shape.total() < 1)
    throw std::invalid_argument("quasar shape needs V1, V2, M >= 0 and V1 + V2 + M >= 1");
  return MetricGraph(Topology::quasar, shape, sample_lengths(shape.total(), shape.seed));
}

double BondScatteringMatrix::orthogonality_defect() const {
  const Eigen::MatrixXd defect =
      matrix.transpose() * matrix - Eigen::MatrixXd::Identity(matrix.rows(), matrix.cols());
  return defect.cwiseAbs().maxCoeff();
}

BondScatteringMatrix scattering_matrix(const MetricGraph& g) {
  const int n = g.bond_count();
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(n, n);
  for (int b = 0; b < n; ++b) {
    const int vertex = g.bond(b).head;
    const double v = g.degree(vertex);
    for (int next : g.outgoing(vertex))
      s(b, next) = (next == MetricGraph::reverse(b) ? -1.0 : 0.0) + 2.0 / v;
  }
  return {std::move(s)};
}

Rational backscatter_exact(int degree) { return Rational(2 - degree, degree); }
Rational transmission_exact(int degree) { return Rational(2, degree); }

Rational scattering_entry_exact(const MetricGraph& g, int from, int to) {
  const int vertex = g.bond(from).head;
  if (g.bond(to).tail != vertex) return Rational(0);
  const int v = g.degree(vertex);
  return to == MetricGraph::reverse(from) ? backscatter_exact(v) : transmission_exact(v);
}

}  // namespace qgraph
