#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <map>
#include <memory>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>
#include <Eigen/Core>
#include <boost/version.hpp>

#include "qgraph/ensemble.hpp"
#include "qgraph/expansions.hpp"
#include "qgraph/families.hpp"
#include "qgraph/io.hpp"
#include "qgraph/orbits.hpp"
#include "qgraph/spectral.hpp"

#ifndef QGRAPH_VERSION
#define QGRAPH_VERSION "0.0.0"
#endif

namespace qgraph::cli {

using nlohmann::json;

std::vector<double> parse_tau_grid(const std::string& spec) {
  std::vector<double> parts;
  std::stringstream in(spec);
  std::string item;
  while (std::getline(in, item, ':')) {
    std::size_t used = 0;
    const double v = std::stod(item, &used);
    if (used != item.size()) throw std::invalid_argument("bad tau grid '" + spec + "'");
    parts.push_back(v);
  }
  if (parts.size() == 1) return parts;
  if (parts.size() != 3 || !(parts[2] > 0.0) || parts[1] < parts[0])
    throw std::invalid_argument("tau grid must be from:to:step with step > 0, got '" + spec + "'");
  const long count = static_cast<long>(std::floor((parts[1] - parts[0]) / parts[2] + 1e-9)) + 1;
  std::vector<double> grid;
  for (long i = 0; i < count; ++i) grid.push_back(parts[0] + i * parts[2]);
  return grid;
}

json versions() {
  std::ostringstream eigen;
  eigen << EIGEN_WORLD_VERSION << '.' << EIGEN_MAJOR_VERSION << '.' << EIGEN_MINOR_VERSION;
  std::ostringstream njson;
  njson << NLOHMANN_JSON_VERSION_MAJOR << '.' << NLOHMANN_JSON_VERSION_MINOR << '.'
        << NLOHMANN_JSON_VERSION_PATCH;
  return {{"qgraph", QGRAPH_VERSION},
          {"eigen", eigen.str()},
          {"boost", BOOST_LIB_VERSION},
          {"nlohmann_json", njson.str()},
          {"cli11", CLI11_VERSION}};
}

namespace {

struct Context {
  std::string command;
  ExperimentConfig cfg;
  std::string config_text;
  json results = json::object();
  std::vector<std::string> warnings;
  // Written by a single writer once the command has finished.
  std::vector<std::pair<std::string, std::string>> files;

  void add_file(const std::string& name, const std::string& content) {
    files.emplace_back(name, content);
  }

  // Config lines embedded as comments in every CSV.
  std::vector<std::string> provenance() const {
    std::vector<std::string> lines{"command=" + command};
    std::stringstream in(config_text);
    std::string line;
    while (std::getline(in, line))
      if (!line.empty()) lines.push_back(line);
    return lines;
  }
};

json config_json(const Context& c) {
  const ExperimentConfig& f = c.cfg;
  return {{"command", c.command},  {"star", f.star},     {"v1", f.v1},
          {"v2", f.v2},            {"m", f.m},           {"seed", f.seed},
          {"ensemble", f.ensemble}, {"levels", f.levels}, {"skip_levels", f.skip_levels},
          {"lambda_max", f.lambda_max}, {"solver", f.solver}, {"tau", f.tau},
          {"methods", f.methods},  {"n", f.n},           {"mode", f.mode},
          {"nu1", f.nu1},          {"nu2", f.nu2},       {"nu3", f.nu3},
          {"control", f.control},  {"threads", f.threads}, {"out", f.out},
          {"config_text", c.config_text}};
}

struct Shape {
  Topology topology;
  QuasarShape shape;
};

Shape shape_of(const ExperimentConfig& cfg) {
  if (cfg.star > 0) {
    if (cfg.v1 || cfg.v2 || cfg.m) throw std::invalid_argument("--star excludes --v1/--v2/--m");
    return {Topology::star, {cfg.star, 0, 0, cfg.seed}};
  }
  if (cfg.v1 + cfg.v2 + cfg.m < 1)
    throw std::invalid_argument("give --star V or a quasar shape --v1 --v2 --m");
  return {Topology::quasar, {cfg.v1, cfg.v2, cfg.m, cfg.seed}};
}

MetricGraph build(const Shape& s) {
  return s.topology == Topology::star ? build_star(s.shape.v1, s.shape.seed) : build_quasar(s.shape);
}

long skip_for(const ExperimentConfig& cfg, const QuasarShape& shape) {
  return cfg.skip_levels >= 0 ? cfg.skip_levels : kSkipLevelsPerEdge * shape.total();
}

std::string csv_of(const FormFactorCurve& curve, const std::vector<std::string>& comments) {
  std::ostringstream s;
  write_curve_csv(s, curve, comments);
  return s.str();
}

// Expansion reference for a shape: the tau^3 polynomial, or the single-star
// series when one of the two stars is absent.
struct Expansion {
  std::optional<NuParams> nu;

  double operator()(double tau) const {
    if (!nu || nu->a() <= 0.0 || nu->b() <= 0.0) return star_expansion(tau);
    return quasar_tau3_polynomial(*nu, tau);
  }
  Cubic<double> coefficients() const {
    if (!nu || nu->a() <= 0.0 || nu->b() <= 0.0) return star_coefficients<double>();
    return quasar_tau3_coefficients(*nu);
  }
};

Expansion expansion_for(const Shape& s) {
  if (s.topology == Topology::star) return {};
  return {NuParams::from_shape(s.shape)};
}

json coefficients_json(const Cubic<double>& c) {
  return {{"tau0", c[0]}, {"tau1", c[1]}, {"tau2", c[2]}, {"tau3", c[3]}};
}

FormFactorCurve expansion_curve(const Expansion& e, const std::vector<double>& taus) {
  FormFactorCurve curve;
  curve.method = CurveMethod::expansion;
  for (double t : taus) curve.points.push_back({t, e(t), 0.0});
  return curve;
}

std::vector<Spectrum> run_ensemble(Context& c, const Shape& s, int realizations) {
  EnsembleSpec spec;
  spec.topology = s.topology;
  spec.shape = s.shape;
  spec.realizations = realizations;
  spec.levels = c.cfg.levels;
  spec.skip_levels = skip_for(c.cfg, s.shape);
  spec.base_seed = c.cfg.seed;
  spec.threads = c.cfg.threads;
  auto spectra = ensemble_spectra(spec);
  int clusters = 0;
  for (const auto& sp : spectra) clusters += sp.unresolved_clusters;
  if (clusters > 0)
    c.warnings.push_back(std::to_string(clusters) + " unresolved eigenvalue cluster(s) in the ensemble");
  return spectra;
}

FormFactorCurve spectral_curve(Context& c, const std::vector<Spectrum>& spectra,
                               const std::vector<double>& taus, const std::string& label) {
  std::vector<double> positive;
  for (double t : taus)
    if (t > 0.0) positive.push_back(t);
  if (positive.size() != taus.size())
    c.warnings.push_back(label + ": tau <= 0 dropped from the spectral grid");
  if (positive.empty()) throw std::invalid_argument("no positive tau for the spectral estimator");
  FormFactorCurve curve = spectral_form_factor(spectra, positive);
  for (const auto& w : curve.warnings) c.warnings.push_back(label + ": " + w);
  return curve;
}

// Orbit curve: tau^2 V sum W^2 at n = round(tau V). Small graphs are
// enumerated; large graphs in most-backscattering mode use the family
// closed forms, which equal the class-by-class sum.
FormFactorCurve orbit_curve(Context& c, const Shape& s, const std::vector<double>& taus, json& detail) {
  const MetricGraph g = build(s);
  const EnumerationMode mode =
      c.cfg.mode == "full" ? EnumerationMode::full : EnumerationMode::most_backscattering;
  const int v = s.shape.total();
  FormFactorCurve curve;
  curve.method = CurveMethod::orbit;
  std::vector<int> ns;
  if (c.cfg.n > 0) {
    ns.push_back(c.cfg.n);
  } else {
    for (double t : taus) {
      const int n = static_cast<int>(std::lround(t * v));
      if (n >= 1 && (ns.empty() || ns.back() != n)) ns.push_back(n);
    }
  }
  const bool enumerate = mode == EnumerationMode::full || g.edge_count() <= 12;
  detail = json::array();
  for (int n : ns) {
    json row{{"n", n}, {"tau", static_cast<double>(n) / v}};
    double k;
    if (enumerate) {
      const auto classes = enumerate_classes(g, 2 * n, mode);
      const OrbitFormFactor f = orbit_form_factor(g, classes, n);
      k = f.approximate;
      row["exact_length"] = f.exact_length;
      row["approximate"] = f.approximate;
      row["classes"] = classes.size();
      if (mode == EnumerationMode::full) row["pair_sum_oracle"] = pair_sum_oracle(g, n);
    } else {
      const FamilyContributions f = finite_family_contributions(s.shape.v1, s.shape.v2, s.shape.m, n);
      k = f.single_total() + f.pair_total();
      row["approximate"] = k;
      row["source"] = "family closed forms";
    }
    detail.push_back(row);
    curve.points.push_back({static_cast<double>(n) / v, k, 0.0});
  }
  return curve;
}

std::string gnuplot_script(const std::vector<std::pair<std::string, std::string>>& curves,
                           const std::string& title) {
  std::ostringstream s;
  s << "# gnuplot script; run with: gnuplot -p <this file>\n"
    << "set datafile separator ','\n"
    << "set datafile commentschars '#'\n"
    << "set key autotitle columnhead\n"
    << "set xlabel 'tau'\nset ylabel 'K(tau)'\n"
    << "set title '" << title << "'\n"
    << "plot";
  for (std::size_t i = 0; i < curves.size(); ++i) {
    const auto& [file, label] = curves[i];
    const bool errors = label.find("spectral") != std::string::npos;
    s << (i ? ", \\\n    " : " ") << "'" << file << "' using 1:2"
      << (errors ? ":3 with yerrorbars" : " with lines") << " title '" << label << "'";
  }
  s << '\n';
  return s.str();
}

std::string comparison_csv(const std::vector<double>& taus,
                           const std::vector<std::pair<std::string, FormFactorCurve>>& curves,
                           const std::vector<std::string>& comments) {
  std::ostringstream s;
  for (const auto& c : comments) s << "# " << c << '\n';
  s << "tau";
  for (const auto& [name, curve] : curves) s << ",K_" << name << ",stderr_" << name;
  s << '\n' << std::setprecision(17);
  for (double t : taus) {
    s << t;
    for (const auto& [name, curve] : curves) {
      const auto it = std::find_if(curve.points.begin(), curve.points.end(),
                                   [&](const FormFactorPoint& p) { return std::abs(p.tau - t) < 1e-12; });
      if (it == curve.points.end()) s << ",,";
      else s << ',' << it->k << ',' << it->stderr_k;
    }
    s << '\n';
  }
  return s.str();
}

json curve_points_json(const FormFactorCurve& curve) {
  json j = json::array();
  for (const auto& p : curve.points) j.push_back({{"tau", p.tau}, {"K", p.k}, {"stderr", p.stderr_k}});
  return j;
}

void cmd_generate(Context& c) {
  const Shape s = shape_of(c.cfg);
  const MetricGraph g = build(s);
  const std::string name = c.cfg.output.empty() ? "graph.json" : c.cfg.output;
  c.add_file(name, graph_to_json(g) + "\n");
  c.results = {{"file", name}, {"edges", g.edge_count()}, {"bonds", g.bond_count()},
               {"undirected_length", g.undirected_length()}};
}

void cmd_spectrum(Context& c) {
  const Shape s = shape_of(c.cfg);
  const MetricGraph g = build(s);
  const double lambda_max = c.cfg.lambda_max > 0.0 ? c.cfg.lambda_max : lambda_for_levels(g, c.cfg.levels);
  Spectrum sp;
  if (c.cfg.solver == "tracking") {
    sp = find_eigenvalues(g, lambda_max, std::numbers::pi / (10.0 * g.undirected_length()));
  } else if (c.cfg.solver == "counting") {
    sp = find_eigenvalues_by_counting(g, lambda_max);
  } else {
    throw std::invalid_argument("--solver must be tracking or counting");
  }
  if (sp.unresolved_clusters > 0)
    c.warnings.push_back(std::to_string(sp.unresolved_clusters) + " unresolved eigenvalue cluster(s)");
  std::ostringstream csv;
  for (const auto& line : c.provenance()) csv << "# " << line << '\n';
  write_spectrum_csv(csv, sp);
  c.add_file("spectrum.csv", csv.str());
  json full = spectrum_to_json(sp);
  full["config"] = config_json(c);
  c.add_file("spectrum.json", full.dump(2) + "\n");
  c.results = {{"levels", sp.level_count()},
               {"winding_count", sp.winding_count},
               {"lambda_max", lambda_max},
               {"solver", sp.solver},
               {"unresolved_clusters", sp.unresolved_clusters},
               {"files", {"spectrum.csv", "spectrum.json"}}};
}

void cmd_form_factor(Context& c) {
  const Shape s = shape_of(c.cfg);
  const std::vector<double> taus = parse_tau_grid(c.cfg.tau);
  const auto comments = c.provenance();
  std::vector<std::pair<std::string, FormFactorCurve>> curves;
  std::vector<std::pair<std::string, std::string>> plotted;
  for (const std::string& method : c.cfg.methods) {
    FormFactorCurve curve;
    if (method == "spectral") {
      const auto spectra = run_ensemble(c, s, c.cfg.ensemble);
      curve = spectral_curve(c, spectra, taus, "spectral");
      c.results["spectral"] = {{"realizations", curve.realizations},
                               {"window", curve.window},
                               {"bin_width", curve.bin_width},
                               {"skip_levels", skip_for(c.cfg, s.shape)},
                               {"points", curve_points_json(curve)}};
    } else if (method == "orbit") {
      json detail;
      curve = orbit_curve(c, s, taus, detail);
      c.results["orbit"] = {{"mode", c.cfg.mode}, {"points", detail}};
    } else if (method == "expansion") {
      const Expansion e = expansion_for(s);
      curve = expansion_curve(e, taus);
      json r{{"coefficients", coefficients_json(e.coefficients())},
             {"points", curve_points_json(curve)}};
      if (e.nu) r["nu"] = {e.nu->nu1, e.nu->nu2, e.nu->nu3};
      c.results["expansion"] = r;
    } else {
      throw std::invalid_argument("unknown method '" + method + "'");
    }
    const std::string file = "form_factor_" + method + ".csv";
    c.add_file(file, csv_of(curve, comments));
    plotted.emplace_back(file, method);
    curves.emplace_back(method, std::move(curve));
  }
  std::vector<double> all_taus = taus;
  for (const auto& [name, curve] : curves)
    for (const auto& p : curve.points)
      if (std::none_of(all_taus.begin(), all_taus.end(), [&](double t) { return std::abs(t - p.tau) < 1e-12; }))
        all_taus.push_back(p.tau);
  std::sort(all_taus.begin(), all_taus.end());
  c.add_file("form_factor_comparison.csv", comparison_csv(all_taus, curves, comments));
  c.add_file("form_factor.gp", gnuplot_script(plotted, "form factor"));
}

double max_abs_diff(const FormFactorCurve& curve, const std::function<double(double)>& ref, double lo, double hi) {
  double worst = 0.0;
  for (const auto& p : curve.points)
    if (p.tau >= lo - 1e-12 && p.tau <= hi + 1e-12) worst = std::max(worst, std::abs(p.k - ref(p.tau)));
  return worst;
}

double median_stderr(const FormFactorCurve& curve, double hi) {
  std::vector<double> e;
  for (const auto& p : curve.points)
    if (p.tau <= hi + 1e-12) e.push_back(p.stderr_k);
  if (e.empty()) return 0.0;
  std::nth_element(e.begin(), e.begin() + e.size() / 2, e.end());
  return e[e.size() / 2];
}

void cmd_reproduce_figure2(Context& c) {
  const std::vector<double> taus = parse_tau_grid(c.cfg.tau);
  const auto comments = c.provenance();
  if (c.cfg.ensemble < 20)
    c.warnings.push_back("ensemble of " + std::to_string(c.cfg.ensemble) +
                         " realizations is below the recommended 20");

  const Shape weak{Topology::quasar, {50, 50, 1, c.cfg.seed}};
  const Shape strong{Topology::quasar, {50, 50, 50, c.cfg.seed}};
  const Expansion unglued{NuParams::make(0.5, 0.5, 0.0)};
  const Expansion equal{NuParams::from_shape(strong.shape)};

  const FormFactorCurve k_weak = spectral_curve(c, run_ensemble(c, weak, c.cfg.ensemble), taus, "(50,50,1)");
  const FormFactorCurve k_strong = spectral_curve(c, run_ensemble(c, strong, c.cfg.ensemble), taus, "(50,50,50)");
  const FormFactorCurve e_unglued = expansion_curve(unglued, taus);
  const FormFactorCurve e_equal = expansion_curve(equal, taus);

  c.add_file("spectral_50_50_1.csv", csv_of(k_weak, comments));
  c.add_file("spectral_50_50_50.csv", csv_of(k_strong, comments));
  c.add_file("expansion_unglued.csv", csv_of(e_unglued, comments));
  c.add_file("expansion_equal.csv", csv_of(e_equal, comments));
  std::vector<std::pair<std::string, std::string>> plotted{
      {"spectral_50_50_1.csv", "spectral (50,50,1)"},
      {"spectral_50_50_50.csv", "spectral (50,50,50)"},
      {"expansion_unglued.csv", "expansion nu3=0, nu1=nu2"},
      {"expansion_equal.csv", "expansion nu1=nu2=nu3"}};
  std::vector<std::pair<std::string, FormFactorCurve>> curves{
      {"spectral_50_50_1", k_weak}, {"spectral_50_50_50", k_strong},
      {"expansion_unglued", e_unglued}, {"expansion_equal", e_equal}};

  // Closeness of the two expansions on [0, 0.15], independent of the grid.
  double gap = 0.0;
  for (int i = 0; i <= 150; ++i) gap = std::max(gap, std::abs(unglued(i * 0.001) - equal(i * 0.001)));
  const double noise = std::max(median_stderr(k_weak, 0.15), median_stderr(k_strong, 0.15));
  json report{{"max_expansion_gap_0_0.15", gap},
              {"median_spectral_stderr_0_0.15", noise},
              {"gap_over_stderr", noise > 0 ? gap / noise : 0.0},
              {"max_abs_diff_50_50_1_vs_unglued_0.02_0.15",
               max_abs_diff(k_weak, unglued, 0.02, 0.15)},
              {"max_abs_diff_50_50_50_vs_equal_0.02_0.15",
               max_abs_diff(k_strong, equal, 0.02, 0.15)}};
  const auto near = [](const FormFactorCurve& k, double t) -> std::optional<double> {
    for (const auto& p : k.points)
      if (std::abs(p.tau - t) < 1e-9) return p.k;
    return std::nullopt;
  };
  if (auto a = near(k_weak, 0.1), b = near(k_strong, 0.1); a && b)
    report["strong_above_weak_at_0.1"] = *b > *a;

  if (c.cfg.control) {
    const Shape control{Topology::quasar, {50, 50, 0, c.cfg.seed}};
    std::vector<double> control_taus;
    for (double t : taus)
      if (t >= 0.02 - 1e-12 && t <= 0.15 + 1e-12) control_taus.push_back(t);
    if (control_taus.empty()) throw std::invalid_argument("control run needs tau in [0.02, 0.15]");
    const FormFactorCurve k_control =
        spectral_curve(c, run_ensemble(c, control, c.cfg.ensemble), control_taus, "(50,50,0)");
    const NuParams half = NuParams::make(0.5, 0.5, 0.0);
    report["control_max_abs_diff_vs_unglued"] =
        max_abs_diff(k_control, [&](double t) { return unglued_combination(half, t); }, 0.02, 0.15);
    c.add_file("spectral_50_50_0.csv", csv_of(k_control, comments));
    plotted.emplace_back("spectral_50_50_0.csv", "spectral (50,50,0) control");
    curves.emplace_back("spectral_50_50_0", k_control);
  }
  c.add_file("figure2_comparison.csv", comparison_csv(taus, curves, comments));
  c.add_file("figure2.gp", gnuplot_script(plotted, "Figure 2: quasar form factors"));
  c.add_file("figure2_report.json", report.dump(2) + "\n");
  c.results = {{"report", report},
               {"curves", {{"spectral_50_50_1", curve_points_json(k_weak)},
                           {"spectral_50_50_50", curve_points_json(k_strong)}}}};
}

void cmd_expansion(Context& c) {
  NuParams nu;
  if (c.cfg.nu1 >= 0.0 || c.cfg.nu2 >= 0.0 || c.cfg.nu3 >= 0.0) {
    if (c.cfg.nu1 < 0.0 || c.cfg.nu2 < 0.0 || c.cfg.nu3 < 0.0)
      throw std::invalid_argument("give all of --nu1 --nu2 --nu3");
    nu = NuParams::make(c.cfg.nu1, c.cfg.nu2, c.cfg.nu3);
  } else {
    const Shape s = shape_of(c.cfg);
    nu = s.topology == Topology::star ? NuParams::make(1.0, 0.0, 0.0) : NuParams::from_shape(s.shape);
  }
  const Expansion e{nu};
  const std::vector<double> taus = parse_tau_grid(c.cfg.tau);
  auto comments = c.provenance();
  std::ostringstream nu_line;
  nu_line << std::setprecision(17) << "nu1=" << nu.nu1 << " nu2=" << nu.nu2 << " nu3=" << nu.nu3;
  comments.push_back(nu_line.str());

  const FormFactorCurve poly = expansion_curve(e, taus);
  FormFactorCurve families;
  families.method = CurveMethod::expansion;
  for (double t : taus) families.points.push_back({t, no_scattering_term(nu, t) + two_scattering_term(nu, t), 0.0});

  c.add_file("expansion.csv", csv_of(poly, comments));
  auto fam_comments = comments;
  fam_comments.push_back("curve=no-scattering plus two-scattering families, full exponential forms");
  c.add_file("expansion_families.csv", csv_of(families, fam_comments));
  c.add_file("expansion.gp", gnuplot_script({{"expansion.csv", "tau^3 polynomial"},
                                             {"expansion_families.csv", "orbit families"}},
                                            "expansion"));
  c.results = {{"nu", {nu.nu1, nu.nu2, nu.nu3}},
               {"coefficients", coefficients_json(e.coefficients())},
               {"two_scattering_leading_coefficient", two_scattering_leading_coefficient(nu)},
               {"points", curve_points_json(poly)}};
  if (std::abs(nu.nu1 - nu.nu2) < 1e-15)
    c.results["equal_star_tau2_coefficient"] = 16.0 * (2.0 - 3.0 * nu.nu1) / std::pow(1.0 - nu.nu1, 2);
}

void add_shape(CLI::App* sub, ExperimentConfig& cfg) {
  sub->add_option("--star", cfg.star, "Single star with V edges")->check(CLI::NonNegativeNumber);
  sub->add_option("--v1", cfg.v1, "Edges on star 1")->check(CLI::NonNegativeNumber);
  sub->add_option("--v2", cfg.v2, "Edges on star 2")->check(CLI::NonNegativeNumber);
  sub->add_option("--m", cfg.m, "Glue edges between the centers")->check(CLI::NonNegativeNumber);
  sub->add_option("--seed", cfg.seed, "Length seed (ensemble base seed)");
}

void add_common(CLI::App* sub, ExperimentConfig& cfg) {
  sub->add_option("--out", cfg.out, "Output directory");
}

void add_ensemble(CLI::App* sub, ExperimentConfig& cfg) {
  sub->add_option("--ensemble", cfg.ensemble, "Realizations")->check(CLI::PositiveNumber);
  sub->add_option("--levels", cfg.levels, "Levels per realization")->check(CLI::Range(100L, 100000000L));
  sub->add_option("--skip-levels", cfg.skip_levels, "Levels below the band (-1: 2000 V)")
      ->check(CLI::Range(-1L, 1000000000L));
  sub->add_option("--threads", cfg.threads, "Worker threads (0: all cores)");
  sub->add_option("--tau", cfg.tau, "tau grid from:to:step");
}

// Flat "key = value" files: keys without a section belong to the selected
// subcommand, so a file mirrors that subcommand's flags one to one.
class FlatConfig : public CLI::ConfigTOML {
 public:
  explicit FlatConfig(const CLI::App& app) : app_(app) {}

  std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
    auto items = CLI::ConfigTOML::from_config(input);
    const auto selected = app_.get_subcommands();
    if (selected.empty()) return items;
    for (auto& item : items)
      if (item.parents.empty()) item.parents.push_back(selected.front()->get_name());
    return items;
  }

 private:
  const CLI::App& app_;
};

void write_files(const Context& c) {
  const std::filesystem::path dir(c.cfg.out);
  std::filesystem::create_directories(dir);
  for (const auto& [name, content] : c.files) {
    std::ofstream f(dir / name, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + (dir / name).string());
    f << content;
  }
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Spectral statistics of quantum star and quasar graphs"};
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default();
  // Options of the parent (--config) are accepted after the subcommand name.
  app.fallthrough();
  app.config_formatter(std::make_shared<FlatConfig>(app));
  app.set_config("--config", "", "Flat 'key = value' file mirroring the subcommand flags; flags win");
  Context c;
  ExperimentConfig& cfg = c.cfg;

  auto* gen = app.add_subcommand("generate", "Write a graph as JSON");
  add_common(gen, cfg);
  add_shape(gen, cfg);
  gen->add_option("--output", cfg.output, "File name inside --out (default graph.json)");

  auto* spec = app.add_subcommand("spectrum", "Eigenvalues of one graph");
  add_common(spec, cfg);
  add_shape(spec, cfg);
  spec->add_option("--levels", cfg.levels, "Target level count")->check(CLI::PositiveNumber);
  spec->add_option("--lambda-max", cfg.lambda_max, "Scan ceiling (overrides --levels)");
  spec->add_option("--solver", cfg.solver, "tracking or counting")
      ->check(CLI::IsMember({"tracking", "counting"}));

  auto* ff = app.add_subcommand("form-factor", "Form factor by spectral, orbit or expansion method");
  add_common(ff, cfg);
  add_shape(ff, cfg);
  add_ensemble(ff, cfg);
  ff->add_option("--method", cfg.methods, "spectral, orbit, expansion (repeat or comma-separate)")
      ->delimiter(',')
      ->check(CLI::IsMember({"spectral", "orbit", "expansion"}));
  ff->add_option("--n", cfg.n, "Orbit half-period n (orbit method; overrides the tau grid)");
  ff->add_option("--mode", cfg.mode, "Orbit enumeration: full or mb")->check(CLI::IsMember({"full", "mb"}));

  auto* fig = app.add_subcommand("reproduce-figure2", "Spectral (50,50,1) and (50,50,50) against expansions");
  add_common(fig, cfg);
  add_ensemble(fig, cfg);
  fig->add_option("--seed", cfg.seed, "Ensemble base seed");
  fig->add_flag("--control", cfg.control, "Add the (50,50,0) star-only control run");

  auto* exp = app.add_subcommand("expansion", "Small-tau expansion curves and coefficients");
  add_common(exp, cfg);
  add_shape(exp, cfg);
  exp->add_option("--nu1", cfg.nu1, "Edge fraction of star 1");
  exp->add_option("--nu2", cfg.nu2, "Edge fraction of star 2");
  exp->add_option("--nu3", cfg.nu3, "Glue edge fraction");
  exp->add_option("--tau", cfg.tau, "tau grid from:to:step");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  CLI::App* chosen = app.get_subcommands().front();
  c.command = chosen->get_name();
  {
    // Keep only the chosen subcommand's keys; all subcommands share one config struct.
    std::stringstream all(app.config_to_str(true, false));
    std::string line;
    while (std::getline(all, line))
      if (line.starts_with(c.command + ".")) c.config_text += line.substr(c.command.size() + 1) + "\n";
  }
  try {
    if (chosen == gen) cmd_generate(c);
    else if (chosen == spec) cmd_spectrum(c);
    else if (chosen == ff) cmd_form_factor(c);
    else if (chosen == fig) cmd_reproduce_figure2(c);
    else cmd_expansion(c);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }

  const json summary{{"config", config_json(c)},
                     {"results", c.results},
                     {"warnings", c.warnings},
                     {"versions", versions()}};
  c.add_file(c.command + "_summary.json", summary.dump(2) + "\n");
  try {
    write_files(c);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  out << summary.dump(2) << '\n';
  for (const auto& w : c.warnings) err << "warning: " << w << '\n';
  return c.warnings.empty() ? 0 : 1;
}

}  // namespace qgraph::cli
