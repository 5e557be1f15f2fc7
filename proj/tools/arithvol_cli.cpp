// arithvol command-line front end: one subcommand per analysis, JSON for
// single results, CSV for grids and profiles.  Output is deterministic and
// byte-identical across runs with the same arguments.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "arithvol/arithvol.hpp"
#include "json.hpp"

namespace {

using Json = nlohmann::ordered_json;
using namespace arithvol;

std::vector<Rational> parse_coeff_list(const std::string& text) {
  std::vector<Rational> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ',')) {
    if (item.empty()) throw ParseError("empty coefficient in list");
    out.push_back(parse_rational(item));
  }
  if (out.size() < 2)
    throw ParseError("need at least two coefficients a0,a1,...");
  return out;
}

std::vector<long> parse_level_list(const std::string& text) {
  std::vector<long> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ',')) {
    std::size_t used = 0;
    const long l = std::stol(item, &used);
    if (used != item.size()) throw ParseError("bad level '" + item + "'");
    out.push_back(l);
  }
  if (out.empty()) throw ParseError("empty level list");
  return out;
}

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty() || out_path == "-") {
    std::fwrite(text.data(), 1, text.size(), stdout);
    return;
  }
  std::ofstream f(out_path, std::ios::binary);
  if (!f) throw ParseError("cannot open output file " + out_path);
  f.write(text.data(), static_cast<std::streamsize>(text.size()));
}

Json coeff_doubles(const std::vector<Rational>& a) {
  Json arr = Json::array();
  for (const Rational& r : a) arr.push_back(to_double(r));
  return arr;
}

Json coeff_rationals(const std::vector<Rational>& a) {
  Json arr = Json::array();
  for (const Rational& r : a) arr.push_back(rational_string(r));
  return arr;
}

Json header(const char* command, const std::vector<Rational>& a) {
  Json j;
  j["schema"] = 1;
  j["command"] = command;
  j["a"] = coeff_doubles(a);
  j["a_rational"] = coeff_rationals(a);
  return j;
}

void put_report(Json& j, const GeographyReport& rep) {
  j["ample"] = rep.ample;
  j["nef"] = rep.nef;
  j["big"] = rep.big;
  j["pseudo_effective"] = rep.pseudo_effective;
  j["label"] = rep.label;
  j["witness"] = rep.witness;
}

struct CommonArgs {
  std::string a;
  std::string out;
  std::string format = "json";
};

int run_classify(const CommonArgs& c) {
  const std::vector<Rational> a = parse_coeff_list(c.a);
  Json j = header("classify", a);
  put_report(j, classify(CoeffVector(a)));
  emit(j.dump(2) + "\n", c.out);
  return 0;
}

int run_volume(const CommonArgs& c, double tol, std::uint64_t seed,
               bool degree) {
  const std::vector<Rational> a = parse_coeff_list(c.a);
  const CoeffVector av(a);
  const double value =
      degree ? deg_hat(av, tol, seed) : vol_hat(av, tol, seed);
  Json j = header(degree ? "degree" : "volume", a);
  j["n"] = av.n();
  j["value"] = value;
  j["tol"] = tol;
  j["method"] = av.n() == 1   ? "gauss-kronrod-adaptive"
                : av.n() == 2 ? "triangle-adaptive"
                              : "monte-carlo";
  if (av.n() >= 3) j["seed"] = seed;
  emit(j.dump(2) + "\n", c.out);
  return 0;
}

int run_sections(const CommonArgs& c, long l, const SectionSearchBudget& b) {
  const std::vector<Rational> a = parse_coeff_list(c.a);
  const SmallSectionList list = small_sections(CoeffVector(a), l, b);
  Json j = header("sections", a);
  j["l"] = list.l;
  Json basis = Json::array();
  for (const ExponentVector& e : list.basis) basis.push_back(e.e);
  j["basis"] = basis;
  j["count"] = list.sections.size();
  Json rows = Json::array();
  for (const SmallSection& s : list.sections) {
    Json row;
    row["coeff"] = s.coeff;
    row["sup_sq"] = s.sup_sq;
    row["boundary"] = s.boundary;
    rows.push_back(std::move(row));
  }
  j["sections"] = rows;
  emit(j.dump(2) + "\n", c.out);
  return 0;
}

int run_count(const CommonArgs& c, const std::vector<long>& levels,
              const std::string& mode_name) {
  const std::vector<Rational> a = parse_coeff_list(c.a);
  const CoeffVector av(a);
  CountMode mode;
  if (mode_name == "exact")
    mode = CountMode::Exact;
  else if (mode_name == "bracket")
    mode = CountMode::Bracket;
  else
    throw ParseError("mode must be exact or bracket");
  const double fact = to_double(Rational(factorial(av.n() + 1)));
  Json j = header("count", a);
  j["mode"] = mode_name;
  Json records = Json::array();
  for (long l : levels) {
    const GramMatrix G(av, l, GramDomain::Theta);
    const EllipsoidCount ec = count_ellipsoid_lattice(G, mode);
    const double scale =
        fact /
        std::pow(static_cast<double>(l), static_cast<double>(av.n()) + 1);
    Json row;
    row["l"] = ec.l;
    row["m"] = ec.m;
    row["mode"] = mode_name;
    row["lower_log"] = ec.lower_log;
    row["upper_log"] = ec.upper_log;
    row["normalized_low"] = scale * ec.lower_log;
    row["normalized_high"] = scale * ec.upper_log;
    if (mode == CountMode::Exact) row["count"] = ec.count.str();
    records.push_back(std::move(row));
  }
  j["records"] = records;
  emit(j.dump(2) + "\n", c.out);
  return 0;
}

int run_chi(const CommonArgs& c, const std::vector<long>& levels) {
  const std::vector<Rational> a = parse_coeff_list(c.a);
  const CoeffVector av(a);
  Json j = header("chi", a);
  Json records = Json::array();
  for (long l : levels) {
    const double chi = chi_hat(av, l);
    Json row;
    row["l"] = l;
    row["m"] = binomial(l + av.n(), av.n()).str();
    row["chi_hat"] = chi;
    row["normalized"] =
        2 * chi / (static_cast<double>(l) * static_cast<double>(l));
    records.push_back(std::move(row));
  }
  j["records"] = records;
  emit(j.dump(2) + "\n", c.out);
  return 0;
}

int run_zariski(const CommonArgs& c, const std::string& profile_path,
                double r_min, double r_max, long points) {
  const std::vector<Rational> a = parse_coeff_list(c.a);
  const CoeffVector av(a);
  const ZariskiData z = decompose(av);
  const auto [mu0, mu1] = mu_multiplicities(av);
  Json j = header("zariski", a);
  j["vartheta"] = z.vartheta;
  j["theta"] = z.theta;
  j["r_low"] = z.r_low;
  if (std::isfinite(z.r_high))
    j["r_high"] = z.r_high;
  else
    j["r_high"] = nullptr;
  j["coeff_H0"] = z.coeff_H0;
  j["coeff_H1"] = z.coeff_H1;
  j["mu"] = Json::array({mu0, mu1});
  emit(j.dump(2) + "\n", c.out);
  if (!profile_path.empty()) {
    if (points < 2) throw ParseError("profile needs at least 2 points");
    if (!(r_min > 0) || !(r_max > r_min))
      throw ParseError("need 0 < r-min < r-max");
    std::string csv = "r,g_a,p_a,n_a\n";
    const double lo = std::log(r_min), hi = std::log(r_max);
    for (long k = 0; k < points; ++k) {
      const double r =
          std::exp(lo + (hi - lo) * static_cast<double>(k) /
                            static_cast<double>(points - 1));
      const double g = green_ga(z, r);
      const double p = green_positive(z, r);
      csv += fmt_double(r) + "," + fmt_double(g) + "," + fmt_double(p) +
             "," + fmt_double(g - p) + "\n";
    }
    emit(csv, profile_path);
  }
  return 0;
}

int run_fujita(const CommonArgs& c, double epsilon) {
  const std::vector<Rational> a = parse_coeff_list(c.a);
  const CoeffVector av(a);
  const EnvelopeCert cert = approximate(av, epsilon);
  const double delta = select_delta(av, cert.points, epsilon);
  Json j = header("fujita", a);
  j["epsilon"] = cert.epsilon;
  j["q"] = cert.q;
  Json pts = Json::array();
  for (const SimplexPoint& p : cert.points) {
    if (av.n() == 1) {
      pts.push_back(rational_string(p.xq(0)));
    } else {
      Json tuple = Json::array();
      for (int i = 0; i < av.n(); ++i)
        tuple.push_back(rational_string(p.xq(i)));
      pts.push_back(std::move(tuple));
    }
  }
  j["points"] = pts;
  j["values"] = cert.values;
  j["facets"] = cert.facets;
  j["integral"] = cert.integral;
  j["vol_hat"] = cert.vol;
  j["gap"] = cert.gap;
  j["delta"] = delta;
  Json trace = Json::array();
  for (const auto& [q, integral] : cert.trace) {
    Json row;
    row["q"] = q;
    row["integral"] = integral;
    trace.push_back(std::move(row));
  }
  j["trace"] = trace;
  emit(j.dump(2) + "\n", c.out);
  return 0;
}

int run_geography(const CommonArgs& c, long resolution) {
  const GeographyGrid grid = geography_grid(resolution);
  if (c.format == "csv") {
    std::string csv = "a0,a1,ample,nef,big,pseudo_effective,label\n";
    for (const GeographyCell& cell : grid.cells) {
      const GeographyReport& r = cell.report;
      csv += fmt_double(to_double(cell.a0)) + "," +
             fmt_double(to_double(cell.a1)) + "," +
             (r.ample ? "1" : "0") + "," + (r.nef ? "1" : "0") + "," +
             (r.big ? "1" : "0") + "," + (r.pseudo_effective ? "1" : "0") +
             "," + r.label + "\n";
    }
    emit(csv, c.out);
    return 0;
  }
  if (c.format != "json") throw ParseError("format must be json or csv");
  Json j;
  j["schema"] = 1;
  j["command"] = "geography";
  j["resolution"] = grid.resolution;
  Json cells = Json::array();
  for (const GeographyCell& cell : grid.cells) {
    Json row;
    row["a0"] = to_double(cell.a0);
    row["a0_rational"] = rational_string(cell.a0);
    row["a1"] = to_double(cell.a1);
    row["a1_rational"] = rational_string(cell.a1);
    put_report(row, cell.report);
    cells.push_back(std::move(row));
  }
  j["cells"] = cells;
  emit(j.dump(2) + "\n", c.out);
  return 0;
}

int run_theta(const CommonArgs& c, long samples) {
  const std::vector<Rational> a = parse_coeff_list(c.a);
  const CoeffVector av(a);
  if (samples < 2) throw ParseError("need at least 2 samples");
  if (av.n() == 1) {
    std::string csv = "x,phi_tilde\n";
    for (long k = 0; k < samples; ++k) {
      const double x =
          static_cast<double>(k) / static_cast<double>(samples - 1);
      const double v = phi_tilde(av, SimplexPoint({x}));
      csv += fmt_double(x) + "," + fmt_double(v) + "\n";
    }
    emit(csv, c.out);
    return 0;
  }
  if (av.n() == 2) {
    const auto poly =
        boundary_polyline(ThetaRegion(av), static_cast<int>(samples));
    std::string csv = "x1,x2\n";
    for (const auto& [x, y] : poly)
      csv += fmt_double(x) + "," + fmt_double(y) + "\n";
    emit(csv, c.out);
    return 0;
  }
  throw WrongDimension("theta outline supports n = 1 and n = 2");
}

int run_gram(const CommonArgs& c, long l, const std::string& domain_name) {
  const std::vector<Rational> a = parse_coeff_list(c.a);
  const CoeffVector av(a);
  GramDomain domain;
  if (domain_name == "theta")
    domain = GramDomain::Theta;
  else if (domain_name == "full")
    domain = GramDomain::Full;
  else
    throw ParseError("domain must be theta or full");
  const GramMatrix G(av, l, domain);
  Json j = header("gram", a);
  j["l"] = G.l();
  j["domain"] = domain_name;
  j["m"] = G.m();
  Json entries = Json::array();
  for (std::size_t i = 0; i < G.m(); ++i) {
    Json row;
    row["index"] = G.basis()[i].e;
    row["value"] = rational_string(G.diag(i));
    row["log_value"] = G.log_diag(i);
    entries.push_back(std::move(row));
  }
  j["entries"] = entries;
  emit(j.dump(2) + "\n", c.out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "arithvol: arithmetic volumes, section counts, Zariski decompositions "
      "and envelope certificates for the divisors D_a on projective space"};
  app.require_subcommand(1);

  CommonArgs common;
  const auto add_common = [&](CLI::App* sub, bool with_a = true) {
    if (with_a)
      sub->add_option("--a", common.a,
                      "coefficients a0,a1,... as exact rationals "
                      "(\"p/q\" or decimal)")
          ->required();
    sub->add_option("--out", common.out, "output path (default stdout)");
    return sub;
  };

  auto* classify_cmd =
      add_common(app.add_subcommand("classify", "positivity classification"));

  double tol = 1e-8;
  std::uint64_t seed = 20260825;
  auto* volume_cmd = add_common(app.add_subcommand(
      "volume", "arithmetic volume (concave-body integral)"));
  volume_cmd->add_option("--tol", tol, "absolute tolerance");
  volume_cmd->add_option("--seed", seed, "Monte Carlo seed (n >= 3)");
  auto* degree_cmd = add_common(
      app.add_subcommand("degree", "arithmetic degree (simplex integral)"));
  degree_cmd->add_option("--tol", tol, "absolute tolerance");
  degree_cmd->add_option("--seed", seed, "Monte Carlo seed (n >= 3)");

  long level = 1;
  SectionSearchBudget budget;
  auto* sections_cmd = add_common(app.add_subcommand(
      "sections", "all sections of sup norm <= 1 at level l (n = 1)"));
  sections_cmd->add_option("--l", level, "level")->required();
  sections_cmd->add_option("--max-nodes", budget.max_nodes,
                           "search node budget");
  sections_cmd->add_option("--max-scans", budget.max_scans,
                           "dense sup scan budget");

  std::string levels_text;
  std::string mode_name = "bracket";
  auto* count_cmd = add_common(app.add_subcommand(
      "count", "lattice point counts of the norm ellipsoid"));
  auto* count_l = count_cmd->add_option("--l", level, "single level");
  count_cmd->add_option("--levels", levels_text, "levels l1,l2,...")
      ->excludes(count_l);
  count_cmd->add_option("--mode", mode_name, "exact | bracket");

  auto* chi_cmd = add_common(app.add_subcommand(
      "chi", "lattice chi of the section sphere packing"));
  auto* chi_l = chi_cmd->add_option("--l", level, "single level");
  chi_cmd->add_option("--levels", levels_text, "levels l1,l2,...")
      ->excludes(chi_l);

  std::string profile_path;
  double r_min = 1e-3, r_max = 1e3;
  long profile_points = 201;
  auto* zariski_cmd = app.add_subcommand(
      "zariski", "Zariski decomposition on the projective line");
  std::string za0, za1;
  zariski_cmd->add_option("--a", common.a,
                          "coefficients a0,a1 as exact rationals");
  zariski_cmd->add_option("--a0", za0, "first coefficient (alternative)");
  zariski_cmd->add_option("--a1", za1, "second coefficient (alternative)");
  zariski_cmd->add_option("--out", common.out, "output path");
  zariski_cmd->add_option("--profile", profile_path,
                          "also write a CSV profile: r,g_a,p_a,n_a");
  zariski_cmd->add_option("--r-min", r_min, "profile radius lower end");
  zariski_cmd->add_option("--r-max", r_max, "profile radius upper end");
  zariski_cmd->add_option("--points", profile_points, "profile sample count");

  double epsilon = 0.05;
  auto* fujita_cmd = add_common(app.add_subcommand(
      "fujita", "concave-envelope approximation certificate"));
  fujita_cmd->add_option("--epsilon", epsilon, "target volume gap")
      ->required();

  long resolution = 64;
  auto* geography_cmd = app.add_subcommand(
      "geography", "positivity classes over the (a0,a1) square (0,2]^2; "
                   "CSV columns: a0,a1,ample,nef,big,pseudo_effective,label");
  geography_cmd->add_option("--resolution", resolution, "cells per axis");
  geography_cmd->add_option("--out", common.out, "output path");
  geography_cmd->add_option("--format", common.format, "csv | json")
      ->default_val("csv");

  long samples = 257;
  auto* theta_cmd = add_common(app.add_subcommand(
      "theta", "region outline; CSV columns: x,phi_tilde (n = 1) "
               "or x1,x2 boundary polyline (n = 2)"));
  theta_cmd->add_option("--samples", samples, "sample count");

  std::string domain_name = "theta";
  auto* gram_cmd = add_common(app.add_subcommand(
      "gram", "diagonal Gram matrix of the monomial basis"));
  gram_cmd->add_option("--l", level, "level")->required();
  gram_cmd->add_option("--domain", domain_name, "theta | full");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (app.got_subcommand(classify_cmd)) return run_classify(common);
    if (app.got_subcommand(volume_cmd))
      return run_volume(common, tol, seed, false);
    if (app.got_subcommand(degree_cmd))
      return run_volume(common, tol, seed, true);
    if (app.got_subcommand(sections_cmd))
      return run_sections(common, level, budget);
    if (app.got_subcommand(count_cmd) || app.got_subcommand(chi_cmd)) {
      std::vector<long> levels;
      if (!levels_text.empty())
        levels = parse_level_list(levels_text);
      else
        levels = {level};
      return app.got_subcommand(count_cmd)
                 ? run_count(common, levels, mode_name)
                 : run_chi(common, levels);
    }
    if (app.got_subcommand(zariski_cmd)) {
      if (common.a.empty()) {
        if (za0.empty() || za1.empty())
          throw ParseError("zariski needs --a or both --a0 and --a1");
        common.a = za0 + "," + za1;
      }
      return run_zariski(common, profile_path, r_min, r_max, profile_points);
    }
    if (app.got_subcommand(fujita_cmd)) return run_fujita(common, epsilon);
    if (app.got_subcommand(geography_cmd))
      return run_geography(common, resolution);
    if (app.got_subcommand(theta_cmd)) return run_theta(common, samples);
    if (app.got_subcommand(gram_cmd)) return run_gram(common, level, domain_name);
    throw ParseError("unknown subcommand");
  } catch (const ParseError& e) {
    std::cerr << "arithvol: " << e.what() << "\n";
    return 1;
  } catch (const BudgetError& e) {
    std::cerr << "arithvol: " << e.what() << "\n";
    return 3;
  } catch (const DomainError& e) {
    std::cerr << "arithvol: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
