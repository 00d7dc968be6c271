// Command-line front end: moment tables, hypergeometric evaluations and
// the identity-verification suites, with machine-readable output.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "dsm/errors.hpp"
#include "dsm/hypergeo.hpp"
#include "dsm/moments.hpp"
#include "dsm/simplex_core.hpp"
#include "dsm/verify.hpp"

namespace {

using json = nlohmann::ordered_json;

std::vector<double> parse_reals(const std::string& csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    std::size_t used = 0;
    const double v = std::stod(tok, &used);
    while (used < tok.size() && std::isspace(static_cast<unsigned char>(tok[used])))
      ++used;
    if (used != tok.size())
      throw std::invalid_argument("not a number: '" + tok + "'");
    if (!std::isfinite(v)) throw std::invalid_argument("numeric inputs must be finite");
    out.push_back(v);
  }
  if (out.empty()) throw std::invalid_argument("empty number list");
  return out;
}

Eigen::VectorXd to_vector(const std::vector<double>& v) {
  Eigen::VectorXd x(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) x[static_cast<Eigen::Index>(i)] = v[i];
  return x;
}

dsm::MultiIndex to_index(const std::vector<double>& v) {
  dsm::MultiIndex m(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double r = std::round(v[i]);
    if (std::abs(v[i] - r) > 1e-9 || r < 0)
      throw std::invalid_argument("multi-index entries must be nonnegative integers");
    m[static_cast<Eigen::Index>(i)] = static_cast<int>(r);
  }
  return m;
}

// one knot point per row, s columns, optional header
dsm::KnotSet load_knots(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open knot file: " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty() || line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      rows.push_back(parse_reals(line));
    } catch (const std::invalid_argument&) {
      if (first) {
        first = false;
        continue;  // header
      }
      throw;
    }
    first = false;
  }
  if (rows.empty()) throw std::invalid_argument("knot file has no data rows: " + path);
  const std::size_t s = rows.front().size();
  for (const auto& r : rows)
    if (r.size() != s)
      throw std::invalid_argument("inconsistent column count in " + path);
  Eigen::MatrixXd m(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(rows.size()));
  for (std::size_t j = 0; j < rows.size(); ++j)
    for (std::size_t i = 0; i < s; ++i)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[j][i];
  return dsm::KnotSet(std::move(m));
}

struct OutputOptions {
  std::string format = "json";
};

void emit(const json& doc, const OutputOptions& out) {
  if (out.format == "json") {
    std::cout << doc.dump(2) << "\n";
    return;
  }
  if (out.format == "csv") {
    for (const auto& [key, value] : doc.items()) {
      if (value.is_array()) continue;
      std::cout << key << ",";
      if (value.is_number_float())
        std::printf("%.17g\n", value.get<double>());
      else
        std::cout << value.dump() << "\n";
    }
    return;
  }
  for (const auto& [key, value] : doc.items()) {
    if (value.is_array()) continue;
    std::cout << key << " = ";
    if (value.is_number_float())
      std::printf("%.17g\n", value.get<double>());
    else
      std::cout << value.dump() << "\n";
  }
}

dsm::SeriesControl series_from(int max_order, double abs_tol, double rel_tol) {
  dsm::SeriesControl ctrl;
  if (max_order > 0) ctrl.max_order = max_order;
  if (abs_tol > 0) ctrl.abs_tol = abs_tol;
  if (rel_tol > 0) ctrl.rel_tol = rel_tol;
  return ctrl;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"moments of simplex and Dirichlet splines, and the hypergeometric "
               "functions built from them"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand

  OutputOptions out;
  app.add_option("--format", out.format, "output format")
      ->check(CLI::IsMember({"json", "csv", "plain"}))
      ->capture_default_str();

  int max_order = 0;
  double abs_tol = 0, rel_tol = 0;
  app.add_option("--max-order", max_order, "series truncation cap");
  app.add_option("--abs-tol", abs_tol, "absolute tolerance override");
  app.add_option("--rel-tol", rel_tol, "relative tolerance override");

  // ---- moment ----
  auto* cmd_moment = app.add_subcommand("moment", "moment of a simplex or Dirichlet spline");
  std::string knots_file, params_arg = "ones", beta_arg, neg_arg;
  std::string strategy = "auto", method = "quadrature";
  bool check = false;
  std::uint64_t seed = 0x5eed0123456789abULL;
  cmd_moment->add_option("--knots", knots_file, "CSV file, one knot point per row")
      ->required();
  cmd_moment->add_option("--params", params_arg,
                         "'ones' or comma-separated Dirichlet parameters");
  cmd_moment->add_option("--beta", beta_arg, "moment multi-index, comma-separated");
  cmd_moment->add_option("--neg-order", neg_arg,
                         "negative moment order vector, comma-separated");
  cmd_moment->add_option("--strategy", strategy, "beta-moment strategy")
      ->check(CLI::IsMember({"auto", "expansion", "coalescent", "recurrence", "simplex"}));
  cmd_moment->add_option("--method", method, "negative-moment method")
      ->check(CLI::IsMember({"quadrature", "monte-carlo"}));
  cmd_moment->add_flag("--check", check, "cross-check against the expansion oracle");
  cmd_moment->add_option("--seed", seed, "Monte-Carlo seed");

  // ---- lauricella ----
  auto* cmd_lau = app.add_subcommand("lauricella", "Lauricella polynomial L_j(x)");
  std::string lau_j, lau_beta, lau_x, lau_method = "series";
  double lau_gamma = 0;
  cmd_lau->add_option("--j", lau_j, "polynomial multi-index")->required();
  cmd_lau->add_option("--beta", lau_beta, "beta parameters")->required();
  cmd_lau->add_option("--gamma", lau_gamma, "gamma parameter")->required();
  cmd_lau->add_option("--x", lau_x, "argument vector, x_i < 1")->required();
  cmd_lau->add_option("--method", lau_method, "evaluation route")
      ->check(CLI::IsMember({"series", "moments", "recurrence"}));

  // ---- r-hyper ----
  auto* cmd_r = app.add_subcommand("r-hyper", "Carlson R function R_{-a}(b; Z)");
  double r_a = 0;
  std::string r_b, r_z, r_method = "quadrature";
  cmd_r->add_option("--a", r_a, "order parameter")->required();
  cmd_r->add_option("--b", r_b, "Dirichlet parameters")->required();
  cmd_r->add_option("--z", r_z, "knots Z")->required();
  cmd_r->add_option("--method", r_method, "evaluation route")
      ->check(CLI::IsMember({"quadrature", "series"}));

  // ---- s-hyper ----
  auto* cmd_s = app.add_subcommand("s-hyper", "confluent S function S(b; Z)");
  std::string s_b, s_z, s_method = "series";
  cmd_s->add_option("--b", s_b, "Dirichlet parameters")->required();
  cmd_s->add_option("--z", s_z, "knots Z")->required();
  cmd_s->add_option("--method", s_method, "evaluation route")
      ->check(CLI::IsMember({"series", "divided-difference"}));

  // ---- f4 ----
  auto* cmd_f4 = app.add_subcommand("f4", "Appell F4");
  double f4_alpha = 0, f4_beta = 0, f4_gamma = 0, f4_delta = 0, f4_x1 = 0, f4_x2 = 0;
  std::string f4_method = "series", f4_route = "auto";
  cmd_f4->add_option("--alpha", f4_alpha)->required();
  cmd_f4->add_option("--beta", f4_beta)->required();
  cmd_f4->add_option("--gamma", f4_gamma)->required();
  cmd_f4->add_option("--delta", f4_delta)->required();
  cmd_f4->add_option("--x1", f4_x1, "series: first argument; moments: Lambda coordinate")
      ->required();
  cmd_f4->add_option("--x2", f4_x2, "series: second argument; moments: Lambda coordinate")
      ->required();
  cmd_f4->add_option("--method", f4_method,
                     "series sums the double series at (x1, x2); moments evaluates "
                     "F4 at (x1(1-x2), x2(1-x1)) through the spline")
      ->check(CLI::IsMember({"series", "moments"}));
  cmd_f4->add_option("--route", f4_route, "moments route")
      ->check(CLI::IsMember({"auto", "negative-moment", "integral"}));

  // ---- fb ----
  auto* cmd_fb = app.add_subcommand("fb", "Lauricella F_B series");
  std::string fb_alpha, fb_j, fb_beta, fb_x;
  double fb_gamma = 0;
  cmd_fb->add_option("--alpha", fb_alpha, "alpha parameters (series case)");
  cmd_fb->add_option("--j", fb_j, "terminating multi-index (alpha = -j)");
  cmd_fb->add_option("--beta", fb_beta)->required();
  cmd_fb->add_option("--gamma", fb_gamma)->required();
  cmd_fb->add_option("--x", fb_x)->required();

  // ---- verify ----
  auto* cmd_verify = app.add_subcommand("verify", "run identity-verification sweeps");
  std::string suite = "all";
  std::uint64_t verify_seed = 1;
  int verify_cases = 0;
  {
    std::string suites = "all";
    for (const auto& name : dsm::verify::suite_names()) suites += "|" + name;
    cmd_verify->add_option("--suite", suite, "suite to run (" + suites + ")");
  }
  cmd_verify->add_option("--seed", verify_seed, "sweep seed");
  cmd_verify->add_option("--cases", verify_cases, "override per-suite case count");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  const dsm::SeriesControl ctrl = series_from(max_order, abs_tol, rel_tol);

  try {
    if (*cmd_moment) {
      const dsm::KnotSet knots = load_knots(knots_file);
      const dsm::DirichletParams params =
          params_arg == "ones" ? dsm::DirichletParams::ones(knots.count())
                               : dsm::DirichletParams(to_vector(parse_reals(params_arg)));
      if (beta_arg.empty() == neg_arg.empty())
        throw std::invalid_argument("moment: give exactly one of --beta and --neg-order");

      json doc;
      doc["command"] = "moment";
      if (!beta_arg.empty()) {
        const dsm::MultiIndex beta = to_index(parse_reals(beta_arg));
        std::string used = strategy;
        if (strategy == "auto")
          used = params.all_integer() && params.c() <= 24.5 ? "coalescent"
                                                            : "expansion";
        double value = 0;
        std::size_t table_size = 0;
        if (used == "simplex") {
          if ((params.b().array() != 1.0).any())
            throw dsm::strategy_error(
                "simplex strategy requires unit parameters (use --params ones)");
          dsm::MomentTable table;
          value = dsm::simplex_moment(knots, beta, table);
          table_size = table.size();
        } else if (used == "expansion") {
          value = dsm::dirichlet_moment(params, knots, beta,
                                        dsm::MomentStrategy::Expansion, &table_size);
        } else if (used == "coalescent") {
          value = dsm::dirichlet_moment(params, knots, beta,
                                        dsm::MomentStrategy::CoalescentKnots,
                                        &table_size);
        } else {
          value = dsm::dirichlet_moment(params, knots, beta,
                                        dsm::MomentStrategy::ParameterRecurrence,
                                        &table_size);
        }
        doc["value"] = value;
        doc["strategy"] = used;
        doc["table_size"] = table_size;
        if (check && used != "expansion") {
          const double ref = dsm::dirichlet_moment(params, knots, beta,
                                                   dsm::MomentStrategy::Expansion);
          doc["check_value"] = ref;
          doc["check_rel_diff"] =
              std::abs(value - ref) / std::max({std::abs(value), std::abs(ref), 1e-300});
        }
      } else {
        const Eigen::VectorXd a = to_vector(parse_reals(neg_arg));
        dsm::AccuracyTarget target;
        if (abs_tol > 0) target.abs_tol = abs_tol;
        if (rel_tol > 0) target.rel_tol = rel_tol;
        target.seed = seed;
        const auto method_id = method == "quadrature"
                                   ? dsm::NegativeMomentMethod::Quadrature
                                   : dsm::NegativeMomentMethod::MonteCarlo;
        const auto r = dsm::negative_moment(params, knots, a, method_id, target);
        doc["value"] = r.value;
        doc["method"] = method;
        doc["error_estimate"] = r.error_estimate;
        doc["work"] = r.work;
        if (method == "monte-carlo") doc["seed"] = seed;
      }
      emit(doc, out);
      return 0;
    }

    if (*cmd_lau) {
      const auto spec = dsm::LauricellaSpec::polynomial(
          to_index(parse_reals(lau_j)), to_vector(parse_reals(lau_beta)), lau_gamma,
          to_vector(parse_reals(lau_x)));
      const dsm::LMethod m = lau_method == "series"    ? dsm::LMethod::Series
                             : lau_method == "moments" ? dsm::LMethod::Moments
                                                       : dsm::LMethod::Recurrence;
      json doc;
      doc["command"] = "lauricella";
      doc["value"] = dsm::lauricella_poly(spec, m, ctrl);
      doc["method"] = lau_method;
      emit(doc, out);
      return 0;
    }

    if (*cmd_r) {
      dsm::SeriesStats stats;
      const double value = dsm::r_function(
          r_a, dsm::DirichletParams(to_vector(parse_reals(r_b))),
          to_vector(parse_reals(r_z)),
          r_method == "series" ? dsm::RMethod::Series : dsm::RMethod::Quadrature, ctrl,
          &stats);
      json doc;
      doc["command"] = "r-hyper";
      doc["value"] = value;
      doc["method"] = r_method;
      if (r_method == "series") doc["truncation_order"] = stats.order_used;
      emit(doc, out);
      return 0;
    }

    if (*cmd_s) {
      dsm::SeriesStats stats;
      const double value = dsm::s_function(
          dsm::DirichletParams(to_vector(parse_reals(s_b))),
          to_vector(parse_reals(s_z)),
          s_method == "series" ? dsm::SMethod::Series : dsm::SMethod::DividedDifference,
          ctrl, &stats);
      json doc;
      doc["command"] = "s-hyper";
      doc["value"] = value;
      doc["method"] = s_method;
      if (s_method == "series") doc["truncation_order"] = stats.order_used;
      emit(doc, out);
      return 0;
    }

    if (*cmd_f4) {
      json doc;
      doc["command"] = "f4";
      if (f4_method == "series") {
        dsm::SeriesStats stats;
        doc["value"] =
            dsm::appell_f4(f4_alpha, f4_beta, f4_gamma, f4_delta, f4_x1, f4_x2, ctrl,
                           &stats);
        doc["method"] = "series";
        doc["truncation_order"] = stats.order_used;
      } else {
        const dsm::F4Route route = f4_route == "negative-moment"
                                       ? dsm::F4Route::NegativeMoment
                                   : f4_route == "integral" ? dsm::F4Route::IntegralR
                                                            : dsm::F4Route::Auto;
        doc["value"] = dsm::f4_via_moments(f4_alpha, f4_beta, f4_gamma, f4_delta,
                                           f4_x1, f4_x2, route);
        doc["method"] = "moments";
        doc["argument_1"] = f4_x1 * (1 - f4_x2);
        doc["argument_2"] = f4_x2 * (1 - f4_x1);
      }
      emit(doc, out);
      return 0;
    }

    if (*cmd_fb) {
      if (fb_alpha.empty() == fb_j.empty())
        throw std::invalid_argument("fb: give exactly one of --alpha and --j");
      dsm::LauricellaSpec spec =
          fb_j.empty()
              ? dsm::LauricellaSpec::series(to_vector(parse_reals(fb_alpha)),
                                            to_vector(parse_reals(fb_beta)), fb_gamma,
                                            to_vector(parse_reals(fb_x)))
              : dsm::LauricellaSpec::polynomial(to_index(parse_reals(fb_j)),
                                                to_vector(parse_reals(fb_beta)), fb_gamma,
                                                to_vector(parse_reals(fb_x)));
      dsm::SeriesStats stats;
      json doc;
      doc["command"] = "fb";
      doc["value"] = dsm::lauricella_fb(spec, ctrl, &stats);
      doc["truncation_order"] = stats.order_used;
      emit(doc, out);
      return 0;
    }

    if (*cmd_verify) {
      dsm::verify::SweepOptions opts;
      opts.seed = verify_seed;
      opts.cases = verify_cases;
      std::vector<dsm::verify::SuiteReport> reports;
      if (suite == "all") {
        reports = dsm::verify::run_all(opts);
      } else {
        reports.push_back(dsm::verify::run_suite(suite, opts));
      }
      bool all_pass = true;
      for (const auto& r : reports) all_pass = all_pass && r.passed;

      if (out.format == "json") {
        json doc;
        doc["command"] = "verify";
        doc["seed"] = verify_seed;
        json arr = json::array();
        for (const auto& r : reports) {
          json item;
          item["suite"] = r.suite;
          item["cases"] = r.cases;
          item["max_residual"] = r.max_residual;
          item["tolerance"] = r.tolerance;
          item["status"] = r.passed ? "pass" : "FAIL";
          if (!r.note.empty()) item["note"] = r.note;
          arr.push_back(item);
        }
        doc["suites"] = arr;
        doc["status"] = all_pass ? "pass" : "FAIL";
        std::cout << doc.dump(2) << "\n";
      } else if (out.format == "csv") {
        std::printf("suite,cases,max_residual,tolerance,status\n");
        for (const auto& r : reports)
          std::printf("%s,%d,%.17g,%.17g,%s\n", r.suite.c_str(), r.cases,
                      r.max_residual, r.tolerance, r.passed ? "pass" : "FAIL");
      } else {
        for (const auto& r : reports)
          std::printf("%-22s cases=%-4d max_residual=%.3e tolerance=%.1e %s%s%s\n",
                      r.suite.c_str(), r.cases, r.max_residual, r.tolerance,
                      r.passed ? "pass" : "FAIL", r.note.empty() ? "" : "  # ",
                      r.note.c_str());
      }
      return all_pass ? 0 : 1;
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
