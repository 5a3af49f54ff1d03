// pklab: batch front end for the Poincare-Korn toolkit.
//
// Subcommands: moments, cpk, stein, zol2, stability, sweep.
// Exit codes: 0 success, 1 bad spec/config, 2 moment-assumption violation,
// 3 numerical-conditioning failure.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pklab/errors.hpp"
#include "pklab/measure_spec.hpp"
#include "pklab/reports.hpp"

namespace {

using pklab::Json;

void write_output(const std::string& path, const std::string& content) {
  if (path.empty()) {
    std::cout << content;
    if (content.empty() || content.back() != '\n') std::cout << '\n';
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  out << content;
}

void write_json(const std::string& path, const Json& j) { write_output(path, j.dump(2) + "\n"); }

struct ThetaGridSpec {
  int count = 64;
  double lo = 0.25;
  double hi = 8.0;
  std::string text = "64x[0.25,8]";
};

ThetaGridSpec parse_theta_grid(const std::string& text) {
  ThetaGridSpec spec;
  spec.text = text;
  int count = 0;
  double lo = 0.0, hi = 0.0;
  if (std::sscanf(text.c_str(), "%dx[%lf,%lf]", &count, &lo, &hi) != 3 || count < 2 || lo <= 0.0 ||
      hi <= lo)
    throw pklab::parse_error("theta grid spec must look like '64x[0.25,8]': got '" + text + "'");
  spec.count = count;
  spec.lo = lo;
  spec.hi = hi;
  return spec;
}

// Tiny polynomial grammar for --f: terms like "2*x1^3*x2 - 0.5*x2 + 1".
pklab::Polynomial parse_poly_body(const std::string& body, int dim) {
  pklab::Polynomial out(dim);
  std::size_t pos = 0;
  const auto skip_ws = [&] {
    while (pos < body.size() && std::isspace(static_cast<unsigned char>(body[pos]))) ++pos;
  };
  bool first = true;
  while (true) {
    skip_ws();
    if (pos >= body.size()) break;
    double sign = 1.0;
    if (body[pos] == '+' || body[pos] == '-') {
      sign = body[pos] == '-' ? -1.0 : 1.0;
      ++pos;
    } else if (!first) {
      throw pklab::parse_error("poly spec: expected '+' or '-' before next term");
    }
    first = false;

    double coeff = 1.0;
    bool saw_factor = false;
    pklab::MultiIndex expo(static_cast<std::size_t>(dim), 0);
    while (true) {
      skip_ws();
      if (pos < body.size() &&
          (std::isdigit(static_cast<unsigned char>(body[pos])) || body[pos] == '.')) {
        std::size_t used = 0;
        coeff *= std::stod(body.substr(pos), &used);
        pos += used;
        saw_factor = true;
      } else if (pos < body.size() && body[pos] == 'x') {
        ++pos;
        std::size_t used = 0;
        const int axis = std::stoi(body.substr(pos), &used);
        pos += used;
        if (axis < 1 || axis > dim)
          throw pklab::parse_error("poly spec: variable x" + std::to_string(axis) +
                                   " out of range for dim " + std::to_string(dim));
        int power = 1;
        skip_ws();
        if (pos < body.size() && body[pos] == '^') {
          ++pos;
          used = 0;
          power = std::stoi(body.substr(pos), &used);
          pos += used;
        }
        expo[static_cast<std::size_t>(axis - 1)] += power;
        saw_factor = true;
      } else {
        throw pklab::parse_error("poly spec: expected a coefficient or x<k>");
      }
      skip_ws();
      if (pos < body.size() && body[pos] == '*') {
        ++pos;
        continue;
      }
      break;
    }
    if (!saw_factor) throw pklab::parse_error("poly spec: empty term");
    out.add_term(expo, sign * coeff);
  }
  if (out.is_zero() && first) throw pklab::parse_error("poly spec: empty polynomial");
  return out;
}

pklab::ScalarField parse_f_spec(const std::string& text, int dim) {
  if (text.rfind("cos(", 0) == 0 && text.back() == ')') {
    std::vector<double> theta;
    std::stringstream body(text.substr(4, text.size() - 5));
    std::string item;
    while (std::getline(body, item, ',')) theta.push_back(std::stod(item));
    if (static_cast<int>(theta.size()) != dim)
      throw pklab::parse_error("f spec: cos(...) needs exactly dim components");
    return pklab::ScalarField::cosine(std::move(theta));
  }
  if (text.rfind("poly(", 0) == 0 && text.back() == ')') {
    return pklab::ScalarField::from_polynomial(
        parse_poly_body(text.substr(5, text.size() - 6), dim), text);
  }
  throw pklab::parse_error("f spec: expected cos(t1,...,tn) or poly(...): got '" + text + "'");
}

struct CommonArgs {
  std::string measure = "gaussian(dim=2)";
  int degree = 4;
  int m = 0;  // 0: derive from degree
  std::string out;
  std::string theta_grid = "64x[0.25,8]";
  double slack = 1e-9;

  int resolved_m() const { return m > 0 ? m : 2 * degree + 2; }
};

int run_moments(const CommonArgs& args, double tol) {
  const pklab::MeasureSpec spec = pklab::parse_measure_spec(args.measure);
  const pklab::QuadratureMeasure mu = spec.build(args.m > 0 ? args.m : 10);
  const pklab::MomentReport rep = pklab::check_moments(mu, tol);
  write_json(args.out, pklab::measure_dump_json(mu, rep));
  return rep.passes ? 0 : 2;
}

int run_cpk(const CommonArgs& args) {
  const pklab::MeasureSpec spec = pklab::parse_measure_spec(args.measure);
  const pklab::QuadratureMeasure mu = spec.build(args.resolved_m());
  const pklab::MomentReport moments = pklab::check_moments(mu);
  const pklab::CpkEstimate est = pklab::cpk_lower_bound(mu, args.degree);
  const pklab::BasisSet basis = pklab::build_basis(mu.dim(), args.degree, mu);
  const pklab::GramPair gram = pklab::assemble(basis, mu);
  const double witness_quotient = pklab::rayleigh(est.witness, mu);
  write_json(args.out, pklab::cpk_report_json(spec.canonical, est, moments, gram.exact,
                                              witness_quotient));
  return 0;
}

int run_stein(const CommonArgs& args, const std::string& f_spec) {
  const pklab::MeasureSpec spec = pklab::parse_measure_spec(args.measure);
  const pklab::QuadratureMeasure mu = spec.build(args.resolved_m());
  const pklab::MomentReport moments = pklab::check_moments(mu);
  if (!moments.passes)
    throw pklab::hypothesis_error("stein: measure fails the moment assumption");

  const pklab::ScalarField f = parse_f_spec(f_spec, mu.dim());
  const pklab::SteinSolution sol = pklab::solve_stein(f);
  const auto probes = pklab::probe_grid(mu.dim(), 100);
  const double poisson = pklab::verify_poisson(f, sol, probes);
  const pklab::RegularityReport reg = pklab::regularity_check(f, sol, probes);

  auto [g, sol_g] = pklab::recenter_solution(f, sol);
  const pklab::MatrixTestField v = pklab::build_V(sol_g);
  const double residual = pklab::stein_residual(v, mu);
  const std::vector<double> norms = pklab::v_gradient_norms(v, mu);

  write_json(args.out, pklab::stein_report_json(f.spec().empty() ? f_spec : f.spec(), sol, poisson,
                                                reg, norms, residual));
  return 0;
}

int run_zol2(const CommonArgs& args, const std::string& reference) {
  const pklab::MeasureSpec spec = pklab::parse_measure_spec(args.measure);
  const pklab::QuadratureMeasure mu = spec.build(args.resolved_m());
  const pklab::MeasureSpec ref_spec =
      pklab::parse_measure_spec(reference.empty() ? "gaussian(dim=" + std::to_string(mu.dim()) + ")"
                                                  : reference);
  const pklab::QuadratureMeasure nu = ref_spec.build(args.resolved_m());

  const ThetaGridSpec grid_spec = parse_theta_grid(args.theta_grid);
  const auto grid =
      pklab::default_theta_grid(mu.dim(), grid_spec.count, grid_spec.lo, grid_spec.hi);
  const double value = pklab::zol2_lower(mu, nu, grid);

  write_json(args.out, Json{{"measure_spec", spec.canonical},
                            {"reference_spec", ref_spec.canonical},
                            {"theta_grid", Json{{"spec", grid_spec.text}, {"size", grid.size()}}},
                            {"zol2_lower", value}});
  return 0;
}

int run_stability(const CommonArgs& args) {
  const pklab::MeasureSpec spec = pklab::parse_measure_spec(args.measure);
  const pklab::QuadratureMeasure mu = spec.build(args.resolved_m());
  const ThetaGridSpec grid_spec = parse_theta_grid(args.theta_grid);
  const auto grid =
      pklab::default_theta_grid(mu.dim(), grid_spec.count, grid_spec.lo, grid_spec.hi);
  const pklab::StabilityReport rep =
      pklab::stability_report(mu, args.degree, grid, args.slack);
  write_json(args.out, pklab::stability_report_json(spec.canonical, rep, grid_spec.text));
  return 0;
}

int run_sweep(const CommonArgs& args, const std::string& family, const std::string& deltas_text,
              int dim) {
  if (family != "hermite6")
    throw pklab::parse_error("sweep: unknown family '" + family + "' (supported: hermite6)");

  std::vector<double> deltas;
  std::stringstream body(deltas_text);
  std::string item;
  while (std::getline(body, item, ',')) deltas.push_back(std::stod(item));
  if (deltas.empty()) throw pklab::parse_error("sweep: empty delta list");

  const ThetaGridSpec grid_spec = parse_theta_grid(args.theta_grid);
  const auto grid = pklab::default_theta_grid(dim, grid_spec.count, grid_spec.lo, grid_spec.hi);

  std::vector<pklab::SweepRow> rows;
  for (double delta : deltas) {
    const std::vector<pklab::MarginalSpec> marginals(static_cast<std::size_t>(dim),
                                                     pklab::MarginalSpec::hermite6(delta));
    const pklab::QuadratureMeasure mu = pklab::build_product(marginals, args.resolved_m());
    const pklab::StabilityReport rep =
        pklab::stability_report(mu, args.degree, grid, args.slack);
    rows.push_back({delta, rep.cpk_lower, rep.zol2_lower, rep.rhs, rep.consistent});
  }
  write_output(args.out, pklab::sweep_csv(std::move(rows)));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  pklab::apply_thread_cap_from_env();

  CLI::App app{"Poincare-Korn constant estimation and Gaussian stability checks"};
  app.require_subcommand(1);

  CommonArgs args;
  double moments_tol = pklab::kDefaultMomentTol;
  std::string f_spec = "cos(2,0)";
  std::string reference;
  std::string family = "hermite6";
  std::string deltas = "0.002,0.004,0.008";
  int dim = 2;

  const auto add_common = [&](CLI::App* cmd, bool with_degree) {
    cmd->add_option("--measure", args.measure, "measure spec, e.g. gaussian(dim=2)");
    cmd->add_option("--m", args.m, "quadrature nodes per axis (even)");
    cmd->add_option("--out", args.out, "output file (default: stdout)");
    if (with_degree)
      cmd->add_option("--degree", args.degree, "trial-space polynomial degree")->check(CLI::Range(2, 16));
  };

  CLI::App* moments = app.add_subcommand("moments", "verify the moment assumption");
  add_common(moments, false);
  moments->add_option("--tol", moments_tol, "residual tolerance");

  CLI::App* cpk = app.add_subcommand("cpk", "certified lower bound on C_PK");
  add_common(cpk, true);

  CLI::App* stein = app.add_subcommand("stein", "Stein solution, regularity and residual");
  add_common(stein, false);
  stein->add_option("--f", f_spec, "test function: cos(t1,...,tn) or poly(...)");

  CLI::App* zol2 = app.add_subcommand("zol2", "Zolotarev-2 lower bound vs a reference");
  add_common(zol2, false);
  zol2->add_option("--reference", reference, "reference measure spec (default gaussian)");
  zol2->add_option("--theta-grid", args.theta_grid, "grid spec COUNTx[LO,HI]");

  CLI::App* stability = app.add_subcommand("stability", "both sides of the stability bound");
  add_common(stability, true);
  stability->add_option("--theta-grid", args.theta_grid, "grid spec COUNTx[LO,HI]");
  stability->add_option("--slack", args.slack, "consistency slack");

  CLI::App* sweep = app.add_subcommand("sweep", "delta sweep, CSV output");
  sweep->add_option("--family", family, "measure family (hermite6)");
  sweep->add_option("--deltas", deltas, "comma-separated delta values");
  sweep->add_option("--dim", dim, "dimension")->check(CLI::Range(2, 8));
  sweep->add_option("--degree", args.degree, "trial-space polynomial degree")->check(CLI::Range(2, 16));
  sweep->add_option("--m", args.m, "quadrature nodes per axis (even)");
  sweep->add_option("--theta-grid", args.theta_grid, "grid spec COUNTx[LO,HI]");
  sweep->add_option("--slack", args.slack, "consistency slack");
  sweep->add_option("--out", args.out, "output file (default: stdout)");

  try {
    app.parse(argc, argv);
    if (moments->parsed()) return run_moments(args, moments_tol);
    if (cpk->parsed()) return run_cpk(args);
    if (stein->parsed()) return run_stein(args, f_spec);
    if (zol2->parsed()) return run_zol2(args, reference);
    if (stability->parsed()) return run_stability(args);
    if (sweep->parsed()) return run_sweep(args, family, deltas, dim);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? 0 : 1;
  } catch (const pklab::parse_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const pklab::resource_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const pklab::hypothesis_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const pklab::conditioning_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
