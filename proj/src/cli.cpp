#include "hwgrowth/cli.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>

#include <CLI11.hpp>

#include "hwgrowth/bounds.hpp"
#include "hwgrowth/canonical.hpp"
#include "hwgrowth/errors.hpp"
#include "hwgrowth/io.hpp"
#include "hwgrowth/kernel.hpp"

namespace hwgrowth::cli {

namespace {

class UsageError : public Error {
 public:
  using Error::Error;
};

using io::format_number;

}  // namespace

std::vector<double> GridSpec::radii() const {
  if (count < 1) throw UsageError("grid: --count must be at least 1");
  if (!(r_max >= r_min)) throw UsageError("grid: need --r-max >= --r-min");
  if (log_spacing && !(r_min > 0.0)) throw UsageError("grid: log spacing needs --r-min > 0");
  if (!log_spacing && !(r_min >= 0.0)) throw UsageError("grid: need --r-min >= 0");
  std::vector<double> out(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    const double f = count == 1 ? 0.0 : static_cast<double>(i) / (count - 1);
    out[i] = log_spacing ? r_min * std::pow(r_max / r_min, f) : r_min + (r_max - r_min) * f;
  }
  if (count > 1) out.back() = r_max;
  return out;
}

QuadratureSettings quadrature_from_environment() {
  QuadratureSettings s;
  auto read = [](const char* name, auto& target) {
    if (const char* v = std::getenv(name)) {
      std::istringstream in(v);
      std::decay_t<decltype(target)> value{};
      if (!(in >> value)) throw UsageError(std::string("invalid value in ") + name);
      target = value;
    }
  };
  read("HWGROWTH_ABS_TOL", s.abs_tol);
  read("HWGROWTH_REL_TOL", s.rel_tol);
  read("HWGROWTH_MAX_SUBDIVISIONS", s.max_subdivisions);
  return s;
}

DiscreteMeasure random_measure(std::mt19937_64& rng, int max_atoms) {
  std::uniform_int_distribution<int> count(1, max_atoms);
  std::uniform_real_distribution<double> radius(0.5, 50.0);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  std::uniform_real_distribution<double> mass(0.5, 2.0);
  std::vector<Atom> atoms(static_cast<std::size_t>(count(rng)));
  for (Atom& a : atoms) {
    const double r = radius(rng);
    a.point = std::polar(r, angle(rng));
    a.mass = mass(rng);
  }
  return DiscreteMeasure(std::move(atoms));
}

namespace {

int genus_from(const RunConfig& c, const char* command) {
  if (c.q) {
    if (*c.q < 0) throw UsageError("--q must be nonnegative");
    return *c.q;
  }
  if (c.rho.empty()) throw UsageError(std::string(command) + ": give --rho or --q");
  return genus_for_order(c.rho.front());
}

DiscreteMeasure input_measure(const RunConfig& c, const char* command) {
  if (!c.input_path) throw UsageError(std::string(command) + ": --input is required");
  return io::read_measure(*c.input_path);
}

int kernel_table(const RunConfig& c, std::ostream& out) {
  const KernelContext ctx(genus_from(c, "kernel-table"), c.quad);
  out << "r,Mq,Mq_prime\n";
  for (double r : c.grid.radii()) {
    const double derivative = r > 0.0 ? kernel_max_derivative(ctx, r) : NAN;
    out << format_number(r) << ',' << format_number(kernel_max(ctx, r)) << ','
        << format_number(derivative) << '\n';
  }
  return kExitOk;
}

int s_constant_table(const RunConfig& c, std::ostream& out) {
  if (c.rho.empty()) throw UsageError("s-constant: --rho is required");
  out << "rho,q,S_derivative_form,S_direct_form\n";
  for (double rho : c.rho) {
    const OrderParams params = OrderParams::for_order(rho);
    const KernelContext ctx(params.q, c.quad);
    out << format_number(rho) << ',' << params.q << ','
        << format_number(s_constant(params, ctx, SForm::derivative)) << ','
        << format_number(s_constant(params, ctx, SForm::direct)) << '\n';
  }
  return kExitOk;
}

int eval(const RunConfig& c, std::ostream& out) {
  const int q = genus_from(c, "eval");
  const CanonicalIntegral u(input_measure(c, "eval"), KernelContext(q, c.quad));
  if (c.q) {
    out << "# q=" << q << " (set by --q";
    if (!c.rho.empty()) out << "; floor(rho)=" << genus_for_order(c.rho.front());
    out << ")\n";
  }
  if (c.eval_mode == "circle") {
    out << "r,circle_max,circle_mean\n";
    for (double r : c.grid.radii()) {
      double mean = NAN;
      if (r > 0.0) {
        try {
          mean = circle_mean(u, r);
        } catch (const SingularCircle&) {
          // r lies on an atom circle; the column stays nan.
        }
      }
      out << format_number(r) << ',' << format_number(circle_max(u, r)) << ','
          << format_number(mean) << '\n';
    }
    return kExitOk;
  }
  if (c.thetas < 1) throw UsageError("eval: --thetas must be at least 1");
  out << "r,theta,U\n";
  for (double r : c.grid.radii()) {
    for (int k = 0; k < c.thetas; ++k) {
      const double theta = 2.0 * std::numbers::pi * k / c.thetas;
      out << format_number(r) << ',' << format_number(theta) << ','
          << format_number(evaluate(u, std::polar(r, theta))) << '\n';
    }
  }
  return kExitOk;
}

int verify_bounds(const RunConfig& c, std::ostream& out) {
  const std::vector<double> radii = c.grid.radii();
  std::vector<BoundReport> reports;
  if (c.input_path) {
    const CanonicalIntegral u(input_measure(c, "verify-bounds"),
                              KernelContext(genus_from(c, "verify-bounds"), c.quad));
    reports.push_back(verify_theorem_12(u, radii));
  } else {
    if (!c.seed) throw UsageError("verify-bounds: give --input or --seed");
    if (c.trials < 1 || c.max_atoms < 1) {
      throw UsageError("verify-bounds: --trials and --max-atoms must be positive");
    }
    std::mt19937_64 rng(*c.seed);
    // Without --q/--rho the genus cycles through 0, 1, 2; one context per
    // genus shares the M_q table across trials.
    std::vector<KernelContext> contexts;
    for (int q = 0; q < 3; ++q) contexts.emplace_back(q, c.quad);
    const std::optional<int> fixed =
        (c.q || !c.rho.empty()) ? std::optional(genus_from(c, "verify-bounds")) : std::nullopt;
    for (int trial = 0; trial < c.trials; ++trial) {
      DiscreteMeasure m = random_measure(rng, c.max_atoms);
      const int q = fixed ? *fixed : trial % 3;
      const KernelContext ctx = q < 3 ? contexts[q] : KernelContext(q, c.quad);
      reports.push_back(verify_theorem_12(CanonicalIntegral(std::move(m), ctx), radii));
    }
  }
  if (!c.rho.empty()) {
    for (BoundReport& r : reports) r.rho = c.rho.front();
  }

  bool passed = true;
  for (const BoundReport& r : reports) passed = passed && r.passed;
  if (reports.size() == 1) {
    (c.format == "csv" ? io::write_bound_report_csv : io::write_bound_report_json)(out,
                                                                                   reports[0]);
  } else {
    (c.format == "csv" ? io::write_bound_sweep_csv : io::write_bound_sweep_json)(out, reports);
  }
  return passed ? kExitOk : kExitVerificationFailed;
}

int verify_type(const RunConfig& c, std::ostream& out) {
  if (c.rho.empty()) throw UsageError("verify-type: --rho is required");
  const double rho = c.rho.front();
  DiscreteMeasure m;
  if (c.input_path) {
    m = io::read_measure(*c.input_path);
  } else {
    if (c.count < 1) throw UsageError("verify-type: give --input or --zeros (with --sigma)");
    m = synthesize_power_zeros(c.sigma, rho, c.count, c.angle_rule);
  }
  if (c.grid.count < 8 || !c.grid.log_spacing) {
    throw UsageError("verify-type: needs a log grid with --count >= 8");
  }
  const GeometricGrid grid = GeometricGrid::spanning(c.grid.r_min, c.grid.r_max, c.grid.count);
  const TypeBoundReport report = verify_theorem_3(m, rho, grid, c.quad);
  (c.format == "csv" ? io::write_type_report_csv : io::write_type_report_json)(out, report);
  return report.passed ? kExitOk : kExitVerificationFailed;
}

int gen_zeros(const RunConfig& c, std::ostream& out) {
  if (c.rho.empty() || c.count < 1) throw UsageError("gen-zeros: --rho and --count are required");
  io::write_measure_csv(out, synthesize_power_zeros(c.sigma, c.rho.front(), c.count, c.angle_rule));
  return kExitOk;
}

int dispatch(const RunConfig& c, std::ostream& out) {
  switch (c.command) {
    case Command::kernel_table: return kernel_table(c, out);
    case Command::s_constant: return s_constant_table(c, out);
    case Command::eval: return eval(c, out);
    case Command::verify_bounds: return verify_bounds(c, out);
    case Command::verify_type: return verify_type(c, out);
    case Command::gen_zeros: return gen_zeros(c, out);
  }
  return kExitUsage;
}

}  // namespace

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    if (config.format != "json" && config.format != "csv") {
      throw UsageError("--format must be json or csv");
    }
    if (config.eval_mode != "points" && config.eval_mode != "circle") {
      throw UsageError("--mode must be points or circle");
    }
    config.quad.validate();
    if (!config.output_path) return dispatch(config, out);
    // Render fully before touching the file so a failed run leaves no partial output.
    std::ostringstream buffer;
    const int status = dispatch(config, buffer);
    std::ofstream file(*config.output_path, std::ios::binary);
    if (!file) throw UsageError("cannot write '" + *config.output_path + "'");
    file << buffer.str();
    return status;
  } catch (const NonConvergence& e) {
    err << "error: " << e.what() << '\n';
    return kExitNonConvergence;
  } catch (const ParseError& e) {
    err << "input error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig config;
  try {
    config.quad = quadrature_from_environment();
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  CLI::App app{"Growth of canonical Hadamard-Weierstrass integrals: kernel tables, "
               "S(rho), evaluation and bound verification"};
  app.footer(
      "Environment: HWGROWTH_ABS_TOL (default 1e-10), HWGROWTH_REL_TOL (default 1e-8) and\n"
      "HWGROWTH_MAX_SUBDIVISIONS (default 2000) set quadrature defaults; the\n"
      "--abs-tol/--rel-tol/--max-subdivisions flags take precedence.\n"
      "Exit status: 0 ok, 1 verification failed, 2 usage or input error, 3 non-convergence.");
  app.require_subcommand(1);

  std::string spacing = "log";
  std::string angle_rule = "fixed";
  double theta0 = 0.0;
  std::optional<double> rho_single;

  auto add_output = [&](CLI::App* sub) {
    sub->add_option("-o,--output", config.output_path, "Output file (default: stdout)");
  };
  auto add_tolerances = [&](CLI::App* sub) {
    sub->add_option("--abs-tol", config.quad.abs_tol, "Quadrature absolute tolerance");
    sub->add_option("--rel-tol", config.quad.rel_tol, "Quadrature relative tolerance");
    sub->add_option("--max-subdivisions", config.quad.max_subdivisions,
                    "Quadrature subdivision budget");
  };
  auto add_genus = [&](CLI::App* sub) {
    sub->add_option("--rho", rho_single, "Order rho > 0; the genus is floor(rho)");
    sub->add_option("--q", config.q, "Genus override");
  };
  auto add_angles = [&](CLI::App* sub) {
    sub->add_option("--angle-rule", angle_rule, "fixed | equidistributed")
        ->check(CLI::IsMember({"fixed", "equidistributed"}))
        ->capture_default_str();
    sub->add_option("--theta0", theta0, "Angle for the fixed rule")->capture_default_str();
  };

  auto* kt = app.add_subcommand("kernel-table", "Tabulate M_q and M_q' (CSV r,Mq,Mq_prime)");
  add_genus(kt);
  add_output(kt);
  add_tolerances(kt);
  kt->add_option("--r-min", config.grid.r_min, "Smallest radius");
  kt->add_option("--r-max", config.grid.r_max, "Largest radius");
  kt->add_option("--count", config.grid.count, "Number of radii");
  kt->add_option("--spacing", spacing, "log | linear")->check(CLI::IsMember({"log", "linear"}));

  auto* sc = app.add_subcommand("s-constant", "S(rho) in both integral forms");
  sc->add_option("--rho", config.rho, "One or more non-integer orders")->required();
  add_output(sc);
  add_tolerances(sc);

  auto* ev = app.add_subcommand("eval", "Evaluate the canonical integral of a measure");
  ev->add_option("-i,--input", config.input_path, "Measure file (CSV or .json)")->required();
  add_genus(ev);
  add_output(ev);
  add_tolerances(ev);
  ev->add_option("--mode", config.eval_mode, "points (r,theta,U) | circle (r,circle_max,circle_mean)")
      ->capture_default_str();
  ev->add_option("--thetas", config.thetas, "Angles per radius in points mode")
      ->capture_default_str();
  ev->add_option("--r-min", config.grid.r_min, "Smallest radius");
  ev->add_option("--r-max", config.grid.r_max, "Largest radius");
  ev->add_option("--count", config.grid.count, "Number of radii");
  ev->add_option("--spacing", spacing, "log | linear")->check(CLI::IsMember({"log", "linear"}));

  auto* vb = app.add_subcommand("verify-bounds", "Sweep the kernel-max and averaged-counting "
                                                 "bounds over radii; exit 1 on violation");
  vb->add_option("-i,--input", config.input_path, "Measure file (CSV or .json)");
  vb->add_option("--seed", config.seed, "Random sweep seed (used without --input)");
  vb->add_option("--trials", config.trials, "Random measures in a seeded sweep")
      ->capture_default_str();
  vb->add_option("--max-atoms", config.max_atoms, "Atom budget per random measure")
      ->capture_default_str();
  vb->add_option("--format", config.format, "json | csv")->capture_default_str();
  add_genus(vb);
  add_output(vb);
  add_tolerances(vb);
  vb->add_option("--r-min", config.grid.r_min, "Smallest radius");
  vb->add_option("--r-max", config.grid.r_max, "Largest radius");
  vb->add_option("--count", config.grid.count, "Number of radii");
  vb->add_option("--spacing", spacing, "log | linear")->check(CLI::IsMember({"log", "linear"}));

  auto* vt = app.add_subcommand("verify-type", "Type inequalities with S(rho); exit 1 on failure");
  vt->add_option("-i,--input", config.input_path, "Measure file (CSV or .json)");
  vt->add_option("--rho", rho_single, "Non-integer order")->required();
  vt->add_option("--sigma", config.sigma, "Synthetic zeros: type sigma")->capture_default_str();
  vt->add_option("--zeros", config.count, "Synthetic zeros: how many");
  vt->add_option("--format", config.format, "json | csv")->capture_default_str();
  add_angles(vt);
  add_output(vt);
  add_tolerances(vt);
  vt->add_option("--r-min", config.grid.r_min, "Smallest radius of the log grid");
  vt->add_option("--r-max", config.grid.r_max, "Largest radius of the log grid");
  vt->add_option("--count", config.grid.count, "Grid size (>= 8)");

  auto* gz = app.add_subcommand("gen-zeros", "Unit atoms at radii (j/sigma)^(1/rho) as CSV");
  gz->add_option("--sigma", config.sigma, "Type at order rho")->capture_default_str();
  gz->add_option("--rho", rho_single, "Order")->required();
  gz->add_option("--count", config.count, "Number of atoms")->required();
  add_angles(gz);
  add_output(gz);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // Help requests exit 0; everything else is a usage error.
    return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
  }

  if (rho_single) config.rho = {*rho_single};
  config.grid.log_spacing = spacing == "log";
  config.angle_rule = angle_rule == "equidistributed" ? AngleRule::equidistributed()
                                                      : AngleRule::fixed(theta0);

  const CLI::App* chosen = app.get_subcommands().front();
  const std::string name = chosen->get_name();
  if (name == "kernel-table") config.command = Command::kernel_table;
  else if (name == "s-constant") config.command = Command::s_constant;
  else if (name == "eval") config.command = Command::eval;
  else if (name == "verify-bounds") config.command = Command::verify_bounds;
  else if (name == "verify-type") config.command = Command::verify_type;
  else config.command = Command::gen_zeros;

  return run(config, out, err);
}

}  // namespace hwgrowth::cli
