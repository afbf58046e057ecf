#include "bertrand/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <ostream>
#include <sstream>
#include <thread>

#include "bertrand/csv.hpp"
#include "bertrand/error.hpp"
#include "bertrand/fractional.hpp"
#include "bertrand/isochrony.hpp"
#include "bertrand/orbit.hpp"
#include "bertrand/turning.hpp"

namespace bertrand::cli {

namespace {

std::string lower(std::string_view text) {
  std::string out(text);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
  return out;
}

std::string trim(std::string_view text) {
  const auto first = text.find_first_not_of(" \t");
  if (first == std::string_view::npos) return {};
  const auto last = text.find_last_not_of(" \t");
  return std::string(text.substr(first, last - first + 1));
}

std::vector<std::string> split(std::string_view text, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = text.find(sep, start);
    parts.push_back(trim(text.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

[[noreturn]] void parse_fail(const std::string& what) { throw Error(ErrorCode::ParseError, what); }

// One output cell: numbers keep their value for JSON, text stays text.
struct Cell {
  std::string text;
  bool is_number = false;
  double number = 0.0;

  Cell(double v) : text(csv::format(v)), is_number(true), number(v) {}  // NOLINT
  Cell(int v) : Cell(static_cast<double>(v)) {}                         // NOLINT
  Cell(std::string_view s) : text(s) {}                                 // NOLINT
  Cell(const char* s) : text(s) {}                                      // NOLINT
};

struct Section {
  std::string name;
  std::vector<std::vector<Cell>> rows;
};

// CSV: "# key=value" lines, the header, rows of the first section, then
// "# <name>" before the rows of every further section (same columns).
// JSON: {"meta": {...}, "<section>": [{column: value}, ...], ...}.
struct Report {
  std::vector<std::pair<std::string, Cell>> meta;
  std::vector<std::string> columns;
  std::vector<Section> sections{{"rows", {}}};

  void add(std::vector<Cell> row, std::size_t section = 0) {
    if (row.size() != columns.size()) throw std::logic_error("row width does not match the header");
    sections[section].rows.push_back(std::move(row));
  }

  void write_csv(std::ostream& out) const {
    for (const auto& [key, value] : meta) out << "# " << key << '=' << value.text << '\n';
    csv::write_row(out, columns);
    for (std::size_t s = 0; s < sections.size(); ++s) {
      if (s) out << "# " << sections[s].name << '\n';
      for (const auto& row : sections[s].rows) {
        std::vector<std::string> cells;
        for (const auto& c : row) cells.push_back(c.text);
        csv::write_row(out, cells);
      }
    }
  }

  void write_json(std::ostream& out) const {
    auto value = [](const Cell& c) -> nlohmann::ordered_json {
      if (!c.is_number) return c.text;
      if (!std::isfinite(c.number)) return nullptr;
      return c.number;
    };
    nlohmann::ordered_json doc = nlohmann::ordered_json::object();
    if (!meta.empty()) {
      auto& m = doc["meta"];
      for (const auto& [key, v] : meta) m[key] = value(v);
    }
    for (const auto& section : sections) {
      auto rows = nlohmann::ordered_json::array();
      for (const auto& row : section.rows) {
        nlohmann::ordered_json obj = nlohmann::ordered_json::object();
        for (std::size_t i = 0; i < columns.size(); ++i) obj[columns[i]] = value(row[i]);
        rows.push_back(std::move(obj));
      }
      doc[section.name] = std::move(rows);
    }
    out << doc.dump(2) << '\n';
  }
};

struct Common {
  std::string potential;
  std::string format = "csv";
  std::string output;
  double tol = 1e-10;
  double m = 1.0;
  std::optional<double> k;
};

void add_common(CLI::App* cmd, Common& c, bool with_potential) {
  if (with_potential) {
    cmd->add_option("--potential", c.potential,
                    "powerlaw:+,nu=<f>,k=<f> | powerlaw:-,nu=<f>,k=<f> | log:k=<f> (optional b=<offset>)")
        ->required();
  }
  cmd->add_option("--m", c.m, "particle mass")->check(CLI::PositiveNumber);
  cmd->add_option("--k", c.k, "override the potential strength k")->check(CLI::PositiveNumber);
  cmd->add_option("--tol", c.tol, "absolute quadrature / integration tolerance")->check(CLI::PositiveNumber);
  cmd->add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("-o,--output", c.output, "write to this path instead of stdout");
}

PotentialSpec potential_of(const Common& c) {
  PotentialSpec spec = parse_potential(c.potential);
  if (c.k) spec.k = *c.k;
  spec.validate();
  return spec;
}

double single(const std::string& text, const char* flag) {
  const auto values = parse_grid(text);
  if (values.size() != 1) parse_fail(std::string(flag) + " takes a single value here");
  return values.front();
}

IsoFamily family_of(const std::string& text) {
  const std::string f = lower(text);
  if (f == "attractive" || f == "-") return IsoFamily::Attractive;
  if (f == "positive" || f == "+") return IsoFamily::Positive;
  parse_fail("--family must be attractive or positive, got '" + text + "'");
}

Report apsidal_report(const Common& c, const std::string& L_text, const std::string& E_text, unsigned threads) {
  const PotentialSpec spec = potential_of(c);
  const auto momenta = parse_grid(L_text);
  const auto cells = apsidal_sweep(spec, c.m, momenta, parse_energy_grid(E_text), c.tol, threads);
  Report report;
  report.columns = {"L", "E", "phi", "err_est", "status"};
  for (const auto& cell : cells) {
    report.add({cell.L, cell.E, cell.result.phi, cell.result.err_est, to_string(cell.status)});
  }
  return report;
}

Report orbit_report(const Common& c, double L, double E, const std::string& formulation, const std::string& span,
                    int q_max, double closure_tol) {
  const RadialProblem problem = make_problem(potential_of(c), c.m, L);
  OrbitOptions options;
  options.q_max = q_max;
  options.closure_tol = closure_tol;
  const double extent = parse_scalar(span);
  const OrbitTrace trace = lower(formulation) == "radial" ? integrate_radial(problem, E, extent, c.tol, options)
                                                          : integrate_binet(problem, E, extent, c.tol, options);
  Report report;
  report.meta.emplace_back("formulation", to_string(trace.formulation));
  report.meta.emplace_back("closure", to_string(trace.closure.kind));
  report.meta.emplace_back("p", trace.closure.p);
  report.meta.emplace_back("q", trace.closure.q);
  report.meta.emplace_back("phi", trace.closure.phi);
  report.meta.emplace_back("energy_drift", trace.energy_drift);
  if (trace.formulation == Formulation::Radial) report.meta.emplace_back("momentum_drift", trace.momentum_drift);
  report.columns = {"param", "r_or_x", "deriv", "phi_or_t", "energy"};
  for (const auto& s : trace.samples) report.add({s.param, s.coord, s.deriv, s.other, s.energy});
  return report;
}

Report invert_report(const Common& c, double L, const std::string& E_text, const std::optional<std::string>& phi_const) {
  const RadialProblem problem = make_problem(potential_of(c), c.m, L);
  const EnergyFunction phi =
      phi_const ? constant_period_law(problem, parse_scalar(*phi_const)) : apsidal_period_law(problem, c.tol);
  Report report;
  report.columns = {"E", "phi", "delta_x", "x_lt_sym", "x_gt_sym"};
  for (const double E : parse_energy_grid(E_text)(problem)) {
    const TurningPair pair = symmetric_branches(phi, problem, E, c.tol);
    report.add({E, phi.eval(E), pair.delta_x, pair.x_lt, pair.x_gt});
  }
  return report;
}

Report scan_report(const Common& c, double L, const std::string& family_text, const std::string& nu_text) {
  const IsoFamily family = family_of(family_text);
  ScanConfig config;
  config.k = c.k.value_or(1.0);
  config.m = c.m;
  config.L = L;
  const auto nus = parse_grid(nu_text);
  const ScanResult result = bertrand_scan(family, nus, config);
  Report report;
  report.columns = {"family", "nu", "transcendental", "residual_sup", "fourth_order_violation", "verdict"};
  report.sections.push_back({"roots", {}});
  auto row = [&](const IsochronyReport& r) -> std::vector<Cell> {
    return {to_string(family), r.nu, r.transcendental_value, r.residual_sup, r.constraint_violation,
            to_string(r.verdict)};
  };
  for (const auto& r : result.reports) report.add(row(r));
  for (const auto& root : result.roots) {
    if (root.admissible) {
      report.add(row(root.report), 1);
    } else {
      report.add({to_string(family), root.nu, family_condition(family, root.nu), NAN, NAN, "inadmissible"}, 1);
    }
  }
  return report;
}

Report perturb_report(const Common& c, double L, const std::optional<std::string>& eps_text) {
  const RadialProblem problem = make_problem(potential_of(c), c.m, L);
  const auto a = perturbative_coefficients(problem, 3);
  const auto constraints = isochrony_constraints(problem);
  const Curvature curv = curvature(problem);
  const double nu = problem.potential.is_power_law() ? problem.potential.nu : NAN;
  Report report;
  report.columns = {"nu", "L", "x0", "omega2", "a1", "a2", "a3", "gamma_check", "fourth_order_violation"};
  report.add({nu, L, problem.x0, curv.omega2, a[0], a[1], a[2], constraints.gamma_check,
              constraints.fourth_order_violation});
  if (eps_text) {
    // Lateral map rows reuse the columns: nu <- eps_minus, x0 <- exact,
    // omega2 <- series; documented in --help.
    report.sections.push_back({"lateral", {}});
    const double phi_c = circular_apsidal(problem.potential, problem.R);
    for (const double eps : parse_grid(*eps_text)) {
      const auto lat = lateral_map(problem, phi_c, eps);
      report.add({eps, L, lat.exact, lat.series, NAN, NAN, NAN, lat.gamma - 1.0, std::abs(lat.exact - lat.series)},
                 1);
    }
  }
  return report;
}

Report reconstruct_report(const Common& c, const std::optional<std::string>& phi_const,
                          const std::optional<std::string>& phi_csv, const std::optional<std::string>& r_text) {
  std::function<double(double)> law;
  std::vector<double> grid;
  if (phi_const) {
    if (!r_text) parse_fail("--r is required with --phi-const");
    const double value = parse_scalar(*phi_const);
    law = [value](double) { return value; };
    grid = parse_grid(*r_text);
  } else {
    if (r_text) parse_fail("--r cannot be combined with --phi-csv; the radii come from the file");
    std::ifstream in(*phi_csv);
    if (!in) parse_fail("cannot open " + *phi_csv);
    const csv::Table table = csv::read(in);
    const auto rho_col = table.column("rho");
    const auto phi_col = table.column("phi_c");
    std::vector<double> values;
    for (const auto& row : table.rows) {
      grid.push_back(csv::to_double(row[rho_col]));
      values.push_back(csv::to_double(row[phi_col]));
    }
    // Linear between samples; the reconstruction integrates segment by
    // segment over the same radii, so each piece it sees is smooth.
    law = [grid, values](double rho) {
      auto it = std::upper_bound(grid.begin(), grid.end(), rho);
      std::size_t j = std::clamp<std::size_t>(static_cast<std::size_t>(it - grid.begin()), 1, grid.size() - 1);
      const double t = (rho - grid[j - 1]) / (grid[j] - grid[j - 1]);
      return values[j - 1] + t * (values[j] - values[j - 1]);
    };
  }
  const auto samples = reconstruct_potential(law, grid, std::max(c.tol, 1e-14));
  const auto exponents = local_exponents(samples);
  Report report;
  report.meta.emplace_back("gauge", "U=0,dU=1 at r=" + csv::format(samples[samples.size() / 2].r));
  report.columns = {"r", "U", "dU", "local_exponent"};
  for (std::size_t i = 0; i < samples.size(); ++i) {
    report.add({samples[i].r, samples[i].U, samples[i].dU, exponents[i]});
  }
  return report;
}

constexpr const char* kFooter = R"(Grids: <min>:<max>:<step> or a comma list. Energies also accept auto:<N>.
Scalars for --span and --phi-const accept a pi factor: 4pi, pi/2, 0.5pi.
Exit codes: 0 success, 2 usage or domain error, 3 numerical failure
(quadrature tolerance not met, integration failure).)";

}  // namespace

PotentialSpec parse_potential(std::string_view text) {
  const std::string s = lower(trim(text));
  const auto colon = s.find(':');
  if (colon == std::string::npos) parse_fail("potential spec needs '<family>:', got '" + std::string(text) + "'");
  const std::string kind = trim(std::string_view(s).substr(0, colon));
  auto parts = split(std::string_view(s).substr(colon + 1), ',');

  int sign = 0;
  if (kind == "powerlaw") {
    if (parts.empty() || (parts.front() != "+" && parts.front() != "-")) {
      parse_fail("powerlaw needs a '+' or '-' sign first, got '" + std::string(text) + "'");
    }
    sign = parts.front() == "+" ? 1 : -1;
    parts.erase(parts.begin());
  } else if (kind != "log") {
    parse_fail("unknown potential family '" + kind + "'");
  }

  std::map<std::string, double> values;
  for (const auto& part : parts) {
    const auto eq = part.find('=');
    if (eq == std::string::npos) parse_fail("expected key=value in potential spec, got '" + part + "'");
    const std::string key = trim(std::string_view(part).substr(0, eq));
    const bool known = key == "k" || key == "b" || (sign != 0 && key == "nu");
    if (!known) parse_fail("unknown key '" + key + "' for " + kind);
    if (values.count(key)) parse_fail("key '" + key + "' given twice");
    values[key] = csv::to_double(trim(std::string_view(part).substr(eq + 1)));
  }
  const double k = values.count("k") ? values["k"] : 1.0;
  const double b = values.count("b") ? values["b"] : 0.0;
  PotentialSpec spec;
  if (sign == 0) {
    spec = PotentialSpec::logarithmic(k, b);
  } else {
    if (!values.count("nu")) parse_fail("powerlaw needs nu=<value>");
    spec = sign > 0 ? PotentialSpec::power_law_positive(values["nu"], k, b)
                    : PotentialSpec::power_law_attractive(values["nu"], k, b);
  }
  spec.validate();
  return spec;
}

std::vector<double> parse_grid(std::string_view text) {
  const std::string s = trim(text);
  if (s.empty()) parse_fail("empty grid");
  std::vector<double> values;
  if (s.find(':') != std::string::npos) {
    const auto parts = split(s, ':');
    if (parts.size() != 3) parse_fail("range grid is <min>:<max>:<step>, got '" + s + "'");
    const double lo = csv::to_double(parts[0]);
    const double hi = csv::to_double(parts[1]);
    const double step = csv::to_double(parts[2]);
    if (!(step > 0.0) || !(hi >= lo)) parse_fail("range grid needs step > 0 and max >= min, got '" + s + "'");
    const auto count = static_cast<long>(std::floor((hi - lo) / step + 1e-9)) + 1;
    if (count > 10'000'000) parse_fail("range grid too large: " + s);
    for (long i = 0; i < count; ++i) values.push_back(lo + static_cast<double>(i) * step);
  } else {
    for (const auto& part : split(s, ',')) values.push_back(csv::to_double(part));
  }
  return values;
}

double parse_scalar(std::string_view text) {
  std::string s = lower(trim(text));
  double divisor = 1.0;
  if (const auto slash = s.find('/'); slash != std::string::npos) {
    divisor = csv::to_double(trim(std::string_view(s).substr(slash + 1)));
    if (divisor == 0.0) parse_fail("division by zero in '" + std::string(text) + "'");
    s = trim(std::string_view(s).substr(0, slash));
  }
  double factor = 1.0;
  if (s.size() >= 2 && s.compare(s.size() - 2, 2, "pi") == 0) {
    factor = std::numbers::pi;
    s = trim(std::string_view(s).substr(0, s.size() - 2));
    if (s.empty()) s = "1";
    if (s.back() == '*') s.pop_back();
  }
  return csv::to_double(s) * factor / divisor;
}

EnergyGrid parse_energy_grid(std::string_view text) {
  const std::string s = lower(trim(text));
  if (s.rfind("auto:", 0) != 0) return fixed_energies(parse_grid(s));
  const double n_real = csv::to_double(s.substr(5));
  if (!(n_real >= 1.0) || n_real != std::floor(n_real)) parse_fail("auto:<N> needs a positive integer N");
  const int n = static_cast<int>(n_real);
  return [n](const RadialProblem& problem) {
    const double scale = std::max(1.0, std::abs(problem.V_R));
    const double w = kDegenerateWindow * scale;
    const double top = problem.potential.family == Family::PowerLawAttractive ? std::abs(problem.V_R)
                                                                               : 10.0 * scale;
    std::vector<double> energies;
    for (int i = 0; i < n; ++i) {
      energies.push_back(problem.V_R + w * std::pow(top / w, static_cast<double>(i + 1) / (n + 1)));
    }
    return energies;
  };
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Apsidal angles, isochrony certificates and orbit closure for central potentials", "bertrand"};
  app.footer(kFooter);
  app.require_subcommand(1);

  Common c;
  std::string L_text = "1";
  std::string E_text;
  unsigned threads = std::max(1u, std::thread::hardware_concurrency());

  auto* apsidal = app.add_subcommand("apsidal", "Phi(E, L) over an E x L grid; columns L,E,phi,err_est,status");
  add_common(apsidal, c, true);
  apsidal->add_option("--L", L_text, "angular momentum grid");
  apsidal->add_option("--E", E_text, "energy grid or auto:<N>")->required();
  apsidal->add_option("--threads", threads, "worker threads (output order is fixed)")->check(CLI::PositiveNumber);

  std::string formulation = "binet";
  std::string span = "2pi";
  int q_max = 20;
  double closure_tol = 1e-6;
  auto* orbit = app.add_subcommand(
      "orbit", "Integrate one orbit from the apocenter; '# key=value' header with the closure verdict, then "
               "param,r_or_x,deriv,phi_or_t,energy");
  add_common(orbit, c, true);
  orbit->add_option("--L", L_text, "angular momentum");
  orbit->add_option("--E", E_text, "energy")->required();
  orbit->add_option("--formulation", formulation, "binet (in angle) or radial (in time)")
      ->check(CLI::IsMember({"binet", "radial"}, CLI::ignore_case));
  orbit->add_option("--span", span, "angle span (binet) or time span (radial), e.g. 4pi");
  orbit->add_option("--q-max", q_max, "largest radial-oscillation count q for closure")->check(CLI::PositiveNumber);
  orbit->add_option("--closure-tol", closure_tol, "tolerance on phi/pi - p/q")->check(CLI::PositiveNumber);

  std::optional<std::string> phi_const;
  bool from_potential = false;
  auto* invert = app.add_subcommand(
      "invert", "Well width from a period law; columns E,phi,delta_x,x_lt_sym,x_gt_sym");
  add_common(invert, c, true);
  invert->add_option("--L", L_text, "angular momentum");
  invert->add_option("--E", E_text, "energy grid or auto:<N>")->required();
  auto* inv_const = invert->add_option("--phi-const", phi_const, "constant apsidal angle, e.g. pi");
  auto* inv_pot = invert->add_flag("--from-potential", from_potential, "use Phi(E) computed from --potential");
  inv_const->excludes(inv_pot);

  std::string family_text;
  std::string nu_text;
  auto* scan = app.add_subcommand(
      "scan-bertrand",
      "Isochrony reports over a nu grid, then '# roots' rows; columns "
      "family,nu,transcendental,residual_sup,fourth_order_violation,verdict");
  add_common(scan, c, false);
  scan->add_option("--L", L_text, "angular momentum");
  scan->add_option("--family", family_text, "attractive or positive")->required();
  scan->add_option("--nu", nu_text, "exponent grid")->required();

  std::optional<std::string> eps_text;
  auto* perturb = app.add_subcommand(
      "perturb",
      "Expansion coefficients at x0; columns nu,L,x0,omega2,a1,a2,a3,gamma_check,fourth_order_violation. "
      "With --eps a '# lateral' section follows whose rows carry eps_minus in nu, the exact eps_plus in x0, "
      "the series in omega2, gamma - 1 in gamma_check and |exact - series| in fourth_order_violation");
  add_common(perturb, c, true);
  perturb->add_option("--L", L_text, "angular momentum");
  perturb->add_option("--eps", eps_text, "eps_minus grid for the lateral map");

  std::optional<std::string> phi_csv;
  std::optional<std::string> r_text;
  auto* reconstruct = app.add_subcommand(
      "reconstruct", "U(r) from a circular apsidal law; columns r,U,dU,local_exponent");
  add_common(reconstruct, c, false);
  auto* rec_const = reconstruct->add_option("--phi-const", phi_const, "constant Phi_C, e.g. pi/2");
  auto* rec_csv = reconstruct->add_option("--phi-csv", phi_csv, "CSV with columns rho,phi_c");
  rec_const->excludes(rec_csv);
  reconstruct->add_option("--r", r_text, "radius grid (with --phi-const)");

  std::vector<const char*> argv{"bertrand"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    Report report;
    if (*apsidal) {
      report = apsidal_report(c, L_text, E_text, threads);
    } else if (*orbit) {
      report = orbit_report(c, single(L_text, "--L"), parse_scalar(E_text), formulation, span, q_max, closure_tol);
    } else if (*invert) {
      if (!phi_const && !from_potential) parse_fail("invert needs --phi-const <value> or --from-potential");
      report = invert_report(c, single(L_text, "--L"), E_text, phi_const);
    } else if (*scan) {
      report = scan_report(c, single(L_text, "--L"), family_text, nu_text);
    } else if (*perturb) {
      report = perturb_report(c, single(L_text, "--L"), eps_text);
    } else if (*reconstruct) {
      if (!phi_const && !phi_csv) parse_fail("reconstruct needs --phi-const <value> or --phi-csv <path>");
      report = reconstruct_report(c, phi_const, phi_csv, r_text);
    }

    std::ostringstream text;
    if (c.format == "json") {
      report.write_json(text);
    } else {
      report.write_csv(text);
    }
    if (c.output.empty()) {
      out << text.str();
    } else {
      std::ofstream file(c.output);
      if (!(file << text.str())) {
        err << "error: cannot write " << c.output << '\n';
        return kExitUsage;
      }
    }
    return kExitOk;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    const bool numerical = e.code() == ErrorCode::ToleranceNotMet || e.code() == ErrorCode::IntegrationFailure;
    return numerical ? kExitNumerical : kExitUsage;
  }
}

}  // namespace bertrand::cli
