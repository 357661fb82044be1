#include "lawless/cli_runner.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "lawless/born_engine.hpp"
#include "lawless/error.hpp"
#include "lawless/holonomy.hpp"
#include "lawless/modular_vars.hpp"
#include "lawless/phenomenon.hpp"
#include "lawless/report.hpp"

namespace lawless {

namespace {

struct CommonOpts {
  std::uint64_t seed = 0;
  std::string out;
  std::string format = "json";
};

void add_common(CLI::App* sub, CommonOpts* opts) {
  sub->add_option("--seed", opts->seed, "RNG seed (default 0)");
  sub->add_option("--out", opts->out, "report file (default: stdout)");
  sub->add_option("--format", opts->format, "json | csv (default json)")
      ->check(CLI::IsMember({"json", "csv"}));
}

void emit(const CommonOpts& opts, const std::string& content) {
  if (opts.out.empty()) {
    std::cout << content;
  } else {
    write_text_file(opts.out, content);
    log_info("wrote " + opts.out);
  }
}

std::vector<double> parse_double_list(const std::string& text,
                                      const std::string& flag) {
  std::vector<double> out;
  std::istringstream cells(text);
  std::string cell;
  while (std::getline(cells, cell, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(cell, &used));
      while (used < cell.size() &&
             std::isspace(static_cast<unsigned char>(cell[used])))
        ++used;
      if (used != cell.size()) throw std::invalid_argument(cell);
    } catch (const std::exception&) {
      fail("BadFlag", flag + " expects comma-separated numbers, got '" + cell + "'");
    }
  }
  if (out.empty()) fail("BadFlag", flag + " expects at least one number");
  return out;
}

std::ostringstream csv_stream() {
  std::ostringstream out;
  out << std::setprecision(17);
  return out;
}

// ----------------------------------------------------------------- born

struct BornOpts {
  CommonOpts common;
  std::string probs, coeffs;
  double eps = 1e-6;
  long long m_cap = 100000000;
};

void run_born(const BornOpts& o) {
  if (o.probs.empty() == o.coeffs.empty())
    fail("BadFlag", "pass exactly one of --probs or --coeffs");
  // Partition whichever form the caller gave: squaring sqrt(p) can perturb the
  // last bit, so --probs inputs are partitioned as-is to keep exact residuals.
  std::vector<double> c;
  DerivedProbabilities derived;
  if (!o.coeffs.empty()) {
    c = parse_double_list(o.coeffs, "--coeffs");
    derived = derive_probabilities(BornInstance(c), o.eps, o.m_cap);
  } else {
    std::vector<double> probs = parse_double_list(o.probs, "--probs");
    for (double p : probs) {
      if (!(p > 0.0)) fail("InvalidArgument", "probabilities must be positive");
      c.push_back(std::sqrt(p));
    }
    derived = derive_probabilities(probs, o.eps, o.m_cap);
  }
  BornInstance inst(c);
  AuxiliaryExpansion expansion = auxiliary_expansion(inst, derived.partition);
  EquidistanceReport eq = check_equidistance(expansion);

  Json config;
  config["coefficients"] = inst.c;
  config["eps"] = o.eps;
  config["m_cap"] = o.m_cap;
  config["seed"] = o.common.seed;

  Json results;
  results["p"] = derived.p;
  results["bound"] = derived.bound;
  results["partition"]["counts"] = derived.partition.n;
  results["partition"]["denominator"] = derived.partition.M;
  results["partition"]["residual"] = derived.partition.residual;
  results["expansion"]["total_branches"] = expansion.total_branches;
  results["expansion"]["max_pair_spread"] = expansion.max_pair_spread;
  results["expansion"]["spread_bound"] = expansion.spread_bound;
  results["equidistance"]["theta"] = eq.theta;
  results["equidistance"]["spread"] = eq.spread;

  if (o.common.format == "csv") {
    auto csv = csv_stream();
    csv << "index,p,count\n";
    for (std::size_t i = 0; i < derived.p.size(); ++i)
      csv << i << ',' << derived.p[i] << ',' << derived.partition.n[i] << '\n';
    emit(o.common, csv.str());
  } else {
    emit(o.common, make_report("born", config, results).dump(2) + "\n");
  }
}

// ------------------------------------------------------------ phenomenon

struct PhenomenonOpts {
  CommonOpts common;
  std::string scenario = "penrose";
  std::string initial;
  long long trials = 1000;
  std::string log_path;
};

Scenario resolve_scenario(const std::string& name) {
  if (name == "penrose" || name == "stern-gerlach") return scenario_by_name(name);
  return scenario_from_json_file(name);
}

void run_phenomenon_cmd(const PhenomenonOpts& o) {
  Scenario sc = resolve_scenario(o.scenario);
  const std::string initial =
      o.initial.empty() ? sc.initials.front().first : o.initial;
  TrialLog log = run_phenomenon(sc, initial, o.trials, o.common.seed);
  LogReport analysis = analyze_log(log);
  TimeDirection direction = classify_time_direction(log, sc);
  if (!o.log_path.empty()) {
    write_trial_log_csv(log, o.log_path);
    log_info("wrote trial log " + o.log_path);
  }

  Json config;
  config["scenario"] = o.scenario;
  config["initial"] = initial;
  config["trials"] = o.trials;
  config["seed"] = o.common.seed;
  if (!o.log_path.empty()) config["log"] = o.log_path;

  Json results;
  results["forward"] = analysis.forward;
  results["backward"] = analysis.backward;
  results["entropy_bits"] = analysis.entropy_bits;
  results["time_direction"] = to_string(direction);

  if (o.common.format == "csv") {
    auto csv = csv_stream();
    csv << "trial_index,initial,final\n";
    for (std::size_t i = 0; i < log.trials.size(); ++i)
      csv << i << ',' << log.trials[i].first << ',' << log.trials[i].second
          << '\n';
    emit(o.common, csv.str());
  } else {
    emit(o.common, make_report("phenomenon", config, results).dump(2) + "\n");
  }
}

// --------------------------------------------------------------- modular

struct ModularOpts {
  CommonOpts common;
  double sigma = 1.0;
  double center = 16.0;
  double sep = 16.0;
  double alpha = 0.0;
  std::size_t grid = 4096;
  double length = 64.0;
  int nmax = 4;
};

void run_modular(const ModularOpts& o) {
  WavePacketGrid psi =
      make_two_packet(o.sigma, o.center, o.sep, 0.0, o.grid, o.length);
  ModularExchangeReport exchange = modular_exchange_report(psi, o.alpha, o.nmax);
  TranslationResult trans = translation_expectation_detail(psi, psi.sep);
  std::vector<double> moments;
  for (int n = 1; n <= o.nmax; ++n) moments.push_back(momentum_moment(psi, n));

  Json config;
  config["sigma"] = o.sigma;
  config["center"] = o.center;
  config["sep"] = o.sep;
  config["alpha"] = o.alpha;
  config["grid"] = o.grid;
  config["length"] = o.length;
  config["nmax"] = o.nmax;
  config["seed"] = o.common.seed;

  Json results;
  results["sep_snapped"] = psi.sep;
  results["snap_steps"] = trans.steps;
  results["overlap"] = psi.overlap;
  results["translation_before"] = complex_to_json(exchange.before);
  results["translation_after"] = complex_to_json(exchange.after);
  results["delta_translation"] = complex_to_json(exchange.delta_translation);
  results["moments"] = moments;
  results["delta_moments"] = exchange.delta_moment;

  if (o.common.format == "csv") {
    auto csv = csv_stream();
    csv << "n,moment,delta\n";
    for (int n = 1; n <= o.nmax; ++n)
      csv << n << ',' << moments[static_cast<std::size_t>(n - 1)] << ','
          << exchange.delta_moment[static_cast<std::size_t>(n - 1)] << '\n';
    emit(o.common, csv.str());
  } else {
    emit(o.common, make_report("modular", config, results).dump(2) + "\n");
  }
}

// -------------------------------------------------------------- holonomy

struct HolonomyOpts {
  CommonOpts common;
  std::string preset = "zero";
  std::string curve = "square";
  long long steps = 256;
  std::vector<std::string> params;
};

void run_holonomy(const HolonomyOpts& o) {
  std::map<std::string, double> params;
  for (const auto& kv : o.params) {
    auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0)
      fail("BadFlag", "--param expects key=value, got '" + kv + "'");
    try {
      std::size_t used = 0;
      params[kv.substr(0, eq)] = std::stod(kv.substr(eq + 1), &used);
      if (used != kv.size() - eq - 1) throw std::invalid_argument(kv);
    } catch (const std::exception&) {
      fail("BadFlag", "--param value must be numeric in '" + kv + "'");
    }
  }

  ConnectionConfig cfg;
  if (std::filesystem::exists(o.preset) ||
      (o.preset.size() > 5 &&
       o.preset.substr(o.preset.size() - 5) == ".json")) {
    cfg = connection_config_from_json_file(o.preset);
  } else {
    cfg.field = make_preset_connection(o.preset, params);
    cfg.group = default_group_for_preset(o.preset, params);
  }
  GeneratorCatalog cat = build_group(cfg.group);

  Curve curve;
  if (std::filesystem::exists(o.curve)) {
    curve = curve_from_csv_file(o.curve);
  } else if (o.curve == "square") {
    curve = square_curve(Eigen::VectorXd::Zero(cfg.field.chart_dim), 1.0);
  } else if (o.curve == "circle") {
    curve = circle_curve(Eigen::VectorXd::Zero(cfg.field.chart_dim), 1.0, 64);
  } else {
    fail("FileNotFound", "no curve file or builtin named '" + o.curve + "'");
  }
  if (curve.vertices.front().size() != cfg.field.chart_dim)
    fail("DimensionMismatch", "curve dimension does not match the chart");

  HolonomyResult result = holonomy(cfg.field, cat, curve, o.steps);

  Json config;
  config["preset"] = o.preset;
  config["curve"] = o.curve;
  config["steps"] = o.steps;
  config["seed"] = o.common.seed;
  config["parameters"] = params;

  Json results;
  results["group"] = cat.tag();
  results["dim"] = cat.dim;
  results["element"] = matrix_to_json(result.element.matrix);
  results["error_estimate"] = result.error_estimate;
  results["unitarity_drift"] = result.element.unitarity_drift;
  const bool closed = is_closed(curve);
  results["closed"] = closed;
  bool all_u1 = true;
  for (const auto& fac : cfg.group.factors)
    if (fac.type != FactorType::U1) all_u1 = false;
  if (closed && all_u1)
    results["phase_factor"] = complex_to_json(u1_phase_factor(cfg.field, cat, curve));

  if (o.common.format == "csv") {
    auto csv = csv_stream();
    csv << "row,col,re,im\n";
    const Mat& m = result.element.matrix;
    for (Eigen::Index r = 0; r < m.rows(); ++r)
      for (Eigen::Index c = 0; c < m.cols(); ++c)
        csv << r << ',' << c << ',' << m(r, c).real() << ',' << m(r, c).imag()
            << '\n';
    emit(o.common, csv.str());
  } else {
    emit(o.common, make_report("holonomy", config, results).dump(2) + "\n");
  }
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
  CLI::App app{"deterministic runner for the ray-geometry, measurement-record,"
               " modular-translation, and transport experiments"};
  app.require_subcommand(1);

  BornOpts born;
  auto* born_cmd = app.add_subcommand(
      "born", "derive outcome frequencies from superposition coefficients");
  born_cmd->add_option("--probs", born.probs, "comma-separated probabilities");
  born_cmd->add_option("--coeffs", born.coeffs, "comma-separated coefficients");
  born_cmd->add_option("--eps", born.eps, "approximation target (default 1e-6)");
  born_cmd->add_option("--m-cap", born.m_cap, "denominator search cap");
  add_common(born_cmd, &born.common);
  born_cmd->callback([&born] { run_born(born); });

  PhenomenonOpts phen;
  auto* phen_cmd = app.add_subcommand(
      "phenomenon", "sample seeded measurement records and analyze them");
  phen_cmd->add_option("--scenario", phen.scenario,
                       "penrose | stern-gerlach | scenario JSON path");
  phen_cmd->add_option("--initial", phen.initial,
                       "initial-state label (default: scenario's first)");
  phen_cmd->add_option("--trials", phen.trials, "number of trials (default 1000)");
  phen_cmd->add_option("--log", phen.log_path, "also write the trial CSV here");
  add_common(phen_cmd, &phen.common);
  phen_cmd->callback([&phen] { run_phenomenon_cmd(phen); });

  ModularOpts mod;
  auto* mod_cmd = app.add_subcommand(
      "modular", "two-packet translation expectations and momentum moments");
  mod_cmd->add_option("--sigma", mod.sigma, "packet width (default 1)");
  mod_cmd->add_option("--center", mod.center, "first hump center (default 16)");
  mod_cmd->add_option("--sep", mod.sep, "hump separation (default 16)");
  mod_cmd->add_option("--alpha", mod.alpha, "exchange phase (default 0)");
  mod_cmd->add_option("--grid", mod.grid, "grid points, power of two (default 4096)");
  mod_cmd->add_option("--length", mod.length, "periodic domain length (default 64)");
  mod_cmd->add_option("--nmax", mod.nmax, "highest moment order (default 4)");
  add_common(mod_cmd, &mod.common);
  mod_cmd->callback([&mod] { run_modular(mod); });

  HolonomyOpts hol;
  auto* hol_cmd = app.add_subcommand(
      "holonomy", "path-ordered transport along a curve for a field preset");
  hol_cmd->add_option("--preset", hol.preset, "preset name or field JSON path");
  hol_cmd->add_option("--curve", hol.curve, "curve CSV path, or square | circle");
  hol_cmd->add_option("--steps", hol.steps, "integration steps (default 256)");
  hol_cmd->add_option("--param", hol.params, "preset parameter key=value")
      ->take_all();
  add_common(hol_cmd, &hol.common);
  hol_cmd->callback([&hol] { run_holonomy(hol); });

  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("lawless");
  for (const auto& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "BadFlag: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return (e.code() == "TooTight" || e.code() == "ToleranceExceeded") ? 3 : 2;
  } catch (const std::exception& e) {
    std::cerr << "unexpected failure: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace lawless
