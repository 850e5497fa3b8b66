// Command-line front end: solve instances, run regret experiments, estimate
// preference functions from purchase data, generate the hard-instance family,
// and fit rate curves. Inputs are flags and/or a JSON config; outputs are
// headered CSV and two-column DAT files.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "contassort/contassort.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace contassort;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitData = 3;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

json load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config: " + path);
  json cfg;
  try {
    in >> cfg;
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (cfg.contains("schema_version") && cfg["schema_version"].get<int>() != 1)
    throw ConfigError("unsupported schema_version");
  return cfg;
}

std::vector<long long> parse_horizons(const std::string& text) {
  std::vector<long long> out;
  std::stringstream ss(text);
  std::string field;
  while (std::getline(ss, field, ',')) {
    if (field.empty()) continue;
    out.push_back(std::stoll(field));
  }
  return out;
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string field;
  while (std::getline(ss, field, ','))
    if (!field.empty()) out.push_back(std::stoi(field));
  return out;
}

std::vector<double> read_column(const std::string& path, std::size_t column) {
  std::vector<std::vector<double>> rows;
  try {
    rows = read_csv_rows(path);
  } catch (const std::exception& e) {
    throw DataError(e.what());
  }
  std::vector<double> out;
  for (const auto& row : rows) {
    if (row.size() <= column) throw DataError("missing column in " + path);
    out.push_back(row[column]);
  }
  return out;
}

// (x, v) rows for a grid instance; the x column must be a uniform grid on [0,1].
std::vector<double> read_grid_values(const std::string& path) {
  std::vector<std::vector<double>> rows;
  try {
    rows = read_csv_rows(path);
  } catch (const std::exception& e) {
    throw DataError(e.what());
  }
  if (rows.size() < 2) throw DataError("grid file needs at least two rows: " + path);
  std::vector<double> values;
  const std::size_t n = rows.size() - 1;
  for (std::size_t k = 0; k < rows.size(); ++k) {
    if (rows[k].size() < 2) throw DataError("grid file needs (x, v) columns: " + path);
    const double expected_x = static_cast<double>(k) / n;
    if (std::fabs(rows[k][0] - expected_x) > 1e-6)
      throw DataError("grid x values must be uniform on [0,1]: " + path);
    values.push_back(rows[k][1]);
  }
  return values;
}

InstanceSpec instance_from_json(const json& j) {
  InstanceSpec spec;
  if (j.contains("name")) spec.name = j["name"].get<std::string>();
  if (j.contains("capacity")) spec.capacity = j["capacity"].get<double>();
  if (j.contains("uniform_level")) spec.uniform_level = j["uniform_level"].get<double>();
  if (j.contains("c")) spec.lb_c = j["c"].get<double>();
  if (j.contains("K")) spec.lb_K = j["K"].get<int>();
  if (j.contains("I")) spec.lb_bumps = j["I"].get<std::vector<int>>();
  if (j.contains("v_csv")) {
    spec.name = "grid";
    spec.v_grid = read_grid_values(j["v_csv"].get<std::string>());
  }
  if (j.contains("w")) spec.w_name = j["w"].get<std::string>();
  return spec;
}

std::string config_digest(const json& j) { return hash_hex(fnv1a(j.dump())); }

void ensure_out_dir(const std::string& out_dir) {
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw ConfigError("cannot create output directory: " + out_dir);
}

Instance build_or_fail(const InstanceSpec& spec) {
  try {
    return build_instance(spec);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("bad instance spec: ") + e.what());
  }
}

// -------------------------------------------------------------------- solve

int cmd_solve(const InstanceSpec& spec, const std::string& out_dir, bool curve,
              int grid_knots, const json& raw_cfg) {
  ensure_out_dir(out_dir);
  const std::string digest = config_digest(raw_cfg);
  const Instance inst = build_or_fail(spec);

  SolveResult res;
  if (inst.capacity == 1.0)
    res = solve_uncapacitated(inst);
  else
    res = solve_capacitated(inst);

  std::ostringstream summary;
  summary << "# contassort solve config=" << digest << "\n";
  summary << "rho_star,capacity,intervals,volume\n";
  summary << format_double(res.rho_star) << ',' << format_double(inst.capacity) << ','
          << res.assortment.piece_count() << ',' << format_double(res.assortment.volume())
          << "\n";
  write_text_file(out_dir + "/solve_summary.csv", summary.str());

  std::ostringstream ivs;
  ivs << "# contassort assortment config=" << digest << "\n";
  ivs << "lo,hi\n";
  for (const auto& iv : res.assortment.intervals())
    ivs << format_double(iv.lo) << ',' << format_double(iv.hi) << "\n";
  write_text_file(out_dir + "/assortment.csv", ivs.str());

  // dump v on a uniform grid so the result can be re-solved as a grid instance
  std::vector<double> xs(grid_knots), vs(grid_knots);
  for (int i = 0; i < grid_knots; ++i) {
    xs[i] = static_cast<double>(i) / (grid_knots - 1);
    vs[i] = inst.v(xs[i]);
  }
  write_text_file(out_dir + "/v_grid.csv", grid_csv_text(xs, vs, digest, "x", "v"));

  if (curve && inst.capacity > 0.0) {
    std::vector<double> rhos, values;
    for (int k = 0; k <= 200; ++k) {
      const double rho = k / 200.0;
      const Assortment s = capacitated_inner_max(inst, rho);
      rhos.push_back(rho);
      values.push_back(inner_value(inst, s, rho));
    }
    write_text_file(out_dir + "/fixed_point_curve.dat", dat_text(rhos, values, digest));
  }
  std::cout << "rho_star " << format_double(res.rho_star) << " intervals "
            << res.assortment.piece_count() << "\n";
  return kExitOk;
}

// ----------------------------------------------------------------- simulate

SalesLog replay_first_replication(const ExperimentConfig& cfg) {
  const Instance inst = build_instance(cfg.instance);
  const long long horizon = cfg.horizons.back();
  Rng rng(derive_seed(cfg.base_seed, static_cast<std::uint64_t>(horizon), 0));
  RunOptions opt;
  opt.record_series = false;
  if (cfg.policy.name == "sap") return run_sap(inst, cfg.policy.sap, horizon, rng, opt).log;
  if (cfg.policy.name == "kdep") {
    KdepConfig kcfg;
    kcfg.horizon = horizon;
    kcfg.explore_len = cfg.policy.kdep_explore_len;
    kcfg.grid_knots = cfg.policy.kdep_grid_knots;
    return run_kdep(inst, kcfg, rng, opt).log;
  }
  BanditConfig bcfg;
  bcfg.variant = cfg.policy.name == "ucb" ? BanditVariant::ucb : BanditVariant::ts;
  bcfg.max_products =
      cfg.policy.bandit_products > 0
          ? cfg.policy.bandit_products
          : std::max(1, static_cast<int>(std::lround(inst.capacity * cfg.policy.bandit_bins)));
  bcfg.c1 = cfg.policy.bandit_c1;
  bcfg.c2 = cfg.policy.bandit_c2;
  const DiscreteBins bins = discretize(inst, cfg.policy.bandit_bins);
  return run_discrete_bandit(inst, bins, bcfg, horizon, rng, opt).log;
}

int cmd_simulate(const ExperimentConfig& cfg, const std::string& out_dir, bool dump_log,
                 const json& raw_cfg) {
  ensure_out_dir(out_dir);
  const std::string digest = config_digest(raw_cfg);
  if (cfg.policy.name == "sap") {
    const Instance inst = build_instance(cfg.instance);
    if (cfg.policy.sap.alpha < inst.v.upper_bound() + 1.0)
      std::cerr << "warning: SAP alpha below v_hi + 1; the regret guarantee needs alpha >= "
                << format_double(inst.v.upper_bound() + 1.0) << "\n";
  }
  std::vector<std::string> failures;
  RegretTrace trace;
  try {
    trace = run_experiment(cfg, &failures);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("experiment failed: ") + e.what());
  }
  for (const auto& f : failures) std::cerr << "replication failed: " << f << "\n";
  bool any_success = false;
  for (int reps : trace.reps) any_success = any_success || reps > 0;
  if (!any_success)
    throw ConfigError("every replication failed" +
                      (failures.empty() ? std::string() : ": " + failures.front()));
  write_text_file(out_dir + "/regret.csv", regret_csv_text(trace, digest));
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < trace.horizons.size(); ++i) {
    xs.push_back(static_cast<double>(trace.horizons[i]));
    ys.push_back(trace.mean[i]);
  }
  write_text_file(out_dir + "/regret.dat", dat_text(xs, ys, digest));
  if (dump_log)
    write_text_file(out_dir + "/log.csv",
                    sales_log_csv_text(replay_first_replication(cfg), digest));
  std::cout << "horizons " << trace.horizons.size() << " mean_at_max "
            << format_double(trace.mean.back()) << " mrse " << format_double(trace.mrse)
            << "\n";
  return kExitOk;
}

// ----------------------------------------------------------------- estimate

int cmd_estimate(const std::string& data_path, double p, double scale_max,
                 const std::string& out_dir, int grid_knots, const json& raw_cfg) {
  ensure_out_dir(out_dir);
  const std::string digest = config_digest(raw_cfg);
  if (!(p > 0.0 && p < 1.0)) throw ConfigError("no-purchase probability must be in (0,1)");
  if (!(scale_max > 0.0)) throw ConfigError("scale maximum must be positive");

  std::vector<double> purchases = read_column(data_path, 0);
  if (purchases.empty()) throw DataError("no purchase rows in " + data_path);
  for (double& x : purchases) {
    x /= scale_max;
    if (!(x >= 0.0 && x <= 1.0))
      throw BadScaleError("purchase value outside [0,1] after scaling");
  }
  const bool degenerate = purchases.size() < 2;
  if (degenerate)
    std::cerr << "warning: only " << purchases.size()
              << " purchase row(s); the estimate will be poor\n";

  // Purchases are treated as coming from the full assortment [0,1]; the
  // no-purchase count is synthesized from the assumed probability p.
  const long long n_buy = static_cast<long long>(purchases.size());
  const long long n_empty = std::llround(n_buy * p / (1.0 - p));
  ExplorationLog log;
  log.offers_per_piece = n_buy + n_empty;
  log.pieces.resize(1);
  log.pieces[0].purchases = std::move(purchases);
  log.pieces[0].no_purchases = n_empty;

  const BandwidthOrder bo = bandwidth_and_order(1.0, n_buy);
  const KernelSpec spec{bo.h, bo.order, 0.0, 1.0};
  std::vector<double> grid = uniform_grid(grid_knots);
  PieceEstimate piece = estimate_piece(log, 0, spec, grid);
  std::vector<double> values(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) values[k] = std::max(0.0, piece.v_hat[k]);

  write_text_file(out_dir + "/vhat.csv", grid_csv_text(grid, values, digest, "x", "vhat"));

  const Instance est(PreferenceFunction::from_grid(values), ProfitCurve::identity(), 1.0);
  const SolveResult res = solve_uncapacitated(est);
  const double full_revenue = expected_revenue(est, Assortment::unit());
  const double threshold =
      res.assortment.is_empty() ? 1.0 : res.assortment.intervals()[0].lo;
  const double gain =
      full_revenue > 0.0 ? (res.rho_star - full_revenue) / full_revenue : 0.0;

  std::ostringstream summary;
  summary << "# contassort estimate config=" << digest << "\n";
  summary << "purchases,no_purchases,p,threshold,threshold_raw,rho_star,full_revenue,"
             "gain_pct,degenerate\n";
  summary << n_buy << ',' << n_empty << ',' << format_double(p) << ','
          << format_double(threshold) << ',' << format_double(threshold * scale_max) << ','
          << format_double(res.rho_star) << ',' << format_double(full_revenue) << ','
          << format_double(100.0 * gain) << ',' << (degenerate ? 1 : 0) << "\n";
  write_text_file(out_dir + "/estimate_summary.csv", summary.str());
  std::cout << "threshold " << format_double(threshold) << " gain_pct "
            << format_double(100.0 * gain) << "\n";
  return kExitOk;
}

// --------------------------------------------------------------- lowerbound

int cmd_lowerbound(double c, int bumps_count, const std::vector<int>& bumps,
                   const std::string& out_dir, int grid_knots, const json& raw_cfg) {
  ensure_out_dir(out_dir);
  const std::string digest = config_digest(raw_cfg);
  LowerBoundParams params;
  Instance inst = [&] {
    try {
      params = lower_bound_params(c, bumps_count, bumps);
      return make_lower_bound_instance(c, bumps_count, bumps);
    } catch (const std::exception& e) {
      throw ConfigError(std::string("bad lower-bound parameters: ") + e.what());
    }
  }();

  std::ostringstream out;
  out << "# contassort lowerbound config=" << digest << "\n";
  out << "c,s,delta,sigma,K,N_K,beta,bumps\n";
  out << format_double(params.c) << ',' << format_double(params.s) << ','
      << format_double(params.delta) << ',' << format_double(params.sigma) << ','
      << params.bumps_count << ',' << params.bin_count << ','
      << format_double(params.beta) << ',';
  for (std::size_t i = 0; i < params.bumps.size(); ++i) {
    if (i) out << ';';
    out << params.bumps[i];
  }
  out << "\n";
  write_text_file(out_dir + "/lb_params.csv", out.str());

  std::vector<double> xs(grid_knots), vs(grid_knots);
  for (int i = 0; i < grid_knots; ++i) {
    xs[i] = static_cast<double>(i) / (grid_knots - 1);
    vs[i] = inst.v(xs[i]);
  }
  write_text_file(out_dir + "/v_grid.csv", grid_csv_text(xs, vs, digest, "x", "v"));
  std::cout << "N_K " << params.bin_count << " beta " << format_double(params.beta) << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------- fit

int cmd_fit(const std::string& data_path, const std::string& model_name,
            const std::string& out_dir, const json& raw_cfg) {
  ensure_out_dir(out_dir);
  const std::string digest = config_digest(raw_cfg);
  RateModel model;
  if (model_name == "LOG")
    model = RateModel::log_t;
  else if (model_name == "TWO_THIRDS")
    model = RateModel::two_thirds;
  else
    throw ConfigError("model must be LOG or TWO_THIRDS");

  std::vector<std::vector<double>> rows;
  try {
    rows = read_csv_rows(data_path);
  } catch (const std::exception& e) {
    throw DataError(e.what());
  }
  RegretTrace trace;
  for (const auto& row : rows) {
    if (row.size() < 2) throw DataError("fit input needs (T, mean) columns");
    trace.horizons.push_back(static_cast<long long>(row[0]));
    trace.mean.push_back(row[1]);
    trace.stderr_.push_back(row.size() > 2 ? row[2] : 0.0);
    trace.reps.push_back(row.size() > 3 ? static_cast<int>(row[3]) : 1);
  }
  FitResult fit;
  try {
    fit = fit_rate(trace, model);
  } catch (const std::exception& e) {
    throw DataError(std::string("fit failed: ") + e.what());
  }

  std::ostringstream out;
  out << "# contassort fit config=" << digest << " model=" << model_name << "\n";
  out << "gamma\n" << format_double(fit.gamma) << "\n";
  out << "T,residual\n";
  for (std::size_t i = 0; i < trace.horizons.size(); ++i)
    out << trace.horizons[i] << ',' << format_double(fit.residuals[i]) << "\n";
  write_text_file(out_dir + "/fit.csv", out.str());
  std::cout << "gamma " << format_double(fit.gamma) << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"continuous assortment optimization toolkit"};
  app.require_subcommand(1);

  std::string config_path, out_dir = ".", data_path;
  std::uint64_t seed = 0;
  bool seed_set = false, reps_set = false, horizon_set = false, capacity_set = false;
  bool policy_set = false;
  int reps = 0;
  std::string horizon_text, policy_name;
  double capacity = 0.0, p_value = 0.5, scale_max = 1.0;
  bool p_set = false;

  app.add_option("--config", config_path, "JSON config file");
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--seed", seed, "base random seed")->each([&](std::string) { seed_set = true; });
  app.add_option("--reps", reps, "replications")->each([&](std::string) { reps_set = true; });
  app.add_option("--horizon", horizon_text, "comma-separated horizons")
      ->each([&](std::string) { horizon_set = true; });
  app.add_option("--capacity", capacity, "assortment capacity in [0,1]")
      ->each([&](std::string) { capacity_set = true; });
  app.add_option("--policy", policy_name, "policy: sap|kdep|ucb|ts")
      ->each([&](std::string) { policy_set = true; });
  app.add_option("--p", p_value, "assumed no-purchase probability")
      ->each([&](std::string) { p_set = true; });
  app.add_option("--scale-max", scale_max, "divisor mapping raw values onto [0,1]");

  auto* solve = app.add_subcommand("solve", "full-information optimal assortment");
  std::string instance_name = "bimodal", v_csv, w_name = "identity";
  bool curve = false;
  int grid_knots = 8193;
  solve->add_option("--instance", instance_name, "bimodal|uniform|baseline|lowerbound");
  solve->add_option("--v-csv", v_csv, "two-column CSV (x, v) on a uniform grid");
  solve->add_option("--w", w_name, "identity|lowerbound");
  solve->add_flag("--curve", curve, "also write the rho -> I(S_rho, rho) curve");
  solve->add_option("--grid-knots", grid_knots, "knots for the v dump");

  auto* simulate = app.add_subcommand("simulate", "seeded multi-replication regret runs");
  bool dump_log = false;
  simulate->add_flag("--dump-log", dump_log,
                     "also write the per-period sales log of the first replication");
  auto* estimate = app.add_subcommand("estimate", "kernel estimate from purchase data");
  estimate->add_option("--data", data_path, "CSV of purchase values");
  estimate->add_option("--grid-knots", grid_knots, "knots for the estimate grid");
  auto* lowerbound = app.add_subcommand("lowerbound", "hard-instance generator");
  double lb_c = 0.25;
  int lb_K = 2;
  std::string lb_I = "";
  lowerbound->add_option("--c", lb_c, "capacity parameter in (0, 0.25]");
  lowerbound->add_option("--K", lb_K, "number of bumps");
  lowerbound->add_option("--I", lb_I, "comma-separated bump bin indices");
  lowerbound->add_option("--grid-knots", grid_knots, "knots for the v dump");
  auto* fit = app.add_subcommand("fit", "rate-curve fit of a regret trace");
  std::string fit_model = "LOG";
  fit->add_option("--data", data_path, "CSV with (T, mean) columns");
  fit->add_option("--model", fit_model, "LOG|TWO_THIRDS");

  for (CLI::App* sub : {solve, simulate, estimate, lowerbound, fit}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    json cfg = config_path.empty() ? json::object() : load_config(config_path);

    if (solve->parsed()) {
      InstanceSpec spec;
      if (cfg.contains("instance")) spec = instance_from_json(cfg["instance"]);
      if (solve->count("--instance") || !cfg.contains("instance")) spec.name = instance_name;
      if (!v_csv.empty()) {
        spec.name = "grid";
        spec.v_grid = read_grid_values(v_csv);
      }
      if (solve->count("--w")) spec.w_name = w_name;
      if (capacity_set) spec.capacity = capacity;
      json manifest = {{"cmd", "solve"},
                       {"instance", spec.name},
                       {"capacity", spec.capacity},
                       {"w", spec.w_name}};
      if (cfg.contains("curve")) curve = cfg["curve"].get<bool>();
      return cmd_solve(spec, out_dir, curve, grid_knots, manifest);
    }

    if (simulate->parsed()) {
      ExperimentConfig ecfg;
      if (cfg.contains("instance")) ecfg.instance = instance_from_json(cfg["instance"]);
      if (cfg.contains("policy")) {
        const json& pj = cfg["policy"];
        if (pj.contains("name")) ecfg.policy.name = pj["name"].get<std::string>();
        if (pj.contains("alpha")) ecfg.policy.sap.alpha = pj["alpha"].get<double>();
        if (pj.contains("beta")) ecfg.policy.sap.beta = pj["beta"].get<double>();
        if (pj.contains("rho1")) ecfg.policy.sap.rho1 = pj["rho1"].get<double>();
        if (pj.contains("explore_len"))
          ecfg.policy.kdep_explore_len = pj["explore_len"].get<long long>();
        if (pj.contains("grid_knots"))
          ecfg.policy.kdep_grid_knots = pj["grid_knots"].get<int>();
        if (pj.contains("bins")) ecfg.policy.bandit_bins = pj["bins"].get<int>();
        if (pj.contains("products"))
          ecfg.policy.bandit_products = pj["products"].get<int>();
        if (pj.contains("c1")) ecfg.policy.bandit_c1 = pj["c1"].get<double>();
        if (pj.contains("c2")) ecfg.policy.bandit_c2 = pj["c2"].get<double>();
      }
      if (cfg.contains("horizons")) ecfg.horizons = cfg["horizons"].get<std::vector<long long>>();
      if (cfg.contains("replications")) ecfg.replications = cfg["replications"].get<int>();
      if (cfg.contains("seed")) ecfg.base_seed = cfg["seed"].get<std::uint64_t>();
      if (cfg.contains("horizon_mode"))
        ecfg.mode = cfg["horizon_mode"].get<std::string>() == "prefix"
                        ? HorizonMode::prefix
                        : HorizonMode::independent;
      if (policy_set) ecfg.policy.name = policy_name;
      if (capacity_set) ecfg.instance.capacity = capacity;
      if (reps_set) ecfg.replications = reps;
      if (seed_set) ecfg.base_seed = seed;
      if (horizon_set) ecfg.horizons = parse_horizons(horizon_text);
      if (ecfg.horizons.empty()) throw ConfigError("no horizons given");
      json manifest = {{"cmd", "simulate"},
                       {"instance", ecfg.instance.name},
                       {"capacity", ecfg.instance.capacity},
                       {"policy", ecfg.policy.name},
                       {"horizons", ecfg.horizons},
                       {"replications", ecfg.replications},
                       {"seed", ecfg.base_seed},
                       {"mode", ecfg.mode == HorizonMode::prefix ? "prefix" : "independent"}};
      return cmd_simulate(ecfg, out_dir, dump_log, manifest);
    }

    if (estimate->parsed()) {
      if (cfg.contains("data") && data_path.empty())
        data_path = cfg["data"].get<std::string>();
      if (cfg.contains("p") && !p_set) p_value = cfg["p"].get<double>();
      if (cfg.contains("scale_max") && !app.count("--scale-max"))
        scale_max = cfg["scale_max"].get<double>();
      if (data_path.empty()) throw ConfigError("estimate needs --data");
      json manifest = {{"cmd", "estimate"}, {"p", p_value}, {"scale_max", scale_max}};
      const int knots = estimate->count("--grid-knots") ? grid_knots : 2048;
      return cmd_estimate(data_path, p_value, scale_max, out_dir, knots, manifest);
    }

    if (lowerbound->parsed()) {
      if (cfg.contains("c")) lb_c = cfg["c"].get<double>();
      if (cfg.contains("K")) lb_K = cfg["K"].get<int>();
      if (cfg.contains("I")) lb_I = cfg["I"].get<std::string>();
      std::vector<int> bumps = parse_int_list(lb_I);
      json manifest = {{"cmd", "lowerbound"}, {"c", lb_c}, {"K", lb_K}, {"I", bumps}};
      const int knots = lowerbound->count("--grid-knots") ? grid_knots : 4096;
      return cmd_lowerbound(lb_c, lb_K, bumps, out_dir, knots, manifest);
    }

    if (fit->parsed()) {
      if (cfg.contains("data") && data_path.empty())
        data_path = cfg["data"].get<std::string>();
      if (cfg.contains("model")) fit_model = cfg["model"].get<std::string>();
      if (data_path.empty()) throw ConfigError("fit needs --data");
      json manifest = {{"cmd", "fit"}, {"model", fit_model}};
      return cmd_fit(data_path, fit_model, out_dir, manifest);
    }
    throw ConfigError("no subcommand given");
  } catch (const BadScaleError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  }
}
