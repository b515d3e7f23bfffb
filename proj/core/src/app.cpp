#include "lagns/app.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <future>
#include <mutex>
#include <ostream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace lagns {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

// ---------------------------------------------------------------------------
// Config parsing

const char* kind_name(const json& j) {
  switch (j.type()) {
    case json::value_t::null:
      return "null";
    case json::value_t::boolean:
      return "boolean";
    case json::value_t::string:
      return "string";
    case json::value_t::array:
      return "array";
    case json::value_t::object:
      return "object";
    default:
      return "number";
  }
}

class Reader {
 public:
  Reader(const json& obj, std::string prefix, std::set<std::string> known)
      : obj_(obj), prefix_(std::move(prefix)), known_(std::move(known)) {
    if (!obj_.is_object()) throw ParseError(prefix_.empty() ? "<root>" : prefix_, "expected an object");
    for (const auto& [key, value] : obj_.items()) {
      if (!known_.count(key)) throw ParseError(path(key), "unknown key");
    }
  }

  std::string path(const std::string& key) const {
    return prefix_.empty() ? key : prefix_ + "." + key;
  }
  bool has(const std::string& key) const { return obj_.contains(key); }
  const json& at(const std::string& key) const { return obj_.at(key); }

  void number(const std::string& key, double& out) const {
    if (!has(key)) return;
    const json& j = at(key);
    if (!j.is_number()) throw ParseError(path(key), std::string("expected a number, got ") + kind_name(j));
    out = j.get<double>();
    if (!std::isfinite(out)) throw ParseError(path(key), "must be finite");
  }

  void positive(const std::string& key, double& out) const {
    number(key, out);
    if (has(key) && !(out > 0.0)) throw ParseError(path(key), "must be positive");
  }

  void integer(const std::string& key, long long& out) const {
    if (!has(key)) return;
    const json& j = at(key);
    if (!j.is_number_integer()) throw ParseError(path(key), "expected an integer");
    out = j.get<long long>();
  }

  void string(const std::string& key, std::string& out) const {
    if (!has(key)) return;
    const json& j = at(key);
    if (!j.is_string()) throw ParseError(path(key), std::string("expected a string, got ") + kind_name(j));
    out = j.get<std::string>();
  }

 private:
  const json& obj_;
  std::string prefix_;
  std::set<std::string> known_;
};

void apply_override(json& root, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw ConfigError("override \"" + assignment + "\" is not of the form key=value");
  }
  const std::string key = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);
  json value = json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (value.is_discarded()) value = text;

  json* node = &root;
  std::size_t start = 0;
  while (true) {
    const auto dot = key.find('.', start);
    const std::string part = key.substr(start, dot - start);
    if (dot == std::string::npos) {
      (*node)[part] = value;
      return;
    }
    json& child = (*node)[part];
    if (child.is_null()) child = json::object();
    if (!child.is_object()) throw ParseError(key.substr(0, dot), "cannot override inside a non-object");
    node = &child;
    start = dot + 1;
  }
}

fs::path default_output_root() {
  if (const char* env = std::getenv(kOutputRootEnv); env != nullptr && *env != '\0') return env;
  return "lagns_out";
}

}  // namespace

RunConfig parse_config(const std::string& text, const std::vector<std::string>& overrides) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("malformed JSON: ") + e.what());
  }
  for (const std::string& o : overrides) apply_override(root, o);

  RunConfig cfg;
  const Reader top(root, "",
                   {"setup", "L", "n", "t_end", "gas", "step", "initial", "audit_every",
                    "snapshot_every", "output_dir", "excess_thresholds", "truncation_threshold",
                    "theta_bc", "mms"});

  std::string setup_name = to_string(cfg.setup.kind);
  top.string("setup", setup_name);
  const auto kind = setup_from_string(setup_name);
  if (!kind) {
    throw ParseError("setup", "expected one of cauchy, halfline_insulated, halfline_isothermal");
  }
  cfg.setup.kind = *kind;

  if (top.has("theta_bc")) {
    if (cfg.setup.kind != SetupKind::HalfLineIsothermal) {
      throw ParseError("theta_bc", "only the halfline_isothermal setup has a wall temperature");
    }
    double wall = 1.0;
    top.number("theta_bc", wall);
    if (wall != FarField::theta) {
      throw ParseError("theta_bc", "wall temperature is fixed at 1 for halfline_isothermal");
    }
  }

  top.positive("L", cfg.half_length);
  top.integer("n", cfg.n_cells);
  if (cfg.n_cells < static_cast<long long>(kMinCells)) {
    throw ParseError("n", "must be an integer >= 4");
  }
  top.positive("t_end", cfg.t_end);
  top.number("audit_every", cfg.audit_every);
  if (cfg.audit_every < 0.0) throw ParseError("audit_every", "must be nonnegative");
  top.number("snapshot_every", cfg.snapshot_every);
  if (cfg.snapshot_every < 0.0) throw ParseError("snapshot_every", "must be nonnegative");
  top.positive("truncation_threshold", cfg.truncation_threshold);

  std::string out;
  top.string("output_dir", out);
  cfg.output_dir = out.empty() ? default_output_root() : fs::path(out);

  if (top.has("excess_thresholds")) {
    const json& list = top.at("excess_thresholds");
    if (!list.is_array() || list.empty()) {
      throw ParseError("excess_thresholds", "expected a nonempty array of numbers > 1");
    }
    cfg.excess_thresholds.clear();
    for (const json& a : list) {
      if (!a.is_number() || !(a.get<double>() > 1.0)) {
        throw ParseError("excess_thresholds", "every threshold must be a number > 1");
      }
      cfg.excess_thresholds.push_back(a.get<double>());
    }
  }

  if (top.has("gas")) {
    const Reader gas(top.at("gas"), "gas", {"mu", "kappa", "R", "c_v"});
    gas.positive("mu", cfg.gas.mu);
    gas.positive("kappa", cfg.gas.kappa);
    gas.positive("R", cfg.gas.R);
    gas.positive("c_v", cfg.gas.c_v);
  }

  if (top.has("step")) {
    const Reader step(top.at("step"), "step",
                      {"cfl_hyperbolic", "cfl_parabolic", "dt_min", "dt_max", "positivity_floor"});
    step.positive("cfl_hyperbolic", cfg.control.cfl_hyperbolic);
    step.positive("cfl_parabolic", cfg.control.cfl_parabolic);
    step.positive("dt_min", cfg.control.dt_min);
    step.positive("dt_max", cfg.control.dt_max);
    step.positive("positivity_floor", cfg.control.positivity_floor);
    try {
      cfg.control.validate();
    } catch (const ConfigError& e) {
      throw ParseError("step", e.what());
    }
  }

  if (top.has("initial")) {
    const Reader init(top.at("initial"), "initial",
                      {"family", "amplitude_v", "amplitude_u", "amplitude_theta", "width", "center",
                       "seed", "modes"});
    std::string family = to_string(cfg.initial.family);
    init.string("family", family);
    const auto f = family_from_string(family);
    if (!f) {
      throw ParseError("initial.family", "expected one of gaussian_bump, tanh_front, random_smooth");
    }
    cfg.initial.family = *f;
    init.number("amplitude_v", cfg.initial.amplitude_v);
    init.number("amplitude_u", cfg.initial.amplitude_u);
    init.number("amplitude_theta", cfg.initial.amplitude_theta);
    init.positive("width", cfg.initial.width);
    init.number("center", cfg.initial.center);
    long long seed = static_cast<long long>(cfg.initial.seed);
    init.integer("seed", seed);
    if (seed < 0) throw ParseError("initial.seed", "must be nonnegative");
    cfg.initial.seed = static_cast<std::uint64_t>(seed);
    long long modes = cfg.initial.modes;
    init.integer("modes", modes);
    if (modes < 1 || modes > 4096) throw ParseError("initial.modes", "must be in [1, 4096]");
    cfg.initial.modes = static_cast<int>(modes);
  }

  if (top.has("mms")) {
    const Reader mms(top.at("mms"), "mms", {"solution", "n_list", "t_end", "L", "order_threshold"});
    std::string solution = cfg.mms.steady ? "steady" : "standard";
    mms.string("solution", solution);
    if (solution != "standard" && solution != "steady") {
      throw ParseError("mms.solution", "expected standard or steady");
    }
    cfg.mms.steady = solution == "steady";
    if (mms.has("n_list")) {
      const json& list = mms.at("n_list");
      if (!list.is_array()) throw ParseError("mms.n_list", "expected an array of integers");
      cfg.mms.n_list.clear();
      for (const json& n : list) {
        if (!n.is_number_integer() || n.get<long long>() < static_cast<long long>(kMinCells)) {
          throw ParseError("mms.n_list", "every entry must be an integer >= 4");
        }
        cfg.mms.n_list.push_back(n.get<long long>());
      }
      if (cfg.mms.n_list.size() < 3) {
        throw ParseError("mms.n_list", "needs at least three resolutions");
      }
      if (!std::is_sorted(cfg.mms.n_list.begin(), cfg.mms.n_list.end()) ||
          std::adjacent_find(cfg.mms.n_list.begin(), cfg.mms.n_list.end()) != cfg.mms.n_list.end()) {
        throw ParseError("mms.n_list", "resolutions must be strictly increasing");
      }
    }
    mms.positive("t_end", cfg.mms.t_end);
    mms.positive("L", cfg.mms.half_length);
    mms.positive("order_threshold", cfg.mms.order_threshold);
  }

  // Cross-checks that need the assembled config.
  try {
    const MassGrid grid = make_grid(cfg.setup, cfg.half_length, cfg.n_cells);
    (void)build_initial_data(cfg.initial, cfg.setup, grid);
  } catch (const ParseError&) {
    throw;
  } catch (const ConfigError& e) {
    throw ParseError("initial", e.what());
  }
  return cfg;
}

std::string config_reference() {
  return R"(Config keys (JSON object, all optional, unknown keys rejected):
  setup                 cauchy | halfline_insulated | halfline_isothermal   [cauchy]
  L                     truncation length: domain [-L, L] or [0, L]          [10]
  n                     number of mass cells, >= 4                          [256]
  t_end                 final time                                          [1]
  audit_every           audit.csv cadence in time units, 0 = every step     [0.1]
  snapshot_every        snapshot cadence, 0 = initial and final only        [0]
  output_dir            output directory     [$LAGNS_OUTPUT_ROOT or ./lagns_out]
  excess_thresholds     levels a > 1 for int (theta - a)_+^2               [[1.5, 2, 3]]
  truncation_threshold  max deviation from (1,0,1) in outer 5% of cells     [0.01]
  theta_bc              wall temperature; only 1 is accepted (isothermal)
  gas     { mu, kappa, R, c_v }                                             [all 1]
  step    { cfl_hyperbolic [0.4], cfl_parabolic [0.4], dt_min [1e-12],
            dt_max [1], positivity_floor [1e-10] }
  initial { family: gaussian_bump | tanh_front | random_smooth [gaussian_bump],
            amplitude_v, amplitude_u, amplitude_theta [0], width [1],
            center [0], seed [1], modes [8] }
  mms     { solution: standard | steady [standard], n_list [[64,128,256,512]],
            t_end [0.1], L [8], order_threshold [1.9] }
)";
}

double far_field_deviation(const FluidState& state, const ProblemSetup& setup) {
  const std::size_t n = state.v.size();
  const std::size_t band = std::max<std::size_t>(1, n / 20);
  double dev = 0.0;
  auto scan = [&](std::size_t first, std::size_t last) {
    for (std::size_t j = first; j < last; ++j) {
      dev = std::max({dev, std::abs(state.v[j] - FarField::v), std::abs(state.theta[j] - FarField::theta)});
    }
    for (std::size_t i = first; i <= last; ++i) dev = std::max(dev, std::abs(state.u[i] - FarField::u));
  };
  scan(n - band, n);
  if (!setup.has_wall()) scan(0, band);
  return dev;
}

void write_snapshot(const fs::path& file, const FluidState& state, const MassGrid& grid) {
  std::ofstream os(file);
  if (!os) throw ConfigError("cannot write " + file.string());
  os << "x_center,v,theta,x_node,u\n";
  char buf[160];
  const std::size_t n = grid.n_cells();
  for (std::size_t j = 0; j < n; ++j) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g\n", grid.cell_center(j),
                  state.v[j], state.theta[j], grid.node(j), state.u[j]);
    os << buf;
  }
  std::snprintf(buf, sizeof buf, ",,,%.17g,%.17g\n", grid.node(n), state.u[n]);
  os << buf;
}

namespace {

std::string time_label(double t) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", t);
  return buf;
}

void write_json(const fs::path& file, const json& j) {
  std::ofstream os(file);
  if (!os) throw ConfigError("cannot write " + file.string());
  os << j.dump(2) << '\n';
}

json summarize(const RunConfig& cfg, const std::vector<AuditRecord>& records,
               const TruncationAudit& trunc, const std::string& status, std::size_t steps) {
  json s;
  s["status"] = status;
  s["setup"] = to_string(cfg.setup.kind);
  s["steps"] = steps;
  if (records.empty()) return s;

  const AuditRecord& first = records.front();
  const AuditRecord& last = records.back();
  s["t_final"] = last.t;

  FieldBounds br{first.v_min, first.v_max, first.theta_min, first.theta_max};
  double lpinf_max = 0.0;
  double entropy_excess = -std::numeric_limits<double>::infinity();
  double max_residual = 0.0;
  bool dissipation_nonnegative = true;
  for (const AuditRecord& r : records) {
    br.v_min = std::min(br.v_min, r.v_min);
    br.v_max = std::max(br.v_max, r.v_max);
    br.theta_min = std::min(br.theta_min, r.theta_min);
    br.theta_max = std::max(br.theta_max, r.theta_max);
    lpinf_max = std::max(lpinf_max, r.lpinf_dev);
    entropy_excess = std::max(entropy_excess, r.E + r.cum_D - first.E);
    max_residual = std::max(max_residual, std::abs(r.energy_balance_residual));
    dissipation_nonnegative = dissipation_nonnegative && r.D_visc >= 0.0 && r.D_heat >= 0.0;
  }
  s["bounds"] = {{"v_min", br.v_min}, {"v_max", br.v_max}, {"theta_min", br.theta_min},
                 {"theta_max", br.theta_max}};

  // Tail: last 20% of records must not rise more than 1% above their running minimum.
  const std::size_t tail_start = records.size() - std::max<std::size_t>(1, records.size() / 5);
  bool tail_monotone = true;
  double running_min = records[tail_start].lpinf_dev;
  for (std::size_t k = tail_start + 1; k < records.size(); ++k) {
    if (records[k].lpinf_dev > running_min * 1.01) tail_monotone = false;
    running_min = std::min(running_min, records[k].lpinf_dev);
  }
  const bool decayed = last.lpinf_dev <= 0.1 * lpinf_max;
  s["decay"] = {{"lpinf_max", lpinf_max},
                {"lpinf_final", last.lpinf_dev},
                {"tail_monotone", tail_monotone},
                {"verdict", (decayed && tail_monotone) ? "decaying" : "not_decayed"}};

  const double tol = first.E * 1e-3 + 1e-6;
  s["entropy_audit"] = {{"E0", first.E},
                        {"max_excess", entropy_excess},
                        {"tolerance", tol},
                        {"dissipation_nonnegative", dissipation_nonnegative},
                        {"verdict", (entropy_excess <= tol && dissipation_nonnegative) ? "pass" : "fail"}};

  s["truncation"] = {{"threshold", cfg.truncation_threshold},
                     {"max_deviation", trunc.max_deviation},
                     {"t_at_max", trunc.t_at_max},
                     {"verdict", trunc.breached ? "breach" : "pass"}};
  s["energy_balance_residual"] = {{"final", last.energy_balance_residual},
                                  {"max_abs", max_residual}};
  return s;
}

}  // namespace

RunOutcome run(const RunConfig& cfg, std::ostream& log) {
  std::error_code ec;
  fs::create_directories(cfg.output_dir, ec);
  if (ec || !fs::is_directory(cfg.output_dir)) {
    throw ConfigError("output directory " + cfg.output_dir.string() + " is not writable");
  }

  const MassGrid grid = make_grid(cfg.setup, cfg.half_length, cfg.n_cells);
  const StepContext ctx{grid, cfg.gas, cfg.setup, cfg.control, {}};
  FluidState state = build_initial_data(cfg.initial, cfg.setup, grid);

  Auditor auditor(cfg.gas, grid, cfg.excess_thresholds);
  RunOutcome outcome;

  std::ofstream audit(cfg.output_dir / "audit.csv");
  if (!audit) throw ConfigError("cannot write audit.csv in " + cfg.output_dir.string());
  audit << audit_csv_header(cfg.excess_thresholds) << '\n';

  AdvanceOptions opts;
  opts.audit_every = cfg.audit_every;
  opts.on_record = [&](const FluidState& s, const AuditRecord& r) {
    audit << audit_csv_row(r) << '\n';
    const double dev = far_field_deviation(s, cfg.setup);
    if (dev > outcome.truncation.max_deviation) {
      outcome.truncation.max_deviation = dev;
      outcome.truncation.t_at_max = s.t;
    }
  };

  write_snapshot(cfg.output_dir / ("snap_" + time_label(state.t) + ".csv"), state, grid);
  std::size_t steps = 0;
  try {
    double t_stop = cfg.t_end;
    const double eps = 1e-12 * std::max(1.0, cfg.t_end);
    double snap_index = 1.0;
    do {
      t_stop = cfg.snapshot_every > 0.0 ? std::min(cfg.t_end, snap_index * cfg.snapshot_every)
                                        : cfg.t_end;
      AdvanceResult r = advance(state, t_stop, ctx, auditor, opts);
      steps += r.steps;
      state = std::move(r.state);
      write_snapshot(cfg.output_dir / ("snap_" + time_label(state.t) + ".csv"), state, grid);
      snap_index += 1.0;
    } while (cfg.t_end - state.t > eps);
  } catch (const IntegrationError& e) {
    log << "integration failure: " << e.what() << '\n';
    json fail = {{"time", e.time()}, {"stage", e.stage()}, {"cause", e.what()}};
    if (e.violation()) fail["violation"] = e.violation()->describe();
    write_json(cfg.output_dir / "failure.json", fail);
    outcome.exit_code = kExitIntegrationFailure;
    outcome.status = "integration_failure";
  }
  audit.flush();

  outcome.truncation.breached = outcome.truncation.max_deviation > cfg.truncation_threshold;
  if (outcome.exit_code == kExitOk) {
    if (outcome.truncation.breached) {
      log << "truncation audit breached: far-field deviation " << outcome.truncation.max_deviation
          << " > " << cfg.truncation_threshold << " at t=" << outcome.truncation.t_at_max << '\n';
      outcome.exit_code = kExitTruncationBreach;
      outcome.status = "truncation_breach";
    } else {
      outcome.status = "ok";
    }
  }

  write_json(cfg.output_dir / "summary.json",
             summarize(cfg, auditor.records(), outcome.truncation, outcome.status, steps));
  outcome.records = auditor.records();
  outcome.final_state = std::move(state);
  log << "run " << outcome.status << ": " << steps << " steps, " << outcome.records.size()
      << " audit records -> " << cfg.output_dir.string() << '\n';
  return outcome;
}

MmsOutcome run_mms(const RunConfig& cfg, std::ostream& log) {
  std::error_code ec;
  fs::create_directories(cfg.output_dir, ec);
  if (ec || !fs::is_directory(cfg.output_dir)) {
    throw ConfigError("output directory " + cfg.output_dir.string() + " is not writable");
  }
  const ManufacturedSolution ms =
      cfg.mms.steady ? ManufacturedSolution::steady() : ManufacturedSolution::standard(cfg.setup.kind);

  MmsOutcome out;
  out.report = convergence_study(ms, cfg.setup, cfg.gas, cfg.mms.n_list, cfg.mms.t_end,
                                 cfg.mms.half_length, cfg.control);
  const bool pass = out.report.passes(cfg.mms.order_threshold);
  out.exit_code = pass ? kExitOk : kExitMmsBelowThreshold;

  json report;
  report["setup"] = to_string(cfg.setup.kind);
  report["solution"] = cfg.mms.steady ? "steady" : "standard";
  report["t_end"] = cfg.mms.t_end;
  report["L"] = cfg.mms.half_length;
  report["threshold"] = cfg.mms.order_threshold;
  report["runs"] = json::array();
  char line[160];
  log << "       n           dm        err_v        err_u    err_theta\n";
  for (const ResolutionError& r : out.report.runs) {
    report["runs"].push_back({{"n", r.n},
                              {"dm", r.dm},
                              {"err_v", r.err_v},
                              {"err_u", r.err_u},
                              {"err_theta", r.err_theta},
                              {"steps", r.steps}});
    std::snprintf(line, sizeof line, "%8lld %12.5e %12.5e %12.5e %12.5e\n", r.n, r.dm, r.err_v,
                  r.err_u, r.err_theta);
    log << line;
  }
  if (out.report.orders) {
    const auto& o = *out.report.orders;
    report["orders"] = {{"v", o[0]}, {"u", o[1]}, {"theta", o[2]}};
    std::snprintf(line, sizeof line, "orders: v %.3f  u %.3f  theta %.3f\n", o[0], o[1], o[2]);
    log << line;
  } else {
    report["orders"] = nullptr;
    log << "orders: skipped (errors at round-off)\n";
  }
  report["pass"] = pass;
  log << (pass ? "PASS" : "FAIL") << " (threshold " << cfg.mms.order_threshold << ")\n";
  write_json(cfg.output_dir / "mms_report.json", report);
  return out;
}

int sweep(const std::string& config_text, const std::vector<std::string>& overrides,
          const std::string& key, const std::vector<std::string>& values, unsigned jobs,
          std::ostream& log) {
  if (values.empty()) throw ConfigError("sweep needs at least one value");
  const RunConfig base = parse_config(config_text, overrides);

  std::vector<RunConfig> configs;
  for (const std::string& value : values) {
    std::vector<std::string> all = overrides;
    all.push_back(key + "=" + value);
    RunConfig cfg = parse_config(config_text, all);
    cfg.output_dir = base.output_dir / (key + "_" + value);
    configs.push_back(std::move(cfg));
  }

  std::mutex log_mutex;
  auto one = [&](const RunConfig& cfg) {
    std::ostringstream local;
    int code;
    try {
      code = run(cfg, local).exit_code;
    } catch (const std::exception& e) {
      local << "error: " << e.what() << '\n';
      code = kExitConfig;
    }
    const std::lock_guard lock(log_mutex);
    log << local.str();
    return code;
  };

  jobs = std::max(1u, jobs);
  int worst = kExitOk;
  for (std::size_t start = 0; start < configs.size(); start += jobs) {
    std::vector<std::future<int>> batch;
    for (std::size_t k = start; k < std::min(configs.size(), start + jobs); ++k) {
      batch.push_back(std::async(std::launch::async, one, std::cref(configs[k])));
    }
    for (auto& f : batch) worst = std::max(worst, f.get());
  }
  return worst;
}

}  // namespace lagns
