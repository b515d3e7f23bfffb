// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any FAIL.
#include <algorithm>
#include <array>
#include <cstdarg>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <future>
#include <string>
#include <vector>

#include "lagns/diagnostics.hpp"
#include "lagns/integrate.hpp"
#include "lagns/scheme.hpp"
#include "lagns/verification.hpp"
#include "oracle.hpp"
#include "random_state.hpp"

using namespace lagns;

namespace {

// Pinned tolerances.
constexpr double kSteadyTol = 1e-12;
constexpr double kSteadySeconds = 5.0;
constexpr double kMmsOrder = 1.9;
constexpr double kMmsSeconds = 120.0;
constexpr double kEnergyRelTol = 1e-3;
constexpr double kEnergyAbsTol = 1e-6;
constexpr double kBracketInflation = 1.10;
constexpr double kThetaFloor = 0.05;
constexpr double kDecayFraction = 0.10;
constexpr double kTailJitter = 0.01;
constexpr double kTailShare = 0.20;
constexpr double kPlateauGrowth = 0.01;
constexpr double kEmbeddingSlack = 1e-3;
constexpr double kOracleRelTol = 1e-12;
constexpr double kWallRatio = 0.6;

// Large-data run: min theta0 = 0.2, max v0 = 3 on a cell centre.
constexpr double kLargeL = 100.0;
constexpr long long kLargeN = 1024;
constexpr double kLargeEarly = 20.0;
constexpr double kLargeEnd = 100.0;

int failures = 0;

void report(const char* id, bool pass, const std::string& detail) {
  std::printf("%s %s %s\n", id, pass ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

std::string fmt(const char* f, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

const SetupKind kAllSetups[] = {SetupKind::Cauchy, SetupKind::HalfLineInsulated,
                                SetupKind::HalfLineIsothermal};

// ---------------------------------------------------------------------------

void steady_exactness() {
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0.0;
  for (SetupKind k : kAllSetups) {
    const StepContext ctx{make_grid({k}, 10.0, 256), GasParams{}, {k}, StepControl{}, {}};
    FluidState s = steady_state(ctx.grid);
    for (int n = 0; n < 1000; ++n) {
      s = step(s, stable_dt(s, ctx.grid, ctx.params, ctx.control), ctx).state;
    }
    for (double x : s.v) worst = std::max(worst, std::abs(x - 1.0));
    for (double x : s.theta) worst = std::max(worst, std::abs(x - 1.0));
    for (double x : s.u) worst = std::max(worst, std::abs(x));
  }
  const double secs = seconds_since(t0);
  report("AC1", worst <= kSteadyTol && secs < kSteadySeconds,
         fmt("steady state, 1000 steps x 3 setups, n=256: max deviation %.3g (<= %g), %.2f s (< %g s)",
             worst, kSteadyTol, secs, kSteadySeconds));
}

void mms_order() {
  const auto t0 = std::chrono::steady_clock::now();
  bool pass = true;
  std::string detail = "MMS orders (v,u,theta), n=64..512:";
  for (SetupKind k : kAllSetups) {
    const ConvergenceReport r = convergence_study(ManufacturedSolution::standard(k), {k},
                                                  GasParams{}, {64, 128, 256, 512}, 0.1, 8.0);
    if (!r.orders) {
      pass = false;
      detail += fmt(" %s=none", to_string(k));
      continue;
    }
    const auto& o = *r.orders;
    pass = pass && r.passes(kMmsOrder);
    detail += fmt(" %s=(%.3f,%.3f,%.3f)", to_string(k), o[0], o[1], o[2]);
  }
  const double secs = seconds_since(t0);
  pass = pass && secs < kMmsSeconds;
  report("AC2", pass, detail + fmt(" >= %g; %.1f s (< %g s)", kMmsOrder, secs, kMmsSeconds));
}

// ---------------------------------------------------------------------------

struct LargeRun {
  std::vector<AuditRecord> records;
  double max_embedding_ratio = 0.0;  // max over records and fields of lhs / rhs
  std::size_t steps = 0;
};

FluidState large_data(const MassGrid& g) {
  InitialDataSpec spec;
  spec.amplitude_v = 2.0;
  spec.amplitude_theta = -0.8;
  spec.width = 1.0;
  spec.center = g.cell_center(g.n_cells() / 2);
  return build_initial_data(spec, {SetupKind::Cauchy}, g);
}

LargeRun large_run(double t_end, double cfl, bool check_embedding) {
  StepControl c;
  c.cfl_hyperbolic = cfl;
  c.cfl_parabolic = cfl;
  const StepContext ctx{make_grid({SetupKind::Cauchy}, kLargeL, kLargeN), GasParams{},
                        {SetupKind::Cauchy}, c, {}};
  Auditor a(ctx.params, ctx.grid);
  LargeRun out;
  AdvanceOptions opts;  // a record after every step
  if (check_embedding) {
    opts.on_record = [&](const FluidState& s, const AuditRecord&) {
      const std::size_t n = s.v.size();
      std::vector<double> w(n);
      auto check = [&] {
        const EmbeddingCheck e = sup_embedding_check(w, ctx.grid);
        if (e.lhs > 0.0) out.max_embedding_ratio = std::max(out.max_embedding_ratio, e.lhs / e.rhs);
      };
      for (std::size_t j = 0; j < n; ++j) w[j] = s.v[j] - 1.0;
      check();
      w = cell_velocity(s);
      check();
      for (std::size_t j = 0; j < n; ++j) w[j] = s.theta[j] - 1.0;
      check();
    };
  }
  out.steps = advance(large_data(ctx.grid), t_end, ctx, a, opts).steps;
  out.records = a.records();
  return out;
}

struct EnergyAudit {
  double worst_excess = -INFINITY;  // max of E + cum_D - bound
  double positive_excess = 0.0;     // max(0, E + cum_D - E0)
  bool dissipation_nonnegative = true;
  double final_residual = 0.0;
};

EnergyAudit energy_audit(const std::vector<AuditRecord>& recs, double t_max) {
  EnergyAudit e;
  const double E0 = recs.front().E;
  const double bound = E0 * (1.0 + kEnergyRelTol) + kEnergyAbsTol;
  for (const AuditRecord& r : recs) {
    if (r.t > t_max) break;
    e.worst_excess = std::max(e.worst_excess, r.E + r.cum_D - bound);
    e.positive_excess = std::max(e.positive_excess, r.E + r.cum_D - E0);
    e.dissipation_nonnegative = e.dissipation_nonnegative && r.D_visc >= 0.0 && r.D_heat >= 0.0;
    e.final_residual = r.energy_balance_residual;
  }
  return e;
}

void energetic_estimate(const LargeRun& coarse, const LargeRun& fine) {
  const EnergyAudit a = energy_audit(coarse.records, kLargeEarly);
  const EnergyAudit b = energy_audit(fine.records, kLargeEarly);
  const bool within = a.worst_excess <= 0.0 && b.worst_excess <= 0.0;
  const bool signs = a.dissipation_nonnegative && b.dissipation_nonnegative;
  const bool halves = b.positive_excess <= 0.5 * a.positive_excess &&
                      std::abs(b.final_residual) <= 0.5 * std::abs(a.final_residual);
  const double E0 = coarse.records.front().E;
  report("AC3", within && signs && halves,
         fmt("E+cum_D vs E0(1+%g)+%g over t<=%g: E0=%.6g, max(E+cum_D-E0) cfl0.4=%.3g cfl0.2=%.3g; "
             "D>=0 at every record: %s; energy residual %.3g -> %.3g under dt/2 (must halve)",
             kEnergyRelTol, kEnergyAbsTol, kLargeEarly, E0, a.positive_excess,
             b.positive_excess, signs ? "yes" : "no", a.final_residual, b.final_residual));
}

void uniform_bounds(const LargeRun& run) {
  double v_lo = INFINITY, v_hi = 0.0, th_lo = INFINITY, th_hi = 0.0;
  for (const AuditRecord& r : run.records) {
    if (r.t > kLargeEarly) break;
    v_lo = std::min(v_lo, r.v_min);
    v_hi = std::max(v_hi, r.v_max);
    th_lo = std::min(th_lo, r.theta_min);
    th_hi = std::max(th_hi, r.theta_max);
  }
  double all_v_lo = INFINITY, all_v_hi = 0.0, all_th_lo = INFINITY, all_th_hi = 0.0;
  for (const AuditRecord& r : run.records) {
    all_v_lo = std::min(all_v_lo, r.v_min);
    all_v_hi = std::max(all_v_hi, r.v_max);
    all_th_lo = std::min(all_th_lo, r.theta_min);
    all_th_hi = std::max(all_th_hi, r.theta_max);
  }
  const bool inside = all_v_lo >= v_lo / kBracketInflation && all_v_hi <= v_hi * kBracketInflation &&
                      all_th_lo >= th_lo / kBracketInflation &&
                      all_th_hi <= th_hi * kBracketInflation;
  const bool floor_ok = all_th_lo > kThetaFloor;
  report("AC4", inside && floor_ok,
         fmt("t<=%g brackets v [%.4f, %.4f] theta [%.4f, %.4f]; t<=%g v [%.4f, %.4f] theta "
             "[%.4f, %.4f]; inflation %g; theta_min > %g",
             kLargeEarly, v_lo, v_hi, th_lo, th_hi, kLargeEnd, all_v_lo, all_v_hi, all_th_lo,
             all_th_hi, kBracketInflation, kThetaFloor));
}

void decay(const LargeRun& run) {
  const auto& recs = run.records;
  double max_inf = 0.0;
  std::array<double, 3> max_h1{};
  for (const AuditRecord& r : recs) {
    max_inf = std::max(max_inf, r.lpinf_dev);
    for (int k = 0; k < 3; ++k) max_h1[k] = std::max(max_h1[k], r.h1[k]);
  }
  const AuditRecord& last = recs.back();
  bool decayed = last.t == kLargeEnd && last.lpinf_dev < kDecayFraction * max_inf;
  for (int k = 0; k < 3; ++k) decayed = decayed && last.h1[k] < kDecayFraction * max_h1[k];

  const std::size_t start = recs.size() - static_cast<std::size_t>(kTailShare * recs.size());
  double running_min = recs[start].lpinf_dev;
  double worst_rise = 0.0;
  for (std::size_t i = start; i < recs.size(); ++i) {
    worst_rise = std::max(worst_rise, recs[i].lpinf_dev / running_min - 1.0);
    running_min = std::min(running_min, recs[i].lpinf_dev);
  }
  const bool monotone = worst_rise <= kTailJitter;
  report("AC5", decayed && monotone,
         fmt("at t=%g: Linf %.3g%% of max, H1 (v_x,u_x,theta_x) %.3g%%, %.3g%%, %.3g%% of max "
             "(< %g%%); last %g%% of %zu records: worst rise over running min %.3g%% (<= %g%%)",
             last.t, 100 * last.lpinf_dev / max_inf, 100 * last.h1[0] / max_h1[0],
             100 * last.h1[1] / max_h1[1], 100 * last.h1[2] / max_h1[2], 100 * kDecayFraction,
             100 * kTailShare, recs.size(), 100 * worst_rise, 100 * kTailJitter));
}

void df8_plateau() {
  auto one = [](std::uint64_t seed) {
    const StepContext ctx{make_grid({SetupKind::Cauchy}, kLargeL, kLargeN), GasParams{},
                          {SetupKind::Cauchy}, StepControl{}, {}};
    InitialDataSpec spec;
    spec.family = InitialFamily::RandomSmooth;
    spec.amplitude_v = 0.8;
    spec.amplitude_u = 1.0;
    spec.amplitude_theta = 0.8;
    spec.width = 2.0;
    spec.seed = seed;
    Auditor a(ctx.params, ctx.grid);
    AdvanceOptions opts;
    opts.audit_every = 0.1;
    advance(build_initial_data(spec, ctx.setup, ctx.grid), kLargeEnd, ctx, a, opts);
    const auto& recs = a.records();
    const std::size_t start = recs.size() - static_cast<std::size_t>(kTailShare * recs.size());
    const double total = recs.back().cum_df8;
    return (total - recs[start].cum_df8) / total;
  };
  const std::uint64_t seeds[] = {1, 2, 3};
  std::vector<std::future<double>> jobs;
  for (std::uint64_t s : seeds) jobs.push_back(std::async(std::launch::async, one, s));
  bool pass = true;
  std::string detail = "cum_df8 growth over the last 20% of records, t<=100:";
  for (std::size_t k = 0; k < jobs.size(); ++k) {
    const double g = jobs[k].get();
    pass = pass && g < kPlateauGrowth;
    detail += fmt(" seed %llu %.3f%%", static_cast<unsigned long long>(seeds[k]), 100 * g);
  }
  report("AC6", pass, detail + fmt(" (< %g%%)", 100 * kPlateauGrowth));
}

void embedding(const LargeRun& run) {
  const bool pass = run.max_embedding_ratio <= 1.0 + kEmbeddingSlack;
  report("AC7", pass,
         fmt("sup w^2 <= 2|w||w_x| for w in {v-1, ubar, theta-1} on %zu records: max lhs/rhs %.4f "
             "(<= 1 + %g)",
             run.records.size(), run.max_embedding_ratio, kEmbeddingSlack));
}

// ---------------------------------------------------------------------------

void oracle_equivalence() {
  const GasParams p{0.9, 1.3, 1.1, 0.7};
  const MassGrid g = make_grid({SetupKind::Cauchy}, 2.0, 16);
  double worst = 0.0;
  auto rel = [&](double lib, long double ref) {
    const long double scale = std::max<long double>(1e-300L, std::fabs(ref));
    worst = std::max(worst, static_cast<double>(std::fabs(lib - ref) / scale));
  };
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const FluidState s = testgen::random_state(16, seed, 0.3, 4.0);
    const oracle::All o = oracle::evaluate(s, p, g.dm());
    rel(entropy_energy(s, p, g), o.E);
    const Dissipation d = dissipation_rates(s, p, g);
    rel(d.viscous, o.D_visc);
    rel(d.heat, o.D_heat);
    rel(lp_deviation(s, g, 2.0), o.lp2);
    rel(lp_deviation(s, g, 3.0), o.lp3);
    rel(lp_deviation(s, g, kInfinityNorm), o.lpinf);
    const GradientNorms h = h1_seminorms(s, g);
    rel(h.v_x, o.vx);
    rel(h.u_x, o.ux);
    rel(h.theta_x, o.thx);
    rel(h.u_xx, o.uxx);
    rel(h.theta_xx, o.thxx);
    rel(df8_rate(s, g, p), o.df8);
    rel(z4_rate(s, g), o.z4);
    rel(velocity_fourth_moment(s, g), o.u4);
    rel(truncated_excess(s, g, 1.5).excess, o.excess15);
    rel(truncated_excess(s, g, 1.5).omega_measure, o.omega15);
    rel(truncated_excess(s, g, 2.0).excess, o.excess2);
    rel(truncated_excess(s, g, 2.0).omega_measure, o.omega2);
    rel(truncated_excess(s, g, 3.0).excess, o.excess3);
    rel(truncated_excess(s, g, 3.0).omega_measure, o.omega3);
    rel(sup_theta_excess(s), o.sup_excess);
  }

  // Single velocity hat on dm = 0.25 with mu = R = c_v = 1.
  const GasParams unit{1.0, 1.0, 1.0, 1.0};
  const MassGrid hg = make_grid({SetupKind::Cauchy}, 1.0, 8);
  FluidState hat = steady_state(hg);
  hat.u[4] = 0.5;
  const StateDerivative r = rhs(hat, hg, unit, {SetupKind::Cauchy});
  const std::vector<double> dv = {0, 0, 0, 2, -2, 0, 0, 0};
  const std::vector<double> du = {0, 0, 0, 8, -16, 8, 0, 0, 0};
  const std::vector<double> dth = {0, 0, 0, 2, 6, 0, 0, 0};
  const bool exact = r.dv == dv && r.du == du && r.dtheta == dth;

  report("AC8", worst <= kOracleRelTol && exact,
         fmt("10 random n=16 states: worst relative gap to brute force %.3g (<= %g); single-hat "
             "rhs exact: %s",
             worst, kOracleRelTol, exact ? "yes" : "no"));
}

void boundary_fidelity() {
  const GasParams p{};
  InitialDataSpec spec;
  spec.amplitude_v = 1.0;
  spec.amplitude_u = 0.8;
  spec.amplitude_theta = 1.5;
  spec.center = 2.0;

  // Insulated wall: zero flux and pinned velocity at every step.
  bool flux_zero = true, u_pinned = true;
  std::size_t steps = 0;
  {
    const ProblemSetup setup{SetupKind::HalfLineInsulated};
    const StepContext ctx{make_grid(setup, 20.0, 512), p, setup, StepControl{}, {}};
    Auditor a(p, ctx.grid);
    AdvanceOptions opts;
    opts.audit_every = 0.5;
    opts.on_step = [&](const FluidState& s) {
      flux_zero = flux_zero && heat_flux_faces(s, ctx.grid, closure_for(setup), p.kappa)[0] == 0.0;
      u_pinned = u_pinned && s.u[0] == 0.0;
      ++steps;
    };
    advance(build_initial_data(spec, setup, ctx.grid), 5.0, ctx, a, opts);
  }

  // Isothermal wall: first-cell temperature within O(dm) of 1.
  const ProblemSetup iso{SetupKind::HalfLineIsothermal};
  std::vector<double> gaps;
  for (long long n : {256LL, 512LL, 1024LL}) {
    const StepContext ctx{make_grid(iso, 20.0, n), p, iso, StepControl{}, {}};
    Auditor a(p, ctx.grid);
    AdvanceOptions opts;
    opts.audit_every = 0.5;
    opts.on_step = [&](const FluidState& s) {
      u_pinned = u_pinned && s.u[0] == 0.0;
      ++steps;
    };
    const FluidState s = advance(build_initial_data(spec, iso, ctx.grid), 1.0, ctx, a, opts).state;
    gaps.push_back(std::abs(s.theta[0] - 1.0));
  }
  const bool converging = gaps[0] > 0.0 && gaps[1] <= kWallRatio * gaps[0] &&
                          gaps[2] <= kWallRatio * gaps[1];

  report("AC9", flux_zero && u_pinned && converging,
         fmt("insulated wall flux == 0 every step: %s; wall u == 0 every step (%zu steps): %s; "
             "isothermal |theta_0 - 1| at t=1, n=256/512/1024: %.3g, %.3g, %.3g (ratio <= %g)",
             flux_zero ? "yes" : "no", steps, u_pinned ? "yes" : "no", gaps[0], gaps[1], gaps[2],
             kWallRatio));
}

}  // namespace

int main() {
  try {
    steady_exactness();
    mms_order();

    // The long large-data run and its dt/2 companion (to t = 20) run concurrently.
    auto fine = std::async(std::launch::async, [] { return large_run(kLargeEarly, 0.2, false); });
    const LargeRun coarse = large_run(kLargeEnd, 0.4, true);
    energetic_estimate(coarse, fine.get());
    uniform_bounds(coarse);
    decay(coarse);
    df8_plateau();
    embedding(coarse);
    oracle_equivalence();
    boundary_fidelity();
  } catch (const std::exception& e) {
    std::printf("acceptance aborted: %s\n", e.what());
    return 2;
  }
  std::printf("%s: %d criterion(s) failed\n", failures == 0 ? "ALL PASS" : "FAILED", failures);
  return failures == 0 ? 0 : 1;
}
