#include "lagns/integrate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace lagns {

void StepControl::validate() const {
  auto in_unit = [](double x) { return x > 0.0 && x <= 1.0; };
  if (!in_unit(cfl_hyperbolic) || !in_unit(cfl_parabolic)) {
    throw ConfigError("CFL safety factors must lie in (0, 1]");
  }
  if (!(dt_min > 0.0) || !(dt_max >= dt_min) || !std::isfinite(dt_max)) {
    throw ConfigError("step limits need 0 < dt_min <= dt_max");
  }
  if (!(positivity_floor > 0.0)) throw ConfigError("positivity floor must be positive");
}

double stable_dt(const FluidState& state, const MassGrid& grid, const GasParams& params,
                 const StepControl& ctrl) {
  const double dm = grid.dm();
  const double gamma = params.R / params.c_v + 1.0;
  double dt = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < state.v.size(); ++j) {
    const double v = state.v[j];
    const double th = state.theta[j];
    if (!(v > 0.0) || !(th > 0.0)) {
      throw StiffnessError("stable_dt: nonpositive v or theta in cell " + std::to_string(j), 0.0);
    }
    const double c = std::sqrt(params.R * th * gamma) / v;
    const double diffusivity = std::max(params.mu / v, params.kappa / (params.c_v * v));
    dt = std::min(dt, ctrl.cfl_hyperbolic * dm / c);
    dt = std::min(dt, ctrl.cfl_parabolic * dm * dm / (2.0 * diffusivity));
  }
  if (!(dt >= ctrl.dt_min)) {
    std::ostringstream os;
    os << "stable step " << dt << " fell below dt_min " << ctrl.dt_min << " at t=" << state.t;
    throw StiffnessError(os.str(), dt);
  }
  return std::min(dt, ctrl.dt_max);
}

namespace {

void check_stage(const FluidState& s, int stage, double floor) {
  if (auto bad = validate_state(s, floor)) {
    std::ostringstream os;
    os << "positivity lost at t=" << s.t << " in RK stage " << stage << ": " << bad->describe();
    throw IntegrationError(os.str(), s.t, stage, bad);
  }
}

// out = a * x + b * (y + dt * k), elementwise over all three fields.
void combine(FluidState& out, double a, const FluidState& x, double b, const FluidState& y,
             double dt, const StateDerivative& k) {
  const std::size_t n = x.v.size();
  out.v.resize(n);
  out.theta.resize(n);
  out.u.resize(n + 1);
  for (std::size_t j = 0; j < n; ++j) {
    out.v[j] = a * x.v[j] + b * (y.v[j] + dt * k.dv[j]);
    out.theta[j] = a * x.theta[j] + b * (y.theta[j] + dt * k.dtheta[j]);
  }
  for (std::size_t i = 0; i <= n; ++i) out.u[i] = a * x.u[i] + b * (y.u[i] + dt * k.du[i]);
}

}  // namespace

StepResult step(const FluidState& state, double dt, const StepContext& ctx) {
  if (!(dt > 0.0)) throw ConfigError("step needs dt > 0");
  const GasParams& p = ctx.params;
  const MassGrid& g = ctx.grid;
  const double floor = ctx.control.positivity_floor;

  StateDerivative k;
  StateDerivative src;
  auto eval = [&](const FluidState& s, double t_stage) {
    const StateDerivative* forcing = nullptr;
    if (ctx.sources) {
      src = ctx.sources(t_stage);
      forcing = &src;
    }
    rhs_into(s, g, p, ctx.setup, forcing, k);
  };

  const double t0 = state.t;
  StepResult result;

  // Stage 1: t0
  eval(state, t0);
  const double b1 = boundary_energy_rate(state, g, p, ctx.setup);
  FluidState s1;
  combine(s1, 0.0, state, 1.0, state, dt, k);
  s1.t = t0 + dt;
  check_stage(s1, 1, floor);

  // Stage 2: t0 + dt
  eval(s1, t0 + dt);
  const double b2 = boundary_energy_rate(s1, g, p, ctx.setup);
  FluidState s2;
  combine(s2, 0.75, state, 0.25, s1, dt, k);
  s2.t = t0 + 0.5 * dt;
  check_stage(s2, 2, floor);

  // Stage 3: t0 + dt / 2
  eval(s2, t0 + 0.5 * dt);
  const double b3 = boundary_energy_rate(s2, g, p, ctx.setup);
  combine(result.state, 1.0 / 3.0, state, 2.0 / 3.0, s2, dt, k);
  result.state.t = t0 + dt;
  check_stage(result.state, 3, floor);

  result.boundary_energy_in = dt * (b1 / 6.0 + b2 / 6.0 + 2.0 * b3 / 3.0);
  return result;
}

AdvanceResult advance(const FluidState& state, double t_end, const StepContext& ctx,
                      Auditor& auditor, const AdvanceOptions& options) {
  if (!(t_end >= state.t)) throw ConfigError("advance needs t_end >= current time");
  if (options.audit_every < 0.0) throw ConfigError("audit cadence must be nonnegative");

  AdvanceResult out{state, 0};
  FluidState& s = out.state;

  auto emit = [&] {
    const std::size_t before = auditor.records().size();
    const AuditRecord& r = auditor.record(s);
    if (options.on_record && auditor.records().size() != before) options.on_record(s, r);
  };
  if (auditor.empty()) emit();

  // Absolute tolerance for landing on cadence ticks and t_end.
  const double eps = 1e-12 * std::max(1.0, std::abs(t_end));
  double tick_index = 0.0;
  double next_tick = t_end;
  if (options.audit_every > 0.0) {
    tick_index = std::floor((s.t + eps) / options.audit_every) + 1.0;
    next_tick = std::min(t_end, tick_index * options.audit_every);
  }

  while (t_end - s.t > eps) {
    double dt;
    try {
      dt = stable_dt(s, ctx.grid, ctx.params, ctx.control);
    } catch (const StiffnessError& e) {
      throw IntegrationError(e.what(), s.t, 0, std::nullopt);
    }
    const double stop = options.audit_every > 0.0 ? next_tick : t_end;
    bool landed = false;
    if (s.t + dt >= stop - eps) {
      dt = stop - s.t;
      landed = true;
    }

    StepResult r = step(s, dt, ctx);
    auditor.add_boundary_energy(r.boundary_energy_in);
    s = std::move(r.state);
    if (landed) s.t = stop;
    ++out.steps;
    if (options.on_step) options.on_step(s);

    if (options.audit_every == 0.0 || landed) emit();
    if (landed && options.audit_every > 0.0) {
      tick_index += 1.0;
      next_tick = std::min(t_end, tick_index * options.audit_every);
    }
  }
  // Make sure the final state is recorded even if the loop did not run.
  emit();
  return out;
}

}  // namespace lagns
