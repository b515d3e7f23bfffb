#include "lagns/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace lagns {

namespace {

void require_positive(const FluidState& state, const char* what) {
  for (std::size_t j = 0; j < state.v.size(); ++j) {
    if (!(state.v[j] > 0.0) || !(state.theta[j] > 0.0)) {
      throw DomainError(std::string(what) + " needs v > 0 and theta > 0 (cell " +
                        std::to_string(j) + ")");
    }
  }
}

double relative_entropy(double s) { return s - std::log(s) - 1.0; }

}  // namespace

std::vector<double> cell_velocity(const FluidState& state) {
  std::vector<double> ubar(state.v.size());
  for (std::size_t j = 0; j < ubar.size(); ++j) ubar[j] = 0.5 * (state.u[j] + state.u[j + 1]);
  return ubar;
}

double entropy_energy(const FluidState& state, const GasParams& params, const MassGrid& grid) {
  require_positive(state, "entropy_energy");
  double sum = 0.0;
  for (std::size_t j = 0; j < state.v.size(); ++j) {
    const double ubar = 0.5 * (state.u[j] + state.u[j + 1]);
    sum += 0.5 * ubar * ubar + params.R * relative_entropy(state.v[j]) +
           params.c_v * relative_entropy(state.theta[j]);
  }
  return sum * grid.dm();
}

Dissipation dissipation_rates(const FluidState& state, const GasParams& params,
                              const MassGrid& grid) {
  require_positive(state, "dissipation_rates");
  const std::size_t n = state.v.size();
  const double dm = grid.dm();
  Dissipation d;
  for (std::size_t j = 0; j < n; ++j) {
    const double s = (state.u[j + 1] - state.u[j]) / dm;
    d.viscous += params.mu * s * s / (state.v[j] * state.theta[j]);
  }
  for (std::size_t i = 1; i < n; ++i) {
    const double gx = (state.theta[i] - state.theta[i - 1]) / dm;
    const double v_face = 0.5 * (state.v[i] + state.v[i - 1]);
    const double th_face = 0.5 * (state.theta[i] + state.theta[i - 1]);
    d.heat += params.kappa * gx * gx / (v_face * th_face * th_face);
  }
  d.viscous *= dm;
  d.heat *= dm;
  return d;
}

FieldBounds field_bounds(const FluidState& state) {
  const auto [vmin, vmax] = std::minmax_element(state.v.begin(), state.v.end());
  const auto [tmin, tmax] = std::minmax_element(state.theta.begin(), state.theta.end());
  return {*vmin, *vmax, *tmin, *tmax};
}

double lp_deviation(const FluidState& state, const MassGrid& grid, double p) {
  if (!(p > 1.0)) throw DomainError("lp_deviation needs p > 1");
  const std::size_t n = state.v.size();
  if (std::isinf(p)) {
    double m = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double ubar = 0.5 * (state.u[j] + state.u[j + 1]);
      m = std::max({m, std::abs(state.v[j] - 1.0), std::abs(ubar), std::abs(state.theta[j] - 1.0)});
    }
    return m;
  }
  // Scale by the sup-norm so large p does not overflow.
  const double scale = lp_deviation(state, grid, kInfinityNorm);
  if (scale == 0.0) return 0.0;
  double sum = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double ubar = 0.5 * (state.u[j] + state.u[j + 1]);
    sum += std::pow(std::abs(state.v[j] - 1.0) / scale, p) + std::pow(std::abs(ubar) / scale, p) +
           std::pow(std::abs(state.theta[j] - 1.0) / scale, p);
  }
  return scale * std::pow(sum * grid.dm(), 1.0 / p);
}

GradientNorms h1_seminorms(const FluidState& state, const MassGrid& grid) {
  const std::size_t n = state.v.size();
  const double dm = grid.dm();
  GradientNorms g;
  for (std::size_t i = 1; i < n; ++i) {
    const double vx = (state.v[i] - state.v[i - 1]) / dm;
    const double tx = (state.theta[i] - state.theta[i - 1]) / dm;
    g.v_x += vx * vx;
    g.theta_x += tx * tx;
  }
  std::vector<double> s(n);
  for (std::size_t j = 0; j < n; ++j) {
    s[j] = (state.u[j + 1] - state.u[j]) / dm;
    g.u_x += s[j] * s[j];
  }
  for (std::size_t i = 1; i < n; ++i) {
    const double uxx = (s[i] - s[i - 1]) / dm;
    g.u_xx += uxx * uxx;
  }
  for (std::size_t j = 1; j + 1 < n; ++j) {
    const double right = (state.theta[j + 1] - state.theta[j]) / dm;
    const double left = (state.theta[j] - state.theta[j - 1]) / dm;
    const double txx = (right - left) / dm;
    g.theta_xx += txx * txx;
  }
  g.v_x = std::sqrt(g.v_x * dm);
  g.u_x = std::sqrt(g.u_x * dm);
  g.theta_x = std::sqrt(g.theta_x * dm);
  g.u_xx = std::sqrt(g.u_xx * dm);
  g.theta_xx = std::sqrt(g.theta_xx * dm);
  return g;
}

TruncatedExcess truncated_excess(const FluidState& state, const MassGrid& grid, double a) {
  if (!(a > 1.0)) throw DomainError("truncated_excess needs a > 1");
  TruncatedExcess r;
  std::size_t count = 0;
  for (double th : state.theta) {
    if (th > a) {
      r.excess += (th - a) * (th - a);
      ++count;
    }
  }
  r.excess *= grid.dm();
  r.omega_measure = grid.dm() * static_cast<double>(count);
  return r;
}

double sup_theta_excess(const FluidState& state) {
  double m = 0.0;
  for (double th : state.theta) {
    const double e = std::max(th - 1.5, 0.0);
    m = std::max(m, e * e);
  }
  return m;
}

EmbeddingCheck sup_embedding_check(const std::vector<double>& field, const MassGrid& grid) {
  const double dm = grid.dm();
  const std::size_t n = field.size();
  EmbeddingCheck c;
  double l2 = 0.0;
  double dx2 = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    c.lhs = std::max(c.lhs, field[j] * field[j]);
    l2 += field[j] * field[j];
    const double next = j + 1 < n ? field[j + 1] : 0.0;
    const double d = (next - field[j]) / dm;
    dx2 += d * d;
  }
  c.rhs = 2.0 * std::sqrt(l2 * dm) * std::sqrt(dx2 * dm);
  return c;
}

double df8_rate(const FluidState& state, const MassGrid& grid, const GasParams& /*params*/) {
  const std::size_t n = state.v.size();
  const double dm = grid.dm();
  double sum = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double s = (state.u[j + 1] - state.u[j]) / dm;
    const double ubar = 0.5 * (state.u[j] + state.u[j + 1]);
    sum += (1.0 + state.theta[j] + ubar * ubar) * s * s;
  }
  for (std::size_t i = 1; i < n; ++i) {
    const double tx = (state.theta[i] - state.theta[i - 1]) / dm;
    sum += tx * tx;
  }
  return sum * dm;
}

double z4_rate(const FluidState& state, const MassGrid& grid) {
  const std::size_t n = state.v.size();
  const double dm = grid.dm();
  double sum = 0.0;
  for (std::size_t i = 1; i < n; ++i) {
    const double vx = (state.v[i] - state.v[i - 1]) / dm;
    const double th_face = 0.5 * (state.theta[i] + state.theta[i - 1]);
    sum += th_face * vx * vx;
  }
  const GradientNorms g = h1_seminorms(state, grid);
  return sum * dm + g.u_xx * g.u_xx + g.theta_xx * g.theta_xx;
}

double velocity_fourth_moment(const FluidState& state, const MassGrid& grid) {
  double sum = 0.0;
  for (std::size_t j = 0; j < state.v.size(); ++j) {
    const double ubar = 0.5 * (state.u[j] + state.u[j + 1]);
    sum += ubar * ubar * ubar * ubar;
  }
  return sum * grid.dm();
}

double energy_balance_residual(double total_energy_now, double total_energy_initial,
                               double boundary_energy_in) {
  return (total_energy_now - total_energy_initial - boundary_energy_in) / total_energy_initial;
}

Auditor::Auditor(GasParams params, MassGrid grid, std::vector<double> excess_thresholds)
    : params_(params), grid_(grid), thresholds_(std::move(excess_thresholds)) {
  for (double a : thresholds_) {
    if (!(a > 1.0)) throw ConfigError("excess thresholds must exceed 1");
  }
}

const AuditRecord& Auditor::record(const FluidState& state) {
  if (!records_.empty() && !(state.t > records_.back().t)) return records_.back();

  AuditRecord r;
  r.t = state.t;
  r.E = entropy_energy(state, params_, grid_);
  const Dissipation d = dissipation_rates(state, params_, grid_);
  r.D_visc = d.viscous;
  r.D_heat = d.heat;
  const FieldBounds b = field_bounds(state);
  r.v_min = b.v_min;
  r.v_max = b.v_max;
  r.theta_min = b.theta_min;
  r.theta_max = b.theta_max;
  r.lp2_dev = lp_deviation(state, grid_, 2.0);
  r.lpinf_dev = lp_deviation(state, grid_, kInfinityNorm);
  const GradientNorms g = h1_seminorms(state, grid_);
  r.h1 = {g.v_x, g.u_x, g.theta_x};
  r.u4 = velocity_fourth_moment(state, grid_);
  for (double a : thresholds_) {
    const TruncatedExcess e = truncated_excess(state, grid_, a);
    r.excess_a.push_back(e.excess);
    r.omega_a.push_back(e.omega_measure);
  }
  r.sup_theta_excess = sup_theta_excess(state);

  const double d_now = d.viscous + d.heat;
  const double df8_now = df8_rate(state, grid_, params_);
  const double z4_now = z4_rate(state, grid_);
  const double e_total = total_energy(state, grid_, params_);

  if (records_.empty()) {
    initial_total_energy_ = e_total;
    boundary_energy_in_ = 0.0;
  } else {
    const AuditRecord& prev = records_.back();
    const double h = r.t - prev.t;
    r.cum_D = prev.cum_D + 0.5 * h * (last_d_ + d_now);
    r.cum_df8 = prev.cum_df8 + 0.5 * h * (last_df8_ + df8_now);
    r.cum_z4 = prev.cum_z4 + 0.5 * h * (last_z4_ + z4_now);
  }
  r.energy_balance_residual =
      energy_balance_residual(e_total, initial_total_energy_, boundary_energy_in_);

  last_d_ = d_now;
  last_df8_ = df8_now;
  last_z4_ = z4_now;
  records_.push_back(std::move(r));
  return records_.back();
}

namespace {

std::string threshold_label(double a) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", a);
  return buf;
}

void append_number(std::string& out, double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  out += buf;
}

}  // namespace

std::vector<std::string> audit_csv_columns(const std::vector<double>& excess_thresholds) {
  std::vector<std::string> cols = {
      "t",
      "E_eq2.12",
      "D_visc_eq2.12",
      "D_heat_eq2.12",
      "cum_D_eq2.12",
      "v_min_eqc",
      "v_max_eqc",
      "theta_min_eqc2",
      "theta_max_eqc2",
      "lp2_dev_eqc3",
      "lpinf_dev_eqc3",
      "vx_L2_eqc3",
      "ux_L2_eqc3",
      "thetax_L2_eqc3",
      "cum_df8_eqdf8",
      "u4_int_eqdf8",
      "cum_z4_eqz4",
  };
  for (double a : excess_thresholds) {
    const std::string label = threshold_label(a);
    cols.push_back("excess_a" + label + "_eqnep1");
    cols.push_back("omega_a" + label + "_eqnep1");
  }
  cols.push_back("sup_theta_excess_eqlia5");
  cols.push_back("energy_residual_eq1.3p");
  return cols;
}

std::string audit_csv_header(const std::vector<double>& excess_thresholds) {
  std::string out;
  for (const std::string& c : audit_csv_columns(excess_thresholds)) {
    if (!out.empty()) out += ',';
    out += c;
  }
  return out;
}

std::string audit_csv_row(const AuditRecord& r) {
  std::string out;
  out.reserve(512);
  const double fixed[] = {r.t,       r.E,       r.D_visc,  r.D_heat,    r.cum_D,     r.v_min,
                          r.v_max,   r.theta_min, r.theta_max, r.lp2_dev, r.lpinf_dev, r.h1[0],
                          r.h1[1],   r.h1[2],   r.cum_df8, r.u4,        r.cum_z4};
  bool first = true;
  auto push = [&](double x) {
    if (!first) out += ',';
    first = false;
    append_number(out, x);
  };
  for (double x : fixed) push(x);
  for (std::size_t k = 0; k < r.excess_a.size(); ++k) {
    push(r.excess_a[k]);
    push(r.omega_a[k]);
  }
  push(r.sup_theta_excess);
  push(r.energy_balance_residual);
  return out;
}

}  // namespace lagns
