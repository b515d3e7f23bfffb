#include "lagns/scheme.hpp"

#include <cmath>
#include <string>

namespace lagns {

StateDerivative StateDerivative::zeros(const MassGrid& grid) {
  StateDerivative d;
  d.dv.assign(grid.n_cells(), 0.0);
  d.du.assign(grid.n_nodes(), 0.0);
  d.dtheta.assign(grid.n_cells(), 0.0);
  return d;
}

GhostClosure closure_for(const ProblemSetup& setup) {
  GhostClosure g;  // defaults: far field on both edges
  switch (setup.kind) {
    case SetupKind::Cauchy:
      break;
    case SetupKind::HalfLineInsulated:
      g.left.wall = true;
      g.left.u = 0.0;
      g.left.temperature = TemperatureRule::ZeroGradient;
      g.left.v_zero_gradient = true;
      break;
    case SetupKind::HalfLineIsothermal:
      g.left.wall = true;
      g.left.u = 0.0;
      g.left.temperature = TemperatureRule::WallValue;
      g.left.theta = 1.0;
      g.left.v_zero_gradient = true;
      break;
  }
  return g;
}

double pressure(double v, double theta, double R) {
  if (!(v > 0.0) || !(theta > 0.0)) {
    throw DomainError("pressure needs v > 0 and theta > 0 (v=" + std::to_string(v) +
                      ", theta=" + std::to_string(theta) + ")");
  }
  return R * theta / v;
}

std::vector<double> strain_rate(const FluidState& state, const MassGrid& grid) {
  const std::size_t n = grid.n_cells();
  const double inv_dm = 1.0 / grid.dm();
  std::vector<double> s(n);
  for (std::size_t j = 0; j < n; ++j) s[j] = (state.u[j + 1] - state.u[j]) * inv_dm;
  return s;
}

namespace {

// Flux through an edge face; `sign` is +1 on the right edge (ghost on the
// right of the face) and -1 on the left edge.
double edge_heat_flux(const BoundaryRule& rule, double theta_in, double v_in, double dm,
                      double kappa, double sign) {
  const double v_out = rule.v_zero_gradient ? v_in : rule.v;
  switch (rule.temperature) {
    case TemperatureRule::ZeroGradient:
      return 0.0;
    case TemperatureRule::GhostValue:
      return sign * kappa * (rule.theta - theta_in) / (dm * 0.5 * (v_in + v_out));
    case TemperatureRule::WallValue:
      return sign * kappa * (rule.theta - theta_in) / (0.5 * dm * v_in);
  }
  return 0.0;
}

void heat_flux_into(const FluidState& state, const MassGrid& grid, const GhostClosure& ghost,
                    double kappa, std::vector<double>& q) {
  const std::size_t n = grid.n_cells();
  const double dm = grid.dm();
  q.resize(n + 1);
  for (std::size_t i = 1; i < n; ++i) {
    const double v_face = 0.5 * (state.v[i - 1] + state.v[i]);
    q[i] = kappa * (state.theta[i] - state.theta[i - 1]) / (dm * v_face);
  }
  q[0] = edge_heat_flux(ghost.left, state.theta[0], state.v[0], dm, kappa, -1.0);
  q[n] = edge_heat_flux(ghost.right, state.theta[n - 1], state.v[n - 1], dm, kappa, +1.0);
}

// Ghost-cell momentum flux -P + mu * strain / v beyond a far-field edge.
// `u_edge` is the velocity of the edge node; the ghost node holds rule.u.
double ghost_stress(const BoundaryRule& rule, double u_edge, double v_in, double dm,
                    const GasParams& p, double sign) {
  const double v_ghost = rule.v_zero_gradient ? v_in : rule.v;
  const double p_ghost = p.R * rule.theta / v_ghost;
  const double strain = sign * (rule.u - u_edge) / dm;
  return -p_ghost + p.mu * strain / v_ghost;
}

}  // namespace

std::vector<double> heat_flux_faces(const FluidState& state, const MassGrid& grid,
                                    const GhostClosure& ghost, double kappa) {
  std::vector<double> q;
  heat_flux_into(state, grid, ghost, kappa, q);
  return q;
}

void rhs_into(const FluidState& state, const MassGrid& grid, const GasParams& params,
              const ProblemSetup& setup, const StateDerivative* sources, StateDerivative& out) {
  const std::size_t n = grid.n_cells();
  const double dm = grid.dm();
  const double inv_dm = 1.0 / dm;
  const GhostClosure ghost = closure_for(setup);

  out.dv.resize(n);
  out.du.resize(n + 1);
  out.dtheta.resize(n);

  // Cell stress F_j = -P_j + mu * strain_j / v_j.
  thread_local std::vector<double> stress;
  thread_local std::vector<double> q;
  stress.resize(n);

  for (std::size_t j = 0; j < n; ++j) {
    const double v = state.v[j];
    const double th = state.theta[j];
    const double p = pressure(v, th, params.R);
    const double s = (state.u[j + 1] - state.u[j]) * inv_dm;
    out.dv[j] = s;
    stress[j] = -p + params.mu * s / v;
    // Work and viscous heating; conduction is added below.
    out.dtheta[j] = -p * s + params.mu * s * s / v;
  }

  heat_flux_into(state, grid, ghost, params.kappa, q);
  const double inv_cv = 1.0 / params.c_v;
  for (std::size_t j = 0; j < n; ++j) {
    out.dtheta[j] = (out.dtheta[j] + (q[j + 1] - q[j]) * inv_dm) * inv_cv;
  }

  for (std::size_t i = 1; i < n; ++i) out.du[i] = (stress[i] - stress[i - 1]) * inv_dm;

  const double right = ghost_stress(ghost.right, state.u[n], state.v[n - 1], dm, params, +1.0);
  out.du[n] = (right - stress[n - 1]) * inv_dm;
  if (ghost.left.wall) {
    out.du[0] = 0.0;
  } else {
    const double left = ghost_stress(ghost.left, state.u[0], state.v[0], dm, params, -1.0);
    out.du[0] = (stress[0] - left) * inv_dm;
  }

  if (sources != nullptr) {
    for (std::size_t j = 0; j < n; ++j) {
      out.dv[j] += sources->dv[j];
      out.dtheta[j] += sources->dtheta[j];
    }
    for (std::size_t i = 0; i <= n; ++i) out.du[i] += sources->du[i];
    if (ghost.left.wall) out.du[0] = 0.0;
  }
}

StateDerivative rhs(const FluidState& state, const MassGrid& grid, const GasParams& params,
                    const ProblemSetup& setup, const StateDerivative* sources) {
  if (!state.matches(grid)) throw ConfigError("state does not match grid");
  if (sources != nullptr && !sources->matches(grid)) {
    throw ConfigError("source terms do not match grid");
  }
  StateDerivative out;
  rhs_into(state, grid, params, setup, sources, out);
  return out;
}

EdgeStress edge_stress(const FluidState& state, const MassGrid& grid, const GasParams& params,
                       const ProblemSetup& setup) {
  const std::size_t n = grid.n_cells();
  const double dm = grid.dm();
  const GhostClosure ghost = closure_for(setup);
  EdgeStress e{};
  e.right = ghost_stress(ghost.right, state.u[n], state.v[n - 1], dm, params, +1.0);
  if (ghost.left.wall) {
    const double s0 = (state.u[1] - state.u[0]) / dm;
    e.left = -pressure(state.v[0], state.theta[0], params.R) + params.mu * s0 / state.v[0];
  } else {
    e.left = ghost_stress(ghost.left, state.u[0], state.v[0], dm, params, -1.0);
  }
  return e;
}

double boundary_energy_rate(const FluidState& state, const MassGrid& grid,
                            const GasParams& params, const ProblemSetup& setup) {
  const std::size_t n = grid.n_cells();
  const GhostClosure ghost = closure_for(setup);
  const EdgeStress stress = edge_stress(state, grid, params, setup);
  const double q_left =
      edge_heat_flux(ghost.left, state.theta[0], state.v[0], grid.dm(), params.kappa, -1.0);
  const double q_right =
      edge_heat_flux(ghost.right, state.theta[n - 1], state.v[n - 1], grid.dm(), params.kappa, +1.0);
  // Summation by parts of sum_i u_i du_i dm + sum_j c_v dtheta_j dm leaves
  // u_n F_right - u_0 F_left + q_n - q_0.
  const double work = state.u[n] * stress.right - state.u[0] * stress.left;
  return work + q_right - q_left;
}

double total_energy(const FluidState& state, const MassGrid& grid, const GasParams& params) {
  double internal = 0.0;
  for (double th : state.theta) internal += params.c_v * th;
  double kinetic = 0.0;
  for (double u : state.u) kinetic += 0.5 * u * u;
  return (internal + kinetic) * grid.dm();
}

}  // namespace lagns
