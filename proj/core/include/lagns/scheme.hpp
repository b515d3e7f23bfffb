// Semi-discrete staggered discretization of
//
//   v_t = u_x
//   u_t + P_x = mu (u_x / v)_x
//   c_v theta_t + R (theta / v) u_x = kappa (theta_x / v)_x + mu u_x^2 / v
//
// with P = R theta / v, closed at the edges of the truncated domain by ghost
// values (far field) or a wall.
#pragma once

#include <span>
#include <vector>

#include "lagns/core.hpp"

namespace lagns {

/// Time derivatives of a FluidState. Also used to carry forcing terms.
struct StateDerivative {
  std::vector<double> dv;      // per cell
  std::vector<double> du;      // per node
  std::vector<double> dtheta;  // per cell

  static StateDerivative zeros(const MassGrid& grid);
  bool matches(const MassGrid& grid) const {
    return dv.size() == grid.n_cells() && dtheta.size() == grid.n_cells() &&
           du.size() == grid.n_nodes();
  }
};

enum class TemperatureRule {
  GhostValue,    // ghost cell one spacing beyond the edge holds `theta`
  WallValue,     // wall at the edge node holds `theta` (half spacing)
  ZeroGradient,  // insulated: zero flux through the edge
};

struct BoundaryRule {
  bool wall = false;  // true: edge node velocity held at `u`; false: ghost node holds `u`
  double u = FarField::u;
  TemperatureRule temperature = TemperatureRule::GhostValue;
  double theta = FarField::theta;
  bool v_zero_gradient = false;  // false: ghost cell holds `v`
  double v = FarField::v;
};

struct GhostClosure {
  BoundaryRule left;
  BoundaryRule right;
};

/// Edge treatment for each setup. The right edge is always the far field.
GhostClosure closure_for(const ProblemSetup& setup);

/// P = R theta / v. Throws DomainError for nonpositive v or theta.
double pressure(double v, double theta, double R);

/// Cell-centred u_x: (u[j+1] - u[j]) / dm.
std::vector<double> strain_rate(const FluidState& state, const MassGrid& grid);

/// kappa theta_x / v at every node (n+1 values), ghost rules applied at the ends.
std::vector<double> heat_flux_faces(const FluidState& state, const MassGrid& grid,
                                    const GhostClosure& ghost, double kappa);

/// Right-hand side of the semi-discrete system. `sources`, when given, is added
/// to the rates (manufactured-solution forcing). Wall nodes get du = 0 even
/// when forced.
StateDerivative rhs(const FluidState& state, const MassGrid& grid, const GasParams& params,
                    const ProblemSetup& setup, const StateDerivative* sources = nullptr);

/// Allocation-free variant; `out` is resized as needed.
void rhs_into(const FluidState& state, const MassGrid& grid, const GasParams& params,
              const ProblemSetup& setup, const StateDerivative* sources, StateDerivative& out);

/// Momentum flux -P + mu u_x / v on the ghost cells beyond the left and right edges,
/// as seen by the edge nodes. For a wall edge the first interior cell's value is
/// returned (the wall node does not move).
struct EdgeStress {
  double left;
  double right;
};
EdgeStress edge_stress(const FluidState& state, const MassGrid& grid, const GasParams& params,
                       const ProblemSetup& setup);

/// Rate at which total energy sum(c_v theta) dm + sum(u^2 / 2) dm (nodal kinetic
/// energy) enters the truncated domain through its edges: mechanical work plus
/// heat flux. The unforced scheme changes total energy at exactly this rate.
double boundary_energy_rate(const FluidState& state, const MassGrid& grid,
                            const GasParams& params, const ProblemSetup& setup);

/// sum(c_v theta) dm + sum(u^2 / 2) dm over cells and nodes.
double total_energy(const FluidState& state, const MassGrid& grid, const GasParams& params);

}  // namespace lagns
