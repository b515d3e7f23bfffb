// Functionals that witness the a-priori estimates of the Lagrangian
// Navier-Stokes system: the entropy-energy and its dissipation, field bounds,
// L^p and H^1 deviations from (1, 0, 1), truncated temperature excess, and
// running space-time integrals.
//
// Conventions: the nodal velocity is averaged to cell centres (ubar) whenever
// it is mixed with cell quantities; face values of v and theta are arithmetic
// means of the two neighbouring cells; every integral is a midpoint sum times dm.
#pragma once

#include <array>
#include <limits>
#include <string>
#include <vector>

#include "lagns/core.hpp"
#include "lagns/scheme.hpp"

namespace lagns {

/// int [u^2/2 + R (v - ln v - 1) + c_v (theta - ln theta - 1)] dx. Always >= 0.
double entropy_energy(const FluidState& state, const GasParams& params, const MassGrid& grid);

struct Dissipation {
  double viscous = 0.0;  // mu int u_x^2 / (v theta)
  double heat = 0.0;     // kappa int theta_x^2 / (v theta^2), interior faces
};
Dissipation dissipation_rates(const FluidState& state, const GasParams& params,
                              const MassGrid& grid);

struct FieldBounds {
  double v_min, v_max, theta_min, theta_max;
};
FieldBounds field_bounds(const FluidState& state);

/// Cell-centred velocity (u[j] + u[j+1]) / 2.
std::vector<double> cell_velocity(const FluidState& state);

inline constexpr double kInfinityNorm = std::numeric_limits<double>::infinity();

/// ||(v-1, ubar, theta-1)||_{L^p}. p = kInfinityNorm gives the largest sup-norm.
/// Throws DomainError for p <= 1.
double lp_deviation(const FluidState& state, const MassGrid& grid, double p);

struct GradientNorms {
  double v_x = 0.0;       // ||v_x||_2 over interior faces
  double u_x = 0.0;       // ||u_x||_2 over cells
  double theta_x = 0.0;   // ||theta_x||_2 over interior faces
  double u_xx = 0.0;      // ||u_xx||_2 over interior nodes
  double theta_xx = 0.0;  // ||theta_xx||_2 over cells 1..n-2
};
GradientNorms h1_seminorms(const FluidState& state, const MassGrid& grid);

struct TruncatedExcess {
  double excess = 0.0;         // int (theta - a)_+^2
  double omega_measure = 0.0;  // |{theta > a}|, by cell count
};
/// Throws DomainError for a <= 1.
TruncatedExcess truncated_excess(const FluidState& state, const MassGrid& grid, double a);

/// sup_x (theta - 3/2)_+^2.
double sup_theta_excess(const FluidState& state);

struct EmbeddingCheck {
  double lhs = 0.0;  // sup w^2
  double rhs = 0.0;  // 2 ||w||_2 ||w_x||_2
};
/// Both sides of sup w^2 <= 2 ||w|| ||w_x|| for a cell field w that vanishes at
/// the right (far-field) edge. w_x includes the face to the zero ghost beyond
/// the last cell; with that convention the discrete inequality is exact.
EmbeddingCheck sup_embedding_check(const std::vector<double>& field, const MassGrid& grid);

/// int [(1 + theta + ubar^2) u_x^2 + theta_x^2].
double df8_rate(const FluidState& state, const MassGrid& grid, const GasParams& params);

/// int [theta v_x^2 + u_xx^2 + theta_xx^2].
double z4_rate(const FluidState& state, const MassGrid& grid);

/// int ubar^4.
double velocity_fourth_moment(const FluidState& state, const MassGrid& grid);

inline const std::vector<double> kDefaultExcessThresholds = {1.5, 2.0, 3.0};

struct AuditRecord {
  double t = 0.0;
  double E = 0.0;
  double D_visc = 0.0;
  double D_heat = 0.0;
  double cum_D = 0.0;
  double v_min = 0.0, v_max = 0.0, theta_min = 0.0, theta_max = 0.0;
  double lp2_dev = 0.0;
  double lpinf_dev = 0.0;
  std::array<double, 3> h1{};  // (||v_x||, ||u_x||, ||theta_x||)
  double cum_df8 = 0.0;
  double u4 = 0.0;             // int ubar^4, tracked alongside cum_df8
  double cum_z4 = 0.0;
  std::vector<double> excess_a;  // per threshold
  std::vector<double> omega_a;   // per threshold
  double sup_theta_excess = 0.0;
  double energy_balance_residual = 0.0;
};

/// Stateful accumulator for the running integrals of one trajectory.
///
/// Time integrals use the trapezoid rule between consecutive records. The
/// energy balance tracks total energy against the boundary energy inflow that
/// the integrator reports through add_boundary_energy().
class Auditor {
 public:
  Auditor(GasParams params, MassGrid grid,
          std::vector<double> excess_thresholds = kDefaultExcessThresholds);

  /// Evaluates every functional on `state` and appends a record. Records at
  /// a time not later than the previous one are ignored (the previous record
  /// is returned).
  const AuditRecord& record(const FluidState& state);

  void add_boundary_energy(double energy) { boundary_energy_in_ += energy; }

  const std::vector<AuditRecord>& records() const { return records_; }
  const std::vector<double>& excess_thresholds() const { return thresholds_; }
  bool empty() const { return records_.empty(); }

 private:
  GasParams params_;
  MassGrid grid_;
  std::vector<double> thresholds_;
  std::vector<AuditRecord> records_;
  double boundary_energy_in_ = 0.0;
  double initial_total_energy_ = 0.0;
  double last_d_ = 0.0, last_df8_ = 0.0, last_z4_ = 0.0;
};

/// Relative drift of total energy against the accumulated boundary inflow.
double energy_balance_residual(double total_energy_now, double total_energy_initial,
                               double boundary_energy_in);

/// CSV column names in the fixed audit.csv order.
std::vector<std::string> audit_csv_columns(const std::vector<double>& excess_thresholds);
std::string audit_csv_header(const std::vector<double>& excess_thresholds);
std::string audit_csv_row(const AuditRecord& record);

}  // namespace lagns
