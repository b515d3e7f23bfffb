// Explicit SSP-RK3 time advancement with a stability-limited step.
#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "lagns/core.hpp"
#include "lagns/diagnostics.hpp"
#include "lagns/scheme.hpp"

namespace lagns {

struct StepControl {
  double cfl_hyperbolic = 0.4;
  double cfl_parabolic = 0.4;
  double dt_min = 1e-12;
  double dt_max = 1.0;
  double positivity_floor = kDefaultPositivityFloor;

  void validate() const;
};

/// The stable step fell below dt_min: blow-up or floor-level v / theta.
class StiffnessError : public std::runtime_error {
 public:
  StiffnessError(const std::string& what, double dt) : std::runtime_error(what), dt_(dt) {}
  double dt() const { return dt_; }

 private:
  double dt_;
};

/// Positivity was lost during a step.
class IntegrationError : public std::runtime_error {
 public:
  IntegrationError(const std::string& what, double t, int stage, std::optional<StateViolation> v)
      : std::runtime_error(what), t_(t), stage_(stage), violation_(v) {}

  double time() const { return t_; }
  int stage() const { return stage_; }
  const std::optional<StateViolation>& violation() const { return violation_; }

 private:
  double t_;
  int stage_;
  std::optional<StateViolation> violation_;
};

/// Forcing terms evaluated at time t on the grid (manufactured solutions).
using SourceFn = std::function<StateDerivative(double t)>;

/// Everything a step needs besides the state itself.
struct StepContext {
  MassGrid grid;
  GasParams params;
  ProblemSetup setup;
  StepControl control;
  SourceFn sources;  // optional
};

/// min over cells of the acoustic and diffusive limits, clamped to
/// [dt_min, dt_max]. The acoustic speed is sqrt(R theta (R/c_v + 1)) / v.
double stable_dt(const FluidState& state, const MassGrid& grid, const GasParams& params,
                 const StepControl& ctrl);

struct StepResult {
  FluidState state;
  double boundary_energy_in = 0.0;  // RK-weighted integral of boundary_energy_rate
};

/// One SSP-RK3 (Shu-Osher) step. Throws IntegrationError when a stage leaves
/// the positivity floor.
StepResult step(const FluidState& state, double dt, const StepContext& ctx);

struct AdvanceOptions {
  double audit_every = 0.0;  // record cadence in time units; 0 records every step
  std::function<void(const FluidState&)> on_step;                        // after each step
  std::function<void(const FluidState&, const AuditRecord&)> on_record;  // after each record
};

struct AdvanceResult {
  FluidState state;
  std::size_t steps = 0;
};

/// Steps from state.t to t_end, landing exactly on t_end and on every
/// cadence tick. Records are appended to `auditor` (the starting state is
/// recorded if the auditor is empty). Errors carry the failure time.
AdvanceResult advance(const FluidState& state, double t_end, const StepContext& ctx,
                      Auditor& auditor, const AdvanceOptions& options = {});

}  // namespace lagns
