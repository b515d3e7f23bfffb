// Discrete state, mass grid and gas constants for the 1D Lagrangian
// Navier-Stokes solver.
//
// Layout: cells j = 0..n-1 carry the specific volume v and temperature theta,
// nodes i = 0..n carry the velocity u. Cell j lies between nodes j and j+1.
#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace lagns {

/// Invalid user-supplied configuration (grid, parameters, initial data).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A formula was evaluated outside its domain (nonpositive v or theta, p <= 1, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

struct GasParams {
  double mu = 1.0;     // viscosity
  double kappa = 1.0;  // heat conductivity
  double R = 1.0;      // gas constant
  double c_v = 1.0;    // heat capacity at constant volume

  /// Throws ConfigError unless all four constants are strictly positive.
  void validate() const;
};

enum class SetupKind { Cauchy, HalfLineInsulated, HalfLineIsothermal };

const char* to_string(SetupKind kind);
std::optional<SetupKind> setup_from_string(const std::string& name);

/// The far-field state every setup decays to. Not configurable.
struct FarField {
  static constexpr double v = 1.0;
  static constexpr double u = 0.0;
  static constexpr double theta = 1.0;
};

struct ProblemSetup {
  SetupKind kind = SetupKind::Cauchy;

  bool has_wall() const { return kind != SetupKind::Cauchy; }
};

class MassGrid {
 public:
  MassGrid(double x_left, double x_right, std::size_t n_cells);

  double x_left() const { return x_left_; }
  double x_right() const { return x_right_; }
  std::size_t n_cells() const { return n_cells_; }
  std::size_t n_nodes() const { return n_cells_ + 1; }
  double dm() const { return dm_; }
  double span() const { return x_right_ - x_left_; }

  double cell_center(std::size_t j) const {
    return x_left_ + (static_cast<double>(j) + 0.5) * dm_;
  }
  double node(std::size_t i) const { return x_left_ + static_cast<double>(i) * dm_; }

 private:
  double x_left_;
  double x_right_;
  std::size_t n_cells_;
  double dm_;
};

inline constexpr std::size_t kMinCells = 4;

/// Truncated domain for a setup: [-L, L] for the Cauchy problem, [0, L] otherwise.
MassGrid make_grid(const ProblemSetup& setup, double half_length, long long n_cells);

struct FluidState {
  double t = 0.0;
  std::vector<double> v;      // n_cells
  std::vector<double> u;      // n_cells + 1
  std::vector<double> theta;  // n_cells

  std::size_t n_cells() const { return v.size(); }
  bool matches(const MassGrid& grid) const {
    return v.size() == grid.n_cells() && theta.size() == grid.n_cells() &&
           u.size() == grid.n_nodes();
  }
};

/// (v, u, theta) = (1, 0, 1) everywhere at t = 0.
FluidState steady_state(const MassGrid& grid);

inline constexpr double kDefaultPositivityFloor = 1e-10;

struct StateViolation {
  enum class Field { V, U, Theta };
  enum class Reason { BelowFloor, NonFinite, Shape };

  Field field;
  Reason reason;
  std::size_t index;
  double value;

  std::string describe() const;
};

/// Returns the first violation found, scanning v, theta, then u. Empty means ok.
std::optional<StateViolation> validate_state(const FluidState& state,
                                             double floor = kDefaultPositivityFloor);

}  // namespace lagns
