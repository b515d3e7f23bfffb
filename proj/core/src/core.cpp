#include "lagns/core.hpp"

#include <cmath>
#include <sstream>

namespace lagns {

void GasParams::validate() const {
  auto check = [](double value, const char* name) {
    if (!(value > 0.0) || !std::isfinite(value)) {
      throw ConfigError(std::string("gas parameter ") + name + " must be a positive finite number");
    }
  };
  check(mu, "mu");
  check(kappa, "kappa");
  check(R, "R");
  check(c_v, "c_v");
}

const char* to_string(SetupKind kind) {
  switch (kind) {
    case SetupKind::Cauchy:
      return "cauchy";
    case SetupKind::HalfLineInsulated:
      return "halfline_insulated";
    case SetupKind::HalfLineIsothermal:
      return "halfline_isothermal";
  }
  return "unknown";
}

std::optional<SetupKind> setup_from_string(const std::string& name) {
  if (name == "cauchy") return SetupKind::Cauchy;
  if (name == "halfline_insulated") return SetupKind::HalfLineInsulated;
  if (name == "halfline_isothermal") return SetupKind::HalfLineIsothermal;
  return std::nullopt;
}

MassGrid::MassGrid(double x_left, double x_right, std::size_t n_cells)
    : x_left_(x_left), x_right_(x_right), n_cells_(n_cells) {
  if (!(x_right > x_left) || !std::isfinite(x_left) || !std::isfinite(x_right)) {
    throw ConfigError("mass grid needs finite extents with x_left < x_right");
  }
  if (n_cells < kMinCells) {
    throw ConfigError("mass grid needs at least 4 cells");
  }
  dm_ = (x_right - x_left) / static_cast<double>(n_cells);
}

MassGrid make_grid(const ProblemSetup& setup, double half_length, long long n_cells) {
  if (!(half_length > 0.0) || !std::isfinite(half_length)) {
    throw ConfigError("truncation length must be positive");
  }
  if (n_cells < static_cast<long long>(kMinCells)) {
    throw ConfigError("n_cells must be at least 4, got " + std::to_string(n_cells));
  }
  const double left = setup.has_wall() ? 0.0 : -half_length;
  return MassGrid(left, half_length, static_cast<std::size_t>(n_cells));
}

FluidState steady_state(const MassGrid& grid) {
  FluidState s;
  s.t = 0.0;
  s.v.assign(grid.n_cells(), FarField::v);
  s.theta.assign(grid.n_cells(), FarField::theta);
  s.u.assign(grid.n_nodes(), FarField::u);
  return s;
}

std::string StateViolation::describe() const {
  static constexpr const char* kFieldNames[] = {"v", "u", "theta"};
  std::ostringstream os;
  os << kFieldNames[static_cast<int>(field)] << '[' << index << "] ";
  switch (reason) {
    case Reason::BelowFloor:
      os << "= " << value << " is not above the positivity floor";
      break;
    case Reason::NonFinite:
      os << "is non-finite";
      break;
    case Reason::Shape:
      os << "has inconsistent length " << value;
      break;
  }
  return os.str();
}

std::optional<StateViolation> validate_state(const FluidState& state, double floor) {
  using F = StateViolation::Field;
  using Why = StateViolation::Reason;
  const std::size_t n = state.v.size();
  if (state.theta.size() != n) {
    return StateViolation{F::Theta, Why::Shape, 0, static_cast<double>(state.theta.size())};
  }
  if (state.u.size() != n + 1) {
    return StateViolation{F::U, Why::Shape, 0, static_cast<double>(state.u.size())};
  }

  auto check_positive = [floor](double x, F field, std::size_t j) -> std::optional<StateViolation> {
    if (!std::isfinite(x)) return StateViolation{field, Why::NonFinite, j, x};
    if (!(x > floor)) return StateViolation{field, Why::BelowFloor, j, x};
    return std::nullopt;
  };

  for (std::size_t j = 0; j < n; ++j) {
    if (auto bad = check_positive(state.v[j], F::V, j)) return bad;
    if (auto bad = check_positive(state.theta[j], F::Theta, j)) return bad;
    if (!std::isfinite(state.u[j])) return StateViolation{F::U, Why::NonFinite, j, state.u[j]};
  }
  if (!std::isfinite(state.u[n])) return StateViolation{F::U, Why::NonFinite, n, state.u[n]};
  return std::nullopt;
}

}  // namespace lagns
