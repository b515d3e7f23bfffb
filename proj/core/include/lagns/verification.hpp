// Initial data that satisfy the hypotheses of the large-data theory, and
// manufactured solutions for measuring the scheme's convergence order.
#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lagns/core.hpp"
#include "lagns/integrate.hpp"

namespace lagns {

enum class InitialFamily { GaussianBump, TanhFront, RandomSmooth };

const char* to_string(InitialFamily family);
std::optional<InitialFamily> family_from_string(const std::string& name);

/// Perturbation of (1, 0, 1): field = far-field value + amplitude * profile(x).
/// Every profile is bounded by 1 in magnitude; GaussianBump and TanhFront are
/// nonnegative, RandomSmooth takes both signs.
struct InitialDataSpec {
  InitialFamily family = InitialFamily::GaussianBump;
  double amplitude_v = 0.0;
  double amplitude_u = 0.0;
  double amplitude_theta = 0.0;
  double width = 1.0;
  double center = 0.0;
  std::uint64_t seed = 1;  // RandomSmooth
  int modes = 8;           // RandomSmooth
};

/// Samples the initial fields. On half-line setups the u and theta
/// perturbations are multiplied by 1 - exp(-(x/width)^2), which vanishes with
/// zero slope at the wall, so u0(0) = 0, theta0(0) = 1 and theta0'(0) = 0.
/// Throws ConfigError when the amplitudes allow inf v0 <= 0 or inf theta0 <= 0.
FluidState build_initial_data(const InitialDataSpec& spec, const ProblemSetup& setup,
                              const MassGrid& grid);

/// Smooth 1D profile with closed-form first and second derivatives.
struct Profile {
  enum class Shape { Zero, Gaussian, XGaussian, X2Gaussian, Sine };

  Shape shape = Shape::Zero;
  double amplitude = 0.0;
  double center = 0.0;
  double width = 1.0;  // Gaussian width, or 1 / wavenumber for Sine

  /// (f, f', f'')
  std::array<double, 3> eval(double x) const;
};

/// v* = 1 + e^{-t} pv(x), u* = e^{-t} pu(x), theta* = 1 + e^{-t} ptheta(x).
struct ManufacturedSolution {
  Profile v;
  Profile u;
  Profile theta;

  struct Point {
    double value, dx, dxx, dt;
  };
  Point v_at(double x, double t) const;
  Point u_at(double x, double t) const;
  Point theta_at(double x, double t) const;

  /// Lower bounds of v* and theta* over all x and t >= 0.
  double v_floor() const;
  double theta_floor() const;

  /// Identically (1, 0, 1).
  static ManufacturedSolution steady();
  /// A smooth decaying solution compatible with the given setup.
  static ManufacturedSolution standard(SetupKind kind);
};

struct PointSources {
  double s_v, s_u, s_theta;
};

/// Forcing that makes `ms` an exact solution at (x, t).
PointSources manufactured_sources(const ManufacturedSolution& ms, const GasParams& params,
                                  double x, double t);

/// Samples `ms` on the grid (v, theta at cell centres, u at nodes).
FluidState sample_manufactured(const ManufacturedSolution& ms, const MassGrid& grid, double t);

/// Forcing sampled on the grid at any time.
SourceFn manufactured_source_fn(const ManufacturedSolution& ms, const GasParams& params,
                                const MassGrid& grid);

struct ResolutionError {
  long long n = 0;
  double dm = 0.0;
  double err_v = 0.0;
  double err_u = 0.0;
  double err_theta = 0.0;
  std::size_t steps = 0;
};

struct ConvergenceReport {
  std::vector<ResolutionError> runs;
  // Least-squares slope of log(error) against log(dm); empty when every
  // error is at round-off level and a slope is meaningless.
  std::optional<std::array<double, 3>> orders;  // (v, u, theta)

  bool passes(double threshold) const;
};

inline constexpr double kRoundoffError = 1e-11;

/// Integrates `ms` with its forcing from t = 0 to t_end on each resolution and
/// reports L2 errors and fitted orders. Needs at least three increasing
/// resolutions, each >= 4 cells.
ConvergenceReport convergence_study(const ManufacturedSolution& ms, const ProblemSetup& setup,
                                    const GasParams& params, const std::vector<long long>& n_list,
                                    double t_end, double half_length,
                                    const StepControl& control = {});

/// Least-squares slope of y against x.
double fitted_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace lagns
