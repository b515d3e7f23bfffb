#include "lagns/verification.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace lagns {

const char* to_string(InitialFamily family) {
  switch (family) {
    case InitialFamily::GaussianBump:
      return "gaussian_bump";
    case InitialFamily::TanhFront:
      return "tanh_front";
    case InitialFamily::RandomSmooth:
      return "random_smooth";
  }
  return "unknown";
}

std::optional<InitialFamily> family_from_string(const std::string& name) {
  if (name == "gaussian_bump") return InitialFamily::GaussianBump;
  if (name == "tanh_front") return InitialFamily::TanhFront;
  if (name == "random_smooth") return InitialFamily::RandomSmooth;
  return std::nullopt;
}

namespace {

constexpr double kPi = 3.14159265358979323846;

// Uniform double in [-1, 1) from the raw engine output, independent of the
// standard library's distribution implementation.
double unit_symmetric(std::mt19937_64& rng) {
  const double u01 = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return 2.0 * u01 - 1.0;
}

// Truncated Fourier series with k^-3 decay under a Gaussian envelope.
struct RandomSeries {
  std::vector<double> a, b;
  double center, width;

  RandomSeries(std::mt19937_64& rng, int modes, double center_, double width_)
      : center(center_), width(width_) {
    for (int k = 1; k <= modes; ++k) {
      a.push_back(unit_symmetric(rng));
      b.push_back(unit_symmetric(rng));
    }
  }

  double operator()(double x) const {
    const double z = (x - center) / width;
    double sum = 0.0;
    for (std::size_t k = 1; k <= a.size(); ++k) {
      const double kk = static_cast<double>(k);
      const double phase = kk * kPi * z / 4.0;
      sum += (a[k - 1] * std::cos(phase) + b[k - 1] * std::sin(phase)) / (kk * kk * kk);
    }
    return std::exp(-z * z) * sum;
  }
};

std::vector<double> normalized(std::vector<double> values) {
  double peak = 0.0;
  for (double x : values) peak = std::max(peak, std::abs(x));
  if (peak > 0.0) {
    for (double& x : values) x /= peak;
  }
  return values;
}

}  // namespace

FluidState build_initial_data(const InitialDataSpec& spec, const ProblemSetup& setup,
                              const MassGrid& grid) {
  if (!(spec.width > 0.0)) throw ConfigError("initial data width must be positive");
  if (spec.family == InitialFamily::RandomSmooth && spec.modes < 1) {
    throw ConfigError("random_smooth needs at least one mode");
  }

  // Largest possible downward excursion of v0 and theta0 relative to 1.
  const bool signed_profile = spec.family == InitialFamily::RandomSmooth;
  auto worst_drop = [&](double amplitude) {
    return signed_profile ? std::abs(amplitude) : std::max(-amplitude, 0.0);
  };
  if (1.0 - worst_drop(spec.amplitude_v) <= 0.0) {
    throw ConfigError("initial data violates inf v0 > 0 (amplitude_v too negative)");
  }
  if (1.0 - worst_drop(spec.amplitude_theta) <= 0.0) {
    throw ConfigError("initial data violates inf theta0 > 0 (amplitude_theta too negative)");
  }

  const std::size_t n = grid.n_cells();
  const double w = spec.width;
  const double c = spec.center;

  auto wall_factor = [&](double x) {
    if (!setup.has_wall()) return 1.0;
    const double z = x / w;
    return 1.0 - std::exp(-z * z);
  };

  std::vector<double> xc(n), xn(n + 1);
  for (std::size_t j = 0; j < n; ++j) xc[j] = grid.cell_center(j);
  for (std::size_t i = 0; i <= n; ++i) xn[i] = grid.node(i);

  std::vector<double> pv(n), pth(n), pu(n + 1);
  switch (spec.family) {
    case InitialFamily::GaussianBump: {
      auto g = [&](double x) {
        const double z = (x - c) / w;
        return std::exp(-z * z);
      };
      std::transform(xc.begin(), xc.end(), pv.begin(), g);
      std::transform(xc.begin(), xc.end(), pth.begin(), g);
      std::transform(xn.begin(), xn.end(), pu.begin(), g);
      break;
    }
    case InitialFamily::TanhFront: {
      const double edge = w / 4.0;
      auto plateau = [&](double x) {
        return 0.5 * (std::tanh((x - c + w) / edge) - std::tanh((x - c - w) / edge));
      };
      std::transform(xc.begin(), xc.end(), pv.begin(), plateau);
      std::transform(xc.begin(), xc.end(), pth.begin(), plateau);
      std::transform(xn.begin(), xn.end(), pu.begin(), plateau);
      break;
    }
    case InitialFamily::RandomSmooth: {
      std::mt19937_64 rng(spec.seed);
      const RandomSeries sv(rng, spec.modes, c, w);
      const RandomSeries su(rng, spec.modes, c, w);
      const RandomSeries sth(rng, spec.modes, c, w);
      std::transform(xc.begin(), xc.end(), pv.begin(), sv);
      std::transform(xc.begin(), xc.end(), pth.begin(), sth);
      std::transform(xn.begin(), xn.end(), pu.begin(), su);
      break;
    }
  }

  for (std::size_t j = 0; j < n; ++j) pth[j] *= wall_factor(xc[j]);
  for (std::size_t i = 0; i <= n; ++i) pu[i] *= wall_factor(xn[i]);
  if (signed_profile) {
    pv = normalized(std::move(pv));
    pth = normalized(std::move(pth));
    pu = normalized(std::move(pu));
  }

  FluidState s;
  s.t = 0.0;
  s.v.resize(n);
  s.theta.resize(n);
  s.u.resize(n + 1);
  for (std::size_t j = 0; j < n; ++j) {
    s.v[j] = FarField::v + spec.amplitude_v * pv[j];
    s.theta[j] = FarField::theta + spec.amplitude_theta * pth[j];
  }
  for (std::size_t i = 0; i <= n; ++i) s.u[i] = FarField::u + spec.amplitude_u * pu[i];
  if (setup.has_wall()) s.u[0] = 0.0;

  if (auto bad = validate_state(s)) {
    throw ConfigError("initial data violates inf v0 > 0, inf theta0 > 0: " + bad->describe());
  }
  return s;
}

std::array<double, 3> Profile::eval(double x) const {
  const double A = amplitude;
  switch (shape) {
    case Shape::Zero:
      return {0.0, 0.0, 0.0};
    case Shape::Sine: {
      const double k = 1.0 / width;
      const double arg = k * (x - center);
      return {A * std::sin(arg), A * k * std::cos(arg), -A * k * k * std::sin(arg)};
    }
    default:
      break;
  }
  const double y = x - center;
  const double z = y / width;
  const double g = std::exp(-z * z);
  const double g1 = -2.0 * z / width * g;
  const double g2 = (4.0 * z * z - 2.0) / (width * width) * g;
  switch (shape) {
    case Shape::Gaussian:
      return {A * g, A * g1, A * g2};
    case Shape::XGaussian:
      return {A * y * g, A * (g + y * g1), A * (2.0 * g1 + y * g2)};
    case Shape::X2Gaussian:
      return {A * y * y * g, A * (2.0 * y * g + y * y * g1),
              A * (2.0 * g + 4.0 * y * g1 + y * y * g2)};
    default:
      return {0.0, 0.0, 0.0};
  }
}

namespace {

// Bound on |profile| over the real line.
double profile_sup(const Profile& p) {
  const double A = std::abs(p.amplitude);
  const double w = p.width;
  switch (p.shape) {
    case Profile::Shape::Zero:
      return 0.0;
    case Profile::Shape::Sine:
    case Profile::Shape::Gaussian:
      return A;
    case Profile::Shape::XGaussian:
      return A * w * std::exp(-0.5) / std::sqrt(2.0);  // max of |y| e^{-y^2/w^2}
    case Profile::Shape::X2Gaussian:
      return A * w * w * std::exp(-1.0);  // max of y^2 e^{-y^2/w^2}
  }
  return A;
}

ManufacturedSolution::Point point(const Profile& p, double base, double x, double t) {
  const auto f = p.eval(x);
  const double decay = std::exp(-t);
  return {base + decay * f[0], decay * f[1], decay * f[2], -decay * f[0]};
}

}  // namespace

ManufacturedSolution::Point ManufacturedSolution::v_at(double x, double t) const {
  return point(v, FarField::v, x, t);
}
ManufacturedSolution::Point ManufacturedSolution::u_at(double x, double t) const {
  return point(u, FarField::u, x, t);
}
ManufacturedSolution::Point ManufacturedSolution::theta_at(double x, double t) const {
  return point(theta, FarField::theta, x, t);
}

double ManufacturedSolution::v_floor() const { return FarField::v - profile_sup(v); }
double ManufacturedSolution::theta_floor() const { return FarField::theta - profile_sup(theta); }

ManufacturedSolution ManufacturedSolution::steady() { return {}; }

ManufacturedSolution ManufacturedSolution::standard(SetupKind kind) {
  using S = Profile::Shape;
  ManufacturedSolution ms;
  switch (kind) {
    case SetupKind::Cauchy:
      ms.v = {S::Gaussian, 0.3, 0.4, 1.0};
      ms.u = {S::Gaussian, 0.2, -0.3, 1.2};
      ms.theta = {S::Gaussian, 0.25, 0.2, 0.9};
      break;
    case SetupKind::HalfLineInsulated:
      // Even v and theta about the wall, odd u: u(0) = 0, theta_x(0) = 0.
      ms.v = {S::Gaussian, 0.3, 0.0, 1.5};
      ms.u = {S::XGaussian, 0.3, 0.0, 1.2};
      ms.theta = {S::Gaussian, 0.25, 0.0, 1.0};
      break;
    case SetupKind::HalfLineIsothermal:
      // theta(0) = 1 with a nonzero wall heat flux.
      ms.v = {S::Gaussian, 0.3, 0.0, 1.5};
      ms.u = {S::XGaussian, 0.3, 0.0, 1.2};
      ms.theta = {S::XGaussian, 0.4, 0.0, 1.0};
      break;
  }
  return ms;
}

PointSources manufactured_sources(const ManufacturedSolution& ms, const GasParams& p, double x,
                                  double t) {
  const auto v = ms.v_at(x, t);
  const auto u = ms.u_at(x, t);
  const auto th = ms.theta_at(x, t);

  const double P_x = p.R * (th.dx / v.value - th.value * v.dx / (v.value * v.value));
  const double visc_x = u.dxx / v.value - u.dx * v.dx / (v.value * v.value);      // (u_x / v)_x
  const double cond_x = th.dxx / v.value - th.dx * v.dx / (v.value * v.value);    // (theta_x / v)_x

  PointSources s;
  s.s_v = v.dt - u.dx;
  s.s_u = u.dt + P_x - p.mu * visc_x;
  s.s_theta = p.c_v * th.dt + p.R * th.value / v.value * u.dx - p.kappa * cond_x -
              p.mu * u.dx * u.dx / v.value;
  return s;
}

FluidState sample_manufactured(const ManufacturedSolution& ms, const MassGrid& grid, double t) {
  FluidState s;
  s.t = t;
  const std::size_t n = grid.n_cells();
  s.v.resize(n);
  s.theta.resize(n);
  s.u.resize(n + 1);
  for (std::size_t j = 0; j < n; ++j) {
    const double x = grid.cell_center(j);
    s.v[j] = ms.v_at(x, t).value;
    s.theta[j] = ms.theta_at(x, t).value;
  }
  for (std::size_t i = 0; i <= n; ++i) s.u[i] = ms.u_at(grid.node(i), t).value;
  return s;
}

SourceFn manufactured_source_fn(const ManufacturedSolution& ms, const GasParams& params,
                                const MassGrid& grid) {
  return [ms, params, grid](double t) {
    StateDerivative d = StateDerivative::zeros(grid);
    for (std::size_t j = 0; j < grid.n_cells(); ++j) {
      const PointSources s = manufactured_sources(ms, params, grid.cell_center(j), t);
      d.dv[j] = s.s_v;
      d.dtheta[j] = s.s_theta / params.c_v;
    }
    for (std::size_t i = 0; i < grid.n_nodes(); ++i) {
      d.du[i] = manufactured_sources(ms, params, grid.node(i), t).s_u;
    }
    return d;
  };
}

double fitted_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    sx += x[k];
    sy += y[k];
    sxx += x[k] * x[k];
    sxy += x[k] * y[k];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

bool ConvergenceReport::passes(double threshold) const {
  if (!orders) {
    return std::all_of(runs.begin(), runs.end(), [](const ResolutionError& r) {
      return r.err_v < kRoundoffError && r.err_u < kRoundoffError && r.err_theta < kRoundoffError;
    });
  }
  return std::all_of(orders->begin(), orders->end(), [&](double o) { return o >= threshold; });
}

ConvergenceReport convergence_study(const ManufacturedSolution& ms, const ProblemSetup& setup,
                                    const GasParams& params, const std::vector<long long>& n_list,
                                    double t_end, double half_length, const StepControl& control) {
  if (n_list.size() < 3) throw ConfigError("convergence study needs at least three resolutions");
  for (std::size_t k = 0; k < n_list.size(); ++k) {
    if (n_list[k] < static_cast<long long>(kMinCells)) {
      throw ConfigError("every resolution needs at least 4 cells");
    }
    if (k > 0 && n_list[k] <= n_list[k - 1]) {
      throw ConfigError("resolutions must be strictly increasing");
    }
  }
  if (!(t_end > 0.0)) throw ConfigError("convergence study needs t_end > 0");
  if (!(ms.v_floor() > 0.0) || !(ms.theta_floor() > 0.0)) {
    throw ConfigError("manufactured solution must keep v and theta positive");
  }
  params.validate();
  control.validate();

  ConvergenceReport report;
  for (long long n : n_list) {
    const MassGrid grid = make_grid(setup, half_length, n);
    StepContext ctx{grid, params, setup, control, manufactured_source_fn(ms, params, grid)};
    Auditor auditor(params, grid);
    const AdvanceResult res =
        advance(sample_manufactured(ms, grid, 0.0), t_end, ctx, auditor, {t_end, {}, {}});
    const FluidState exact = sample_manufactured(ms, grid, t_end);

    auto l2 = [&](const std::vector<double>& a, const std::vector<double>& b) {
      double sum = 0.0;
      for (std::size_t k = 0; k < a.size(); ++k) sum += (a[k] - b[k]) * (a[k] - b[k]);
      return std::sqrt(sum * grid.dm());
    };
    report.runs.push_back({n, grid.dm(), l2(res.state.v, exact.v), l2(res.state.u, exact.u),
                           l2(res.state.theta, exact.theta), res.steps});
  }

  const bool roundoff = std::all_of(report.runs.begin(), report.runs.end(), [](const auto& r) {
    return r.err_v < kRoundoffError && r.err_u < kRoundoffError && r.err_theta < kRoundoffError;
  });
  if (!roundoff) {
    std::vector<double> logdm, ev, eu, et;
    for (const auto& r : report.runs) {
      logdm.push_back(std::log(r.dm));
      ev.push_back(std::log(r.err_v));
      eu.push_back(std::log(r.err_u));
      et.push_back(std::log(r.err_theta));
    }
    report.orders = std::array<double, 3>{fitted_slope(logdm, ev), fitted_slope(logdm, eu),
                                          fitted_slope(logdm, et)};
  }
  return report;
}

}  // namespace lagns
