#include "random_state.hpp"

#include <cmath>

namespace testgen {

lagns::FluidState random_state(std::size_t n, std::uint64_t seed, double lo, double hi,
                               double u_amp) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> pos(lo, hi);
  std::uniform_real_distribution<double> vel(-u_amp, u_amp);
  lagns::FluidState s;
  for (std::size_t j = 0; j < n; ++j) {
    s.v.push_back(pos(rng));
    s.theta.push_back(pos(rng));
  }
  for (std::size_t i = 0; i <= n; ++i) s.u.push_back(vel(rng));
  return s;
}

lagns::FluidState bump_state(const lagns::MassGrid& grid, double amp_v, double amp_u,
                             double amp_theta, double width) {
  const double mid = 0.5 * (grid.x_left() + grid.x_right());
  auto g = [&](double x) { return std::exp(-std::pow((x - mid) / width, 2)); };
  lagns::FluidState s;
  for (std::size_t j = 0; j < grid.n_cells(); ++j) {
    const double x = grid.cell_center(j);
    s.v.push_back(1.0 + amp_v * g(x));
    s.theta.push_back(1.0 + amp_theta * g(x));
  }
  for (std::size_t i = 0; i < grid.n_nodes(); ++i) {
    const double x = grid.node(i);
    s.u.push_back(amp_u * (x - mid) / width * g(x));
  }
  return s;
}

std::vector<double> random_field(std::size_t n, std::uint64_t seed, double amp) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> d(-amp, amp);
  std::vector<double> w(n);
  for (double& x : w) x = d(rng);
  return w;
}

}  // namespace testgen
