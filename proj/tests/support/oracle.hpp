// Brute-force reference evaluators for the diagnostics. Written straight from
// the definitions with long double accumulation and no shared helpers, so that
// agreement with the library is meaningful.
#pragma once

#include <vector>

#include "lagns/core.hpp"

namespace oracle {

struct All {
  long double E, D_visc, D_heat;
  long double lp2, lp3, lpinf;
  long double vx, ux, thx, uxx, thxx;
  long double df8, z4, u4;
  long double excess15, omega15, excess2, omega2, excess3, omega3;
  long double sup_excess;
};

All evaluate(const lagns::FluidState& s, const lagns::GasParams& p, double dm);

std::vector<double> strain(const std::vector<double>& u, double dm);

struct Embedding {
  long double lhs, rhs;
};
Embedding embedding(const std::vector<double>& w, double dm);

}  // namespace oracle
