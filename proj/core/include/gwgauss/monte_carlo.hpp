#pragma once

#include <cstdint>

#include "gwgauss/gaussian.hpp"

namespace gwgauss::oracle {

struct MonteCarloEstimate {
    double estimate = 0.0;
    double std_error = 0.0;
};

/// Sample mean of (<X,X'> - <Y,Y'>)^2 over independent pairs (X,Y), (X',Y')
/// drawn from the normalised plan. Deterministic in seed. Throws
/// SingularPlan for a singular plan and InvalidArgument for samples < 1e4.
[[nodiscard]] MonteCarloEstimate monte_carlo_igw_cost(const CouplingPlan& plan, std::uint64_t samples,
                                                      std::uint64_t seed);

}  // namespace gwgauss::oracle
