#pragma once

// Randomized and brute-force checks shared by the unit tests and the acceptance driver.
// Every oracle here evaluates set definitions or dense grids directly and never calls the SDP.

#include "gsip/gsip_loop.hpp"
#include "gsip/popsolve.hpp"

#include <string>
#include <vector>

namespace gsip::props {

struct ExtensionTally {
  int instances = 0;
  int violations = 0;  // anchor misses above 1e-9 plus sampled memberships off by more than 1e-6
  double worst_anchor = 0.0;
  double worst_violation = 0.0;
};

// Random box / simplex / ball / ellipsoid instances in rotation, X = [-2, 2]^nx.
ExtensionTally extension_property(int instances, unsigned seed, int samples_per_instance = 200);

struct GridCase {
  std::string name;
  Pop pop;
  double oracle = 0.0;  // dense-grid minimum
};

// Five small POPs with their grid minima.
std::vector<GridCase> grid_cases();

struct GridOutcome {
  std::string name;
  PopStatus status;
  double value = 0.0;
  double oracle = 0.0;
  double worst_point_gap = 0.0;  // |f(x) - oracle| over returned minimizers
  std::vector<double> order_values;  // relaxation values at orders d0, d0 + 1, d0 + 2
  bool orders_monotone = false;      // non-decreasing in k and never above the oracle
  bool ok = false;
};

GridOutcome check_grid_case(const GridCase& c, double tol = 5e-3);

// Largest entry error of moment and localizing matrices of random atomic measures.
double moment_identity_error(unsigned seed);

// Largest distance from a true atom to the nearest extracted point, over n <= 3 and r <= 3.
double extraction_error(unsigned seed);

// Whether the relaxation values of the upper problems never decrease along a trace, up to
// tol * max(1, |previous|). The objective at the returned point is not used: a polished point
// can sit slightly above the relaxation value.
bool monotone_bounds(const std::vector<IterationRecord>& trace, double tol = 1e-7);

}  // namespace gsip::props
