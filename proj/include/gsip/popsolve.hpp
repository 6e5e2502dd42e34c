#pragma once

#include "gsip/moment.hpp"

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace gsip {

enum class PopStatus { Optimal, Infeasible, UnboundedSuspected, OrderCapReached, NumericalFailure };

std::string to_string(PopStatus s);

struct PopOptions {
  int k_min = 0;    // 0 means d0
  int k_max = 0;    // 0 means d0 + 3
  double rank_tol = 1e-6;
  double feas_tol = 1e-6;
  // Relative tolerance between the relaxation value and f at a certified point.
  double value_tol = 1e-5;
  // Orders whose moment vector would exceed this length are skipped.
  std::size_t max_moments = 3500;
  // When no minimizer is certified, retry with a generic distance objective
  // over the near-optimal set.
  bool refine = true;
  SdpOptions sdp;
};

struct PopResult {
  PopStatus status = PopStatus::NumericalFailure;
  double value = 0.0;  // relaxation value at order_used (a lower bound)
  std::vector<Eigen::VectorXd> minimizers;
  int order_used = 0;
  FlatResult flat;
  std::vector<double> bounds;  // relaxation values per solved order
  Tms moments;
  bool certified = false;       // infeasibility backed by a verified SDP ray
  bool has_candidate = false;   // a feasible point, even when not optimal
  Eigen::VectorXd candidate;
  int sdp_iterations = 0;
};

struct Membership {
  bool ok = true;
  double worst_violation = 0.0;
};

// Violations are scaled by max(1, largest coefficient) of each constraint.
Membership check_membership(const Eigen::VectorXd& x, const Pop& pop, double feas_tol);

PopResult minimize(const Pop& pop, const PopOptions& opts = {});

}  // namespace gsip
