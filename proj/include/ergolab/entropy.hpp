#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <string>
#include <vector>

#include "ergolab/system.hpp"

namespace ergolab {

// Size of a greedy maximal (n, epsilon)-separated subset of a uniform grid
// of candidate_grid_size points, scanned in ascending order. Rejects grids
// coarser than epsilon/4.
Eigen::Index separated_set_size(const SystemSpec& system, int n, double epsilon,
                                Eigen::Index candidate_grid_size);

struct EntropyEstimate {
  std::vector<double> epsilon_list;  // descending
  int n_lo = 1;
  int n_hi = 1;
  Eigen::ArrayXXd counts;  // (n_hi - n_lo + 1) rows, one column per epsilon
  std::vector<double> slope_per_epsilon;
  double h_top_estimate = 0.0;  // max slope over epsilon, floored at 0
  Eigen::Index grid_size = 0;
};

EntropyEstimate topological_entropy_estimate(const SystemSpec& system,
                                             const std::vector<double>& epsilon_list,
                                             int n_lo, int n_hi,
                                             Eigen::Index grid_size);

// CSV columns: epsilon,n,count,log_count.
void write_entropy_csv(std::ostream& out, const EntropyEstimate& est);
// JSON fields: h_top_estimate, slope_per_epsilon.
std::string entropy_json(const EntropyEstimate& est);

}  // namespace ergolab
