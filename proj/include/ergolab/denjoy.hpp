#pragma once

#include <vector>

#include "ergolab/space.hpp"

namespace ergolab {

// Circle homeomorphism with irrational rotation number and a minimal Cantor
// set as the support of its unique invariant measure. Built by inserting a
// gap of length l_k = c * lambda^|k| over each point frac(k*alpha) of the
// rotation orbit of 0; the map sends gap k affinely onto gap k+1 and acts as
// the conjugated rotation elsewhere. Only gaps with |k| <= truncation_K are
// materialized; the summed length of the dropped ones is `tail`.
struct DenjoyModel {
  double alpha = 0.6180339887498949;  // rotation number
  double lambda = 0.5;                // geometric decay of gap lengths
  double total_gap = 0.5;             // sum of all gap lengths, K -> infinity
  int truncation_K = 40;

  double gap_scale = 0.0;  // c in l_k = c * lambda^|k|
  double tail = 0.0;       // sum over |k| > K of l_k

  struct Gap {
    int k;          // orbit index
    double t;       // frac(k * alpha), insertion parameter
    double left;    // left endpoint on the circle
    double length;
  };
  // Sorted by t, equivalently by left endpoint.
  std::vector<Gap> gaps;
  // prefix_length[i] = total length of gaps[0..i).
  std::vector<double> prefix_length;
  // sorted index of orbit index k, addressed as position_of_k[k + truncation_K].
  std::vector<int> position_of_k;

  const Gap& gap_by_k(int k) const;
  double gap_length(int k) const;    // c * lambda^|k| for any k
  double biggest_gap_length() const { return gap_scale; }
};

DenjoyModel make_denjoy_model(double alpha, double lambda, double total_gap,
                              int truncation_K);

// Insertion map Phi: [0,1) -> [0,1), strictly increasing, Phi(0) = 0.
// Phi(t) = (1 - total_gap) * t + sum of l_k over frac(k*alpha) < t.
double denjoy_phi(const DenjoyModel& m, double t);

// Exact inverse on the complement of the open gaps; points of a gap map to
// that gap's insertion parameter. Guarded by a residual check that throws
// NumericFailure carrying the offending input.
double denjoy_phi_inverse(const DenjoyModel& m, double y);

// The homeomorphism itself.
double denjoy_evaluate(const DenjoyModel& m, double y);

// True if y lies strictly inside some materialized gap.
bool denjoy_in_gap_interior(const DenjoyModel& m, double y);

}  // namespace ergolab
