#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "ergolab/denjoy.hpp"
#include "ergolab/space.hpp"

namespace ergolab {

enum class Family {
  Tent,
  Doubling,
  Logistic,
  Rotation,
  Denjoy,
  NorthSouth,
  Identity,
  PiecewiseLinear,
};

const char* family_name(Family f);

// Self-describing dynamical system f: X -> X on one of the two phase spaces.
struct SystemSpec {
  Family family = Family::Tent;
  Space space = Space::Interval;
  Metric metric{MetricKind::IntervalAbsolute};

  double logistic_r = 4.0;
  double rotation_alpha = 0.0;
  double ns_sink = 0.75;
  double ns_source = 0.25;
  double ns_contraction = 0.5;
  std::vector<std::pair<double, double>> knots;  // piecewise-linear vertices
  std::shared_ptr<const DenjoyModel> denjoy;
};

SystemSpec make_tent();
SystemSpec make_doubling();
SystemSpec make_logistic(double r);
SystemSpec make_rotation(double alpha);
SystemSpec make_denjoy(double alpha = 0.6180339887498949, double lambda = 0.5,
                       double total_gap = 0.5, int truncation_K = 40);
SystemSpec make_north_south(double sink = 0.75, double source = 0.25,
                            double contraction = 0.5);
SystemSpec make_identity(Space space = Space::Interval);
SystemSpec make_piecewise_linear(std::vector<std::pair<double, double>> knots);

// One application of the map, canonicalized into the system's space.
// Throws std::invalid_argument when x lies outside the space.
double evaluate(const SystemSpec& s, double x);

// Orbit step used by long-horizon statistics. The piecewise-expanding
// families are exactly dyadic in binary floating point, so literal double
// iteration reaches the absorbing orbit of 0 within ~55 steps; this step
// adds a fixed position-keyed perturbation of magnitude <= 2^-40 to those
// families, keeping long orbits on generic values. Homeomorphisms and the
// identity are stepped exactly. Pure function of x: bitwise reproducible.
double statistical_step(const SystemSpec& s, double x);

struct Orbit {
  double x0 = 0.0;
  std::vector<double> points;  // f^0(x0) .. f^n(x0)
};

Orbit orbit(const SystemSpec& s, double x0, int n);

// True for the invertible circle families: rotation, denjoy, north-south,
// and the identity on the circle.
bool is_circle_homeomorphism(const SystemSpec& s);

// Birkhoff average of lift displacements (branch in [0,1)) over `iterates`
// steps; returns the representative of the rotation number in [0,1).
// Rejects non-injective families.
double rotation_number_estimate(const SystemSpec& s, double x0, long iterates);

// Flat key-value text form, e.g.
//   family=denjoy alpha=0.6180339887498949 lambda=0.5 total_gap=0.5 K=40
std::string format_system(const SystemSpec& s);
SystemSpec parse_system(const std::string& text);

// One descriptive line per catalog family.
std::vector<std::string> system_catalog();

}  // namespace ergolab
