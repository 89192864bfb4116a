#pragma once

#include <vector>

#include "heavynet/eigensolvers.hpp"
#include "heavynet/measured_graph.hpp"
#include "heavynet/topology.hpp"

namespace heavynet {

// Leading-order conductance network of the pinched surface: vertex pieces keep
// their areas, each collar of core length pi * delta * w_e conducts
// length / pi = delta * w_e.
MeasuredGraph pinch_model(const SurfaceModel& s, double delta);

struct RescaledSpectrum {
  std::vector<double> eigenvalues;  // pinched eigenvalues divided by delta
  double curvature = 0.0;           // -1 / delta after the metric rescaling
};

// Scaling the metric by delta divides every eigenvalue by delta.
RescaledSpectrum rescaled_spectrum(const EigenResult& pinched, double delta);

}  // namespace heavynet
