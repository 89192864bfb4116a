#include "heavynet/surface.hpp"

#include "heavynet/errors.hpp"

namespace heavynet {

MeasuredGraph pinch_model(const SurfaceModel& s, double delta) {
  if (!(delta > 0.0)) throw Error(ErrorCode::kInvalidArgument, "delta must be positive");
  s.validate();
  return s.dual_graph.with_scaled_weights(delta);
}

RescaledSpectrum rescaled_spectrum(const EigenResult& pinched, double delta) {
  if (!(delta > 0.0)) throw Error(ErrorCode::kInvalidArgument, "delta must be positive");
  RescaledSpectrum out;
  out.eigenvalues.reserve(static_cast<std::size_t>(pinched.eigenvalues.size()));
  for (double x : pinched.eigenvalues) out.eigenvalues.push_back(x / delta);
  out.curvature = -1.0 / delta;
  return out;
}

}  // namespace heavynet
