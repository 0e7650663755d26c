#include "phasekit/params.hpp"

#include "phasekit/error.hpp"

namespace phasekit {

void OscParams::validate() const {
  auto ok = [](double v) { return std::isfinite(v) && v > 0.0; };
  if (!ok(m)) throw InvalidArgument("mass must be positive and finite");
  if (!ok(omega)) throw InvalidArgument("omega must be positive and finite");
  if (!ok(sigma)) throw InvalidArgument("sigma must be positive and finite");
}

} // namespace phasekit
