#pragma once

#include <cmath>
#include <string>

#include "bolab/error.hpp"

namespace bolab {

enum class Integrator { ifrk4, etdrk4 };
enum class DealiasRule { two_thirds, none };
enum class ConservationPolicy { fail, warn };

inline std::string to_string(Integrator i) {
  return i == Integrator::ifrk4 ? "IFRK4" : "ETDRK4";
}
inline std::string to_string(DealiasRule d) {
  return d == DealiasRule::two_thirds ? "two_thirds" : "none";
}
inline std::string to_string(ConservationPolicy p) {
  return p == ConservationPolicy::fail ? "fail" : "warn";
}

inline Integrator parse_integrator(const std::string& s) {
  if (s == "IFRK4" || s == "ifrk4") return Integrator::ifrk4;
  if (s == "ETDRK4" || s == "etdrk4") return Integrator::etdrk4;
  throw ValidationError("unknown integrator '" + s +
                        "' (expected IFRK4 or ETDRK4)");
}
inline DealiasRule parse_dealias(const std::string& s) {
  if (s == "two_thirds") return DealiasRule::two_thirds;
  if (s == "none") return DealiasRule::none;
  throw ValidationError("unknown dealias rule '" + s +
                        "' (expected two_thirds or none)");
}
inline ConservationPolicy parse_policy(const std::string& s) {
  if (s == "fail") return ConservationPolicy::fail;
  if (s == "warn") return ConservationPolicy::warn;
  throw ValidationError("unknown conservation policy '" + s +
                        "' (expected fail or warn)");
}

struct SolverConfig {
  double dt = 1e-3;
  double t_end = 1.0;
  Integrator integrator = Integrator::ifrk4;
  DealiasRule dealias = DealiasRule::two_thirds;
  int record_every = 10;
  double conservation_tolerance = 1e-8;
  ConservationPolicy conservation_policy = ConservationPolicy::fail;
  /// When false only the linear part u_t + H u_xx = 0 is integrated.
  bool nonlinear = true;

  void validate() const {
    if (!(dt > 0.0) || dt > 0.1)
      throw ValidationError("solver.dt must lie in (0, 0.1], got " +
                            std::to_string(dt));
    if (!(t_end > 0.0) || !std::isfinite(t_end))
      throw ValidationError("solver.t_end must be positive");
    if (record_every < 1)
      throw ValidationError("solver.record_every must be >= 1");
    if (!(conservation_tolerance > 0.0))
      throw ValidationError("solver.conservation_tolerance must be positive");
  }

  long long step_count() const {
    return static_cast<long long>(std::llround(t_end / dt));
  }
};

}  // namespace bolab
