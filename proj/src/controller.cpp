#include "primeorder/controller.hpp"

#include <algorithm>
#include <cmath>

namespace primeorder {

std::string_view to_string(ControlMode mode) noexcept {
  switch (mode) {
    case ControlMode::kIntegral: return "integral";
    case ControlMode::kProportion: return "proportion";
  }
  return "unknown";
}

std::string_view to_string(Tuning tuning) noexcept {
  switch (tuning) {
    case Tuning::kBalanced: return "balanced";
    case Tuning::kLogarithmic: return "log";
    case Tuning::kExplicit: return "explicit";
  }
  return "unknown";
}

void ControllerConfig::validate() const {
  if (!(ti > 0.0) || !std::isfinite(ti)) throw ConfigError("T_i must be positive and finite");
  if (kc != 1.0) throw ConfigError("controller gain K_c is fixed at 1");
  if (clamp_low != 1.0) throw ConfigError("lower clamp must be 1");
  if (!(clamp_high >= clamp_low)) throw ConfigError("upper clamp below lower clamp");
  if (max_steps < 1) throw ConfigError("max_steps must be at least 1");
}

double tune_balanced(double gain) {
  if (!(gain > 0.0) || !std::isfinite(gain)) {
    throw ConfigError("balanced tuning needs a positive gain");
  }
  return gain;
}

double tune_logarithmic(std::uint64_t w) {
  if (w < 2) throw ConfigError("logarithmic tuning needs a setpoint >= 2");
  return std::log(static_cast<double>(w));
}

double clamp_antiwindup(double u, const ControllerConfig& config) noexcept {
  return std::min(std::max(u, config.clamp_low), config.clamp_high);
}

ControllerState integral_step(const ControllerState& state, std::int64_t e,
                              const ControllerConfig& config) noexcept {
  const double next = state.u + config.kc * static_cast<double>(e) / config.ti;
  return {clamp_antiwindup(next, config), state.k + 1};
}

ControllerState proportion_step(const ControllerState& state, std::uint64_t w,
                                std::uint64_t y, const ControllerConfig& config) noexcept {
  // w == y must leave u untouched; u * w / w can round away from u.
  const double next =
      w == y ? state.u : state.u * static_cast<double>(w) / static_cast<double>(y);
  return {clamp_antiwindup(next, config), state.k + 1};
}

}  // namespace primeorder
