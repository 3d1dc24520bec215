#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string_view>

namespace primeorder {

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class ControlMode { kIntegral, kProportion };

/// How the integration time constant T_i is chosen before a run.
enum class Tuning {
  kBalanced,     // T_i = K, the process gain
  kLogarithmic,  // T_i = ln w
  kExplicit,     // T_i given directly
};

std::string_view to_string(ControlMode mode) noexcept;
std::string_view to_string(Tuning tuning) noexcept;

struct ControllerConfig {
  ControlMode mode = ControlMode::kIntegral;
  Tuning tuning = Tuning::kLogarithmic;
  /// Integration time constant. For kExplicit this is the user value; for the
  /// other tunings it is overwritten by resolve_tuning().
  double ti = 18.0;
  /// Gain used by balanced tuning; when empty the search falls back to the
  /// gain model's average gain.
  std::optional<double> balanced_gain;
  /// Controller gain, held at 1.
  double kc = 1.0;
  double clamp_low = 1.0;
  /// Upper antiwindup bound. A search lowers it to the process domain size
  /// when the table is smaller.
  double clamp_high = 30'000'000.0;
  std::uint64_t max_steps = 100;

  /// Throws ConfigError if any field violates its invariant.
  void validate() const;
};

/// Real-valued controller output u(k) and the step counter k.
struct ControllerState {
  double u = 1.0;
  std::uint64_t k = 0;

  friend bool operator==(const ControllerState&, const ControllerState&) = default;
};

/// T_i = K. Throws ConfigError for K <= 0.
double tune_balanced(double gain);

/// T_i = ln w. Throws ConfigError for w < 2.
double tune_logarithmic(std::uint64_t w);

/// Antiwindup: min(max(u, clamp_low), clamp_high).
double clamp_antiwindup(double u, const ControllerConfig& config) noexcept;

/// Incremental integral law u' = clamp(u + kc * e / ti).
ControllerState integral_step(const ControllerState& state, std::int64_t e,
                              const ControllerConfig& config) noexcept;

/// Simple-proportion update u' = clamp(u * w / y). Requires y > 0.
ControllerState proportion_step(const ControllerState& state, std::uint64_t w,
                                std::uint64_t y, const ControllerConfig& config) noexcept;

}  // namespace primeorder
