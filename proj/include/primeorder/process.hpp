#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>

#include "primeorder/prime_table.hpp"

namespace primeorder {

class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A memoryless map from a real input u to a natural output y. Inputs are
/// floored before evaluation; the valid floored domain is [1, max_input()].
class StaticProcess {
 public:
  virtual ~StaticProcess() = default;

  /// y(floor(u)). Throws DomainError if floor(u) is outside [1, max_input()].
  virtual std::uint64_t evaluate(double u) const = 0;

  virtual std::uint64_t max_input() const noexcept = 0;

  /// Exact inverse used as the reference answer: the input whose output is y,
  /// or nullopt if no input maps to y.
  virtual std::optional<std::uint64_t> invert(std::uint64_t y) const noexcept = 0;
};

/// y = p(floor(u)) over a prime table.
class PrimeProcess final : public StaticProcess {
 public:
  explicit PrimeProcess(const PrimeTable& table) noexcept : table_(&table) {}

  std::uint64_t evaluate(double u) const override;
  std::uint64_t max_input() const noexcept override { return table_->count(); }
  std::optional<std::uint64_t> invert(std::uint64_t y) const noexcept override {
    return table_->inverse_lookup(y);
  }

  const PrimeTable& table() const noexcept { return *table_; }

 private:
  const PrimeTable* table_;
};

/// y = K * floor(u), the exactly linear process.
class LinearProcess final : public StaticProcess {
 public:
  LinearProcess(double gain, std::uint64_t max_input);

  std::uint64_t evaluate(double u) const override;
  std::uint64_t max_input() const noexcept override { return max_input_; }
  std::optional<std::uint64_t> invert(std::uint64_t y) const noexcept override;

  double gain() const noexcept { return gain_; }

 private:
  double gain_;
  std::uint64_t max_input_;
};

/// K(u) = p(u) / u.
double actual_gain(const PrimeTable& table, Order u);

/// ln u, defined for u >= 2.
double asymptotic_gain(Order u);

/// ln u + ln ln u - 1, defined for u >= 16.
double refined_gain(Order u);

struct GainModel {
  /// Rough average of K(u) over a 30-million-prime table.
  static constexpr double kDefaultAverageGain = 18.0;

  double average_gain = kDefaultAverageGain;

  /// Mean of K(u) over `samples` evenly spaced orders of the table.
  static GainModel from_table(const PrimeTable& table, std::uint64_t samples = 1000);
};

/// Evenly spaced sample orders over [1, n], always including 1 and n.
std::uint64_t sample_order(std::uint64_t i, std::uint64_t sample_count, std::uint64_t n);

/// Writes `u,p,K` rows for sample_count evenly spaced orders.
void export_static_characteristics(const PrimeTable& table, std::uint64_t sample_count,
                                   std::ostream& out);

}  // namespace primeorder
