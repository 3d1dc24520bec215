#include "primeorder/process.hpp"

#include <cmath>

#include "primeorder/format.hpp"

namespace primeorder {

namespace {

std::uint64_t floored_input(double u, std::uint64_t max_input) {
  const double f = std::floor(u);
  if (!(f >= 1.0) || f > static_cast<double>(max_input)) {
    throw DomainError("process input " + format_number(u) + " outside [1, " +
                      std::to_string(max_input + 1) + ")");
  }
  return static_cast<std::uint64_t>(f);
}

}  // namespace

std::uint64_t PrimeProcess::evaluate(double u) const {
  return table_->nth_prime(floored_input(u, table_->count()));
}

LinearProcess::LinearProcess(double gain, std::uint64_t max_input)
    : gain_(gain), max_input_(max_input) {
  if (!(gain > 0.0)) throw DomainError("linear process gain must be positive");
  if (max_input < 1) throw DomainError("linear process needs a non-empty domain");
}

std::uint64_t LinearProcess::evaluate(double u) const {
  const auto n = floored_input(u, max_input_);
  return static_cast<std::uint64_t>(std::llround(gain_ * static_cast<double>(n)));
}

std::optional<std::uint64_t> LinearProcess::invert(std::uint64_t y) const noexcept {
  const double q = static_cast<double>(y) / gain_;
  const double r = std::round(q);
  if (r < 1.0 || r > static_cast<double>(max_input_)) return std::nullopt;
  const auto n = static_cast<std::uint64_t>(r);
  if (static_cast<std::uint64_t>(std::llround(gain_ * r)) != y) return std::nullopt;
  return n;
}

double actual_gain(const PrimeTable& table, Order u) {
  return static_cast<double>(table.nth_prime(u)) / static_cast<double>(u);
}

double asymptotic_gain(Order u) {
  if (u < 2) throw DomainError("asymptotic gain needs u >= 2");
  return std::log(static_cast<double>(u));
}

double refined_gain(Order u) {
  if (u < 16) throw DomainError("refined gain needs u >= 16");
  const double l = std::log(static_cast<double>(u));
  return l + std::log(l) - 1.0;
}

GainModel GainModel::from_table(const PrimeTable& table, std::uint64_t samples) {
  if (samples < 2) samples = 2;
  double sum = 0.0;
  for (std::uint64_t i = 0; i < samples; ++i) {
    sum += actual_gain(table, sample_order(i, samples, table.count()));
  }
  return GainModel{sum / static_cast<double>(samples)};
}

std::uint64_t sample_order(std::uint64_t i, std::uint64_t sample_count, std::uint64_t n) {
  if (sample_count < 2 || i == 0) return 1;
  if (i + 1 >= sample_count) return n;
  // 128-bit to keep i*(n-1) exact for large tables.
  const auto num = static_cast<unsigned __int128>(i) * (n - 1) + (sample_count - 1) / 2;
  return 1 + static_cast<std::uint64_t>(num / (sample_count - 1));
}

void export_static_characteristics(const PrimeTable& table, std::uint64_t sample_count,
                                   std::ostream& out) {
  if (sample_count < 2) throw DomainError("need at least 2 samples");
  out << "u,p,K\n";
  for (std::uint64_t i = 0; i < sample_count; ++i) {
    const Order u = sample_order(i, sample_count, table.count());
    out << u << ',' << table.nth_prime(u) << ',' << format_number(actual_gain(table, u))
        << '\n';
  }
  if (!out) throw TableError(TableError::Kind::kIo, "failed writing characteristics");
}

}  // namespace primeorder
