#pragma once

#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string_view>
#include <vector>

#include "primeorder/controller.hpp"
#include "primeorder/prime_table.hpp"
#include "primeorder/process.hpp"

namespace primeorder {

struct SearchRequest {
  std::uint64_t w = 2;
  ControllerConfig config;
  double initial_u = 1.0;
  /// When set, setpoints the process cannot produce are rejected up front
  /// instead of being left to cycle detection or the step budget.
  bool check_membership = true;
};

enum class SearchStatus {
  kConverged,
  kBudgetExhausted,
  kCycleDetected,
  kSetpointNotInTable,
};

std::string_view to_string(SearchStatus status) noexcept;

/// One process evaluation of a search.
struct StepRecord {
  std::uint64_t k = 0;
  double u_real = 0.0;
  std::uint64_t u_floored = 0;
  std::uint64_t y = 0;
  std::int64_t e = 0;

  friend bool operator==(const StepRecord&, const StepRecord&) = default;
};

struct SearchResult {
  SearchStatus status = SearchStatus::kBudgetExhausted;
  std::uint64_t w = 0;
  /// Set iff status is kConverged.
  std::optional<Order> order;
  /// Number of process evaluations, the initial one included.
  std::uint64_t steps = 0;
  /// Integration time constant used; 0 in proportion mode.
  double ti = 0.0;
  std::vector<StepRecord> trace;
};

/// T_i for the request: balanced uses the configured gain or the model's
/// average, logarithmic uses ln w, explicit passes config.ti through.
double resolve_tuning(const SearchRequest& request, const GainModel& gain_model);

/// Runs the incremental integral loop until y == w, the step budget runs
/// out, or the controller state revisits an earlier value.
SearchResult run_search(const StaticProcess& process, const SearchRequest& request,
                        const GainModel& gain_model = {});

/// Same loop with the simple-proportion update u' = u * w / y.
SearchResult run_proportion_search(const StaticProcess& process, const SearchRequest& request);

/// Dispatches on request.config.mode.
SearchResult search(const StaticProcess& process, const SearchRequest& request,
                    const GainModel& gain_model = {});

inline SearchResult search(const PrimeTable& table, const SearchRequest& request,
                           const GainModel& gain_model = {}) {
  return search(PrimeProcess(table), request, gain_model);
}

struct BenchmarkRow {
  std::uint64_t w = 0;
  ControlMode mode = ControlMode::kIntegral;
  Tuning tuning = Tuning::kLogarithmic;
  std::uint64_t steps = 0;
  SearchStatus status = SearchStatus::kBudgetExhausted;
  std::optional<Order> controller_order;
  std::optional<Order> oracle_order;
  bool agree = false;

  friend bool operator==(const BenchmarkRow&, const BenchmarkRow&) = default;
};

struct BenchmarkReport {
  std::vector<BenchmarkRow> rows;

  std::uint64_t min_steps() const noexcept;
  double median_steps() const noexcept;
  std::uint64_t max_steps() const noexcept;
  /// Fraction of converged rows whose order matches the oracle; empty when
  /// no row converged.
  std::optional<double> agreement_rate() const noexcept;
  /// True when every row converged and agrees with the oracle.
  bool all_agree() const noexcept;
};

/// Runs every (setpoint, config) pair and cross-checks converged orders
/// against inverse_lookup. Rows are ordered setpoint-major. Pairs are
/// distributed over OpenMP threads when available.
BenchmarkReport run_benchmark(const PrimeTable& table, std::span<const std::uint64_t> setpoints,
                              std::span<const ControllerConfig> modes,
                              const GainModel& gain_model = {});

/// Single-threaded reference for run_benchmark.
BenchmarkReport run_benchmark_serial(const PrimeTable& table,
                                     std::span<const std::uint64_t> setpoints,
                                     std::span<const ControllerConfig> modes,
                                     const GainModel& gain_model = {});

/// `k,u_real,u_floored,y,e` rows.
void export_trace_csv(const SearchResult& result, std::ostream& out);

/// Parses the output of export_trace_csv. Throws std::runtime_error on
/// malformed input.
std::vector<StepRecord> read_trace_csv(std::istream& in);

/// `w,mode,tuning,steps,status,controller_order,oracle_order,agree` rows.
void export_benchmark_csv(const BenchmarkReport& report, std::ostream& out);

void write_benchmark_summary(const BenchmarkReport& report, std::ostream& out);

}  // namespace primeorder
