#include "primeorder/search.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <unordered_set>

#include "primeorder/format.hpp"

namespace primeorder {

namespace {

using StepFn = ControllerState (*)(const ControllerState&, std::uint64_t w, std::uint64_t y,
                                   std::int64_t e, const ControllerConfig&);

ControllerState integral_update(const ControllerState& s, std::uint64_t, std::uint64_t,
                                std::int64_t e, const ControllerConfig& c) {
  return integral_step(s, e, c);
}

ControllerState proportion_update(const ControllerState& s, std::uint64_t w, std::uint64_t y,
                                  std::int64_t, const ControllerConfig& c) {
  return proportion_step(s, w, y, c);
}

// Shared feedback loop: evaluate, compare, update. `config.ti` must already
// be resolved.
SearchResult run_loop(const StaticProcess& process, const SearchRequest& request,
                      ControllerConfig config, StepFn update) {
  config.clamp_high = std::min(config.clamp_high, static_cast<double>(process.max_input()));
  config.validate();
  if (!(request.initial_u >= config.clamp_low && request.initial_u <= config.clamp_high)) {
    throw ConfigError("initial u " + format_number(request.initial_u) +
                      " outside the clamp bounds");
  }

  SearchResult result;
  result.w = request.w;
  if (request.check_membership && !process.invert(request.w)) {
    result.status = SearchStatus::kSetpointNotInTable;
    return result;
  }

  // The update depends on u alone, so revisiting a value of u means the
  // remaining run would repeat forever.
  std::unordered_set<std::uint64_t> visited;
  ControllerState state{request.initial_u, 0};
  const auto w = static_cast<std::int64_t>(request.w);
  for (;;) {
    const std::uint64_t y = process.evaluate(state.u);
    const auto floored = static_cast<std::uint64_t>(std::floor(state.u));
    const std::int64_t e = w - static_cast<std::int64_t>(y);
    result.trace.push_back({state.k, state.u, floored, y, e});

    if (e == 0) {
      result.status = SearchStatus::kConverged;
      result.order = floored;
      break;
    }
    if (result.trace.size() >= config.max_steps) {
      result.status = SearchStatus::kBudgetExhausted;
      break;
    }
    visited.insert(std::bit_cast<std::uint64_t>(state.u));
    state = update(state, request.w, y, e, config);
    if (visited.contains(std::bit_cast<std::uint64_t>(state.u))) {
      result.status = SearchStatus::kCycleDetected;
      break;
    }
  }
  result.steps = result.trace.size();
  return result;
}

}  // namespace

std::string_view to_string(SearchStatus status) noexcept {
  switch (status) {
    case SearchStatus::kConverged: return "converged";
    case SearchStatus::kBudgetExhausted: return "budget_exhausted";
    case SearchStatus::kCycleDetected: return "cycle_detected";
    case SearchStatus::kSetpointNotInTable: return "setpoint_not_in_table";
  }
  return "unknown";
}

double resolve_tuning(const SearchRequest& request, const GainModel& gain_model) {
  const auto& config = request.config;
  switch (config.tuning) {
    case Tuning::kBalanced:
      return tune_balanced(config.balanced_gain.value_or(gain_model.average_gain));
    case Tuning::kLogarithmic:
      return tune_logarithmic(request.w);
    case Tuning::kExplicit:
      if (!(config.ti > 0.0)) throw ConfigError("explicit T_i must be positive");
      return config.ti;
  }
  throw ConfigError("unknown tuning");
}

SearchResult run_search(const StaticProcess& process, const SearchRequest& request,
                        const GainModel& gain_model) {
  ControllerConfig config = request.config;
  // A setpoint absent from the table is reported, not a tuning error.
  if (request.check_membership && !process.invert(request.w)) {
    return run_loop(process, request, config, integral_update);
  }
  config.ti = resolve_tuning(request, gain_model);
  auto result = run_loop(process, request, config, integral_update);
  result.ti = config.ti;
  return result;
}

SearchResult run_proportion_search(const StaticProcess& process, const SearchRequest& request) {
  ControllerConfig config = request.config;
  // T_i takes no part in the proportion update; pin it so validation passes.
  config.ti = 1.0;
  return run_loop(process, request, config, proportion_update);
}

SearchResult search(const StaticProcess& process, const SearchRequest& request,
                    const GainModel& gain_model) {
  switch (request.config.mode) {
    case ControlMode::kIntegral: return run_search(process, request, gain_model);
    case ControlMode::kProportion: return run_proportion_search(process, request);
  }
  throw ConfigError("unknown control mode");
}

// ---------------------------------------------------------------------------
// Benchmark

namespace {

BenchmarkRow benchmark_row(const PrimeTable& table, std::uint64_t w,
                           const ControllerConfig& config, const GainModel& gain_model) {
  BenchmarkRow row;
  row.w = w;
  row.mode = config.mode;
  row.tuning = config.tuning;
  row.oracle_order = table.inverse_lookup(w);

  SearchRequest request;
  request.w = w;
  request.config = config;
  const auto result = search(table, request, gain_model);
  row.steps = result.steps;
  row.status = result.status;
  row.controller_order = result.order;
  row.agree = result.status == SearchStatus::kConverged && row.oracle_order.has_value() &&
              *row.controller_order == *row.oracle_order;
  return row;
}

}  // namespace

BenchmarkReport run_benchmark(const PrimeTable& table, std::span<const std::uint64_t> setpoints,
                              std::span<const ControllerConfig> modes,
                              const GainModel& gain_model) {
  BenchmarkReport report;
  const std::size_t n_modes = modes.size();
  report.rows.resize(setpoints.size() * n_modes);
  const auto n_jobs = static_cast<std::ptrdiff_t>(report.rows.size());

#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t j = 0; j < n_jobs; ++j) {
    const auto idx = static_cast<std::size_t>(j);
    report.rows[idx] =
        benchmark_row(table, setpoints[idx / n_modes], modes[idx % n_modes], gain_model);
  }
  return report;
}

BenchmarkReport run_benchmark_serial(const PrimeTable& table,
                                     std::span<const std::uint64_t> setpoints,
                                     std::span<const ControllerConfig> modes,
                                     const GainModel& gain_model) {
  BenchmarkReport report;
  report.rows.reserve(setpoints.size() * modes.size());
  for (const auto w : setpoints) {
    for (const auto& config : modes) {
      report.rows.push_back(benchmark_row(table, w, config, gain_model));
    }
  }
  return report;
}

std::uint64_t BenchmarkReport::min_steps() const noexcept {
  if (rows.empty()) return 0;
  return std::min_element(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
           return a.steps < b.steps;
         })->steps;
}

std::uint64_t BenchmarkReport::max_steps() const noexcept {
  if (rows.empty()) return 0;
  return std::max_element(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
           return a.steps < b.steps;
         })->steps;
}

double BenchmarkReport::median_steps() const noexcept {
  if (rows.empty()) return 0.0;
  std::vector<std::uint64_t> steps;
  steps.reserve(rows.size());
  for (const auto& r : rows) steps.push_back(r.steps);
  std::sort(steps.begin(), steps.end());
  const std::size_t mid = steps.size() / 2;
  if (steps.size() % 2 == 1) return static_cast<double>(steps[mid]);
  return 0.5 * static_cast<double>(steps[mid - 1] + steps[mid]);
}

std::optional<double> BenchmarkReport::agreement_rate() const noexcept {
  std::size_t converged = 0;
  std::size_t agreeing = 0;
  for (const auto& r : rows) {
    if (r.status != SearchStatus::kConverged) continue;
    ++converged;
    if (r.agree) ++agreeing;
  }
  if (converged == 0) return std::nullopt;
  return static_cast<double>(agreeing) / static_cast<double>(converged);
}

bool BenchmarkReport::all_agree() const noexcept {
  return std::all_of(rows.begin(), rows.end(), [](const auto& r) { return r.agree; });
}

// ---------------------------------------------------------------------------
// CSV

void export_trace_csv(const SearchResult& result, std::ostream& out) {
  out << "k,u_real,u_floored,y,e\n";
  for (const auto& r : result.trace) {
    out << r.k << ',' << format_number(r.u_real) << ',' << r.u_floored << ',' << r.y << ','
        << r.e << '\n';
  }
  if (!out) throw std::runtime_error("failed writing trace");
}

namespace {

template <typename T>
T parse_field(std::string_view field, std::size_t line) {
  T value{};
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc{} || ptr != field.data() + field.size()) {
    throw std::runtime_error("trace line " + std::to_string(line) + ": bad field '" +
                             std::string(field) + "'");
  }
  return value;
}

}  // namespace

std::vector<StepRecord> read_trace_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "k,u_real,u_floored,y,e") {
    throw std::runtime_error("trace: missing header");
  }
  std::vector<StepRecord> records;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string_view> fields;
    std::string_view rest(line);
    for (;;) {
      const auto comma = rest.find(',');
      fields.push_back(rest.substr(0, comma));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (fields.size() != 5) {
      throw std::runtime_error("trace line " + std::to_string(line_no) + ": expected 5 fields");
    }
    records.push_back({parse_field<std::uint64_t>(fields[0], line_no),
                       parse_field<double>(fields[1], line_no),
                       parse_field<std::uint64_t>(fields[2], line_no),
                       parse_field<std::uint64_t>(fields[3], line_no),
                       parse_field<std::int64_t>(fields[4], line_no)});
  }
  return records;
}

void export_benchmark_csv(const BenchmarkReport& report, std::ostream& out) {
  out << "w,mode,tuning,steps,status,controller_order,oracle_order,agree\n";
  for (const auto& r : report.rows) {
    out << r.w << ',' << to_string(r.mode) << ','
        << (r.mode == ControlMode::kProportion ? std::string_view("none") : to_string(r.tuning))
        << ',' << r.steps << ',' << to_string(r.status) << ',';
    if (r.controller_order) out << *r.controller_order;
    out << ',';
    if (r.oracle_order) out << *r.oracle_order;
    out << ',' << (r.agree ? "true" : "false") << '\n';
  }
  if (!out) throw std::runtime_error("failed writing benchmark report");
}

void write_benchmark_summary(const BenchmarkReport& report, std::ostream& out) {
  out << "rows: " << report.rows.size() << '\n';
  if (report.rows.empty()) {
    out << "steps: n/a\nagreement: n/a\n";
    return;
  }
  out << "steps: min " << report.min_steps() << ", median "
      << format_number(report.median_steps()) << ", max " << report.max_steps() << '\n';
  const auto rate = report.agreement_rate();
  out << "agreement: " << (rate ? format_number(*rate * 100.0, 1) + "%" : "n/a") << '\n';
}

}  // namespace primeorder
