// Times the OpenMP kernels against their serial references:
//   sieve_range vs sieve_range_serial, run_benchmark vs run_benchmark_serial.
//
// usage: primeorder_bench [table_count] [sweep_setpoints]

#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <random>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "primeorder/format.hpp"
#include "primeorder/prime_table.hpp"
#include "primeorder/search.hpp"
#include "primeorder/sieve.hpp"

namespace {

using namespace primeorder;
using Clock = std::chrono::steady_clock;

template <typename F>
double time_s(F&& f) {
  const auto t0 = Clock::now();
  f();
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

void report(const char* name, double serial_s, double parallel_s, bool match) {
  std::cout << name << ": serial " << format_number(serial_s, 3) << " s, parallel "
            << format_number(parallel_s, 3) << " s, speedup "
            << format_number(serial_s / parallel_s, 2) << "x, outputs "
            << (match ? "match" : "DIFFER") << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  const std::uint64_t count = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 10'000'000;
  const std::size_t sweep = argc > 2 ? std::strtoull(argv[2], nullptr, 10) : 20'000;

#ifdef _OPENMP
  std::cout << "threads: " << omp_get_max_threads() << '\n';
#else
  std::cout << "threads: 1 (built without OpenMP)\n";
#endif

  const std::uint64_t bound = nth_prime_bound(count);
  std::vector<std::uint64_t> serial;
  std::vector<std::uint64_t> parallel;
  const double sieve_serial = time_s([&] { serial = sieve_range_serial(0, bound); });
  const double sieve_parallel = time_s([&] { parallel = sieve_range(0, bound); });
  std::cout << "sieve bound: " << bound << ", primes: " << parallel.size() << '\n';
  const bool sieve_match = serial == parallel;
  report("sieve", sieve_serial, sieve_parallel, sieve_match);
  serial.clear();
  serial.shrink_to_fit();
  parallel.clear();
  parallel.shrink_to_fit();

  std::optional<PrimeTable> table;
  const double build = time_s([&] { table.emplace(build_table(count)); });
  std::cout << "build_table(" << count << "): " << format_number(build, 3) << " s\n";

  std::mt19937_64 rng(20240229);
  std::uniform_int_distribution<std::uint64_t> pick(1, table->count());
  std::vector<std::uint64_t> setpoints(sweep);
  for (auto& w : setpoints) w = table->nth_prime(pick(rng));

  std::vector<ControllerConfig> modes(3);
  for (auto& m : modes) m.clamp_high = static_cast<double>(table->count());
  modes[0].tuning = Tuning::kLogarithmic;
  modes[1].tuning = Tuning::kBalanced;
  modes[2].mode = ControlMode::kProportion;

  BenchmarkReport serial_report;
  BenchmarkReport parallel_report;
  const double sweep_serial =
      time_s([&] { serial_report = run_benchmark_serial(*table, setpoints, modes); });
  const double sweep_parallel =
      time_s([&] { parallel_report = run_benchmark(*table, setpoints, modes); });
  const bool sweep_match = serial_report.rows == parallel_report.rows;
  report("search sweep", sweep_serial, sweep_parallel, sweep_match);
  write_benchmark_summary(parallel_report, std::cout);
  return sieve_match && sweep_match ? 0 : 1;
}
