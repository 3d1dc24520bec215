#pragma once

#include <cstdint>
#include <vector>

namespace primeorder {

/// Primes in [lo, hi) by an odds-only segmented sieve of Eratosthenes.
/// Segments are distributed over OpenMP threads when built with OpenMP.
std::vector<std::uint64_t> sieve_range(std::uint64_t lo, std::uint64_t hi);

/// Serial reference for sieve_range: one flat byte array over [0, hi),
/// no segmentation and no threading. Kept for testing and benchmarking.
std::vector<std::uint64_t> sieve_range_serial(std::uint64_t lo, std::uint64_t hi);

/// Upper bound for the n-th prime used to size the first sieve pass:
/// n(ln n + ln ln n - 1) * 1.2 for n >= 6, never below 15.
std::uint64_t nth_prime_bound(std::uint64_t n);

}  // namespace primeorder
