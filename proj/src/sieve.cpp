#include "primeorder/sieve.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace primeorder {

namespace {

// Odd numbers covered by one segment; 256 KiB of flags fits in L2.
constexpr std::uint64_t kSegmentOdds = 256 * 1024;

std::uint64_t isqrt(std::uint64_t x) {
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(x)));
  while (r * r > x) --r;
  while ((r + 1) * (r + 1) <= x) ++r;
  return r;
}

// Odd primes up to and including limit.
std::vector<std::uint32_t> odd_base_primes(std::uint64_t limit) {
  std::vector<std::uint32_t> base;
  if (limit < 3) return base;
  std::vector<char> composite(limit + 1, 0);
  for (std::uint64_t i = 3; i <= limit; i += 2) {
    if (composite[i]) continue;
    base.push_back(static_cast<std::uint32_t>(i));
    for (std::uint64_t j = i * i; j <= limit; j += 2 * i) composite[j] = 1;
  }
  return base;
}

// Sieves the odd numbers in [lo, hi) (lo odd) and appends primes to out.
void sieve_segment(std::uint64_t lo, std::uint64_t hi,
                   const std::vector<std::uint32_t>& base, std::vector<char>& flags,
                   std::vector<std::uint64_t>& out) {
  const std::uint64_t odds = (hi - lo + 1) / 2;
  flags.assign(odds, 0);
  for (const std::uint64_t p : base) {
    const std::uint64_t sq = p * p;
    if (sq >= hi) break;
    std::uint64_t start = sq;
    if (start < lo) {
      start = (lo + p - 1) / p * p;
      if (start % 2 == 0) start += p;
    }
    for (std::uint64_t m = (start - lo) / 2; m < odds; m += p) flags[m] = 1;
  }
  for (std::uint64_t i = 0; i < odds; ++i) {
    if (!flags[i]) out.push_back(lo + 2 * i);
  }
}

}  // namespace

std::uint64_t nth_prime_bound(std::uint64_t n) {
  if (n < 6) return 15;
  const double x = static_cast<double>(n);
  const double lx = std::log(x);
  const double estimate = x * (lx + std::log(lx) - 1.0) * 1.2;
  return std::max<std::uint64_t>(15, static_cast<std::uint64_t>(std::ceil(estimate)));
}

std::vector<std::uint64_t> sieve_range(std::uint64_t lo, std::uint64_t hi) {
  std::vector<std::uint64_t> primes;
  if (hi <= lo || hi <= 2) return primes;
  if (lo <= 2) primes.push_back(2);

  std::uint64_t first = std::max<std::uint64_t>(lo, 3);
  if (first % 2 == 0) ++first;
  if (first >= hi) return primes;

  const auto base = odd_base_primes(isqrt(hi - 1));
  const std::uint64_t span = 2 * kSegmentOdds;
  const std::uint64_t segments = (hi - first + span - 1) / span;
  std::vector<std::vector<std::uint64_t>> chunks(segments);

  const auto n_segments = static_cast<std::ptrdiff_t>(segments);
#pragma omp parallel
  {
    std::vector<char> flags;
#pragma omp for schedule(dynamic, 4)
    for (std::ptrdiff_t s = 0; s < n_segments; ++s) {
      const std::uint64_t seg_lo = first + static_cast<std::uint64_t>(s) * span;
      const std::uint64_t seg_hi = std::min(hi, seg_lo + span);
      sieve_segment(seg_lo, seg_hi, base, flags, chunks[static_cast<std::size_t>(s)]);
    }
  }

  std::size_t total = primes.size();
  for (const auto& c : chunks) total += c.size();
  primes.reserve(total);
  for (auto& c : chunks) {
    primes.insert(primes.end(), c.begin(), c.end());
    std::vector<std::uint64_t>().swap(c);
  }
  return primes;
}

std::vector<std::uint64_t> sieve_range_serial(std::uint64_t lo, std::uint64_t hi) {
  std::vector<std::uint64_t> primes;
  if (hi <= lo || hi <= 2) return primes;
  std::vector<char> composite(hi, 0);
  composite[0] = composite[1] = 1;
  for (std::uint64_t i = 2; i * i < hi; ++i) {
    if (composite[i]) continue;
    for (std::uint64_t j = i * i; j < hi; j += i) composite[j] = 1;
  }
  for (std::uint64_t i = lo; i < hi; ++i) {
    if (!composite[i]) primes.push_back(i);
  }
  return primes;
}

}  // namespace primeorder
