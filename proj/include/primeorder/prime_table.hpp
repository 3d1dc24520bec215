#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace primeorder {

/// Index-order of a prime: 1-based position in the ascending prime sequence.
using Order = std::uint64_t;
using Prime = std::uint64_t;

class TableError : public std::runtime_error {
 public:
  enum class Kind {
    kInvalidArgument,
    kIndexOutOfRange,
    kResourceExhausted,
    kIo,
    kFormat,
    kChecksumMismatch,
    kTruncated,
  };

  TableError(Kind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

/// Immutable table of the first N primes, indexed 1..N.
class PrimeTable {
 public:
  /// Takes ownership of an ascending prime list; validates the invariants
  /// that can be checked cheaply (non-empty, starts at 2, strictly increasing).
  explicit PrimeTable(std::vector<Prime> primes);

  std::uint64_t count() const noexcept { return primes_.size(); }

  /// p(u). Throws TableError(kIndexOutOfRange) unless 1 <= u <= count().
  Prime nth_prime(Order u) const;

  /// Largest stored prime, p(N).
  Prime back() const noexcept { return primes_.back(); }

  /// Binary-search inverse: u with p(u) == w, or nullopt if w is absent.
  std::optional<Order> inverse_lookup(Prime w) const noexcept;

  std::span<const Prime> values() const noexcept { return primes_; }

  friend bool operator==(const PrimeTable&, const PrimeTable&) = default;

 private:
  std::vector<Prime> primes_;
};

/// The first n primes. Sizes the sieve from nth_prime_bound(n) and grows the
/// range by 25% until n primes are found.
PrimeTable build_table(std::uint64_t n);

// On-disk layout, all integers little-endian:
//   [0, 8)    magic "PRIMETBL"
//   [8, 12)   version (u32) = kTableVersion
//   [12, 16)  reserved (u32) = 0
//   [16, 24)  count (u64)
//   [24, 32)  checksum (u64), FNV-1a over the payload bytes
//   [32, ...) count x u64 primes
inline constexpr std::array<char, 8> kTableMagic = {'P', 'R', 'I', 'M', 'E', 'T', 'B', 'L'};
inline constexpr std::uint32_t kTableVersion = 1;
inline constexpr std::size_t kTableHeaderSize = 32;

struct TableHeader {
  std::array<char, 8> magic = kTableMagic;
  std::uint32_t version = kTableVersion;
  std::uint32_t reserved = 0;
  std::uint64_t count = 0;
  std::uint64_t checksum = 0;
};

/// 64-bit FNV-1a over the little-endian encoding of the primes.
std::uint64_t payload_checksum(std::span<const Prime> primes);

/// Writes to a sibling temporary file and renames it into place, so a failed
/// write never leaves a loadable file at destination.
void save_table(const PrimeTable& table, const std::filesystem::path& destination);

PrimeTable load_table(const std::filesystem::path& source);

}  // namespace primeorder
