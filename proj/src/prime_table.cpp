#include "primeorder/prime_table.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <limits>
#include <new>
#include <system_error>

#include "primeorder/sieve.hpp"

namespace primeorder {

namespace {

using Kind = TableError::Kind;

// Beyond this count the sieve bound alone would exceed any realistic host.
constexpr std::uint64_t kMaxTableCount = std::uint64_t{1} << 36;

template <typename T>
void put_le(unsigned char* dst, T value) {
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    dst[i] = static_cast<unsigned char>(value >> (8 * i));
  }
}

template <typename T>
T get_le(const unsigned char* src) {
  T value = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    value |= static_cast<T>(src[i]) << (8 * i);
  }
  return value;
}

std::array<unsigned char, kTableHeaderSize> encode_header(const TableHeader& h) {
  std::array<unsigned char, kTableHeaderSize> buf{};
  std::memcpy(buf.data(), h.magic.data(), h.magic.size());
  put_le<std::uint32_t>(buf.data() + 8, h.version);
  put_le<std::uint32_t>(buf.data() + 12, h.reserved);
  put_le<std::uint64_t>(buf.data() + 16, h.count);
  put_le<std::uint64_t>(buf.data() + 24, h.checksum);
  return buf;
}

TableHeader decode_header(const std::array<unsigned char, kTableHeaderSize>& buf) {
  TableHeader h;
  std::memcpy(h.magic.data(), buf.data(), h.magic.size());
  h.version = get_le<std::uint32_t>(buf.data() + 8);
  h.reserved = get_le<std::uint32_t>(buf.data() + 12);
  h.count = get_le<std::uint64_t>(buf.data() + 16);
  h.checksum = get_le<std::uint64_t>(buf.data() + 24);
  return h;
}

}  // namespace

PrimeTable::PrimeTable(std::vector<Prime> primes) : primes_(std::move(primes)) {
  if (primes_.empty()) throw TableError(Kind::kInvalidArgument, "prime table is empty");
  if (primes_.front() != 2) {
    throw TableError(Kind::kInvalidArgument, "prime table must start at 2");
  }
  if (std::adjacent_find(primes_.begin(), primes_.end(), std::greater_equal<>()) !=
      primes_.end()) {
    throw TableError(Kind::kInvalidArgument, "prime table is not strictly increasing");
  }
}

Prime PrimeTable::nth_prime(Order u) const {
  if (u < 1 || u > primes_.size()) {
    throw TableError(Kind::kIndexOutOfRange,
                     "order " + std::to_string(u) + " outside [1, " +
                         std::to_string(primes_.size()) + "]");
  }
  return primes_[u - 1];
}

std::optional<Order> PrimeTable::inverse_lookup(Prime w) const noexcept {
  const auto it = std::lower_bound(primes_.begin(), primes_.end(), w);
  if (it == primes_.end() || *it != w) return std::nullopt;
  return static_cast<Order>(it - primes_.begin()) + 1;
}

PrimeTable build_table(std::uint64_t n) {
  if (n < 1) throw TableError(Kind::kInvalidArgument, "table size must be at least 1");
  if (n > kMaxTableCount) {
    throw TableError(Kind::kResourceExhausted,
                     "table size " + std::to_string(n) + " exceeds supported maximum");
  }
  try {
    std::uint64_t hi = nth_prime_bound(n);
    auto primes = sieve_range(0, hi);
    while (primes.size() < n) {
      const std::uint64_t next = hi + hi / 4;
      auto more = sieve_range(hi, next);
      primes.insert(primes.end(), more.begin(), more.end());
      hi = next;
    }
    primes.resize(n);
    primes.shrink_to_fit();
    return PrimeTable(std::move(primes));
  } catch (const std::bad_alloc&) {
    throw TableError(Kind::kResourceExhausted,
                     "out of memory building table of " + std::to_string(n) + " primes");
  } catch (const std::length_error&) {
    throw TableError(Kind::kResourceExhausted,
                     "table of " + std::to_string(n) + " primes is too large");
  }
}

std::uint64_t payload_checksum(std::span<const Prime> primes) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (const Prime p : primes) {
    for (int i = 0; i < 8; ++i) {
      hash ^= (p >> (8 * i)) & 0xffU;
      hash *= 0x100000001b3ULL;
    }
  }
  return hash;
}

void save_table(const PrimeTable& table, const std::filesystem::path& destination) {
  const auto primes = table.values();
  TableHeader header;
  header.count = primes.size();
  header.checksum = payload_checksum(primes);

  auto tmp = destination;
  tmp += ".partial";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw TableError(Kind::kIo, "cannot open " + tmp.string() + " for writing");
    const auto head = encode_header(header);
    out.write(reinterpret_cast<const char*>(head.data()), head.size());

    constexpr std::size_t kChunk = 1 << 16;
    std::vector<unsigned char> buf;
    buf.reserve(kChunk * 8);
    for (std::size_t i = 0; i < primes.size(); i += kChunk) {
      const std::size_t end = std::min(primes.size(), i + kChunk);
      buf.resize((end - i) * 8);
      for (std::size_t j = i; j < end; ++j) put_le<std::uint64_t>(buf.data() + (j - i) * 8, primes[j]);
      out.write(reinterpret_cast<const char*>(buf.data()),
                static_cast<std::streamsize>(buf.size()));
    }
    out.flush();
    if (!out) {
      out.close();
      std::error_code ignored;
      std::filesystem::remove(tmp, ignored);
      throw TableError(Kind::kIo, "write failed for " + tmp.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, destination, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw TableError(Kind::kIo, "cannot move table into " + destination.string());
  }
}

PrimeTable load_table(const std::filesystem::path& source) {
  std::ifstream in(source, std::ios::binary);
  if (!in) throw TableError(Kind::kIo, "cannot open " + source.string());

  std::array<unsigned char, kTableHeaderSize> head{};
  in.read(reinterpret_cast<char*>(head.data()), head.size());
  if (in.gcount() != static_cast<std::streamsize>(head.size())) {
    throw TableError(Kind::kTruncated, source.string() + ": truncated header");
  }
  const TableHeader header = decode_header(head);
  if (header.magic != kTableMagic) {
    throw TableError(Kind::kFormat, source.string() + ": not a prime table file");
  }
  if (header.version != kTableVersion) {
    throw TableError(Kind::kFormat, source.string() + ": unsupported version " +
                                        std::to_string(header.version));
  }
  if (header.count == 0 || header.count > kMaxTableCount) {
    throw TableError(Kind::kFormat, source.string() + ": invalid count");
  }

  std::error_code ec;
  const auto size = std::filesystem::file_size(source, ec);
  if (ec) throw TableError(Kind::kIo, "cannot stat " + source.string());
  if (size < kTableHeaderSize + header.count * 8) {
    throw TableError(Kind::kTruncated, source.string() + ": truncated payload");
  }
  if (size > kTableHeaderSize + header.count * 8) {
    throw TableError(Kind::kFormat, source.string() + ": trailing bytes after payload");
  }

  std::vector<Prime> primes;
  try {
    primes.resize(header.count);
  } catch (const std::bad_alloc&) {
    throw TableError(Kind::kResourceExhausted, source.string() + ": table too large");
  }
  in.read(reinterpret_cast<char*>(primes.data()),
          static_cast<std::streamsize>(header.count * 8));
  if (in.gcount() != static_cast<std::streamsize>(header.count * 8)) {
    throw TableError(Kind::kTruncated, source.string() + ": truncated payload");
  }
  if constexpr (std::endian::native != std::endian::little) {
    for (auto& p : primes) {
      p = get_le<std::uint64_t>(reinterpret_cast<const unsigned char*>(&p));
    }
  }

  if (payload_checksum(primes) != header.checksum) {
    throw TableError(Kind::kChecksumMismatch, source.string() + ": checksum mismatch");
  }

  try {
    return PrimeTable(std::move(primes));
  } catch (const TableError& e) {
    throw TableError(Kind::kFormat, source.string() + ": " + e.what());
  }
}

}  // namespace primeorder
