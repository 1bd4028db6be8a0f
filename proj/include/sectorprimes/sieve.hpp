#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "sectorprimes/int_math.hpp"

namespace sp {

// Primality flags for the odd integers of [lo, hi); 2 is handled separately.
struct SieveResult {
    u64 lo = 0;
    u64 hi = 0;
    std::vector<std::uint8_t> bits;  // bit i <-> first_odd() + 2 i

    u64 first_odd() const { return lo | 1; }
    bool is_prime(u64 n) const;
    std::vector<u64> primes() const;
    u64 count() const;
};

inline constexpr u64 kMaxSieveSpan = 4'000'000'000ULL;

// Segmented sieve of Eratosthenes on [lo, hi).
SieveResult sieve_segment(u64 lo, u64 hi);

// On-disk cache of sieve results: one file per range, header
//   "SPRM1" | 3 pad | u32 version | u64 start | u64 end | u32 wheel | u32 reserved
//   | u64 payload bytes | u32 CRC-32 of payload
// followed by the payload; all integers little-endian.
struct CacheFileInfo {
    std::filesystem::path path;
    u64 start = 0;
    u64 end = 0;
    std::uint32_t version = 0;
    std::uint32_t wheel = 0;
    bool checksum_ok = false;
};

class SieveCache {
public:
    static constexpr const char* kEnvVar = "SECTORPRIMES_CACHE_DIR";
    static constexpr std::uint32_t kVersion = 1;
    static constexpr std::uint32_t kWheel = 2;

    explicit SieveCache(std::filesystem::path dir);
    static std::optional<SieveCache> from_env();

    const std::filesystem::path& dir() const { return dir_; }

    // Served from a covering cache file when possible, otherwise sieved and stored.
    SieveResult get(u64 lo, u64 hi, bool* hit = nullptr) const;
    void put(const SieveResult& r) const;

    std::vector<CacheFileInfo> inspect() const;
    std::size_t purge() const;

private:
    std::filesystem::path dir_;
};

SieveResult sieve_range(u64 lo, u64 hi, const SieveCache* cache, bool* hit = nullptr);

void write_cache_file(const std::filesystem::path& path, const SieveResult& r);
SieveResult read_cache_file(const std::filesystem::path& path);
CacheFileInfo read_cache_header(const std::filesystem::path& path);

}  // namespace sp
