#include "doctest.h"
#include "oracles.hpp"
#include "sectorprimes/errors.hpp"
#include "sectorprimes/sieve.hpp"

#include <filesystem>
#include <fstream>

using namespace sp;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name)
{
    const fs::path d = fs::temp_directory_path() / ("sectorprimes_unit_" + name);
    fs::remove_all(d);
    return d;
}

}  // namespace

TEST_CASE("segmented sieve matches trial division")
{
    for (auto [lo, hi] : std::vector<std::pair<u64, u64>>{{0, 1}, {0, 2}, {0, 3}, {0, 1000}, {1, 100}, {2, 3},
                                                           {997, 1010}, {100000, 103001}, {1'000'000'000, 1'000'001'000}}) {
        const SieveResult r = sieve_segment(lo, hi);
        CAPTURE(lo);
        CAPTURE(hi);
        CHECK(r.primes() == oracle::primes_in(lo, hi));
        CHECK(r.count() == oracle::primes_in(lo, hi).size());
    }
    CHECK(sieve_segment(0, 1'000'000).count() == 78498);
    CHECK_THROWS_AS(sieve_segment(10, 5), InvalidInput);
    CHECK_THROWS_AS(sieve_segment(0, kMaxSieveSpan + 1), ResourceError);
}

TEST_CASE("sieve cache round trip, slicing and inspection")
{
    const SieveCache cache(fresh_dir("roundtrip"));
    bool hit = true;
    const SieveResult cold = cache.get(10'000, 60'000, &hit);
    CHECK_FALSE(hit);
    const SieveResult warm = cache.get(10'000, 60'000, &hit);
    CHECK(hit);
    CHECK(warm.bits == cold.bits);
    const SieveResult sub = cache.get(12'345, 50'001, &hit);
    CHECK(hit);
    CHECK(sub.primes() == oracle::primes_in(12'345, 50'001));
    const auto files = cache.inspect();
    REQUIRE(files.size() == 1);
    CHECK(files[0].start == 10'000);
    CHECK(files[0].end == 60'000);
    CHECK(files[0].version == SieveCache::kVersion);
    CHECK(files[0].wheel == SieveCache::kWheel);
    CHECK(files[0].checksum_ok);

    // header layout: magic, then little-endian range ends
    std::ifstream in(files[0].path, std::ios::binary);
    char head[32];
    in.read(head, 32);
    CHECK(std::string(head, 5) == "SPRM1");
    u64 start = 0;
    for (int i = 0; i < 8; ++i) start |= static_cast<u64>(static_cast<unsigned char>(head[12 + i])) << (8 * i);
    CHECK(start == 10'000);

    CHECK(cache.purge() == 1);
    CHECK(cache.inspect().empty());
}

TEST_CASE("corrupt cache files are detected")
{
    const SieveCache cache(fresh_dir("corrupt"));
    cache.get(1000, 9000);
    const auto path = cache.inspect().at(0).path;
    {
        std::fstream f(path, std::ios::in | std::ios::out | std::ios::binary);
        f.seekg(-3, std::ios::end);
        char c = 0;
        f.read(&c, 1);
        c = static_cast<char>(c ^ 0x5a);
        f.seekp(-3, std::ios::end);
        f.write(&c, 1);
    }
    CHECK_FALSE(cache.inspect().at(0).checksum_ok);
    CHECK_THROWS_AS(read_cache_file(path), InvariantViolation);
    // a corrupt file is never served
    bool hit = true;
    CHECK_THROWS_AS(cache.get(2000, 3000, &hit), InvariantViolation);
}

TEST_CASE("overlapping cache ranges must agree")
{
    const SieveCache cache(fresh_dir("overlap"));
    cache.get(1000, 2000);
    SieveResult tampered = sieve_segment(1500, 2500);
    tampered.bits[10] ^= 1;
    CHECK_THROWS_AS(cache.put(tampered), InvariantViolation);
    CHECK_NOTHROW(cache.put(sieve_segment(1500, 2500)));
    CHECK(cache.inspect().size() == 2);
    fs::remove_all(cache.dir());
}
