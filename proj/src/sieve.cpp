#include "sectorprimes/sieve.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <random>
#include <sstream>

#include <boost/crc.hpp>

#include "sectorprimes/errors.hpp"

namespace sp {

namespace fs = std::filesystem;

namespace {

constexpr std::array<char, 5> kMagic{'S', 'P', 'R', 'M', '1'};
constexpr std::size_t kHeaderBytes = 48;
constexpr u64 kSegment = u64{1} << 21;

u64 odd_count(u64 lo, u64 hi)
{
    const u64 first = lo | 1;
    return first >= hi ? 0 : (hi - first + 1) / 2;
}

void put_le(std::uint8_t* out, u64 v, int bytes)
{
    for (int i = 0; i < bytes; ++i) out[i] = static_cast<std::uint8_t>(v >> (8 * i));
}

u64 get_le(const std::uint8_t* in, int bytes)
{
    u64 v = 0;
    for (int i = 0; i < bytes; ++i) v |= static_cast<u64>(in[i]) << (8 * i);
    return v;
}

std::uint32_t crc32(const std::vector<std::uint8_t>& data)
{
    boost::crc_32_type crc;
    crc.process_bytes(data.data(), data.size());
    return crc.checksum();
}

bool get_bit(const std::vector<std::uint8_t>& bits, u64 i) { return (bits[i >> 3] >> (i & 7)) & 1; }

void set_bit(std::vector<std::uint8_t>& bits, u64 i) { bits[i >> 3] |= static_cast<std::uint8_t>(1u << (i & 7)); }

std::string file_name(u64 lo, u64 hi)
{
    std::ostringstream os;
    os << "sprm_" << lo << "_" << hi << "_w" << SieveCache::kWheel << ".bin";
    return os.str();
}

SieveResult slice(const SieveResult& src, u64 lo, u64 hi)
{
    SieveResult out;
    out.lo = lo;
    out.hi = hi;
    const u64 n = odd_count(lo, hi);
    out.bits.assign((n + 7) / 8, 0);
    const u64 offset = ((lo | 1) - src.first_odd()) / 2;
    for (u64 i = 0; i < n; ++i) {
        if (get_bit(src.bits, offset + i)) set_bit(out.bits, i);
    }
    return out;
}

}  // namespace

bool SieveResult::is_prime(u64 n) const
{
    if (n < lo || n >= hi) throw InvalidInput("SieveResult::is_prime: outside sieved range");
    if (n == 2) return true;
    if ((n & 1) == 0) return false;
    return get_bit(bits, (n - first_odd()) / 2);
}

std::vector<u64> SieveResult::primes() const
{
    std::vector<u64> out;
    if (lo <= 2 && hi > 2) out.push_back(2);
    const u64 n = odd_count(lo, hi);
    const u64 base = first_odd();
    for (u64 i = 0; i < n; ++i) {
        if (get_bit(bits, i)) out.push_back(base + 2 * i);
    }
    return out;
}

u64 SieveResult::count() const
{
    u64 c = (lo <= 2 && hi > 2) ? 1 : 0;
    for (auto byte : bits) c += static_cast<u64>(std::popcount(byte));
    return c;
}

SieveResult sieve_segment(u64 lo, u64 hi)
{
    if (hi < lo) throw InvalidInput("sieve: empty or reversed range");
    if (hi - lo > kMaxSieveSpan) throw ResourceError("sieve: range exceeds the configured span limit");
    if (hi > (u64{1} << 62)) throw ResourceError("sieve: upper end too large");
    SieveResult r;
    r.lo = lo;
    r.hi = hi;
    const u64 n = odd_count(lo, hi);
    r.bits.assign((n + 7) / 8, 0);
    if (n == 0) return r;

    const u64 root = isqrt(hi) + 1;
    const std::vector<u64> base = primes_up_to(root);
    std::vector<std::uint8_t> comp;
    const u64 first = r.first_odd();
    for (u64 seg = 0; seg < n; seg += kSegment) {
        const u64 len = std::min(kSegment, n - seg);
        comp.assign(len, 0);
        const u64 seg_lo = first + 2 * seg;  // odd
        const u64 seg_hi = seg_lo + 2 * len;
        for (u64 p : base) {
            if (p == 2) continue;
            if (p * p >= seg_hi) break;
            u64 start = std::max(p * p, ((seg_lo + p - 1) / p) * p);
            if ((start & 1) == 0) start += p;
            for (u64 v = start; v < seg_hi; v += 2 * p) comp[(v - seg_lo) / 2] = 1;
        }
        for (u64 i = 0; i < len; ++i) {
            const u64 v = seg_lo + 2 * i;
            if (!comp[i] && v > 1) set_bit(r.bits, seg + i);
        }
    }
    return r;
}

void write_cache_file(const fs::path& path, const SieveResult& r)
{
    // [0,5) magic [8,12) version [12,20) start [20,28) end [28,32) wheel
    // [32,36) reserved [36,44) payload bytes [44,48) crc32
    std::vector<std::uint8_t> full(kHeaderBytes, 0);
    std::memcpy(full.data(), kMagic.data(), kMagic.size());
    put_le(full.data() + 8, SieveCache::kVersion, 4);
    put_le(full.data() + 12, r.lo, 8);
    put_le(full.data() + 20, r.hi, 8);
    put_le(full.data() + 28, SieveCache::kWheel, 4);
    put_le(full.data() + 36, r.bits.size(), 8);
    put_le(full.data() + 44, crc32(r.bits), 4);

    fs::path tmp = path;
    tmp += ".tmp" + std::to_string(std::random_device{}());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw ResourceError("sieve cache: cannot write " + tmp.string());
        out.write(reinterpret_cast<const char*>(full.data()), static_cast<std::streamsize>(full.size()));
        out.write(reinterpret_cast<const char*>(r.bits.data()), static_cast<std::streamsize>(r.bits.size()));
        if (!out) throw ResourceError("sieve cache: short write to " + tmp.string());
    }
    fs::rename(tmp, path);
}

namespace {

struct RawFile {
    CacheFileInfo info;
    u64 payload_bytes = 0;
    std::uint32_t crc = 0;
    std::vector<std::uint8_t> payload;
};

RawFile read_raw(const fs::path& path, bool with_payload)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ResourceError("sieve cache: cannot open " + path.string());
    std::array<std::uint8_t, kHeaderBytes> h{};
    in.read(reinterpret_cast<char*>(h.data()), kHeaderBytes);
    if (in.gcount() != static_cast<std::streamsize>(kHeaderBytes) ||
        std::memcmp(h.data(), kMagic.data(), kMagic.size()) != 0) {
        throw InvariantViolation("sieve cache: bad magic in " + path.string());
    }
    RawFile f;
    f.info.path = path;
    f.info.version = static_cast<std::uint32_t>(get_le(h.data() + 8, 4));
    f.info.start = get_le(h.data() + 12, 8);
    f.info.end = get_le(h.data() + 20, 8);
    f.info.wheel = static_cast<std::uint32_t>(get_le(h.data() + 28, 4));
    f.payload_bytes = get_le(h.data() + 36, 8);
    f.crc = static_cast<std::uint32_t>(get_le(h.data() + 44, 4));
    if (f.info.version != SieveCache::kVersion || f.info.wheel != SieveCache::kWheel) {
        throw InvariantViolation("sieve cache: unsupported version or wheel in " + path.string());
    }
    if (f.info.end < f.info.start || f.payload_bytes != (odd_count(f.info.start, f.info.end) + 7) / 8) {
        throw InvariantViolation("sieve cache: inconsistent header in " + path.string());
    }
    f.payload.resize(f.payload_bytes);
    in.read(reinterpret_cast<char*>(f.payload.data()), static_cast<std::streamsize>(f.payload_bytes));
    const bool complete = in.gcount() == static_cast<std::streamsize>(f.payload_bytes);
    f.info.checksum_ok = complete && crc32(f.payload) == f.crc;
    if (!with_payload) f.payload.clear();
    return f;
}

}  // namespace

CacheFileInfo read_cache_header(const fs::path& path) { return read_raw(path, false).info; }

SieveResult read_cache_file(const fs::path& path)
{
    RawFile f = read_raw(path, true);
    if (!f.info.checksum_ok) throw InvariantViolation("sieve cache: checksum mismatch in " + path.string());
    SieveResult r;
    r.lo = f.info.start;
    r.hi = f.info.end;
    r.bits = std::move(f.payload);
    return r;
}

SieveCache::SieveCache(fs::path dir) : dir_(std::move(dir))
{
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (!fs::is_directory(dir_)) throw ResourceError("sieve cache: not a directory: " + dir_.string());
}

std::optional<SieveCache> SieveCache::from_env()
{
    const char* v = std::getenv(kEnvVar);
    if (v == nullptr || *v == '\0') return std::nullopt;
    return SieveCache(fs::path(v));
}

std::vector<CacheFileInfo> SieveCache::inspect() const
{
    std::vector<CacheFileInfo> out;
    for (const auto& entry : fs::directory_iterator(dir_)) {
        if (!entry.is_regular_file() || entry.path().extension() != ".bin") continue;
        if (entry.path().filename().string().rfind("sprm_", 0) != 0) continue;
        try {
            out.push_back(read_cache_header(entry.path()));
        } catch (const InvariantViolation&) {
            CacheFileInfo bad;
            bad.path = entry.path();
            out.push_back(bad);
        }
    }
    std::sort(out.begin(), out.end(), [](const CacheFileInfo& a, const CacheFileInfo& b) {
        return std::tie(a.start, a.end, a.path) < std::tie(b.start, b.end, b.path);
    });
    return out;
}

std::size_t SieveCache::purge() const
{
    std::size_t removed = 0;
    for (const auto& info : inspect()) {
        if (fs::remove(info.path)) ++removed;
    }
    return removed;
}

SieveResult SieveCache::get(u64 lo, u64 hi, bool* hit) const
{
    for (const auto& info : inspect()) {
        if (info.start <= lo && info.end >= hi && info.checksum_ok) {
            if (hit) *hit = true;
            const SieveResult full = read_cache_file(info.path);
            if (full.lo == lo && full.hi == hi) return full;
            return slice(full, lo, hi);
        }
    }
    if (hit) *hit = false;
    SieveResult r = sieve_segment(lo, hi);
    put(r);
    return r;
}

void SieveCache::put(const SieveResult& r) const
{
    // overlapping ranges must agree bit for bit
    for (const auto& info : inspect()) {
        const u64 a = std::max(info.start, r.lo), b = std::min(info.end, r.hi);
        if (a >= b) continue;
        if (!info.checksum_ok) throw InvariantViolation("sieve cache: corrupt file " + info.path.string());
        const SieveResult other = read_cache_file(info.path);
        for (u64 v = a | 1; v < b; v += 2) {
            if (other.is_prime(v) != r.is_prime(v)) {
                throw InvariantViolation("sieve cache: overlap conflict with " + info.path.string());
            }
        }
    }
    const fs::path path = dir_ / file_name(r.lo, r.hi);
    if (fs::exists(path)) return;
    write_cache_file(path, r);
}

SieveResult sieve_range(u64 lo, u64 hi, const SieveCache* cache, bool* hit)
{
    if (cache != nullptr) return cache->get(lo, hi, hit);
    if (hit) *hit = false;
    return sieve_segment(lo, hi);
}

}  // namespace sp
