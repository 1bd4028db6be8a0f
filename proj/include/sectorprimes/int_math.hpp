#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace sp {

using i64 = std::int64_t;
using u64 = std::uint64_t;
using i128 = __int128;
using u128 = unsigned __int128;

i64 gcd(i64 a, i64 b);

// Returns (g, x, y) with a*x + b*y = g = gcd(a, b) >= 0.
struct ExtGcd {
    i64 g, x, y;
};
ExtGcd ext_gcd(i64 a, i64 b);

// Floor division / nonnegative remainder for signed operands.
i64 floor_div(i64 a, i64 b);
i64 mod_floor(i64 a, i64 m);

u64 mul_mod(u64 a, u64 b, u64 m);
u64 pow_mod(u64 base, u64 exp, u64 m);

// Deterministic Miller-Rabin for the full 64-bit range.
bool is_prime(u64 n);

u64 isqrt(u64 n);
bool is_square(u64 n);
bool is_squarefree(i64 n);

// Kronecker symbol (a | n) for n >= 1.
int kronecker(i64 a, i64 n);

// A square root of a modulo an odd prime p, for a a quadratic residue (Tonelli-Shanks).
u64 sqrt_mod_prime(i64 a, u64 p);

u64 euler_phi(u64 n);

// Prime factorisation by trial division; pairs (prime, exponent).
std::vector<std::pair<u64, int>> factorize(u64 n);

// Primes up to `limit` (inclusive) by a plain sieve of Eratosthenes.
std::vector<u64> primes_up_to(u64 limit);

}  // namespace sp
