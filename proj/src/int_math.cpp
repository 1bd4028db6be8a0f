#include "sectorprimes/int_math.hpp"

#include <cmath>
#include <stdexcept>

namespace sp {

i64 gcd(i64 a, i64 b)
{
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b != 0) {
        i64 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

ExtGcd ext_gcd(i64 a, i64 b)
{
    i64 old_r = a, r = b;
    i64 old_s = 1, s = 0;
    i64 old_t = 0, t = 1;
    while (r != 0) {
        i64 q = old_r / r;
        i64 tmp = old_r - q * r;
        old_r = r;
        r = tmp;
        tmp = old_s - q * s;
        old_s = s;
        s = tmp;
        tmp = old_t - q * t;
        old_t = t;
        t = tmp;
    }
    if (old_r < 0) {
        old_r = -old_r;
        old_s = -old_s;
        old_t = -old_t;
    }
    return {old_r, old_s, old_t};
}

i64 floor_div(i64 a, i64 b)
{
    i64 q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

i64 mod_floor(i64 a, i64 m)
{
    i64 r = a % m;
    if (r < 0) r += (m < 0 ? -m : m);
    return r;
}

u64 mul_mod(u64 a, u64 b, u64 m)
{
    return static_cast<u64>(static_cast<u128>(a) * b % m);
}

u64 pow_mod(u64 base, u64 exp, u64 m)
{
    u64 result = 1 % m;
    base %= m;
    while (exp > 0) {
        if (exp & 1) result = mul_mod(result, base, m);
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    return result;
}

bool is_prime(u64 n)
{
    if (n < 2) return false;
    static constexpr u64 small[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
    for (u64 p : small) {
        if (n % p == 0) return n == p;
    }
    u64 d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (u64 a : small) {
        u64 x = pow_mod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int r = 1; r < s; ++r) {
            x = mul_mod(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

u64 isqrt(u64 n)
{
    u64 r = static_cast<u64>(std::sqrt(static_cast<long double>(n)));
    while (r > 0 && static_cast<u128>(r) * r > n) --r;
    while (static_cast<u128>(r + 1) * (r + 1) <= n) ++r;
    return r;
}

bool is_square(u64 n)
{
    u64 r = isqrt(n);
    return r * r == n;
}

bool is_squarefree(i64 n)
{
    u64 m = static_cast<u64>(n < 0 ? -n : n);
    if (m == 0) return false;
    for (u64 p = 2; p * p <= m; ++p) {
        if (m % p == 0) {
            m /= p;
            if (m % p == 0) return false;
        }
    }
    return true;
}

int kronecker(i64 a, i64 n)
{
    if (n <= 0) throw std::invalid_argument("kronecker: modulus must be positive");
    int result = 1;
    // factor out powers of two from n
    while ((n & 1) == 0) {
        n >>= 1;
        i64 a8 = mod_floor(a, 8);
        if (a8 == 0 || a8 == 2 || a8 == 4 || a8 == 6) return 0;
        if (a8 == 3 || a8 == 5) result = -result;
    }
    if (n == 1) return result;
    // Jacobi symbol (a | n) for odd n
    i64 aa = mod_floor(a, n);
    while (aa != 0) {
        while ((aa & 1) == 0) {
            aa >>= 1;
            i64 n8 = n % 8;
            if (n8 == 3 || n8 == 5) result = -result;
        }
        std::swap(aa, n);
        if (aa % 4 == 3 && n % 4 == 3) result = -result;
        aa %= n;
    }
    return n == 1 ? result : 0;
}

u64 sqrt_mod_prime(i64 a, u64 p)
{
    u64 r = static_cast<u64>(mod_floor(a, static_cast<i64>(p)));
    if (p == 2 || r == 0) return r;
    if (pow_mod(r, (p - 1) / 2, p) != 1) throw std::invalid_argument("sqrt_mod_prime: non-residue");
    if (p % 4 == 3) return pow_mod(r, (p + 1) / 4, p);
    u64 q = p - 1;
    int s = 0;
    while ((q & 1) == 0) {
        q >>= 1;
        ++s;
    }
    u64 z = 2;
    while (pow_mod(z, (p - 1) / 2, p) != p - 1) ++z;
    u64 c = pow_mod(z, q, p);
    u64 x = pow_mod(r, (q + 1) / 2, p);
    u64 t = pow_mod(r, q, p);
    int m = s;
    while (t != 1) {
        int i = 0;
        u64 tt = t;
        while (tt != 1) {
            tt = mul_mod(tt, tt, p);
            ++i;
        }
        u64 b = c;
        for (int j = 0; j < m - i - 1; ++j) b = mul_mod(b, b, p);
        x = mul_mod(x, b, p);
        c = mul_mod(b, b, p);
        t = mul_mod(t, c, p);
        m = i;
    }
    return x;
}

u64 euler_phi(u64 n)
{
    u64 result = n;
    for (auto [p, e] : factorize(n)) {
        (void)e;
        result = result / p * (p - 1);
    }
    return result;
}

std::vector<std::pair<u64, int>> factorize(u64 n)
{
    std::vector<std::pair<u64, int>> out;
    for (u64 p = 2; p * p <= n; ++p) {
        if (n % p != 0) continue;
        int e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        out.emplace_back(p, e);
    }
    if (n > 1) out.emplace_back(n, 1);
    return out;
}

std::vector<u64> primes_up_to(u64 limit)
{
    std::vector<u64> out;
    if (limit < 2) return out;
    std::vector<bool> composite(limit + 1, false);
    for (u64 i = 2; i <= limit; ++i) {
        if (composite[i]) continue;
        out.push_back(i);
        for (u64 j = i * i; j <= limit; j += i) composite[j] = true;
    }
    return out;
}

}  // namespace sp
