#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace solvarep {

using u64 = std::uint64_t;
using i64 = std::int64_t;

u64 gcd_u(u64 a, u64 b);
u64 lcm_u(u64 a, u64 b);
u64 mulmod(u64 a, u64 b, u64 m);
u64 powmod(u64 a, u64 e, u64 m);
bool is_prime(u64 n);

// Prime factorization as (prime, exponent) pairs, ascending primes.
std::vector<std::pair<u64, int>> factorize(u64 n);
std::vector<u64> prime_factors(u64 n);
std::vector<u64> divisors(u64 n);
u64 euler_phi(u64 n);

// Multiplicative order of a modulo n (gcd(a, n) must be 1).
u64 mult_order(u64 a, u64 n);

// Non-negative residue of a mod m.
inline i64 mod_floor(i64 a, i64 m) {
    i64 r = a % m;
    return r < 0 ? r + m : r;
}

} // namespace solvarep
