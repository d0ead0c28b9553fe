#pragma once

#include <cstdint>
#include <vector>

namespace growthlab::fields {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

inline u64 addmod(u64 a, u64 b, u64 m) noexcept {
    u64 s = a + b;
    if (s < a || s >= m) s -= m;
    return s;
}

inline u64 submod(u64 a, u64 b, u64 m) noexcept { return a >= b ? a - b : a + (m - b); }

inline u64 mulmod(u64 a, u64 b, u64 m) noexcept {
    return static_cast<u64>(static_cast<u128>(a) * b % m);
}

u64 powmod(u64 base, u64 exp, u64 m) noexcept;

// Inverse of a modulo a prime m; a must be nonzero mod m.
u64 invmod(u64 a, u64 m);

// Deterministic Miller-Rabin for the full 64-bit range.
bool is_prime(u64 n) noexcept;

// Distinct prime factors of n in increasing order (Pollard rho).
std::vector<u64> prime_factors(u64 n);

// Smallest primitive root modulo an odd prime p.
u64 find_generator(u64 p);

// Writes q = p^k with p prime; returns false when q is not a prime power.
bool prime_power(u64 q, u64& p, unsigned& k);

}  // namespace growthlab::fields
