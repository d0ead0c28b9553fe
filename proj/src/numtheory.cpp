#include "growthlab/numtheory.hpp"

#include <algorithm>
#include <numeric>

#include "growthlab/error.hpp"

namespace growthlab::fields {

u64 powmod(u64 base, u64 exp, u64 m) noexcept {
    u64 result = 1 % m;
    base %= m;
    while (exp) {
        if (exp & 1) result = mulmod(result, base, m);
        base = mulmod(base, base, m);
        exp >>= 1;
    }
    return result;
}

u64 invmod(u64 a, u64 m) {
    a %= m;
    if (a == 0) fail(ErrorCode::DivisionByZero, "inverse of zero");
    // Extended Euclid on signed 128-bit values.
    __int128 t = 0, nt = 1, r = m, nr = a;
    while (nr != 0) {
        __int128 q = r / nr;
        __int128 tmp = t - q * nt;
        t = nt;
        nt = tmp;
        tmp = r - q * nr;
        r = nr;
        nr = tmp;
    }
    if (r != 1) fail(ErrorCode::DivisionByZero, "element is not invertible");
    if (t < 0) t += m;
    return static_cast<u64>(t);
}

namespace {

bool miller_rabin_witness(u64 n, u64 a, u64 d, int s) {
    u64 x = powmod(a, d, n);
    if (x == 1 || x == n - 1) return false;
    for (int r = 1; r < s; ++r) {
        x = mulmod(x, x, n);
        if (x == n - 1) return false;
    }
    return true;
}

u64 pollard_rho(u64 n) {
    if (n % 2 == 0) return 2;
    for (u64 c = 1;; ++c) {
        u64 x = 2, y = 2, d = 1;
        auto f = [&](u64 v) { return addmod(mulmod(v, v, n), c, n); };
        while (d == 1) {
            x = f(x);
            y = f(f(y));
            d = std::gcd(x > y ? x - y : y - x, n);
        }
        if (d != n) return d;
    }
}

void factor_into(u64 n, std::vector<u64>& out) {
    if (n == 1) return;
    if (is_prime(n)) {
        out.push_back(n);
        return;
    }
    for (u64 p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL}) {
        if (n % p == 0) {
            out.push_back(p);
            while (n % p == 0) n /= p;
            factor_into(n, out);
            return;
        }
    }
    u64 d = pollard_rho(n);
    factor_into(d, out);
    factor_into(n / d, out);
}

}  // namespace

bool is_prime(u64 n) noexcept {
    if (n < 2) return false;
    for (u64 p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        if (n % p == 0) return n == p;
    }
    u64 d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (u64 a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        if (miller_rabin_witness(n, a, d, s)) return false;
    }
    return true;
}

std::vector<u64> prime_factors(u64 n) {
    std::vector<u64> out;
    factor_into(n, out);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

u64 find_generator(u64 p) {
    if (p < 3 || !is_prime(p)) fail(ErrorCode::PreconditionFailed, "find_generator needs an odd prime");
    const auto factors = prime_factors(p - 1);
    for (u64 g = 2; g < p; ++g) {
        bool primitive = std::all_of(factors.begin(), factors.end(),
                                     [&](u64 f) { return powmod(g, (p - 1) / f, p) != 1; });
        if (primitive) return g;
    }
    fail(ErrorCode::NoWitness, "no primitive root found");
}

bool prime_power(u64 q, u64& p, unsigned& k) {
    if (q < 2) return false;
    const auto factors = prime_factors(q);
    if (factors.size() != 1) return false;
    p = factors.front();
    k = 0;
    while (q > 1) {
        q /= p;
        ++k;
    }
    return true;
}

}  // namespace growthlab::fields
