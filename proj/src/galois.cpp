#include "growthlab/galois.hpp"

#include <algorithm>

#include "growthlab/error.hpp"

namespace growthlab::fields {

namespace {

void trim(PolyFp& f) {
    while (!f.empty() && f.back() == 0) f.pop_back();
}

PolyFp poly_mul(const PolyFp& a, const PolyFp& b, u64 p) {
    if (a.empty() || b.empty()) return {};
    PolyFp r(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = addmod(r[i + j], mulmod(a[i], b[j], p), p);
    }
    trim(r);
    return r;
}

// Remainder of a modulo a nonzero f.
PolyFp poly_mod(PolyFp a, const PolyFp& f, u64 p) {
    trim(a);
    const std::size_t df = f.size() - 1;
    const u64 lead_inv = invmod(f.back(), p);
    while (a.size() > df) {
        const u64 c = mulmod(a.back(), lead_inv, p);
        const std::size_t shift = a.size() - 1 - df;
        for (std::size_t i = 0; i <= df; ++i) a[shift + i] = submod(a[shift + i], mulmod(c, f[i], p), p);
        trim(a);
    }
    return a;
}

PolyFp poly_gcd(PolyFp a, PolyFp b, u64 p) {
    trim(a);
    trim(b);
    while (!b.empty()) {
        PolyFp r = poly_mod(a, b, p);
        a = std::move(b);
        b = std::move(r);
    }
    return a;
}

PolyFp poly_powmod(PolyFp base, u64 e, const PolyFp& f, u64 p) {
    PolyFp result{1};
    base = poly_mod(base, f, p);
    while (e) {
        if (e & 1) result = poly_mod(poly_mul(result, base, p), f, p);
        base = poly_mod(poly_mul(base, base, p), f, p);
        e >>= 1;
    }
    return result;
}

}  // namespace

bool is_irreducible(u64 p, const PolyFp& f_in) {
    PolyFp f = f_in;
    trim(f);
    if (f.size() < 2) return false;
    const std::size_t n = f.size() - 1;
    if (n == 1) return true;
    // Ben-Or: f has no factor of degree i iff gcd(x^(p^i) - x, f) = 1.
    PolyFp h{0, 1};
    for (std::size_t i = 1; i <= n / 2; ++i) {
        h = poly_powmod(h, p, f, p);
        PolyFp g = h;
        g.resize(std::max<std::size_t>(g.size(), 2), 0);
        g[1] = submod(g[1], 1, p);
        trim(g);
        if (g.empty()) return false;
        if (poly_gcd(f, g, p).size() != 1) return false;
    }
    return true;
}

PolyFp irreducible_poly(u64 p, unsigned degree) {
    if (!is_prime(p)) fail(ErrorCode::NotPrime, "characteristic " + std::to_string(p) + " is not prime");
    if (degree == 0) fail(ErrorCode::InvalidArgument, "degree must be positive");
    PolyFp f(degree + 1, 0);
    f[degree] = 1;
    // Odometer over (c_{degree-1}, ..., c_0) in lexicographic order.
    while (true) {
        if (is_irreducible(p, f)) return f;
        std::size_t i = 0;
        while (i < degree && f[i] == p - 1) f[i++] = 0;
        if (i == degree) break;
        ++f[i];
    }
    fail(ErrorCode::NoWitness, "no irreducible polynomial found");
}

GaloisField::GaloisField(u64 p) : GaloisField(p, PolyFp{0, 1}) {}

GaloisField::GaloisField(u64 p, PolyFp modulus) : p_(p), modulus_(std::move(modulus)) {
    if (!is_prime(p_)) fail(ErrorCode::NotPrime, "characteristic " + std::to_string(p_) + " is not prime");
    for (auto& c : modulus_) {
        if (c >= p_) fail(ErrorCode::InvalidArgument, "modulus coefficient out of range");
    }
    trim(modulus_);
    if (modulus_.size() < 2 || modulus_.back() != 1) fail(ErrorCode::InvalidArgument, "modulus must be monic of positive degree");
    degree_ = static_cast<unsigned>(modulus_.size() - 1);
    if (!is_irreducible(p_, modulus_)) fail(ErrorCode::NotIrreducible, "modulus is reducible");
    u128 q = degree_ == 1 ? p_ : 1;
    for (unsigned i = 0; degree_ > 1 && i < degree_; ++i) {
        q *= p_;
        if (q >= (static_cast<u128>(1) << 63)) fail(ErrorCode::InvalidArgument, "field order exceeds 2^63");
    }
    q_ = static_cast<u64>(q);
    if (degree_ > 1 && q_ <= (1u << 16)) build_tables();
}

GaloisField GaloisField::with_degree(u64 p, unsigned degree) {
    if (degree == 1) return GaloisField(p);
    return GaloisField(p, irreducible_poly(p, degree));
}

u64 GaloisField::from_int(long long v) const noexcept {
    __int128 r = static_cast<__int128>(v) % static_cast<__int128>(p_);
    if (r < 0) r += p_;
    return static_cast<u64>(r);
}

PolyFp GaloisField::digits(u64 code) const {
    PolyFp d;
    if (degree_ == 1) {
        if (code) d.push_back(code);
        return d;
    }
    while (code) {
        d.push_back(code % p_);
        code /= p_;
    }
    return d;
}

u64 GaloisField::encode(const PolyFp& digits) const {
    if (degree_ == 1) return digits.empty() ? 0 : digits[0];
    u64 code = 0;
    for (std::size_t i = digits.size(); i-- > 0;) code = code * p_ + digits[i];
    return code;
}

u64 GaloisField::add(u64 a, u64 b) const noexcept {
    if (degree_ == 1) return addmod(a, b, p_);
    if (p_ == 2) return a ^ b;
    u64 r = 0, scale = 1;
    while (a || b) {
        r += addmod(a % p_, b % p_, p_) * scale;
        a /= p_;
        b /= p_;
        scale *= p_;
    }
    return r;
}

u64 GaloisField::neg(u64 a) const noexcept {
    if (degree_ == 1) return a == 0 ? 0 : p_ - a;
    if (p_ == 2) return a;
    u64 r = 0, scale = 1;
    while (a) {
        const u64 d = a % p_;
        r += (d == 0 ? 0 : p_ - d) * scale;
        a /= p_;
        scale *= p_;
    }
    return r;
}

u64 GaloisField::sub(u64 a, u64 b) const noexcept {
    if (degree_ == 1) return submod(a, b, p_);
    return add(a, neg(b));
}

u64 GaloisField::slow_mul(u64 a, u64 b) const {
    return encode(poly_mod(poly_mul(digits(a), digits(b), p_), modulus_, p_));
}

u64 GaloisField::mul(u64 a, u64 b) const {
    if (degree_ == 1) return mulmod(a, b, p_);
    if (a == 0 || b == 0) return 0;
    if (!log_.empty()) {
        u64 s = static_cast<u64>(log_[a]) + log_[b];
        if (s >= q_ - 1) s -= q_ - 1;
        return exp_[s];
    }
    return slow_mul(a, b);
}

u64 GaloisField::pow(u64 a, u64 e) const {
    u64 result = 1;
    while (e) {
        if (e & 1) result = mul(result, a);
        a = mul(a, a);
        e >>= 1;
    }
    return result;
}

u64 GaloisField::inv(u64 a) const {
    if (a == 0) fail(ErrorCode::DivisionByZero, "inverse of zero");
    if (degree_ == 1) return invmod(a, p_);
    if (!log_.empty()) return exp_[(q_ - 1 - log_[a]) % (q_ - 1)];
    return pow(a, q_ - 2);
}

void GaloisField::build_tables() {
    const auto factors = prime_factors(q_ - 1);
    u64 g = 0;
    for (u64 c = 2; c < q_; ++c) {
        bool primitive = true;
        for (u64 f : factors) {
            u64 r = 1, base = c, e = (q_ - 1) / f;
            while (e) {
                if (e & 1) r = slow_mul(r, base);
                base = slow_mul(base, base);
                e >>= 1;
            }
            if (r == 1) {
                primitive = false;
                break;
            }
        }
        if (primitive) {
            g = c;
            break;
        }
    }
    exp_.assign(q_ - 1, 0);
    log_.assign(q_, 0);
    u64 x = 1;
    for (u64 i = 0; i + 1 < q_; ++i) {
        exp_[i] = static_cast<std::uint32_t>(x);
        log_[x] = static_cast<std::uint32_t>(i);
        x = slow_mul(x, g);
    }
}

std::string GaloisField::format(u64 code) const {
    if (degree_ == 1) return std::to_string(code);
    const PolyFp d = digits(code);
    if (d.empty()) return "0";
    std::string out;
    for (std::size_t i = d.size(); i-- > 0;) {
        if (d[i] == 0) continue;
        if (!out.empty()) out += "+";
        if (i == 0 || d[i] != 1) out += std::to_string(d[i]);
        if (i > 0) {
            if (d[i] != 1) out += "*";
            out += "x";
            if (i > 1) out += "^" + std::to_string(i);
        }
    }
    return out;
}

}  // namespace growthlab::fields
