#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "growthlab/numtheory.hpp"

namespace growthlab::fields {

// Polynomials over F_p, coefficients low to high with no trailing zeros.
using PolyFp = std::vector<u64>;

bool is_irreducible(u64 p, const PolyFp& f);

// Lexicographically smallest monic irreducible polynomial of the given degree,
// ordering candidates by their coefficients from x^(degree-1) down to x^0.
PolyFp irreducible_poly(u64 p, unsigned degree);

// F_q = F_p[x]/(m). Elements are encoded as integers sum c_i p^i < q, where
// c_i are the coefficients of the reduced residue; degree 1 gives F_p itself.
class GaloisField {
public:
    explicit GaloisField(u64 p);
    GaloisField(u64 p, PolyFp modulus);
    static GaloisField with_degree(u64 p, unsigned degree);

    u64 characteristic() const noexcept { return p_; }
    unsigned degree() const noexcept { return degree_; }
    u64 order() const noexcept { return q_; }
    const PolyFp& modulus() const noexcept { return modulus_; }
    bool is_prime_field() const noexcept { return degree_ == 1; }

    bool contains(u64 c) const noexcept { return c < q_; }
    u64 from_int(long long v) const noexcept;

    u64 add(u64 a, u64 b) const noexcept;
    u64 sub(u64 a, u64 b) const noexcept;
    u64 neg(u64 a) const noexcept;
    u64 mul(u64 a, u64 b) const;
    u64 inv(u64 a) const;
    u64 div(u64 a, u64 b) const { return mul(a, inv(b)); }
    u64 pow(u64 a, u64 e) const;

    PolyFp digits(u64 code) const;
    u64 encode(const PolyFp& digits) const;

    std::string format(u64 code) const;

    bool operator==(const GaloisField& o) const noexcept { return p_ == o.p_ && modulus_ == o.modulus_; }

private:
    u64 slow_mul(u64 a, u64 b) const;
    void build_tables();

    u64 p_;
    unsigned degree_;
    u64 q_;
    PolyFp modulus_;
    std::vector<std::uint32_t> exp_;
    std::vector<std::uint32_t> log_;
};

}  // namespace growthlab::fields
