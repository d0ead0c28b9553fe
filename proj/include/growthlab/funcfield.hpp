#pragma once

#include <compare>
#include <string>
#include <utility>
#include <vector>

#include "growthlab/galois.hpp"

namespace growthlab::fields {

// Polynomials in t over F_q, coefficients are F_q codes stored low to high with
// no trailing zeros; the zero polynomial is empty.
using PolyFq = std::vector<u64>;

namespace poly {

int degree(const PolyFq& f) noexcept;
void trim(PolyFq& f);
PolyFq add(const GaloisField& F, const PolyFq& a, const PolyFq& b);
PolyFq sub(const GaloisField& F, const PolyFq& a, const PolyFq& b);
PolyFq neg(const GaloisField& F, const PolyFq& a);
PolyFq mul(const GaloisField& F, const PolyFq& a, const PolyFq& b);
PolyFq scale(const GaloisField& F, const PolyFq& a, u64 c);
std::pair<PolyFq, PolyFq> divmod(const GaloisField& F, const PolyFq& a, const PolyFq& b);
PolyFq gcd(const GaloisField& F, PolyFq a, PolyFq b);  // monic, zero if both zero
PolyFq monic(const GaloisField& F, const PolyFq& a);
// Orders by degree, then by coefficients from the top down.
std::strong_ordering compare(const PolyFq& a, const PolyFq& b) noexcept;
std::string format(const GaloisField& F, const PolyFq& a, char var);

}  // namespace poly

// Element of F_q(t) as num/den with gcd(num, den) = 1 and den monic. Zero is 0/1.
struct RatFunc {
    PolyFq num;
    PolyFq den{1};

    bool operator==(const RatFunc&) const = default;
    std::strong_ordering operator<=>(const RatFunc& o) const noexcept {
        if (auto c = poly::compare(num, o.num); c != 0) return c;
        return poly::compare(den, o.den);
    }
};

namespace ratfunc {

RatFunc make(const GaloisField& F, PolyFq num, PolyFq den);
bool is_canonical(const GaloisField& F, const RatFunc& x);
RatFunc add(const GaloisField& F, const RatFunc& a, const RatFunc& b);
RatFunc sub(const GaloisField& F, const RatFunc& a, const RatFunc& b);
RatFunc neg(const GaloisField& F, const RatFunc& a);
RatFunc mul(const GaloisField& F, const RatFunc& a, const RatFunc& b);
RatFunc inv(const GaloisField& F, const RatFunc& a);
inline bool is_zero(const RatFunc& a) noexcept { return a.num.empty(); }

}  // namespace ratfunc

}  // namespace growthlab::fields
