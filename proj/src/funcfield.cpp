#include "growthlab/funcfield.hpp"

#include <algorithm>

#include "growthlab/error.hpp"

namespace growthlab::fields::poly {

int degree(const PolyFq& f) noexcept { return static_cast<int>(f.size()) - 1; }

void trim(PolyFq& f) {
    while (!f.empty() && f.back() == 0) f.pop_back();
}

PolyFq add(const GaloisField& F, const PolyFq& a, const PolyFq& b) {
    PolyFq r(std::max(a.size(), b.size()), 0);
    for (std::size_t i = 0; i < r.size(); ++i) {
        const u64 x = i < a.size() ? a[i] : 0;
        const u64 y = i < b.size() ? b[i] : 0;
        r[i] = F.add(x, y);
    }
    trim(r);
    return r;
}

PolyFq neg(const GaloisField& F, const PolyFq& a) {
    PolyFq r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = F.neg(a[i]);
    return r;
}

PolyFq sub(const GaloisField& F, const PolyFq& a, const PolyFq& b) { return add(F, a, neg(F, b)); }

PolyFq mul(const GaloisField& F, const PolyFq& a, const PolyFq& b) {
    if (a.empty() || b.empty()) return {};
    PolyFq r(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = F.add(r[i + j], F.mul(a[i], b[j]));
    }
    trim(r);
    return r;
}

PolyFq scale(const GaloisField& F, const PolyFq& a, u64 c) {
    PolyFq r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = F.mul(a[i], c);
    trim(r);
    return r;
}

std::pair<PolyFq, PolyFq> divmod(const GaloisField& F, const PolyFq& a, const PolyFq& b) {
    if (b.empty()) fail(ErrorCode::DivisionByZero, "polynomial division by zero");
    PolyFq r = a;
    trim(r);
    if (r.size() < b.size()) return {PolyFq{}, r};
    PolyFq q(r.size() - b.size() + 1, 0);
    const u64 lead_inv = F.inv(b.back());
    while (r.size() >= b.size()) {
        const u64 c = F.mul(r.back(), lead_inv);
        const std::size_t shift = r.size() - b.size();
        q[shift] = c;
        for (std::size_t i = 0; i < b.size(); ++i) r[shift + i] = F.sub(r[shift + i], F.mul(c, b[i]));
        trim(r);
    }
    trim(q);
    return {q, r};
}

PolyFq monic(const GaloisField& F, const PolyFq& a) {
    if (a.empty()) return a;
    return scale(F, a, F.inv(a.back()));
}

PolyFq gcd(const GaloisField& F, PolyFq a, PolyFq b) {
    trim(a);
    trim(b);
    while (!b.empty()) {
        PolyFq r = divmod(F, a, b).second;
        a = std::move(b);
        b = std::move(r);
    }
    return monic(F, a);
}

std::strong_ordering compare(const PolyFq& a, const PolyFq& b) noexcept {
    if (a.size() != b.size()) return a.size() <=> b.size();
    for (std::size_t i = a.size(); i-- > 0;) {
        if (a[i] != b[i]) return a[i] <=> b[i];
    }
    return std::strong_ordering::equal;
}

std::string format(const GaloisField& F, const PolyFq& a, char var) {
    (void)F;
    if (a.empty()) return "0";
    std::string out;
    for (std::size_t i = a.size(); i-- > 0;) {
        if (a[i] == 0) continue;
        if (!out.empty()) out += "+";
        if (i == 0 || a[i] != 1) out += std::to_string(a[i]);
        if (i > 0) {
            if (a[i] != 1) out += "*";
            out += var;
            if (i > 1) out += "^" + std::to_string(i);
        }
    }
    return out;
}

}  // namespace growthlab::fields::poly

namespace growthlab::fields::ratfunc {

RatFunc make(const GaloisField& F, PolyFq num, PolyFq den) {
    poly::trim(num);
    poly::trim(den);
    if (den.empty()) fail(ErrorCode::DivisionByZero, "zero denominator");
    if (num.empty()) return RatFunc{};
    PolyFq g = poly::gcd(F, num, den);
    if (g.size() > 1) {
        num = poly::divmod(F, num, g).first;
        den = poly::divmod(F, den, g).first;
    }
    const u64 lead_inv = F.inv(den.back());
    return RatFunc{poly::scale(F, num, lead_inv), poly::scale(F, den, lead_inv)};
}

bool is_canonical(const GaloisField& F, const RatFunc& x) {
    auto in_range = [&](const PolyFq& f) {
        return std::all_of(f.begin(), f.end(), [&](u64 c) { return F.contains(c); }) && (f.empty() || f.back() != 0);
    };
    if (!in_range(x.num) || !in_range(x.den) || x.den.empty() || x.den.back() != 1) return false;
    if (x.num.empty()) return x.den == PolyFq{1};
    return poly::gcd(F, x.num, x.den) == PolyFq{1};
}

RatFunc add(const GaloisField& F, const RatFunc& a, const RatFunc& b) {
    if (a.den == b.den) return make(F, poly::add(F, a.num, b.num), a.den);
    return make(F, poly::add(F, poly::mul(F, a.num, b.den), poly::mul(F, b.num, a.den)), poly::mul(F, a.den, b.den));
}

RatFunc neg(const GaloisField& F, const RatFunc& a) { return RatFunc{poly::neg(F, a.num), a.den}; }

RatFunc sub(const GaloisField& F, const RatFunc& a, const RatFunc& b) { return add(F, a, neg(F, b)); }

RatFunc mul(const GaloisField& F, const RatFunc& a, const RatFunc& b) {
    return make(F, poly::mul(F, a.num, b.num), poly::mul(F, a.den, b.den));
}

RatFunc inv(const GaloisField& F, const RatFunc& a) {
    if (a.num.empty()) fail(ErrorCode::DivisionByZero, "inverse of zero");
    return make(F, a.den, a.num);
}

}  // namespace growthlab::fields::ratfunc
