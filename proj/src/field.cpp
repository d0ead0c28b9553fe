#include "growthlab/field.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

#include "growthlab/error.hpp"

namespace growthlab::fields {

struct Field::Impl {
    FieldKind kind;
    std::optional<GaloisField> gf;
};

namespace {

std::string strip(std::string_view s) {
    std::string out;
    for (char c : s) {
        if (!std::isspace(static_cast<unsigned char>(c))) out += c;
    }
    return out;
}

long long parse_int(const std::string& s) {
    if (s.empty()) fail(ErrorCode::ParseError, "expected an integer");
    std::size_t pos = 0;
    long long v = 0;
    try {
        v = std::stoll(s, &pos);
    } catch (const std::exception&) {
        fail(ErrorCode::ParseError, "bad integer '" + s + "'");
    }
    if (pos != s.size()) fail(ErrorCode::ParseError, "bad integer '" + s + "'");
    return v;
}

u64 parse_u64(const std::string& s) {
    if (s.empty() || !std::all_of(s.begin(), s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
        fail(ErrorCode::ParseError, "bad unsigned integer '" + s + "'");
    try {
        return std::stoull(s);
    } catch (const std::exception&) {
        fail(ErrorCode::ParseError, "integer out of range '" + s + "'");
    }
}

// Terms (coefficient, exponent) of an integer polynomial in one variable.
std::vector<std::pair<long long, unsigned>> parse_poly_terms(const std::string& s, char var) {
    if (s.empty()) fail(ErrorCode::ParseError, "empty polynomial");
    std::vector<std::pair<long long, unsigned>> terms;
    std::size_t i = 0;
    while (i < s.size()) {
        long long sign = 1;
        if (s[i] == '+' || s[i] == '-') {
            if (s[i] == '-') sign = -1;
            ++i;
        } else if (!terms.empty()) {
            fail(ErrorCode::ParseError, "expected '+' or '-' in '" + s + "'");
        }
        std::size_t j = i;
        while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
        long long coef = 1;
        bool has_coef = j > i;
        if (has_coef) coef = parse_int(s.substr(i, j - i));
        i = j;
        if (i < s.size() && s[i] == '*') {
            if (!has_coef) fail(ErrorCode::ParseError, "dangling '*' in '" + s + "'");
            ++i;
            if (i >= s.size() || s[i] != var) fail(ErrorCode::ParseError, "expected variable after '*'");
        }
        unsigned exp = 0;
        if (i < s.size() && s[i] == var) {
            ++i;
            exp = 1;
            if (i < s.size() && s[i] == '^') {
                ++i;
                std::size_t k = i;
                while (k < s.size() && std::isdigit(static_cast<unsigned char>(s[k]))) ++k;
                exp = static_cast<unsigned>(parse_u64(s.substr(i, k - i)));
                i = k;
            }
        } else if (!has_coef) {
            fail(ErrorCode::ParseError, "unexpected character in '" + s + "'");
        }
        terms.emplace_back(sign * coef, exp);
    }
    return terms;
}

PolyFp parse_poly_fp(const std::string& s, u64 p, char var) {
    PolyFp f;
    for (auto [c, e] : parse_poly_terms(s, var)) {
        if (f.size() <= e) f.resize(e + 1, 0);
        __int128 r = static_cast<__int128>(c) % static_cast<__int128>(p);
        if (r < 0) r += p;
        f[e] = addmod(f[e], static_cast<u64>(r), p);
    }
    while (!f.empty() && f.back() == 0) f.pop_back();
    return f;
}

// Coefficients of t are base-field codes; over a prime field they are residues.
PolyFq parse_poly_fq(const GaloisField& F, const std::string& s) {
    PolyFq f;
    for (auto [c, e] : parse_poly_terms(s, 't')) {
        if (f.size() <= e) f.resize(e + 1, 0);
        u64 code;
        if (F.is_prime_field()) {
            code = F.from_int(c);
        } else {
            const u64 mag = static_cast<u64>(c < 0 ? -c : c);
            if (mag >= F.order()) fail(ErrorCode::ParseError, "coefficient code out of range");
            code = c < 0 ? F.neg(mag) : mag;
        }
        f[e] = F.add(f[e], code);
    }
    poly::trim(f);
    return f;
}

std::string unparen(std::string s) {
    while (s.size() >= 2 && s.front() == '(' && s.back() == ')') {
        int depth = 0;
        bool wraps = true;
        for (std::size_t i = 0; i < s.size(); ++i) {
            if (s[i] == '(') ++depth;
            if (s[i] == ')') --depth;
            if (depth == 0 && i + 1 < s.size()) {
                wraps = false;
                break;
            }
        }
        if (!wraps) break;
        s = s.substr(1, s.size() - 2);
    }
    return s;
}

std::size_t top_level_slash(const std::string& s) {
    int depth = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '(') ++depth;
        if (s[i] == ')') --depth;
        if (s[i] == '/' && depth == 0) return i;
    }
    return std::string::npos;
}

const RatFunc& as_ratfunc(const Element& x) {
    if (auto* r = std::get_if<RatFunc>(&x)) return *r;
    fail(ErrorCode::FieldMismatch, "element is not a rational function");
}

const Rational& as_rational(const Element& x) {
    if (auto* r = std::get_if<Rational>(&x)) return *r;
    fail(ErrorCode::FieldMismatch, "element is not rational");
}

u64 as_code(const Element& x) {
    if (auto* r = std::get_if<std::uint64_t>(&x)) return *r;
    fail(ErrorCode::FieldMismatch, "element is not a finite-field code");
}

}  // namespace

Field Field::prime(u64 p) { return Field(std::make_shared<const Impl>(Impl{FieldKind::Prime, GaloisField(p)})); }

Field Field::extension(u64 p, unsigned degree) {
    if (degree == 1) return prime(p);
    return Field(std::make_shared<const Impl>(Impl{FieldKind::Extension, GaloisField::with_degree(p, degree)}));
}

Field Field::extension(u64 p, const PolyFp& modulus) {
    GaloisField gf(p, modulus);
    if (gf.degree() == 1) return prime(p);
    return Field(std::make_shared<const Impl>(Impl{FieldKind::Extension, std::move(gf)}));
}

Field Field::rationals() { return Field(std::make_shared<const Impl>(Impl{FieldKind::Rational, std::nullopt})); }

Field Field::function(u64 p, unsigned degree) { return function(GaloisField::with_degree(p, degree)); }

Field Field::function(const GaloisField& base) {
    return Field(std::make_shared<const Impl>(Impl{FieldKind::Function, base}));
}

namespace {

GaloisField parse_base(const std::string& args) {
    // "q" | "p,a" | "p,a;modulus"
    const auto semi = args.find(';');
    const std::string head = args.substr(0, semi);
    const auto comma = head.find(',');
    if (comma == std::string::npos) {
        if (semi != std::string::npos) fail(ErrorCode::ParseError, "modulus needs an explicit degree");
        u64 p;
        unsigned k;
        const u64 q = parse_u64(head);
        if (!prime_power(q, p, k)) fail(ErrorCode::NotPrime, std::to_string(q) + " is not a prime power");
        return GaloisField::with_degree(p, k);
    }
    const u64 p = parse_u64(head.substr(0, comma));
    const auto a = static_cast<unsigned>(parse_u64(head.substr(comma + 1)));
    if (semi == std::string::npos) return GaloisField::with_degree(p, a);
    PolyFp m = parse_poly_fp(args.substr(semi + 1), p, 'x');
    if (m.size() != a + 1) fail(ErrorCode::InvalidArgument, "modulus degree does not match");
    return GaloisField(p, m);
}

Field field_from_base(const GaloisField& gf) {
    if (gf.degree() == 1) return Field::prime(gf.characteristic());
    return Field::extension(gf.characteristic(), gf.modulus());
}

}  // namespace

Field Field::parse(std::string_view literal) {
    const std::string s = strip(literal);
    if (s == "Q") return rationals();
    auto body = [&](const std::string& prefix) -> std::optional<std::string> {
        if (s.rfind(prefix + "(", 0) == 0 && s.back() == ')') return s.substr(prefix.size() + 1, s.size() - prefix.size() - 2);
        if (s.rfind(prefix + ":", 0) == 0) return s.substr(prefix.size() + 1);
        return std::nullopt;
    };
    if (auto b = body("Fp")) return prime(parse_u64(*b));
    if (auto b = body("Fqt")) return function(parse_base(*b));
    if (auto b = body("Fq")) {
        if (b->rfind("t;", 0) == 0) return function(parse_base(b->substr(2)));
        return field_from_base(parse_base(*b));
    }
    fail(ErrorCode::ParseError, "unknown field literal '" + std::string(literal) + "'");
}

FieldKind Field::kind() const noexcept { return impl_->kind; }

bool Field::is_finite() const noexcept { return kind() == FieldKind::Prime || kind() == FieldKind::Extension; }

u64 Field::characteristic() const noexcept { return impl_->gf ? impl_->gf->characteristic() : 0; }

u64 Field::order() const {
    if (!is_finite()) fail(ErrorCode::InvalidArgument, "field is infinite");
    return impl_->gf->order();
}

const GaloisField& Field::galois() const {
    if (!impl_->gf) fail(ErrorCode::InvalidArgument, "Q has no finite base field");
    return *impl_->gf;
}

std::string Field::name() const {
    switch (kind()) {
        case FieldKind::Prime: return "Fp(" + std::to_string(characteristic()) + ")";
        case FieldKind::Extension: {
            const auto& gf = *impl_->gf;
            return "Fq(" + std::to_string(gf.characteristic()) + "," + std::to_string(gf.degree()) + ";" +
                   poly::format(gf, gf.modulus(), 'x') + ")";
        }
        case FieldKind::Rational: return "Q";
        case FieldKind::Function: {
            const auto& gf = *impl_->gf;
            if (gf.degree() == 1) return "Fq(t;" + std::to_string(gf.characteristic()) + ")";
            return "Fq(t;" + std::to_string(gf.characteristic()) + "," + std::to_string(gf.degree()) + ";" +
                   poly::format(gf, gf.modulus(), 'x') + ")";
        }
    }
    return "?";
}

Element Field::zero() const { return from_int(0); }
Element Field::one() const { return from_int(1); }

Element Field::from_int(long long v) const {
    switch (kind()) {
        case FieldKind::Prime:
        case FieldKind::Extension: return impl_->gf->from_int(v);
        case FieldKind::Rational: return Rational(static_cast<long>(v));
        case FieldKind::Function: {
            const u64 c = impl_->gf->from_int(v);
            return c == 0 ? RatFunc{} : RatFunc{PolyFq{c}, PolyFq{1}};
        }
    }
    return {};
}

Element Field::from_rational(const Rational& r) const {
    if (kind() != FieldKind::Rational) fail(ErrorCode::FieldMismatch, "from_rational needs Q");
    Rational c = r;
    c.canonicalize();
    return c;
}

Element Field::t() const {
    if (kind() != FieldKind::Function) fail(ErrorCode::FieldMismatch, "t exists only in F_q(t)");
    return RatFunc{PolyFq{0, 1}, PolyFq{1}};
}

void Field::check(const Element& x) const {
    switch (kind()) {
        case FieldKind::Prime:
        case FieldKind::Extension:
            if (!std::holds_alternative<std::uint64_t>(x)) fail(ErrorCode::FieldMismatch, "expected a code of " + name());
            break;
        case FieldKind::Rational:
            if (!std::holds_alternative<Rational>(x)) fail(ErrorCode::FieldMismatch, "expected a rational");
            break;
        case FieldKind::Function:
            if (!std::holds_alternative<RatFunc>(x)) fail(ErrorCode::FieldMismatch, "expected an element of " + name());
            break;
    }
}

bool Field::is_zero(const Element& x) const {
    check(x);
    switch (kind()) {
        case FieldKind::Prime:
        case FieldKind::Extension: return std::get<std::uint64_t>(x) == 0;
        case FieldKind::Rational: return sgn(std::get<Rational>(x)) == 0;
        case FieldKind::Function: return std::get<RatFunc>(x).num.empty();
    }
    return false;
}

bool Field::is_canonical(const Element& x) const {
    check(x);
    switch (kind()) {
        case FieldKind::Prime:
        case FieldKind::Extension: return impl_->gf->contains(std::get<std::uint64_t>(x));
        case FieldKind::Rational: {
            const Rational& r = std::get<Rational>(x);
            return sgn(r.get_den()) > 0 && gcd(r.get_num(), r.get_den()) == 1;
        }
        case FieldKind::Function: return ratfunc::is_canonical(*impl_->gf, std::get<RatFunc>(x));
    }
    return false;
}

Element Field::canonical(const Element& x) const {
    check(x);
    switch (kind()) {
        case FieldKind::Prime: return std::get<std::uint64_t>(x) % characteristic();
        case FieldKind::Extension: {
            // Read the code as base-p digits of a polynomial and reduce it.
            const auto& gf = *impl_->gf;
            u64 c = std::get<std::uint64_t>(x);
            u64 result = 0, power = 1;
            const u64 xcode = gf.characteristic();  // the residue of x
            while (c) {
                result = gf.add(result, gf.mul(gf.from_int(static_cast<long long>(c % gf.characteristic())), power));
                c /= gf.characteristic();
                power = gf.mul(power, gf.degree() > 1 ? xcode : 1);
            }
            return result;
        }
        case FieldKind::Rational: {
            Rational r = std::get<Rational>(x);
            if (r.get_den() == 0) fail(ErrorCode::DivisionByZero, "zero denominator");
            r.canonicalize();
            return r;
        }
        case FieldKind::Function: {
            const auto& r = std::get<RatFunc>(x);
            for (u64 c : r.num)
                if (!impl_->gf->contains(c)) fail(ErrorCode::InvalidArgument, "coefficient out of range");
            for (u64 c : r.den)
                if (!impl_->gf->contains(c)) fail(ErrorCode::InvalidArgument, "coefficient out of range");
            return ratfunc::make(*impl_->gf, r.num, r.den);
        }
    }
    return x;
}

Element Field::add(const Element& a, const Element& b) const {
    check(a);
    check(b);
    switch (kind()) {
        case FieldKind::Prime:
        case FieldKind::Extension: return impl_->gf->add(as_code(a), as_code(b));
        case FieldKind::Rational: return Rational(as_rational(a) + as_rational(b));
        case FieldKind::Function: return ratfunc::add(*impl_->gf, as_ratfunc(a), as_ratfunc(b));
    }
    return {};
}

Element Field::sub(const Element& a, const Element& b) const {
    check(a);
    check(b);
    switch (kind()) {
        case FieldKind::Prime:
        case FieldKind::Extension: return impl_->gf->sub(as_code(a), as_code(b));
        case FieldKind::Rational: return Rational(as_rational(a) - as_rational(b));
        case FieldKind::Function: return ratfunc::sub(*impl_->gf, as_ratfunc(a), as_ratfunc(b));
    }
    return {};
}

Element Field::neg(const Element& a) const {
    check(a);
    switch (kind()) {
        case FieldKind::Prime:
        case FieldKind::Extension: return impl_->gf->neg(as_code(a));
        case FieldKind::Rational: return Rational(-as_rational(a));
        case FieldKind::Function: return ratfunc::neg(*impl_->gf, as_ratfunc(a));
    }
    return {};
}

Element Field::mul(const Element& a, const Element& b) const {
    check(a);
    check(b);
    switch (kind()) {
        case FieldKind::Prime:
        case FieldKind::Extension: return impl_->gf->mul(as_code(a), as_code(b));
        case FieldKind::Rational: return Rational(as_rational(a) * as_rational(b));
        case FieldKind::Function: return ratfunc::mul(*impl_->gf, as_ratfunc(a), as_ratfunc(b));
    }
    return {};
}

Element Field::inv(const Element& a) const {
    check(a);
    if (is_zero(a)) fail(ErrorCode::DivisionByZero, "inverse of zero in " + name());
    switch (kind()) {
        case FieldKind::Prime:
        case FieldKind::Extension: return impl_->gf->inv(as_code(a));
        case FieldKind::Rational: return Rational(1 / as_rational(a));
        case FieldKind::Function: return ratfunc::inv(*impl_->gf, as_ratfunc(a));
    }
    return {};
}

Element Field::div(const Element& a, const Element& b) const { return mul(a, inv(b)); }

Element Field::pow(const Element& a, long long e) const {
    Element base = e < 0 ? inv(a) : a;
    unsigned long long n = e < 0 ? static_cast<unsigned long long>(-(e + 1)) + 1 : static_cast<unsigned long long>(e);
    Element result = one();
    while (n) {
        if (n & 1) result = mul(result, base);
        base = mul(base, base);
        n >>= 1;
    }
    return result;
}

std::vector<Element> Field::elements() const {
    const u64 q = order();
    if (q > (1ULL << 24)) fail(ErrorCode::BudgetExceeded, "field too large to enumerate");
    std::vector<Element> out;
    out.reserve(q);
    for (u64 c = 0; c < q; ++c) out.emplace_back(c);
    return out;
}

Element Field::parse_element(std::string_view text) const {
    const std::string s = strip(text);
    if (s.empty()) fail(ErrorCode::ParseError, "empty element");
    switch (kind()) {
        case FieldKind::Prime: {
            const auto slash = s.find('/');
            if (slash != std::string::npos)
                return div(from_int(parse_int(s.substr(0, slash))), from_int(parse_int(s.substr(slash + 1))));
            BigInt v;
            if (v.set_str(s, 10) != 0) fail(ErrorCode::ParseError, "bad residue '" + s + "'");
            BigInt r = v % BigInt(std::to_string(characteristic()));
            if (r < 0) r += BigInt(std::to_string(characteristic()));
            return static_cast<u64>(std::stoull(r.get_str()));
        }
        case FieldKind::Extension: {
            const auto& gf = *impl_->gf;
            PolyFp f = parse_poly_fp(s, gf.characteristic(), 'x');
            // Reduce by evaluating at the residue of x.
            u64 result = 0, power = 1;
            const u64 xcode = gf.characteristic();
            for (u64 c : f) {
                result = gf.add(result, gf.mul(c, power));
                power = gf.mul(power, xcode);
            }
            return result;
        }
        case FieldKind::Rational: {
            if (!std::all_of(s.begin(), s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)) || c == '/' || c == '-' || c == '+'; }))
                fail(ErrorCode::ParseError, "bad rational '" + s + "'");
            Rational r;
            if (r.set_str(s[0] == '+' ? s.substr(1) : s, 10) != 0) fail(ErrorCode::ParseError, "bad rational '" + s + "'");
            if (r.get_den() == 0) fail(ErrorCode::DivisionByZero, "zero denominator in '" + s + "'");
            r.canonicalize();
            return r;
        }
        case FieldKind::Function: {
            const auto& gf = *impl_->gf;
            const auto slash = top_level_slash(s);
            if (slash == std::string::npos) return ratfunc::make(gf, parse_poly_fq(gf, unparen(s)), PolyFq{1});
            PolyFq num = parse_poly_fq(gf, unparen(s.substr(0, slash)));
            PolyFq den = parse_poly_fq(gf, unparen(s.substr(slash + 1)));
            return ratfunc::make(gf, num, den);
        }
    }
    return {};
}

std::string Field::format(const Element& x) const {
    check(x);
    switch (kind()) {
        case FieldKind::Prime:
        case FieldKind::Extension: return impl_->gf->format(std::get<std::uint64_t>(x));
        case FieldKind::Rational: return std::get<Rational>(x).get_str();
        case FieldKind::Function: {
            const auto& r = std::get<RatFunc>(x);
            const std::string num = poly::format(*impl_->gf, r.num, 't');
            if (r.den == PolyFq{1}) return num;
            auto wrap = [](const std::string& p) { return p.find('+') == std::string::npos ? p : "(" + p + ")"; };
            return wrap(num) + "/" + wrap(poly::format(*impl_->gf, r.den, 't'));
        }
    }
    return "?";
}

bool Field::operator==(const Field& o) const noexcept {
    if (impl_ == o.impl_) return true;
    if (impl_->kind != o.impl_->kind) return false;
    if (!impl_->gf) return true;
    return *impl_->gf == *o.impl_->gf;
}

void require_same(const Field& a, const Field& b) {
    if (!(a == b)) fail(ErrorCode::FieldMismatch, a.name() + " vs " + b.name());
}

TaggedElement parse_tagged_element(std::string_view text) {
    const std::string s(text);
    const auto at = s.find('@');
    if (at == std::string::npos) fail(ErrorCode::ParseError, "expected 'value @ field'");
    const std::string value = strip(s.substr(0, at));
    Field f = Field::parse(s.substr(at + 1));
    if (value.find('t') != std::string::npos && f.kind() != FieldKind::Function) f = Field::function(f.galois());
    return TaggedElement{f, f.parse_element(value)};
}

}  // namespace growthlab::fields
