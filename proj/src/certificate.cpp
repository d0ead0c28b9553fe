#include "growthlab/certificate.hpp"

#include <limits>

#include "growthlab/error.hpp"

namespace growthlab {

namespace exact {

Rational pow(const Rational& x, unsigned k) {
    Rational r = 1;
    for (unsigned i = 0; i < k; ++i) r *= x;
    return r;
}

BigInt pow(const BigInt& x, unsigned k) {
    BigInt r;
    mpz_pow_ui(r.get_mpz_t(), x.get_mpz_t(), k);
    return r;
}

bool is_square(const Rational& x) {
    if (sgn(x) < 0) return false;
    return mpz_perfect_square_p(x.get_num_mpz_t()) && mpz_perfect_square_p(x.get_den_mpz_t());
}

namespace {

Rational exact_sqrt(const Rational& x) {
    BigInt n = sqrt(x.get_num()), d = sqrt(x.get_den());
    Rational r(n, d);
    r.canonicalize();
    return r;
}

// floor(sqrt(x) * 2^bits)
BigInt scaled_floor_sqrt(const Rational& x, unsigned bits) {
    BigInt scale = pow(BigInt(2), 2 * bits);
    BigInt q = x.get_num() * scale / x.get_den();
    return sqrt(q);
}

}  // namespace

Rational sqrt_lower(const Rational& x, unsigned bits) {
    if (sgn(x) < 0) fail(ErrorCode::InvalidArgument, "square root of a negative number");
    if (is_square(x)) return exact_sqrt(x);
    Rational r(scaled_floor_sqrt(x, bits), pow(BigInt(2), bits));
    r.canonicalize();
    return r;
}

Rational sqrt_upper(const Rational& x, unsigned bits) {
    if (sgn(x) < 0) fail(ErrorCode::InvalidArgument, "square root of a negative number");
    if (is_square(x)) return exact_sqrt(x);
    Rational r(scaled_floor_sqrt(x, bits) + 1, pow(BigInt(2), bits));
    r.canonicalize();
    return r;
}

bool le_c_sqrt(const Rational& x, const Rational& c, const Rational& e) {
    if (sgn(x) <= 0) return true;
    return x * x <= c * c * e;
}

bool ge_c_sqrt(const Rational& x, const Rational& c, const Rational& e) {
    if (sgn(x) < 0) return false;
    return x * x >= c * c * e;
}

double to_double(const Rational& x) {
    // Large magnitudes go through mpf to avoid overflow in the numerator alone.
    mpf_class f(x, 256);
    return f.get_d();
}

std::string to_string(const Rational& x) { return x.get_str(); }

Rational parse(const std::string& s) {
    Rational r;
    if (r.set_str(s, 10) != 0) fail(ErrorCode::ParseError, "bad rational '" + s + "'");
    if (r.get_den() == 0) fail(ErrorCode::DivisionByZero, "zero denominator");
    r.canonicalize();
    return r;
}

}  // namespace exact

double Bound::ratio() const {
    if (sgn(lhs) == 0) return std::numeric_limits<double>::infinity();
    return exact::to_double(rhs / lhs);
}

void Certificate::set(const std::string& name, const Rational& value) {
    for (auto& q : quantities) {
        if (q.first == name) {
            q.second = value;
            return;
        }
    }
    quantities.emplace_back(name, value);
}

bool Certificate::has(const std::string& name) const {
    for (const auto& q : quantities)
        if (q.first == name) return true;
    return false;
}

Rational Certificate::get(const std::string& name) const {
    for (const auto& q : quantities)
        if (q.first == name) return q.second;
    fail(ErrorCode::InvalidArgument, "certificate has no quantity '" + name + "'");
}

void Certificate::require(const std::string& name, const Rational& lhs, const Rational& rhs) {
    bounds.push_back(Bound{name, lhs, rhs, false});
}

void Certificate::monitor(const std::string& name, const Rational& lhs, const Rational& rhs) {
    bounds.push_back(Bound{name, lhs, rhs, true});
}

const Bound& Certificate::bound(const std::string& name) const {
    for (const auto& b : bounds)
        if (b.name == name) return b;
    fail(ErrorCode::InvalidArgument, "certificate has no bound '" + name + "'");
}

bool Certificate::holds() const {
    for (const auto& b : bounds)
        if (!b.monitor && !b.holds()) return false;
    return true;
}

std::vector<std::string> Certificate::violations() const {
    std::vector<std::string> out;
    for (const auto& b : bounds)
        if (!b.monitor && !b.holds()) out.push_back(lemma + ": " + b.name + " (" + b.lhs.get_str() + " > " + b.rhs.get_str() + ")");
    return out;
}

Json Certificate::to_json() const {
    Json q = Json::object();
    for (const auto& [name, value] : quantities) q[name] = value.get_str();
    Json bs = Json::array();
    for (const auto& b : bounds)
        bs.push_back({{"name", b.name}, {"lhs", b.lhs.get_str()}, {"rhs", b.rhs.get_str()}, {"monitor", b.monitor}, {"holds", b.holds()}});
    return Json{{"lemma", lemma},
                {"instance", instance},
                {"quantities", q},
                {"bounds", bs},
                {"holds", holds()},
                {"constantsSuppressed", constants_suppressed}};
}

Certificate Certificate::from_json(const Json& j) {
    Certificate c;
    try {
        c.lemma = j.at("lemma").get<std::string>();
        c.instance = j.value("instance", Json::object());
        for (auto it = j.at("quantities").begin(); it != j.at("quantities").end(); ++it)
            c.quantities.emplace_back(it.key(), exact::parse(it.value().get<std::string>()));
        for (const auto& b : j.at("bounds"))
            c.bounds.push_back(Bound{b.at("name").get<std::string>(), exact::parse(b.at("lhs").get<std::string>()),
                                     exact::parse(b.at("rhs").get<std::string>()), b.value("monitor", false)});
        c.constants_suppressed = j.value("constantsSuppressed", false);
    } catch (const Json::exception& e) {
        fail(ErrorCode::ParseError, std::string("malformed certificate: ") + e.what());
    }
    return c;
}

}  // namespace growthlab
