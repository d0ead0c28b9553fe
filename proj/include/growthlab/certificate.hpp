#pragma once

#include <string>
#include <utility>
#include <vector>

#include "growthlab/field.hpp"
#include "json.hpp"

namespace growthlab {

using Json = nlohmann::json;

// Exact helpers for inequalities that involve square roots of rationals.
namespace exact {

Rational pow(const Rational& x, unsigned k);
BigInt pow(const BigInt& x, unsigned k);
bool is_square(const Rational& x);
// Rational bracket of sqrt(x) for x >= 0; both equal sqrt(x) when it is rational,
// otherwise within 2^-bits of it.
Rational sqrt_lower(const Rational& x, unsigned bits = 48);
Rational sqrt_upper(const Rational& x, unsigned bits = 48);
// x <= c * sqrt(e) for c, e >= 0, decided exactly.
bool le_c_sqrt(const Rational& x, const Rational& c, const Rational& e);
// x >= c * sqrt(e) for c, e >= 0, decided exactly.
bool ge_c_sqrt(const Rational& x, const Rational& c, const Rational& e);
double to_double(const Rational& x);
std::string to_string(const Rational& x);
Rational parse(const std::string& s);

}  // namespace exact

// One claimed inequality lhs <= rhs. Monitors are recorded but never decide
// whether a certificate holds.
struct Bound {
    std::string name;
    Rational lhs;
    Rational rhs;
    bool monitor = false;

    bool holds() const { return lhs <= rhs; }
    // rhs / lhs, +inf when lhs is zero.
    double ratio() const;
};

struct Certificate {
    std::string lemma;
    Json instance = Json::object();
    std::vector<std::pair<std::string, Rational>> quantities;
    std::vector<Bound> bounds;
    bool constants_suppressed = false;

    void set(const std::string& name, const Rational& value);
    bool has(const std::string& name) const;
    Rational get(const std::string& name) const;
    void require(const std::string& name, const Rational& lhs, const Rational& rhs);
    void monitor(const std::string& name, const Rational& lhs, const Rational& rhs);
    const Bound& bound(const std::string& name) const;

    bool holds() const;
    std::vector<std::string> violations() const;

    Json to_json() const;
    static Certificate from_json(const Json& j);
};

}  // namespace growthlab
