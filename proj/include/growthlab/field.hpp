#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "growthlab/funcfield.hpp"
#include "growthlab/galois.hpp"

namespace growthlab {

using Rational = mpq_class;
using BigInt = mpz_class;

namespace fields {

enum class FieldKind { Prime, Extension, Rational, Function };

// A field element is a canonical representative; which alternative is active
// depends on the field: codes for F_p and F_q, rationals for Q, and reduced
// fractions for F_q(t). Elements do not carry their field, operations go
// through the owning Field.
using Element = std::variant<std::uint64_t, Rational, RatFunc>;

class Field {
public:
    static Field prime(u64 p);
    static Field extension(u64 p, unsigned degree);
    static Field extension(u64 p, const PolyFp& modulus);
    static Field rationals();
    static Field function(u64 p, unsigned degree = 1);
    static Field function(const GaloisField& base);

    // Accepts Fp(101), Fq(2,2;x^2+x+1), Fq(4), Q, Fq(t;2), Fq(t;2,2;x^2+x+1)
    // and the short forms Fp:101, Fq:4, Fq:2,2, Fqt:2.
    static Field parse(std::string_view literal);

    FieldKind kind() const noexcept;
    bool is_finite() const noexcept;
    u64 characteristic() const noexcept;  // 0 for Q
    u64 order() const;                    // finite fields only
    const GaloisField& galois() const;    // F_p, F_q, or the constants of F_q(t)
    std::string name() const;

    Element zero() const;
    Element one() const;
    Element from_int(long long v) const;
    Element from_rational(const Rational& r) const;  // Q only
    Element t() const;                                 // F_q(t) only

    bool is_zero(const Element& x) const;
    bool is_canonical(const Element& x) const;
    Element canonical(const Element& x) const;
    void check(const Element& x) const;  // throws FieldMismatch for foreign elements

    Element add(const Element& a, const Element& b) const;
    Element sub(const Element& a, const Element& b) const;
    Element neg(const Element& a) const;
    Element mul(const Element& a, const Element& b) const;
    Element div(const Element& a, const Element& b) const;
    Element inv(const Element& a) const;
    Element pow(const Element& a, long long e) const;

    std::vector<Element> elements() const;  // finite fields only, in canonical order

    Element parse_element(std::string_view text) const;
    std::string format(const Element& x) const;

    bool operator==(const Field& o) const noexcept;

private:
    struct Impl;
    explicit Field(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
    std::shared_ptr<const Impl> impl_;
};

void require_same(const Field& a, const Field& b);

struct TaggedElement {
    Field field;
    Element value;
};

// Parses "(t^2+1)/(t+1) @ Fq(2)": an element of F_q(t) when t appears,
// otherwise an element of the tagged field.
TaggedElement parse_tagged_element(std::string_view text);

}  // namespace fields

using fields::Element;
using fields::Field;
using fields::FieldKind;

}  // namespace growthlab
