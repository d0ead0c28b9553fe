#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "growthlab/linalg.hpp"

namespace growthlab::projective {

using linalg::Matrix;
using linalg::Vector;

// Homogeneous coordinate vector up to scaling, stored with its first nonzero entry equal to 1.
class ProjVector {
public:
    ProjVector(Field field, Vector coords);

    const Field& field() const noexcept { return field_; }
    std::size_t dim() const noexcept { return x_.size() - 1; }
    const Vector& coords() const noexcept { return x_; }
    const Element& operator[](std::size_t i) const { return x_[i]; }
    std::string format() const;  // [x:y:z]

    bool operator==(const ProjVector& o) const { return x_ == o.x_ && field_ == o.field_; }
    bool operator<(const ProjVector& o) const { return x_ < o.x_; }

private:
    Field field_;
    Vector x_;
};

class ProjPoint : public ProjVector {
public:
    using ProjVector::ProjVector;
    static ProjPoint parse(const Field& F, std::string_view text);
};

// The hyperplane a_1 x_1 + ... + a_{n+1} x_{n+1} = 0.
class ProjHyperplane : public ProjVector {
public:
    using ProjVector::ProjVector;
    bool contains(const ProjPoint& p) const;
};

// Invertible matrix modulo scalars, scaled so its first nonzero entry is 1.
class ProjMap {
public:
    ProjMap(Field field, Matrix m);
    static ProjMap identity(const Field& F, std::size_t dim);

    const Field& field() const noexcept { return field_; }
    std::size_t dim() const noexcept { return m_.size() - 1; }
    const Matrix& matrix() const noexcept { return m_; }
    ProjMap inverse() const;
    ProjMap operator*(const ProjMap& o) const;  // composition, o applied first
    std::string format() const;

    bool operator==(const ProjMap& o) const { return m_ == o.m_ && field_ == o.field_; }
    bool operator<(const ProjMap& o) const { return m_ < o.m_; }

private:
    Field field_;
    Matrix m_;
};

ProjPoint embed_affine(const Field& F, const Vector& x);
bool at_infinity(const ProjPoint& p);
Vector to_affine(const ProjPoint& p);  // throws AtInfinity

// Points of the extended line: x -> [x:1], infinity -> [1:0].
ProjPoint line_point(const Field& F, const Element& x);
ProjPoint line_infinity(const Field& F);

ProjPoint apply(const ProjMap& tau, const ProjPoint& p);
// The image hyperplane {tau p : p in h}.
ProjHyperplane apply(const ProjMap& tau, const ProjHyperplane& h);

// n+2 points of PF^n, no n+1 of them in a common hyperplane.
bool is_frame(const std::vector<ProjPoint>& P);
ProjMap frame_map(const std::vector<ProjPoint>& P, const std::vector<ProjPoint>& Q);

// [(ab)(cd) : (bc)(ad)] with (xy) = x1 y2 - x2 y1.
ProjPoint cross_ratio(const ProjPoint& a, const ProjPoint& b, const ProjPoint& c, const ProjPoint& d);
// Sends d to cross_ratio(a,b,c,d).
ProjMap tau_abc(const ProjPoint& a, const ProjPoint& b, const ProjPoint& c);

// [[p,q],[r,s]] -> [p:q:r:s].
ProjPoint psi_embed(const ProjMap& tau);
bool on_quadric(const ProjPoint& x);  // ps = qr
// Planes of PF^3 holding psi(tau) exactly when tau(a) = b.
ProjHyperplane plane_of_pair(const ProjPoint& a, const ProjPoint& b);

std::size_t rank_of(const std::vector<ProjVector>& vs);

struct IncidenceTally {
    std::uint64_t total = 0;
    std::vector<std::uint64_t> per_point;                // m(p) in input order
    std::map<std::uint64_t, std::uint64_t> histogram;    // m -> number of points
};

IncidenceTally incidence_count_projective(const std::vector<ProjPoint>& P, const std::vector<ProjHyperplane>& H);

// Exhaustive enumeration over a finite field, in canonical order.
std::vector<ProjPoint> all_points(const Field& F, std::size_t dim);
std::vector<ProjMap> all_maps(const Field& F, std::size_t dim);

}  // namespace growthlab::projective
