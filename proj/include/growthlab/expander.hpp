#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "growthlab/calculus.hpp"
#include "growthlab/certificate.hpp"
#include "growthlab/projective.hpp"
#include "growthlab/setcore.hpp"

namespace growthlab::expander {

using setcore::FiniteSet;
using setcore::MultiplicityMap;
using setcore::PairGraph;

// f(A) = {a + ab} = A(A+1).
FiniteSet f_image(const FiniteSet& A);
// g(a,b,c) = (a-b)/(a-c) over a != c.
FiniteSet g_image(const FiniteSet& A);
// h(a,b,c,d) = (a-b)(c-d)/((b-c)(a-d)) over quadruples with nonzero denominator.
FiniteSet h_image(const FiniteSet& A);

// Multiplicities over the admissible tuples above.
MultiplicityMap g_multiplicity(const FiniteSet& A);
MultiplicityMap h_multiplicity(const FiniteSet& A);

// g(A) rebuilt from projective cross ratios: g = phi(X(inf,a,b,c)) with phi[x:y] = [y:x+y].
FiniteSet g_image_by_cross_ratio(const FiniteSet& A);

struct GrowthReport {
    std::string family;
    std::string field;
    std::size_t n = 0;
    std::uint64_t f = 0, g = 0;
    std::optional<std::uint64_t> h;  // skipped for large sets
    double exp_f = 0, exp_g = 0, exp_h = 0;

    // log|img| / log|A|, 0 when |A| < 2.
    static double exponent(std::uint64_t image, std::size_t n);
    bool consistent() const;
};

GrowthReport growth_report(const FiniteSet& A, const std::string& family, bool with_h);

struct PsiResult {
    PairGraph G;
    FiniteSet popular;              // X: ratios x with |A n xB| >= eps|A||B|/|A/B|
    std::uint64_t differences = 0;  // |A -^G B|
    std::uint64_t S = 0;
    std::uint64_t collisions = 0;
    Certificate cert;
};

// The popular-ratio graph and the map psi(xi,c,d) = (a_xi + a_xi d, b_xi + b_xi c),
// checked injective on all of S. Needs 0 outside A and B.
PsiResult psi_injection_engine(const FiniteSet& A, const FiniteSet& B, const Rational& eps = Rational(1, 16));

enum class Corollary { Horrific, Energy, EnergyPrime };

struct CorollaryResult {
    FiniteSet subset;               // A' for Horrific, the covered part of A for Energy
    std::vector<Element> centers;   // translates (Energy: of B, EnergyPrime: of -A)
    Certificate cert;
};

// The three corollaries composed from the psi engine and the calculus routines.
// Energy uses A = B = C with x = 1, y = 0.
CorollaryResult corollary_pipeline(const FiniteSet& A, Corollary which, const Rational& eps = Rational(1, 16));

// A, B inside xC + y; covers (1-eps)|A| by translates of B and of -B.
CorollaryResult corollary_energy(const FiniteSet& A, const FiniteSet& B, const FiniteSet& C, const Element& x,
                                 const Element& y, const Rational& eps);

enum class EnergyVariant { Three, Four };

// Solutions of X(inf,a1,a2,a3) = X(inf,b1,b2,b3) over triples with a1 != a3, or of
// X(a1..a4) = X(b1..b4) over quadruples with (a2-a3)(a1-a4) != 0, counted through
// projective cross ratios. |A| <= 30.
std::uint64_t crossratio_energy(const FiniteSet& A, EnergyVariant variant);

// #{(a,b) in A^2 : tau(a) = b}.
std::uint64_t graph_count(const projective::ProjMap& tau, const FiniteSet& A);
// #{(a,b) in A^2 : psi(tau) on the plane pi_ab}.
std::uint64_t plane_count(const projective::ProjPoint& p, const FiniteSet& A);

struct Bridge {
    std::vector<projective::ProjMap> maps;  // tau with N(tau) >= 2 (fixing inf) or >= 3
    std::uint64_t energy_distinct = 0;      // solutions with pairwise distinct entries
    std::uint64_t energy_full = 0;          // crossratio_energy
    Certificate cert;
};

// The incidence bound for the cross-ratio energy: E <= sum m(p)^3 in the plane
// pi_{inf inf} (Three) or E <= sum m(p)^4 over all planes (Four). |A| <= 12.
Bridge energy_incidence_bridge(const FiniteSet& A, EnergyVariant variant);

}  // namespace growthlab::expander
