#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "growthlab/certificate.hpp"
#include "growthlab/setcore.hpp"

// Constructive versions of the sumset inequalities. Every routine returns the
// object it builds together with a Certificate whose bounds are exact rational
// comparisons. Thresholds involving sqrt(eps) are decided exactly when building
// sets; in recorded bounds sqrt(eps) is replaced by a rational bracket on the
// side that weakens the claim, which is exact whenever eps is a rational square.
namespace growthlab::calculus {

using setcore::FiniteSet;
using setcore::PairGraph;

Certificate ruzsa_triangle_check(const FiniteSet& A, const FiniteSet& B, const FiniteSet& C);

struct SubsetResult {
    FiniteSet subset;
    Rational K;
    Certificate cert;
};

// Nonempty A' minimising |A'+B|/|A'|; ties go to the larger subset, then to the
// lexicographically smallest one. Exhaustive, |A| <= 20.
SubsetResult petridis_min_ratio_subset(const FiniteSet& A, const FiniteSet& B);

// Petridis subset A' with |A'+kB| <= K^k|A'| and |kB| <= |A+B|^k/|A|^(k-1), 1 <= k <= 4.
SubsetResult plunnecke_check(const FiniteSet& A, const FiniteSet& B, unsigned k);

// |A'+B+C| <= K|A'+C| for a minimising subset A' with ratio K.
Certificate petridis_extension_check(const FiniteSet& subset, const FiniteSet& B, const FiniteSet& C, const Rational& K);

struct KatzShenResult {
    FiniteSet subset;
    std::vector<FiniteSet> pieces;
    Certificate cert;
};

// Peels disjoint Petridis subsets until they cover half of A; then
// |A'| >= |A|/2 and |A'+kB| <= 2^k |A'| |A+B|^k / |A|^k.
KatzShenResult katz_shen_subset(const FiniteSet& A, const FiniteSet& B, unsigned k);

// |B_G(a1) n B_G(a2)|.
std::uint64_t joint_degree(const PairGraph& G, const Element& a1, const Element& a2);

struct DenseResult {
    FiniteSet subset;
    std::uint64_t min_joint_degree = 0;
    Certificate cert;
};

// For |G| >= (1-eps)|A||B|, eps in (0,1/4): A' = {a : deg a >= (1-sqrt eps)|B|}.
DenseResult bsg_dense(const PairGraph& G, const Rational& eps);

struct SparseResult {
    Element witness;   // the vertex b whose neighbourhood seeds the extraction
    FiniteSet first;   // A_G(b)
    PairGraph refined; // pairs of A_G(b) with large joint degree
    FiniteSet subset;  // high-degree part of the refined graph
    Certificate cert;
};

SparseResult bsg_sparse(const PairGraph& G, const Rational& eps);

struct SumProductResult {
    FiniteSet subset;
    Certificate cert;
};

// Joint additive and multiplicative extraction; 0 must not lie in B.
SumProductResult bsg_sumproduct(const PairGraph& G, const Rational& eps);

struct Cover {
    std::vector<Element> centers;
    FiniteSet covered;
    FiniteSet transland;     // each covered x lies in c + transland for some center c
    std::string direction;   // "B-B", "+B" or "-B"
    Certificate cert;
};

// Direct membership check of the covering claim.
bool verify_cover(const Cover& cover);

// Centres in A, pairwise disjoint translates of -B; covers A by x + (B - B).
Cover cover_ruzsa(const FiniteSet& A, const FiniteSet& B);

// Greedy translates a - b + B until at least (1-eps)|A| is covered.
Cover cover_shen(const FiniteSet& A, const FiniteSet& B, const Rational& eps);

struct Variation1 {
    FiniteSet high_degree;
    Cover plus;   // translates a - b + B
    Cover minus;  // translates a + b - B
};

Variation1 cover_variation1(const PairGraph& G, const Rational& eps);

struct Variation2 {
    PairGraph covered_graph;  // G' with A -_{G'} B inside the union of a* - B
    Cover cover;
};

Variation2 cover_variation2(const PairGraph& G, const Rational& eps);

}  // namespace growthlab::calculus
