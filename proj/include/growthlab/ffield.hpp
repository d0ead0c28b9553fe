#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "growthlab/certificate.hpp"
#include "growthlab/setcore.hpp"

// Degree valuation, balls and separable sets in F_q(t).
namespace growthlab::ffield {

using setcore::FiniteSet;

// |x| = q^exponent; bottom stands for |0| = 0 and lies below every exponent.
struct Valuation {
    bool bottom = true;
    long exponent = 0;

    static Valuation of(long e) { return {false, e}; }
    static Valuation zero() { return {}; }

    bool operator==(const Valuation&) const = default;
    std::strong_ordering operator<=>(const Valuation& o) const {
        if (bottom || o.bottom) return o.bottom <=> bottom;
        return exponent <=> o.exponent;
    }
    Valuation operator+(const Valuation& o) const {
        return bottom || o.bottom ? zero() : of(exponent + o.exponent);
    }
    std::string format() const { return bottom ? "bottom" : std::to_string(exponent); }
};

// deg(num) - deg(den). Elements must belong to a field F_q(t).
Valuation valuation(const Field& F, const Element& x);
Valuation dist(const Field& F, const Element& x, const Element& y);

// B(center, q^radius) = {y : |center - y| <= q^radius}.
struct Ball {
    Element center;
    long radius = 0;
};

bool member(const Field& F, const Element& x, const Ball& B);

enum class BallRelation { Disjoint, FirstInSecond, SecondInFirst, Equal };

BallRelation ball_relation(const Field& F, const Ball& B1, const Ball& B2);
std::string to_string(BallRelation r);

// r_A(a) = min over a' != a of |a - a'| and B_A(a) = B(a, r_A(a)).
struct NearestBall {
    Valuation r;
    Ball ball;
};

NearestBall nearest_and_ball(const FiniteSet& A, const Element& a);

struct ChainPoset {
    std::vector<Ball> balls;                      // B_A(a) for each a, in set order
    std::vector<std::vector<std::uint32_t>> sub;  // b in sub[a] iff b != a and B_A(b) is inside B_A(a)
    std::vector<std::uint64_t> N;                 // longest A-chain ending at a
};

ChainPoset chain_poset(const FiniteSet& A);

// Is C (inside A) an A-chain: are the balls B_A(c), c in C, totally ordered by inclusion?
bool is_chain(const FiniteSet& A, const FiniteSet& C);

struct ChainResult {
    std::vector<Element> chain;  // c_1, ..., c_n with B_A(c_1) inside ... inside B_A(c_n)
    Certificate cert;
};

// A longest A-chain, with the chain-length expression evaluated with constant 1 as a monitor.
ChainResult max_chain(const FiniteSet& A);

// Single-linkage merge tree. Leaves are the points themselves (radius bottom);
// an internal node at radius e holds a maximal cluster of points within q^e of
// one another, and its children are the clusters one level below.
struct Dendrogram {
    struct Node {
        std::vector<std::uint32_t> members;
        Valuation radius;
        std::vector<std::uint32_t> children;
    };
    std::vector<Node> nodes;  // leaves first, in set order
    std::uint32_t root = 0;

    Json to_json(const FiniteSet& A) const;
};

Dendrogram dendrogram(const FiniteSet& A);

struct Separability {
    bool separable = false;
    std::vector<Element> order;            // a_1, ..., a_n when separable
    std::vector<Ball> balls;               // B_j with A n B_j = {a_1, ..., a_j}
    std::optional<std::uint32_t> refuted;  // the offending dendrogram node otherwise
    Dendrogram tree;
};

Separability is_separable(const FiniteSet& A);

struct StrictResult {
    FiniteSet separable;
    std::vector<std::vector<Element>> classes;  // C split by equal balls B_A
    Certificate cert;
};

// One representative (the smallest) per class of equal balls. Throws NotAChain.
StrictResult separable_from_chain(const FiniteSet& A, const FiniteSet& C);

// No nontrivial solutions to the k-fold energy equation, and |kS| E_k(S) >= |S|^2k.
// Throws NotSeparable.
Certificate separable_growth_check(const FiniteSet& S, unsigned k);

// Longest chain, strict separable subset, growth check with k = 2 and Plunnecke,
// ending with |A+A|^3|AA|^2/|A|^6 as a monitor.
Certificate ff_sumproduct_certificate(const FiniteSet& A);

struct GoodQuadruples {
    std::uint64_t class_size = 0;  // |A_j|
    std::uint64_t Q = 0;
    std::uint64_t images = 0;      // distinct (a+c, b+c, ad, bd) over good quadruples
    Certificate cert;
};

// Exhaustive count of good quadruples (d restricted to A \ {0}) for the dyadic
// class A_j = {a : 2^j <= N(a) < 2^(j+1)}. |A| <= 24.
GoodQuadruples good_quadruple_audit(const FiniteSet& A, unsigned j);

}  // namespace growthlab::ffield
