#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "growthlab/field.hpp"

namespace growthlab::setcore {

using fields::Element;
using fields::Field;

enum class Op { Sum, Difference, Product, Ratio };

const char* to_string(Op op) noexcept;

// a op b; the caller guarantees b != 0 for Ratio.
Element apply(const Field& F, Op op, const Element& a, const Element& b);

// Finite subset of a field, stored sorted in canonical element order without duplicates.
class FiniteSet {
public:
    explicit FiniteSet(Field field) : field_(std::move(field)) {}
    FiniteSet(Field field, std::vector<Element> elements);
    static FiniteSet from_ints(const Field& F, const std::vector<long long>& values);
    static FiniteSet parse(const Field& F, const std::vector<std::string>& values);

    const Field& field() const noexcept { return field_; }
    std::size_t size() const noexcept { return elems_.size(); }
    bool empty() const noexcept { return elems_.empty(); }
    const std::vector<Element>& elements() const noexcept { return elems_; }
    const Element& operator[](std::size_t i) const { return elems_[i]; }
    auto begin() const noexcept { return elems_.begin(); }
    auto end() const noexcept { return elems_.end(); }

    bool contains(const Element& x) const;
    // Position of x, or size() when absent.
    std::size_t index_of(const Element& x) const;

    FiniteSet united(const FiniteSet& o) const;
    FiniteSet intersected(const FiniteSet& o) const;
    FiniteSet without(const FiniteSet& o) const;
    FiniteSet without(const Element& x) const;
    bool is_subset_of(const FiniteSet& o) const;

    std::vector<std::string> format() const;
    // Set literal such as Fp(101){1,2,3}.
    std::string literal() const;

    bool operator==(const FiniteSet& o) const { return field_ == o.field_ && elems_ == o.elems_; }

private:
    Field field_;
    std::vector<Element> elems_;
};

// Parses Fp(101){1,2,3}.
FiniteSet parse_set_literal(const std::string& text);

using Edge = std::pair<std::uint32_t, std::uint32_t>;

// Bipartite graph G between A and B given by index pairs, sorted and unique.
class PairGraph {
public:
    PairGraph(FiniteSet left, FiniteSet right, std::vector<Edge> edges);
    static PairGraph complete(const FiniteSet& A, const FiniteSet& B);

    const FiniteSet& left() const noexcept { return left_; }
    const FiniteSet& right() const noexcept { return right_; }
    const std::vector<Edge>& edges() const noexcept { return edges_; }
    std::size_t size() const noexcept { return edges_.size(); }
    bool contains(std::uint32_t i, std::uint32_t j) const;

    // Right neighbours of left vertex i, and left neighbours of right vertex j.
    const std::vector<std::uint32_t>& right_of(std::uint32_t i) const { return right_adj_[i]; }
    const std::vector<std::uint32_t>& left_of(std::uint32_t j) const { return left_adj_[j]; }

    // Restriction to the given left indices (kept in the original index space of B).
    PairGraph restrict_left(const FiniteSet& subset) const;

private:
    FiniteSet left_;
    FiniteSet right_;
    std::vector<Edge> edges_;
    std::vector<std::vector<std::uint32_t>> right_adj_;
    std::vector<std::vector<std::uint32_t>> left_adj_;
};

// mu(x): the number of representations of x, sorted by element.
class MultiplicityMap {
public:
    MultiplicityMap() = default;
    explicit MultiplicityMap(std::vector<std::pair<Element, std::uint64_t>> entries);

    const std::vector<std::pair<Element, std::uint64_t>>& entries() const noexcept { return entries_; }
    std::size_t support_size() const noexcept { return entries_.size(); }
    std::uint64_t operator()(const Element& x) const;
    std::uint64_t total() const noexcept;           // sum of mu
    std::uint64_t sum_of_squares() const noexcept;  // sum of mu^2
    BigInt sum_of_powers(unsigned k) const;
    std::uint64_t max() const noexcept;

private:
    std::vector<std::pair<Element, std::uint64_t>> entries_;
};

// Builds a multiplicity map from raw values (sorts and counts).
MultiplicityMap count_values(std::vector<Element> values);

FiniteSet pairwise_set(const FiniteSet& A, const FiniteSet& B, Op op);
FiniteSet partial_pairwise_set(const PairGraph& G, Op op);
FiniteSet iterated_sumset(const FiniteSet& A, unsigned k);
FiniteSet translate_dilate(const FiniteSet& A, const Element& x, const Element& y);  // xA + y
FiniteSet negated(const FiniteSet& A);
FiniteSet shifted(const FiniteSet& A, const Element& y);

MultiplicityMap multiplicity(const FiniteSet& A, const FiniteSet& B, Op op);
MultiplicityMap multiplicity(const PairGraph& G, Op op);

enum class EnergyKind { Additive, Multiplicative };

// E_+(A,B) = #{a+b = a'+b'}; E_x(A,B) = #{ab = a'b'}.
std::uint64_t energy(const FiniteSet& A, const FiniteSet& B, EnergyKind kind);
// Solutions over pairs of edges of G for the given operation.
std::uint64_t graph_energy(const PairGraph& G, Op op);

struct KfoldEnergy {
    std::uint64_t total = 0;
    std::uint64_t nontrivial = 0;
};

// Solutions of a_1+...+a_k = a_{k+1}+...+a_{2k}. A solution is trivial when at
// least 2k-1 of its 2k terms occur at least twice among the 2k terms.
KfoldEnergy kfold_energy(const FiniteSet& A, unsigned k);

// R(A) = {(a-b)/(c-d) : c != d}.
FiniteSet ratio_of_differences(const FiniteSet& A);

// #{(a,b,c,d) in A^4 : a + xi*b = c + xi*d}.
std::uint64_t xi_energy(const FiniteSet& A, const Element& xi);

// Alternative routes to the additive energy, used as cross-checks.
std::uint64_t energy_by_translates(const FiniteSet& A, const FiniteSet& B);    // sum_x |A n (x - B)|^2
std::uint64_t energy_by_intersections(const FiniteSet& A, const FiniteSet& B);  // sum_{a,a'} |(B+a) n (B+a')|

}  // namespace growthlab::setcore
