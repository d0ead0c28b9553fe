#include "growthlab/setcore.hpp"

#include <algorithm>
#include <numeric>

#include "growthlab/error.hpp"

namespace growthlab::setcore {

const char* to_string(Op op) noexcept {
    switch (op) {
        case Op::Sum: return "sum";
        case Op::Difference: return "difference";
        case Op::Product: return "product";
        case Op::Ratio: return "ratio";
    }
    return "?";
}

Element apply(const Field& F, Op op, const Element& a, const Element& b) {
    switch (op) {
        case Op::Sum: return F.add(a, b);
        case Op::Difference: return F.sub(a, b);
        case Op::Product: return F.mul(a, b);
        case Op::Ratio: return F.div(a, b);
    }
    return a;
}

namespace {

void sort_unique(std::vector<Element>& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
}

// Small prime fields use a dense table indexed by residue.
bool dense_prime(const Field& F) { return F.kind() == fields::FieldKind::Prime && F.characteristic() <= (1u << 16); }

std::uint64_t code(const Element& x) { return std::get<std::uint64_t>(x); }

}  // namespace

FiniteSet::FiniteSet(Field field, std::vector<Element> elements) : field_(std::move(field)), elems_(std::move(elements)) {
    for (auto& x : elems_) {
        field_.check(x);
        if (!field_.is_canonical(x)) x = field_.canonical(x);
    }
    sort_unique(elems_);
}

FiniteSet FiniteSet::from_ints(const Field& F, const std::vector<long long>& values) {
    std::vector<Element> v;
    v.reserve(values.size());
    for (long long x : values) v.push_back(F.from_int(x));
    return FiniteSet(F, std::move(v));
}

FiniteSet FiniteSet::parse(const Field& F, const std::vector<std::string>& values) {
    std::vector<Element> v;
    v.reserve(values.size());
    for (const auto& s : values) v.push_back(F.parse_element(s));
    return FiniteSet(F, std::move(v));
}

bool FiniteSet::contains(const Element& x) const { return std::binary_search(elems_.begin(), elems_.end(), x); }

std::size_t FiniteSet::index_of(const Element& x) const {
    auto it = std::lower_bound(elems_.begin(), elems_.end(), x);
    if (it == elems_.end() || !(*it == x)) return elems_.size();
    return static_cast<std::size_t>(it - elems_.begin());
}

FiniteSet FiniteSet::united(const FiniteSet& o) const {
    fields::require_same(field_, o.field_);
    std::vector<Element> v;
    std::set_union(elems_.begin(), elems_.end(), o.elems_.begin(), o.elems_.end(), std::back_inserter(v));
    FiniteSet r(field_);
    r.elems_ = std::move(v);
    return r;
}

FiniteSet FiniteSet::intersected(const FiniteSet& o) const {
    fields::require_same(field_, o.field_);
    std::vector<Element> v;
    std::set_intersection(elems_.begin(), elems_.end(), o.elems_.begin(), o.elems_.end(), std::back_inserter(v));
    FiniteSet r(field_);
    r.elems_ = std::move(v);
    return r;
}

FiniteSet FiniteSet::without(const FiniteSet& o) const {
    fields::require_same(field_, o.field_);
    std::vector<Element> v;
    std::set_difference(elems_.begin(), elems_.end(), o.elems_.begin(), o.elems_.end(), std::back_inserter(v));
    FiniteSet r(field_);
    r.elems_ = std::move(v);
    return r;
}

FiniteSet FiniteSet::without(const Element& x) const {
    FiniteSet r(field_);
    for (const auto& y : elems_)
        if (!(y == x)) r.elems_.push_back(y);
    return r;
}

bool FiniteSet::is_subset_of(const FiniteSet& o) const {
    fields::require_same(field_, o.field_);
    return std::includes(o.elems_.begin(), o.elems_.end(), elems_.begin(), elems_.end());
}

std::vector<std::string> FiniteSet::format() const {
    std::vector<std::string> out;
    out.reserve(elems_.size());
    for (const auto& x : elems_) out.push_back(field_.format(x));
    return out;
}

std::string FiniteSet::literal() const {
    std::string s = field_.name() + "{";
    bool first = true;
    for (const auto& x : elems_) {
        if (!first) s += ",";
        s += field_.format(x);
        first = false;
    }
    return s + "}";
}

FiniteSet parse_set_literal(const std::string& text) {
    const auto open = text.find('{');
    const auto close = text.rfind('}');
    if (open == std::string::npos || close == std::string::npos || close < open)
        fail(ErrorCode::ParseError, "expected Field{...}");
    Field F = Field::parse(text.substr(0, open));
    std::vector<std::string> items;
    std::string cur;
    int depth = 0;
    for (std::size_t i = open + 1; i < close; ++i) {
        const char c = text[i];
        if (c == '(') ++depth;
        if (c == ')') --depth;
        if (c == ',' && depth == 0) {
            items.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (cur.find_first_not_of(" \t") != std::string::npos) items.push_back(cur);
    return FiniteSet::parse(F, items);
}

PairGraph::PairGraph(FiniteSet left, FiniteSet right, std::vector<Edge> edges)
    : left_(std::move(left)), right_(std::move(right)), edges_(std::move(edges)) {
    fields::require_same(left_.field(), right_.field());
    std::sort(edges_.begin(), edges_.end());
    edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
    right_adj_.assign(left_.size(), {});
    left_adj_.assign(right_.size(), {});
    for (auto [i, j] : edges_) {
        if (i >= left_.size() || j >= right_.size()) fail(ErrorCode::InvalidArgument, "edge index out of range");
        right_adj_[i].push_back(j);
        left_adj_[j].push_back(i);
    }
}

PairGraph PairGraph::complete(const FiniteSet& A, const FiniteSet& B) {
    std::vector<Edge> edges;
    edges.reserve(A.size() * B.size());
    for (std::uint32_t i = 0; i < A.size(); ++i)
        for (std::uint32_t j = 0; j < B.size(); ++j) edges.emplace_back(i, j);
    return PairGraph(A, B, std::move(edges));
}

bool PairGraph::contains(std::uint32_t i, std::uint32_t j) const {
    return std::binary_search(edges_.begin(), edges_.end(), Edge{i, j});
}

PairGraph PairGraph::restrict_left(const FiniteSet& subset) const {
    if (!subset.is_subset_of(left_)) fail(ErrorCode::NotInLeftSet, "restriction is not a subset of the left set");
    std::vector<Edge> edges;
    for (std::uint32_t k = 0; k < subset.size(); ++k) {
        const auto i = static_cast<std::uint32_t>(left_.index_of(subset[k]));
        for (auto j : right_adj_[i]) edges.emplace_back(k, j);
    }
    return PairGraph(subset, right_, std::move(edges));
}

MultiplicityMap::MultiplicityMap(std::vector<std::pair<Element, std::uint64_t>> entries) : entries_(std::move(entries)) {}

std::uint64_t MultiplicityMap::operator()(const Element& x) const {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), x,
                               [](const auto& e, const Element& v) { return e.first < v; });
    return (it != entries_.end() && it->first == x) ? it->second : 0;
}

std::uint64_t MultiplicityMap::total() const noexcept {
    std::uint64_t s = 0;
    for (const auto& e : entries_) s += e.second;
    return s;
}

std::uint64_t MultiplicityMap::sum_of_squares() const noexcept {
    std::uint64_t s = 0;
    for (const auto& e : entries_) s += e.second * e.second;
    return s;
}

BigInt MultiplicityMap::sum_of_powers(unsigned k) const {
    BigInt s = 0;
    for (const auto& e : entries_) {
        BigInt m = static_cast<unsigned long>(e.second), p = 1;
        for (unsigned i = 0; i < k; ++i) p *= m;
        s += p;
    }
    return s;
}

std::uint64_t MultiplicityMap::max() const noexcept {
    std::uint64_t m = 0;
    for (const auto& e : entries_) m = std::max(m, e.second);
    return m;
}

MultiplicityMap count_values(std::vector<Element> values) {
    std::sort(values.begin(), values.end());
    std::vector<std::pair<Element, std::uint64_t>> entries;
    for (auto& v : values) {
        if (!entries.empty() && entries.back().first == v)
            ++entries.back().second;
        else
            entries.emplace_back(std::move(v), 1);
    }
    return MultiplicityMap(std::move(entries));
}

namespace {

// Visits every value a op b over the given pairs, skipping zero divisors.
template <class Visit>
void for_each_value(const FiniteSet& A, const FiniteSet& B, Op op, Visit&& visit) {
    const Field& F = A.field();
    for (const auto& a : A)
        for (const auto& b : B) {
            if (op == Op::Ratio && F.is_zero(b)) continue;
            visit(apply(F, op, a, b));
        }
}

std::uint64_t dense_value(std::uint64_t a, std::uint64_t b, Op op, const fields::GaloisField& gf) {
    switch (op) {
        case Op::Sum: return gf.add(a, b);
        case Op::Difference: return gf.sub(a, b);
        case Op::Product: return gf.mul(a, b);
        case Op::Ratio: return gf.div(a, b);
    }
    return 0;
}

std::vector<std::uint64_t> dense_counts(const FiniteSet& A, const FiniteSet& B, Op op) {
    const auto& gf = A.field().galois();
    std::vector<std::uint64_t> counts(gf.order(), 0);
    std::vector<std::uint64_t> binv;
    for (const auto& b : B) {
        const auto cb = code(b);
        if (op == Op::Ratio && cb == 0) continue;
        binv.push_back(op == Op::Ratio ? gf.inv(cb) : cb);
    }
    const Op effective = op == Op::Ratio ? Op::Product : op;
    for (const auto& a : A) {
        const auto ca = code(a);
        for (auto cb : binv) ++counts[dense_value(ca, cb, effective, gf)];
    }
    return counts;
}

}  // namespace

FiniteSet pairwise_set(const FiniteSet& A, const FiniteSet& B, Op op) {
    fields::require_same(A.field(), B.field());
    if (A.empty() || B.empty()) fail(ErrorCode::EmptyInput, "pairwise set of an empty set");
    const Field& F = A.field();
    if (op == Op::Ratio && B.size() == 1 && F.is_zero(B[0])) fail(ErrorCode::EmptyInput, "ratio set by {0}");
    std::vector<Element> values;
    if (dense_prime(F)) {
        const auto counts = dense_counts(A, B, op);
        for (std::uint64_t c = 0; c < counts.size(); ++c)
            if (counts[c]) values.emplace_back(c);
        return FiniteSet(F, std::move(values));
    }
    values.reserve(A.size() * B.size());
    for_each_value(A, B, op, [&](Element v) { values.push_back(std::move(v)); });
    return FiniteSet(F, std::move(values));
}

FiniteSet partial_pairwise_set(const PairGraph& G, Op op) {
    const Field& F = G.left().field();
    std::vector<Element> values;
    values.reserve(G.size());
    for (auto [i, j] : G.edges()) {
        if (op == Op::Ratio && F.is_zero(G.right()[j])) fail(ErrorCode::ZeroDivisorEdge, "edge to 0 in a ratio set");
        values.push_back(apply(F, op, G.left()[i], G.right()[j]));
    }
    return FiniteSet(F, std::move(values));
}

FiniteSet iterated_sumset(const FiniteSet& A, unsigned k) {
    if (k == 0) fail(ErrorCode::InvalidArgument, "k must be positive");
    if (A.empty()) fail(ErrorCode::EmptyInput, "k-fold sumset of an empty set");
    FiniteSet S = A;
    for (unsigned i = 1; i < k; ++i) {
        if (static_cast<unsigned long long>(S.size()) * A.size() > kEnumerationBudget)
            fail(ErrorCode::BudgetExceeded, "k-fold sumset exceeds the enumeration budget");
        S = pairwise_set(S, A, Op::Sum);
    }
    return S;
}

FiniteSet translate_dilate(const FiniteSet& A, const Element& x, const Element& y) {
    const Field& F = A.field();
    if (F.is_zero(x)) fail(ErrorCode::ZeroDilation, "dilation by zero");
    std::vector<Element> v;
    v.reserve(A.size());
    for (const auto& a : A) v.push_back(F.add(F.mul(x, a), y));
    return FiniteSet(F, std::move(v));
}

FiniteSet negated(const FiniteSet& A) { return translate_dilate(A, A.field().neg(A.field().one()), A.field().zero()); }

FiniteSet shifted(const FiniteSet& A, const Element& y) { return translate_dilate(A, A.field().one(), y); }

MultiplicityMap multiplicity(const FiniteSet& A, const FiniteSet& B, Op op) {
    fields::require_same(A.field(), B.field());
    const Field& F = A.field();
    if (dense_prime(F) && !A.empty() && !B.empty()) {
        const auto counts = dense_counts(A, B, op);
        std::vector<std::pair<Element, std::uint64_t>> entries;
        for (std::uint64_t c = 0; c < counts.size(); ++c)
            if (counts[c]) entries.emplace_back(Element(c), counts[c]);
        return MultiplicityMap(std::move(entries));
    }
    std::vector<Element> values;
    values.reserve(A.size() * B.size());
    for_each_value(A, B, op, [&](Element v) { values.push_back(std::move(v)); });
    return count_values(std::move(values));
}

MultiplicityMap multiplicity(const PairGraph& G, Op op) {
    const Field& F = G.left().field();
    std::vector<Element> values;
    values.reserve(G.size());
    for (auto [i, j] : G.edges()) {
        if (op == Op::Ratio && F.is_zero(G.right()[j])) fail(ErrorCode::ZeroDivisorEdge, "edge to 0 in a ratio set");
        values.push_back(apply(F, op, G.left()[i], G.right()[j]));
    }
    return count_values(std::move(values));
}

std::uint64_t energy(const FiniteSet& A, const FiniteSet& B, EnergyKind kind) {
    return multiplicity(A, B, kind == EnergyKind::Additive ? Op::Sum : Op::Product).sum_of_squares();
}

std::uint64_t graph_energy(const PairGraph& G, Op op) { return multiplicity(G, op).sum_of_squares(); }

KfoldEnergy kfold_energy(const FiniteSet& A, unsigned k) {
    if (k == 0) fail(ErrorCode::InvalidArgument, "k must be positive");
    if (A.empty()) fail(ErrorCode::EmptyInput, "energy of an empty set");
    const Field& F = A.field();
    const std::size_t n = A.size();
    unsigned long long tuples = 1, steps = 1;
    for (unsigned i = 0; i < k; ++i) tuples *= n;
    for (unsigned i = 0; i < 2 * k; ++i) {
        steps *= n;
        if (steps > kEnumerationBudget) fail(ErrorCode::BudgetExceeded, "2k-fold enumeration exceeds the budget");
    }
    // Each k-tuple of indices with its sum, grouped by sum.
    struct Tuple {
        Element sum;
        std::vector<std::uint32_t> idx;
    };
    std::vector<Tuple> all;
    all.reserve(tuples);
    std::vector<std::uint32_t> idx(k, 0);
    for (unsigned long long t = 0; t < tuples; ++t) {
        Element s = F.zero();
        for (auto i : idx) s = F.add(s, A[i]);
        all.push_back({std::move(s), idx});
        for (unsigned pos = k; pos-- > 0;) {
            if (++idx[pos] < n) break;
            idx[pos] = 0;
        }
    }
    std::stable_sort(all.begin(), all.end(), [](const Tuple& a, const Tuple& b) { return a.sum < b.sum; });
    KfoldEnergy result;
    std::vector<std::uint32_t> count(n, 0);
    for (std::size_t lo = 0; lo < all.size();) {
        std::size_t hi = lo;
        while (hi < all.size() && all[hi].sum == all[lo].sum) ++hi;
        for (std::size_t x = lo; x < hi; ++x)
            for (std::size_t y = lo; y < hi; ++y) {
                ++result.total;
                for (auto i : all[x].idx) ++count[i];
                for (auto i : all[y].idx) ++count[i];
                unsigned repeated = 0;
                for (auto i : all[x].idx) repeated += count[i] >= 2;
                for (auto i : all[y].idx) repeated += count[i] >= 2;
                for (auto i : all[x].idx) count[i] = 0;
                for (auto i : all[y].idx) count[i] = 0;
                if (repeated < 2 * k - 1) ++result.nontrivial;
            }
        lo = hi;
    }
    return result;
}

FiniteSet ratio_of_differences(const FiniteSet& A) {
    if (A.size() < 2) fail(ErrorCode::TooSmall, "R(A) needs at least two elements");
    FiniteSet D = pairwise_set(A, A, Op::Difference).without(A.field().zero());
    return pairwise_set(D, D, Op::Ratio);
}

std::uint64_t xi_energy(const FiniteSet& A, const Element& xi) {
    if (A.empty()) fail(ErrorCode::EmptyInput, "energy of an empty set");
    const std::uint64_t n = A.size();
    if (A.field().is_zero(xi)) return n * n * n;
    return multiplicity(A, translate_dilate(A, xi, A.field().zero()), Op::Sum).sum_of_squares();
}

std::uint64_t energy_by_translates(const FiniteSet& A, const FiniteSet& B) {
    const Field& F = A.field();
    FiniteSet S = pairwise_set(A, B, Op::Sum);
    std::uint64_t e = 0;
    for (const auto& x : S) {
        std::uint64_t c = 0;
        for (const auto& b : B) c += A.contains(F.sub(x, b));
        e += c * c;
    }
    return e;
}

std::uint64_t energy_by_intersections(const FiniteSet& A, const FiniteSet& B) {
    std::uint64_t e = 0;
    for (const auto& a : A) {
        FiniteSet Ba = shifted(B, a);
        for (const auto& a2 : A) e += Ba.intersected(shifted(B, a2)).size();
    }
    return e;
}

}  // namespace growthlab::setcore
