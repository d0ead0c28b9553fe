#include "growthlab/ffield.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <tuple>

#include "growthlab/error.hpp"

namespace growthlab::ffield {

namespace {

Rational Q(std::uint64_t v) { return Rational(BigInt(static_cast<unsigned long>(v))); }

void require_function_field(const Field& F) {
    if (F.kind() != FieldKind::Function) fail(ErrorCode::InvalidArgument, "degree valuation needs a field F_q(t)");
}

Valuation ball_radius(long r) { return Valuation::of(r); }

void absorb(Certificate& into, const Certificate& from, const std::string& prefix) {
    for (const auto& [name, v] : from.quantities) into.set(prefix + name, v);
    for (const auto& b : from.bounds) {
        if (b.monitor)
            into.monitor(prefix + b.name, b.lhs, b.rhs);
        else
            into.require(prefix + b.name, b.lhs, b.rhs);
    }
}

std::uint32_t find(std::vector<std::uint32_t>& parent, std::uint32_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
}

// Classes of equal balls B_A(a), ordered by radius; class_of[i] indexes them.
struct BallClasses {
    std::vector<std::vector<std::uint32_t>> members;
    std::vector<std::uint32_t> class_of;
};

BallClasses ball_classes(const Field& F, const std::vector<Ball>& balls, const std::vector<std::uint32_t>& idx) {
    BallClasses out;
    std::vector<std::uint32_t> order = idx;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::uint32_t x, std::uint32_t y) { return balls[x].radius < balls[y].radius; });
    out.class_of.assign(balls.size(), static_cast<std::uint32_t>(-1));
    for (auto i : order) {
        bool placed = false;
        for (std::uint32_t c = 0; c < out.members.size() && !placed; ++c) {
            if (ball_relation(F, balls[out.members[c][0]], balls[i]) == BallRelation::Equal) {
                out.members[c].push_back(i);
                out.class_of[i] = c;
                placed = true;
            }
        }
        if (!placed) {
            out.class_of[i] = static_cast<std::uint32_t>(out.members.size());
            out.members.push_back({i});
        }
    }
    for (auto& m : out.members) std::sort(m.begin(), m.end());
    return out;
}

std::vector<Ball> all_balls(const FiniteSet& A) {
    std::vector<Ball> balls;
    for (const auto& a : A) balls.push_back(nearest_and_ball(A, a).ball);
    return balls;
}

unsigned ceil_log2(std::size_t n) {
    unsigned l = 0;
    while ((std::size_t{1} << l) < n) ++l;
    return l;
}

}  // namespace

Valuation valuation(const Field& F, const Element& x) {
    require_function_field(F);
    const auto& r = std::get<fields::RatFunc>(x);
    if (fields::ratfunc::is_zero(r)) return Valuation::zero();
    return Valuation::of(fields::poly::degree(r.num) - fields::poly::degree(r.den));
}

Valuation dist(const Field& F, const Element& x, const Element& y) { return valuation(F, F.sub(x, y)); }

bool member(const Field& F, const Element& x, const Ball& B) { return dist(F, x, B.center) <= ball_radius(B.radius); }

BallRelation ball_relation(const Field& F, const Ball& B1, const Ball& B2) {
    if (dist(F, B1.center, B2.center) > ball_radius(std::max(B1.radius, B2.radius))) return BallRelation::Disjoint;
    if (B1.radius == B2.radius) return BallRelation::Equal;
    return B1.radius < B2.radius ? BallRelation::FirstInSecond : BallRelation::SecondInFirst;
}

std::string to_string(BallRelation r) {
    switch (r) {
        case BallRelation::Disjoint: return "disjoint";
        case BallRelation::FirstInSecond: return "first-in-second";
        case BallRelation::SecondInFirst: return "second-in-first";
        case BallRelation::Equal: return "equal";
    }
    return "?";
}

NearestBall nearest_and_ball(const FiniteSet& A, const Element& a) {
    const Field& F = A.field();
    require_function_field(F);
    if (A.size() < 2) fail(ErrorCode::TooSmall, "r_A needs |A| >= 2");
    if (!A.contains(a)) fail(ErrorCode::NotInSet, F.format(a) + " is not in A");
    std::optional<Valuation> best;
    for (const auto& b : A) {
        if (b == a) continue;
        const Valuation d = dist(F, a, b);
        if (!best || d < *best) best = d;
    }
    return {*best, Ball{a, best->exponent}};
}

ChainPoset chain_poset(const FiniteSet& A) {
    const Field& F = A.field();
    if (A.size() < 2) fail(ErrorCode::TooSmall, "chains need |A| >= 2");
    ChainPoset P;
    P.balls = all_balls(A);
    const auto n = static_cast<std::uint32_t>(A.size());
    P.sub.resize(n);
    for (std::uint32_t a = 0; a < n; ++a)
        for (std::uint32_t b = 0; b < n; ++b) {
            if (a == b) continue;
            const BallRelation r = ball_relation(F, P.balls[b], P.balls[a]);
            if (r == BallRelation::FirstInSecond || r == BallRelation::Equal) P.sub[a].push_back(b);
        }

    // A longest chain ending at a takes all of a's class plus the best chain strictly below it.
    std::vector<std::uint32_t> all(n);
    std::iota(all.begin(), all.end(), 0);
    const BallClasses cls = ball_classes(F, P.balls, all);
    std::vector<std::uint64_t> best(cls.members.size(), 0);
    for (std::uint32_t c = 0; c < cls.members.size(); ++c) {
        const std::uint32_t rep = cls.members[c][0];
        std::uint64_t below = 0;
        for (auto b : P.sub[rep])
            if (cls.class_of[b] != c) below = std::max(below, best[cls.class_of[b]]);
        best[c] = cls.members[c].size() + below;
    }
    P.N.resize(n);
    for (std::uint32_t a = 0; a < n; ++a) P.N[a] = best[cls.class_of[a]];
    return P;
}

bool is_chain(const FiniteSet& A, const FiniteSet& C) {
    const Field& F = A.field();
    if (!C.is_subset_of(A)) fail(ErrorCode::NotInSet, "C must lie in A");
    std::vector<Ball> balls;
    for (const auto& c : C) balls.push_back(nearest_and_ball(A, c).ball);
    for (std::size_t i = 0; i < balls.size(); ++i)
        for (std::size_t j = i + 1; j < balls.size(); ++j)
            if (ball_relation(F, balls[i], balls[j]) == BallRelation::Disjoint) return false;
    return true;
}

ChainResult max_chain(const FiniteSet& A) {
    const Field& F = A.field();
    const ChainPoset P = chain_poset(A);
    const auto n = static_cast<std::uint32_t>(A.size());
    std::uint32_t top = 0;
    for (std::uint32_t a = 1; a < n; ++a)
        if (P.N[a] > P.N[top]) top = a;

    // Walk down: at each step take the element's whole class, then the best strictly smaller ball.
    std::vector<std::uint32_t> picked;
    std::uint32_t cur = top;
    while (true) {
        std::vector<std::uint32_t> same{cur}, lower;
        for (auto b : P.sub[cur]) (ball_relation(F, P.balls[b], P.balls[cur]) == BallRelation::Equal ? same : lower).push_back(b);
        std::sort(same.begin(), same.end(), std::greater<>());
        picked.insert(picked.end(), same.begin(), same.end());
        if (lower.empty()) break;
        cur = *std::max_element(lower.begin(), lower.end(),
                                [&](std::uint32_t x, std::uint32_t y) { return P.N[x] < P.N[y] || (P.N[x] == P.N[y] && x > y); });
    }
    ChainResult out;
    for (auto it = picked.rbegin(); it != picked.rend(); ++it) out.chain.push_back(A[*it]);

    auto& cert = out.cert;
    cert.lemma = "longest A-chain";
    cert.instance = {{"field", F.name()}, {"A", A.format()}};
    cert.constants_suppressed = true;
    const Rational a = Q(n);
    const Rational s = Q(setcore::pairwise_set(A, A, setcore::Op::Sum).size());
    const Rational p = Q(setcore::pairwise_set(A, A, setcore::Op::Product).size());
    const Rational L = Q(std::max(1u, ceil_log2(n)));
    std::uint64_t over = 0;
    for (std::uint32_t i = 0; i < n; ++i) {
        std::uint64_t inside = 0;
        for (const auto& b : A) inside += member(F, b, P.balls[i]);
        over += P.N[i] > inside;
    }
    cert.set("|A|", a);
    cert.set("|A+A|", s);
    cert.set("|AA|", p);
    cert.set("|C|", Q(out.chain.size()));
    cert.require("|C|=max N", Q(out.chain.size()), Q(P.N[top]));
    cert.require("max N<=|C|", Q(P.N[top]), Q(out.chain.size()));
    cert.require("chain valid", 1, Q(is_chain(A, FiniteSet(F, out.chain))));
    cert.require("#{a : N(a)>|B_A(a) n A|}<=0", Q(over), 0);
    cert.monitor("|A|^5/(|A+A|^2|AA|^2log^3|A|)<=|C|", exact::pow(a, 5) / (s * s * p * p * L * L * L),
                 Q(out.chain.size()));
    return out;
}

// ---------------------------------------------------------------------------
// Dendrogram and separability

Json Dendrogram::to_json(const FiniteSet& A) const {
    const Field& F = A.field();
    auto rec = [&](auto&& self, std::uint32_t id) -> Json {
        const Node& node = nodes[id];
        if (node.children.empty()) return Json{{"element", F.format(A[node.members[0]])}};
        Json kids = Json::array();
        for (auto c : node.children) kids.push_back(self(self, c));
        return Json{{"radius", node.radius.exponent}, {"size", node.members.size()}, {"children", kids}};
    };
    return rec(rec, root);
}

Dendrogram dendrogram(const FiniteSet& A) {
    const Field& F = A.field();
    require_function_field(F);
    if (A.empty()) fail(ErrorCode::EmptyInput, "dendrogram of an empty set");
    const auto n = static_cast<std::uint32_t>(A.size());
    Dendrogram D;
    for (std::uint32_t i = 0; i < n; ++i) D.nodes.push_back({{i}, Valuation::zero(), {}});

    std::vector<std::tuple<long, std::uint32_t, std::uint32_t>> pairs;
    for (std::uint32_t i = 0; i < n; ++i)
        for (std::uint32_t j = i + 1; j < n; ++j) pairs.emplace_back(dist(F, A[i], A[j]).exponent, i, j);
    std::sort(pairs.begin(), pairs.end());

    std::vector<std::uint32_t> parent(n), node_of(n);
    std::iota(parent.begin(), parent.end(), 0);
    std::iota(node_of.begin(), node_of.end(), 0);
    for (std::size_t k = 0; k < pairs.size();) {
        const long e = std::get<0>(pairs[k]);
        std::vector<std::uint32_t> roots_before;
        for (std::uint32_t i = 0; i < n; ++i)
            if (find(parent, i) == i) roots_before.push_back(i);
        for (; k < pairs.size() && std::get<0>(pairs[k]) == e; ++k) {
            const auto x = find(parent, std::get<1>(pairs[k])), y = find(parent, std::get<2>(pairs[k]));
            if (x != y) parent[std::max(x, y)] = std::min(x, y);
        }
        std::vector<std::vector<std::uint32_t>> groups(n);
        for (auto r : roots_before) groups[find(parent, r)].push_back(node_of[r]);
        for (std::uint32_t r = 0; r < n; ++r) {
            if (groups[r].size() < 2) continue;
            Dendrogram::Node node{{}, Valuation::of(e), groups[r]};
            for (auto c : groups[r])
                node.members.insert(node.members.end(), D.nodes[c].members.begin(), D.nodes[c].members.end());
            std::sort(node.members.begin(), node.members.end());
            node_of[r] = static_cast<std::uint32_t>(D.nodes.size());
            D.nodes.push_back(std::move(node));
        }
    }
    D.root = node_of[find(parent, 0)];
    return D;
}

Separability is_separable(const FiniteSet& A) {
    const Field& F = A.field();
    Separability out;
    out.tree = dendrogram(A);
    const auto& nodes = out.tree.nodes;
    std::vector<std::uint32_t> reversed;
    std::vector<std::uint32_t> prefix_nodes;  // node holding {a_1..a_m}, top down
    std::uint32_t cur = out.tree.root;
    while (!nodes[cur].children.empty()) {
        const auto& ch = nodes[cur].children;
        auto is_leaf = [&](std::uint32_t c) { return nodes[c].children.empty(); };
        if (ch.size() != 2 || (!is_leaf(ch[0]) && !is_leaf(ch[1]))) {
            out.refuted = cur;
            return out;
        }
        prefix_nodes.push_back(cur);
        if (is_leaf(ch[0]) && is_leaf(ch[1])) {
            // The smaller element comes first.
            reversed.push_back(std::max(nodes[ch[0]].members[0], nodes[ch[1]].members[0]));
            reversed.push_back(std::min(nodes[ch[0]].members[0], nodes[ch[1]].members[0]));
            break;
        }
        const std::uint32_t leaf = is_leaf(ch[0]) ? ch[0] : ch[1];
        reversed.push_back(nodes[leaf].members[0]);
        cur = leaf == ch[0] ? ch[1] : ch[0];
    }
    if (nodes[cur].children.empty() && reversed.empty()) reversed.push_back(nodes[cur].members[0]);

    out.separable = true;
    for (auto it = reversed.rbegin(); it != reversed.rend(); ++it) out.order.push_back(A[*it]);
    const Element& a1 = out.order[0];
    out.balls.push_back({a1, A.size() == 1 ? 0 : nearest_and_ball(A, a1).r.exponent - 1});
    for (auto it = prefix_nodes.rbegin(); it != prefix_nodes.rend(); ++it)
        out.balls.push_back({a1, nodes[*it].radius.exponent});
    return out;
}

StrictResult separable_from_chain(const FiniteSet& A, const FiniteSet& C) {
    const Field& F = A.field();
    if (!is_chain(A, C)) fail(ErrorCode::NotAChain, C.literal() + " is not an A-chain");
    StrictResult out{FiniteSet(F), {}, {}};
    if (C.empty()) return out;
    const std::vector<Ball> balls = all_balls(A);
    std::vector<std::uint32_t> idx;
    for (const auto& c : C) idx.push_back(static_cast<std::uint32_t>(A.index_of(c)));
    const BallClasses cls = ball_classes(F, balls, idx);

    std::vector<Element> reps;
    std::size_t largest = 0;
    for (const auto& m : cls.members) {
        std::vector<Element> v;
        for (auto i : m) v.push_back(A[i]);
        reps.push_back(v.front());
        largest = std::max(largest, v.size());
        out.classes.push_back(std::move(v));
    }
    std::uint64_t not_strict = 0;
    for (std::size_t i = 0; i + 1 < cls.members.size(); ++i)
        not_strict += ball_relation(F, balls[cls.members[i][0]], balls[cls.members[i + 1][0]]) !=
                      BallRelation::FirstInSecond;
    out.separable = FiniteSet(F, reps);

    const Rational q = Q(F.galois().order());
    auto& cert = out.cert;
    cert.lemma = "strict subchain";
    cert.instance = {{"field", F.name()}, {"A", A.format()}, {"C", C.format()}};
    cert.set("|C|", Q(C.size()));
    cert.set("classes", Q(cls.members.size()));
    cert.set("largest class", Q(largest));
    cert.require("largest class<=q", Q(largest), q);
    cert.require("|C|<=q|S|", Q(C.size()), q * Q(out.separable.size()));
    cert.require("non-strict steps<=0", Q(not_strict), 0);
    cert.require("S separable", 1, Q(is_separable(out.separable).separable));
    return out;
}

Certificate separable_growth_check(const FiniteSet& S, unsigned k) {
    const Field& F = S.field();
    if (!is_separable(S).separable) fail(ErrorCode::NotSeparable, S.literal() + " is not separable");
    const setcore::KfoldEnergy E = setcore::kfold_energy(S, k);
    const FiniteSet kS = setcore::iterated_sumset(S, k);
    Certificate cert;
    cert.lemma = "separable growth";
    cert.instance = {{"field", F.name()}, {"S", S.format()}, {"k", k}};
    const Rational s2k = exact::pow(Q(S.size()), 2 * k);
    cert.set("|S|", Q(S.size()));
    cert.set("E_k", Q(E.total));
    cert.set("nontrivial", Q(E.nontrivial));
    cert.set("|kS|", Q(kS.size()));
    cert.require("nontrivial<=0", Q(E.nontrivial), 0);
    cert.require("|S|^2k<=|kS|E_k", s2k, Q(kS.size()) * Q(E.total));
    return cert;
}

Certificate ff_sumproduct_certificate(const FiniteSet& A) {
    const Field& F = A.field();
    require_function_field(F);
    if (A.size() < 2) fail(ErrorCode::TooSmall, "the sum-product certificate needs |A| >= 2");
    const ChainResult chain = max_chain(A);
    const StrictResult strict = separable_from_chain(A, FiniteSet(F, chain.chain));
    const Certificate growth = separable_growth_check(strict.separable, 2);

    Certificate cert;
    cert.lemma = "function field sum-product";
    cert.instance = {{"field", F.name()}, {"A", A.format()}};
    cert.constants_suppressed = true;
    absorb(cert, chain.cert, "chain.");
    absorb(cert, strict.cert, "strict.");
    absorb(cert, growth, "growth.");
    const Rational a = Q(A.size());
    const Rational s = Q(setcore::pairwise_set(A, A, setcore::Op::Sum).size());
    const Rational p = Q(setcore::pairwise_set(A, A, setcore::Op::Product).size());
    const Rational twoS = Q(setcore::iterated_sumset(strict.separable, 2).size());
    cert.set("|A+A|", s);
    cert.set("|AA|", p);
    cert.set("|S|", Q(strict.separable.size()));
    cert.require("|2S|<=|A+A|", twoS, s);
    for (unsigned k = 2; k <= 3; ++k) {
        const Rational kA = Q(setcore::iterated_sumset(A, k).size());
        cert.set("|" + std::to_string(k) + "A|", kA);
        cert.require("|" + std::to_string(k) + "A||A|^" + std::to_string(k - 1) + "<=|A+A|^" + std::to_string(k),
                     kA * exact::pow(a, k - 1), exact::pow(s, k));
    }
    const Rational lhs = exact::pow(s, 3) * p * p;
    cert.set("ratio", lhs / exact::pow(a, 6));
    cert.monitor("|A|^6<=|A+A|^3|AA|^2", exact::pow(a, 6), lhs);
    return cert;
}

GoodQuadruples good_quadruple_audit(const FiniteSet& A, unsigned j) {
    const Field& F = A.field();
    require_function_field(F);
    if (A.size() > 24) fail(ErrorCode::BudgetExceeded, "the good-quadruple audit runs on |A| <= 24");
    if (j > 30) fail(ErrorCode::InvalidArgument, "dyadic index out of range");
    const ChainPoset P = chain_poset(A);
    const auto n = static_cast<std::uint32_t>(A.size());
    const std::uint64_t lo = std::uint64_t{1} << j, hi = lo << 1;
    std::vector<std::uint32_t> Aj;
    for (std::uint32_t a = 0; a < n; ++a)
        if (P.N[a] >= lo && P.N[a] < hi) Aj.push_back(a);

    const FiniteSet sums = setcore::pairwise_set(A, A, setcore::Op::Sum);
    const FiniteSet prods = setcore::pairwise_set(A, A, setcore::Op::Product);
    const Rational s = Q(sums.size()), p = Q(prods.size()), m = Q(Aj.size());
    const Rational two_j = Q(lo);
    std::vector<std::uint32_t> nonzero;
    for (std::uint32_t i = 0; i < n; ++i)
        if (!F.is_zero(A[i])) nonzero.push_back(i);

    GoodQuadruples out;
    out.class_size = Aj.size();
    // add[x][c] = |(A+A) n (B_A(a_x)+c)|, mul[x][d] = |(AA) n d B_A(a_x)|.
    std::vector<std::vector<std::uint64_t>> add(Aj.size(), std::vector<std::uint64_t>(n, 0)),
        mul(Aj.size(), std::vector<std::uint64_t>(n, 0));
    for (std::size_t x = 0; x < Aj.size(); ++x) {
        const Ball& B = P.balls[Aj[x]];
        for (std::uint32_t c = 0; c < n; ++c)
            for (const auto& u : sums) add[x][c] += member(F, F.sub(u, A[c]), B);
        for (auto d : nonzero) {
            const Element dinv = F.inv(A[d]);
            for (const auto& w : prods) mul[x][d] += member(F, F.mul(w, dinv), B);
        }
    }
    // (a,c) good iff |A_j| add <= 2^(j+3)|A+A|, and likewise for (a,d).
    auto add_good = [&](std::size_t x, std::uint32_t c) { return m * Q(add[x][c]) <= 8 * two_j * s; };
    auto mul_good = [&](std::size_t x, std::uint32_t d) { return m * Q(mul[x][d]) <= 8 * two_j * p; };

    std::set<std::tuple<Element, Element, Element, Element>> images;
    std::uint64_t worst_add_bad = 0, worst_mul_bad = 0;
    Rational worst_add_sum = 0, worst_mul_sum = 0;
    for (std::uint32_t c = 0; c < n; ++c) {
        std::uint64_t bad = 0, sum = 0;
        for (std::size_t x = 0; x < Aj.size(); ++x) bad += !add_good(x, c), sum += add[x][c];
        worst_add_bad = std::max(worst_add_bad, bad);
        worst_add_sum = std::max(worst_add_sum, Q(sum));
    }
    for (auto d : nonzero) {
        std::uint64_t bad = 0, sum = 0;
        for (std::size_t x = 0; x < Aj.size(); ++x) bad += !mul_good(x, d), sum += mul[x][d];
        worst_mul_bad = std::max(worst_mul_bad, bad);
        worst_mul_sum = std::max(worst_mul_sum, Q(sum));
    }
    for (std::size_t x = 0; x < Aj.size(); ++x) {
        const Element& a = A[Aj[x]];
        const Ball& B = P.balls[Aj[x]];
        for (const auto& b : A) {
            if (!member(F, b, B)) continue;
            for (std::uint32_t c = 0; c < n; ++c) {
                if (!add_good(x, c)) continue;
                for (auto d : nonzero) {
                    if (!mul_good(x, d)) continue;
                    ++out.Q;
                    images.emplace(F.add(a, A[c]), F.add(b, A[c]), F.mul(a, A[d]), F.mul(b, A[d]));
                }
            }
        }
    }
    out.images = images.size();

    auto& cert = out.cert;
    cert.lemma = "good quadruples";
    cert.instance = {{"field", F.name()}, {"A", A.format()}, {"j", j}};
    cert.constants_suppressed = true;
    const Rational a = Q(n), a0 = Q(nonzero.size());
    cert.set("|A_j|", m);
    cert.set("Q", Q(out.Q));
    cert.set("images", Q(out.images));
    cert.set("0 in A", Q(nonzero.size() < n));
    cert.set("lower", two_j * m * a * a);
    if (!Aj.empty()) cert.set("upper", two_j * two_j * s * s * p * p / (m * m));
    cert.require("sum_a |(A+A) n (B_A(a)+c)|<=2^(j+1)|A+A|", worst_add_sum, 2 * two_j * s);
    cert.require("sum_a |AA n dB_A(a)|<=2^(j+1)|AA|", worst_mul_sum, 2 * two_j * p);
    cert.require("4 #{a : (a,c) not additively good}<|A_j|", 4 * Q(worst_add_bad), Aj.empty() ? Rational(0) : Rational(m - 1));
    cert.require("4 #{a : (a,d) not multiplicatively good}<|A_j|", 4 * Q(worst_mul_bad), Aj.empty() ? Rational(0) : Rational(m - 1));
    cert.require("2^j|A_j||A||A\\{0}|<=2Q", two_j * m * a * a0, 2 * Q(out.Q));
    cert.require("images |A_j|^2<=2^(2j+6)|A+A|^2|AA|^2", Q(out.images) * m * m, 64 * two_j * two_j * s * s * p * p);
    cert.monitor("Q |A_j|^2<=2^(2j+4)|A+A|^2|AA|^2", Q(out.Q) * m * m, 16 * two_j * two_j * s * s * p * p);
    return out;
}

}  // namespace growthlab::ffield
