#include "growthlab/calculus.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <limits>

#include "growthlab/error.hpp"
#include "growthlab/io.hpp"

namespace growthlab::calculus {

using setcore::Edge;
using setcore::EnergyKind;
using setcore::Op;

namespace {

Rational Q(std::uint64_t v) { return Rational(BigInt(static_cast<unsigned long>(v))); }

void require_nonempty(const FiniteSet& S, const char* what) {
    if (S.empty()) fail(ErrorCode::EmptyInput, std::string(what) + " is empty");
}

void require_eps(const Rational& eps, const Rational& hi) {
    if (eps <= 0 || eps >= hi)
        fail(ErrorCode::InvalidArgument, "eps must lie in (0," + exact::to_string(hi) + ")");
}

void require_dense(const PairGraph& G, const Rational& eps) {
    if (Q(G.size()) < (1 - eps) * Q(G.left().size()) * Q(G.right().size()))
        fail(ErrorCode::DensityTooLow, "|G| < (1-eps)|A||B|");
}

// Rows of a bipartite adjacency matrix packed as 64-bit words.
using Row = std::vector<std::uint64_t>;

std::vector<Row> rows_of(const PairGraph& G) {
    const std::size_t W = (G.right().size() + 63) / 64;
    std::vector<Row> rows(G.left().size(), Row(W, 0));
    for (auto [i, j] : G.edges()) rows[i][j / 64] |= std::uint64_t{1} << (j % 64);
    return rows;
}

std::uint64_t popcount(const Row& r) {
    std::uint64_t c = 0;
    for (auto w : r) c += std::popcount(w);
    return c;
}

std::uint64_t common(const Row& a, const Row& b) {
    std::uint64_t c = 0;
    for (std::size_t k = 0; k < a.size(); ++k) c += std::popcount(a[k] & b[k]);
    return c;
}

// Vertices with (n - deg)^2 <= eps n^2, i.e. degree at least (1 - sqrt eps) n.
std::vector<std::uint32_t> high_degree(const std::vector<Row>& rows, std::size_t n, const Rational& eps) {
    std::vector<std::uint32_t> out;
    const Rational nn = Q(n) * Q(n);
    for (std::uint32_t i = 0; i < rows.size(); ++i) {
        const Rational miss = Q(n - popcount(rows[i]));
        if (miss * miss <= eps * nn) out.push_back(i);
    }
    return out;
}

// Minimum joint degree over ordered pairs of `idx`, diagonal included.
std::uint64_t min_joint(const std::vector<Row>& rows, const std::vector<std::uint32_t>& idx) {
    if (idx.empty()) return 0;
    std::uint64_t best = std::numeric_limits<std::uint64_t>::max();
    for (std::size_t x = 0; x < idx.size(); ++x)
        for (std::size_t y = x; y < idx.size(); ++y) best = std::min(best, common(rows[idx[x]], rows[idx[y]]));
    return best;
}

FiniteSet pick(const FiniteSet& S, const std::vector<std::uint32_t>& idx) {
    std::vector<Element> v;
    v.reserve(idx.size());
    for (auto i : idx) v.push_back(S[i]);
    return FiniteSet(S.field(), std::move(v));
}

Json sets_instance(std::initializer_list<std::pair<const char*, const FiniteSet*>> sets) {
    Json j = Json::object();
    j["field"] = sets.begin()->second->field().name();
    for (auto& [name, S] : sets) j[name] = io::to_json(*S);
    return j;
}

Json graph_instance(const PairGraph& G, const Rational* eps) {
    Json j = io::to_json(G);
    if (eps) j["eps"] = exact::to_string(*eps);
    return j;
}

std::size_t words_for(std::size_t n) { return (n + 63) / 64; }

}  // namespace

Certificate ruzsa_triangle_check(const FiniteSet& A, const FiniteSet& B, const FiniteSet& C) {
    require_nonempty(A, "A");
    require_nonempty(B, "B");
    require_nonempty(C, "C");
    require_same(A.field(), B.field());
    require_same(A.field(), C.field());
    Certificate cert;
    cert.lemma = "ruzsa_triangle";
    cert.instance = sets_instance({{"A", &A}, {"B", &B}, {"C", &C}});
    const auto ab = setcore::pairwise_set(A, B, Op::Difference).size();
    const auto ac = setcore::pairwise_set(A, C, Op::Difference).size();
    const auto bc = setcore::pairwise_set(B, C, Op::Difference).size();
    cert.set("|A-B|", Q(ab));
    cert.set("|A-C|", Q(ac));
    cert.set("|B-C|", Q(bc));
    cert.set("|C|", Q(C.size()));
    cert.require("|A-B||C|<=|A-C||B-C|", Q(ab) * Q(C.size()), Q(ac) * Q(bc));
    return cert;
}

SubsetResult petridis_min_ratio_subset(const FiniteSet& A, const FiniteSet& B) {
    require_nonempty(A, "A");
    require_nonempty(B, "B");
    require_same(A.field(), B.field());
    const std::size_t n = A.size();
    if (n > 20) fail(ErrorCode::SubsetBudgetExceeded, "exhaustive subset search is capped at |A| = 20");

    const FiniteSet S = setcore::pairwise_set(A, B, Op::Sum);
    const std::size_t W = words_for(S.size());
    std::vector<Row> sums(n, Row(W, 0));
    for (std::size_t i = 0; i < n; ++i)
        for (const auto& b : B) {
            const auto k = S.index_of(A.field().add(A[i], b));
            sums[i][k / 64] |= std::uint64_t{1} << (k % 64);
        }

    std::uint64_t best_s = 0, best_m = 0, best_mask = 0;
    auto better = [&](std::uint64_t s, std::uint64_t m, std::uint64_t mask) {
        if (best_m == 0) return true;
        if (s * best_m != best_s * m) return s * best_m < best_s * m;
        if (m != best_m) return m > best_m;
        // Equal sizes: the mask owning the lowest differing index is lexicographically first.
        const std::uint64_t diff = mask ^ best_mask;
        return diff != 0 && (mask & (diff & (~diff + 1))) != 0;
    };

    std::vector<Row> stack(n + 1, Row(W, 0));
    std::function<void(std::size_t, std::size_t, std::uint64_t)> dfs = [&](std::size_t start, std::size_t depth,
                                                                          std::uint64_t mask) {
        for (std::size_t i = start; i < n; ++i) {
            Row& cur = stack[depth + 1];
            for (std::size_t w = 0; w < W; ++w) cur[w] = stack[depth][w] | sums[i][w];
            const std::uint64_t m2 = mask | (std::uint64_t{1} << i);
            const std::uint64_t s = popcount(cur);
            if (better(s, depth + 1, m2)) {
                best_s = s;
                best_m = depth + 1;
                best_mask = m2;
            }
            dfs(i + 1, depth + 1, m2);
        }
    };
    dfs(0, 0, 0);

    std::vector<std::uint32_t> idx;
    for (std::uint32_t i = 0; i < n; ++i)
        if (best_mask >> i & 1) idx.push_back(i);

    SubsetResult r{pick(A, idx), Rational(BigInt(static_cast<unsigned long>(best_s)), BigInt(static_cast<unsigned long>(best_m))), {}};
    r.K.canonicalize();
    auto& c = r.cert;
    c.lemma = "petridis_min_ratio_subset";
    c.instance = sets_instance({{"A", &A}, {"B", &B}});
    c.instance["subset"] = io::to_json(r.subset);
    c.set("|A|", Q(n));
    c.set("|B|", Q(B.size()));
    c.set("|A+B|", Q(S.size()));
    c.set("|A'|", Q(best_m));
    c.set("|A'+B|", Q(best_s));
    c.set("K", r.K);
    c.require("K|A|<=|A+B|", r.K * Q(n), Q(S.size()));
    c.require("|A'+B|<=K|A'|", Q(best_s), r.K * Q(best_m));
    return r;
}

SubsetResult plunnecke_check(const FiniteSet& A, const FiniteSet& B, unsigned k) {
    if (k < 1 || k > 4) fail(ErrorCode::InvalidArgument, "k must lie in [1,4]");
    SubsetResult r = petridis_min_ratio_subset(A, B);
    const FiniteSet kB = setcore::iterated_sumset(B, k);
    const auto apkb = setcore::pairwise_set(r.subset, kB, Op::Sum).size();
    const Rational a = Q(A.size()), ab = r.cert.get("|A+B|"), ap = Q(r.subset.size());
    auto& c = r.cert;
    c.lemma = "plunnecke_check";
    c.instance["k"] = k;
    c.set("k", Q(k));
    c.set("|kB|", Q(kB.size()));
    c.set("|A'+kB|", Q(apkb));
    c.require("|A'+kB|<=K^k|A'|", Q(apkb), exact::pow(r.K, k) * ap);
    c.require("|A'+kB||A|^k<=|A'||A+B|^k", Q(apkb) * exact::pow(a, k), ap * exact::pow(ab, k));
    c.require("|kB||A|^(k-1)<=|A+B|^k", Q(kB.size()) * exact::pow(a, k - 1), exact::pow(ab, k));
    return r;
}

Certificate petridis_extension_check(const FiniteSet& subset, const FiniteSet& B, const FiniteSet& C, const Rational& K) {
    require_nonempty(subset, "A'");
    require_nonempty(B, "B");
    require_nonempty(C, "C");
    const FiniteSet apc = setcore::pairwise_set(subset, C, Op::Sum);
    const FiniteSet apbc = setcore::pairwise_set(setcore::pairwise_set(subset, B, Op::Sum), C, Op::Sum);
    Certificate c;
    c.lemma = "petridis_extension";
    c.instance = sets_instance({{"subset", &subset}, {"B", &B}, {"C", &C}});
    c.instance["K"] = exact::to_string(K);
    c.set("|A'+C|", Q(apc.size()));
    c.set("|A'+B+C|", Q(apbc.size()));
    c.set("K", K);
    c.require("|A'+B+C|<=K|A'+C|", Q(apbc.size()), K * Q(apc.size()));
    return c;
}

KatzShenResult katz_shen_subset(const FiniteSet& A, const FiniteSet& B, unsigned k) {
    if (k < 1 || k > 4) fail(ErrorCode::InvalidArgument, "k must lie in [1,4]");
    require_nonempty(A, "A");
    require_nonempty(B, "B");
    if (A.size() > 20) fail(ErrorCode::SubsetBudgetExceeded, "exhaustive subset search is capped at |A| = 20");
    const FiniteSet kB = setcore::iterated_sumset(B, k);
    const Rational a = Q(A.size());
    const Rational ab = Q(setcore::pairwise_set(A, B, Op::Sum).size());

    KatzShenResult r{FiniteSet(A.field()), {}, {}};
    auto& c = r.cert;
    c.lemma = "katz_shen_subset";
    c.instance = sets_instance({{"A", &A}, {"B", &B}});
    c.instance["k"] = k;
    FiniteSet rest = A;
    while (2 * r.subset.size() < A.size()) {
        const SubsetResult piece = petridis_min_ratio_subset(rest, B);
        const std::string tag = "piece" + std::to_string(r.pieces.size() + 1);
        const Rational restplus = Q(setcore::pairwise_set(rest, B, Op::Sum).size());
        const Rational pk = Q(setcore::pairwise_set(piece.subset, kB, Op::Sum).size());
        const Rational ps = Q(piece.subset.size());
        c.set(tag + ".|A_i|", ps);
        c.set(tag + ".|A_i+kB|", pk);
        c.set(tag + ".|A_*|", Q(rest.size()));
        c.set(tag + ".|A_*+B|", restplus);
        c.require(tag + ".|A_i+kB||A_*|^k<=|A_i||A_*+B|^k", pk * exact::pow(Q(rest.size()), k),
                  ps * exact::pow(restplus, k));
        r.pieces.push_back(piece.subset);
        r.subset = r.subset.united(piece.subset);
        rest = rest.without(piece.subset);
    }
    const Rational sub = Q(r.subset.size());
    const Rational spk = Q(setcore::pairwise_set(r.subset, kB, Op::Sum).size());
    c.instance["subset"] = io::to_json(r.subset);
    c.set("|A|", a);
    c.set("|A+B|", ab);
    c.set("|A'|", sub);
    c.set("|A'+kB|", spk);
    c.set("pieces", Q(r.pieces.size()));
    c.require("|A|<=2|A'|", a, 2 * sub);
    c.require("|A'+kB||A|^k<=2^k|A'||A+B|^k", spk * exact::pow(a, k), exact::pow(Rational(2), k) * sub * exact::pow(ab, k));
    return r;
}

std::uint64_t joint_degree(const PairGraph& G, const Element& a1, const Element& a2) {
    const auto i = G.left().index_of(a1), j = G.left().index_of(a2);
    if (i == G.left().size() || j == G.left().size()) fail(ErrorCode::NotInLeftSet, "vertex not in A");
    const auto& x = G.right_of(static_cast<std::uint32_t>(i));
    const auto& y = G.right_of(static_cast<std::uint32_t>(j));
    std::uint64_t c = 0;
    for (std::size_t p = 0, q = 0; p < x.size() && q < y.size();) {
        if (x[p] < y[q]) ++p;
        else if (y[q] < x[p]) ++q;
        else ++c, ++p, ++q;
    }
    return c;
}

DenseResult bsg_dense(const PairGraph& G, const Rational& eps) {
    require_eps(eps, Rational(1, 4));
    require_nonempty(G.left(), "A");
    require_nonempty(G.right(), "B");
    require_dense(G, eps);
    const auto rows = rows_of(G);
    const auto idx = high_degree(rows, G.right().size(), eps);
    DenseResult r{pick(G.left(), idx), min_joint(rows, idx), {}};

    const Rational a = Q(G.left().size()), b = Q(G.right().size());
    const Rational X = Q(setcore::partial_pairwise_set(G, Op::Difference).size());
    const Rational D = Q(setcore::pairwise_set(r.subset, r.subset, Op::Difference).size());
    const Rational K = Q(r.min_joint_degree), ap = Q(r.subset.size());
    const Rational su = exact::sqrt_upper(eps);

    auto& c = r.cert;
    c.lemma = "bsg_dense";
    c.instance = graph_instance(G, &eps);
    c.instance["subset"] = io::to_json(r.subset);
    c.set("|A|", a);
    c.set("|B|", b);
    c.set("|G|", Q(G.size()));
    c.set("eps", eps);
    c.set("|A'|", ap);
    c.set("minJointDegree", K);
    c.set("|A-^GB|", X);
    c.set("|A'-A'|", D);
    c.require("|A'|>=(1-sqrt(eps))|A|", (1 - su) * a, ap);
    c.require("minJointDegree>=(1-2sqrt(eps))|B|", (1 - 2 * su) * b, K);
    c.require("|A'-A'|K<=|A-^GB|^2", D * K, X * X);
    c.require("|A'-A'|(1-2sqrt(eps))|B|<=|A-^GB|^2", D * (1 - 2 * su) * b, X * X);
    return r;
}

namespace {

// The refinement step shared by the sparse and sum-product extractions.
struct Refined {
    std::uint32_t witness = 0;
    std::vector<std::uint32_t> first;   // A_G(b) as indices into A
    std::vector<Edge> h_edges;          // pairs of positions in `first`
    std::vector<Row> h_rows;            // adjacency of H' over positions in `first`
    std::vector<std::uint32_t> inner;   // high-degree positions in H'
    Rational tau;
    Rational score;
    std::uint64_t k1 = 0;               // min joint G-degree over H'
    std::uint64_t k2 = 0;               // min joint H'-degree over `inner`
};

Refined refine(const PairGraph& G, const Rational& eps) {
    const std::size_t n = G.left().size(), m = G.right().size();
    const auto rows = rows_of(G);
    const Rational g = Q(G.size());
    Refined r;
    r.tau = eps * g * g / (2 * Q(n) * Q(n) * Q(m));

    std::vector<std::uint64_t> jd(n * n);
    std::vector<char> inH(n * n);
    for (std::size_t x = 0; x < n; ++x)
        for (std::size_t y = x; y < n; ++y) {
            const auto v = common(rows[x], rows[y]);
            jd[x * n + y] = jd[y * n + x] = v;
            inH[x * n + y] = inH[y * n + x] = Q(v) >= r.tau;
        }

    bool found = false;
    for (std::uint32_t j = 0; j < m; ++j) {
        const auto& L = G.left_of(j);
        std::uint64_t miss = 0;
        for (auto x : L)
            for (auto y : L) miss += !inH[x * n + y];
        const Rational s = Q(L.size()) * Q(L.size()) - Q(miss) / eps;
        if (!found || s > r.score) {
            found = true;
            r.score = s;
            r.witness = j;
        }
    }
    if (!found || r.score * 2 * Q(m) * Q(m) < g * g) fail(ErrorCode::NoWitness, "no vertex satisfies the pigeonhole condition");

    r.first = G.left_of(r.witness);
    const std::size_t f = r.first.size();
    r.h_rows.assign(f, Row(words_for(f), 0));
    r.k1 = std::numeric_limits<std::uint64_t>::max();
    for (std::uint32_t p = 0; p < f; ++p)
        for (std::uint32_t q = 0; q < f; ++q)
            if (inH[r.first[p] * n + r.first[q]]) {
                r.h_edges.emplace_back(p, q);
                r.h_rows[p][q / 64] |= std::uint64_t{1} << (q % 64);
                r.k1 = std::min(r.k1, jd[r.first[p] * n + r.first[q]]);
            }
    if (r.h_edges.empty()) r.k1 = 0;
    r.inner = high_degree(r.h_rows, f, eps);
    r.k2 = min_joint(r.h_rows, r.inner);
    return r;
}

// 4 sqrt 2 / (eps^2 (1 - 2 sqrt eps)), rounded up.
Rational sparse_constant(const Rational& eps) {
    return 4 * exact::sqrt_upper(Rational(2)) / (eps * eps * (1 - 2 * exact::sqrt_upper(eps)));
}

}  // namespace

SparseResult bsg_sparse(const PairGraph& G, const Rational& eps) {
    require_eps(eps, Rational(1, 4));
    if (G.size() == 0) fail(ErrorCode::EmptyInput, "G has no edges");
    const Refined ref = refine(G, eps);
    const FiniteSet first = pick(G.left(), ref.first);
    SparseResult r{G.right()[ref.witness], first, PairGraph(first, first, ref.h_edges), pick(first, ref.inner), {}};

    const Rational a = Q(G.left().size()), b = Q(G.right().size()), g = Q(G.size());
    const Rational ap = Q(first.size()), app = Q(r.subset.size());
    const Rational X = Q(setcore::partial_pairwise_set(G, Op::Difference).size());
    const Rational Y = Q(setcore::partial_pairwise_set(r.refined, Op::Difference).size());
    const Rational Z = Q(setcore::pairwise_set(r.subset, r.subset, Op::Difference).size());
    const Rational K1 = Q(ref.k1), K2 = Q(ref.k2), h = Q(r.refined.size());
    const Rational su = exact::sqrt_upper(eps);

    auto& c = r.cert;
    c.lemma = "bsg_sparse";
    c.instance = graph_instance(G, &eps);
    c.instance["witness"] = G.left().field().format(r.witness);
    c.instance["subset"] = io::to_json(r.subset);
    c.set("|A|", a);
    c.set("|B|", b);
    c.set("|G|", g);
    c.set("eps", eps);
    c.set("tau", ref.tau);
    c.set("witnessScore", ref.score);
    c.set("|A'|", ap);
    c.set("|H'|", h);
    c.set("K1", K1);
    c.set("|A-^GB|", X);
    c.set("|A'-^HA'|", Y);
    c.set("|A''|", app);
    c.set("K2", K2);
    c.set("|A''-A''|", Z);
    c.require("witnessScore*2|B|^2>=|G|^2", g * g, ref.score * 2 * b * b);
    c.require("2|A'|^2|B|^2>=|G|^2", g * g, 2 * ap * ap * b * b);
    c.require("2|A'||B|>=|G|", g, 2 * ap * b);
    c.require("|H'|>=(1-eps)|A'|^2", (1 - eps) * ap * ap, h);
    c.require("K1>=tau", ref.tau, K1);
    c.require("|A'-^HA'|K1<=|A-^GB|^2", Y * K1, X * X);
    c.require("|A''|>=(1-sqrt(eps))|A'|", (1 - su) * ap, app);
    c.require("K2>=(1-2sqrt(eps))|A'|", (1 - 2 * su) * ap, K2);
    c.require("|A''-A''|K2<=|A'-^HA'|^2", Z * K2, Y * Y);
    const Rational C = sparse_constant(eps);
    c.set("C", C);
    c.monitor("|A''-A''||G|^5<=C|A|^4|B|^3|A-^GB|^4", Z * exact::pow(g, 5),
              C * exact::pow(a, 4) * exact::pow(b, 3) * exact::pow(X, 4));
    c.constants_suppressed = true;
    return r;
}

SumProductResult bsg_sumproduct(const PairGraph& G, const Rational& eps) {
    require_eps(eps, Rational(1, 4));
    if (G.size() == 0) fail(ErrorCode::EmptyInput, "G has no edges");
    const Field& F = G.left().field();
    for (const auto& b : G.right())
        if (F.is_zero(b)) fail(ErrorCode::ZeroInRight, "0 lies in B");
    const Refined ref = refine(G, eps);
    const FiniteSet A1 = pick(G.left(), ref.first);
    const PairGraph H(A1, A1, ref.h_edges);
    SumProductResult r{pick(A1, ref.inner), {}};
    const FiniteSet& Ap = r.subset;

    // The ratio statements divide by elements of A; when 0 lies in A the
    // injections lose the quotient 0, so those claims are only monitored.
    const bool zero_in_A = G.left().contains(F.zero());
    const std::size_t zpos = A1.index_of(F.zero());

    std::vector<Edge> hz;
    for (auto e : ref.h_edges)
        if (e.second != zpos) hz.push_back(e);
    const PairGraph Hz(A1, A1, hz);

    std::vector<Row> rows_nz = ref.h_rows;
    if (zpos < A1.size())
        for (auto& row : rows_nz) row[zpos / 64] &= ~(std::uint64_t{1} << (zpos % 64));
    const std::uint64_t k2x = min_joint(rows_nz, ref.inner);

    std::vector<Edge> hpp;  // H' = H n (A' x A') without edges into 0, as positions in A'
    for (auto [p, q] : ref.h_edges) {
        auto ip = std::find(ref.inner.begin(), ref.inner.end(), p);
        auto iq = std::find(ref.inner.begin(), ref.inner.end(), q);
        if (ip == ref.inner.end() || iq == ref.inner.end() || q == zpos) continue;
        hpp.emplace_back(static_cast<std::uint32_t>(ip - ref.inner.begin()), static_cast<std::uint32_t>(iq - ref.inner.begin()));
    }
    const PairGraph Hpp(Ap, Ap, hpp);

    const Rational a = Q(G.left().size()), b = Q(G.right().size()), g = Q(G.size());
    const Rational a1 = Q(A1.size()), ap = Q(Ap.size());
    const Rational Xm = Q(setcore::partial_pairwise_set(G, Op::Difference).size());
    const Rational Xd = Q(setcore::partial_pairwise_set(G, Op::Ratio).size());
    const Rational Ym = Q(setcore::partial_pairwise_set(H, Op::Difference).size());
    const Rational Yd = Q(setcore::partial_pairwise_set(Hz, Op::Ratio).size());
    const Rational Zm = Q(setcore::pairwise_set(Ap, Ap, Op::Difference).size());
    const bool only_zero = Ap.size() == 1 && F.is_zero(Ap[0]);
    const Rational Zd = only_zero ? Rational(0) : Q(setcore::pairwise_set(Ap, Ap, Op::Ratio).size());
    const Rational E = Q(setcore::energy(Ap, Ap, EnergyKind::Multiplicative));
    const Rational Hr = Q(setcore::partial_pairwise_set(Hpp, Op::Ratio).size());
    const Rational hp = Q(hpp.size());
    const Rational K1 = Q(ref.k1), K2 = Q(ref.k2), K2x = Q(k2x);
    const Rational su = exact::sqrt_upper(eps);
    const Rational C = sparse_constant(eps);
    const Rational lo = (1 - 2 * su) * (1 - 2 * su) - eps;
    const Rational cE = lo * lo * eps / 2;

    auto& c = r.cert;
    c.lemma = "bsg_sumproduct";
    c.instance = graph_instance(G, &eps);
    c.instance["subset"] = io::to_json(Ap);
    c.set("|A|", a);
    c.set("|B|", b);
    c.set("|G|", g);
    c.set("eps", eps);
    c.set("tau", ref.tau);
    c.set("|A1|", a1);
    c.set("|H|", Q(H.size()));
    c.set("K1", K1);
    c.set("|A'|", ap);
    c.set("K2", K2);
    c.set("K2x", K2x);
    c.set("|A-^GB|", Xm);
    c.set("|A/^GB|", Xd);
    c.set("|A1-^HA1|", Ym);
    c.set("|A1/^HA1|", Yd);
    c.set("|A'-A'|", Zm);
    c.set("|A'/A'|", Zd);
    c.set("E_x(A')", E);
    c.set("|H'|", hp);
    c.set("|A'/^H'A'|", Hr);
    c.set("C", C);
    c.set("c", cE);

    auto claim = [&](bool hard, const std::string& name, const Rational& lhs, const Rational& rhs) {
        if (hard) c.require(name, lhs, rhs);
        else c.monitor(name, lhs, rhs);
    };
    c.require("2|A1|^2|B|^2>=|G|^2", g * g, 2 * a1 * a1 * b * b);
    c.require("K1>=tau", ref.tau, K1);
    c.require("|A1-^HA1|K1<=|A-^GB|^2", Ym * K1, Xm * Xm);
    claim(!zero_in_A, "|A1/^HA1|K1<=|A/^GB|^2", Yd * K1, Xd * Xd);
    c.require("|A'|>=(1-2sqrt(eps))|A1|", (1 - 2 * su) * a1, ap);
    c.require("K2>=(1-2sqrt(eps))|A1|", (1 - 2 * su) * a1, K2);
    c.require("|A'-A'|K2<=|A1-^HA1|^2", Zm * K2, Ym * Ym);
    claim(!zero_in_A, "|A'/A'|K2x<=|A1/^HA1|^2", Zd * K2x, Yd * Yd);
    c.require("E_x(A')|A'/^H'A'|>=|H'|^2", hp * hp, E * Hr);
    c.require("|A'-A'||G|^5<=C|A-^GB|^4|A|^4|B|^3", Zm * exact::pow(g, 5),
              C * exact::pow(Xm, 4) * exact::pow(a, 4) * exact::pow(b, 3));
    claim(!zero_in_A, "|A'/A'||G|^5<=C|A/^GB|^4|A|^4|B|^3", Zd * exact::pow(g, 5),
          C * exact::pow(Xd, 4) * exact::pow(a, 4) * exact::pow(b, 3));
    claim(!zero_in_A, "E_x(A')|A/^GB|^2|A|^2|B|>=c|G|^2|A'|^4", cE * g * g * exact::pow(ap, 4),
          E * Xd * Xd * a * a * b);
    return r;
}

bool verify_cover(const Cover& cover) {
    const Field& F = cover.covered.field();
    for (const auto& x : cover.covered) {
        bool hit = false;
        for (const auto& ctr : cover.centers)
            if (cover.transland.contains(F.sub(x, ctr))) {
                hit = true;
                break;
            }
        if (!hit) return false;
    }
    return true;
}

Cover cover_ruzsa(const FiniteSet& A, const FiniteSet& B) {
    require_nonempty(A, "A");
    require_nonempty(B, "B");
    require_same(A.field(), B.field());
    const Field& F = A.field();
    const FiniteSet D = setcore::pairwise_set(B, B, Op::Difference);
    std::vector<char> open(A.size(), 1);
    std::size_t left = A.size();
    Cover cv{{}, A, D, "B-B", {}};
    while (left > 0) {
        std::size_t best = A.size(), best_cov = 0;
        for (std::size_t i = 0; i < A.size(); ++i) {
            if (!open[i]) continue;
            std::size_t cov = 0;
            for (std::size_t j = 0; j < A.size(); ++j)
                if (open[j] && D.contains(F.sub(A[j], A[i]))) ++cov;
            if (cov > best_cov) best = i, best_cov = cov;
        }
        cv.centers.push_back(A[best]);
        for (std::size_t j = 0; j < A.size(); ++j)
            if (open[j] && D.contains(F.sub(A[j], A[best]))) open[j] = 0, --left;
    }
    const Rational amb = Q(setcore::pairwise_set(A, B, Op::Difference).size());
    const Rational m = Q(cv.centers.size()), b = Q(B.size());
    auto& c = cv.cert;
    c.lemma = "cover_ruzsa";
    c.instance = sets_instance({{"A", &A}, {"B", &B}});
    c.set("|A|", Q(A.size()));
    c.set("|B|", b);
    c.set("|A-B|", amb);
    c.set("centers", m);
    c.set("covered", Q(A.size()));
    // The centres are chosen outside earlier translates, so the sets c - B are disjoint in A - B.
    c.require("centers|B|<=|A-B|", m * b, amb);
    c.require("centers<=ceil(|A-B|/|B|)", m, Rational(BigInt(amb.get_num() + b.get_num() - 1) / b.get_num()));
    c.require("|A|<=covered", Q(A.size()), Q(verify_cover(cv) ? A.size() : 0));
    return cv;
}

Cover cover_shen(const FiniteSet& A, const FiniteSet& B, const Rational& eps) {
    require_eps(eps, Rational(1));
    require_nonempty(A, "A");
    require_nonempty(B, "B");
    require_same(A.field(), B.field());
    const Field& F = A.field();
    const FiniteSet shifts = setcore::pairwise_set(A, B, Op::Difference);
    const Rational amb = Q(shifts.size()), b = Q(B.size()), a = Q(A.size());
    std::vector<char> open(A.size(), 1);
    std::size_t rest = A.size();
    Cover cv{{}, FiniteSet(F), B, "+B", {}};
    std::vector<Element> covered;
    Rational slack;  // min over steps of coverage|A-B| - |R||B|
    bool first = true;
    while (Q(rest) > eps * a) {
        std::size_t best = 0, best_cov = 0;
        for (std::size_t s = 0; s < shifts.size(); ++s) {
            std::size_t cov = 0;
            for (const auto& y : B) {
                const auto k = A.index_of(F.add(shifts[s], y));
                if (k < A.size() && open[k]) ++cov;
            }
            if (cov > best_cov) best = s, best_cov = cov;
        }
        const Rational step = Q(best_cov) * amb - Q(rest) * b;
        if (first || step < slack) slack = step;
        first = false;
        cv.centers.push_back(shifts[best]);
        for (const auto& y : B) {
            const auto k = A.index_of(F.add(shifts[best], y));
            if (k < A.size() && open[k]) open[k] = 0, --rest, covered.push_back(A[k]);
        }
    }
    cv.covered = FiniteSet(F, covered);
    const Rational m = Q(cv.centers.size());
    auto& c = cv.cert;
    c.lemma = "cover_shen";
    c.instance = sets_instance({{"A", &A}, {"B", &B}});
    c.instance["eps"] = exact::to_string(eps);
    c.set("|A|", a);
    c.set("|B|", b);
    c.set("|A-B|", amb);
    c.set("eps", eps);
    c.set("centers", m);
    c.set("covered", Q(cv.covered.size()));
    c.set("coverageFraction", Q(cv.covered.size()) / a);
    c.require("(1-eps)|A|<=covered", (1 - eps) * a, Q(cv.covered.size()));
    c.require("inclusion", Rational(1), Rational(verify_cover(cv) ? 1 : 0));
    if (!cv.centers.empty()) {
        c.require("greedyStep", Rational(0), slack);
        // Each step keeps at most a (1 - |B|/|A-B|) share, and the loop ran while more than eps|A| remained.
        c.require("eps<=(1-|B|/|A-B|)^(centers-1)", eps, exact::pow(1 - b / amb, cv.centers.size() - 1));
        const double bound = std::log(1.0 / exact::to_double(eps)) * exact::to_double(amb / b) + 1;
        c.monitor("centers<=ln(1/eps)|A-B|/|B|+1", m, Rational(bound));
    }
    return cv;
}

namespace {

Cover peel(const PairGraph& G, const std::vector<std::uint32_t>& A1, const Rational& eps, bool plus, const Rational& X) {
    const FiniteSet& A = G.left();
    const FiniteSet& B = G.right();
    const Field& F = A.field();
    std::vector<char> open(A.size(), 0);
    for (auto i : A1) open[i] = 1;
    std::size_t rest = A1.size();
    const Rational n1 = Q(A1.size()), b = Q(B.size());
    Cover cv{{}, FiniteSet(F), plus ? B : setcore::negated(B), plus ? "+B" : "-B", {}};
    const FiniteSet& T = cv.transland;
    std::vector<Element> covered;
    Rational slack;
    bool first = true;
    // Stop once |R| <= sqrt(eps)|A_1|.
    while (Q(rest) * Q(rest) > eps * n1 * n1) {
        std::vector<Element> cand;
        std::uint64_t gstar = 0;
        for (std::uint32_t i = 0; i < A.size(); ++i) {
            if (!open[i]) continue;
            gstar += G.right_of(i).size();
            for (const auto& y : B) cand.push_back(plus ? F.sub(A[i], y) : F.add(A[i], y));
        }
        const FiniteSet centers(F, cand);
        std::size_t best = 0, best_cov = 0;
        for (std::size_t s = 0; s < centers.size(); ++s) {
            std::size_t cov = 0;
            for (const auto& y : T) {
                const auto k = A.index_of(F.add(centers[s], y));
                if (k < A.size() && open[k]) ++cov;
            }
            if (cov > best_cov) best = s, best_cov = cov;
        }
        const Rational step = Q(best_cov) * Q(rest) * b * X - Q(gstar) * Q(gstar);
        if (first || step < slack) slack = step;
        first = false;
        cv.centers.push_back(centers[best]);
        for (const auto& y : T) {
            const auto k = A.index_of(F.add(centers[best], y));
            if (k < A.size() && open[k]) open[k] = 0, --rest, covered.push_back(A[k]);
        }
    }
    cv.covered = FiniteSet(F, covered);

    const Rational a = Q(A.size()), m = Q(cv.centers.size());
    const Rational su = exact::sqrt_upper(eps), sl = exact::sqrt_lower(eps);
    auto& c = cv.cert;
    c.lemma = plus ? "cover_variation1_plus" : "cover_variation1_minus";
    c.instance = graph_instance(G, &eps);
    c.set("|A|", a);
    c.set("|B|", b);
    c.set("|A_1|", n1);
    c.set("|A-^GB|", X);
    c.set("eps", eps);
    c.set("centers", m);
    c.set("covered", Q(cv.covered.size()));
    c.require("(1-2sqrt(eps))|A|<=covered", (1 - 2 * su) * a, Q(cv.covered.size()));
    c.require("inclusion", Rational(1), Rational(verify_cover(cv) ? 1 : 0));
    if (!cv.centers.empty()) {
        c.require("greedyStep", Rational(0), slack);
        const Rational f = (1 - su) * (1 - su) * b / X;
        c.require("sqrt(eps)<=(1-(1-sqrt(eps))^2|B|/|A-^GB|)^(centers-1)", sl, exact::pow(1 - f, cv.centers.size() - 1));
        const double se = std::sqrt(exact::to_double(eps));
        const double C = std::log(1.0 / se) / ((1 - se) * (1 - se));
        c.set("C(eps)", Rational(C));
        c.monitor("centers<=C(eps)|A-^GB|/|B|+1", m, Rational(C * exact::to_double(X / b) + 1));
    }
    return cv;
}

}  // namespace

Variation1 cover_variation1(const PairGraph& G, const Rational& eps) {
    require_eps(eps, Rational(1, 4));
    require_nonempty(G.left(), "A");
    require_nonempty(G.right(), "B");
    require_dense(G, eps);
    const auto A1 = high_degree(rows_of(G), G.right().size(), eps);
    const Rational X = Q(setcore::partial_pairwise_set(G, Op::Difference).size());
    Variation1 v{pick(G.left(), A1), peel(G, A1, eps, true, X), peel(G, A1, eps, false, X)};
    const Rational su = exact::sqrt_upper(eps);
    for (Cover* cv : {&v.plus, &v.minus}) {
        cv->cert.set("|A_1|", Q(A1.size()));
        cv->cert.require("|A_1|>=(1-sqrt(eps))|A|", (1 - su) * Q(G.left().size()), Q(A1.size()));
    }
    return v;
}

Variation2 cover_variation2(const PairGraph& G, const Rational& eps) {
    require_eps(eps, Rational(1));
    if (G.size() == 0) fail(ErrorCode::EmptyInput, "G has no edges");
    const FiniteSet& A = G.left();
    const FiniteSet& B = G.right();
    const Field& F = A.field();
    const auto& E = G.edges();
    std::vector<Element> diff(E.size());
    for (std::size_t e = 0; e < E.size(); ++e) diff[e] = F.sub(A[E[e].first], B[E[e].second]);

    std::vector<char> live(E.size(), 1);
    std::size_t rest = E.size();
    const Rational g = Q(E.size()), a = Q(A.size());
    const Rational X = Q(setcore::partial_pairwise_set(G, Op::Difference).size());
    std::vector<Edge> taken;
    std::vector<Element> centers;
    Rational slack;
    bool first = true;
    while (Q(rest) > eps * g) {
        std::size_t best = 0, best_cnt = 0;
        for (std::size_t i = 0; i < A.size(); ++i) {
            std::size_t cnt = 0;
            for (std::size_t e = 0; e < E.size(); ++e)
                if (live[e] && B.contains(F.sub(A[i], diff[e]))) ++cnt;
            if (cnt > best_cnt) best = i, best_cnt = cnt;
        }
        const Rational step = Q(best_cnt) * X * a - Q(rest) * Q(rest);
        if (first || step < slack) slack = step;
        first = false;
        centers.push_back(A[best]);
        for (std::size_t e = 0; e < E.size(); ++e)
            if (live[e] && B.contains(F.sub(A[best], diff[e]))) live[e] = 0, --rest, taken.push_back(E[e]);
    }
    std::sort(taken.begin(), taken.end());
    PairGraph Gp(A, B, taken);
    Variation2 v{Gp, Cover{centers, setcore::partial_pairwise_set(Gp, Op::Difference), setcore::negated(B), "-B", {}}};

    const Rational m = Q(centers.size());
    auto& c = v.cover.cert;
    c.lemma = "cover_variation2";
    c.instance = graph_instance(G, &eps);
    c.set("|A|", a);
    c.set("|B|", Q(B.size()));
    c.set("|G|", g);
    c.set("|A-^GB|", X);
    c.set("eps", eps);
    c.set("centers", m);
    c.set("|G'|", Q(Gp.size()));
    c.require("(1-eps)|G|<=|G'|", (1 - eps) * g, Q(Gp.size()));
    c.require("inclusion", Rational(1), Rational(verify_cover(v.cover) ? 1 : 0));
    c.require("greedyStep", Rational(0), slack);
    // 1/|G_*| grows by at least 1/(|A-^GB||A|) per step.
    c.require("(centers-1)eps|G|<=(1-eps)|A-^GB||A|", (m - 1) * eps * g, (1 - eps) * X * a);
    return v;
}

}  // namespace growthlab::calculus
