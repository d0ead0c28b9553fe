#include <random>
#include <set>

#include "doctest.h"
#include "growthlab/calculus.hpp"
#include "growthlab/error.hpp"

using namespace growthlab;
using namespace growthlab::calculus;
using setcore::Edge;
using setcore::Op;

namespace {

std::size_t brute_size(const FiniteSet& A, const FiniteSet& B, bool sum) {
    std::set<Element> out;
    for (const auto& a : A)
        for (const auto& b : B) out.insert(sum ? A.field().add(a, b) : A.field().sub(a, b));
    return out.size();
}

// Minimal |A'+B|/|A'| by literal enumeration, with the same tie-breaks.
std::pair<std::vector<std::size_t>, Rational> brute_petridis(const FiniteSet& A, const FiniteSet& B) {
    std::vector<std::size_t> best;
    Rational K;
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << A.size()); ++mask) {
        std::vector<Element> v;
        std::vector<std::size_t> idx;
        for (std::size_t i = 0; i < A.size(); ++i)
            if (mask >> i & 1) v.push_back(A[i]), idx.push_back(i);
        const FiniteSet S(A.field(), v);
        Rational r(static_cast<long>(brute_size(S, B, true)), static_cast<long>(S.size()));
        r.canonicalize();
        if (best.empty() || r < K || (r == K && (idx.size() > best.size() || (idx.size() == best.size() && idx < best))))
            best = idx, K = r;
    }
    return {best, K};
}

FiniteSet random_set(const Field& F, std::mt19937_64& rng, std::size_t max_size, long range) {
    std::uniform_int_distribution<long> val(-range, range);
    std::uniform_int_distribution<std::size_t> len(1, max_size);
    std::vector<Element> v;
    for (std::size_t i = 0, n = len(rng); i < n; ++i) v.push_back(F.from_int(val(rng)));
    return FiniteSet(F, v);
}

PairGraph random_graph(const FiniteSet& A, const FiniteSet& B, std::mt19937_64& rng, double density) {
    std::bernoulli_distribution keep(density);
    std::vector<Edge> e;
    for (std::uint32_t i = 0; i < A.size(); ++i)
        for (std::uint32_t j = 0; j < B.size(); ++j)
            if (keep(rng)) e.emplace_back(i, j);
    if (e.empty()) e.emplace_back(0, 0);
    return PairGraph(A, B, e);
}

FiniteSet ints(const Field& F, std::vector<long long> v) { return FiniteSet::from_ints(F, v); }

}  // namespace

TEST_CASE("ruzsa triangle examples and random triples") {
    const Field Q = Field::rationals();
    auto c = ruzsa_triangle_check(ints(Q, {0, 1}), ints(Q, {0, 2}), ints(Q, {0, 1}));
    CHECK(c.bound("|A-B||C|<=|A-C||B-C|").lhs == 8);
    CHECK(c.bound("|A-B||C|<=|A-C||B-C|").rhs == 12);
    CHECK(c.holds());
    auto one = ruzsa_triangle_check(ints(Q, {3}), ints(Q, {3}), ints(Q, {3}));
    CHECK(one.bound("|A-B||C|<=|A-C||B-C|").lhs == 1);
    CHECK(one.bound("|A-B||C|<=|A-C||B-C|").rhs == 1);
    auto ap = ruzsa_triangle_check(ints(Q, {0, 1, 2, 3, 4}), ints(Q, {0, 1, 2, 3, 4}), ints(Q, {0, 1, 2, 3, 4}));
    CHECK(ap.bound("|A-B||C|<=|A-C||B-C|").lhs == 45);
    CHECK(ap.bound("|A-B||C|<=|A-C||B-C|").rhs == 81);

    std::mt19937_64 rng(7);
    int violations = 0;
    for (const Field& F : {Field::prime(7), Field::prime(101), Field::rationals()})
        for (int t = 0; t < 1000; ++t) {
            auto A = random_set(F, rng, 8, 60), B = random_set(F, rng, 8, 60), C = random_set(F, rng, 8, 60);
            auto cert = ruzsa_triangle_check(A, B, C);
            violations += !cert.holds();
            if (t % 50 == 0) CHECK(cert.get("|A-B|") == static_cast<long>(brute_size(A, B, false)));
        }
    CHECK(violations == 0);
}

TEST_CASE("petridis subset matches exhaustive oracle") {
    const Field Q = Field::rationals();
    auto r = petridis_min_ratio_subset(ints(Q, {0, 1, 2, 10}), ints(Q, {0, 1}));
    CHECK(r.subset == ints(Q, {0, 1, 2}));
    CHECK(r.K == Rational(4, 3));
    auto z = petridis_min_ratio_subset(ints(Q, {0}), ints(Q, {0}));
    CHECK(z.K == 1);
    auto ap = petridis_min_ratio_subset(ints(Q, {0, 1, 2, 3, 4}), ints(Q, {0, 1, 2, 3, 4}));
    CHECK(ap.subset.size() == 5);
    CHECK(ap.K == Rational(9, 5));
    CHECK(ap.cert.holds());

    std::vector<long long> big(21);
    for (int i = 0; i < 21; ++i) big[i] = i * i;
    CHECK_THROWS_AS(petridis_min_ratio_subset(ints(Q, big), ints(Q, {0})), Error);

    std::mt19937_64 rng(11);
    const Field F = Field::prime(101);
    for (int t = 0; t < 60; ++t) {
        auto A = random_set(F, rng, 9, 50), B = random_set(F, rng, 4, 50);
        auto got = petridis_min_ratio_subset(A, B);
        auto [idx, K] = brute_petridis(A, B);
        CHECK(got.K == K);
        REQUIRE(got.subset.size() == idx.size());
        for (std::size_t i = 0; i < idx.size(); ++i) CHECK(got.subset[i] == A[idx[i]]);
        for (int s = 0; s < 200 / 60 + 1; ++s) {
            auto C = random_set(F, rng, 4, 50);
            CHECK(petridis_extension_check(got.subset, B, C, got.K).holds());
        }
    }
}

TEST_CASE("petridis extension on many sets C") {
    const Field F = Field::prime(101);
    std::mt19937_64 rng(5);
    auto A = random_set(F, rng, 10, 50), B = random_set(F, rng, 5, 50);
    auto r = petridis_min_ratio_subset(A, B);
    int bad = 0;
    for (int t = 0; t < 200; ++t) bad += !petridis_extension_check(r.subset, B, random_set(F, rng, 4, 50), r.K).holds();
    CHECK(bad == 0);
}

TEST_CASE("plunnecke and katz-shen") {
    const Field Q = Field::rationals();
    auto p = plunnecke_check(ints(Q, {0, 1}), ints(Q, {0, 1}), 2);
    CHECK(p.cert.get("|kB|") == 3);
    CHECK(p.cert.bound("|kB||A|^(k-1)<=|A+B|^k").rhs / 2 == Rational(9, 2));
    CHECK(p.cert.holds());
    auto p3 = plunnecke_check(ints(Q, {0, 1, 3}), ints(Q, {0, 1, 3}), 2);
    CHECK(p3.cert.get("|kB|") == 6);
    CHECK(p3.cert.bound("|kB||A|^(k-1)<=|A+B|^k").lhs == 18);
    CHECK(p3.cert.bound("|kB||A|^(k-1)<=|A+B|^k").rhs == 36);
    CHECK_THROWS_AS(plunnecke_check(ints(Q, {0}), ints(Q, {0}), 5), Error);

    auto ks = katz_shen_subset(ints(Q, {0, 1}), ints(Q, {0, 1}), 1);
    CHECK(ks.pieces.size() == 1);
    auto ks2 = katz_shen_subset(ints(Q, {0, 1, 2, 3}), ints(Q, {0, 1}), 2);
    CHECK(ks2.subset.size() >= 2);
    CHECK(ks2.cert.holds());

    std::mt19937_64 rng(3);
    const Field F = Field::prime(101);
    for (int t = 0; t < 40; ++t) {
        auto A = random_set(F, rng, 10, 50), B = random_set(F, rng, 4, 50);
        const unsigned k = 1 + t % 4;
        CHECK(plunnecke_check(A, B, k).cert.holds());
        auto r = katz_shen_subset(A, B, k);
        CHECK(r.cert.holds());
        FiniteSet seen(F);
        for (const auto& piece : r.pieces) {
            CHECK(seen.intersected(piece).empty());
            seen = seen.united(piece);
        }
        CHECK(seen == r.subset);
        CHECK(2 * r.subset.size() >= A.size());
    }
}

TEST_CASE("joint degree") {
    const Field Q = Field::rationals();
    auto A = ints(Q, {0, 1}), B = ints(Q, {0, 1});
    PairGraph G(A, B, {{0, 0}, {1, 0}, {1, 1}});
    CHECK(joint_degree(G, Q.from_int(0), Q.from_int(1)) == 1);
    CHECK(joint_degree(PairGraph::complete(A, B), Q.from_int(0), Q.from_int(1)) == 2);
    CHECK(joint_degree(PairGraph(A, B, {}), Q.from_int(0), Q.from_int(1)) == 0);
    try {
        joint_degree(G, Q.from_int(5), Q.from_int(1));
        FAIL("expected NotInLeftSet");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NotInLeftSet);
    }
}

TEST_CASE("dense BSG") {
    const Field Q = Field::rationals();
    const Rational eps(1, 16);
    auto A = ints(Q, {0, 1, 2, 3}), B = ints(Q, {0, 1, 2, 3});
    auto full = bsg_dense(PairGraph::complete(A, B), eps);
    CHECK(full.subset == A);
    CHECK(full.min_joint_degree == 4);
    CHECK(full.cert.holds());

    std::vector<Edge> e;
    for (std::uint32_t i = 0; i < 4; ++i)
        for (std::uint32_t j = 0; j < 4; ++j)
            if (i != 2 || j != 1) e.emplace_back(i, j);
    auto missing = bsg_dense(PairGraph(A, B, e), eps);
    CHECK(missing.subset.size() >= 3);
    CHECK(missing.cert.holds());

    e.pop_back();
    try {
        bsg_dense(PairGraph(A, B, e), eps);
        FAIL("expected DensityTooLow");
    } catch (const Error& err) {
        CHECK(err.code() == ErrorCode::DensityTooLow);
    }

    std::mt19937_64 rng(9);
    const Field F = Field::prime(101);
    for (int t = 0; t < 40; ++t) {
        auto X = random_set(F, rng, 12, 50), Y = random_set(F, rng, 12, 50);
        auto G = random_graph(X, Y, rng, 0.97);
        if (G.size() * 16 < 15 * X.size() * Y.size()) continue;
        auto r = bsg_dense(G, eps);
        CHECK(r.cert.holds());
        // Recompute from the raw sets.
        std::uint64_t K = ~std::uint64_t{0};
        for (const auto& a1 : r.subset)
            for (const auto& a2 : r.subset) K = std::min(K, joint_degree(G, a1, a2));
        CHECK(K == r.min_joint_degree);
        CHECK(r.cert.get("|A'-A'|") == static_cast<long>(brute_size(r.subset, r.subset, false)));
        const Rational lhs = r.cert.get("|A'-A'|") * Rational(static_cast<long>(K));
        CHECK(lhs <= r.cert.get("|A-^GB|") * r.cert.get("|A-^GB|"));
    }
}

TEST_CASE("sparse BSG") {
    const Field Q = Field::rationals();
    const Rational eps(1, 16);
    auto A = ints(Q, {0, 1, 2, 3}), B = ints(Q, {0, 1, 2, 3});
    auto full = bsg_sparse(PairGraph::complete(A, B), eps);
    CHECK(full.first == A);
    CHECK(full.cert.holds());

    auto match = bsg_sparse(PairGraph(A, B, {{0, 0}, {1, 1}, {2, 2}, {3, 3}}), eps);
    CHECK(match.cert.holds());
    CHECK(match.first.size() == 1);

    auto single = bsg_sparse(PairGraph(A, B, {{2, 1}}), eps);
    CHECK(single.subset.size() == 1);
    CHECK(single.cert.get("|A''-A''|") == 1);

    std::mt19937_64 rng(21);
    const Field F = Field::prime(101);
    for (int t = 0; t < 40; ++t) {
        auto X = random_set(F, rng, 12, 50), Y = random_set(F, rng, 12, 50);
        auto r = bsg_sparse(random_graph(X, Y, rng, 0.2 + 0.02 * t), eps);
        CHECK(r.cert.holds());
        CHECK(r.subset.is_subset_of(r.first));
        CHECK(r.cert.bound("|A''-A''||G|^5<=C|A|^4|B|^3|A-^GB|^4").monitor);
    }
}

TEST_CASE("sum-product BSG") {
    const Field Q = Field::rationals();
    const Rational eps(1, 16);
    auto geo = ints(Q, {1, 2, 4});
    auto r = bsg_sumproduct(PairGraph::complete(geo, geo), eps);
    CHECK(r.cert.holds());
    CHECK(r.cert.get("|A'/A'|") == 5);
    auto ap = ints(Q, {1, 2, 3});
    auto s = bsg_sumproduct(PairGraph::complete(ap, ap), eps);
    CHECK(s.cert.holds());
    CHECK(s.cert.get("|A'-A'|") == 5);
    auto one = bsg_sumproduct(PairGraph::complete(ints(Q, {3}), ints(Q, {5})), eps);
    CHECK(one.cert.get("|A'-A'|") == 1);
    CHECK(one.cert.get("|A'/A'|") == 1);
    CHECK(one.cert.get("E_x(A')") == 1);
    CHECK(one.cert.get("|A-^GB|") == 1);
    CHECK(one.cert.get("|A/^GB|") == 1);
    try {
        bsg_sumproduct(PairGraph::complete(geo, ints(Q, {0, 1})), eps);
        FAIL("expected ZeroInRight");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::ZeroInRight);
    }

    std::mt19937_64 rng(33);
    const Field F = Field::prime(101);
    for (int t = 0; t < 30; ++t) {
        auto X = random_set(F, rng, 10, 50).without(F.zero()), Y = random_set(F, rng, 10, 50).without(F.zero());
        if (X.empty() || Y.empty()) continue;
        auto c = bsg_sumproduct(random_graph(X, Y, rng, 0.3 + 0.02 * t), eps);
        CHECK(c.cert.holds());
    }
}

TEST_CASE("ruzsa and shen covers") {
    const Field Q = Field::rationals();
    auto r = cover_ruzsa(ints(Q, {0, 1, 2, 3}), ints(Q, {0, 1}));
    CHECK(r.centers.size() == 2);
    CHECK(r.cert.bound("centers<=ceil(|A-B|/|B|)").rhs == 3);
    CHECK(verify_cover(r));
    CHECK(cover_ruzsa(ints(Q, {1, 2}), ints(Q, {0, 1, 2, 3})).centers.size() == 1);
    CHECK(cover_ruzsa(ints(Q, {7}), ints(Q, {0, 1})).centers.size() == 1);

    auto same = cover_shen(ints(Q, {0, 3, 4}), ints(Q, {0, 3, 4}), Rational(1, 4));
    CHECK(same.centers.size() == 1);
    auto eight = cover_shen(ints(Q, {0, 1, 2, 3, 4, 5, 6, 7}), ints(Q, {0, 1}), Rational(1, 4));
    CHECK(eight.centers.size() <= 4);
    CHECK(eight.covered.size() >= 6);
    CHECK(eight.cert.holds());
    CHECK(cover_shen(ints(Q, {0, 5}), ints(Q, {0, 1}), Rational(99, 100)).centers.size() <= 1);

    std::mt19937_64 rng(41);
    const Field F = Field::prime(101);
    for (int t = 0; t < 50; ++t) {
        auto A = random_set(F, rng, 14, 50), B = random_set(F, rng, 6, 50);
        auto cr = cover_ruzsa(A, B);
        CHECK(cr.cert.holds());
        CHECK(verify_cover(cr));
        auto cs = cover_shen(A, B, Rational(1, 2 + t % 7));
        CHECK(cs.cert.holds());
        CHECK(verify_cover(cs));
        CHECK(cs.covered.is_subset_of(A));
    }
}

TEST_CASE("covering variations") {
    const Field Q = Field::rationals();
    const Rational eps(1, 16);
    auto A = ints(Q, {0, 1, 2});
    auto v = cover_variation1(PairGraph::complete(A, A), eps);
    CHECK(v.plus.centers.size() == 1);
    CHECK(v.minus.centers.size() == 1);

    auto six = cover_variation1(PairGraph::complete(ints(Q, {0, 1, 2, 3, 4, 5}), ints(Q, {0, 1, 2})), eps);
    CHECK(six.plus.cert.holds());
    CHECK(six.minus.cert.holds());
    CHECK(six.plus.covered.size() >= 3);
    CHECK(verify_cover(six.plus));
    CHECK(verify_cover(six.minus));
    CHECK_THROWS_AS(cover_variation1(PairGraph(A, A, {{0, 0}}), eps), Error);

    auto z = cover_variation2(PairGraph::complete(ints(Q, {0}), ints(Q, {0})), eps);
    CHECK(z.cover.centers.size() == 1);
    auto two = cover_variation2(PairGraph::complete(ints(Q, {0, 1}), ints(Q, {0, 1})), Rational(1, 2));
    CHECK(two.cover.centers.size() <= 2);
    CHECK(two.covered_graph.size() >= 2);
    CHECK(two.cover.cert.holds());
    auto single = cover_variation2(PairGraph(A, A, {{1, 2}}), eps);
    CHECK(single.cover.centers.size() == 1);
    CHECK(single.covered_graph.size() == 1);

    std::mt19937_64 rng(77);
    const Field F = Field::prime(101);
    for (int t = 0; t < 40; ++t) {
        auto X = random_set(F, rng, 12, 50), Y = random_set(F, rng, 8, 50);
        auto G = random_graph(X, Y, rng, 0.99);
        if (G.size() * 16 >= 15 * X.size() * Y.size()) {
            auto w = cover_variation1(G, eps);
            CHECK(w.plus.cert.holds());
            CHECK(w.minus.cert.holds());
        }
        auto w2 = cover_variation2(random_graph(X, Y, rng, 0.4), Rational(1, 2 + t % 5));
        CHECK(w2.cover.cert.holds());
        // A -^{G'} B lies in the union of a* - B, checked from the raw edges.
        for (auto [i, j] : w2.covered_graph.edges()) {
            const Element d = F.sub(X[i], Y[j]);
            bool hit = false;
            for (const auto& c : w2.cover.centers) hit = hit || Y.contains(F.sub(c, d));
            CHECK(hit);
        }
    }
}

TEST_CASE("certificates round-trip through JSON") {
    const Field F = Field::prime(101);
    auto A = FiniteSet::from_ints(F, {1, 2, 3, 5, 8}), B = FiniteSet::from_ints(F, {1, 2, 4});
    auto c = bsg_dense(PairGraph::complete(A, B), Rational(1, 16)).cert;
    auto back = Certificate::from_json(c.to_json());
    CHECK(back.to_json() == c.to_json());
    CHECK(back.holds());
}
