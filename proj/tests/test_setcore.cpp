#include <random>
#include <set>

#include "doctest.h"
#include "growthlab/error.hpp"
#include "growthlab/setcore.hpp"

using namespace growthlab;
using namespace growthlab::setcore;

namespace {

std::set<Element> brute_set(const FiniteSet& A, const FiniteSet& B, Op op) {
    std::set<Element> out;
    const Field& F = A.field();
    for (const auto& a : A.elements())
        for (const auto& b : B.elements()) {
            if (op == Op::Ratio && F.is_zero(b)) continue;
            out.insert(apply(F, op, a, b));
        }
    return out;
}

std::uint64_t brute_energy(const FiniteSet& A, const FiniteSet& B, Op op) {
    const Field& F = A.field();
    std::uint64_t e = 0;
    for (const auto& a : A)
        for (const auto& b : B)
            for (const auto& c : A)
                for (const auto& d : B) e += apply(F, op, a, b) == apply(F, op, c, d);
    return e;
}

// Literal 2k-fold enumeration of the k-fold energy.
KfoldEnergy brute_kfold(const FiniteSet& A, unsigned k) {
    const Field& F = A.field();
    const std::size_t n = A.size();
    std::vector<std::size_t> idx(2 * k, 0);
    KfoldEnergy out;
    while (true) {
        Element lhs = F.zero(), rhs = F.zero();
        for (unsigned i = 0; i < k; ++i) lhs = F.add(lhs, A[idx[i]]);
        for (unsigned i = k; i < 2 * k; ++i) rhs = F.add(rhs, A[idx[i]]);
        if (lhs == rhs) {
            ++out.total;
            unsigned repeated = 0;
            for (unsigned i = 0; i < 2 * k; ++i) {
                unsigned c = 0;
                for (unsigned j = 0; j < 2 * k; ++j) c += idx[i] == idx[j];
                repeated += c >= 2;
            }
            if (repeated < 2 * k - 1) ++out.nontrivial;
        }
        std::size_t pos = 0;
        while (pos < 2 * k && ++idx[pos] == n) idx[pos++] = 0;
        if (pos == 2 * k) break;
    }
    return out;
}

FiniteSet random_set(const Field& F, std::mt19937_64& rng, std::size_t n, long long range) {
    std::vector<Element> v;
    for (std::size_t i = 0; i < n; ++i) v.push_back(F.from_int(static_cast<long long>(rng() % range) - range / 2));
    return FiniteSet(F, v);
}

}  // namespace

TEST_CASE("finite sets are sorted and duplicate free") {
    Field F = Field::prime(7);
    auto A = FiniteSet::from_ints(F, {3, 10, 1, 3, -4});
    CHECK(A.size() == 2);  // 3, 10=3, 1, 3, -4=3
    CHECK(A.format() == std::vector<std::string>{"1", "3"});
    auto S = parse_set_literal("Fp(101){1, 2, 3, 2}");
    CHECK(S.size() == 3);
    CHECK(S.literal() == "Fp(101){1,2,3}");
    auto R = parse_set_literal("Q{1/2, 2/4, -3}");
    CHECK(R.size() == 2);
}

TEST_CASE("pairwise sets from worked examples") {
    Field F5 = Field::prime(5);
    auto A = FiniteSet::from_ints(F5, {0, 1, 2});
    CHECK(pairwise_set(A, A, Op::Product) == FiniteSet::from_ints(F5, {0, 1, 2, 4}));

    Field Q = Field::rationals();
    auto B = FiniteSet::from_ints(Q, {1, 2, 4});
    auto mu = multiplicity(B, B, Op::Product);
    CHECK(mu.support_size() == 5);
    CHECK(mu(Q.from_int(1)) == 1);
    CHECK(mu(Q.from_int(2)) == 2);
    CHECK(mu(Q.from_int(4)) == 3);
    CHECK(mu(Q.from_int(8)) == 2);
    CHECK(mu(Q.from_int(16)) == 1);
    CHECK(energy(B, B, EnergyKind::Multiplicative) == 19);
    CHECK(energy(FiniteSet::from_ints(Q, {0, 1}), FiniteSet::from_ints(Q, {0, 1}), EnergyKind::Additive) == 6);

    auto R = ratio_of_differences(FiniteSet::from_ints(Q, {0, 1, 3}));
    CHECK(R.size() == 14);
    CHECK(xi_energy(FiniteSet::from_ints(Q, {0, 1}), Q.from_int(2)) == 4);
    CHECK(xi_energy(FiniteSet::from_ints(Q, {0, 1, 5}), Q.zero()) == 27);
}

TEST_CASE("k-fold energies from worked examples") {
    Field F2t = Field::function(2);
    FiniteSet S(F2t, {F2t.one(), F2t.t(), F2t.mul(F2t.t(), F2t.t())});
    auto e = kfold_energy(S, 2);
    CHECK(e.total == 21);
    CHECK(e.nontrivial == 0);
    Field Q = Field::rationals();
    auto e2 = kfold_energy(FiniteSet::from_ints(Q, {0, 1, 3}), 2);
    CHECK(e2.total == 15);
    CHECK(e2.nontrivial == 0);
    auto e3 = kfold_energy(FiniteSet::from_ints(Q, {0, 1, 2}), 2);
    CHECK(e3.nontrivial == 4);  // orderings of 0+2 = 1+1
}

TEST_CASE("error conditions") {
    Field Q = Field::rationals();
    FiniteSet empty(Q);
    auto A = FiniteSet::from_ints(Q, {0, 1});
    auto code_of = [](auto&& f) {
        try {
            f();
        } catch (const Error& e) {
            return e.code();
        }
        return ErrorCode::InvalidArgument;
    };
    CHECK(code_of([&] { pairwise_set(empty, A, Op::Sum); }) == ErrorCode::EmptyInput);
    CHECK(code_of([&] { translate_dilate(A, Q.zero(), Q.one()); }) == ErrorCode::ZeroDilation);
    CHECK(code_of([&] { partial_pairwise_set(PairGraph::complete(A, A), Op::Ratio); }) == ErrorCode::ZeroDivisorEdge);
    CHECK(code_of([&] { ratio_of_differences(FiniteSet::from_ints(Q, {3})); }) == ErrorCode::TooSmall);
    CHECK(code_of([&] { kfold_energy(FiniteSet::from_ints(Q, {0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15, 16, 17, 18, 19, 20, 21}), 3); }) ==
          ErrorCode::BudgetExceeded);
    CHECK(code_of([&] { pairwise_set(A, FiniteSet::from_ints(Field::prime(5), {1}), Op::Sum); }) == ErrorCode::FieldMismatch);
    // Ratio sets skip zero in the right-hand set.
    CHECK(pairwise_set(A, A, Op::Ratio) == FiniteSet::from_ints(Q, {0, 1}));
}

TEST_CASE("pairwise sets and energies agree with brute force") {
    std::mt19937_64 rng(7);
    std::vector<Field> fields_under_test{Field::prime(101), Field::prime(65537), Field::rationals(), Field::extension(2, 3),
                                         Field::function(3)};
    for (const auto& F : fields_under_test) {
        for (int trial = 0; trial < 15; ++trial) {
            FiniteSet A = random_set(F, rng, 1 + rng() % 7, 40);
            FiniteSet B = random_set(F, rng, 1 + rng() % 7, 40);
            if (F.kind() == FieldKind::Function) {
                std::vector<Element> v;
                for (int i = 0; i < 5; ++i) v.push_back(F.add(F.pow(F.t(), rng() % 4), F.from_int(rng() % 3)));
                A = FiniteSet(F, v);
            }
            for (Op op : {Op::Sum, Op::Difference, Op::Product, Op::Ratio}) {
                if (op == Op::Ratio && B.size() == 1 && F.is_zero(B[0])) continue;
                auto S = pairwise_set(A, B, op);
                auto expect = brute_set(A, B, op);
                CHECK(std::vector<Element>(expect.begin(), expect.end()) == S.elements());
                auto mu = multiplicity(A, B, op);
                CHECK(mu.support_size() == S.size());
                if (op != Op::Ratio) {
                    CHECK(mu.total() == A.size() * B.size());
                    CHECK(mu.sum_of_squares() == brute_energy(A, B, op));
                }
            }
            const auto e = energy(A, B, EnergyKind::Additive);
            CHECK(e == energy_by_translates(A, B));
            CHECK(e == energy_by_intersections(A, B));
            // Cauchy-Schwarz: E |A+B| >= |A|^2 |B|^2.
            const auto s = pairwise_set(A, B, Op::Sum).size();
            CHECK(e * s >= A.size() * A.size() * B.size() * B.size());
            CHECK(s >= std::max(A.size(), B.size()));
            // Translation invariance.
            auto shiftA = shifted(A, F.from_int(5));
            CHECK(pairwise_set(shiftA, B, Op::Sum).size() == s);
        }
    }
}

TEST_CASE("partial sets and graph energies") {
    std::mt19937_64 rng(11);
    Field F = Field::prime(101);
    for (int trial = 0; trial < 40; ++trial) {
        FiniteSet A = random_set(F, rng, 2 + rng() % 6, 100);
        FiniteSet B = random_set(F, rng, 2 + rng() % 6, 100).without(F.zero());
        if (B.empty()) continue;
        std::vector<Edge> edges;
        for (std::uint32_t i = 0; i < A.size(); ++i)
            for (std::uint32_t j = 0; j < B.size(); ++j)
                if (rng() % 2) edges.emplace_back(i, j);
        PairGraph G(A, B, edges);
        for (Op op : {Op::Sum, Op::Difference, Op::Product, Op::Ratio}) {
            auto part = partial_pairwise_set(G, op);
            CHECK(part.is_subset_of(pairwise_set(A, B, op)));
            // Graph energy by quadruple enumeration.
            std::uint64_t e = 0;
            for (auto [i, j] : G.edges())
                for (auto [k, l] : G.edges()) e += apply(F, op, A[i], B[j]) == apply(F, op, A[k], B[l]);
            CHECK(graph_energy(G, op) == e);
            if (G.size()) CHECK(e * part.size() >= G.size() * G.size());
        }
    }
}

TEST_CASE("k-fold energy agrees with literal enumeration") {
    std::mt19937_64 rng(3);
    for (const auto& F : {Field::prime(13), Field::prime(3), Field::rationals(), Field::extension(2, 2)}) {
        for (int trial = 0; trial < 8; ++trial) {
            FiniteSet A = random_set(F, rng, 1 + rng() % 5, 12);
            for (unsigned k = 1; k <= 3; ++k) {
                auto fast = kfold_energy(A, k);
                auto slow = brute_kfold(A, k);
                CHECK(fast.total == slow.total);
                CHECK(fast.nontrivial == slow.nontrivial);
            }
            CHECK(kfold_energy(A, 2).total == energy(A, A, EnergyKind::Additive));
        }
    }
}

TEST_CASE("ratio of differences agrees with brute force") {
    std::mt19937_64 rng(5);
    Field F = Field::prime(31);
    for (int trial = 0; trial < 20; ++trial) {
        FiniteSet A = random_set(F, rng, 2 + rng() % 5, 31);
        if (A.size() < 2) continue;
        std::set<Element> expect;
        for (const auto& a : A)
            for (const auto& b : A)
                for (const auto& c : A)
                    for (const auto& d : A)
                        if (!(a == b) && !(c == d)) expect.insert(F.div(F.sub(a, b), F.sub(c, d)));
        CHECK(ratio_of_differences(A).elements() == std::vector<Element>(expect.begin(), expect.end()));
    }
}
