// Acceptance criteria 1-9. One PASS/FAIL line per criterion; exit status 1 if any fails.
#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <string>

#include "growthlab/calculus.hpp"
#include "growthlab/error.hpp"
#include "growthlab/expander.hpp"
#include "growthlab/ffield.hpp"
#include "growthlab/harness.hpp"
#include "growthlab/incidence.hpp"
#include "growthlab/io.hpp"
#include "growthlab/projective.hpp"

using namespace growthlab;
using harness::SplitMix64;
using setcore::FiniteSet;
using setcore::Op;
using setcore::PairGraph;

namespace {

// Collects failures for one criterion; the first few are printed.
struct Tally {
    std::uint64_t checks = 0, failures = 0;
    std::vector<std::string> notes;

    void expect(bool ok, const std::string& what) {
        ++checks;
        if (ok) return;
        ++failures;
        if (notes.size() < 5) notes.push_back(what);
    }
};

Rational Q(std::uint64_t v) { return Rational(BigInt(static_cast<unsigned long>(v))); }

FiniteSet random_set(const Field& F, SplitMix64& rng, std::size_t n, bool nonzero = false) {
    const long long span = F.is_finite() ? static_cast<long long>(F.order()) - 1 : 30;
    const long long lo = F.is_finite() ? (nonzero ? 1 : 0) : -span;
    n = std::min<std::size_t>(n, static_cast<std::size_t>(span - lo + 1) - (!F.is_finite() && nonzero ? 1 : 0));
    std::set<long long> picked;
    while (picked.size() < n) {
        const long long v = rng.between(lo, span);
        if (!(nonzero && v == 0)) picked.insert(v);
    }
    return FiniteSet::from_ints(F, std::vector<long long>(picked.begin(), picked.end()));
}

PairGraph random_graph(const FiniteSet& A, const FiniteSet& B, SplitMix64& rng, std::uint64_t keep, std::uint64_t den) {
    std::vector<setcore::Edge> edges;
    for (std::uint32_t i = 0; i < A.size(); ++i)
        for (std::uint32_t j = 0; j < B.size(); ++j)
            if (rng.below(den) < keep) edges.emplace_back(i, j);
    if (edges.empty()) edges.emplace_back(0, 0);
    return PairGraph(A, B, edges);
}

// Complete graph minus floor(|A||B|/16) random edges.
PairGraph dense_graph(const FiniteSet& A, const FiniteSet& B, SplitMix64& rng) {
    std::vector<setcore::Edge> edges;
    for (std::uint32_t i = 0; i < A.size(); ++i)
        for (std::uint32_t j = 0; j < B.size(); ++j) edges.emplace_back(i, j);
    for (std::size_t drop = edges.size() / 16; drop > 0; --drop)
        edges.erase(edges.begin() + static_cast<long>(rng.below(edges.size())));
    return PairGraph(A, B, edges);
}

std::size_t size_of(const FiniteSet& A, const FiniteSet& B, Op op) { return setcore::pairwise_set(A, B, op).size(); }

// --- 1 -----------------------------------------------------------------------

std::string criterion1(Tally& t) {
    for (const Field& F : {Field::prime(7), Field::prime(101), Field::rationals()}) {
        SplitMix64 rng(1000 + F.characteristic());
        for (int trial = 0; trial < 1000; ++trial) {
            const FiniteSet A = random_set(F, rng, 1 + rng.below(12)), B = random_set(F, rng, 1 + rng.below(12));
            const PairGraph G = random_graph(A, B, rng, 1 + rng.below(4), 4);
            // Oracle: literal quadruple counts over the table of sums.
            std::vector<Element> sums;
            for (const auto& a : A)
                for (const auto& b : B) sums.push_back(F.add(a, b));
            std::uint64_t quads = 0;
            for (const auto& x : sums)
                for (const auto& y : sums) quads += x == y;
            std::vector<Element> gsums;
            for (auto [i, j] : G.edges()) gsums.push_back(F.add(A[i], B[j]));
            std::uint64_t gquads = 0;
            for (const auto& x : gsums)
                for (const auto& y : gsums) gquads += x == y;

            const std::string tag = F.name() + " trial " + std::to_string(trial);
            const auto E = setcore::energy(A, B, setcore::EnergyKind::Additive);
            t.expect(E == quads, "E_+(A,B) " + tag);
            t.expect(setcore::energy_by_translates(A, B) == quads, "sum_x |A n (x-B)|^2 " + tag);
            t.expect(setcore::energy_by_intersections(A, B) == quads, "sum |(B+a) n (B+a')| " + tag);
            t.expect(setcore::multiplicity(A, B, Op::Sum).sum_of_squares() == quads, "sum mu^2 " + tag);

            const auto mu = setcore::multiplicity(G, Op::Sum);
            std::uint64_t over_edges = 0;
            for (const auto& s : gsums) over_edges += mu(s);
            t.expect(setcore::graph_energy(G, Op::Sum) == gquads, "E_+(G) " + tag);
            t.expect(mu.sum_of_squares() == gquads, "sum mu_G^2 " + tag);
            t.expect(over_edges == gquads, "sum over G of mu_G(a+b) " + tag);
        }
    }
    return "3000 instances over F_7, F_101, Q";
}

// --- 2 -----------------------------------------------------------------------

std::string criterion2(Tally& t) {
    const Field F = Field::prime(101), Qf = Field::rationals();
    SplitMix64 rng(2);
    for (int trial = 0; trial < 1000; ++trial) {
        const Field& K = trial % 2 ? Qf : F;
        const std::string tag = K.name() + " trial " + std::to_string(trial);

        // Ruzsa triangle: |A||B-C| <= |A-B||A-C|.
        const FiniteSet A = random_set(K, rng, 1 + rng.below(10)), B = random_set(K, rng, 1 + rng.below(10)),
                        C = random_set(K, rng, 1 + rng.below(10));
        const Certificate ruzsa = calculus::ruzsa_triangle_check(A, B, C);
        t.expect(ruzsa.holds(), "Ruzsa certificate " + tag);
        t.expect(A.size() * size_of(B, C, Op::Difference) <= size_of(A, B, Op::Difference) * size_of(A, C, Op::Difference),
                 "Ruzsa recomputed " + tag);

        // Trivial incidence bounds with the count taken by a direct double loop.
        std::vector<incidence::AffinePoint> P;
        std::vector<incidence::AffineLine> L;
        const long long range = K.is_finite() ? 100 : 12;
        for (auto n = 1 + rng.below(40); P.size() < n;) {
            auto p = incidence::make_point(K, rng.between(0, range), rng.between(0, range));
            if (std::find(P.begin(), P.end(), p) == P.end()) P.push_back(p);
        }
        for (auto n = 1 + rng.below(40); L.size() < n;) {
            auto l = incidence::slope_line(K, K.from_int(rng.between(0, 4)), K.from_int(rng.between(0, range)));
            if (std::find(L.begin(), L.end(), l) == L.end()) L.push_back(l);
        }
        const incidence::IncidenceInstance inst(K, P, L);
        const Rational I = Q(incidence::incidence_count(K, P, L)), np = Q(P.size()), nl = Q(L.size());
        t.expect(incidence::incidence_invariants(inst).holds(), "incidence certificate " + tag);
        t.expect(I <= np || (I - np) * (I - np) <= np * nl * nl, "I <= |P| + |P|^1/2|L| " + tag);
        t.expect(I <= nl || (I - nl) * (I - nl) <= nl * np * np, "I <= |L| + |L|^1/2|P| " + tag);

        // |G|^2 <= |A +^G B| E_+(G) and E_+(G) <= E_+(A,B).
        const PairGraph G = random_graph(A, B, rng, 1 + rng.below(4), 4);
        const Certificate cs = [&] {
            Certificate c;
            const Rational g = Q(G.size()), S = Q(setcore::partial_pairwise_set(G, Op::Sum).size()),
                           EG = Q(setcore::graph_energy(G, Op::Sum));
            c.require("|G|^2<=|A+^GB|E_G", g * g, S * EG);
            c.require("E_G<=E", EG, Q(setcore::energy(A, B, setcore::EnergyKind::Additive)));
            return c;
        }();
        t.expect(cs.holds(), "energy Cauchy-Schwarz " + tag);

        // Plunnecke through the Petridis subset.
        const unsigned k = 1 + static_cast<unsigned>(rng.below(3));
        const FiniteSet X = random_set(K, rng, 1 + rng.below(7)), Y = random_set(K, rng, 1 + rng.below(7));
        const auto pl = calculus::plunnecke_check(X, Y, k);
        t.expect(pl.cert.holds(), "Plunnecke certificate " + tag);
        const Rational lhs = Q(setcore::iterated_sumset(Y, k).size()) * exact::pow(Q(X.size()), k - 1);
        t.expect(lhs <= exact::pow(Q(size_of(X, Y, Op::Sum)), k), "|kB||A|^(k-1) <= |A+B|^k " + tag);
        t.expect(pl.subset.is_subset_of(X), "Petridis subset inside A " + tag);
        const Rational sub = Q(pl.subset.size());
        FiniteSet kY = pl.subset;
        for (unsigned i = 0; i < k; ++i) kY = setcore::pairwise_set(kY, Y, Op::Sum);
        t.expect(Q(kY.size()) <= exact::pow(pl.K, k) * sub, "|A'+kB| <= K^k|A'| " + tag);

        // E_x(A)|AA| >= |A|^4 on A \ {0}.
        const FiniteSet M = random_set(K, rng, 1 + rng.below(12), true);
        const Rational Ex = Q(setcore::energy(M, M, setcore::EnergyKind::Multiplicative));
        t.expect(Ex * Q(size_of(M, M, Op::Product)) >= exact::pow(Q(M.size()), 4), "E_x|AA| >= |A|^4 " + tag);
    }
    return "1000 instances of each inequality over F_101 and Q";
}

// --- 3 -----------------------------------------------------------------------

std::string criterion3(Tally& t) {
    using Clock = std::chrono::steady_clock;
    const Field Qf = Field::rationals();
    double worst = 0;
    auto timed = [&](auto&& f) {
        const auto start = Clock::now();
        f();
        worst = std::max(worst, std::chrono::duration<double>(Clock::now() - start).count());
    };
    timed([&] {
        const auto g = incidence::extremal_grid(Qf, 8);
        t.expect(g.instance.points().size() == 16, "N=8 |P|=16");
        t.expect(g.instance.lines().size() == 8, "N=8 |L|=8");
        t.expect(g.instance.incidences() == 16, "N=8 I=16");
        t.expect(incidence::incidence_count(Qf, g.instance.points(), g.instance.lines()) == 16, "N=8 recount");
    });
    timed([&] {
        const auto g = incidence::extremal_grid(Qf, 27);
        t.expect(g.instance.incidences() == 81, "N=27 I=81");
        t.expect(incidence::incidence_count(Qf, g.instance.points(), g.instance.lines()) == 81, "N=27 recount");
    });
    for (long long n : {2, 3, 4})
        timed([&] {
            std::vector<long long> a(static_cast<std::size_t>(n));
            std::iota(a.begin(), a.end(), 1);
            const auto e = incidence::elekes_config(FiniteSet::from_ints(Qf, a));
            const auto I = incidence::incidence_count(Qf, e.instance.points(), e.instance.lines());
            t.expect(I >= static_cast<std::uint64_t>(n * n * n), "Elekes I >= |A|^3 for n=" + std::to_string(n));
            t.expect(I == e.instance.incidences(), "Elekes recount n=" + std::to_string(n));
        });
    timed([&] {
        const auto bg = incidence::bourgain_garaev_set(101, 10);
        const auto s = size_of(bg.set, bg.set, Op::Sum), p = size_of(bg.set, bg.set, Op::Product);
        t.expect(bg.set.size() == 10, "BG |A|=10");
        t.expect(std::max(s, p) <= 2 * 32 + 1, "BG max(|A+A|,|AA|) <= 65");
    });
    t.expect(worst < 1.0, "each construction under 1 s");
    char buf[64];
    std::snprintf(buf, sizeof buf, "slowest construction %.3f s", worst);
    return buf;
}

// --- 4 -----------------------------------------------------------------------

std::string criterion4(Tally& t) {
    const Rational eps(1, 16);
    SplitMix64 rng(4);
    for (int trial = 0; trial < 300; ++trial) {
        const Field F = trial % 2 ? Field::rationals() : Field::prime(101);
        const FiniteSet A = random_set(F, rng, 4 + rng.below(13)), B = random_set(F, rng, 4 + rng.below(13));
        const PairGraph G = dense_graph(A, B, rng);
        const std::string tag = F.name() + " trial " + std::to_string(trial);
        t.expect(16 * G.size() >= 15 * A.size() * B.size(), "density " + tag);

        const auto dense = calculus::bsg_dense(G, eps);
        t.expect(dense.cert.holds(), "bsg_dense certificate " + tag);
        t.expect(dense.subset.is_subset_of(A), "A' inside A " + tag);
        // deg a >= (1 - 1/4)|B| on A', and the joint degrees by direct count.
        std::uint64_t min_joint = B.size();
        for (const auto& a : dense.subset) {
            const auto i = static_cast<std::uint32_t>(A.index_of(a));
            t.expect(4 * G.right_of(i).size() >= 3 * B.size(), "degree on A' " + tag);
            for (const auto& a2 : dense.subset) {
                const auto& r1 = G.right_of(i);
                const auto& r2 = G.right_of(static_cast<std::uint32_t>(A.index_of(a2)));
                std::vector<std::uint32_t> common;
                std::set_intersection(r1.begin(), r1.end(), r2.begin(), r2.end(), std::back_inserter(common));
                min_joint = std::min<std::uint64_t>(min_joint, common.size());
            }
        }
        if (!dense.subset.empty()) t.expect(dense.min_joint_degree == min_joint, "min joint degree " + tag);

        const auto v1 = calculus::cover_variation1(G, eps);
        for (const auto* c : {&v1.plus, &v1.minus}) {
            t.expect(c->cert.holds(), "variation 1 certificate " + tag);
            t.expect(calculus::verify_cover(*c), "variation 1 cover " + tag);
            t.expect(c->covered.is_subset_of(A), "variation 1 covered inside A " + tag);
        }
        t.expect(v1.high_degree.is_subset_of(A), "high-degree part inside A " + tag);

        const auto v2 = calculus::cover_variation2(G, eps);
        t.expect(v2.cover.cert.holds(), "variation 2 certificate " + tag);
        t.expect(calculus::verify_cover(v2.cover), "variation 2 cover " + tag);
        bool inside = true;
        for (auto [i, j] : v2.covered_graph.edges())
            inside = inside && G.contains(static_cast<std::uint32_t>(A.index_of(v2.covered_graph.left()[i])),
                                          static_cast<std::uint32_t>(B.index_of(v2.covered_graph.right()[j])));
        t.expect(inside, "G' inside G " + tag);
    }
    return "300 dense graphs over F_101 and Q";
}

// --- 5 -----------------------------------------------------------------------

std::string criterion5(Tally& t) {
    SplitMix64 rng(5);
    std::uint64_t images = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const Field F = trial % 2 ? Field::rationals() : Field::prime(101);
        const FiniteSet A = random_set(F, rng, 2 + rng.below(11), true), B = random_set(F, rng, 2 + rng.below(11), true);
        const auto r = expander::psi_injection_engine(A, B);
        const std::string tag = F.name() + " trial " + std::to_string(trial);
        t.expect(r.collisions == 0, "psi collision " + tag);
        t.expect(r.cert.holds(), "psi certificate " + tag);
        images += r.S;
    }
    return "200 instances, " + std::to_string(images) + " psi images";
}

// --- 6 -----------------------------------------------------------------------

std::string criterion6(Tally& t) {
    using namespace projective;
    // Frames of PF^2(F_2): for every frame the orbit map g -> g(frame) is a
    // bijection from the full group onto the frames, so exactly one map per pair.
    const Field F2 = Field::prime(2);
    const auto group = all_maps(F2, 2);
    t.expect(group.size() == 168, "|PGL(3,2)| = 168");
    const auto pts = all_points(F2, 2);
    std::vector<std::vector<ProjPoint>> frames;
    for (const auto& a : pts)
        for (const auto& b : pts)
            for (const auto& c : pts)
                for (const auto& d : pts)
                    if (is_frame({a, b, c, d})) frames.push_back({a, b, c, d});
    t.expect(frames.size() == 168, "168 ordered frames");
    for (const auto& P : frames) {
        std::set<std::vector<ProjPoint>> images;
        for (const auto& g : group) images.insert({apply(g, P[0]), apply(g, P[1]), apply(g, P[2]), apply(g, P[3])});
        t.expect(images.size() == frames.size(), "orbit map bijective");
    }
    for (const auto& P : frames)
        for (const auto& R : frames) {
            const ProjMap m = frame_map(P, R);
            bool ok = true;
            for (int i = 0; i < 4; ++i) ok = ok && apply(m, P[i]) == R[i];
            t.expect(ok, "frame_map sends P to R");
        }

    // Cross ratio over PF^1(F_5): invariant under every map, and equal cross
    // ratios come from exactly one map.
    const Field F5 = Field::prime(5);
    const auto line = all_points(F5, 1);
    const auto pgl2 = all_maps(F5, 1);
    t.expect(pgl2.size() == 120, "|PGL(2,5)| = 120");
    std::vector<std::vector<ProjPoint>> quads;
    for (const auto& a : line)
        for (const auto& b : line)
            for (const auto& c : line)
                for (const auto& d : line)
                    if (std::set<ProjPoint>{a, b, c, d}.size() == 4) quads.push_back({a, b, c, d});
    for (const auto& q : quads) {
        const ProjPoint x = cross_ratio(q[0], q[1], q[2], q[3]);
        for (const auto& g : pgl2)
            t.expect(cross_ratio(apply(g, q[0]), apply(g, q[1]), apply(g, q[2]), apply(g, q[3])) == x, "invariance");
    }
    for (const auto& P : quads)
        for (const auto& R : quads) {
            const bool same = cross_ratio(P[0], P[1], P[2], P[3]) == cross_ratio(R[0], R[1], R[2], R[3]);
            t.expect(same == (apply(frame_map({P[0], P[1], P[2]}, {R[0], R[1], R[2]}), P[3]) == R[3]), "completeness");
        }

    // Planes lemma over F_7 on random instances.
    const Field F7 = Field::prime(7);
    const auto l7 = all_points(F7, 1);
    const auto g7 = all_maps(F7, 1);
    SplitMix64 rng(6);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<std::size_t> ia, ib;
        for (std::size_t i = 0; i < l7.size(); ++i) {
            if (rng.below(2)) ia.push_back(i);
            if (rng.below(2)) ib.push_back(i);
        }
        if (ia.size() < 4) ia = {0, 1, 2, 3};
        if (ib.size() < 4) ib = {4, 5, 6, 7};
        auto plane = [&](std::size_t a, std::size_t b) { return plane_of_pair(l7[a], l7[b]); };
        // Three pairs with distinct first and distinct second entries span independent planes.
        std::vector<ProjVector> three{plane(ia[0], ib[0]), plane(ia[1], ib[1]), plane(ia[2], ib[2])};
        t.expect(rank_of(three) == 3, "property 2");
        // Distinct pairs give distinct planes.
        std::set<ProjHyperplane> H;
        for (auto a : ia)
            for (auto b : ib) H.insert(plane(a, b));
        t.expect(H.size() == ia.size() * ib.size(), "property 3");
        // Four such pairs share no line.
        std::vector<ProjVector> four{plane(ia[0], ib[1]), plane(ia[1], ib[2]), plane(ia[2], ib[3]), plane(ia[3], ib[0])};
        t.expect(rank_of(four) > 2, "property 4");
        // psi(g) lies on plane(a,b) iff g(a) = b, so on at most min(|A|,|B|) of the planes.
        const auto& g = g7[rng.below(g7.size())];
        std::uint64_t direct = 0, on = 0;
        for (auto a : ia)
            for (auto b : ib) {
                direct += apply(g, l7[a]) == l7[b];
                on += plane(a, b).contains(psi_embed(g));
            }
        t.expect(on == direct, "property 5 count");
        t.expect(on <= std::min(ia.size(), ib.size()), "property 5 bound");
    }
    return "168 frames, " + std::to_string(quads.size()) + " quadruples, 200 plane instances";
}

// --- 7 -----------------------------------------------------------------------

std::string criterion7(Tally& t) {
    const Field F = Field::prime(101);
    std::vector<incidence::AffinePoint> P;
    for (const auto& x : F.elements())
        for (const auto& y : F.elements()) P.push_back({x, y});
    std::uint64_t succeeded = 0;
    for (long long s : {32, 33, 36, 40, 50}) {
        std::vector<incidence::AffineLine> L;
        for (long long m = 0; m < s; ++m)
            for (const auto& c : F.elements()) L.push_back(incidence::slope_line(F, F.from_int(m), c));
        const incidence::IncidenceInstance inst(F, P, L);
        const std::string tag = "slopes " + std::to_string(s);
        try {
            const auto cfg = incidence::find_sp_configuration(inst);
            t.expect(incidence::validate(cfg).empty(), "configuration invariants " + tag);
            const auto red = incidence::reduce_sp_configuration(cfg);
            const std::uint64_t K = cfg.K;
            t.expect(red.A.size() <= K, "|A| <= K " + tag);
            t.expect(red.B.size() <= K, "|B| <= K " + tag);
            t.expect(setcore::partial_pairwise_set(red.G, Op::Difference).size() <= K, "|A-^G B| <= K " + tag);
            t.expect(incidence::ratio_classes(red.G) <= K, "|A/^G B| <= K " + tag);
            t.expect(red.G.size() == cfg.points.size(), "|G| = |points| " + tag);
            t.expect(red.cert.holds(), "reduction certificate " + tag);
            ++succeeded;
        } catch (const Error& e) {
            t.expect(false, tag + ": " + e.what());
        }
    }
    t.expect(succeeded >= 5, "at least 5 instances reduced");
    return "5 planes over F_101";
}

// --- 8 -----------------------------------------------------------------------

// Polynomials over F_q of degree < n in a fixed order.
std::vector<Element> polynomials(const Field& F, unsigned n) {
    std::vector<Element> out{F.zero()};  // prime constant field
    for (unsigned d = 0; d < n; ++d) {
        std::vector<Element> next;
        for (long long c = 0; c < static_cast<long long>(F.characteristic()); ++c)
            for (const auto& x : out) next.push_back(F.add(x, F.mul(F.from_int(c), F.pow(F.t(), static_cast<long long>(d)))));
        out = next;
    }
    return out;
}

bool brute_separable(const FiniteSet& A) {
    const Field& F = A.field();
    std::vector<std::size_t> perm(A.size());
    std::iota(perm.begin(), perm.end(), 0);
    do {
        bool ok = true;
        for (std::size_t j = 2; j <= perm.size() && ok; ++j) {
            long r = 0;
            for (std::size_t i = 1; i < j; ++i) r = std::max(r, ffield::dist(F, A[perm[0]], A[perm[i]]).exponent);
            std::size_t inside = 0;
            for (const auto& x : A) inside += ffield::member(F, x, ffield::Ball{A[perm[0]], r});
            ok = inside == j;
        }
        if (ok) return true;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return false;
}

// Solutions of a_1+...+a_k = a_{k+1}+...+a_{2k} in which fewer than 2k-1 of the
// 2k terms occur at least twice, by enumerating all 2k-tuples.
std::uint64_t brute_nontrivial(const FiniteSet& S, unsigned k) {
    const Field& F = S.field();
    std::vector<std::size_t> idx(2 * k, 0);
    std::uint64_t bad = 0;
    while (true) {
        Element lhs = F.zero(), rhs = F.zero();
        for (unsigned i = 0; i < k; ++i) {
            lhs = F.add(lhs, S[idx[i]]);
            rhs = F.add(rhs, S[idx[k + i]]);
        }
        if (lhs == rhs) {
            unsigned repeated = 0;
            for (auto i : idx) repeated += std::count(idx.begin(), idx.end(), i) >= 2;
            bad += repeated < 2 * k - 1;
        }
        std::size_t pos = 0;
        while (pos < idx.size() && ++idx[pos] == S.size()) idx[pos++] = 0;
        if (pos == idx.size()) break;
    }
    return bad;
}

std::string criterion8(Tally& t) {
    using namespace ffield;
    std::uint64_t separable = 0;
    for (auto [q, deg] : {std::pair<std::uint64_t, unsigned>{2, 4}, {3, 3}}) {
        const Field F = Field::function(q);
        const auto polys = polynomials(F, deg);
        // Ultrametric inequality on every triple.
        for (const auto& x : polys)
            for (const auto& y : polys)
                for (const auto& z : polys)
                    t.expect(dist(F, x, z) <= std::max(dist(F, x, y), dist(F, y, z)), "ultrametric");
        // Ball trichotomy against membership over polynomials of degree <= deg + 1.
        const auto probes = polynomials(F, deg + 2);
        std::vector<Ball> balls;
        for (const auto& c : polys)
            for (long r = -1; r <= static_cast<long>(deg); ++r) balls.push_back({c, r});
        std::vector<std::vector<bool>> in(balls.size());
        for (std::size_t i = 0; i < balls.size(); ++i)
            for (const auto& x : probes) in[i].push_back(member(F, x, balls[i]));
        for (std::size_t i = 0; i < balls.size(); ++i)
            for (std::size_t j = 0; j < balls.size(); ++j) {
                bool shared = false, only1 = false, only2 = false;
                for (std::size_t k = 0; k < probes.size(); ++k) {
                    shared |= in[i][k] && in[j][k];
                    only1 |= in[i][k] && !in[j][k];
                    only2 |= in[j][k] && !in[i][k];
                }
                BallRelation expected = !shared ? BallRelation::Disjoint
                                        : only1 && only2 ? BallRelation::Disjoint  // impossible for ultrametric balls
                                        : only1 ? BallRelation::SecondInFirst
                                        : only2 ? BallRelation::FirstInSecond
                                                : BallRelation::Equal;
                t.expect(!(shared && only1 && only2), "balls overlap without nesting");
                t.expect(ball_relation(F, balls[i], balls[j]) == expected, "ball relation");
            }
    }

    SplitMix64 rng(8);
    std::uint64_t sets = 0;
    for (const Field& F : {Field::function(2), Field::function(3)}) {
        const auto polys = polynomials(F, 4);
        for (int trial = 0; trial < 100; ++trial, ++sets) {
            std::set<Element> picked;
            const std::size_t n = 1 + trial % 7;
            while (picked.size() < n) picked.insert(polys[rng.below(polys.size())]);
            const FiniteSet A(F, std::vector<Element>(picked.begin(), picked.end()));
            const bool sep = is_separable(A).separable;
            t.expect(sep == brute_separable(A), "is_separable vs orderings on " + A.literal());

            if (A.size() >= 2) {
                const auto chain = max_chain(A);
                const auto strict = separable_from_chain(A, FiniteSet(F, chain.chain));
                const std::uint64_t q = F.galois().order();
                t.expect(strict.separable.size() >= (chain.chain.size() + q - 1) / q, "|S| >= ceil(|C|/q) on " + A.literal());
            }

            if (sep && A.size() <= 6) {
                ++separable;
                for (unsigned k = 1; k <= 3; ++k) {
                    const Certificate g = separable_growth_check(A, k);
                    t.expect(g.get("nontrivial") == 0, "nontrivial = 0 on " + A.literal());
                    t.expect(brute_nontrivial(A, k) == 0, "brute nontrivial = 0 on " + A.literal());
                }
            }
        }
    }
    const Field F2 = Field::function(2);
    const Certificate w = separable_growth_check(FiniteSet::parse(F2, {"1", "t", "t^2"}), 2);
    t.expect(w.get("E_k") == 21, "E_2({1,t,t^2}) = 21");
    t.expect(w.get("|kS|") == 4, "|2S| = 4");
    return std::to_string(sets) + " random sets, " + std::to_string(separable) + " separable";
}

// --- 9 -----------------------------------------------------------------------

harness::Campaign monitor_campaign(const std::string& field, harness::Family family, std::vector<std::uint64_t> sizes,
                                   std::vector<std::string> checks, std::uint64_t instances) {
    harness::Campaign c;
    c.seed = 9;
    c.field = field;
    c.family = family;
    c.sizes = std::move(sizes);
    c.instances = instances;
    c.checks = std::move(checks);
    return c;
}

std::string criterion9(Tally& t) {
    using harness::Family;
    const std::vector<std::pair<std::string, harness::Campaign>> runs{
        {"szemeredi_trotter_q_grid", monitor_campaign("Q", Family::ExtremalGrid, {8, 27, 64}, {"incidence_bounds"}, 1)},
        {"szemeredi_trotter_q_elekes", monitor_campaign("Q", Family::Elekes, {2, 3, 4, 5, 6}, {"incidence_bounds"}, 1)},
        {"szemeredi_trotter_q_random", monitor_campaign("Q", Family::Random, {4, 6, 8}, {"incidence_bounds"}, 5)},
        {"elekes_fp", monitor_campaign("Fp(101)", Family::Random, {9}, {"elekes_growth"}, 50)},
        {"rudnev_partial_fp", monitor_campaign("Fp(101)", Family::Random, {4, 6, 8, 10},
                                               {"rudnev", "partial_sumproduct_v1", "partial_sumproduct_v2"}, 10)},
        {"ff_sumproduct_tpowers", monitor_campaign("Ft:2", Family::TPowers, {3, 4, 5, 6, 7, 8}, {"ff_sumproduct"}, 1)},
        {"ff_sumproduct_random", monitor_campaign("Ft:2", Family::Random, {4, 6, 8}, {"ff_sumproduct"}, 5)},
    };
    std::uint64_t rows = 0, misses = 0;
    for (auto [name, c] : runs) {
        c.csv = "monitors_" + name + ".csv";
        c.json = "monitors_" + name + ".json";
        const auto first = harness::run_campaign(c);
        const std::string csv = io::read_file(c.csv), json = io::read_file(c.json);
        const auto second = harness::run_campaign(c);
        t.expect(!first.rows.empty(), name + " produced rows");
        t.expect(io::read_file(c.csv) == csv && io::read_file(c.json) == json, name + " byte-reproducible");
        t.expect(first.csv() == second.csv(), name + " rows reproducible");
        rows += first.rows.size();
        misses += first.summary["monitor_misses"].get<std::uint64_t>();
    }
    return std::to_string(rows) + " rows, " + std::to_string(misses) + " monitor misses (report only)";
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        const char* name;
        double budget_s;
        std::function<std::string(Tally&)> run;
    };
    const std::vector<Criterion> criteria{
        {1, "exact energy identities", 60, criterion1},
        {2, "inequality suite", 300, criterion2},
        {3, "construction reproduction", 5, criterion3},
        {4, "BSG and cover certificates", 120, criterion4},
        {5, "psi injection", 60, criterion5},
        {6, "projective suite", 120, criterion6},
        {7, "pipeline roundtrip", 120, criterion7},
        {8, "function-field suite", 180, criterion8},
        {9, "monitor reports", 300, criterion9},
    };
    int failed = 0;
    for (const auto& c : criteria) {
        Tally t;
        std::string detail;
        const auto start = std::chrono::steady_clock::now();
        try {
            detail = c.run(t);
        } catch (const std::exception& e) {
            t.expect(false, std::string("exception: ") + e.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const bool in_time = secs < c.budget_s;
        const bool pass = t.failures == 0 && in_time;
        failed += !pass;
        std::printf("%s %d %s: %llu checks, %llu failures, %.2f s (budget %.0f s)%s%s\n", pass ? "PASS" : "FAIL", c.id,
                    c.name, static_cast<unsigned long long>(t.checks), static_cast<unsigned long long>(t.failures), secs,
                    c.budget_s, detail.empty() ? "" : "; ", detail.c_str());
        for (const auto& n : t.notes) std::printf("    %s\n", n.c_str());
        if (!in_time) std::printf("    over time budget\n");
        std::fflush(stdout);
    }
    return failed ? 1 : 0;
}
