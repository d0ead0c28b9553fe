#include "growthlab/expander.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "growthlab/error.hpp"

namespace growthlab::expander {

using projective::ProjMap;
using projective::ProjPoint;
using setcore::Op;

namespace {

Rational Q(std::uint64_t v) { return Rational(BigInt(static_cast<unsigned long>(v))); }

std::uint64_t sum_of_run_squares(std::vector<ProjPoint>& values) {
    std::sort(values.begin(), values.end());
    std::uint64_t E = 0;
    for (std::size_t i = 0; i < values.size();) {
        std::size_t k = i;
        while (k < values.size() && values[k] == values[i]) ++k;
        E += (k - i) * (k - i);
        i = k;
    }
    return E;
}

void require_size(const FiniteSet& A, std::size_t lo, const char* what) {
    if (A.size() < lo) fail(ErrorCode::TooSmall, std::string(what) + " needs |A| >= " + std::to_string(lo));
}

// [(ab)(cd) : (bc)(ad)]; projective::cross_ratio when a, b, c are distinct, otherwise
// the same brackets directly (admissible tuples keep the two entries from both vanishing).
ProjPoint xratio(const ProjPoint& a, const ProjPoint& b, const ProjPoint& c, const ProjPoint& d) {
    if (a != b && b != c && a != c) return projective::cross_ratio(a, b, c, d);
    const Field& F = a.field();
    auto br = [&](const ProjPoint& x, const ProjPoint& y) { return F.sub(F.mul(x[0], y[1]), F.mul(x[1], y[0])); };
    return ProjPoint(F, {F.mul(br(a, b), br(c, d)), F.mul(br(b, c), br(a, d))});
}

void require_nonzero(const FiniteSet& A, const char* name) {
    if (A.contains(A.field().zero())) fail(ErrorCode::ZeroElement, std::string("0 lies in ") + name);
}

}  // namespace

FiniteSet f_image(const FiniteSet& A) {
    return setcore::pairwise_set(A, setcore::shifted(A, A.field().one()), Op::Product);
}

MultiplicityMap g_multiplicity(const FiniteSet& A) {
    require_size(A, 2, "g");
    const Field& F = A.field();
    std::vector<Element> vals;
    for (const auto& a : A)
        for (const auto& c : A) {
            if (a == c) continue;
            const Element inv = F.inv(F.sub(a, c));
            for (const auto& b : A) vals.push_back(F.mul(F.sub(a, b), inv));
        }
    return setcore::count_values(std::move(vals));
}

MultiplicityMap h_multiplicity(const FiniteSet& A) {
    require_size(A, 3, "h");
    const Field& F = A.field();
    std::vector<Element> vals;
    for (const auto& b : A)
        for (const auto& c : A) {
            if (b == c) continue;
            const Element bc = F.sub(b, c);
            for (const auto& a : A)
                for (const auto& d : A) {
                    if (a == d) continue;
                    const Element den = F.inv(F.mul(bc, F.sub(a, d)));
                    vals.push_back(F.mul(F.mul(F.sub(a, b), F.sub(c, d)), den));
                }
        }
    return setcore::count_values(std::move(vals));
}

static FiniteSet support(const FiniteSet& A, const MultiplicityMap& mu) {
    std::vector<Element> v;
    for (const auto& [x, m] : mu.entries()) v.push_back(x);
    return FiniteSet(A.field(), std::move(v));
}

FiniteSet g_image(const FiniteSet& A) { return support(A, g_multiplicity(A)); }
FiniteSet h_image(const FiniteSet& A) { return support(A, h_multiplicity(A)); }

FiniteSet g_image_by_cross_ratio(const FiniteSet& A) {
    require_size(A, 2, "g");
    const Field& F = A.field();
    const ProjPoint inf = projective::line_infinity(F);
    std::vector<Element> vals;
    for (const auto& a : A)
        for (const auto& b : A)
            for (const auto& c : A) {
                if (a == c) continue;
                const ProjPoint X =
                    xratio(inf, projective::line_point(F, a), projective::line_point(F, b), projective::line_point(F, c));
                const Element& x = X[0];
                const Element& y = X[1];
                vals.push_back(F.div(y, F.add(x, y)));
            }
    return FiniteSet(F, std::move(vals));
}

// ---------------------------------------------------------------------------
// Growth reports

double GrowthReport::exponent(std::uint64_t image, std::size_t n) {
    if (n < 2 || image == 0) return 0;
    return std::log(static_cast<double>(image)) / std::log(static_cast<double>(n));
}

bool GrowthReport::consistent() const {
    return exp_f == exponent(f, n) && exp_g == exponent(g, n) && exp_h == (h ? exponent(*h, n) : 0.0);
}

GrowthReport growth_report(const FiniteSet& A, const std::string& family, bool with_h) {
    GrowthReport r;
    r.family = family;
    r.field = A.field().name();
    r.n = A.size();
    r.f = f_image(A).size();
    r.g = A.size() >= 2 ? g_image(A).size() : 0;
    if (with_h && A.size() >= 3) r.h = h_image(A).size();
    r.exp_f = GrowthReport::exponent(r.f, r.n);
    r.exp_g = GrowthReport::exponent(r.g, r.n);
    r.exp_h = r.h ? GrowthReport::exponent(*r.h, r.n) : 0.0;
    return r;
}

// ---------------------------------------------------------------------------
// The psi injection

PsiResult psi_injection_engine(const FiniteSet& A, const FiniteSet& B, const Rational& eps) {
    require_nonzero(A, "A");
    require_nonzero(B, "B");
    if (A.empty() || B.empty()) fail(ErrorCode::EmptyInput, "A and B must be nonempty");
    if (eps <= 0 || eps >= 1) fail(ErrorCode::InvalidArgument, "eps must lie in (0,1)");
    const Field& F = A.field();
    require_same(F, B.field());
    const Rational a = Q(A.size()), b = Q(B.size());

    // |A n xB| for every ratio x = a/b.
    const MultiplicityMap ratios = setcore::multiplicity(A, B, Op::Ratio);
    const Rational R = Q(ratios.support_size());
    std::vector<Element> popular;
    for (const auto& [x, m] : ratios.entries())
        if (Q(m) * R >= eps * a * b) popular.push_back(x);
    FiniteSet X(F, std::move(popular));

    std::vector<setcore::Edge> edges;
    for (std::uint32_t i = 0; i < A.size(); ++i)
        for (std::uint32_t j = 0; j < B.size(); ++j)
            if (X.contains(F.div(A[i], B[j]))) edges.emplace_back(i, j);
    PairGraph G(A, B, edges);

    // a_xi, b_xi: the first edge with difference xi.
    std::vector<std::pair<Element, std::pair<std::uint32_t, std::uint32_t>>> reps;
    for (auto [i, j] : G.edges()) reps.push_back({F.sub(A[i], B[j]), {i, j}});
    std::stable_sort(reps.begin(), reps.end(), [](const auto& l, const auto& r) { return l.first < r.first; });
    reps.erase(std::unique(reps.begin(), reps.end(), [](const auto& l, const auto& r) { return l.first == r.first; }),
               reps.end());

    const FiniteSet AB1 = setcore::pairwise_set(A, setcore::shifted(B, F.one()), Op::Product);
    const FiniteSet BA1 = setcore::pairwise_set(B, setcore::shifted(A, F.one()), Op::Product);
    std::vector<std::pair<Element, Element>> images;
    std::uint64_t outside = 0;
    for (const auto& [xi, e] : reps) {
        const Element& ax = A[e.first];
        const Element& bx = B[e.second];
        const Element r = F.div(ax, bx);
        for (const auto& c : A)
            for (const auto& d : B) {
                if (F.div(c, d) != r) continue;
                Element t1 = F.add(ax, F.mul(ax, d)), t2 = F.add(bx, F.mul(bx, c));
                if (!AB1.contains(t1) || !BA1.contains(t2)) ++outside;
                images.emplace_back(std::move(t1), std::move(t2));
            }
    }
    PsiResult out{G, X, reps.size(), images.size(), 0, {}};
    std::sort(images.begin(), images.end());
    out.collisions = static_cast<std::uint64_t>(images.end() - std::unique(images.begin(), images.end()));

    auto& cert = out.cert;
    cert.lemma = "psi injection";
    cert.instance = {{"field", F.name()}, {"A", A.format()}, {"B", B.format()}, {"eps", exact::to_string(eps)}};
    const Rational D = Q(out.differences), S = Q(out.S);
    const Rational P1 = Q(AB1.size()), P2 = Q(BA1.size());
    cert.set("|A/B|", R);
    cert.set("|X|", Q(X.size()));
    cert.set("|G|", Q(G.size()));
    cert.set("|A-^GB|", D);
    cert.set("|S|", S);
    cert.set("|A(B+1)|", P1);
    cert.set("|B(A+1)|", P2);
    cert.set("collisions", Q(out.collisions));
    cert.require("(1-eps)|A||B|<=|G|", (1 - eps) * a * b, Q(G.size()));
    cert.require("collisions<=0", Q(out.collisions), 0);
    cert.require("images outside A(B+1)xB(A+1)<=0", Q(outside), 0);
    cert.require("|S|<=|A(B+1)||B(A+1)|", S, P1 * P2);
    cert.require("eps|A||B||A-^GB|<=|S||A/B|", eps * a * b * D, S * R);
    cert.require("eps|A||B||A-^GB|<=|A(B+1)||B(A+1)||A/B|", eps * a * b * D, P1 * P2 * R);
    return out;
}

// ---------------------------------------------------------------------------
// Corollaries

namespace {

void absorb(Certificate& into, const Certificate& from, const std::string& prefix) {
    for (const auto& [name, v] : from.quantities) into.set(prefix + name, v);
    for (const auto& b : from.bounds) {
        if (b.monitor)
            into.monitor(prefix + b.name, b.lhs, b.rhs);
        else
            into.require(prefix + b.name, b.lhs, b.rhs);
    }
}

void require_pipeline_input(const FiniteSet& A) {
    const Field& F = A.field();
    if (A.empty()) fail(ErrorCode::EmptyInput, "A is empty");
    if (A.contains(F.zero()) || A.contains(F.neg(F.one())))
        fail(ErrorCode::DegenerateElements, "the corollaries need 0 and -1 outside A");
    if (A.size() > 64) fail(ErrorCode::BudgetExceeded, "the corollaries run on |A| <= 64");
}

CorollaryResult horrific(const FiniteSet& A, const Rational& eps) {
    const Field& F = A.field();
    const PsiResult psi = psi_injection_engine(A, A, eps);
    const calculus::DenseResult dense = calculus::bsg_dense(psi.G, eps);
    const FiniteSet AA1 = f_image(A);
    const FiniteSet quot = setcore::pairwise_set(A, A, Op::Ratio);
    const FiniteSet diff = setcore::pairwise_set(dense.subset, dense.subset, Op::Difference);

    CorollaryResult out{dense.subset, {}, {}};
    auto& cert = out.cert;
    cert.lemma = "corollary horrific";
    cert.instance = {{"field", F.name()}, {"A", A.format()}, {"eps", exact::to_string(eps)}};
    absorb(cert, psi.cert, "psi.");
    absorb(cert, dense.cert, "bsg.");
    const Rational a = Q(A.size()), s = Q(AA1.size()), d = Q(diff.size());
    const Rational su = exact::sqrt_upper(eps);
    cert.set("|A(A+1)|", s);
    cert.set("|A/A|", Q(quot.size()));
    cert.set("|A'|", Q(dense.subset.size()));
    cert.set("|A'-A'|", d);
    // Ruzsa's triangle inequality for the multiplicative group with the set A+1.
    cert.require("|A/A||A+1|<=|A(A+1)|^2", Q(quot.size()) * a, s * s);
    cert.require("2|A'|>=|A|", a, 2 * Q(dense.subset.size()));
    // |A'-A'| <= |A-^GA|^2/((1-2sqrt eps)|A|) with |A-^GA| <= |A(A+1)|^2|A/A|/(eps|A|^2).
    cert.require("|A'-A'|eps^2(1-2sqrt(eps))|A|^7<=|A(A+1)|^8", d * eps * eps * (1 - 2 * su) * exact::pow(a, 7),
                 exact::pow(s, 8));
    cert.monitor("|A'-A'||A|^7<=|A(A+1)|^8", d * exact::pow(a, 7), exact::pow(s, 8));
    return out;
}

CorollaryResult energy_prime(const FiniteSet& A, const Rational& eps) {
    if (eps <= 0 || eps >= Rational(1, 2)) fail(ErrorCode::InvalidArgument, "eps must lie in (0,1/2)");
    const Field& F = A.field();
    const Rational half = eps / 2;
    const PsiResult psi = psi_injection_engine(A, A, half);
    const calculus::Variation2 v2 = calculus::cover_variation2(psi.G, half);

    CorollaryResult out{A, v2.cover.centers, {}};
    auto& cert = out.cert;
    cert.lemma = "corollary energyprime";
    cert.instance = {{"field", F.name()}, {"A", A.format()}, {"eps", exact::to_string(eps)}};
    absorb(cert, psi.cert, "psi.");
    absorb(cert, v2.cover.cert, "cover.");
    const Rational a = Q(A.size()), s = Q(f_image(A).size());
    const Rational quot = Q(setcore::pairwise_set(A, A, Op::Ratio).size());
    const Rational m = Q(v2.cover.centers.size());
    cert.set("|G|", Q(v2.covered_graph.size()));
    cert.set("centers", m);
    cert.require("(1-eps)|A|^2<=|G|", (1 - eps) * a * a, Q(v2.covered_graph.size()));
    cert.require("(centers-1)(eps/2)^2|A|^3<=|A(A+1)|^2|A/A|", (m - 1) * half * half * exact::pow(a, 3), s * s * quot);
    return out;
}

}  // namespace

CorollaryResult corollary_energy(const FiniteSet& A, const FiniteSet& B, const FiniteSet& C, const Element& x,
                                 const Element& y, const Rational& eps) {
    const Field& F = A.field();
    require_same(F, B.field());
    require_same(F, C.field());
    if (eps <= 0 || eps >= Rational(1, 16)) fail(ErrorCode::InvalidArgument, "eps must lie in (0,1/16)");
    if (F.is_zero(x)) fail(ErrorCode::InvalidArgument, "x must be nonzero");
    for (const auto* S : {&A, &B}) require_pipeline_input(*S);
    require_pipeline_input(C);
    const Element xinv = F.inv(x);
    auto pull = [&](const FiniteSet& S) {
        std::vector<Element> v;
        for (const auto& s : S) v.push_back(F.mul(F.sub(s, y), xinv));
        return FiniteSet(F, std::move(v));
    };
    const FiniteSet Axy = pull(A), Bxy = pull(B);
    if (!Axy.is_subset_of(C) || !Bxy.is_subset_of(C)) fail(ErrorCode::InvalidArgument, "A and B must lie in xC + y");
    require_nonzero(Axy, "(A-y)/x");
    require_nonzero(Bxy, "(B-y)/x");

    const Rational e2 = eps * eps / 4;
    const PsiResult psi = psi_injection_engine(Axy, Bxy, e2);
    // Push G back to A x B through a -> xa + y.
    std::vector<setcore::Edge> edges;
    for (auto [i, j] : psi.G.edges()) {
        const Element a = F.add(F.mul(x, Axy[i]), y), b = F.add(F.mul(x, Bxy[j]), y);
        edges.emplace_back(static_cast<std::uint32_t>(A.index_of(a)), static_cast<std::uint32_t>(B.index_of(b)));
    }
    const PairGraph G(A, B, edges);
    const std::uint64_t dG = setcore::partial_pairwise_set(G, Op::Difference).size();
    const calculus::Variation1 v1 = calculus::cover_variation1(G, e2);

    CorollaryResult out{v1.plus.covered, v1.plus.centers, {}};
    auto& cert = out.cert;
    cert.lemma = "corollary energy";
    cert.instance = {{"field", F.name()}, {"A", A.format()}, {"B", B.format()}, {"C", C.format()},
                     {"x", F.format(x)}, {"y", F.format(y)}, {"eps", exact::to_string(eps)}};
    absorb(cert, psi.cert, "psi.");
    absorb(cert, v1.plus.cert, "plus.");
    absorb(cert, v1.minus.cert, "minus.");
    const Rational a = Q(A.size()), b = Q(B.size());
    const Rational cc1 = Q(f_image(C).size()), cq = Q(setcore::pairwise_set(C, C, Op::Ratio).size());
    cert.set("|C(C+1)|", cc1);
    cert.set("|C/C|", cq);
    cert.set("|A-^GB|", Q(dG));
    cert.require("|A-^GB|=|A_xy-^GB_xy|", Q(dG), Q(psi.differences));
    cert.require("|A_xy-^GB_xy|=|A-^GB|", Q(psi.differences), Q(dG));
    cert.require("|A_xy(B_xy+1)|<=|C(C+1)|", psi.cert.get("|A(B+1)|"), cc1);
    cert.require("|B_xy(A_xy+1)|<=|C(C+1)|", psi.cert.get("|B(A+1)|"), cc1);
    cert.require("(1-eps)|A|<=covered by +B", (1 - eps) * a, Q(v1.plus.covered.size()));
    cert.require("(1-eps)|A|<=covered by -B", (1 - eps) * a, Q(v1.minus.covered.size()));
    // Center counts against the claimed O_eps(|C(C+1)|^2|C/C|/(|A||B|^2)), explicit constant 1/eps'.
    const Rational target = cc1 * cc1 * cq / (e2 * a * b * b);
    cert.set("target", target);
    cert.monitor("centers(+B)<=|C(C+1)|^2|C/C|/(eps'|A||B|^2)", Q(v1.plus.centers.size()), target);
    cert.monitor("centers(-B)<=|C(C+1)|^2|C/C|/(eps'|A||B|^2)", Q(v1.minus.centers.size()), target);
    return out;
}

CorollaryResult corollary_pipeline(const FiniteSet& A, Corollary which, const Rational& eps) {
    require_pipeline_input(A);
    switch (which) {
        case Corollary::Horrific:
            if (eps <= 0 || eps >= Rational(1, 4)) fail(ErrorCode::InvalidArgument, "eps must lie in (0,1/4)");
            return horrific(A, eps);
        case Corollary::Energy: {
            const Rational e = eps < Rational(1, 16) ? eps : Rational(1, 32);
            return corollary_energy(A, A, A, A.field().one(), A.field().zero(), e);
        }
        case Corollary::EnergyPrime:
            return energy_prime(A, eps);
    }
    fail(ErrorCode::InvalidArgument, "unknown corollary");
}

// ---------------------------------------------------------------------------
// Cross-ratio energy

std::uint64_t crossratio_energy(const FiniteSet& A, EnergyVariant variant) {
    if (A.size() > 30) fail(ErrorCode::BudgetExceeded, "cross-ratio energy runs on |A| <= 30");
    const Field& F = A.field();
    std::vector<ProjPoint> pts;
    for (const auto& a : A) pts.push_back(projective::line_point(F, a));
    const std::size_t n = pts.size();
    std::vector<ProjPoint> values;
    if (variant == EnergyVariant::Three) {
        require_size(A, 2, "g");
        const ProjPoint inf = projective::line_infinity(F);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                for (std::size_t k = 0; k < n; ++k)
                    if (i != k) values.push_back(xratio(inf, pts[i], pts[j], pts[k]));
    } else {
        require_size(A, 3, "h");
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                for (std::size_t k = 0; k < n; ++k) {
                    if (j == k) continue;
                    for (std::size_t l = 0; l < n; ++l)
                        if (i != l) values.push_back(xratio(pts[i], pts[j], pts[k], pts[l]));
                }
    }
    return sum_of_run_squares(values);
}

std::uint64_t graph_count(const ProjMap& tau, const FiniteSet& A) {
    const Field& F = A.field();
    std::uint64_t N = 0;
    for (const auto& a : A) {
        const ProjPoint img = projective::apply(tau, projective::line_point(F, a));
        if (!F.is_zero(img[1]) && A.contains(F.div(img[0], img[1]))) ++N;
    }
    return N;
}

std::uint64_t plane_count(const ProjPoint& p, const FiniteSet& A) {
    const Field& F = A.field();
    std::uint64_t m = 0;
    for (const auto& a : A)
        for (const auto& b : A)
            m += projective::plane_of_pair(projective::line_point(F, a), projective::line_point(F, b)).contains(p);
    return m;
}

Bridge energy_incidence_bridge(const FiniteSet& A, EnergyVariant variant) {
    if (A.size() > 12) fail(ErrorCode::BudgetExceeded, "the bridge runs on |A| <= 12");
    const bool three = variant == EnergyVariant::Three;
    require_size(A, three ? 2 : 3, three ? "g" : "h");
    const Field& F = A.field();
    const std::size_t n = A.size();
    auto mat = [&](Element p, Element q, Element r, Element s) {
        return ProjMap(F, {{std::move(p), std::move(q)}, {std::move(r), std::move(s)}});
    };

    // Every map with N >= 2 fixing infinity, or N >= 3, is determined by two (three) of its pairs.
    std::set<ProjMap> maps;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            if (three) {
                for (std::size_t u = 0; u < n; ++u)
                    for (std::size_t v = 0; v < n; ++v) {
                        if (u == v) continue;
                        const Element alpha = F.div(F.sub(A[u], A[v]), F.sub(A[i], A[j]));
                        maps.insert(mat(alpha, F.sub(A[u], F.mul(alpha, A[i])), F.zero(), F.one()));
                    }
                continue;
            }
            for (std::size_t k = j + 1; k < n; ++k) {
                // M_a sends a_i, a_j, a_k to 0, 1, infinity.
                auto M = [&](const Element& x, const Element& y, const Element& z) {
                    const Element yz = F.sub(y, z), yx = F.sub(y, x);
                    return std::array<Element, 4>{yz, F.neg(F.mul(x, yz)), yx, F.neg(F.mul(z, yx))};
                };
                const auto Ma = M(A[i], A[j], A[k]);
                for (std::size_t u = 0; u < n; ++u)
                    for (std::size_t v = 0; v < n; ++v)
                        for (std::size_t w = 0; w < n; ++w) {
                            if (u == v || v == w || u == w) continue;
                            const auto Mb = M(A[u], A[v], A[w]);
                            // adj(M_b) M_a
                            const Element p = Mb[3], q = F.neg(Mb[1]), r = F.neg(Mb[2]), s = Mb[0];
                            maps.insert(mat(F.add(F.mul(p, Ma[0]), F.mul(q, Ma[2])), F.add(F.mul(p, Ma[1]), F.mul(q, Ma[3])),
                                            F.add(F.mul(r, Ma[0]), F.mul(s, Ma[2])), F.add(F.mul(r, Ma[1]), F.mul(s, Ma[3]))));
                        }
            }
        }

    Bridge out;
    out.maps.assign(maps.begin(), maps.end());
    const unsigned power = three ? 3 : 4;
    BigInt falling = 0, sum_m = 0;
    std::uint64_t mismatches = 0;
    for (const auto& tau : out.maps) {
        const std::uint64_t N = graph_count(tau, A);
        const std::uint64_t m = plane_count(projective::psi_embed(tau), A);
        mismatches += N != m;
        BigInt f = 1;
        for (unsigned t = 0; t < power; ++t) f *= BigInt(static_cast<unsigned long>(N)) - t;
        if (N >= power) falling += f;
        sum_m += exact::pow(BigInt(static_cast<unsigned long>(m)), power);
    }

    // Direct count over tuples with pairwise distinct entries.
    std::vector<ProjPoint> pts;
    for (const auto& a : A) pts.push_back(projective::line_point(F, a));
    std::vector<ProjPoint> values;
    const ProjPoint inf = projective::line_infinity(F);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k) {
                if (i == j || j == k || i == k) continue;
                if (three) {
                    values.push_back(projective::cross_ratio(inf, pts[i], pts[j], pts[k]));
                    continue;
                }
                for (std::size_t l = 0; l < n; ++l)
                    if (l != i && l != j && l != k) values.push_back(projective::cross_ratio(pts[i], pts[j], pts[k], pts[l]));
            }
    out.energy_distinct = sum_of_run_squares(values);
    out.energy_full = crossratio_energy(A, variant);

    auto& cert = out.cert;
    cert.lemma = three ? "cross-ratio energy, three variables" : "cross-ratio energy, four variables";
    cert.instance = {{"field", F.name()}, {"A", A.format()}};
    const Rational Ed = Q(out.energy_distinct), Ef = Q(out.energy_full), Sm = Rational(sum_m);
    cert.set("|T|", Q(out.maps.size()));
    cert.set("E_distinct", Ed);
    cert.set("E", Ef);
    cert.set("sum m^k", Sm);
    cert.require("N(tau)!=m(psi(tau))<=0", Q(mismatches), 0);
    cert.require("E_distinct=sum N falling", Ed, Rational(falling));
    cert.require("sum N falling=E_distinct", Rational(falling), Ed);
    cert.require("E_distinct<=sum m^k", Ed, Sm);
    cert.monitor("E<=sum m^k", Ef, Sm);
    const MultiplicityMap mu = three ? g_multiplicity(A) : h_multiplicity(A);
    cert.require("(sum mu)^2<=|image|E", Q(mu.total()) * Q(mu.total()), Q(mu.support_size()) * Ef);
    return out;
}

}  // namespace growthlab::expander
