#include "growthlab/harness.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <future>
#include <limits>
#include <set>
#include <sstream>
#include <thread>

#include "growthlab/calculus.hpp"
#include "growthlab/error.hpp"
#include "growthlab/expander.hpp"
#include "growthlab/ffield.hpp"
#include "growthlab/incidence.hpp"
#include "growthlab/io.hpp"

namespace growthlab::harness {

using incidence::IncidenceInstance;
using setcore::Op;
using setcore::PairGraph;

std::uint64_t SplitMix64::next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t SplitMix64::below(std::uint64_t n) {
    if (n == 0) fail(ErrorCode::InvalidArgument, "below(0)");
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do x = next();
    while (x >= limit);
    return x % n;
}

long long SplitMix64::between(long long lo, long long hi) {
    return lo + static_cast<long long>(below(static_cast<std::uint64_t>(hi - lo) + 1));
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t i) {
    SplitMix64 g(seed ^ (0xd1b54a32d192ed03ULL * (i + 1)));
    return g.next();
}

namespace {

Rational Q(std::uint64_t v) { return Rational(BigInt(static_cast<unsigned long>(v))); }

const std::vector<std::pair<std::string, Family>>& family_names() {
    static const std::vector<std::pair<std::string, Family>> names{
        {"ap", Family::AP},           {"gp", Family::GP},         {"random", Family::Random},
        {"t-powers", Family::TPowers}, {"bg", Family::BG},        {"elekes", Family::Elekes},
        {"extremal-grid", Family::ExtremalGrid}};
    return names;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    return s.substr(b, s.find_last_not_of(" \t\r\n") - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep))
        if (!trim(item).empty()) out.push_back(trim(item));
    return out;
}

std::uint64_t parse_u64(const std::string& s, const char* what) {
    try {
        std::size_t used = 0;
        const auto v = std::stoull(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        fail(ErrorCode::SpecInvalid, std::string("bad ") + what + ": '" + s + "'");
    }
}

// Polynomial in t with base-p digits of k as coefficients.
Element poly_from_index(const Field& F, std::uint64_t k) {
    const std::uint64_t p = F.characteristic();
    Element x = F.zero(), tp = F.one();
    for (; k; k /= p, tp = F.mul(tp, F.t())) x = F.add(x, F.mul(F.from_int(static_cast<long long>(k % p)), tp));
    return x;
}

// The k-th element in a fixed enumeration of a finite field.
Element finite_element(const Field& F, const std::vector<Element>& all, std::uint64_t k) {
    return F.kind() == FieldKind::Prime ? F.from_int(static_cast<long long>(k)) : all[k];
}

FiniteSet random_set(const Field& F, std::uint64_t size, SplitMix64& rng) {
    std::set<Element> picked;
    if (F.kind() == FieldKind::Rational) {
        const auto span = static_cast<long long>(4 * size + 4);
        while (picked.size() < size) picked.insert(F.from_int(rng.between(-span, span)));
    } else if (F.kind() == FieldKind::Function) {
        std::uint64_t range = F.characteristic();
        while (range < 4 * size) range *= F.characteristic();
        while (picked.size() < size) picked.insert(poly_from_index(F, rng.below(range)));
    } else {
        if (size > F.order()) fail(ErrorCode::SpecInvalid, "more elements requested than the field holds");
        const std::vector<Element> all = F.kind() == FieldKind::Prime ? std::vector<Element>{} : F.elements();
        while (picked.size() < size) picked.insert(finite_element(F, all, rng.below(F.order())));
    }
    return FiniteSet(F, std::vector<Element>(picked.begin(), picked.end()));
}

Element random_element(const Field& F, SplitMix64& rng, bool nonzero) {
    while (true) {
        Element x;
        if (F.kind() == FieldKind::Rational)
            x = F.from_int(rng.between(-20, 20));
        else if (F.kind() == FieldKind::Function)
            x = poly_from_index(F, rng.below(F.characteristic() * F.characteristic() * F.characteristic()));
        else
            x = finite_element(F, F.kind() == FieldKind::Prime ? std::vector<Element>{} : F.elements(),
                               rng.below(F.order()));
        if (!nonzero || !F.is_zero(x)) return x;
    }
}

FiniteSet progression(const Field& F, std::uint64_t size, SplitMix64& rng) {
    if (F.characteristic() != 0 && size > F.characteristic())
        fail(ErrorCode::SpecInvalid, "an AP has at most p elements");
    const Element a = F.kind() == FieldKind::Rational ? F.from_int(rng.between(-20, 20)) : random_element(F, rng, false);
    const Element d = F.kind() == FieldKind::Rational ? F.from_int(rng.between(1, 10)) : random_element(F, rng, true);
    std::vector<Element> v;
    Element x = a;
    for (std::uint64_t i = 0; i < size; ++i, x = F.add(x, d)) v.push_back(x);
    return FiniteSet(F, v);
}

FiniteSet geometric(const Field& F, std::uint64_t size, SplitMix64& rng) {
    Element a, r;
    if (F.kind() == FieldKind::Rational) {
        a = F.from_int(rng.between(1, 10));
        r = F.from_int(rng.between(2, 4));
    } else if (F.kind() == FieldKind::Function) {
        a = F.from_int(rng.between(1, static_cast<long long>(F.characteristic()) - 1));
        r = F.add(F.t(), F.from_int(rng.between(0, static_cast<long long>(F.characteristic()) - 1)));
    } else {
        // Ratios of order at least 2|A|-1, so that the products do not wrap around.
        if (2 * size > F.order()) fail(ErrorCode::SpecInvalid, "a GP needs 2|A|-1 < q");
        a = random_element(F, rng, true);
        for (int attempt = 0;; ++attempt) {
            if (attempt == 1000) fail(ErrorCode::SpecInvalid, "no ratio of large enough order found");
            r = random_element(F, rng, true);
            std::uint64_t order = 1;
            for (Element x = r; x != F.one() && order < 2 * size - 1; x = F.mul(x, r)) ++order;
            if (order >= 2 * size - 1) break;
        }
    }
    std::vector<Element> v;
    Element x = a;
    for (std::uint64_t i = 0; i < size; ++i, x = F.mul(x, r)) v.push_back(x);
    return FiniteSet(F, v);
}

}  // namespace

Family parse_family(const std::string& name) {
    std::string lower = name;
    std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
    for (const auto& [n, f] : family_names())
        if (n == lower) return f;
    fail(ErrorCode::SpecInvalid, "unknown family '" + name + "'");
}

std::string to_string(Family f) {
    for (const auto& [n, g] : family_names())
        if (g == f) return n;
    return "?";
}

Instance generate(Family family, const Field& F, std::uint64_t size, std::uint64_t seed) {
    SplitMix64 rng(seed);
    try {
        switch (family) {
            case Family::AP: return progression(F, size, rng);
            case Family::GP: return geometric(F, size, rng);
            case Family::Random: return random_set(F, size, rng);
            case Family::TPowers: {
                if (F.kind() != FieldKind::Function) fail(ErrorCode::SpecInvalid, "t-powers live in F_q(t)");
                std::vector<Element> v;
                for (std::uint64_t j = 0; j < size; ++j) v.push_back(F.pow(F.t(), static_cast<long long>(j)));
                return FiniteSet(F, v);
            }
            case Family::BG:
                if (F.kind() != FieldKind::Prime) fail(ErrorCode::SpecInvalid, "the Bourgain-Garaev set lives in F_p");
                return incidence::bourgain_garaev_set(F.characteristic(), size).set;
            case Family::Elekes: {
                if (F.characteristic() != 0 && size >= F.characteristic())
                    fail(ErrorCode::SpecInvalid, "Elekes needs {1..n} inside F_p");
                std::vector<long long> v;
                for (std::uint64_t i = 1; i <= size; ++i) v.push_back(static_cast<long long>(i));
                return incidence::elekes_config(FiniteSet::from_ints(F, v)).instance;
            }
            case Family::ExtremalGrid: return incidence::extremal_grid(F, size).instance;
        }
    } catch (const Error& e) {
        if (e.code() == ErrorCode::SpecInvalid) throw;
        fail(ErrorCode::SpecInvalid, to_string(family) + " of size " + std::to_string(size) + ": " + e.what());
    }
    fail(ErrorCode::SpecInvalid, "unknown family");
}

Field parse_field_spec(const std::string& text) {
    const std::string s = trim(text);
    std::string literal = s;
    if (const auto colon = s.find(':'); colon != std::string::npos) {
        const std::string kind = s.substr(0, colon), args = s.substr(colon + 1);
        if (kind == "Fp" || kind == "Fq")
            literal = kind + "(" + args + ")";
        else if (kind == "Ft")
            literal = "Fq(t;" + args + ")";
        else
            fail(ErrorCode::SpecInvalid, "unknown field form '" + s + "'");
    }
    try {
        return Field::parse(literal);
    } catch (const Error& e) {
        fail(ErrorCode::SpecInvalid, "bad field '" + s + "': " + e.what());
    }
}

std::vector<std::uint64_t> parse_sizes(const std::string& text) {
    std::vector<std::uint64_t> out;
    for (const auto& part : split(text, ',')) {
        const auto dots = part.find("..");
        if (dots == std::string::npos) {
            out.push_back(parse_u64(part, "size"));
            continue;
        }
        const auto lo = parse_u64(trim(part.substr(0, dots)), "size"), hi = parse_u64(trim(part.substr(dots + 2)), "size");
        if (lo > hi || hi - lo > 10000) fail(ErrorCode::SpecInvalid, "bad size range '" + part + "'");
        for (auto n = lo; n <= hi; ++n) out.push_back(n);
    }
    if (out.empty()) fail(ErrorCode::SpecInvalid, "no sizes given");
    return out;
}

Campaign parse_campaign(const std::string& text) {
    Campaign c;
    bool have_sizes = false;
    std::stringstream ss(text);
    std::string line;
    while (std::getline(ss, line)) {
        line = trim(line.substr(0, line.find('#')));
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) fail(ErrorCode::SpecInvalid, "expected key=value: '" + line + "'");
        const std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
        if (key == "seed")
            c.seed = parse_u64(value, "seed");
        else if (key == "field") {
            parse_field_spec(value);
            c.field = value;
        } else if (key == "family")
            c.family = parse_family(value);
        else if (key == "sizes") {
            c.sizes = parse_sizes(value);
            have_sizes = true;
        } else if (key == "instances")
            c.instances = parse_u64(value, "instances");
        else if (key == "checks")
            c.checks = split(value, ',');
        else if (key == "fixtures")
            c.fixtures = split(value, ',');
        else if (key == "csv")
            c.csv = value;
        else if (key == "json")
            c.json = value;
        else
            fail(ErrorCode::SpecInvalid, "unknown key '" + key + "'");
    }
    if (!have_sizes) fail(ErrorCode::SpecInvalid, "sizes missing");
    return c;
}

// ---------------------------------------------------------------------------
// Checks

namespace {

const FiniteSet& set_of(const Instance& inst) {
    if (const auto* s = std::get_if<FiniteSet>(&inst)) return *s;
    fail(ErrorCode::PreconditionFailed, "check needs a set instance");
}

// A companion set of the same size drawn from the field.
FiniteSet companion(const FiniteSet& A, SplitMix64& rng) {
    const Field& F = A.field();
    std::uint64_t n = A.size();
    if (F.is_finite()) n = std::min<std::uint64_t>(n, F.order());
    return random_set(F, std::max<std::uint64_t>(n, 1), rng);
}

// Keeps each edge of A x B with probability keep/den, at least one edge.
PairGraph random_graph(const FiniteSet& A, const FiniteSet& B, SplitMix64& rng, std::uint64_t keep, std::uint64_t den) {
    std::vector<setcore::Edge> edges;
    for (std::uint32_t i = 0; i < A.size(); ++i)
        for (std::uint32_t j = 0; j < B.size(); ++j)
            if (rng.below(den) < keep) edges.emplace_back(i, j);
    if (edges.empty()) edges.emplace_back(0, 0);
    return PairGraph(A, B, edges);
}

// Drops exactly floor(|A||B|/16) random edges, so |G| >= (15/16)|A||B|.
PairGraph dense_graph(const FiniteSet& A, const FiniteSet& B, SplitMix64& rng) {
    std::vector<setcore::Edge> edges;
    for (std::uint32_t i = 0; i < A.size(); ++i)
        for (std::uint32_t j = 0; j < B.size(); ++j) edges.emplace_back(i, j);
    for (std::size_t drop = edges.size() / 16; drop > 0; --drop) {
        const auto k = rng.below(edges.size());
        edges.erase(edges.begin() + static_cast<long>(k));
    }
    return PairGraph(A, B, edges);
}

FiniteSet without_zero(const FiniteSet& A) { return A.without(A.field().zero()); }

FiniteSet pipeline_input(const FiniteSet& A) {
    const Field& F = A.field();
    return A.without(F.zero()).without(F.neg(F.one()));
}

Certificate energy_identities(const FiniteSet& A, const FiniteSet& B, SplitMix64& rng) {
    Certificate cert;
    cert.lemma = "energy identities";
    const Rational E = Q(setcore::energy(A, B, setcore::EnergyKind::Additive));
    const Rational mu = Q(setcore::multiplicity(A, B, Op::Sum).sum_of_squares());
    const Rational tr = Q(setcore::energy_by_translates(A, B));
    const Rational in = Q(setcore::energy_by_intersections(A, B));
    const Rational full = Q(setcore::graph_energy(PairGraph::complete(A, B), Op::Sum));
    const PairGraph G = random_graph(A, B, rng, 1, 2);
    const setcore::MultiplicityMap muG = setcore::multiplicity(G, Op::Sum);
    std::uint64_t over_edges = 0;
    for (auto [i, j] : G.edges()) {
        const Element s = A.field().add(A[i], B[j]);
        for (const auto& [x, m] : muG.entries())
            if (x == s) over_edges += m;
    }
    const Rational EG = Q(setcore::graph_energy(G, Op::Sum));
    cert.set("E", E);
    cert.set("E_G", EG);
    auto equal = [&](const std::string& name, const Rational& x, const Rational& y) {
        cert.require(name, x, y);
        cert.require(name + " (reverse)", y, x);
    };
    equal("E=sum mu^2", E, mu);
    equal("E=sum_x |A n (x-B)|^2", E, tr);
    equal("E=sum |(B+a) n (B+a')|", E, in);
    equal("E=E(complete graph)", E, full);
    equal("E_G=sum mu_G^2", EG, Q(muG.sum_of_squares()));
    equal("E_G=sum_(a,b) mu_G(a+b)", EG, Q(over_edges));
    return cert;
}

Certificate energy_cs(const FiniteSet& A, const FiniteSet& B, SplitMix64& rng) {
    const PairGraph G = random_graph(A, B, rng, 3, 4);
    Certificate cert;
    cert.lemma = "energy Cauchy-Schwarz";
    const Rational E = Q(setcore::energy(A, B, setcore::EnergyKind::Additive));
    const Rational EG = Q(setcore::graph_energy(G, Op::Sum));
    const Rational S = Q(setcore::partial_pairwise_set(G, Op::Sum).size());
    const Rational g = Q(G.size());
    cert.set("|G|", g);
    cert.set("|A+^GB|", S);
    cert.require("E_G<=E", EG, E);
    cert.require("|G|^2<=|A+^GB|E_G", g * g, S * EG);
    return cert;
}

Certificate multiplicative_energy(const FiniteSet& A) {
    const FiniteSet A0 = without_zero(A);
    if (A0.empty()) fail(ErrorCode::EmptyInput, "A has no nonzero elements");
    Certificate cert;
    cert.lemma = "multiplicative energy";
    const Rational E = Q(setcore::energy(A0, A0, setcore::EnergyKind::Multiplicative));
    const Rational P = Q(setcore::pairwise_set(A0, A0, Op::Product).size());
    cert.set("E_x", E);
    cert.set("|AA|", P);
    cert.require("|A|^4<=E_x|AA|", exact::pow(Q(A0.size()), 4), E * P);
    return cert;
}

Certificate elekes_growth(const FiniteSet& A) {
    Certificate cert;
    cert.lemma = "Elekes growth";
    cert.constants_suppressed = true;
    const Rational s = Q(setcore::pairwise_set(A, A, Op::Sum).size());
    const Rational p = Q(setcore::pairwise_set(A, A, Op::Product).size());
    const Rational m = std::max(s, p);
    cert.set("|A+A|", s);
    cert.set("|AA|", p);
    cert.monitor("|A|^5<=max(|A+A|,|AA|)^4", exact::pow(Q(A.size()), 5), exact::pow(m, 4));
    return cert;
}

const IncidenceInstance incidence_of(const Instance& inst) {
    if (const auto* I = std::get_if<IncidenceInstance>(&inst)) return *I;
    return incidence::elekes_config(std::get<FiniteSet>(inst)).instance;
}

using CheckFn = std::function<std::vector<Certificate>(const Instance&, SplitMix64&)>;

const std::map<std::string, CheckFn>& registry() {
    static const std::map<std::string, CheckFn> checks{
        {"energy_identities",
         [](const Instance& inst, SplitMix64& rng) {
             const FiniteSet& A = set_of(inst);
             return std::vector<Certificate>{energy_identities(A, companion(A, rng), rng)};
         }},
        {"energycs1",
         [](const Instance& inst, SplitMix64& rng) {
             const FiniteSet& A = set_of(inst);
             return std::vector<Certificate>{energy_cs(A, companion(A, rng), rng)};
         }},
        {"ruzsa_triangle",
         [](const Instance& inst, SplitMix64& rng) {
             const FiniteSet& A = set_of(inst);
             const FiniteSet B = companion(A, rng), C = companion(A, rng);
             return std::vector<Certificate>{calculus::ruzsa_triangle_check(A, B, C)};
         }},
        {"plunnecke",
         [](const Instance& inst, SplitMix64& rng) {
             const FiniteSet& A = set_of(inst);
             const auto k = static_cast<unsigned>(1 + rng.below(3));
             return std::vector<Certificate>{calculus::plunnecke_check(A, companion(A, rng), k).cert};
         }},
        {"multiplicative_energy",
         [](const Instance& inst, SplitMix64&) { return std::vector<Certificate>{multiplicative_energy(set_of(inst))}; }},
        {"incidence_bounds",
         [](const Instance& inst, SplitMix64&) {
             return std::vector<Certificate>{incidence::incidence_invariants(incidence_of(inst))};
         }},
        {"beck",
         [](const Instance& inst, SplitMix64&) {
             const IncidenceInstance I = incidence_of(inst);
             Certificate cert = incidence::beck_report(I.field(), I.points());
             // Every pair of points lies on exactly one determined line.
             Rational pairs = 0;
             for (const auto mu : incidence::lines_determined(I.field(), I.points()).mu) pairs += Q(mu) * Q(mu - 1) / 2;
             const Rational n = cert.get("|P|");
             cert.require("sum C(mu,2)<=C(|P|,2)", pairs, n * (n - 1) / 2);
             cert.require("C(|P|,2)<=sum C(mu,2)", n * (n - 1) / 2, pairs);
             return std::vector<Certificate>{cert};
         }},
        {"elekes_growth",
         [](const Instance& inst, SplitMix64&) { return std::vector<Certificate>{elekes_growth(set_of(inst))}; }},
        {"rudnev",
         [](const Instance& inst, SplitMix64&) { return std::vector<Certificate>{incidence::rudnev_check(set_of(inst))}; }},
        {"partial_sumproduct_v1",
         [](const Instance& inst, SplitMix64& rng) {
             const FiniteSet& A = set_of(inst);
             return std::vector<Certificate>{
                 incidence::partial_sumproduct_check(random_graph(A, A, rng, 3, 4), incidence::PartialVersion::V1)};
         }},
        {"partial_sumproduct_v2",
         [](const Instance& inst, SplitMix64& rng) {
             const FiniteSet& A = set_of(inst);
             return std::vector<Certificate>{
                 incidence::partial_sumproduct_check(random_graph(A, A, rng, 3, 4), incidence::PartialVersion::V2)};
         }},
        {"bsg_dense",
         [](const Instance& inst, SplitMix64& rng) {
             const FiniteSet& A = set_of(inst);
             return std::vector<Certificate>{calculus::bsg_dense(dense_graph(A, companion(A, rng), rng), Rational(1, 16)).cert};
         }},
        {"cover_variation1",
         [](const Instance& inst, SplitMix64& rng) {
             const FiniteSet& A = set_of(inst);
             const auto v = calculus::cover_variation1(dense_graph(A, companion(A, rng), rng), Rational(1, 16));
             return std::vector<Certificate>{v.plus.cert, v.minus.cert};
         }},
        {"cover_variation2",
         [](const Instance& inst, SplitMix64& rng) {
             const FiniteSet& A = set_of(inst);
             return std::vector<Certificate>{
                 calculus::cover_variation2(dense_graph(A, companion(A, rng), rng), Rational(1, 16)).cover.cert};
         }},
        {"psi_injection",
         [](const Instance& inst, SplitMix64& rng) {
             const FiniteSet A = without_zero(set_of(inst));
             const FiniteSet B = without_zero(companion(A, rng));
             return std::vector<Certificate>{expander::psi_injection_engine(A, B).cert};
         }},
        {"corollary_horrific",
         [](const Instance& inst, SplitMix64&) {
             return std::vector<Certificate>{
                 expander::corollary_pipeline(pipeline_input(set_of(inst)), expander::Corollary::Horrific).cert};
         }},
        {"corollary_energy",
         [](const Instance& inst, SplitMix64&) {
             return std::vector<Certificate>{
                 expander::corollary_pipeline(pipeline_input(set_of(inst)), expander::Corollary::Energy).cert};
         }},
        {"corollary_energyprime",
         [](const Instance& inst, SplitMix64&) {
             return std::vector<Certificate>{
                 expander::corollary_pipeline(pipeline_input(set_of(inst)), expander::Corollary::EnergyPrime).cert};
         }},
        {"crossratio_bridge",
         [](const Instance& inst, SplitMix64&) {
             const FiniteSet& A = set_of(inst);
             std::vector<Certificate> out{
                 expander::energy_incidence_bridge(A, expander::EnergyVariant::Three).cert};
             if (A.size() >= 3) out.push_back(expander::energy_incidence_bridge(A, expander::EnergyVariant::Four).cert);
             return out;
         }},
        {"ff_sumproduct",
         [](const Instance& inst, SplitMix64&) {
             return std::vector<Certificate>{ffield::ff_sumproduct_certificate(set_of(inst))};
         }},
        {"separable_growth",
         [](const Instance& inst, SplitMix64&) {
             const FiniteSet& A = set_of(inst);
             const auto chain = ffield::max_chain(A);
             const auto strict = ffield::separable_from_chain(A, FiniteSet(A.field(), chain.chain));
             std::vector<Certificate> out{strict.cert};
             for (unsigned k = 2; k <= 3; ++k) out.push_back(ffield::separable_growth_check(strict.separable, k));
             return out;
         }},
        {"good_quadruples",
         [](const Instance& inst, SplitMix64&) {
             const FiniteSet& A = set_of(inst);
             std::vector<Certificate> out;
             for (unsigned j = 0; (std::uint64_t{1} << j) <= A.size(); ++j)
                 out.push_back(ffield::good_quadruple_audit(A, j).cert);
             return out;
         }},
    };
    return checks;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
    return out + "\"";
}

std::string format_double(double x) {
    if (std::isinf(x)) return "inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

std::vector<Row> rows_of(const Certificate& cert, std::uint64_t instance, std::uint64_t size, std::uint64_t seed,
                         const std::string& check) {
    std::vector<Row> rows;
    for (const auto& b : cert.bounds)
        rows.push_back({instance, size, seed, check, cert.lemma, b.name, b.lhs, b.rhs, b.monitor, cert.constants_suppressed});
    return rows;
}

struct InstanceOutcome {
    std::vector<Row> rows;
    std::vector<Skip> skipped;
};

}  // namespace

double Row::ratio() const {
    if (sgn(lhs) == 0) return std::numeric_limits<double>::infinity();
    return exact::to_double(rhs / lhs);
}

std::uint64_t Report::violations() const {
    return static_cast<std::uint64_t>(
        std::count_if(rows.begin(), rows.end(), [](const Row& r) { return !r.monitor && !r.holds(); }));
}

std::string Report::csv() const {
    std::string out = "instanceId,size,seed,check,lemma,bound,lhs,rhs,ratio,holds,kind,constantsSuppressed\n";
    for (const auto& r : rows) {
        out += std::to_string(r.instance) + "," + std::to_string(r.size) + "," + std::to_string(r.seed) + "," +
               csv_field(r.check) + "," + csv_field(r.lemma) + "," + csv_field(r.bound) + "," +
               exact::to_string(r.lhs) + "," + exact::to_string(r.rhs) + "," + format_double(r.ratio()) + "," +
               (r.holds() ? "true" : "false") + "," + (r.monitor ? "monitor" : "invariant") + "," +
               (r.constants_suppressed ? "true" : "false") + "\n";
    }
    return out;
}

std::vector<std::string> check_names() {
    std::vector<std::string> out;
    for (const auto& [name, fn] : registry()) out.push_back(name);
    return out;
}

Json summarize(const Campaign& c, const std::vector<Row>& rows, const std::vector<Skip>& skipped) {
    Json per = Json::object();
    std::map<std::string, std::vector<double>> ratios;
    std::uint64_t violations = 0, misses = 0;
    for (const auto& name : c.checks) per[name] = {{"rows", 0}, {"violations", 0}, {"monitor_misses", 0}, {"skipped", 0}};
    if (!c.fixtures.empty()) per["fixture"] = {{"rows", 0}, {"violations", 0}, {"monitor_misses", 0}, {"skipped", 0}};
    for (const auto& r : rows) {
        auto& e = per[r.check];
        e["rows"] = e["rows"].get<std::uint64_t>() + 1;
        if (!r.holds()) {
            const char* key = r.monitor ? "monitor_misses" : "violations";
            e[key] = e[key].get<std::uint64_t>() + 1;
            (r.monitor ? misses : violations) += 1;
        }
        if (const double x = r.ratio(); !std::isinf(x)) ratios[r.check].push_back(x);
    }
    for (const auto& s : skipped) per[s.check]["skipped"] = per[s.check]["skipped"].get<std::uint64_t>() + 1;
    for (auto& [name, e] : per.items()) {
        auto& v = ratios[name];
        if (v.empty()) {
            e["median_ratio"] = nullptr;
            continue;
        }
        std::sort(v.begin(), v.end());
        e["median_ratio"] = format_double(v.size() % 2 ? v[v.size() / 2] : (v[v.size() / 2 - 1] + v[v.size() / 2]) / 2);
    }
    Json sk = Json::array();
    for (const auto& s : skipped) sk.push_back({{"instance", s.instance}, {"check", s.check}, {"reason", s.reason}});
    return {{"campaign",
             {{"seed", c.seed},
              {"field", c.field},
              {"family", to_string(c.family)},
              {"sizes", c.sizes},
              {"instances", c.instances},
              {"checks", c.checks}}},
            {"rows", rows.size()},
            {"violations", violations},
            {"monitor_misses", misses},
            {"skipped", sk},
            {"checks", per}};
}

Report run_campaign(const Campaign& c) {
    for (const auto& name : c.checks)
        if (!registry().count(name)) fail(ErrorCode::UnknownCheck, "unknown check '" + name + "'");
    const Field F = parse_field_spec(c.field);

    struct Job {
        std::uint64_t id, size, seed;
    };
    std::vector<Job> jobs;
    for (const auto size : c.sizes)
        for (std::uint64_t k = 0; k < c.instances; ++k) {
            const std::uint64_t id = jobs.size();
            jobs.push_back({id, size, derive_seed(c.seed, id)});
        }

    auto run = [&](const Job& job) {
        InstanceOutcome out;
        if (c.checks.empty()) return out;
        const Instance inst = generate(c.family, F, job.size, job.seed);
        for (std::size_t i = 0; i < c.checks.size(); ++i) {
            const std::string& name = c.checks[i];
            SplitMix64 rng(derive_seed(job.seed, i));
            try {
                for (const auto& cert : registry().at(name)(inst, rng)) {
                    auto rows = rows_of(cert, job.id, job.size, job.seed, name);
                    out.rows.insert(out.rows.end(), rows.begin(), rows.end());
                }
            } catch (const Error& e) {
                out.skipped.push_back({job.id, name, e.what()});
            }
        }
        return out;
    };

    // Instances run concurrently; results are assembled in instance order.
    std::vector<InstanceOutcome> outcomes(jobs.size());
    const std::size_t width = std::max(1u, std::min(8u, std::thread::hardware_concurrency()));
    for (std::size_t start = 0; start < jobs.size(); start += width) {
        std::vector<std::future<InstanceOutcome>> batch;
        for (std::size_t k = start; k < std::min(jobs.size(), start + width); ++k)
            batch.push_back(std::async(std::launch::async, run, jobs[k]));
        for (std::size_t k = 0; k < batch.size(); ++k) outcomes[start + k] = batch[k].get();
    }

    Report report;
    for (auto& o : outcomes) {
        report.rows.insert(report.rows.end(), o.rows.begin(), o.rows.end());
        report.skipped.insert(report.skipped.end(), o.skipped.begin(), o.skipped.end());
    }
    for (std::size_t k = 0; k < c.fixtures.size(); ++k) {
        Certificate cert;
        try {
            cert = Certificate::from_json(Json::parse(io::read_file(c.fixtures[k])));
        } catch (const Json::exception& e) {
            fail(ErrorCode::IOFailure, "cannot parse fixture " + c.fixtures[k] + ": " + e.what());
        }
        auto rows = rows_of(cert, jobs.size() + k, 0, 0, "fixture");
        report.rows.insert(report.rows.end(), rows.begin(), rows.end());
    }
    report.summary = summarize(c, report.rows, report.skipped);
    if (!c.csv.empty()) io::write_file(c.csv, report.csv());
    if (!c.json.empty()) io::write_file(c.json, report.summary.dump(2) + "\n");
    return report;
}

// ---------------------------------------------------------------------------
// Growth scans

std::string GrowthScan::csv() const {
    std::string out = "family,field,size,fSize,gSize,hSize,expF,expG,expH,seed,sumSize,productSize,elekes\n";
    for (const auto& r : rows)
        out += csv_field(r.family) + "," + csv_field(r.field) + "," + std::to_string(r.n) + "," + std::to_string(r.f) +
               "," + std::to_string(r.g) + "," + (r.h ? std::to_string(*r.h) : "") + "," + format_double(r.exp_f) + "," +
               format_double(r.exp_g) + "," + (r.h ? format_double(r.exp_h) : "") + "," + std::to_string(r.seed) + "," +
               std::to_string(r.sum) + "," + std::to_string(r.product) + "," + (r.elekes ? "true" : "false") + "\n";
    return out;
}

GrowthScan growth_scan(Family family, const Field& F, const std::vector<std::uint64_t>& sizes, std::uint64_t seed) {
    GrowthScan scan;
    for (std::size_t i = 0; i < sizes.size(); ++i) {
        const std::uint64_t n = sizes[i];
        if (n > 64) fail(ErrorCode::BudgetExceeded, "growth scans run on |A| <= 64");
        const std::uint64_t s = derive_seed(seed, i);
        const Instance inst = generate(family, F, n, s);
        const auto* A = std::get_if<FiniteSet>(&inst);
        if (!A) fail(ErrorCode::SpecInvalid, "growth scans need a set family");
        const expander::GrowthReport g = expander::growth_report(*A, to_string(family), A->size() <= 24);
        GrowthRow row{g.family, g.field, g.n, s, 0, 0, g.f, g.g, g.h, g.exp_f, g.exp_g, g.exp_h, false};
        row.sum = setcore::pairwise_set(*A, *A, Op::Sum).size();
        row.product = setcore::pairwise_set(*A, *A, Op::Product).size();
        row.elekes = exact::pow(Q(std::max(row.sum, row.product)), 4) >= exact::pow(Q(row.n), 5);
        scan.rows.push_back(std::move(row));
    }
    return scan;
}

}  // namespace growthlab::harness
