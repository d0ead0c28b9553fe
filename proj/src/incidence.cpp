#include "growthlab/incidence.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <map>
#include <optional>

#include "growthlab/error.hpp"
#include "growthlab/numtheory.hpp"

namespace growthlab::incidence {

using projective::ProjMap;
using setcore::EnergyKind;
using setcore::FiniteSet;
using setcore::Op;
using setcore::PairGraph;

namespace {

Rational Q(std::uint64_t v) { return Rational(BigInt(static_cast<unsigned long>(v))); }
BigInt Z(std::uint64_t v) { return BigInt(static_cast<unsigned long>(v)); }

std::vector<std::uint32_t> intersect(const std::vector<std::uint32_t>& a, const std::vector<std::uint32_t>& b) {
    std::vector<std::uint32_t> out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

[[noreturn]] void hypothesis(const std::string& which, const std::string& detail) {
    fail(ErrorCode::HypothesisFailed, which + ": " + detail);
}

Element element_from_json(const Field& F, const Json& j) {
    if (j.is_number_integer()) return F.from_int(j.get<long long>());
    if (j.is_string()) return F.parse_element(j.get<std::string>());
    fail(ErrorCode::ParseError, "coordinate must be an integer or a string");
}

// Largest x with x^3 <= N.
std::uint64_t icbrt(std::uint64_t N) {
    auto n = static_cast<std::uint64_t>(std::cbrt(static_cast<double>(N)));
    while (n > 0 && n * n * n > N) --n;
    while ((n + 1) * (n + 1) * (n + 1) <= N) ++n;
    return n;
}

std::vector<std::uint64_t> degrees(const IncidenceInstance& inst) {
    std::vector<std::uint64_t> d(inst.points().size());
    for (std::uint32_t i = 0; i < d.size(); ++i) d[i] = inst.lines_of(i).size();
    return d;
}

// True when min >= 1 and max <= factor * min.
bool regular(const std::vector<std::uint64_t>& deg, unsigned factor, std::uint64_t& mn, std::uint64_t& mx) {
    mn = deg.empty() ? 0 : *std::min_element(deg.begin(), deg.end());
    mx = deg.empty() ? 0 : *std::max_element(deg.begin(), deg.end());
    return mn >= 1 && mx <= factor * mn;
}

void absorb(Certificate& into, const Certificate& from, const std::string& prefix) {
    for (const auto& [name, v] : from.quantities) into.set(prefix + name, v);
    for (const auto& b : from.bounds) {
        if (b.monitor)
            into.monitor(prefix + b.name, b.lhs, b.rhs);
        else
            into.require(prefix + b.name, b.lhs, b.rhs);
    }
}

}  // namespace

AffinePoint make_point(const Field& F, long long x, long long y) { return {F.from_int(x), F.from_int(y)}; }

AffineLine make_line(const Field& F, const Element& a, const Element& b, const Element& c) {
    F.check(a);
    F.check(b);
    F.check(c);
    if (F.is_zero(a) && F.is_zero(b)) fail(ErrorCode::InvalidArgument, "a line needs (a,b) != (0,0)");
    const Element s = F.inv(F.is_zero(a) ? b : a);
    return {F.mul(a, s), F.mul(b, s), F.mul(c, s)};
}

AffineLine make_line(const Field& F, long long a, long long b, long long c) {
    return make_line(F, F.from_int(a), F.from_int(b), F.from_int(c));
}

AffineLine slope_line(const Field& F, const Element& m, const Element& s) {
    return make_line(F, m, F.neg(F.one()), s);
}

AffineLine line_through(const Field& F, const AffinePoint& p, const AffinePoint& q) {
    if (p == q) fail(ErrorCode::InvalidArgument, "line through a repeated point");
    return make_line(F, F.sub(p.y, q.y), F.sub(q.x, p.x), F.sub(F.mul(p.x, q.y), F.mul(q.x, p.y)));
}

bool incident(const Field& F, const AffinePoint& p, const AffineLine& l) {
    return F.is_zero(F.add(F.add(F.mul(l.a, p.x), F.mul(l.b, p.y)), l.c));
}

ProjPoint to_proj(const Field& F, const AffinePoint& p) { return ProjPoint(F, {p.x, p.y, F.one()}); }
ProjHyperplane to_proj(const Field& F, const AffineLine& l) { return ProjHyperplane(F, {l.a, l.b, l.c}); }

std::string format(const Field& F, const AffinePoint& p) { return "(" + F.format(p.x) + "," + F.format(p.y) + ")"; }

std::string format(const Field& F, const AffineLine& l) {
    return "[" + F.format(l.a) + "," + F.format(l.b) + "," + F.format(l.c) + "]";
}

// ---------------------------------------------------------------------------
// IncidenceInstance

IncidenceInstance::IncidenceInstance(Field field, std::vector<AffinePoint> points, std::vector<AffineLine> lines)
    : field_(std::move(field)), points_(std::move(points)), lines_(std::move(lines)) {
    for (const auto& p : points_) {
        field_.check(p.x);
        field_.check(p.y);
    }
    for (auto& l : lines_) l = make_line(field_, l.a, l.b, l.c);
    std::sort(points_.begin(), points_.end());
    points_.erase(std::unique(points_.begin(), points_.end()), points_.end());
    std::sort(lines_.begin(), lines_.end());
    lines_.erase(std::unique(lines_.begin(), lines_.end()), lines_.end());
    if (points_.size() >= (std::size_t{1} << 32) || lines_.size() >= (std::size_t{1} << 32))
        fail(ErrorCode::BudgetExceeded, "instance too large");
    build_index();
}

void IncidenceInstance::build_index() {
    const Field& F = field_;
    // Points sorted by (x,y) come in runs of equal x.
    std::vector<std::pair<std::size_t, std::size_t>> runs;
    for (std::size_t i = 0; i < points_.size();) {
        std::size_t k = i;
        while (k < points_.size() && points_[k].x == points_[i].x) ++k;
        runs.emplace_back(i, k);
        i = k;
    }
    points_of_.assign(lines_.size(), {});
    lines_of_.assign(points_.size(), {});
    incidences_ = 0;
    for (std::uint32_t j = 0; j < lines_.size(); ++j) {
        const AffineLine& l = lines_[j];
        auto& on = points_of_[j];
        if (F.is_zero(l.b)) {
            // a = 1: the vertical line x = -c.
            const Element x = F.neg(l.c);
            auto it = std::lower_bound(runs.begin(), runs.end(), x,
                                       [&](const auto& r, const Element& v) { return points_[r.first].x < v; });
            if (it != runs.end() && points_[it->first].x == x)
                for (std::size_t i = it->first; i < it->second; ++i) on.push_back(static_cast<std::uint32_t>(i));
        } else {
            const Element binv = F.inv(l.b);
            for (auto [lo, hi] : runs) {
                const Element& x = points_[lo].x;
                const Element y = F.neg(F.mul(F.add(F.mul(l.a, x), l.c), binv));
                auto first = points_.begin() + static_cast<std::ptrdiff_t>(lo);
                auto last = points_.begin() + static_cast<std::ptrdiff_t>(hi);
                auto it = std::lower_bound(first, last, y, [](const AffinePoint& p, const Element& v) { return p.y < v; });
                if (it != last && it->y == y) on.push_back(static_cast<std::uint32_t>(it - points_.begin()));
            }
        }
        for (auto i : on) lines_of_[i].push_back(j);
        incidences_ += on.size();
    }
}

std::size_t IncidenceInstance::point_index(const AffinePoint& p) const {
    auto it = std::lower_bound(points_.begin(), points_.end(), p);
    return it != points_.end() && *it == p ? static_cast<std::size_t>(it - points_.begin()) : points_.size();
}

std::size_t IncidenceInstance::line_index(const AffineLine& l) const {
    auto it = std::lower_bound(lines_.begin(), lines_.end(), l);
    return it != lines_.end() && *it == l ? static_cast<std::size_t>(it - lines_.begin()) : lines_.size();
}

IncidenceInstance IncidenceInstance::restrict_points(const std::vector<std::uint32_t>& subset) const {
    std::vector<AffinePoint> P;
    P.reserve(subset.size());
    for (auto i : subset) P.push_back(points_.at(i));
    return IncidenceInstance(field_, std::move(P), lines_);
}

bool IncidenceInstance::revalidate() const { return incidence_count(field_, points_, lines_) == incidences_; }

Json IncidenceInstance::to_json() const {
    Json pts = Json::array(), lns = Json::array();
    for (const auto& p : points_) pts.push_back({field_.format(p.x), field_.format(p.y)});
    for (const auto& l : lines_) lns.push_back({field_.format(l.a), field_.format(l.b), field_.format(l.c)});
    return {{"field", field_.name()}, {"points", pts}, {"lines", lns}};
}

IncidenceInstance IncidenceInstance::from_json(const Json& j) {
    if (!j.is_object() || !j.contains("field")) fail(ErrorCode::ParseError, "instance needs a field");
    const Field F = Field::parse(j.at("field").get<std::string>());
    std::vector<AffinePoint> P;
    std::vector<AffineLine> L;
    for (const auto& p : j.value("points", Json::array())) {
        if (!p.is_array() || p.size() != 2) fail(ErrorCode::ParseError, "points are [x,y]");
        P.push_back({element_from_json(F, p[0]), element_from_json(F, p[1])});
    }
    for (const auto& l : j.value("lines", Json::array())) {
        if (!l.is_array() || l.size() != 3) fail(ErrorCode::ParseError, "lines are [a,b,c]");
        L.push_back(make_line(F, element_from_json(F, l[0]), element_from_json(F, l[1]), element_from_json(F, l[2])));
    }
    return IncidenceInstance(F, std::move(P), std::move(L));
}

std::uint64_t incidence_count(const Field& F, const std::vector<AffinePoint>& P, const std::vector<AffineLine>& L) {
    std::uint64_t I = 0;
    for (const auto& p : P)
        for (const auto& l : L) I += incident(F, p, l);
    return I;
}

DeterminedLines lines_determined(const Field& F, const std::vector<AffinePoint>& P0) {
    std::vector<AffinePoint> P = P0;
    std::sort(P.begin(), P.end());
    P.erase(std::unique(P.begin(), P.end()), P.end());
    if (P.size() < 2) fail(ErrorCode::TooFewPoints, "L(P) needs two points");
    std::vector<AffineLine> all;
    all.reserve(P.size() * (P.size() - 1) / 2);
    for (std::size_t i = 0; i < P.size(); ++i)
        for (std::size_t k = i + 1; k < P.size(); ++k) all.push_back(line_through(F, P[i], P[k]));
    std::sort(all.begin(), all.end());
    DeterminedLines out;
    for (std::size_t i = 0; i < all.size();) {
        std::size_t k = i;
        while (k < all.size() && all[k] == all[i]) ++k;
        // A line with m points appears m(m-1)/2 times.
        const std::uint64_t pairs = k - i;
        std::uint64_t m = 2;
        while (m * (m - 1) / 2 < pairs) ++m;
        out.lines.push_back(all[i]);
        out.mu.push_back(m);
        i = k;
    }
    return out;
}

RichFilter rich_filter(const IncidenceInstance& inst, Side side) {
    RichFilter out;
    out.total = inst.incidences();
    if (out.total == 0) fail(ErrorCode::NoIncidences, "I(P,L) = 0");
    const bool points = side == Side::Points;
    const std::size_t n = points ? inst.points().size() : inst.lines().size();
    for (std::uint32_t i = 0; i < n; ++i) {
        const std::uint64_t d = points ? inst.lines_of(i).size() : inst.points_of(i).size();
        if (2 * n * d >= out.total) {
            out.kept.push_back(i);
            out.incidences += d;
        }
    }
    out.cert.lemma = points ? "rich points" : "rich lines";
    out.cert.set("I", Q(out.total));
    out.cert.set("kept", Q(out.kept.size()));
    out.cert.set("I_kept", Q(out.incidences));
    out.cert.require("I<=2I_kept", Q(out.total), 2 * Q(out.incidences));
    return out;
}

DyadicClass dyadic_classes(const std::vector<std::uint64_t>& values) {
    if (values.empty()) fail(ErrorCode::EmptyInput, "no values");
    std::map<unsigned, DyadicClass> classes;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (values[i] == 0) fail(ErrorCode::InvalidArgument, "dyadic classes need positive values");
        const unsigned j = static_cast<unsigned>(std::bit_width(values[i]) - 1);
        auto& c = classes[j];
        c.j = j;
        c.members.push_back(i);
        c.mass += values[i];
    }
    const DyadicClass* best = nullptr;
    for (const auto& [j, c] : classes)
        if (!best || c.mass > best->mass) best = &c;
    return *best;
}

// ---------------------------------------------------------------------------
// Constructions

Construction extremal_grid(const Field& F, std::uint64_t N) {
    const std::uint64_t n = icbrt(N);
    if (N == 0 || n * n * n != N) fail(ErrorCode::NotACube, std::to_string(N) + " is not a positive cube");
    if (const std::uint64_t p = F.characteristic(); p != 0) {
        // N < (p/2)^{3/2}, i.e. 8N^2 < p^3; then 2n^2 < p and all coordinates are distinct.
        if (8 * Z(N) * Z(N) >= Z(p) * Z(p) * Z(p))
            fail(ErrorCode::FieldTooSmall, "need N < (p/2)^{3/2}");
    }
    std::vector<AffinePoint> P;
    for (std::uint64_t x = 1; x <= n; ++x)
        for (std::uint64_t y = 1; y <= 2 * n * n; ++y)
            P.push_back(make_point(F, static_cast<long long>(x), static_cast<long long>(y)));
    std::vector<AffineLine> L;
    for (std::uint64_t r = 1; r <= n; ++r)
        for (std::uint64_t s = 1; s <= n * n; ++s)
            L.push_back(slope_line(F, F.from_int(static_cast<long long>(r)), F.from_int(static_cast<long long>(s))));
    Construction out{IncidenceInstance(F, std::move(P), std::move(L)), {}};
    const auto& inst = out.instance;
    auto& cert = out.cert;
    cert.lemma = "extremal grid";
    cert.instance = {{"field", F.name()}, {"N", N}};
    const std::uint64_t I = inst.incidences();
    cert.set("|P|", Q(inst.points().size()));
    cert.set("|L|", Q(inst.lines().size()));
    cert.set("I", Q(I));
    cert.require("|P|=2N", Q(inst.points().size()), Q(2 * N));
    cert.require("2N=|P|", Q(2 * N), Q(inst.points().size()));
    cert.require("|L|=N", Q(inst.lines().size()), Q(N));
    cert.require("N=|L|", Q(N), Q(inst.lines().size()));
    cert.require("I=N^{4/3}", Q(I), Q(N * n));
    cert.require("N^{4/3}=I", Q(N * n), Q(I));
    std::uint64_t lo = n, hi = n;
    for (std::uint32_t j = 0; j < inst.lines().size(); ++j) {
        lo = std::min<std::uint64_t>(lo, inst.points_of(j).size());
        hi = std::max<std::uint64_t>(hi, inst.points_of(j).size());
    }
    cert.require("n<=min|l|", Q(n), Q(lo));
    cert.require("max|l|<=n", Q(hi), Q(n));
    return out;
}

Construction elekes_config(const FiniteSet& A) {
    if (A.empty()) fail(ErrorCode::EmptyInput, "A is empty");
    const Field& F = A.field();
    const FiniteSet S = setcore::pairwise_set(A, A, Op::Sum);
    const FiniteSet Pr = setcore::pairwise_set(A, A, Op::Product);
    std::vector<AffinePoint> P;
    for (const auto& x : S)
        for (const auto& y : Pr) P.push_back({x, y});
    std::vector<AffineLine> L;
    for (const auto& a : A)
        for (const auto& b : A) L.push_back(slope_line(F, a, F.neg(F.mul(a, b))));
    Construction out{IncidenceInstance(F, std::move(P), std::move(L)), {}};
    const auto& inst = out.instance;

    // (b+c, ac) lies on y = a(x - b).
    std::vector<std::pair<std::size_t, std::size_t>> witnesses;
    for (const auto& a : A)
        for (const auto& b : A)
            for (const auto& c : A) {
                const std::size_t i = inst.point_index({F.add(b, c), F.mul(a, c)});
                const std::size_t j = inst.line_index(slope_line(F, a, F.neg(F.mul(a, b))));
                if (i == inst.points().size() || j == inst.lines().size() || !incident(F, inst.points()[i], inst.lines()[j]))
                    fail(ErrorCode::InvalidArgument, "witness incidence missing");
                witnesses.emplace_back(i, j);
            }
    std::sort(witnesses.begin(), witnesses.end());
    witnesses.erase(std::unique(witnesses.begin(), witnesses.end()), witnesses.end());

    auto& cert = out.cert;
    cert.lemma = "Elekes";
    cert.instance = {{"field", F.name()}, {"A", A.format()}};
    const std::uint64_t n = A.size(), I = inst.incidences();
    cert.set("|A|", Q(n));
    cert.set("|A+A|", Q(S.size()));
    cert.set("|AA|", Q(Pr.size()));
    cert.set("|P|", Q(inst.points().size()));
    cert.set("|L|", Q(inst.lines().size()));
    cert.set("I", Q(I));
    cert.set("witnesses", Q(witnesses.size()));
    cert.require("witnesses<=I", Q(witnesses.size()), Q(I));
    cert.require("|L||A|<=I", Q(inst.lines().size() * n), Q(I));
    // Without 0 the lines l_ab are distinct and so are the witnesses.
    if (!A.contains(F.zero())) cert.require("|A|^3<=I", Q(n * n * n), Q(witnesses.size()));
    const std::uint64_t mx = std::max(S.size(), Pr.size());
    cert.monitor("|A|^5<=max(|A+A|,|AA|)^4", exact::pow(Q(n), 5), exact::pow(Q(mx), 4));
    return out;
}

BourgainGaraev bourgain_garaev_set(std::uint64_t p, std::uint64_t N) {
    if (!fields::is_prime(p)) fail(ErrorCode::NotPrime, std::to_string(p) + " is not prime");
    if (N < 1 || N > p) fail(ErrorCode::InvalidArgument, "need 1 <= N <= p");
    const Field F = Field::prime(p);
    const std::uint64_t g = p == 2 ? 1 : fields::find_generator(p);
    std::uint64_t M = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(p) * static_cast<double>(N)));
    while (M * M < p * N) ++M;
    while (M > 0 && (M - 1) * (M - 1) >= p * N) --M;

    // Powers g^1..g^M and the windows {y+1..y+M}, both as residue sets.
    std::vector<char> powers(p, 0);
    std::uint64_t x = 1;
    for (std::uint64_t k = 1; k <= M && k <= p; ++k) {
        x = static_cast<std::uint64_t>((static_cast<unsigned __int128>(x) * g) % p);
        powers[x] = 1;
    }
    const std::uint64_t distinct_powers = static_cast<std::uint64_t>(std::count(powers.begin(), powers.end(), 1));
    const std::uint64_t W = std::min(M, p);
    std::uint64_t count = 0;
    for (std::uint64_t j = 1; j <= W; ++j) count += powers[j % p];
    std::uint64_t best = count, best_y = 0;
    for (std::uint64_t y = 1; y < p; ++y) {
        count -= powers[y % p];
        count += powers[(y + W) % p];
        if (count > best) best = count, best_y = y;
    }
    std::vector<Element> elems;
    for (std::uint64_t j = 1; j <= W; ++j)
        if (powers[(best_y + j) % p]) elems.push_back(std::uint64_t{(best_y + j) % p});
    std::sort(elems.begin(), elems.end());
    elems.resize(std::min<std::size_t>(elems.size(), N));

    BourgainGaraev out{FiniteSet(F, std::move(elems)), M, best_y, {}};
    const FiniteSet sums = setcore::pairwise_set(out.set, out.set, Op::Sum);
    const FiniteSet prods = setcore::pairwise_set(out.set, out.set, Op::Product);
    auto& cert = out.cert;
    cert.lemma = "Bourgain-Garaev";
    cert.instance = {{"p", p}, {"N", N}};
    cert.set("M", Q(M));
    cert.set("g", Q(g));
    cert.set("y", Q(best_y));
    cert.set("intersection", Q(best));
    cert.set("|A|", Q(out.set.size()));
    cert.set("|A+A|", Q(sums.size()));
    cert.set("|AA|", Q(prods.size()));
    // Averaging over the p windows.
    cert.require("|G_M|W<=p*intersection", Q(distinct_powers * W), Q(p * best));
    cert.require("|A+A|<=2M-1", Q(sums.size()), Q(2 * M - 1));
    cert.require("|AA|<=2M-1", Q(prods.size()), Q(2 * M - 1));
    cert.require("max(|A+A|,|AA|)<=2M+1", Q(std::max(sums.size(), prods.size())), Q(2 * M + 1));
    cert.monitor("N<=|A|", Q(N), Q(out.set.size()));
    return out;
}

// ---------------------------------------------------------------------------
// Foci

FocusCheck focus_check(const Field& F, const std::vector<AffinePoint>& P, const ProjPoint& f, std::uint64_t K) {
    require_same(F, f.field());
    if (f.dim() != 2) fail(ErrorCode::DimMismatch, "foci live in the projective plane");
    std::vector<ProjHyperplane> lines;
    for (const auto& p : P) {
        const ProjPoint q = to_proj(F, p);
        if (q == f) fail(ErrorCode::FocusInSet, "focus " + f.format() + " lies in P");
        const auto& u = f.coords();
        const auto& v = q.coords();
        lines.emplace_back(F, linalg::Vector{F.sub(F.mul(u[1], v[2]), F.mul(u[2], v[1])),
                                             F.sub(F.mul(u[2], v[0]), F.mul(u[0], v[2])),
                                             F.sub(F.mul(u[0], v[1]), F.mul(u[1], v[0]))});
    }
    std::sort(lines.begin(), lines.end());
    lines.erase(std::unique(lines.begin(), lines.end()), lines.end());
    FocusCheck out;
    out.ok = lines.size() <= K;
    out.lines = std::move(lines);
    return out;
}

FocusCheck focus_check(const Field& F, const std::vector<AffinePoint>& P, const AffinePoint& f, std::uint64_t K) {
    return focus_check(F, P, to_proj(F, f), K);
}

std::vector<AffinePoint> points_through_focus(const IncidenceInstance& inst, const AffinePoint& p) {
    if (inst.point_index(p) == inst.points().size()) fail(ErrorCode::NotInP, "p is not a point of P");
    std::vector<AffinePoint> out;
    for (const auto& q : inst.points())
        if (!(q == p) && inst.line_index(line_through(inst.field(), p, q)) != inst.lines().size()) out.push_back(q);
    return out;
}

std::vector<std::uint32_t> through(const IncidenceInstance& inst, std::uint32_t p) {
    // Two lines through p share only p, so the union is disjoint.
    std::vector<std::uint32_t> out;
    for (auto j : inst.lines_of(p))
        for (auto q : inst.points_of(j))
            if (q != p) out.push_back(q);
    std::sort(out.begin(), out.end());
    return out;
}

FocusResult find_focus(const IncidenceInstance& inst, unsigned regularity) {
    const auto deg = degrees(inst);
    std::uint64_t mn = 0, mx = 0;
    if (!regular(deg, regularity, mn, mx))
        fail(ErrorCode::RegularityViolated, "degrees range over [" + std::to_string(mn) + "," + std::to_string(mx) +
                                                "], factor " + std::to_string(regularity));
    const std::uint64_t n = inst.points().size(), m = inst.lines().size(), I = inst.incidences();

    const RichFilter L1 = rich_filter(inst, Side::Lines);
    std::vector<char> in_L1(m, 0);
    std::uint64_t min_rich = std::numeric_limits<std::uint64_t>::max();
    for (auto j : L1.kept) {
        in_L1[j] = 1;
        min_rich = std::min<std::uint64_t>(min_rich, inst.points_of(j).size());
    }
    std::vector<std::uint64_t> deg1(n, 0);
    for (std::uint32_t i = 0; i < n; ++i)
        for (auto j : inst.lines_of(i)) deg1[i] += in_L1[j];
    const std::uint64_t I1 = L1.incidences;

    FocusResult out;
    std::uint64_t I11 = 0;
    for (std::uint32_t i = 0; i < n; ++i)
        if (2 * n * deg1[i] >= I1) {
            out.rich.push_back(i);
            I11 += deg1[i];
        }

    // |P_pL| >= |P_pL1| >= deg_L1(p)(r_min - 1), read off the incidence lists.
    Rational worst_gap = Rational(std::numeric_limits<long>::min());
    out.min_through = std::numeric_limits<std::uint64_t>::max();
    for (auto i : out.rich) {
        std::uint64_t t = 0;
        for (auto j : inst.lines_of(i)) t += inst.points_of(j).size() - 1;
        out.through_sizes.push_back(t);
        out.min_through = std::min(out.min_through, t);
        worst_gap = std::max<Rational>(worst_gap, Q(deg1[i]) * (Q(min_rich) - 1) - Q(t));
    }

    const Rational K = Q(I) / Q(n);
    auto& cert = out.cert;
    cert.lemma = "finding individual foci";
    cert.set("|P|", Q(n));
    cert.set("|L|", Q(m));
    cert.set("I", Q(I));
    cert.set("K", K);
    cert.set("min_deg", Q(mn));
    cert.set("max_deg", Q(mx));
    cert.set("|L1|", Q(L1.kept.size()));
    cert.set("|P1|", Q(out.rich.size()));
    cert.set("min|P_pL|", Q(out.min_through));
    cert.require("I<=2I(P,L1)", Q(I), 2 * Q(I1));
    cert.require("I(P,L1)<=2I(P1,L1)", Q(I1), 2 * Q(I11));
    cert.require("I<=4max_deg|P1|", Q(I), 4 * Q(mx) * Q(out.rich.size()));
    cert.require("deg_L1(p)(r_min-1)-|P_pL|<=0", worst_gap, 0);
    cert.require("(K/4)(K|P|/2|L|-1)<=min|P_pL|", K / 4 * (K * Q(n) / (2 * Q(m)) - 1), Q(out.min_through));
    cert.monitor("|P|<=4|P1|", Q(n), 4 * Q(out.rich.size()));
    cert.monitor("K^2|P|/8|L|<=min|P_pL|", K * K * Q(n) / (8 * Q(m)), Q(out.min_through));
    return out;
}

PairedFoci find_paired_foci(const IncidenceInstance& inst, unsigned regularity) {
    const FocusResult s1 = find_focus(inst, regularity);
    PairedFoci out;
    std::size_t best = 0;
    for (std::size_t k = 1; k < s1.rich.size(); ++k)
        if (s1.through_sizes[k] > s1.through_sizes[best]) best = k;
    out.p1 = s1.rich[best];
    const auto T1 = through(inst, out.p1);
    if (T1.empty()) fail(ErrorCode::NoIncidences, "the first focus sees no other point");

    const IncidenceInstance sub = inst.restrict_points(T1);
    const FocusResult s2 = find_focus(sub, regularity);
    best = 0;
    for (std::size_t k = 1; k < s2.rich.size(); ++k)
        if (s2.through_sizes[k] > s2.through_sizes[best]) best = k;
    out.p2 = T1[s2.rich[best]];
    out.common = intersect(T1, through(inst, out.p2));

    auto& cert = out.cert;
    cert.lemma = "finding paired foci";
    absorb(cert, s1.cert, "stage1.");
    absorb(cert, s2.cert, "stage2.");
    const std::uint64_t n = inst.points().size(), m = inst.lines().size();
    const Rational K = Q(inst.incidences()) / Q(n);
    cert.set("|P_p1L|", Q(T1.size()));
    cert.set("|P_p1L n P_p2L|", Q(out.common.size()));
    // Inside P_{p1L}, the set P_{p2L} computed by the second stage is the intersection itself.
    cert.require("stage2 |P_p2L|<=|P_p1L n P_p2L|", Q(s2.through_sizes[best]), Q(out.common.size()));
    cert.require("|P_p1L n P_p2L|<=stage2 |P_p2L|", Q(out.common.size()), Q(s2.through_sizes[best]));
    cert.monitor("|P|K^4/64|L|^2<=|P_p1L n P_p2L|", Q(n) * exact::pow(K, 4) / (64 * Q(m) * Q(m)), Q(out.common.size()));
    return out;
}

std::vector<std::string> validate(const SPConfiguration& cfg) {
    std::vector<std::string> bad;
    const Field& F = cfg.field;
    if (cfg.foci.size() != 4) return {"a configuration has four foci"};
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t k = i + 1; k < 4; ++k)
            if (cfg.foci[i] == cfg.foci[k]) bad.push_back("foci p" + std::to_string(i + 1) + " and p" + std::to_string(k + 1) + " coincide");
    for (std::size_t i = 1; i < 4; ++i)
        if (!cfg.base_line.contains(cfg.foci[i])) bad.push_back("base line misses p" + std::to_string(i + 1));
    if (cfg.base_line.contains(cfg.foci[0])) bad.push_back("base line contains p1");
    for (const auto& p : cfg.points)
        if (cfg.base_line.contains(to_proj(F, p))) bad.push_back("point " + format(F, p) + " on the base line");
    for (std::size_t i = 0; i < 4; ++i) {
        try {
            if (!focus_check(F, cfg.points, cfg.foci[i], cfg.K).ok)
                bad.push_back("p" + std::to_string(i + 1) + " is not a K-focus");
        } catch (const Error& e) {
            bad.push_back("p" + std::to_string(i + 1) + ": " + e.what());
        }
    }
    return bad;
}

SPConfiguration find_sp_configuration(const IncidenceInstance& inst, unsigned regularity) {
    const std::uint64_t n = inst.points().size(), m = inst.lines().size(), I = inst.incidences();
    if (I == 0) hypothesis("K-lower-bound", "no incidences");
    const Rational K = Q(I) / Q(n);

    // K >= |L|^{3/5} / |P|^{1/5}.
    if (exact::pow(K, 5) * Q(n) < exact::pow(Q(m), 3))
        hypothesis("K-lower-bound", "K^5|P| < |L|^3 with K = " + exact::to_string(K));
    std::uint64_t max_rich = 0;
    for (std::uint32_t j = 0; j < m; ++j) max_rich = std::max<std::uint64_t>(max_rich, inst.points_of(j).size());
    const Rational cap = std::min<Rational>(Q(n) * exact::pow(K, 8) / exact::pow(Q(m), 4), Q(n) * exact::pow(K, 4) / (Q(m) * Q(m)));
    if (Q(max_rich) > cap)
        hypothesis("richness-cap", "a line holds " + std::to_string(max_rich) + " points, cap " + exact::to_string(cap));
    const auto deg = degrees(inst);
    std::uint64_t mn = 0, mx = 0;
    if (!regular(deg, regularity, mn, mx))
        hypothesis("regularity", "degrees range over [" + std::to_string(mn) + "," + std::to_string(mx) + "]");

    const PairedFoci pf = find_paired_foci(inst, regularity);
    const auto& Qset = pf.common;
    if (Qset.empty()) hypothesis("paired-foci", "P_p1L n P_p2L is empty");

    // Rich points of Q and the lines J through p2 that carry them.
    const IncidenceInstance subQ = inst.restrict_points(Qset);
    const FocusResult fq = find_focus(subQ, regularity);
    std::vector<std::uint32_t> Q1;
    for (auto i : fq.rich) Q1.push_back(Qset[i]);
    std::map<std::uint32_t, std::vector<std::uint32_t>> J;  // line -> points of Q1 on it
    for (auto q : Q1) {
        const auto common = intersect(inst.lines_of(pf.p2), inst.lines_of(q));
        if (common.size() != 1) fail(ErrorCode::InvalidArgument, "point of Q not joined to p2 by a line of L");
        J[common[0]].push_back(q);
    }
    std::vector<std::uint32_t> J1;
    std::uint64_t heaviest = 0;
    for (const auto& [j, on] : J) {
        heaviest = std::max<std::uint64_t>(heaviest, on.size());
        if (2 * J.size() * on.size() >= Q1.size()) J1.push_back(j);
    }
    if (J1.size() < 2) hypothesis("J1", "only " + std::to_string(J1.size()) + " rich line through p2");

    // Base line: the richest line of J1 avoiding p1.
    const AffinePoint& p1 = inst.points()[pf.p1];
    std::optional<std::uint32_t> base;
    for (auto j : J1) {
        if (incident(inst.field(), p1, inst.lines()[j])) continue;
        if (!base || J[j].size() > J[*base].size()) base = j;
    }
    if (!base) hypothesis("base-line", "every rich line through p2 meets p1");
    const auto& C = J[*base];
    if (C.size() < 2) hypothesis("base-line", "fewer than two candidate foci on the base line");
    if (C.size() * C.size() > kEnumerationBudget) fail(ErrorCode::BudgetExceeded, "too many focus pairs");

    std::vector<std::vector<std::uint32_t>> Qc;
    for (auto c : C) Qc.push_back(intersect(through(inst, c), Qset));
    std::size_t b3 = 0, b4 = 1, best = intersect(Qc[0], Qc[1]).size();
    for (std::size_t i = 0; i < C.size(); ++i)
        for (std::size_t k = i + 1; k < C.size(); ++k)
            if (const std::size_t s = intersect(Qc[i], Qc[k]).size(); s > best) best = s, b3 = i, b4 = k;
    std::vector<AffinePoint> S;
    const AffineLine& lstar = inst.lines()[*base];
    for (auto q : intersect(Qc[b3], Qc[b4]))
        if (!incident(inst.field(), inst.points()[q], lstar)) S.push_back(inst.points()[q]);
    if (S.empty()) hypothesis("configuration-size", "no point survives off the base line");

    const Field& F = inst.field();
    SPConfiguration cfg{F,
                        S,
                        {to_proj(F, p1), to_proj(F, inst.points()[pf.p2]), to_proj(F, inst.points()[C[b3]]),
                         to_proj(F, inst.points()[C[b4]])},
                        to_proj(F, lstar),
                        0,
                        {}};
    for (const auto& f : cfg.foci) cfg.K = std::max<std::uint64_t>(cfg.K, focus_check(F, S, f, 0).lines.size());

    auto& cert = cfg.cert;
    cert.lemma = "finding a sum-product configuration";
    absorb(cert, pf.cert, "paired.");
    cert.set("K", K);
    cert.set("|Q|", Q(Qset.size()));
    cert.set("|Q1|", Q(Q1.size()));
    cert.set("|J|", Q(J.size()));
    cert.set("|J1|", Q(J1.size()));
    // Share of I(Q1,J) on the heaviest line of J; |J1| >= 2 is automatic below 1/2.
    cert.set("J1_constant", Q(heaviest) / Q(Q1.size()));
    cert.set("|Q1 n l*|", Q(C.size()));
    cert.set("|S|", Q(S.size()));
    cert.set("K_cfg", Q(cfg.K));
    cert.require("K^5|P|>=|L|^3", exact::pow(Q(m), 3), exact::pow(K, 5) * Q(n));
    cert.require("max|l|<=richness cap", Q(max_rich), cap);
    cert.require("2<=|J1|", 2, Q(J1.size()));
    cert.require("K_cfg<=max_deg", Q(cfg.K), Q(mx));
    cert.monitor("|P|K^8/|L|^4<=|S|", Q(n) * exact::pow(K, 8) / exact::pow(Q(m), 4), Q(S.size()));
    const auto bad = validate(cfg);
    if (!bad.empty()) fail(ErrorCode::InvalidArgument, "configuration invariant failed: " + bad.front());
    return cfg;
}

// ---------------------------------------------------------------------------
// Reduction

std::uint64_t ratio_classes(const PairGraph& G) {
    const Field& F = G.left().field();
    std::vector<Element> finite;
    bool infinite = false, origin = false;
    for (auto [i, j] : G.edges()) {
        const Element& a = G.left()[i];
        const Element& b = G.right()[j];
        if (!F.is_zero(b))
            finite.push_back(F.div(a, b));
        else if (!F.is_zero(a))
            infinite = true;
        else
            origin = true;
    }
    std::sort(finite.begin(), finite.end());
    finite.erase(std::unique(finite.begin(), finite.end()), finite.end());
    return finite.size() + infinite + origin;
}

Reduction reduce_sp_configuration(const SPConfiguration& cfg) {
    const Field& F = cfg.field;
    if (const auto bad = validate(cfg); !bad.empty()) fail(ErrorCode::MapDegenerate, "invalid configuration: " + bad.front());
    auto pt = [&](long long x, long long y, long long z) { return ProjPoint(F, {F.from_int(x), F.from_int(y), F.from_int(z)}); };
    const std::vector<ProjPoint> target{pt(0, 0, 1), pt(0, 1, 0), pt(1, 0, 0), pt(1, 1, 1)};

    // Fourth frame point: the first point completing p1, p3, p4 to a frame, in
    // canonical order over a finite field and by integer coordinates in [0,4] otherwise.
    std::vector<ProjPoint> candidates;
    if (F.is_finite() && F.order() <= 1000) {
        candidates = projective::all_points(F, 2);
    } else {
        for (long long x = 0; x <= 4; ++x)
            for (long long y = 0; y <= 4; ++y)
                for (long long z = 0; z <= 4; ++z)
                    if (x || y || z) candidates.push_back(pt(x, y, z));
    }
    std::optional<ProjMap> tau;
    for (const auto& r : candidates) {
        const std::vector<ProjPoint> frame{cfg.foci[0], cfg.foci[2], cfg.foci[3], r};
        if (projective::is_frame(frame)) {
            tau = projective::frame_map(frame, target);
            break;
        }
    }
    if (!tau) fail(ErrorCode::MapDegenerate, "no fourth point completes the frame");

    const ProjPoint t2 = projective::apply(*tau, cfg.foci[1]);
    if (!F.is_zero(t2[2]) || F.is_zero(t2[0]) || F.is_zero(t2[1]))
        fail(ErrorCode::MapDegenerate, "p2 does not land on the line at infinity away from the axes");
    const Element lambda = F.neg(F.div(t2[0], t2[1]));
    const Element scale = F.neg(lambda);

    std::vector<std::pair<Element, Element>> G;
    for (const auto& p : cfg.points) {
        const ProjPoint img = projective::apply(*tau, to_proj(F, p));
        if (F.is_zero(img[2])) fail(ErrorCode::MapDegenerate, "a point maps to infinity");
        const auto xy = projective::to_affine(img);
        G.emplace_back(xy[0], F.mul(scale, xy[1]));
    }
    std::vector<Element> av, bv;
    for (const auto& [a, b] : G) av.push_back(a), bv.push_back(b);
    FiniteSet A(F, av), B(F, bv);
    std::vector<setcore::Edge> edges;
    for (const auto& [a, b] : G)
        edges.emplace_back(static_cast<std::uint32_t>(A.index_of(a)), static_cast<std::uint32_t>(B.index_of(b)));
    PairGraph graph(A, B, edges);

    Reduction out{A, B, graph, *tau, lambda, {}};
    auto& cert = out.cert;
    cert.lemma = "reduction";
    const std::uint64_t diff = setcore::partial_pairwise_set(graph, Op::Difference).size();
    const std::uint64_t ratio = ratio_classes(graph);
    cert.set("K", Q(cfg.K));
    cert.set("|G|", Q(graph.size()));
    cert.set("|A|", Q(A.size()));
    cert.set("|B|", Q(B.size()));
    cert.set("|A-^GB|", Q(diff));
    cert.set("|A/^GB|", Q(ratio));
    cert.require("|G|<=|points|", Q(graph.size()), Q(cfg.points.size()));
    cert.require("|points|<=|G|", Q(cfg.points.size()), Q(graph.size()));
    cert.require("|A|<=K", Q(A.size()), Q(cfg.K));
    cert.require("|B|<=K", Q(B.size()), Q(cfg.K));
    cert.require("|A-^GB|<=K", Q(diff), Q(cfg.K));
    cert.require("|A/^GB|<=K", Q(ratio), Q(cfg.K));
    return out;
}

// ---------------------------------------------------------------------------
// Monitors over F_p

namespace {

std::uint64_t sqrt_ceil(std::uint64_t p) {
    auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(p)));
    while (r * r < p) ++r;
    while (r > 0 && (r - 1) * (r - 1) >= p) --r;
    return r;
}

std::uint64_t prime_of(const Field& F) {
    if (F.kind() != FieldKind::Prime) fail(ErrorCode::PreconditionFailed, "this check runs over F_p");
    return F.characteristic();
}

}  // namespace

Certificate partial_sumproduct_check(const PairGraph& G, PartialVersion version) {
    const std::uint64_t p = prime_of(G.left().field());
    const std::uint64_t root = sqrt_ceil(p);
    const std::uint64_t a = G.left().size(), b = G.right().size(), g = G.size();
    const bool v1 = version == PartialVersion::V1;
    if (v1 && a > root) fail(ErrorCode::PreconditionFailed, "v1 needs |A| <= ceil(sqrt p)");
    if (!v1 && g > root * b) fail(ErrorCode::PreconditionFailed, "v2 needs |G| <= ceil(sqrt p)|B|");
    if (g == 0) fail(ErrorCode::EmptyInput, "G has no edges");
    const std::uint64_t diff = setcore::partial_pairwise_set(G, Op::Difference).size();
    const std::uint64_t ratio = setcore::partial_pairwise_set(G, Op::Ratio).size();

    Certificate cert;
    cert.lemma = v1 ? "partial sum-products v1" : "partial sum-products v2";
    cert.constants_suppressed = true;
    cert.set("|G|", Q(g));
    cert.set("|A|", Q(a));
    cert.set("|B|", Q(b));
    cert.set("|A-^GB|", Q(diff));
    cert.set("|A/^GB|", Q(ratio));
    if (v1)
        cert.monitor("|G|^55<=|A|^36|B|^37|A-^GB|^28|A/^GB|^8", Rational(exact::pow(Z(g), 55)),
                     Rational(exact::pow(Z(a), 36) * exact::pow(Z(b), 37) * exact::pow(Z(diff), 28) * exact::pow(Z(ratio), 8)));
    else
        cert.monitor("|G|^67<=|A|^44|B|^45|A-^GB|^28|A/^GB|^16", Rational(exact::pow(Z(g), 67)),
                     Rational(exact::pow(Z(a), 44) * exact::pow(Z(b), 45) * exact::pow(Z(diff), 28) * exact::pow(Z(ratio), 16)));
    return cert;
}

Certificate rudnev_check(const FiniteSet& A) {
    const std::uint64_t p = prime_of(A.field());
    if (A.size() > sqrt_ceil(p)) fail(ErrorCode::PreconditionFailed, "needs |A| <= ceil(sqrt p)");
    if (A.empty()) fail(ErrorCode::EmptyInput, "A is empty");
    const FiniteSet A0 = A.without(A.field().zero());
    const std::uint64_t E = A0.empty() ? 0 : setcore::energy(A0, A0, EnergyKind::Multiplicative);
    const std::uint64_t diff = setcore::pairwise_set(A, A, Op::Difference).size();
    Certificate cert;
    cert.lemma = "Rudnev";
    cert.constants_suppressed = true;
    cert.set("|A|", Q(A.size()));
    cert.set("E_x(A)", Q(E));
    cert.set("|A-A|", Q(diff));
    cert.monitor("E_x(A)^4<=|A-A|^7|A|^4", Rational(exact::pow(Z(E), 4)),
                 Rational(exact::pow(Z(diff), 7) * exact::pow(Z(A.size()), 4)));
    return cert;
}

// ---------------------------------------------------------------------------
// Invariants

Certificate incidence_invariants(const IncidenceInstance& inst) {
    const std::uint64_t n = inst.points().size(), m = inst.lines().size(), I = inst.incidences();
    Certificate cert;
    cert.lemma = "incidence invariants";
    cert.set("|P|", Q(n));
    cert.set("|L|", Q(m));
    cert.set("I", Q(I));
    // I <= |P| + |P|^{1/2}|L| and I <= |L| + |L|^{1/2}|P|, squared.
    const BigInt dp = I > n ? Z(I - n) : BigInt(0);
    const BigInt dl = I > m ? Z(I - m) : BigInt(0);
    cert.require("(I-|P|)^2<=|P||L|^2", Rational(dp * dp), Rational(Z(n) * Z(m) * Z(m)));
    cert.require("(I-|L|)^2<=|L||P|^2", Rational(dl * dl), Rational(Z(m) * Z(n) * Z(n)));

    // Two lines share at most one point: no pair of lines is counted at two points.
    std::vector<std::uint64_t> pairs;
    for (std::uint32_t i = 0; i < n; ++i) {
        const auto& ls = inst.lines_of(i);
        for (std::size_t x = 0; x < ls.size(); ++x)
            for (std::size_t y = x + 1; y < ls.size(); ++y) pairs.push_back((std::uint64_t{ls[x]} << 32) | ls[y]);
    }
    std::sort(pairs.begin(), pairs.end());
    const std::uint64_t repeats = static_cast<std::uint64_t>(pairs.size() - static_cast<std::size_t>(std::unique(pairs.begin(), pairs.end()) - pairs.begin()));
    cert.require("line pairs sharing two points<=0", Q(repeats), 0);

    // I <= 4(|P|^{2/3}|L|^{2/3} + |P| + |L|), cubed.
    Rational t = Q(I) / 4 - Q(n) - Q(m);
    if (t < 0) t = 0;
    cert.monitor("(I/4-|P|-|L|)^3<=|P|^2|L|^2", exact::pow(t, 3), Q(n) * Q(n) * Q(m) * Q(m));
    return cert;
}

Certificate beck_report(const Field& F, const std::vector<AffinePoint>& P) {
    const auto det = lines_determined(F, P);
    const std::uint64_t n = det.mu.empty() ? 0 : [&] {
        std::vector<AffinePoint> s = P;
        std::sort(s.begin(), s.end());
        return static_cast<std::uint64_t>(std::unique(s.begin(), s.end()) - s.begin());
    }();
    const std::uint64_t max_mu = *std::max_element(det.mu.begin(), det.mu.end());
    Certificate cert;
    cert.lemma = "Beck";
    cert.constants_suppressed = true;
    cert.set("|P|", Q(n));
    cert.set("max mu", Q(max_mu));
    cert.set("|L(P)|", Q(det.lines.size()));
    cert.set("C", Q(n) / Q(max_mu));
    cert.set("C'", Q(n) * Q(n) / Q(det.lines.size()));
    return cert;
}

}  // namespace growthlab::incidence
