#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "growthlab/certificate.hpp"
#include "growthlab/projective.hpp"
#include "growthlab/setcore.hpp"

namespace growthlab::incidence {

using projective::ProjHyperplane;
using projective::ProjPoint;

struct AffinePoint {
    Element x, y;

    bool operator==(const AffinePoint& o) const { return x == o.x && y == o.y; }
    bool operator<(const AffinePoint& o) const { return x < o.x || (x == o.x && y < o.y); }
};

// The line ax + by + c = 0 with (a,b) != (0,0), scaled so its first nonzero coefficient is 1.
struct AffineLine {
    Element a, b, c;

    bool operator==(const AffineLine& o) const { return a == o.a && b == o.b && c == o.c; }
    bool operator<(const AffineLine& o) const {
        if (a != o.a) return a < o.a;
        if (b != o.b) return b < o.b;
        return c < o.c;
    }
};

AffinePoint make_point(const Field& F, long long x, long long y);
AffineLine make_line(const Field& F, const Element& a, const Element& b, const Element& c);
AffineLine make_line(const Field& F, long long a, long long b, long long c);
// y = m x + s.
AffineLine slope_line(const Field& F, const Element& m, const Element& s);
AffineLine line_through(const Field& F, const AffinePoint& p, const AffinePoint& q);
bool incident(const Field& F, const AffinePoint& p, const AffineLine& l);

ProjPoint to_proj(const Field& F, const AffinePoint& p);
ProjHyperplane to_proj(const Field& F, const AffineLine& l);
std::string format(const Field& F, const AffinePoint& p);
std::string format(const Field& F, const AffineLine& l);

// Points and lines (each sorted, without repeats) together with the incidence
// lists between them.
class IncidenceInstance {
public:
    IncidenceInstance(Field field, std::vector<AffinePoint> points, std::vector<AffineLine> lines);

    const Field& field() const noexcept { return field_; }
    const std::vector<AffinePoint>& points() const noexcept { return points_; }
    const std::vector<AffineLine>& lines() const noexcept { return lines_; }
    std::uint64_t incidences() const noexcept { return incidences_; }

    // Lines through point i and points on line j, as sorted indices.
    const std::vector<std::uint32_t>& lines_of(std::uint32_t i) const { return lines_of_[i]; }
    const std::vector<std::uint32_t>& points_of(std::uint32_t j) const { return points_of_[j]; }

    // Index, or size() when absent.
    std::size_t point_index(const AffinePoint& p) const;
    std::size_t line_index(const AffineLine& l) const;

    // The instance on the given point indices with the same lines.
    IncidenceInstance restrict_points(const std::vector<std::uint32_t>& subset) const;

    // Recounts every pair (p,l) directly and compares with the cached count.
    bool revalidate() const;

    // {"field", "points": [[x,y],...], "lines": [[a,b,c],...]}
    Json to_json() const;
    static IncidenceInstance from_json(const Json& j);

private:
    void build_index();

    Field field_;
    std::vector<AffinePoint> points_;
    std::vector<AffineLine> lines_;
    std::vector<std::vector<std::uint32_t>> lines_of_;
    std::vector<std::vector<std::uint32_t>> points_of_;
    std::uint64_t incidences_ = 0;
};

// Direct double loop over P x L.
std::uint64_t incidence_count(const Field& F, const std::vector<AffinePoint>& P, const std::vector<AffineLine>& L);

struct DeterminedLines {
    std::vector<AffineLine> lines;
    std::vector<std::uint64_t> mu;  // points of P on each line
};

DeterminedLines lines_determined(const Field& F, const std::vector<AffinePoint>& P);

enum class Side { Points, Lines };

struct RichFilter {
    std::vector<std::uint32_t> kept;  // indices into the instance
    std::uint64_t incidences = 0;     // incidences of the kept side with the other side
    std::uint64_t total = 0;
    Certificate cert;
};

// Points on at least I/2|P| lines, or lines through at least I/2|L| points.
RichFilter rich_filter(const IncidenceInstance& inst, Side side);

struct DyadicClass {
    unsigned j = 0;                    // values in [2^j, 2^{j+1})
    std::vector<std::size_t> members;  // positions in the input
    std::uint64_t mass = 0;
};

DyadicClass dyadic_classes(const std::vector<std::uint64_t>& values);

struct Construction {
    IncidenceInstance instance;
    Certificate cert;
};

// P = [1,n] x [1,2n^2] and the lines y = rx + s with r in [1,n], s in [1,n^2], n^3 = N.
Construction extremal_grid(const Field& F, std::uint64_t N);
// P = (A+A) x AA and the lines y = a(x - b).
Construction elekes_config(const setcore::FiniteSet& A);

struct BourgainGaraev {
    setcore::FiniteSet set;
    std::uint64_t M = 0;
    std::uint64_t shift = 0;  // the window {y+1,...,y+M}
    Certificate cert;
};

BourgainGaraev bourgain_garaev_set(std::uint64_t p, std::uint64_t N);

struct FocusCheck {
    bool ok = false;
    std::vector<ProjHyperplane> lines;  // distinct lines joining the focus to P
};

FocusCheck focus_check(const Field& F, const std::vector<AffinePoint>& P, const ProjPoint& f, std::uint64_t K);
FocusCheck focus_check(const Field& F, const std::vector<AffinePoint>& P, const AffinePoint& f, std::uint64_t K);

// P_pL = {q in P : q != p, l_pq in L}, by testing every q.
std::vector<AffinePoint> points_through_focus(const IncidenceInstance& inst, const AffinePoint& p);
// The same set as indices, read off the incidence lists.
std::vector<std::uint32_t> through(const IncidenceInstance& inst, std::uint32_t p);

struct FocusResult {
    std::vector<std::uint32_t> rich;           // P_1
    std::vector<std::uint64_t> through_sizes;  // |P_pL| for p in P_1
    std::uint64_t min_through = 0;
    Certificate cert;
};

// Every point must lie on between m and factor*m lines for some m >= 1.
FocusResult find_focus(const IncidenceInstance& inst, unsigned regularity = 4);

struct PairedFoci {
    std::uint32_t p1 = 0, p2 = 0;
    std::vector<std::uint32_t> common;  // P_{p1 L} n P_{p2 L}
    Certificate cert;
};

PairedFoci find_paired_foci(const IncidenceInstance& inst, unsigned regularity = 4);

struct SPConfiguration {
    Field field;
    std::vector<AffinePoint> points;
    std::vector<ProjPoint> foci;  // p1, p2, p3, p4
    ProjHyperplane base_line;     // through p2, p3, p4
    std::uint64_t K = 0;
    Certificate cert;
};

// Messages for violated configuration invariants; empty when valid.
std::vector<std::string> validate(const SPConfiguration& cfg);

// Failures are HypothesisFailed with the message starting "<hypothesis>:", one of
// K-lower-bound, richness-cap, regularity, paired-foci, J1, base-line, configuration-size.
SPConfiguration find_sp_configuration(const IncidenceInstance& inst, unsigned regularity = 4);

struct Reduction {
    setcore::FiniteSet A, B;  // B is the normalized -lambda B
    setcore::PairGraph G;
    projective::ProjMap tau;
    Element lambda;
    Certificate cert;
};

Reduction reduce_sp_configuration(const SPConfiguration& cfg);

// Lines through the origin meeting G: the classes [a:b] of its edges.
std::uint64_t ratio_classes(const setcore::PairGraph& G);

enum class PartialVersion { V1, V2 };

Certificate partial_sumproduct_check(const setcore::PairGraph& G, PartialVersion version);
Certificate rudnev_check(const setcore::FiniteSet& A);

// Exact trivial bound, pair uniqueness and the Szemeredi-Trotter monitor with C = 4.
Certificate incidence_invariants(const IncidenceInstance& inst);
// Realized constants C = |P|/max mu and C' = |P|^2/|L(P)|.
Certificate beck_report(const Field& F, const std::vector<AffinePoint>& P);

}  // namespace growthlab::incidence
