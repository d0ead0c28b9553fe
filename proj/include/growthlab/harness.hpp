#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "growthlab/certificate.hpp"
#include "growthlab/incidence.hpp"
#include "growthlab/setcore.hpp"

// Instance generators, seeded campaigns and reports.
namespace growthlab::harness {

using setcore::FiniteSet;

// SplitMix64 (Steele, Lea, Flood): state += 0x9e3779b97f4a7c15, then the
// 30/27/31 xor-shift multiply finaliser. Identical streams on every platform.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
    std::uint64_t next();
    // Uniform in [0, n) by rejection; n > 0.
    std::uint64_t below(std::uint64_t n);
    // Uniform in [lo, hi].
    long long between(long long lo, long long hi);

private:
    std::uint64_t state_;
};

// Seed of the i-th derived stream.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t i);

enum class Family { AP, GP, Random, TPowers, BG, Elekes, ExtremalGrid };

Family parse_family(const std::string& name);  // SpecInvalid
std::string to_string(Family f);

using Instance = std::variant<FiniteSet, incidence::IncidenceInstance>;

// Deterministic in (family, field, size, seed). Set families return a set of
// exactly `size` elements; Elekes uses A = {1..size}, extremal-grid uses N = size.
Instance generate(Family family, const Field& F, std::uint64_t size, std::uint64_t seed);

// Field argument: a field literal such as Fp(101) or Q, or the short forms
// Fp:101, Fq:4, Fq:2,3 (F_{2^3}) and Ft:2 (F_2(t)). Throws SpecInvalid.
Field parse_field_spec(const std::string& text);

// Sizes "4..12", "4,8,16" or a single number.
std::vector<std::uint64_t> parse_sizes(const std::string& text);

struct Campaign {
    std::uint64_t seed = 1;
    std::string field = "Fp(101)";
    Family family = Family::Random;
    std::vector<std::uint64_t> sizes;
    std::uint64_t instances = 1;      // per size
    std::vector<std::string> checks;  // check identifiers
    std::vector<std::string> fixtures;  // certificate JSON files re-evaluated as rows
    std::string csv;                  // output paths; empty means not written
    std::string json;
};

// Plain-text key=value lines; '#' starts a comment. Throws SpecInvalid.
Campaign parse_campaign(const std::string& text);

struct Row {
    std::uint64_t instance = 0;
    std::uint64_t size = 0;
    std::uint64_t seed = 0;
    std::string check;
    std::string lemma;
    std::string bound;
    Rational lhs, rhs;
    bool monitor = false;
    bool constants_suppressed = false;

    bool holds() const { return lhs <= rhs; }
    double ratio() const;  // rhs / lhs
};

struct Skip {
    std::uint64_t instance = 0;
    std::string check;
    std::string reason;
};

struct Report {
    std::vector<Row> rows;
    std::vector<Skip> skipped;
    Json summary;

    std::uint64_t violations() const;  // failing hard invariants
    bool ok() const { return violations() == 0; }
    std::string csv() const;
};

// Known check identifiers.
std::vector<std::string> check_names();

// The summary computed from rows alone.
Json summarize(const Campaign& c, const std::vector<Row>& rows, const std::vector<Skip>& skipped);

// Runs every check on every generated instance, writing the CSV and JSON
// outputs when paths are set. Throws UnknownCheck or IOFailure.
Report run_campaign(const Campaign& c);

struct GrowthRow {
    std::string family, field;
    std::uint64_t n = 0, seed = 0;
    std::uint64_t sum = 0, product = 0;  // |A+A|, |AA|
    std::uint64_t f = 0, g = 0;
    std::optional<std::uint64_t> h;
    double exp_f = 0, exp_g = 0, exp_h = 0;
    bool elekes = false;  // max(|A+A|,|AA|)^4 >= |A|^5
};

struct GrowthScan {
    std::vector<GrowthRow> rows;
    std::string csv() const;
};

// Sizes up to 64; h is computed up to |A| = 24.
GrowthScan growth_scan(Family family, const Field& F, const std::vector<std::uint64_t>& sizes, std::uint64_t seed);

}  // namespace growthlab::harness
