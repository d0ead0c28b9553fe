#include <filesystem>
#include <set>

#include "doctest.h"
#include "growthlab/error.hpp"
#include "growthlab/harness.hpp"
#include "growthlab/io.hpp"

using namespace growthlab;
using namespace growthlab::harness;

namespace {

ErrorCode code_of(auto&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    return ErrorCode::InvalidArgument;
}

FiniteSet set_instance(Family family, const Field& F, std::uint64_t n, std::uint64_t seed) {
    return std::get<FiniteSet>(generate(family, F, n, seed));
}

std::size_t sumset_size(const FiniteSet& A) { return setcore::pairwise_set(A, A, setcore::Op::Sum).size(); }
std::size_t productset_size(const FiniteSet& A) { return setcore::pairwise_set(A, A, setcore::Op::Product).size(); }

Campaign campaign(const std::string& field, Family family, std::vector<std::uint64_t> sizes,
                  std::vector<std::string> checks, std::uint64_t instances = 2) {
    Campaign c;
    c.seed = 11;
    c.field = field;
    c.family = family;
    c.sizes = std::move(sizes);
    c.instances = instances;
    c.checks = std::move(checks);
    return c;
}

}  // namespace

TEST_CASE("SplitMix64 reference stream") {
    SplitMix64 g(0);
    CHECK(g.next() == 0xe220a8397b1dcdafULL);
    CHECK(g.next() == 0x6e789e6aa1b965f4ULL);
    CHECK(g.next() == 0x06c45d188009454fULL);

    SplitMix64 h(42);
    for (int i = 0; i < 2000; ++i) {
        CHECK(h.below(7) < 7);
        const auto x = h.between(-3, 3);
        CHECK(x >= -3);
        CHECK(x <= 3);
    }
    CHECK(derive_seed(5, 0) != derive_seed(5, 1));
    CHECK(derive_seed(5, 3) == derive_seed(5, 3));
}

TEST_CASE("family names round trip") {
    for (auto f : {Family::AP, Family::GP, Family::Random, Family::TPowers, Family::BG, Family::Elekes,
                   Family::ExtremalGrid})
        CHECK(parse_family(to_string(f)) == f);
    CHECK(parse_family("AP") == Family::AP);
    CHECK(code_of([] { parse_family("fibonacci"); }) == ErrorCode::SpecInvalid);
}

TEST_CASE("field and size arguments") {
    CHECK(parse_field_spec("Fp:101") == Field::prime(101));
    CHECK(parse_field_spec("Fp(101)") == Field::prime(101));
    CHECK(parse_field_spec("Q") == Field::rationals());
    CHECK(parse_field_spec("Ft:2") == Field::function(2));
    CHECK(parse_field_spec("Fq:4").order() == 4);
    CHECK(code_of([] { parse_field_spec("Fp:100"); }) == ErrorCode::SpecInvalid);
    CHECK(code_of([] { parse_field_spec("Zp:7"); }) == ErrorCode::SpecInvalid);

    CHECK(parse_sizes("4..7") == std::vector<std::uint64_t>{4, 5, 6, 7});
    CHECK(parse_sizes("3, 9,2") == std::vector<std::uint64_t>{3, 9, 2});
    CHECK(parse_sizes("8") == std::vector<std::uint64_t>{8});
    CHECK(code_of([] { parse_sizes("9..4"); }) == ErrorCode::SpecInvalid);
    CHECK(code_of([] { parse_sizes("x"); }) == ErrorCode::SpecInvalid);
    CHECK(code_of([] { parse_sizes(""); }) == ErrorCode::SpecInvalid);
}

TEST_CASE("AP and GP generators") {
    const Field F = Field::prime(101), Q = Field::rationals();
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const FiniteSet A = set_instance(Family::AP, F, 8, seed);
        CHECK(A.size() == 8);
        CHECK(sumset_size(A) == 15);
        CHECK(A == set_instance(Family::AP, F, 8, seed));

        const FiniteSet B = set_instance(Family::AP, Q, 10, seed);
        CHECK(sumset_size(B) == 19);
        const FiniteSet G = set_instance(Family::GP, Q, 10, seed);
        CHECK(G.size() == 10);
        CHECK(productset_size(G) == 19);
        const FiniteSet Gp = set_instance(Family::GP, F, 10, seed);
        CHECK(Gp.size() == 10);
        CHECK(productset_size(Gp) == 19);
    }
    CHECK(set_instance(Family::AP, F, 8, 1) != set_instance(Family::AP, F, 8, 2));
    CHECK(code_of([&] { generate(Family::AP, Field::prime(7), 8, 0); }) == ErrorCode::SpecInvalid);
    CHECK(set_instance(Family::AP, Field::function(3), 3, 4).size() == 3);
    CHECK(set_instance(Family::GP, Field::function(3), 6, 4).size() == 6);
}

TEST_CASE("t-powers and random sets") {
    const Field F2t = Field::function(2);
    const FiniteSet T = set_instance(Family::TPowers, F2t, 5, 99);
    CHECK(T == FiniteSet::parse(F2t, {"1", "t", "t^2", "t^3", "t^4"}));
    CHECK(code_of([] { generate(Family::TPowers, Field::prime(5), 5, 0); }) == ErrorCode::SpecInvalid);

    for (const Field& F : {Field::prime(101), Field::extension(2, 4), Field::rationals(), F2t}) {
        const FiniteSet R = set_instance(Family::Random, F, 12, 3);
        CHECK(R.size() == 12);
        CHECK(R == set_instance(Family::Random, F, 12, 3));
    }
    CHECK(set_instance(Family::Random, Field::prime(7), 7, 1).size() == 7);
    CHECK(code_of([] { generate(Family::Random, Field::prime(7), 8, 1); }) == ErrorCode::SpecInvalid);
}

TEST_CASE("incidence families delegate to the constructions") {
    const Field Q = Field::rationals();
    const auto grid = std::get<incidence::IncidenceInstance>(generate(Family::ExtremalGrid, Q, 8, 0));
    const auto direct = incidence::extremal_grid(Q, 8).instance;
    CHECK(grid.points() == direct.points());
    CHECK(grid.lines() == direct.lines());
    CHECK(grid.incidences() == 16);
    CHECK(code_of([&] { generate(Family::ExtremalGrid, Q, 9, 0); }) == ErrorCode::SpecInvalid);

    const auto el = std::get<incidence::IncidenceInstance>(generate(Family::Elekes, Q, 2, 0));
    CHECK(el.points().size() == 9);
    CHECK(el.lines().size() == 4);

    const FiniteSet bg = set_instance(Family::BG, Field::prime(101), 8, 0);
    CHECK(bg == incidence::bourgain_garaev_set(101, 8).set);
    CHECK(code_of([&] { generate(Family::BG, Q, 8, 0); }) == ErrorCode::SpecInvalid);
}

TEST_CASE("campaign config parsing") {
    const Campaign c = parse_campaign(
        "# comment line\n"
        "seed = 7\n"
        "field = Fp:101   # trailing comment\n"
        "family = ap\n"
        "sizes = 4..6\n"
        "instances = 3\n"
        "checks = ruzsa_triangle, energy_identities\n"
        "csv = out.csv\n");
    CHECK(c.seed == 7);
    CHECK(c.field == "Fp:101");
    CHECK(c.family == Family::AP);
    CHECK(c.sizes == std::vector<std::uint64_t>{4, 5, 6});
    CHECK(c.instances == 3);
    CHECK(c.checks == std::vector<std::string>{"ruzsa_triangle", "energy_identities"});
    CHECK(c.csv == "out.csv");
    CHECK(c.json.empty());

    CHECK(code_of([] { parse_campaign("sizes = 4\nspeed = 9\n"); }) == ErrorCode::SpecInvalid);
    CHECK(code_of([] { parse_campaign("seed = 4\n"); }) == ErrorCode::SpecInvalid);
    CHECK(code_of([] { parse_campaign("sizes = 4\nfield = Fp:91\n"); }) == ErrorCode::SpecInvalid);
    CHECK(code_of([] { parse_campaign("sizes = 4\nno equals sign\n"); }) == ErrorCode::SpecInvalid);
}

TEST_CASE("campaign runs are deterministic and summarised from rows") {
    const Campaign c = campaign("Fp(101)", Family::Random, {5, 8}, {"ruzsa_triangle", "energy_identities", "plunnecke"}, 3);
    const Report r1 = run_campaign(c), r2 = run_campaign(c);
    CHECK(!r1.rows.empty());
    CHECK(r1.csv() == r2.csv());
    CHECK(r1.summary.dump() == r2.summary.dump());
    CHECK(r1.summary.dump() == summarize(c, r1.rows, r1.skipped).dump());
    CHECK(r1.ok());
    CHECK(r1.summary["violations"] == 0);
    CHECK(r1.summary["rows"] == r1.rows.size());
    for (const auto& row : r1.rows) CHECK(row.holds() == (row.lhs <= row.rhs));

    // Instance ids follow generation order.
    std::uint64_t last = 0;
    for (const auto& row : r1.rows) {
        CHECK(row.instance >= last);
        last = row.instance;
    }
    CHECK(last == 5);

    Campaign other = c;
    other.seed = 12;
    CHECK(run_campaign(other).csv() != r1.csv());
}

TEST_CASE("empty, unknown and fixture campaigns") {
    const Report empty = run_campaign(campaign("Fp(101)", Family::AP, {4}, {}));
    CHECK(empty.rows.empty());
    CHECK(empty.ok());
    CHECK(empty.csv().find('\n') + 1 == empty.csv().size());

    CHECK(code_of([] { run_campaign(campaign("Fp(101)", Family::AP, {4}, {"no_such_check"})); }) ==
          ErrorCode::UnknownCheck);

    Campaign bad = campaign("Fp(101)", Family::AP, {4}, {"ruzsa_triangle"});
    bad.fixtures = {std::string(GROWTHLAB_FIXTURES) + "/corrupted_certificate.json"};
    const Report rb = run_campaign(bad);
    CHECK(!rb.ok());
    CHECK(rb.violations() == 1);
    CHECK(rb.summary["checks"]["fixture"]["violations"] == 1);

    Campaign good = bad;
    good.fixtures = {std::string(GROWTHLAB_FIXTURES) + "/valid_certificate.json"};
    CHECK(run_campaign(good).ok());

    Campaign missing = bad;
    missing.fixtures = {"/nonexistent/certificate.json"};
    CHECK(code_of([&] { run_campaign(missing); }) == ErrorCode::IOFailure);
}

TEST_CASE("campaign outputs are written") {
    const auto dir = std::filesystem::temp_directory_path() / "growthlab_harness_test";
    std::filesystem::create_directories(dir);
    Campaign c = campaign("Q", Family::GP, {4, 6}, {"multiplicative_energy", "elekes_growth"});
    c.csv = (dir / "report.csv").string();
    c.json = (dir / "summary.json").string();
    const Report r = run_campaign(c);
    CHECK(io::read_file(c.csv) == r.csv());
    CHECK(Json::parse(io::read_file(c.json)) == r.summary);
    CHECK(r.csv().rfind("instanceId,size,seed,check,lemma,bound,lhs,rhs,ratio,holds,kind,constantsSuppressed\n", 0) == 0);

    c.csv = (dir / "missing" / "x" / "report.csv").string();
    CHECK(code_of([&] { run_campaign(c); }) == ErrorCode::IOFailure);
    std::filesystem::remove_all(dir);
}

TEST_CASE("every registered check runs without hard violations") {
    const auto names = check_names();
    CHECK(names.size() >= 20);
    std::set<std::string> produced;
    for (const auto& [field, family, size] :
         {std::tuple{"Fp(101)", Family::Random, 6}, std::tuple{"Ft:2", Family::Random, 6},
          std::tuple{"Q", Family::AP, 6}, std::tuple{"Fp(101)", Family::ExtremalGrid, 8}}) {
        const Report r = run_campaign(campaign(field, family, {static_cast<std::uint64_t>(size)}, names, 1));
        for (const auto& row : r.rows) {
            if (!row.monitor && !row.holds()) MESSAGE(field << " " << row.check << " " << row.bound);
            produced.insert(row.check);
        }
        CHECK(r.ok());
    }
    for (const auto& name : names) {
        INFO(name);
        CHECK(produced.count(name) == 1);
    }
}

TEST_CASE("growth scans") {
    const Field Q = Field::rationals();
    std::vector<std::uint64_t> sizes;
    for (std::uint64_t n = 4; n <= 32; ++n) sizes.push_back(n);
    const GrowthScan ap = growth_scan(Family::AP, Q, sizes, 7);
    REQUIRE(ap.rows.size() == sizes.size());
    for (const auto& row : ap.rows) CHECK(row.sum == 2 * row.n - 1);
    const GrowthScan gp = growth_scan(Family::GP, Q, {4, 8, 16}, 7);
    for (const auto& row : gp.rows) CHECK(row.product == 2 * row.n - 1);
    CHECK(ap.csv() == growth_scan(Family::AP, Q, sizes, 7).csv());
    CHECK(ap.rows.front().h.has_value());
    CHECK(!ap.rows.back().h.has_value());

    const GrowthScan rnd = growth_scan(Family::Random, Field::prime(101), {9, 9, 9, 9, 9, 9, 9, 9}, 3);
    for (const auto& row : rnd.rows) {
        CHECK(row.elekes);
        CHECK(row.f >= row.n);
    }
    CHECK(code_of([&] { growth_scan(Family::AP, Q, {65}, 1); }) == ErrorCode::BudgetExceeded);
    CHECK(code_of([&] { growth_scan(Family::ExtremalGrid, Q, {8}, 1); }) == ErrorCode::SpecInvalid);
}
