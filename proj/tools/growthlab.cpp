#include <filesystem>
#include <iostream>

#include "CLI11.hpp"
#include "growthlab/error.hpp"
#include "growthlab/ffield.hpp"
#include "growthlab/harness.hpp"
#include "growthlab/incidence.hpp"
#include "growthlab/io.hpp"

using namespace growthlab;
namespace fs = std::filesystem;
using setcore::FiniteSet;

namespace {

void emit(const std::string& text, const std::string& out) {
    if (out.empty())
        std::cout << text;
    else
        io::write_file(out, text);
}

FiniteSet read_set(const std::string& path) {
    std::string text = io::read_file(path);
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.pop_back();
    return setcore::parse_set_literal(text);
}

Json ball_json(const Field& F, const ffield::Ball& b) {
    return {{"center", F.format(b.center)}, {"radius", b.radius}};
}

int verify(const std::string& config) {
    harness::Campaign c = harness::parse_campaign(io::read_file(config));
    // Fixture and output paths are relative to the config file.
    const fs::path base = fs::path(config).parent_path();
    auto resolve = [&](std::string& p) {
        if (!p.empty() && fs::path(p).is_relative()) p = (base / p).string();
    };
    for (auto& f : c.fixtures) resolve(f);
    resolve(c.csv);
    resolve(c.json);
    const harness::Report r = harness::run_campaign(c);
    std::cout << r.summary.dump(2) << "\n";
    return r.ok() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"growthlab: exact sum-product and incidence experiments"};
    app.require_subcommand(1);

    std::string campaign;
    auto* verify_cmd = app.add_subcommand("verify", "run a campaign; exit 1 on a hard-invariant violation");
    verify_cmd->add_option("--campaign", campaign, "key=value campaign file")->required()->check(CLI::ExistingFile);

    std::string family, field = "Fp:101", sizes, out;
    std::uint64_t seed = 1;
    auto* growth = app.add_subcommand("growth", "image, sumset and product sizes per size");
    growth->add_option("--family", family)->required();
    growth->add_option("--field", field);
    growth->add_option("--sizes", sizes)->required();
    growth->add_option("--seed", seed);
    growth->add_option("--out", out, "CSV path (default stdout)");

    std::string which;
    std::uint64_t n = 0;
    auto* construct = app.add_subcommand("construct", "extremal-grid, elekes or bg instances as JSON");
    construct->add_option("kind", which)->required()->check(CLI::IsMember({"extremal-grid", "elekes", "bg"}));
    construct->add_option("--n", n, "N for extremal-grid, |A| for elekes, |A| for bg")->required();
    construct->add_option("--field", field, "field (bg uses its characteristic)");
    construct->add_option("--out", out);

    std::string ff_what, set_path;
    auto* ff = app.add_subcommand("ff", "separability and chains in F_q(t)");
    ff->add_option("what", ff_what)->required()->check(CLI::IsMember({"separable", "chain", "certificate"}));
    ff->add_option("--set", set_path, "file with a set literal such as Fq(t;2){1,t,t^2}")->required();
    ff->add_option("--out", out);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*verify_cmd) return verify(campaign);

        if (*growth) {
            const auto scan = harness::growth_scan(harness::parse_family(family), harness::parse_field_spec(field),
                                                   harness::parse_sizes(sizes), seed);
            emit(scan.csv(), out);
            return 0;
        }

        if (*construct) {
            const Field F = harness::parse_field_spec(field);
            Json j;
            if (which == "extremal-grid") {
                const auto c = incidence::extremal_grid(F, n);
                j = {{"instance", c.instance.to_json()}, {"certificate", c.cert.to_json()}};
            } else if (which == "elekes") {
                std::vector<long long> a;
                for (std::uint64_t i = 1; i <= n; ++i) a.push_back(static_cast<long long>(i));
                const auto c = incidence::elekes_config(setcore::FiniteSet::from_ints(F, a));
                j = {{"instance", c.instance.to_json()}, {"certificate", c.cert.to_json()}};
            } else {
                const auto bg = incidence::bourgain_garaev_set(F.characteristic(), n);
                j = {{"set", bg.set.literal()}, {"M", bg.M}, {"shift", bg.shift}, {"certificate", bg.cert.to_json()}};
            }
            emit(j.dump(2) + "\n", out);
            return 0;
        }

        const FiniteSet A = read_set(set_path);
        const Field& F = A.field();
        Json j;
        if (ff_what == "separable") {
            const auto s = ffield::is_separable(A);
            j = {{"set", A.literal()}, {"separable", s.separable}, {"dendrogram", s.tree.to_json(A)}};
            if (s.separable) {
                Json order = Json::array(), balls = Json::array();
                for (const auto& x : s.order) order.push_back(F.format(x));
                for (const auto& b : s.balls) balls.push_back(ball_json(F, b));
                j["order"] = order;
                j["balls"] = balls;
            } else {
                j["refuted_node"] = *s.refuted;
            }
        } else if (ff_what == "chain") {
            const auto c = ffield::max_chain(A);
            Json chain = Json::array();
            for (const auto& x : c.chain) chain.push_back(F.format(x));
            j = {{"set", A.literal()}, {"chain", chain}, {"certificate", c.cert.to_json()}};
        } else {
            j = ffield::ff_sumproduct_certificate(A).to_json();
        }
        emit(j.dump(2) + "\n", out);
        return 0;
    } catch (const Error& e) {
        std::cerr << "growthlab: " << e.what() << "\n";
        return 2;
    }
}
