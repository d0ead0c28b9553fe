#include "growthlab/io.hpp"

#include <fstream>
#include <sstream>

#include "growthlab/error.hpp"

namespace growthlab::io {

Json to_json(const setcore::FiniteSet& A) { return Json(A.format()); }

setcore::FiniteSet set_from_json(const Field& F, const Json& j) {
    if (!j.is_array()) fail(ErrorCode::ParseError, "expected a JSON array of elements");
    std::vector<Element> v;
    for (const auto& x : j) {
        if (x.is_string())
            v.push_back(F.parse_element(x.get<std::string>()));
        else if (x.is_number_integer())
            v.push_back(F.from_int(x.get<long long>()));
        else
            fail(ErrorCode::ParseError, "element must be a string or integer");
    }
    return setcore::FiniteSet(F, std::move(v));
}

Json to_json(const setcore::PairGraph& G) {
    Json edges = Json::array();
    for (auto [i, j] : G.edges()) edges.push_back({i, j});
    return Json{{"field", G.left().field().name()}, {"A", to_json(G.left())}, {"B", to_json(G.right())}, {"edges", edges}};
}

setcore::PairGraph graph_from_json(const Json& j, const Field* field) {
    try {
        Field F = field ? *field : Field::parse(j.at("field").get<std::string>());
        // Elements may be listed unsorted; edges refer to the listed positions.
        auto raw_side = [&](const Json& arr) {
            std::vector<Element> v;
            for (const auto& x : arr)
                v.push_back(x.is_string() ? F.parse_element(x.get<std::string>()) : F.from_int(x.get<long long>()));
            return v;
        };
        auto a = raw_side(j.at("A"));
        auto b = raw_side(j.at("B"));
        setcore::FiniteSet A(F, a), B(F, b);
        if (A.size() != a.size() || B.size() != b.size()) fail(ErrorCode::ParseError, "graph sides contain duplicates");
        std::vector<setcore::Edge> edges;
        for (const auto& e : j.at("edges")) {
            const auto i = e.at(0).get<std::size_t>(), k = e.at(1).get<std::size_t>();
            if (i >= a.size() || k >= b.size()) fail(ErrorCode::ParseError, "edge index out of range");
            edges.emplace_back(static_cast<std::uint32_t>(A.index_of(a[i])), static_cast<std::uint32_t>(B.index_of(b[k])));
        }
        return setcore::PairGraph(A, B, std::move(edges));
    } catch (const Json::exception& e) {
        fail(ErrorCode::ParseError, std::string("malformed graph: ") + e.what());
    }
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorCode::IOFailure, "cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(ErrorCode::IOFailure, "cannot write " + path);
    out << contents;
    if (!out) fail(ErrorCode::IOFailure, "write failed for " + path);
}

}  // namespace growthlab::io
