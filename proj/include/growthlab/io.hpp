#pragma once

#include <string>

#include "growthlab/certificate.hpp"
#include "growthlab/setcore.hpp"

namespace growthlab::io {

Json to_json(const setcore::FiniteSet& A);
setcore::FiniteSet set_from_json(const Field& F, const Json& j);

// {"field": ..., "A": [...], "B": [...], "edges": [[i,j],...]}; "field" may be
// omitted when the caller supplies it.
Json to_json(const setcore::PairGraph& G);
setcore::PairGraph graph_from_json(const Json& j, const Field* field = nullptr);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& contents);

}  // namespace growthlab::io
