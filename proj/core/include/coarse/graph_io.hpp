#pragma once

#include <iosfwd>
#include <string>

#include "coarse/graph_core.hpp"

namespace coarse {

// cgw v1 text format:
//   cgw v1 <n_vertices> <n_edges> <trusted_radius|inf> <basepoint>
//   v <id> <label...>     (one per vertex, ascending id)
//   e <u> <v>             (one per edge, u < v, sorted)
void write_cgw(std::ostream& out, const GraphWindow& w);
GraphWindow read_cgw(std::istream& in);
std::string to_cgw(const GraphWindow& w);
GraphWindow from_cgw(const std::string& text);
void save_cgw(const std::string& path, const GraphWindow& w);
GraphWindow load_cgw(const std::string& path);

// Vertex-set files list member ids against a window:
//   vs v1 <count>
//   <id> ...              (one per line, ascending)
void write_vs(std::ostream& out, const VertexSet& s);
VertexSet read_vs(std::istream& in, const GraphWindow& w);
void save_vs(const std::string& path, const VertexSet& s);
VertexSet load_vs(const std::string& path, const GraphWindow& w);

}  // namespace coarse
