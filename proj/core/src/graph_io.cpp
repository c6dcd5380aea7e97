#include "coarse/graph_io.hpp"

#include <fstream>
#include <sstream>

#include "coarse/error.hpp"

namespace coarse {

void write_cgw(std::ostream& out, const GraphWindow& w) {
  out << "cgw v1 " << w.size() << ' ' << w.edge_count() << ' ';
  if (w.complete()) {
    out << "inf";
  } else {
    out << w.trusted_radius();
  }
  out << ' ' << w.basepoint() << '\n';
  for (VertexId v = 0; v < w.size(); ++v) {
    out << "v " << v;
    for (auto x : w.label(v)) out << ' ' << x;
    out << '\n';
  }
  for (const auto& [a, b] : w.edges()) out << "e " << a << ' ' << b << '\n';
}

namespace {

[[noreturn]] void bad(std::size_t line, const std::string& what) {
  throw Error(ErrorCode::kFormat, "line " + std::to_string(line) + ": " + what);
}

}  // namespace

GraphWindow read_cgw(std::istream& in) {
  std::string line;
  std::size_t lineno = 1;
  if (!std::getline(in, line)) bad(lineno, "missing header");
  std::istringstream header(line);
  std::string magic, version, trust;
  std::size_t n = 0, m = 0;
  VertexId basepoint = 0;
  if (!(header >> magic >> version >> n >> m >> trust >> basepoint) || magic != "cgw" ||
      version != "v1") {
    bad(lineno, "expected 'cgw v1 <n> <m> <trusted> <basepoint>'");
  }
  std::uint32_t trusted = kInfinity;
  if (trust != "inf") {
    try {
      trusted = static_cast<std::uint32_t>(std::stoul(trust));
    } catch (const std::exception&) {
      bad(lineno, "bad trusted radius '" + trust + "'");
    }
  }
  std::vector<Label> labels(n);
  std::vector<bool> seen(n, false);
  std::vector<Edge> edges;
  edges.reserve(m);
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string tag;
    row >> tag;
    if (tag == "v") {
      std::size_t id = 0;
      if (!(row >> id) || id >= n) bad(lineno, "bad vertex id");
      if (seen[id]) bad(lineno, "duplicate vertex id");
      seen[id] = true;
      std::int64_t x = 0;
      while (row >> x) labels[id].push_back(x);
      if (!row.eof()) bad(lineno, "bad label");
    } else if (tag == "e") {
      VertexId a = 0, b = 0;
      if (!(row >> a >> b)) bad(lineno, "bad edge");
      edges.emplace_back(a, b);
    } else {
      bad(lineno, "unknown record '" + tag + "'");
    }
  }
  for (std::size_t v = 0; v < n; ++v) {
    if (!seen[v]) bad(lineno, "vertex " + std::to_string(v) + " missing");
  }
  if (edges.size() != m) bad(lineno, "edge count mismatch");
  return GraphWindow(std::move(labels), std::move(edges), trusted, basepoint);
}

std::string to_cgw(const GraphWindow& w) {
  std::ostringstream out;
  write_cgw(out, w);
  return out.str();
}

GraphWindow from_cgw(const std::string& text) {
  std::istringstream in(text);
  return read_cgw(in);
}

void save_cgw(const std::string& path, const GraphWindow& w) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kFormat, "cannot write " + path);
  write_cgw(out, w);
}

GraphWindow load_cgw(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kFormat, "cannot read " + path);
  return read_cgw(in);
}

void write_vs(std::ostream& out, const VertexSet& s) {
  out << "vs v1 " << s.size() << '\n';
  for (VertexId v : s) out << v << '\n';
}

VertexSet read_vs(std::istream& in, const GraphWindow& w) {
  std::string magic, version;
  std::size_t count = 0;
  if (!(in >> magic >> version >> count) || magic != "vs" || version != "v1") {
    throw Error(ErrorCode::kFormat, "expected 'vs v1 <count>'");
  }
  std::vector<VertexId> ids(count);
  for (auto& id : ids) {
    if (!(in >> id)) throw Error(ErrorCode::kFormat, "truncated vertex set");
  }
  return VertexSet(w, std::move(ids));
}

void save_vs(const std::string& path, const VertexSet& s) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kFormat, "cannot write " + path);
  write_vs(out, s);
}

VertexSet load_vs(const std::string& path, const GraphWindow& w) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kFormat, "cannot read " + path);
  return read_vs(in, w);
}

}  // namespace coarse
