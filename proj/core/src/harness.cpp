#include "coarse/harness.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <openssl/evp.h>

#include "coarse/error.hpp"
#include "coarse/graph_io.hpp"

namespace coarse {

namespace {

std::uint64_t parse_u64(const std::string& text, const std::string& what) {
  std::uint64_t v = 0;
  const auto* end = text.data() + text.size();
  auto [p, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc{} || p != end) {
    throw Error(ErrorCode::kFormat, "bad integer for " + what + ": '" + text + "'");
  }
  return v;
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return {};
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

}  // namespace

std::uint32_t ExperimentSpec::get_u32(const std::string& key, std::uint32_t fallback) const {
  auto it = params.find(key);
  if (it == params.end()) return fallback;
  return static_cast<std::uint32_t>(parse_u64(it->second, key));
}

Rational ExperimentSpec::get_rational(const std::string& key, const Rational& fallback) const {
  auto it = params.find(key);
  if (it == params.end()) return fallback;
  return parse_rational(it->second);
}

std::vector<std::uint32_t> ExperimentSpec::get_range(const std::string& key, std::uint32_t lo,
                                                     std::uint32_t hi) const {
  auto it = params.find(key);
  if (it != params.end()) {
    const auto& text = it->second;
    const auto dots = text.find("..");
    if (dots == std::string::npos) {
      lo = hi = static_cast<std::uint32_t>(parse_u64(trim(text), key));
    } else {
      lo = static_cast<std::uint32_t>(parse_u64(trim(text.substr(0, dots)), key));
      hi = static_cast<std::uint32_t>(parse_u64(trim(text.substr(dots + 2)), key));
    }
  }
  if (lo > hi) throw Error(ErrorCode::kInvalidArgument, "empty range for " + key);
  std::vector<std::uint32_t> out;
  for (auto v = lo; v <= hi; ++v) out.push_back(v);
  return out;
}

std::vector<ExperimentSpec> parse_experiment_specs(const std::string& text) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  std::istringstream in(text);
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw Error(ErrorCode::kFormat, e.what());
  }
  std::vector<ExperimentSpec> out;
  for (const auto& [section, body] : tree) {
    if (!body.data().empty()) {
      throw Error(ErrorCode::kFormat, "key '" + section + "' outside any [experiment] section");
    }
    ExperimentSpec spec;
    spec.name = section;
    for (const auto& [key, value] : body) {
      if (key == "seed") {
        spec.seed = parse_u64(value.data(), "seed");
      } else {
        spec.params[key] = value.data();
      }
    }
    out.push_back(std::move(spec));
  }
  return out;
}

std::vector<ExperimentSpec> load_experiment_specs(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kFormat, "cannot read config " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_experiment_specs(buf.str());
}

std::string sha256_hex(const std::string& data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw Error(ErrorCode::kInternal, "SHA-256 failed");
  }
  std::ostringstream out;
  out << std::hex << std::setfill('0');
  for (unsigned int i = 0; i < len; ++i) out << std::setw(2) << static_cast<int>(digest[i]);
  return out.str();
}

std::string spec_hash(const ExperimentSpec& spec) {
  std::ostringstream s;
  s << spec.name << '\n' << spec.seed << '\n';
  for (const auto& [k, v] : spec.params) s << k << '=' << v << '\n';
  return sha256_hex(s.str());
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::kPass: return "pass";
    case Verdict::kFail: return "fail";
    case Verdict::kInconclusive: return "inconclusive";
  }
  return "?";
}

std::size_t Table::column(const std::string& name) const {
  auto it = std::find(columns.begin(), columns.end(), name);
  if (it == columns.end()) throw Error(ErrorCode::kInvalidArgument, "no column " + name);
  return static_cast<std::size_t>(it - columns.begin());
}

namespace {

void write_row(std::ostream& out, const std::vector<std::string>& cells) {
  // A lone empty cell would read back as a blank line.
  if (cells.size() == 1 && cells[0].empty()) {
    out << "\"\"\n";
    return;
  }
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out << ',';
    const auto& c = cells[i];
    if (c.find_first_of(",\"\n") == std::string::npos) {
      out << c;
    } else {
      out << '"';
      for (char ch : c) out << (ch == '"' ? "\"\"" : std::string(1, ch));
      out << '"';
    }
  }
  out << '\n';
}

std::vector<std::string> split_row(const std::string& line) {
  std::vector<std::string> cells(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cells.back() += '"';
        ++i;
      } else if (ch == '"') {
        quoted = false;
      } else {
        cells.back() += ch;
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      cells.emplace_back();
    } else if (ch != '\r') {
      cells.back() += ch;
    }
  }
  return cells;
}

}  // namespace

void write_csv(std::ostream& out, const Table& t) {
  write_row(out, t.columns);
  for (const auto& r : t.rows) write_row(out, r);
}

Table read_csv(std::istream& in) {
  Table t;
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::kFormat, "empty CSV");
  t.columns = split_row(line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto row = split_row(line);
    if (row.size() != t.columns.size()) {
      throw Error(ErrorCode::kFormat, "CSV row has " + std::to_string(row.size()) +
                                          " cells, header has " +
                                          std::to_string(t.columns.size()));
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

namespace {

std::optional<double> cell_value(const std::string& cell) {
  if (cell.empty()) return std::nullopt;
  try {
    if (cell.find('/') != std::string::npos) return to_double(parse_rational(cell));
    std::size_t used = 0;
    const double v = std::stod(cell, &used);
    if (used != cell.size()) return std::nullopt;
    return v;
  } catch (...) {
    return std::nullopt;
  }
}

std::string fmt(double v) {
  std::ostringstream s;
  s << std::setprecision(4) << v;
  return s.str();
}

std::string escape_xml(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string render_svg(const Table& t, const PlotSpec& plot) {
  constexpr double W = 640, H = 400, L = 70, R = 160, T = 40, B = 50;
  const std::size_t xc = t.column(plot.x);
  struct Series {
    std::string name;
    std::vector<std::pair<double, double>> pts;
  };
  std::vector<Series> series;
  double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
  for (const auto& name : plot.y) {
    Series s{name, {}};
    const std::size_t yc = t.column(name);
    for (const auto& row : t.rows) {
      auto x = cell_value(row[xc]);
      auto y = cell_value(row[yc]);
      if (!x || !y || (plot.log_y && *y <= 0)) continue;
      const double yy = plot.log_y ? std::log10(*y) : *y;
      s.pts.emplace_back(*x, yy);
      x0 = std::min(x0, *x);
      x1 = std::max(x1, *x);
      y0 = std::min(y0, yy);
      y1 = std::max(y1, yy);
    }
    series.push_back(std::move(s));
  }
  if (x0 > x1) x0 = 0, x1 = 1;
  if (y0 > y1) y0 = 0, y1 = 1;
  if (!plot.log_y) y0 = std::min(y0, 0.0);
  if (x1 == x0) x1 = x0 + 1;
  if (y1 == y0) y1 = y0 + 1;
  const auto px = [&](double x) { return L + (x - x0) / (x1 - x0) * (W - L - R); };
  const auto py = [&](double y) { return H - B - (y - y0) / (y1 - y0) * (H - T - B); };

  static const char* colours[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << L << "\" y=\"24\" font-size=\"14\">" << escape_xml(plot.title) << "</text>\n";
  out << "<line x1=\"" << L << "\" y1=\"" << H - B << "\" x2=\"" << W - R << "\" y2=\"" << H - B
      << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << L << "\" y1=\"" << T << "\" x2=\"" << L << "\" y2=\"" << H - B
      << "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double x = x0 + (x1 - x0) * i / 4;
    const double y = y0 + (y1 - y0) * i / 4;
    out << "<text x=\"" << px(x) << "\" y=\"" << H - B + 18 << "\" text-anchor=\"middle\">"
        << fmt(x) << "</text>\n";
    out << "<text x=\"" << L - 6 << "\" y=\"" << py(y) + 4 << "\" text-anchor=\"end\">"
        << (plot.log_y ? "1e" + fmt(y) : fmt(y)) << "</text>\n";
    out << "<line x1=\"" << L << "\" y1=\"" << py(y) << "\" x2=\"" << W - R << "\" y2=\"" << py(y)
        << "\" stroke=\"#dddddd\"/>\n";
  }
  out << "<text x=\"" << (L + W - R) / 2 << "\" y=\"" << H - 10 << "\" text-anchor=\"middle\">"
      << escape_xml(plot.x) << "</text>\n";
  for (std::size_t i = 0; i < series.size(); ++i) {
    const char* colour = colours[i % 6];
    out << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"2\" points=\"";
    for (const auto& [x, y] : series[i].pts) out << px(x) << ',' << py(y) << ' ';
    out << "\"/>\n";
    for (const auto& [x, y] : series[i].pts) {
      out << "<circle cx=\"" << px(x) << "\" cy=\"" << py(y) << "\" r=\"3\" fill=\"" << colour
          << "\"/>\n";
    }
    const double ly = T + 16 * static_cast<double>(i);
    out << "<line x1=\"" << W - R + 12 << "\" y1=\"" << ly << "\" x2=\"" << W - R + 32 << "\" y2=\""
        << ly << "\" stroke=\"" << colour << "\" stroke-width=\"2\"/>\n";
    out << "<text x=\"" << W - R + 38 << "\" y=\"" << ly + 4 << "\">" << escape_xml(series[i].name)
        << "</text>\n";
  }
  out << "</svg>\n";
  return out.str();
}

Verdict RunRecord::overall() const {
  Verdict v = Verdict::kPass;
  for (const auto& a : assertions) {
    if (a.verdict == Verdict::kFail) return Verdict::kFail;
    if (a.verdict == Verdict::kInconclusive) v = Verdict::kInconclusive;
  }
  return v;
}

WindowCache::WindowCache(std::filesystem::path dir) : dir_(std::move(dir)) {
  std::filesystem::create_directories(dir_ / "objects");
  std::filesystem::create_directories(dir_ / "keys");
}

std::string WindowCache::store(const GraphWindow& w) {
  const std::string text = to_cgw(w);
  const std::string hash = sha256_hex(text);
  const auto path = dir_ / "objects" / (hash + ".cgw");
  if (!std::filesystem::exists(path)) {
    // Write then rename, so readers never see a partial object.
    const auto tmp = path.string() + ".tmp";
    {
      std::ofstream out(tmp, std::ios::binary);
      out << text;
      if (!out) throw Error(ErrorCode::kFormat, "cannot write " + tmp);
    }
    std::filesystem::rename(tmp, path);
  }
  return hash;
}

bool WindowCache::contains(const std::string& hash) const {
  return std::filesystem::exists(dir_ / "objects" / (hash + ".cgw"));
}

GraphWindow WindowCache::load(const std::string& hash) const {
  const auto path = dir_ / "objects" / (hash + ".cgw");
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kUnknownVertex, "no cached window " + hash);
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  if (sha256_hex(text) != hash) {
    throw Error(ErrorCode::kHashMismatch, "cached window " + hash + " is corrupt");
  }
  return from_cgw(text);
}

GraphWindow WindowCache::get_or_build(const std::string& key,
                                      const std::function<GraphWindow()>& build) {
  std::lock_guard lock(mutex_);
  const auto key_path = dir_ / "keys" / sha256_hex(key);
  std::ifstream in(key_path);
  std::string hash;
  if (in && std::getline(in, hash) && contains(hash)) {
    ++hits_;
    return load(hash);
  }
  ++misses_;
  GraphWindow w = build();
  hash = store(w);
  std::ofstream out(key_path);
  out << hash << '\n' << key << '\n';
  return w;
}

std::size_t WindowCache::hits() const {
  std::lock_guard lock(mutex_);
  return hits_;
}

std::size_t WindowCache::misses() const {
  std::lock_guard lock(mutex_);
  return misses_;
}

std::optional<std::filesystem::path> cache_dir_from_env() {
  const char* dir = std::getenv("COARSE_CUT_CACHE");
  if (dir == nullptr || *dir == '\0') return std::nullopt;
  return std::filesystem::path(dir);
}

const Experiment& find_experiment(const std::string& name) {
  for (const auto& e : experiment_registry()) {
    if (e.name == name) return e;
  }
  throw Error(ErrorCode::kRegistry, "unknown experiment '" + name + "'");
}

namespace {

std::string environment_stamp() {
  std::ostringstream s;
#if defined(__clang__)
  s << "clang " << __clang_version__;
#elif defined(__GNUC__)
  s << "gcc " << __VERSION__;
#endif
#ifdef NDEBUG
  s << ", release";
#else
  s << ", debug";
#endif
  return s.str();
}

}  // namespace

RunRecord run_experiment(const ExperimentSpec& spec, WindowCache* cache) {
  const Experiment& exp = find_experiment(spec.name);
  const auto hits0 = cache ? cache->hits() : 0;
  const auto misses0 = cache ? cache->misses() : 0;
  const auto t0 = std::chrono::steady_clock::now();
  RunRecord rec = exp.run(spec, cache);
  rec.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  rec.experiment = spec.name;
  rec.seed = spec.seed;
  rec.spec_hash = spec_hash(spec);
  rec.environment = environment_stamp();
  if (cache) {
    rec.cache_hits = cache->hits() - hits0;
    rec.cache_misses = cache->misses() - misses0;
  }
  if (!spec.out_dir.empty()) write_outputs(rec, spec.out_dir);
  return rec;
}

void write_outputs(const RunRecord& rec, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  {
    std::ofstream out(dir / (rec.experiment + ".csv"), std::ios::binary);
    write_csv(out, rec.table);
  }
  {
    std::ofstream out(dir / (rec.experiment + ".svg"), std::ios::binary);
    out << render_svg(rec.table, find_experiment(rec.experiment).plot);
  }
  std::ofstream out(dir / (rec.experiment + ".verdict"), std::ios::binary);
  out << "experiment " << rec.experiment << '\n'
      << "spec " << rec.spec_hash << '\n'
      << "seed " << rec.seed << '\n'
      << "environment " << rec.environment << '\n'
      << "seconds " << std::fixed << std::setprecision(3) << rec.seconds << '\n'
      << "cache hits " << rec.cache_hits << " misses " << rec.cache_misses << '\n';
  for (const auto& a : rec.assertions) {
    out << to_string(a.verdict) << ' ' << a.name;
    if (!a.detail.empty()) out << " : " << a.detail;
    out << '\n';
  }
  out << "overall " << to_string(rec.overall()) << '\n';
}

std::vector<std::string> regenerate_plots(const std::filesystem::path& dir) {
  std::vector<std::string> names;
  for (const auto& e : experiment_registry()) {
    const auto csv = dir / (e.name + ".csv");
    if (!std::filesystem::exists(csv)) continue;
    std::ifstream in(csv, std::ios::binary);
    const Table t = read_csv(in);
    std::ofstream out(dir / (e.name + ".svg"), std::ios::binary);
    out << render_svg(t, e.plot);
    names.push_back(e.name);
  }
  return names;
}

}  // namespace coarse
