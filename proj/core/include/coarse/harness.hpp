#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "coarse/graph_core.hpp"
#include "coarse/rational.hpp"

namespace coarse {

struct ExperimentSpec {
  std::string name;
  std::map<std::string, std::string> params;
  std::uint64_t seed = 1;
  std::filesystem::path out_dir;

  std::uint32_t get_u32(const std::string& key, std::uint32_t fallback) const;
  Rational get_rational(const std::string& key, const Rational& fallback) const;
  // "a..b" or a single value.
  std::vector<std::uint32_t> get_range(const std::string& key, std::uint32_t lo,
                                       std::uint32_t hi) const;
};

// INI-style config: one [section] per experiment, keys are parameters;
// `seed` is read separately.
std::vector<ExperimentSpec> load_experiment_specs(const std::filesystem::path& path);
std::vector<ExperimentSpec> parse_experiment_specs(const std::string& text);

// Hex SHA-256.
std::string sha256_hex(const std::string& data);
// Hash of the name, seed and parameters (not the output directory).
std::string spec_hash(const ExperimentSpec& spec);

enum class Verdict { kPass, kFail, kInconclusive };
const char* to_string(Verdict v);

struct Assertion {
  std::string name;
  Verdict verdict = Verdict::kPass;
  std::string detail;
};

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  std::size_t column(const std::string& name) const;
};

void write_csv(std::ostream& out, const Table& t);
Table read_csv(std::istream& in);

struct PlotSpec {
  std::string title;
  std::string x;
  std::vector<std::string> y;
  bool log_y = false;
};

// Polyline plot of the named columns; cells that do not parse as numbers
// ("p/q" allowed) are skipped.
std::string render_svg(const Table& t, const PlotSpec& plot);

struct RunRecord {
  std::string experiment;
  std::string spec_hash;
  std::uint64_t seed = 1;
  Table table;
  std::vector<Assertion> assertions;
  std::string environment;
  double seconds = 0;
  std::size_t cache_hits = 0;
  std::size_t cache_misses = 0;

  // Any failure wins, then any inconclusive assertion.
  Verdict overall() const;
};

// Content-addressed store of cgw files: objects/<sha256>.cgw plus a key
// index keys/<sha256(key)> holding the object hash. get_or_build serializes
// builds, so each key is written by one builder.
class WindowCache {
 public:
  explicit WindowCache(std::filesystem::path dir);

  const std::filesystem::path& dir() const { return dir_; }
  std::string store(const GraphWindow& w);
  // Throws kHashMismatch when the stored bytes do not hash to `hash`.
  GraphWindow load(const std::string& hash) const;
  bool contains(const std::string& hash) const;
  GraphWindow get_or_build(const std::string& key, const std::function<GraphWindow()>& build);

  std::size_t hits() const;
  std::size_t misses() const;

 private:
  std::filesystem::path dir_;
  mutable std::mutex mutex_;
  std::size_t hits_ = 0;
  std::size_t misses_ = 0;
};

// Cache directory from COARSE_CUT_CACHE, if set.
std::optional<std::filesystem::path> cache_dir_from_env();

struct Experiment {
  std::string name;
  std::string description;
  PlotSpec plot;
  std::function<RunRecord(const ExperimentSpec&, WindowCache*)> run;
};

const std::vector<Experiment>& experiment_registry();
// Throws kRegistry for an unknown name.
const Experiment& find_experiment(const std::string& name);

// Runs the experiment and, when spec.out_dir is set, writes <name>.csv,
// <name>.svg and <name>.verdict. Budget exhaustion yields an inconclusive
// verdict with the partial table.
RunRecord run_experiment(const ExperimentSpec& spec, WindowCache* cache = nullptr);

void write_outputs(const RunRecord& rec, const std::filesystem::path& dir);
// Rebuilds every <name>.svg in `dir` from its CSV; returns the names found.
std::vector<std::string> regenerate_plots(const std::filesystem::path& dir);

}  // namespace coarse
