#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "coarse/generators.hpp"
#include "coarse/graph_core.hpp"
#include "coarse/rational.hpp"

namespace coarse {

// An indexed family {A_x(r)} of subsets of one window. The generator may
// throw kUntrusted when A_x(r) is not fully inside the window.
struct PersistentFamily {
  std::string name;
  const GraphWindow* window = nullptr;
  std::function<VertexSet(VertexId x, std::uint32_t r)> generate;
  Rational alpha{0};
  std::uint32_t k = 1;
  std::uint32_t r0 = 1;

  // delta = 1 - alpha / 2.
  Rational default_delta() const { return Rational(1) - alpha / 2; }
};

// Balls B(x, r) of a window; alpha = 1 / (d + 1) for the basepoint degree d.
PersistentFamily balls_family(const GraphWindow& w);
// S(x, r)^{+t}; alpha = 1 / |B(t)| at the basepoint.
PersistentFamily thickened_sphere_family(const GraphWindow& w, std::uint32_t t);
// Tree annuli A_x(k); alpha = 1/8.
PersistentFamily tree_annulus_family(const TreeProduct& tp);
// DL sets A_x(r) = V_{(x1^r, x2)}(r); alpha = 1/4.
PersistentFamily dl_family(const DLWindow& dw);

struct PersistenceRow {
  std::uint32_t r = 0;
  std::size_t size = 0;
  Rational worst{1};
  VertexId worst_x = 0;
  VertexId worst_y = 0;
};

struct PersistenceReport {
  bool containment = true;
  bool uniform = true;
  bool overlap = true;
  Rational worst{1};
  std::vector<PersistenceRow> rows;
  // First violation found, with its counterexample.
  std::optional<std::string> violation;

  bool passed() const { return containment && uniform && overlap; }
};

// Checks A_x(r) in B(x, 4r), |A_x(r)| = |A_y(r)| and |A_x(r) cap A_y(r)| >=
// alpha |A(r)| for every probe x and every y != x with d(x, y) <= k.
PersistenceReport persistence_check(const PersistentFamily& fam,
                                    std::span<const std::uint32_t> radii,
                                    std::span<const VertexId> probes);

struct SeparationVerdict {
  std::vector<VertexSet> components;  // k-components of window \ S^{+L}
  std::vector<std::size_t> qualifying;  // indices with a point >= D from S
  bool separates = false;  // at least two qualifying components
  bool trusted = true;
};

// Distance in the verdict is measured to S itself (not to S^{+L}).
SeparationVerdict separation_witness(const VertexSet& s, std::uint32_t k, std::uint32_t L,
                                     std::uint32_t D);

struct Partition {
  std::vector<VertexSet> parts;
  // True when the parts are the k-components of window \ separator.
  bool checked = false;
};

Partition coarse_partition(const VertexSet& separator, std::uint32_t k);

struct ScanResult {
  std::size_t s = 0;
  VertexId point = 0;
  std::size_t part = 0;  // i0
  VertexSet set;  // A_{x_s}(r)
  VertexSet cut;  // A_{x_s}(r) cap separator
  // |A_{x_p} cap X_{i0}| for p = 0..s.
  std::vector<std::size_t> in_part;
  std::size_t size = 0;  // |A(r)|
  bool parts_ok = false;
  bool drop_ok = false;  // the (*) system at s - 1 and s
  bool cut_certified = false;
};

// Walks the k-path and returns the first index s whose set drops below
// delta |A| in the dominant part. Throws kPrecondition with the offending
// measurement when the hypotheses fail.
ScanResult scan_for_cut(const PersistentFamily& fam, std::span<const VertexId> path,
                        const Partition& partition, const VertexSet& separator,
                        const Rational& delta, std::uint32_t r);

// A BFS geodesic from a to b, choosing the smallest-id predecessor.
std::vector<VertexId> geodesic_path(const GraphWindow& w, VertexId a, VertexId b);

// Self-contained scan set-ups used by the CLI and the experiments.
struct ScanFixture {
  std::shared_ptr<const void> owner;
  const GraphWindow* window = nullptr;
  PersistentFamily family;
  VertexSet separator;
  std::vector<VertexId> path;
  std::uint32_t r = 0;
};

// Z^2 box, balls of radius r, separator x = 0, path (-(r+1), 0) -> (r+1, 0).
ScanFixture balls_scan_fixture(std::uint32_t r, std::uint32_t halfwidth = 12);
// T3 x T3 annuli of index k, separator S(a_0, k + 1) x T, path up the ray.
ScanFixture tree_annulus_scan_fixture(std::uint32_t k);
// DL(2, 2) sets of index r, separator b_1 = 0, path climbing in b_1.
ScanFixture dl_scan_fixture(std::uint32_t r);

}  // namespace coarse
