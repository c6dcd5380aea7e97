#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "coarse/graph_core.hpp"
#include "coarse/rational.hpp"

namespace coarse {

enum class InvariantKind { kCheeger, kCut, kPoincare };
enum class Method { kExhaustive, kBranchAndBound, kSweep, kSampled };

const char* to_string(InvariantKind kind);
const char* to_string(Method method);

struct InvariantReport {
  InvariantKind kind = InvariantKind::kCheeger;
  Method method = Method::kExhaustive;
  std::optional<Rational> exact;
  Rational lower{0};
  Rational upper{0};
  VertexSet witness;
  // Poincare only: the witness function, indexed like the point list.
  std::vector<Rational> function;
  std::uint32_t r = 0;
  std::optional<Rational> delta;
  // Cheeger: the trivial bound beta_X(r). Cut: beta_X(r) used by lambda.
  std::optional<std::uint64_t> beta;
  // Cut: lambda * h_r(A) * |A| when the Cheeger side was computed.
  std::optional<Rational> cheeger_bound;
  // Poincare sampled mode: best ratio found by the floating-point challenger.
  std::optional<double> challenger;
  bool challenger_ok = true;
  bool trusted = true;
  std::uint64_t nodes = 0;
};

struct CheegerOptions {
  bool exhaustive = true;
  std::size_t cap = 24;
};

// h_r(A) = min |d_r B cap A| / |B| over B in A with 0 < |B| <= |A| / 2.
// Exhaustive mode throws kBudgetExceeded when |A| > cap (cap <= 63).
InvariantReport cheeger(const VertexSet& a, std::uint32_t r, const CheegerOptions& opts = {});

// |d_r B cap A| / |B|, evaluated directly from BFS (used to re-check witnesses).
Rational cheeger_ratio(const VertexSet& a, const VertexSet& b, std::uint32_t r);

struct CutOptions {
  bool exact = true;
  // Search-node budget; when exhausted the report carries an interval.
  std::uint64_t budget = 20'000'000;
  // Attach the Cheeger lower bound when |A| fits the exhaustive cap.
  bool with_cheeger_bound = true;
};

// cut^delta_r(A): the least |S|, S in A, such that every r-coarse component
// of A \ S has at most delta |A| vertices. If no proper S works the value is
// |A| with witness A.
InvariantReport cut(const VertexSet& a, std::uint32_t r, const Rational& delta,
                    const CutOptions& opts = {});

// Independent re-check of a cut witness.
bool is_cut(const VertexSet& a, const VertexSet& s, std::uint32_t r, const Rational& delta);

// lambda * h * |A| with lambda = min(1/4, (1 - delta)/2) / beta.
Rational cut_lower_from_cheeger(const Rational& h_lower, std::size_t size_a,
                                const Rational& delta, std::uint64_t beta);
// Computes h_r(A) exhaustively and beta_X(r) over the window's trusted probes.
Rational cut_lower_from_cheeger(const VertexSet& a, std::uint32_t r, const Rational& delta);

// (Z, d, nu): points with their pairwise window distances and a measure.
struct MetricMeasureSet {
  // Window the points come from (may be null for abstract spaces).
  const GraphWindow* window = nullptr;
  std::vector<VertexId> points;
  std::vector<std::vector<std::uint32_t>> dist;
  std::vector<Rational> measure;

  std::size_t size() const { return points.size(); }
};

// Counting measure on A with distances from the window.
MetricMeasureSet metric_measure_set(const VertexSet& a);

struct PoincareOptions {
  bool sampled = false;
  std::uint64_t seed = 1;
  std::uint32_t starts = 32;
  std::size_t max_points = 26;
};

// Two-level upper bound for h^1_k: inf over f = 1_B - nu(B)/nu(Z). Exact
// (and flagged so) only when |Z| <= 20.
InvariantReport poincare_l1(const MetricMeasureSet& ms, std::uint32_t k,
                            const PoincareOptions& opts = {});

// ||grad_k f||_1 / ||f - mean||_1 for an arbitrary function (double precision).
double poincare_ratio(const MetricMeasureSet& ms, std::uint32_t k, const std::vector<double>& f);

// Greedy maximal eps-separated subset of A in ascending id order. Both net
// properties are re-checked; a failure throws kInternal.
VertexSet separated_net(const VertexSet& a, std::uint32_t eps);

}  // namespace coarse
