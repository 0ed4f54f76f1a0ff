#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "hypqg/cayley.hpp"
#include "hypqg/qg.hpp"
#include "hypqg/rational.hpp"

namespace hypqg {

struct GeodeticCounterexample {
  std::size_t u = 0, v = 0;  // ball vertex indices
  Word first, second;        // two distinct geodesics from u to v
};

struct GeodeticResult {
  bool geodetic = true;
  std::optional<GeodeticCounterexample> counterexample;
  // Ordered vertex pairs (u, v), u != v, whose distance the ball certifies,
  // and those it does not (skipped).
  std::uint64_t certified_pairs = 0;
  std::uint64_t skipped_pairs = 0;
};

// Unique geodesics between all certified vertex pairs. By vertex
// transitivity it is enough to count geodesics from the identity; the
// counterexample is (identity, smallest vertex with two geodesics).
GeodeticResult is_geodetic(const Ball& ball);

struct IecRecord {
  std::size_t base = 0;  // ball vertex (always the identity after translation)
  Word loop;             // length 2n+1
  std::int64_t n = 0;
};

// Isometrically embedded odd circuits with n <= max_n, one per
// translation/rotation/reflection class, as the lexicographically smallest
// word. Needs ball radius >= max_n.
std::vector<IecRecord> find_iecs(std::shared_ptr<const Ball> ball,
                                 std::int64_t max_n);

struct SamplingPolicy {
  bool exhaustive = true;
  std::uint64_t seed = 0;
  std::size_t count = 0;

  static SamplingPolicy all() { return {}; }
  static SamplingPolicy sampled(std::uint64_t seed, std::size_t count) {
    return {false, seed, count};
  }
  std::string describe() const;
};

struct BigonReport {
  std::int64_t radius = 0;
  SamplingPolicy policy;
  // width_by_distance[d]: max Hausdorff distance between two geodesics with
  // endpoints at distance d (examined pairs only).
  std::vector<std::int64_t> width_by_distance;
  // Extremal bigon: endpoint g (from the identity) and two geodesics.
  Word endpoint;
  Word first, second;
  std::int64_t max_width = 0;
  std::uint64_t endpoints_examined = 0;
};

inline constexpr std::uint64_t kDefaultBigonWork = 2'000'000'000;

// Exact: for each endpoint g and each vertex x of the geodesic interval
// [e, g], a bottleneck pass finds the geodesic farthest from x.
BigonReport bigon_width(const GroupModel& model, std::int64_t radius,
                        SamplingPolicy policy = SamplingPolicy::all(),
                        std::uint64_t max_work = kDefaultBigonWork);

struct DeltaReport {
  std::int64_t radius = 0;
  SamplingPolicy policy;
  Rational delta_hat{0};
  std::uint64_t triangles = 0;
  std::uint64_t skipped_uncertified = 0;
  // Vertices (as canonical words) of a triangle attaining delta_hat.
  std::vector<Word> extremal;
  // Sides are the lexicographically smallest geodesics, so delta_hat is a
  // lower bound for the thinness constant.
  bool canonical_sides_only = true;
  bool complete = true;
};

// Thinness defect of triangles (e, y, z), y and z in the ball.
DeltaReport delta_estimate(std::shared_ptr<const Ball> ball,
                           SamplingPolicy policy = SamplingPolicy::all(),
                           unsigned threads = 0);

// Defect of one triangle with the given side words (closing up).
std::int64_t triangle_defect(const Metric& metric, const Element& a,
                             const Word& ab, const Word& bc, const Word& ca);

struct LocalToGlobalReport {
  std::int64_t L = 0;
  QGParams params = QGParams::geodesic();
  std::size_t max_len = 0;
  std::uint64_t words = 0;  // L-locally p-quasigeodesic words, length >= 1
  std::uint64_t globally_ok = 0;
  std::optional<Word> first_failure;
  // Largest (j-i)/d over subpaths with d > 0; infinite when loops exist.
  Rational worst_lambda{1};
  std::uint64_t loop_count = 0;
  std::vector<Word> loops;  // first few, lexicographic
  bool exhaustive = true;
  std::uint64_t nodes = 0;
};

LocalToGlobalReport local_to_global_probe(const GroupModel& model,
                                          std::int64_t L, const QGParams& p,
                                          std::size_t max_len,
                                          std::uint64_t budget = 100'000'000,
                                          std::size_t keep_loops = 64);

std::string bigon_csv(const BigonReport& r);
std::string delta_csv(const std::vector<DeltaReport>& reports);

}  // namespace hypqg
