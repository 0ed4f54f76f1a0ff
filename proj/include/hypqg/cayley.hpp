#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "hypqg/groups.hpp"

namespace hypqg {

inline constexpr std::size_t kDefaultMaxBallVertices = 5'000'000;
inline constexpr int kBallCacheFormatVersion = 1;

// Exact finite ball of a Cayley graph around the identity. Vertex 0 is the
// identity; vertices are numbered in BFS order, expanding each frontier
// vertex by letters in alphabet order. Immutable after construction.
class Ball {
 public:
  struct Edge {
    Letter letter;
    std::uint32_t target;
  };

  const GroupModel& model() const { return model_; }
  std::int64_t radius() const { return radius_; }
  std::size_t size() const { return vertices_.size(); }

  const Element& vertex(std::size_t v) const { return vertices_[v]; }
  std::int64_t dist(std::size_t v) const { return dist_[v]; }
  // In-ball neighbours, in letter order.
  std::span<const Edge> adjacency(std::size_t v) const {
    return {edges_.data() + offsets_[v], edges_.data() + offsets_[v + 1]};
  }
  std::optional<std::size_t> find(const Element& g) const;
  // Vertex reached from v by letter x, if it lies in the ball.
  std::optional<std::size_t> step(std::size_t v, Letter x) const;
  // Number of vertices at each distance 0..R.
  std::vector<std::size_t> sphere_sizes() const;

 private:
  friend Ball build_ball(const GroupModel&, std::int64_t, std::size_t);
  friend Ball ball_from_json_text(const GroupModel&, const std::string&);

  explicit Ball(GroupModel model) : model_(std::move(model)) {}

  GroupModel model_;
  std::int64_t radius_ = 0;
  std::vector<Element> vertices_;
  std::vector<std::int64_t> dist_;
  std::vector<std::size_t> offsets_;
  std::vector<Edge> edges_;
  std::unordered_map<Element, std::uint32_t, ElementHash> index_;
};

// Throws ResourceError (naming the radius being built) when the vertex
// count would exceed max_vertices.
Ball build_ball(const GroupModel& model, std::int64_t radius,
                std::size_t max_vertices = kDefaultMaxBallVertices);

// Graph distance inside the ball. Requires 2*min(|u|,|v|) + max(|u|,|v|)
// <= R so that some geodesic between u and v stays inside; otherwise
// NotCertified.
std::int64_t ball_distance(const Ball& ball, std::size_t u, std::size_t v);

// DOT text; vertices labelled by canonical words, edges by generator.
std::string export_dot(const Ball& ball);

// JSON cache keyed by (model spec, radius, format version).
std::string ball_to_json_text(const Ball& ball);
Ball ball_from_json_text(const GroupModel& model, const std::string& text);
std::filesystem::path ball_cache_path(const std::filesystem::path& dir,
                                      const GroupModel& model,
                                      std::int64_t radius);
// Loads from the cache when a matching file exists, otherwise builds and
// writes it.
Ball build_ball_cached(const GroupModel& model, std::int64_t radius,
                       const std::filesystem::path& dir,
                       std::size_t max_vertices = kDefaultMaxBallVertices);

// Exact word metric: closed form when the model has one, otherwise lookups
// in a certified ball (|g| is exact iff g lies in the ball; anything else
// throws NotCertified, never a wrong number).
class Metric {
 public:
  explicit Metric(GroupModel model);
  explicit Metric(std::shared_ptr<const Ball> ball);

  // Closed form when available, otherwise a ball of the given radius.
  static Metric for_model(const GroupModel& model, std::int64_t radius);

  const GroupModel& model() const { return model_; }
  bool uses_ball() const { return ball_ != nullptr; }
  const Ball* ball() const { return ball_.get(); }

  std::int64_t norm(const Element& g) const;
  // d(a, b) = |a^-1 b|.
  std::int64_t distance(const Element& a, const Element& b) const;
  std::int64_t word_metric(const Word& w) const {
    return norm(model_.evaluate(w));
  }

 private:
  GroupModel model_;
  std::shared_ptr<const Ball> ball_;
};

struct GeodesicEnumeration {
  std::vector<Word> words;  // lexicographic order
  bool truncated = false;
};

// All geodesic words from the identity to the element `target` represents.
GeodesicEnumeration enumerate_geodesics(const Metric& metric,
                                        const Word& target, std::size_t limit);

// Lexicographically smallest geodesic word from `from` to `to`.
Word canonical_geodesic(const Metric& metric, const Element& from,
                        const Element& to);

}  // namespace hypqg
