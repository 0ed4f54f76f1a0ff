#include "hypqg/cayley.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "hypqg/error.hpp"

namespace hypqg {

std::optional<std::size_t> Ball::find(const Element& g) const {
  const auto it = index_.find(g);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::size_t> Ball::step(std::size_t v, Letter x) const {
  for (const Edge& e : adjacency(v)) {
    if (e.letter == x) return e.target;
  }
  return std::nullopt;
}

std::vector<std::size_t> Ball::sphere_sizes() const {
  std::vector<std::size_t> out(static_cast<std::size_t>(radius_) + 1, 0);
  for (auto d : dist_) ++out[static_cast<std::size_t>(d)];
  return out;
}

Ball build_ball(const GroupModel& model, std::int64_t radius,
                std::size_t max_vertices) {
  if (radius < 0) throw ConfigError("ball radius must be >= 0");
  Ball ball(model);
  ball.radius_ = radius;
  ball.vertices_.push_back(model.identity());
  ball.dist_.push_back(0);
  ball.index_.emplace(ball.vertices_.back(), 0);
  const std::size_t letters = model.alphabet().size();
  ball.offsets_.push_back(0);
  for (std::size_t v = 0; v < ball.vertices_.size(); ++v) {
    for (std::size_t xi = 0; xi < letters; ++xi) {
      const auto x = static_cast<Letter>(xi);
      Element next = model.times(ball.vertices_[v], x);
      auto it = ball.index_.find(next);
      if (it == ball.index_.end()) {
        if (ball.dist_[v] >= radius) continue;
        if (ball.vertices_.size() >= max_vertices) {
          throw ResourceError("ball of " + model.spec() + " exceeds " +
                              std::to_string(max_vertices) +
                              " vertices at radius " +
                              std::to_string(ball.dist_[v] + 1));
        }
        const auto id = static_cast<std::uint32_t>(ball.vertices_.size());
        it = ball.index_.emplace(next, id).first;
        ball.vertices_.push_back(std::move(next));
        ball.dist_.push_back(ball.dist_[v] + 1);
      }
      ball.edges_.push_back({x, it->second});
    }
    ball.offsets_.push_back(ball.edges_.size());
  }
  return ball;
}

std::int64_t ball_distance(const Ball& ball, std::size_t u, std::size_t v) {
  if (u >= ball.size() || v >= ball.size()) {
    throw PreconditionError("vertex index outside the ball");
  }
  const auto du = ball.dist(u);
  const auto dv = ball.dist(v);
  if (2 * std::min(du, dv) + std::max(du, dv) > ball.radius()) {
    throw NotCertified("pair at distances " + std::to_string(du) + "," +
                       std::to_string(dv) + " in a radius " +
                       std::to_string(ball.radius()) + " ball");
  }
  if (u == v) return 0;
  std::vector<std::int64_t> seen(ball.size(), -1);
  std::deque<std::size_t> queue{u};
  seen[u] = 0;
  while (!queue.empty()) {
    const auto w = queue.front();
    queue.pop_front();
    for (const auto& e : ball.adjacency(w)) {
      if (seen[e.target] >= 0) continue;
      seen[e.target] = seen[w] + 1;
      if (e.target == v) return seen[e.target];
      queue.push_back(e.target);
    }
  }
  throw InvariantError("certified pair is disconnected inside the ball");
}

namespace {

std::string vertex_label(const Ball& ball, std::size_t v) {
  const auto& model = ball.model();
  const Word w = model.canonical_word(ball.vertex(v));
  return w.empty() ? "e" : to_string(model.alphabet(), w);
}

}  // namespace

std::string export_dot(const Ball& ball) {
  const auto& alphabet = ball.model().alphabet();
  std::ostringstream out;
  out << "digraph cayley {\n";
  out << "  // model " << ball.model().spec() << ", radius " << ball.radius()
      << "\n";
  for (std::size_t v = 0; v < ball.size(); ++v) {
    out << "  " << v << " [label=\"" << vertex_label(ball, v) << "\"];\n";
  }
  for (std::size_t v = 0; v < ball.size(); ++v) {
    for (const auto& e : ball.adjacency(v)) {
      if (alphabet.is_inverse_letter(e.letter)) continue;
      const bool involution =
          alphabet.is_involution(alphabet.generator_of(e.letter));
      if (involution && e.target < v) continue;
      out << "  " << v << " -> " << e.target << " [label=\""
          << alphabet.symbol(e.letter) << "\"";
      if (involution) out << ", dir=none";
      out << "];\n";
    }
  }
  out << "}\n";
  return out.str();
}

std::string ball_to_json_text(const Ball& ball) {
  const auto& alphabet = ball.model().alphabet();
  nlohmann::json doc;
  doc["format"] = "hypqg-ball";
  doc["format_version"] = kBallCacheFormatVersion;
  doc["model"] = ball.model().spec();
  doc["radius"] = ball.radius();
  auto& vertices = doc["vertices"] = nlohmann::json::array();
  auto& edges = doc["edges"] = nlohmann::json::array();
  for (std::size_t v = 0; v < ball.size(); ++v) {
    vertices.push_back(
        {to_string(alphabet, ball.model().canonical_word(ball.vertex(v))),
         ball.dist(v)});
    nlohmann::json row = nlohmann::json::array();
    for (const auto& e : ball.adjacency(v)) {
      row.push_back({std::string(1, alphabet.symbol(e.letter)), e.target});
    }
    edges.push_back(std::move(row));
  }
  return doc.dump();
}

Ball ball_from_json_text(const GroupModel& model, const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("ball cache is not valid JSON: ") + e.what());
  }
  try {
    if (doc.at("format") != "hypqg-ball" ||
        doc.at("format_version") != kBallCacheFormatVersion ||
        doc.at("model") != model.spec()) {
      throw ConfigError("ball cache key mismatch");
    }
    Ball ball(model);
    ball.radius_ = doc.at("radius").get<std::int64_t>();
    const auto& vertices = doc.at("vertices");
    const auto& edges = doc.at("edges");
    if (vertices.size() != edges.size() || vertices.empty()) {
      throw ConfigError("ball cache has inconsistent sizes");
    }
    ball.offsets_.push_back(0);
    for (std::size_t v = 0; v < vertices.size(); ++v) {
      Element g = model.evaluate(
          parse_word(model.alphabet(), vertices[v].at(0).get<std::string>()));
      if (!ball.index_.emplace(g, static_cast<std::uint32_t>(v)).second) {
        throw ConfigError("ball cache repeats a vertex");
      }
      ball.vertices_.push_back(std::move(g));
      ball.dist_.push_back(vertices[v].at(1).get<std::int64_t>());
      for (const auto& e : edges[v]) {
        const auto x = model.alphabet().letter(e.at(0).get<std::string>().at(0));
        const auto target = e.at(1).get<std::uint32_t>();
        if (target >= vertices.size()) {
          throw ConfigError("ball cache edge points outside the ball");
        }
        ball.edges_.push_back({x, target});
      }
      ball.offsets_.push_back(ball.edges_.size());
    }
    if (ball.vertices_[0] != model.identity()) {
      throw ConfigError("ball cache does not start at the identity");
    }
    return ball;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed ball cache: ") + e.what());
  }
}

std::filesystem::path ball_cache_path(const std::filesystem::path& dir,
                                      const GroupModel& model,
                                      std::int64_t radius) {
  std::string name = "ball_";
  for (char c : model.spec()) {
    name.push_back(std::isalnum(static_cast<unsigned char>(c)) ? c : '_');
  }
  name += "_R" + std::to_string(radius) + "_v" +
          std::to_string(kBallCacheFormatVersion) + ".json";
  return dir / name;
}

Ball build_ball_cached(const GroupModel& model, std::int64_t radius,
                       const std::filesystem::path& dir,
                       std::size_t max_vertices) {
  const auto path = ball_cache_path(dir, model, radius);
  if (std::filesystem::exists(path)) {
    std::ifstream in(path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    Ball ball = ball_from_json_text(model, buffer.str());
    if (ball.radius() == radius) return ball;
  }
  Ball ball = build_ball(model, radius, max_vertices);
  std::filesystem::create_directories(dir);
  std::ofstream(path) << ball_to_json_text(ball);
  return ball;
}

Metric::Metric(GroupModel model) : model_(std::move(model)) {}

Metric::Metric(std::shared_ptr<const Ball> ball)
    : model_(ball->model()), ball_(std::move(ball)) {}

Metric Metric::for_model(const GroupModel& model, std::int64_t radius) {
  if (model.has_closed_form()) return Metric(model);
  return Metric(std::make_shared<const Ball>(build_ball(model, radius)));
}

std::int64_t Metric::norm(const Element& g) const {
  if (!ball_) return model_.norm(g);
  if (model_.has_closed_form()) return model_.norm(g);
  const auto v = ball_->find(g);
  if (!v) {
    throw NotCertified("element lies outside the radius " +
                       std::to_string(ball_->radius()) + " ball of " +
                       model_.spec());
  }
  return ball_->dist(*v);
}

std::int64_t Metric::distance(const Element& a, const Element& b) const {
  if (model_.has_closed_form()) return model_.distance(a, b);
  return norm(model_.multiply(model_.inverse(a), b));
}

GeodesicEnumeration enumerate_geodesics(const Metric& metric,
                                        const Word& target, std::size_t limit) {
  const auto& model = metric.model();
  const Element goal = model.evaluate(target);
  const std::int64_t length = metric.norm(goal);
  const std::size_t letters = model.alphabet().size();
  GeodesicEnumeration out;
  Word current;
  // Depth-first in letter order yields lexicographic order.
  auto dfs = [&](auto&& self, const Element& at, std::int64_t remaining) {
    if (remaining == 0) {
      if (out.words.size() == limit) {
        out.truncated = true;
        return false;
      }
      out.words.push_back(current);
      return true;
    }
    for (std::size_t xi = 0; xi < letters; ++xi) {
      const auto x = static_cast<Letter>(xi);
      Element next = model.times(at, x);
      if (metric.distance(next, goal) != remaining - 1) continue;
      current.push_back(x);
      const bool more = self(self, next, remaining - 1);
      current.pop_back();
      if (!more) return false;
    }
    return true;
  };
  dfs(dfs, model.identity(), length);
  return out;
}

Word canonical_geodesic(const Metric& metric, const Element& from,
                        const Element& to) {
  const auto& model = metric.model();
  const std::size_t letters = model.alphabet().size();
  Word out;
  Element at = from;
  std::int64_t remaining = metric.distance(at, to);
  while (remaining > 0) {
    bool moved = false;
    for (std::size_t xi = 0; xi < letters && !moved; ++xi) {
      const auto x = static_cast<Letter>(xi);
      Element next = model.times(at, x);
      if (metric.distance(next, to) == remaining - 1) {
        at = std::move(next);
        out.push_back(x);
        --remaining;
        moved = true;
      }
    }
    if (!moved) throw InvariantError("no letter decreases the distance");
  }
  return out;
}

}  // namespace hypqg
