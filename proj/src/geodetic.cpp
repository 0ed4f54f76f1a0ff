#include "hypqg/geodetic.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <random>
#include <sstream>
#include <thread>

#include "hypqg/error.hpp"

namespace hypqg {

namespace {

// Vertices of the ball lying on some geodesic from the identity to v,
// found by walking predecessors back from v.
std::vector<bool> interval_marks(const Ball& ball, std::size_t v) {
  std::vector<bool> mark(ball.size(), false);
  mark[v] = true;
  std::deque<std::size_t> queue{v};
  while (!queue.empty()) {
    const auto w = queue.front();
    queue.pop_front();
    for (const auto& e : ball.adjacency(w)) {
      if (ball.dist(e.target) == ball.dist(w) - 1 && !mark[e.target]) {
        mark[e.target] = true;
        queue.push_back(e.target);
      }
    }
  }
  return mark;
}

// Up to `limit` geodesic words from the identity to v, lexicographic.
std::vector<Word> ball_geodesics(const Ball& ball, std::size_t v,
                                 std::size_t limit) {
  const auto mark = interval_marks(ball, v);
  std::vector<Word> out;
  Word current;
  auto dfs = [&](auto&& self, std::size_t at) -> void {
    if (out.size() == limit) return;
    if (at == v) {
      out.push_back(current);
      return;
    }
    for (const auto& e : ball.adjacency(at)) {
      if (!mark[e.target] || ball.dist(e.target) != ball.dist(at) + 1) continue;
      current.push_back(e.letter);
      self(self, e.target);
      current.pop_back();
    }
  };
  dfs(dfs, 0);
  return out;
}

std::vector<std::size_t> chosen_indices(std::size_t n,
                                        const SamplingPolicy& policy) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  if (policy.exhaustive || policy.count >= n) return idx;
  std::mt19937_64 rng(policy.seed);
  std::shuffle(idx.begin(), idx.end(), rng);
  idx.resize(policy.count);
  std::sort(idx.begin(), idx.end());
  return idx;
}

Metric exact_metric(const GroupModel& model, std::int64_t radius) {
  return Metric::for_model(model, radius);
}

}  // namespace

std::string SamplingPolicy::describe() const {
  if (exhaustive) return "exhaustive";
  return "sampled(seed=" + std::to_string(seed) +
         ",count=" + std::to_string(count) + ")";
}

GeodeticResult is_geodetic(const Ball& ball) {
  GeodeticResult out;
  const std::size_t n = ball.size();
  // Geodesic word counts from the identity, saturated at 2.
  std::vector<std::uint8_t> count(n, 0);
  count[0] = 1;
  std::optional<std::size_t> first_bad;
  for (std::size_t v = 1; v < n; ++v) {
    unsigned c = 0;
    for (const auto& e : ball.adjacency(v)) {
      if (ball.dist(e.target) == ball.dist(v) - 1) c += count[e.target];
    }
    count[v] = static_cast<std::uint8_t>(std::min(c, 2u));
    if (count[v] >= 2 && !first_bad) first_bad = v;
  }
  const auto spheres = ball.sphere_sizes();
  const auto R = ball.radius();
  for (std::int64_t a = 0; a <= R; ++a) {
    for (std::int64_t b = 0; b <= R; ++b) {
      if (2 * std::min(a, b) + std::max(a, b) > R) continue;
      out.certified_pairs += static_cast<std::uint64_t>(spheres[a]) * spheres[b];
      if (a == b) out.certified_pairs -= spheres[a];
    }
  }
  out.skipped_pairs = static_cast<std::uint64_t>(n) * (n - 1) - out.certified_pairs;
  if (first_bad) {
    out.geodetic = false;
    const auto words = ball_geodesics(ball, *first_bad, 2);
    out.counterexample = GeodeticCounterexample{0, *first_bad, words[0], words[1]};
  }
  return out;
}

std::vector<IecRecord> find_iecs(std::shared_ptr<const Ball> ball,
                                 std::int64_t max_n) {
  if (max_n < 1) throw ConfigError("max_n must be positive");
  if (ball->radius() < max_n) {
    throw PreconditionError("ball radius " + std::to_string(ball->radius()) +
                            " cannot certify circuits with n = " +
                            std::to_string(max_n));
  }
  const Metric metric(ball);
  const auto& model = ball->model();
  const auto& alphabet = model.alphabet();
  const std::size_t letters = alphabet.size();
  std::vector<IecRecord> out;

  for (std::int64_t n = 1; n <= max_n; ++n) {
    const auto N = static_cast<std::size_t>(2 * n + 1);
    const auto window = static_cast<std::size_t>(n);
    std::vector<Element> path{model.identity()};
    Word current;
    auto geodesic_window = [&](std::size_t i, std::size_t j, std::size_t len) {
      return metric.distance(path[i], path[j]) == static_cast<std::int64_t>(len);
    };
    auto canonical = [&](const Word& w) {
      Word best = w;
      for (std::size_t s = 0; s < N; ++s) {
        const Word rot = w.subword(s, N) + w.prefix(s);
        best = std::min({best, rot, formal_inverse(alphabet, rot)});
      }
      return best == w;
    };
    auto dfs = [&](auto&& self) -> void {
      const std::size_t j = current.size();
      if (j == N) {
        if (!(path.back() == path.front())) return;
        for (std::size_t s = 0; s < N; ++s) {
          for (std::size_t len = 1; len <= window; ++len) {
            if (!geodesic_window(s, (s + len) % N, len)) return;
          }
        }
        if (!canonical(current)) return;
        const auto check = is_local_quasigeodesic(
            metric, current, Rational(n), QGParams::geodesic());
        if (!check.ok) {
          throw InvariantError("isometric circuit is not " + std::to_string(n) +
                               "-locally geodesic");
        }
        out.push_back({0, current, n});
        return;
      }
      for (std::size_t x = 0; x < letters; ++x) {
        const auto l = static_cast<Letter>(x);
        path.push_back(model.times(path.back(), l));
        current.push_back(l);
        const std::size_t k = j + 1;
        bool good = true;
        // Closing vertex equals the base; interior vertices are new.
        if (k < N) {
          for (std::size_t i = 0; i < k && good; ++i) good = !(path[i] == path[k]);
        }
        for (std::size_t i = k; i-- > 0 && k - i <= window && good;) {
          const std::size_t to = k == N ? 0 : k;
          good = geodesic_window(i, to, k - i);
        }
        if (good) self(self);
        current.pop_back();
        path.pop_back();
      }
    };
    dfs(dfs);
  }
  return out;
}

BigonReport bigon_width(const GroupModel& model, std::int64_t radius,
                        SamplingPolicy policy, std::uint64_t max_work) {
  if (radius < 0) throw ConfigError("radius must be >= 0");
  const Ball ball = build_ball(model, radius);
  // Interval vertices can be up to 2R apart.
  const Metric metric = exact_metric(model, 2 * radius);
  BigonReport out;
  out.radius = radius;
  out.policy = policy;
  out.width_by_distance.assign(static_cast<std::size_t>(radius) + 1, 0);
  std::uint64_t work = 0;
  std::optional<std::size_t> best_g, best_x;
  // Bottleneck values; only interval entries are read, always after being
  // written (predecessors come first in BFS order).
  std::vector<std::int64_t> best(ball.size(), 0);

  for (auto v : chosen_indices(ball.size(), policy)) {
    ++out.endpoints_examined;
    const auto mark = interval_marks(ball, v);
    std::vector<std::size_t> interval;
    for (std::size_t w = 0; w <= v; ++w) {
      if (mark[w]) interval.push_back(w);
    }
    work += static_cast<std::uint64_t>(interval.size()) * interval.size();
    if (work > max_work) {
      throw ResourceError("bigon scan exceeds the work limit of " +
                          std::to_string(max_work));
    }
    std::int64_t width = 0;
    std::size_t arg_x = 0;
    for (auto x : interval) {
      for (auto y : interval) {
        const auto dxy = metric.distance(ball.vertex(x), ball.vertex(y));
        std::int64_t through = y == 0 ? dxy : -1;
        for (const auto& e : ball.adjacency(y)) {
          if (mark[e.target] && ball.dist(e.target) == ball.dist(y) - 1) {
            through = std::max(through, best[e.target]);
          }
        }
        best[y] = std::min(dxy, through);
      }
      if (best[v] > width) {
        width = best[v];
        arg_x = x;
      }
    }
    auto& slot = out.width_by_distance[static_cast<std::size_t>(ball.dist(v))];
    slot = std::max(slot, width);
    if (!best_g || width > out.max_width) {
      out.max_width = width;
      best_g = v;
      best_x = arg_x;
    }
  }

  if (best_g) {
    const auto v = *best_g;
    const auto x = *best_x;
    const auto& g = ball.vertex(v);
    out.endpoint = model.canonical_word(g);
    out.first = canonical_geodesic(metric, model.identity(), ball.vertex(x)) +
                canonical_geodesic(metric, ball.vertex(x), g);
    // Rebuild the geodesic farthest from x, following the bottleneck.
    const auto mark = interval_marks(ball, v);
    std::vector<std::optional<Ball::Edge>> back(ball.size());
    for (std::size_t y = 0; y <= v; ++y) {
      if (!mark[y]) continue;
      const auto dxy = metric.distance(ball.vertex(x), ball.vertex(y));
      std::int64_t through = y == 0 ? dxy : -1;
      for (const auto& e : ball.adjacency(y)) {
        if (mark[e.target] && ball.dist(e.target) == ball.dist(y) - 1 &&
            best[e.target] > through) {
          through = best[e.target];
          back[y] = Ball::Edge{model.alphabet().inverse(e.letter), e.target};
        }
      }
      best[y] = std::min(dxy, through);
    }
    Word reversed;
    for (std::size_t y = v; y != 0; y = back[y]->target) {
      reversed.push_back(back[y]->letter);
    }
    out.second = Word(std::vector<Letter>(reversed.letters().rbegin(),
                                          reversed.letters().rend()));
  }
  return out;
}

std::int64_t triangle_defect(const Metric& metric, const Element& a,
                             const Word& ab, const Word& bc, const Word& ca) {
  const auto& model = metric.model();
  std::vector<Element> sides[3];
  sides[0] = trace_path(model, ab);
  for (auto& p : sides[0]) p = model.multiply(a, p);
  const Element b = sides[0].back();
  sides[1] = trace_path(model, bc);
  for (auto& p : sides[1]) p = model.multiply(b, p);
  const Element c = sides[1].back();
  sides[2] = trace_path(model, ca);
  for (auto& p : sides[2]) p = model.multiply(c, p);
  if (!(sides[2].back() == a)) throw PreconditionError("triangle does not close");
  std::int64_t defect = 0;
  for (int s = 0; s < 3; ++s) {
    for (const auto& x : sides[s]) {
      std::int64_t nearest = -1;
      for (int t = 0; t < 3 && nearest != 0; ++t) {
        if (t == s) continue;
        for (const auto& y : sides[t]) {
          const auto d = metric.distance(x, y);
          if (nearest < 0 || d < nearest) nearest = d;
          // Cannot raise the maximum any more.
          if (nearest <= defect) break;
        }
        if (nearest >= 0 && nearest <= defect) break;
      }
      defect = std::max(defect, nearest);
    }
  }
  return defect;
}

DeltaReport delta_estimate(std::shared_ptr<const Ball> ball,
                           SamplingPolicy policy, unsigned threads) {
  const Metric metric(ball);
  const auto& model = ball->model();
  const std::size_t n = ball->size();
  DeltaReport out;
  out.radius = ball->radius();
  out.policy = policy;
  out.complete = policy.exhaustive;

  // Lexicographically smallest geodesic from the identity to each vertex.
  std::vector<Word> canon(n);
  for (std::size_t v = 0; v < n; ++v) canon[v] = ball_geodesics(*ball, v, 1)[0];
  auto side = [&](const Element& from, const Element& to) -> std::optional<Word> {
    const auto g = model.multiply(model.inverse(from), to);
    if (const auto v = ball->find(g)) return canon[*v];
    if (model.has_closed_form()) return canonical_geodesic(metric, from, to);
    return std::nullopt;
  };

  std::vector<std::pair<std::size_t, std::size_t>> triangles;
  if (policy.exhaustive) {
    if (n * n > 100'000'000) {
      throw ResourceError("exhaustive triangle scan over " + std::to_string(n) +
                          " vertices is too large; use sampling");
    }
  } else {
    std::mt19937_64 rng(policy.seed);
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    for (std::size_t k = 0; k < policy.count; ++k) {
      const auto y = pick(rng);
      triangles.emplace_back(y, pick(rng));
    }
  }
  const std::size_t total = policy.exhaustive ? n * n : triangles.size();
  auto triangle_at = [&](std::size_t k) {
    return policy.exhaustive ? std::make_pair(k / n, k % n) : triangles[k];
  };

  struct Best {
    std::int64_t defect = -1;
    std::size_t k = 0;
    std::uint64_t skipped = 0;
  };
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::max<std::size_t>(
      1, std::min<std::size_t>(threads, total)));
  std::vector<Best> partial(threads);
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&, t] {
        Best& mine = partial[t];
        const std::size_t begin = total * t / threads;
        const std::size_t end = total * (t + 1) / threads;
        for (std::size_t k = begin; k < end; ++k) {
          const auto [y, z] = triangle_at(k);
          const auto& gy = ball->vertex(y);
          const auto& gz = ball->vertex(z);
          try {
            const auto yz = side(gy, gz);
            if (!yz) {
              ++mine.skipped;
              continue;
            }
            const auto d = triangle_defect(metric, model.identity(), canon[y],
                                           *yz, *side(gz, model.identity()));
            if (d > mine.defect) {
              mine.defect = d;
              mine.k = k;
            }
          } catch (const NotCertified&) {
            ++mine.skipped;
          }
        }
      });
    }
  }
  // Ties go to the earliest triangle.
  Best best;
  for (const auto& p : partial) {
    out.skipped_uncertified += p.skipped;
    if (p.defect > best.defect) best = p;
  }
  out.triangles = total - out.skipped_uncertified;
  if (best.defect >= 0) {
    out.delta_hat = Rational(best.defect);
    const auto [y, z] = triangle_at(best.k);
    out.extremal = {Word{}, model.canonical_word(ball->vertex(y)),
                    model.canonical_word(ball->vertex(z))};
  }
  return out;
}

LocalToGlobalReport local_to_global_probe(const GroupModel& model,
                                          std::int64_t L, const QGParams& p,
                                          std::size_t max_len,
                                          std::uint64_t budget,
                                          std::size_t keep_loops) {
  if (L < 1) throw ConfigError("L must be positive");
  const Metric metric = exact_metric(model, static_cast<std::int64_t>(max_len));
  const std::size_t letters = model.alphabet().size();
  const auto window = static_cast<std::size_t>(L);
  LocalToGlobalReport out;
  out.L = L;
  out.params = p;
  out.max_len = max_len;
  // Worst ratio as a fraction num/den.
  std::int64_t worst_num = 1, worst_den = 1;

  std::vector<Element> path{model.identity()};
  std::vector<bool> global_ok{true};
  Word current;
  bool stop = false;
  auto dfs = [&](auto&& self) -> void {
    for (std::size_t x = 0; x < letters && !stop; ++x) {
      if (out.nodes >= budget) {
        out.exhaustive = false;
        stop = true;
        return;
      }
      ++out.nodes;
      const auto l = static_cast<Letter>(x);
      path.push_back(model.times(path.back(), l));
      current.push_back(l);
      const std::size_t j = current.size();
      bool local = true;
      for (std::size_t i = j; i-- > 0 && j - i <= window && local;) {
        local = p.admits(static_cast<std::int64_t>(j - i),
                         metric.distance(path[i], path[j]));
      }
      bool global = global_ok.back();
      for (std::size_t i = j; local && i-- > 0;) {
        const auto len = static_cast<std::int64_t>(j - i);
        const auto d = metric.distance(path[i], path[j]);
        global = global && p.admits(len, d);
        if (d > 0 && static_cast<__int128>(len) * worst_den >
                         static_cast<__int128>(worst_num) * d) {
          worst_num = len;
          worst_den = d;
        }
        if (d == 0 && i == 0) {
          ++out.loop_count;
          if (out.loops.size() < keep_loops) out.loops.push_back(current);
        }
      }
      if (local) {
        ++out.words;
        if (global) {
          ++out.globally_ok;
        } else if (!out.first_failure) {
          out.first_failure = current;
        }
        if (j < max_len) {
          global_ok.push_back(global);
          self(self);
          global_ok.pop_back();
        }
      }
      current.pop_back();
      path.pop_back();
    }
  };
  if (max_len > 0) dfs(dfs);
  out.worst_lambda = Rational(worst_num, worst_den);
  return out;
}

std::string bigon_csv(const BigonReport& r) {
  std::ostringstream out;
  out << "distance,width\n";
  for (std::size_t d = 0; d < r.width_by_distance.size(); ++d) {
    out << d << "," << r.width_by_distance[d] << "\n";
  }
  return out.str();
}

std::string delta_csv(const std::vector<DeltaReport>& reports) {
  std::ostringstream out;
  out << "radius,delta_hat,triangles,skipped\n";
  for (const auto& r : reports) {
    out << r.radius << "," << to_string(r.delta_hat) << "," << r.triangles
        << "," << r.skipped_uncertified << "\n";
  }
  return out.str();
}

}  // namespace hypqg
