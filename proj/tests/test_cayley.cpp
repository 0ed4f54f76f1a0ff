#include <filesystem>
#include <random>

#include "doctest.h"
#include "hypqg/cayley.hpp"
#include "hypqg/error.hpp"
#include "oracles.hpp"

using namespace hypqg;

namespace {

std::size_t vertex_of(const Ball& ball, std::string_view word) {
  const auto& m = ball.model();
  return ball.find(m.evaluate(parse_word(m.alphabet(), word))).value();
}

std::vector<std::string> strings(const GroupModel& m,
                                 const std::vector<Word>& words) {
  std::vector<std::string> out;
  for (const auto& x : words) out.push_back(to_string(m.alphabet(), x));
  return out;
}

}  // namespace

TEST_CASE("build_ball sizes") {
  CHECK(build_ball(make_model("abelian:2"), 1).size() == 5);
  CHECK(build_ball(make_model("free:2"), 2).size() == 17);
  // 1 + 4 + 8 + 12 lattice points with |x|+|y| <= 3.
  CHECK(build_ball(make_model("abelian:2"), 3).size() == 25);
  CHECK(build_ball(make_model("free:2"), 0).size() == 1);
}

TEST_CASE("sphere sizes match the growth formulas") {
  for (int r = 1; r <= 3; ++r) {
    const auto ball = build_ball(make_free_group(r), 5);
    const auto spheres = ball.sphere_sizes();
    std::size_t expected = 2 * r;
    for (std::size_t k = 1; k < spheres.size(); ++k) {
      CHECK(spheres[k] == expected);
      expected *= 2 * r - 1;
    }
  }
  const auto spheres = build_ball(make_free_abelian(2), 9).sphere_sizes();
  for (std::size_t k = 1; k < spheres.size(); ++k) CHECK(spheres[k] == 4 * k);
}

TEST_CASE("ball invariants") {
  for (const char* spec : {"free:2", "abelian:2", "cyclic:3", "heis3",
                           "freeprod(cyclic:2,cyclic:3)"}) {
    const auto ball = build_ball(make_model(spec), 4);
    const auto& alph = ball.model().alphabet();
    CHECK(ball.vertex(0) == ball.model().identity());
    CHECK(ball.dist(0) == 0);
    for (std::size_t v = 0; v < ball.size(); ++v) {
      CHECK(ball.dist(v) <= 4);
      for (const auto& e : ball.adjacency(v)) {
        const auto back = ball.step(e.target, alph.inverse(e.letter));
        REQUIRE(back.has_value());
        CHECK(*back == v);
      }
    }
  }
}

TEST_CASE("build_ball numbering is deterministic BFS order") {
  const auto ball = build_ball(make_model("abelian:2"), 2);
  const auto& m = ball.model();
  std::vector<std::string> labels;
  for (std::size_t v = 0; v < ball.size(); ++v) {
    labels.push_back(to_string(m.alphabet(), m.canonical_word(ball.vertex(v))));
  }
  CHECK(labels == std::vector<std::string>{"", "a", "A", "b", "B", "aa", "ab",
                                           "aB", "AA", "Ab", "AB", "bb", "BB"});
}

TEST_CASE("build_ball budget") {
  CHECK_THROWS_WITH_AS(build_ball(make_model("free:3"), 6, 100),
                       doctest::Contains("radius 3"), ResourceError);
}

TEST_CASE("ball_distance examples") {
  const auto z6 = build_ball(make_model("abelian:2"), 6);
  CHECK(ball_distance(z6, vertex_of(z6, "a"), vertex_of(z6, "b")) == 2);
  const auto f6 = build_ball(make_model("free:2"), 6);
  CHECK(ball_distance(f6, vertex_of(f6, "a"), vertex_of(f6, "ab")) == 1);
  const auto z8 = build_ball(make_model("abelian:2"), 8);
  const auto u = vertex_of(z8, "aab");
  const auto v = vertex_of(z8, "Ab");
  CHECK(ball_distance(z8, u, v) == oracle::l1({2, 1}, {-1, 1}));
  // 2*3 + 3 > 6.
  CHECK_THROWS_AS(ball_distance(z6, vertex_of(z6, "aab"), vertex_of(z6, "Abb")),
                  NotCertified);
}

TEST_CASE("ball_distance is a metric and agrees with closed forms") {
  std::mt19937_64 rng(11);
  for (const char* spec : {"abelian:2", "free:2", "freeprod(cyclic:2,cyclic:3)",
                           "dirprod(free:1,cyclic:3)"}) {
    const auto ball = build_ball(make_model(spec), 7);
    const auto& m = ball.model();
    std::vector<std::size_t> small;
    for (std::size_t v = 0; v < ball.size(); ++v) {
      if (ball.dist(v) <= 2) small.push_back(v);
    }
    std::uniform_int_distribution<std::size_t> pick(0, small.size() - 1);
    for (int k = 0; k < 60; ++k) {
      const auto a = small[pick(rng)], b = small[pick(rng)], c = small[pick(rng)];
      const auto ab = ball_distance(ball, a, b);
      CHECK(ab == ball_distance(ball, b, a));
      CHECK(ab <= ball_distance(ball, a, c) + ball_distance(ball, c, b));
      CHECK((ab == 0) == (a == b));
      CHECK(ab == m.distance(ball.vertex(a), ball.vertex(b)));
    }
  }
}

TEST_CASE("enumerate_geodesics examples") {
  auto z2 = make_model("abelian:2");
  const Metric mz(z2);
  auto g = enumerate_geodesics(mz, parse_word(z2.alphabet(), "ba"), 100);
  CHECK(strings(z2, g.words) == std::vector<std::string>{"ab", "ba"});
  CHECK_FALSE(g.truncated);
  auto f2 = make_model("free:2");
  g = enumerate_geodesics(Metric(f2), parse_word(f2.alphabet(), "ab"), 100);
  CHECK(strings(f2, g.words) == std::vector<std::string>{"ab"});

  // Oracle: every length-3 word whose endpoint is (2,1).
  std::vector<std::string> expected;
  for (const auto& s : oracle::all_words("aAbB", 3)) {
    if (oracle::z2_points(s).back() == oracle::Point{2, 1}) expected.push_back(s);
  }
  g = enumerate_geodesics(mz, parse_word(z2.alphabet(), "aab"), 100);
  CHECK(strings(z2, g.words) == expected);
  CHECK(expected == std::vector<std::string>{"aab", "aba", "baa"});

  g = enumerate_geodesics(mz, parse_word(z2.alphabet(), "aab"), 2);
  CHECK(g.words.size() == 2);
  CHECK(g.truncated);
}

TEST_CASE("enumerate_geodesics through a certified ball") {
  auto h = make_heisenberg3();
  auto ball = std::make_shared<const Ball>(build_ball(h, 6));
  const Metric metric(ball);
  // xyXY is central; its word length is 4.
  CHECK(metric.word_metric(parse_word(h.alphabet(), "xyXY")) == 4);
  const auto g = enumerate_geodesics(metric, parse_word(h.alphabet(), "xy"), 10);
  CHECK(strings(h, g.words) == std::vector<std::string>{"xy"});
  CHECK_THROWS_AS(metric.word_metric(parse_word(h.alphabet(), "xxxxxxx")),
                  NotCertified);
  CHECK_THROWS_AS(Metric(h).word_metric(parse_word(h.alphabet(), "x")),
                  NotCertified);
}

TEST_CASE("export_dot") {
  const auto c3 = export_dot(build_ball(make_model("cyclic:3"), 1));
  CHECK(c3.find("0 -> 1 [label=\"t\"]") != std::string::npos);
  CHECK(c3.find("1 -> 2 [label=\"t\"]") != std::string::npos);
  CHECK(c3.find("2 -> 0 [label=\"t\"]") != std::string::npos);

  const auto f2 = export_dot(build_ball(make_model("free:2"), 1));
  std::size_t arrows = 0;
  for (std::size_t p = f2.find("->"); p != std::string::npos;
       p = f2.find("->", p + 1)) {
    ++arrows;
  }
  CHECK(arrows == 4);

  const auto single = export_dot(build_ball(make_model("free:2"), 0));
  CHECK(single.find("0 [label=\"e\"]") != std::string::npos);
  CHECK(single.find("->") == std::string::npos);
  CHECK(single == export_dot(build_ball(make_model("free:2"), 0)));
}

TEST_CASE("ball cache round trip") {
  const auto dir = std::filesystem::temp_directory_path() / "hypqg_cache_test";
  std::filesystem::remove_all(dir);
  auto m = make_model("freeprod(cyclic:2,cyclic:3)");
  const auto built = build_ball_cached(m, 5, dir);
  CHECK(std::filesystem::exists(ball_cache_path(dir, m, 5)));
  const auto loaded = build_ball_cached(m, 5, dir);
  REQUIRE(loaded.size() == built.size());
  CHECK(export_dot(loaded) == export_dot(built));
  CHECK_THROWS_AS(ball_from_json_text(make_model("free:2"),
                                      ball_to_json_text(built)),
                  ConfigError);
  CHECK_THROWS_AS(ball_from_json_text(m, "{\"format\":"), ConfigError);
  std::filesystem::remove_all(dir);
}
