#include <algorithm>
#include <map>
#include <random>

#include "doctest.h"
#include "hypqg/error.hpp"
#include "hypqg/geodetic.hpp"
#include "oracles.hpp"

using namespace hypqg;

namespace {

std::shared_ptr<const Ball> ball_of(const char* spec, std::int64_t R) {
  return std::make_shared<const Ball>(build_ball(make_model(spec), R));
}

std::string str(const GroupModel& m, const Word& w) {
  return to_string(m.alphabet(), w);
}

// Words over aAbB up to length n, lexicographic with prefixes first.
std::vector<std::string> lex_words(std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t k = 1; k <= n; ++k) {
    auto level = oracle::all_words("aAbB", k);
    out.insert(out.end(), level.begin(), level.end());
  }
  std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) {
    return oracle::lex_less("aAbB", x, y);
  });
  return out;
}

std::int64_t z2_hausdorff(const std::string& u, const std::string& v) {
  const auto p = oracle::z2_points(u);
  const auto q = oracle::z2_points(v);
  auto one_way = [](const auto& a, const auto& b) {
    std::int64_t worst = 0;
    for (const auto& x : a) {
      std::int64_t near = -1;
      for (const auto& y : b) {
        const auto d = oracle::l1(x, y);
        if (near < 0 || d < near) near = d;
      }
      worst = std::max(worst, near);
    }
    return worst;
  };
  return std::max(one_way(p, q), one_way(q, p));
}

}  // namespace

TEST_CASE("is_geodetic examples") {
  CHECK(is_geodetic(*ball_of("free:2", 5)).geodetic);
  CHECK(is_geodetic(*ball_of("freeprod(cyclic:2,cyclic:3)", 6)).geodetic);
  const auto z2 = ball_of("abelian:2", 4);
  const auto r = is_geodetic(*z2);
  CHECK_FALSE(r.geodetic);
  REQUIRE(r.counterexample);
  CHECK(r.counterexample->u == 0);
  const auto& m = z2->model();
  CHECK(str(m, m.canonical_word(z2->vertex(r.counterexample->v))) == "ab");
  CHECK(str(m, r.counterexample->first) == "ab");
  CHECK(str(m, r.counterexample->second) == "ba");
  CHECK(r.certified_pairs + r.skipped_pairs == z2->size() * (z2->size() - 1));
  // cyclic:4 has two geodesics to t^2.
  const auto c4 = ball_of("cyclic:4", 3);
  const auto rc = is_geodetic(*c4);
  CHECK_FALSE(rc.geodetic);
  REQUIRE(rc.counterexample);
  CHECK(str(c4->model(), rc.counterexample->first) == "tt");
  CHECK(str(c4->model(), rc.counterexample->second) == "TT");
}

TEST_CASE("certified pair counts agree with a direct count") {
  for (const char* spec : {"free:2", "abelian:2", "cyclic:5"}) {
    for (std::int64_t R = 0; R <= 4; ++R) {
      const auto ball = ball_of(spec, R);
      std::uint64_t certified = 0;
      for (std::size_t u = 0; u < ball->size(); ++u) {
        for (std::size_t v = 0; v < ball->size(); ++v) {
          const auto a = ball->dist(u), b = ball->dist(v);
          if (u != v && 2 * std::min(a, b) + std::max(a, b) <= R) ++certified;
        }
      }
      CHECK(is_geodetic(*ball).certified_pairs == certified);
    }
  }
}

TEST_CASE("find_iecs examples") {
  const auto c3 = ball_of("cyclic:3", 2);
  const auto r3 = find_iecs(c3, 1);
  REQUIRE(r3.size() == 1);
  CHECK(str(c3->model(), r3[0].loop) == "ttt");
  CHECK(r3[0].n == 1);

  CHECK(find_iecs(ball_of("abelian:2", 4), 4).empty());
  CHECK(find_iecs(ball_of("free:2", 3), 3).empty());

  const auto pz = ball_of("freeprod(cyclic:2,cyclic:3)", 3);
  const auto rp = find_iecs(pz, 1);
  REQUIRE(rp.size() == 1);
  CHECK(str(pz->model(), rp[0].loop) == "ttt");

  // Odd cyclic groups: the whole group is one circuit.
  for (int order : {5, 7, 9}) {
    const auto spec = "cyclic:" + std::to_string(order);
    const auto ball = std::make_shared<const Ball>(build_ball(make_model(spec), 5));
    const auto r = find_iecs(ball, 4);
    REQUIRE(r.size() == 1);
    CHECK(r[0].loop.size() == static_cast<std::size_t>(order));
    CHECK(str(ball->model(), r[0].loop) == std::string(static_cast<std::size_t>(order), 't'));
  }
  CHECK_THROWS_AS(find_iecs(ball_of("cyclic:3", 1), 2), PreconditionError);
}

TEST_CASE("every IEC is an n-local geodesic loop") {
  for (const char* spec : {"freeprod(cyclic:3,cyclic:3)", "dirprod(cyclic:3,cyclic:2)",
                           "dirprod(cyclic:3,free:1)", "freeprod(cyclic:5,free:1)"}) {
    const auto ball = ball_of(spec, 3);
    const Metric metric(ball);
    CAPTURE(spec);
    const auto records = find_iecs(ball, 3);
    CHECK_FALSE(records.empty());
    for (const auto& rec : records) {
      CHECK(rec.loop.size() == static_cast<std::size_t>(2 * rec.n + 1));
      CHECK(is_identity(ball->model(), rec.loop));
      CHECK(is_local_quasigeodesic(metric, rec.loop, Rational(rec.n),
                                   QGParams::geodesic())
                .ok);
    }
    // One record per class: no duplicates.
    std::vector<Word> loops;
    for (const auto& rec : records) loops.push_back(rec.loop);
    std::sort(loops.begin(), loops.end());
    CHECK(std::adjacent_find(loops.begin(), loops.end()) == loops.end());
  }
}

TEST_CASE("bigon_width examples") {
  const auto f2 = bigon_width(make_model("free:2"), 8);
  for (auto w : f2.width_by_distance) CHECK(w == 0);
  CHECK(f2.max_width == 0);

  const auto z2m = make_model("abelian:2");
  const auto z2 = bigon_width(z2m, 20);
  for (std::int64_t n = 1; n <= 10; ++n) {
    CHECK(z2.width_by_distance[static_cast<std::size_t>(2 * n)] >= n);
    const std::string u = std::string(n, 'a') + std::string(n, 'b');
    const std::string v = std::string(n, 'b') + std::string(n, 'a');
    CHECK(z2_hausdorff(u, v) == n);
  }
  // The reported extremal bigon really has the reported width.
  CHECK(z2_hausdorff(str(z2m, z2.first), str(z2m, z2.second)) == z2.max_width);
  const Metric metric(z2m);
  CHECK(is_geodesic(metric, z2.first));
  CHECK(is_geodesic(metric, z2.second));
  CHECK(z2m.evaluate(z2.first) == z2m.evaluate(z2.second));

  const auto pz = bigon_width(make_model("freeprod(cyclic:2,cyclic:3)"), 6);
  CHECK(pz.max_width <= 1);
  CHECK(bigon_csv(pz).rfind("distance,width\n0,0\n", 0) == 0);
}

TEST_CASE("bigon widths in Z2 match brute force over all geodesic pairs") {
  const auto z2m = make_model("abelian:2");
  const auto r = bigon_width(z2m, 6);
  std::map<std::pair<std::int64_t, std::int64_t>, std::vector<std::string>> geos;
  for (std::size_t k = 0; k <= 6; ++k) {
    for (const auto& w : oracle::all_words("aAbB", k)) {
      const auto p = oracle::z2_points(w);
      if (oracle::l1(p.front(), p.back()) == static_cast<std::int64_t>(k)) {
        geos[p.back()].push_back(w);
      }
    }
  }
  std::vector<std::int64_t> expected(7, 0);
  for (const auto& [end, words] : geos) {
    const auto d = static_cast<std::size_t>(oracle::l1({0, 0}, end));
    for (const auto& u : words) {
      for (const auto& v : words) {
        expected[d] = std::max(expected[d], z2_hausdorff(u, v));
      }
    }
  }
  CHECK(r.width_by_distance == expected);
}

TEST_CASE("bigon sampling and resource guard") {
  const auto m = make_model("abelian:2");
  const auto s = bigon_width(m, 10, SamplingPolicy::sampled(3, 20));
  CHECK(s.endpoints_examined == 20);
  const auto t = bigon_width(m, 10, SamplingPolicy::sampled(3, 20));
  CHECK(s.width_by_distance == t.width_by_distance);
  CHECK_THROWS_AS(bigon_width(m, 20, SamplingPolicy::all(), 1000), ResourceError);
}

TEST_CASE("geodetic implies zero bigon width") {
  for (const char* spec : {"free:2", "freeprod(cyclic:2,cyclic:3)"}) {
    const auto model = make_model(spec);
    REQUIRE(is_geodetic(build_ball(model, 6)).geodetic);
    const auto r = bigon_width(model, 6);
    for (auto w : r.width_by_distance) CHECK(w == 0);
  }
}

TEST_CASE("triangle_defect matches an l1 oracle on random Z2 triangles") {
  const auto z2m = make_model("abelian:2");
  const Metric metric(z2m);
  std::mt19937_64 rng(17);
  auto geodesic_to = [](std::int64_t dx, std::int64_t dy) {
    std::string s;
    s += std::string(static_cast<std::size_t>(std::llabs(dx)), dx > 0 ? 'a' : 'A');
    s += std::string(static_cast<std::size_t>(std::llabs(dy)), dy > 0 ? 'b' : 'B');
    return s;
  };
  std::uniform_int_distribution<std::int64_t> coord(-5, 5);
  for (int k = 0; k < 300; ++k) {
    const oracle::Point y{coord(rng), coord(rng)}, z{coord(rng), coord(rng)};
    std::string s1 = geodesic_to(y.first, y.second);
    std::string s2 = geodesic_to(z.first - y.first, z.second - y.second);
    std::string s3 = geodesic_to(-z.first, -z.second);
    // Shuffle each side into another monotone path.
    for (auto* s : {&s1, &s2, &s3}) std::shuffle(s->begin(), s->end(), rng);
    std::vector<oracle::Point> sides[3];
    oracle::Point at{0, 0};
    int idx = 0;
    for (const auto* s : {&s1, &s2, &s3}) {
      for (auto p : oracle::z2_points(*s)) {
        sides[idx].push_back({p.first + at.first, p.second + at.second});
      }
      at = sides[idx].back();
      ++idx;
    }
    std::int64_t expected = 0;
    for (int i = 0; i < 3; ++i) {
      for (const auto& x : sides[i]) {
        std::int64_t near = -1;
        for (int j = 0; j < 3; ++j) {
          if (j == i) continue;
          for (const auto& q : sides[j]) {
            const auto d = oracle::l1(x, q);
            if (near < 0 || d < near) near = d;
          }
        }
        expected = std::max(expected, near);
      }
    }
    CHECK(triangle_defect(metric, z2m.identity(), parse_word(z2m.alphabet(), s1),
                          parse_word(z2m.alphabet(), s2),
                          parse_word(z2m.alphabet(), s3)) == expected);
  }
}

TEST_CASE("delta_estimate examples") {
  CHECK(delta_estimate(ball_of("free:2", 4)).delta_hat == Rational(0));
  const auto single = delta_estimate(ball_of("free:2", 0));
  CHECK(single.delta_hat == Rational(0));
  CHECK(single.triangles == 1);
  const auto z2 = delta_estimate(ball_of("abelian:2", 8));
  CHECK(z2.delta_hat >= Rational(2));
  CHECK(z2.canonical_sides_only);
  CHECK(z2.complete);
  CHECK(z2.triangles == 145 * 145);
  REQUIRE(z2.extremal.size() == 3);
  const auto s = delta_estimate(ball_of("abelian:2", 6),
                                SamplingPolicy::sampled(1, 200));
  CHECK_FALSE(s.complete);
  CHECK(s.triangles == 200);
}

TEST_CASE("delta_estimate is monotone in the radius") {
  for (const char* spec : {"abelian:2", "free:2", "freeprod(cyclic:2,cyclic:3)"}) {
    Rational previous(0);
    std::vector<DeltaReport> reports;
    for (std::int64_t R = 0; R <= 5; ++R) {
      reports.push_back(delta_estimate(ball_of(spec, R)));
      CHECK(reports.back().delta_hat >= previous);
      previous = reports.back().delta_hat;
    }
    CHECK(delta_csv(reports).rfind("radius,delta_hat,triangles,skipped\n0,0/1,1,0\n", 0) == 0);
  }
}

TEST_CASE("local_to_global_probe examples") {
  const auto f2 = local_to_global_probe(make_model("free:2"), 2,
                                        QGParams::geodesic(), 10);
  CHECK(f2.words == f2.globally_ok);
  CHECK(f2.loop_count == 0);
  CHECK(f2.worst_lambda == Rational(1));
  CHECK(f2.exhaustive);
  CHECK_FALSE(f2.first_failure);

  const auto z2m = make_model("abelian:2");
  const auto z2 = local_to_global_probe(z2m, 2, QGParams::geodesic(), 8);
  // Oracle over all words.
  std::uint64_t words = 0, ok = 0, loops = 0;
  std::optional<std::string> first;
  for (const auto& w : lex_words(8)) {
    if (oracle::z2_violation(w, 1, 2)) continue;
    ++words;
    if (!oracle::z2_violation(w, 1, w.size())) {
      ++ok;
    } else if (!first) {
      first = w;
    }
    const auto p = oracle::z2_points(w);
    if (p.back() == p.front()) ++loops;
  }
  CHECK(z2.words == words);
  CHECK(z2.globally_ok == ok);
  CHECK(z2.loop_count == loops);
  REQUIRE(z2.first_failure);
  CHECK(str(z2m, *z2.first_failure) == *first);
  CHECK(z2.loop_count > 0);

  const auto big = local_to_global_probe(z2m, 4, QGParams::geodesic(), 16,
                                         100'000'000, 100000);
  bool found = false;
  for (const auto& l : big.loops) found = found || str(z2m, l) == "aaaabbbbAAAABBBB";
  CHECK(found);

  const auto cut = local_to_global_probe(z2m, 2, QGParams::geodesic(), 8, 100);
  CHECK_FALSE(cut.exhaustive);
  CHECK(cut.nodes == 100);
}

TEST_CASE("local_to_global worst ratio matches brute force") {
  const auto z2m = make_model("abelian:2");
  const QGParams p(Rational(2), Rational(1));
  const auto r = local_to_global_probe(z2m, 3, p, 7);
  Rational worst(1);
  for (const auto& w : lex_words(7)) {
    const auto pts = oracle::z2_points(w);
    bool local = true;
    for (std::size_t j = 1; j < pts.size() && local; ++j) {
      for (std::size_t i = j >= 3 ? j - 3 : 0; i < j; ++i) {
        if (Rational(static_cast<std::int64_t>(j - i)) >
            2 * Rational(oracle::l1(pts[i], pts[j])) + 1) {
          local = false;
        }
      }
    }
    if (!local) continue;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      for (std::size_t j = i + 1; j < pts.size(); ++j) {
        const auto d = oracle::l1(pts[i], pts[j]);
        if (d > 0) {
          worst = std::max(worst, Rational(static_cast<std::int64_t>(j - i), d));
        }
      }
    }
  }
  CHECK(r.worst_lambda == worst);
}
