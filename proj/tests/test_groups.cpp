#include <deque>
#include <random>
#include <unordered_map>

#include "doctest.h"
#include "hypqg/error.hpp"
#include "hypqg/groups.hpp"
#include "oracles.hpp"

using namespace hypqg;

namespace {

Word w(const GroupModel& m, std::string_view s) {
  return parse_word(m.alphabet(), s);
}

std::string str(const GroupModel& m, const Word& x) {
  return to_string(m.alphabet(), x);
}

const char* kClosedFormSpecs[] = {
    "free:1",   "free:2",    "free:3",
    "abelian:1", "abelian:2", "abelian:3",
    "cyclic:2", "cyclic:3",  "cyclic:7",
    "freeprod(cyclic:2,cyclic:3)", "freeprod(free:1,cyclic:4)",
    "dirprod(free:2,cyclic:2)",    "dirprod(abelian:1,free:1)",
    "freeprod(abelian:2,cyclic:2)",
};

}  // namespace

TEST_CASE("make_model builds the documented alphabets") {
  auto f2 = make_model("free:2");
  CHECK(f2.alphabet().symbols() == "aAbB");
  CHECK(f2.alphabet().rank() == 2);
  CHECK(f2.family() == Family::kFreeGroup);

  auto z2 = make_model("abelian:2");
  CHECK(z2.alphabet().symbols() == "aAbB");
  CHECK(z2.metric_mode() == MetricMode::kClosedForm);

  auto pz = make_model("freeprod(cyclic:2,cyclic:3)");
  CHECK(pz.alphabet().symbols() == "stT");
  CHECK(pz.alphabet().is_involution(0));
  CHECK(pz.alphabet().inverse(pz.alphabet().letter('s')) ==
        pz.alphabet().letter('s'));
  CHECK(pz.spec() == "freeprod(cyclic:2,cyclic:3)");

  auto h = make_model("heis3");
  CHECK(h.alphabet().symbols() == "xXyY");
  CHECK(h.metric_mode() == MetricMode::kBfsCertified);

  // Clashing factor symbols are renamed.
  auto ff = make_model("freeprod(free:2, free:2)");
  CHECK(ff.alphabet().symbols() == "aAbBcCdD");
  CHECK(ff.spec() == "freeprod(free:2,free:2)");
}

TEST_CASE("make_model rejects invalid parameters") {
  CHECK_THROWS_AS(make_model("free:0"), ConfigError);
  CHECK_THROWS_AS(make_model("cyclic:1"), ConfigError);
  CHECK_THROWS_AS(make_model("abelian:-2"), ConfigError);
  CHECK_THROWS_AS(make_model("free"), ConfigError);
  CHECK_THROWS_AS(make_model("dirprod(free:2)"), ConfigError);
  CHECK_THROWS_AS(make_model("free:2 junk"), ConfigError);
  CHECK_THROWS_AS(make_model("torus:2"), ConfigError);
}

TEST_CASE("inverse is an involution on letters") {
  for (const char* spec : kClosedFormSpecs) {
    const auto model = make_model(spec);
    const auto& a = model.alphabet();
    for (std::size_t x = 0; x < a.size(); ++x) {
      const auto l = static_cast<Letter>(x);
      CHECK(a.inverse(a.inverse(l)) == l);
    }
  }
}

TEST_CASE("reduce examples") {
  auto f2 = make_model("free:2");
  CHECK(reduce(f2, w(f2, "abBA")).empty());
  auto z2 = make_model("abelian:2");
  CHECK(str(z2, reduce(z2, w(z2, "abA"))) == "b");
  auto pz = make_model("freeprod(cyclic:2,cyclic:3)");
  CHECK(reduce(pz, w(pz, "tttss")).empty());
  CHECK_THROWS_AS(reduce(f2, w(z2, "ab") + Word{9}), AlphabetError);
  CHECK_THROWS_AS(parse_word(f2.alphabet(), "abx"), AlphabetError);
}

TEST_CASE("is_identity examples") {
  auto z2 = make_model("abelian:2");
  auto f2 = make_model("free:2");
  CHECK(is_identity(z2, w(z2, "abAB")));
  CHECK_FALSE(is_identity(f2, w(f2, "abAB")));
  for (const char* spec : kClosedFormSpecs) {
    CHECK(is_identity(make_model(spec), Word{}));
  }
  CHECK(is_identity(make_heisenberg3(), Word{}));
}

TEST_CASE("word_metric examples") {
  auto z2 = make_model("abelian:2");
  CHECK(word_metric(z2, w(z2, "aaabAAA")) == 1);
  auto f2 = make_model("free:2");
  CHECK(word_metric(f2, w(f2, "abab")) == 4);
  auto c3 = make_model("cyclic:3");
  CHECK(word_metric(c3, w(c3, "tt")) == 1);
  auto h = make_heisenberg3();
  CHECK_THROWS_AS(word_metric(h, w(h, "xy")), NotCertified);
}

TEST_CASE("free group reduction agrees with a string oracle") {
  auto f2 = make_model("free:2");
  std::mt19937_64 rng(7);
  for (int k = 0; k < 500; ++k) {
    const auto s = oracle::random_word(rng, "aAbB", 20);
    CHECK(str(f2, reduce(f2, w(f2, s))) == oracle::free_reduce(s));
  }
}

TEST_CASE("heisenberg normal forms") {
  auto h = make_heisenberg3();
  // The commutator is central and nontrivial.
  const Word comm = w(h, "xyXY");
  CHECK_FALSE(is_identity(h, comm));
  CHECK(is_identity(h, w(h, "xyXYx") + formal_inverse(h.alphabet(), w(h, "xyXYx"))));
  CHECK(h.evaluate(comm + w(h, "x")) == h.evaluate(w(h, "x") + comm));
  CHECK(h.evaluate(comm + w(h, "y")) == h.evaluate(w(h, "y") + comm));
  std::mt19937_64 rng(3);
  for (int k = 0; k < 200; ++k) {
    const Word u = w(h, oracle::random_word(rng, "xXyY", 12));
    const Word r = reduce(h, u);
    CHECK(h.evaluate(r) == h.evaluate(u));
    CHECK(reduce(h, r) == r);
    CHECK(h.multiply(h.evaluate(u), h.inverse(h.evaluate(u))) == h.identity());
  }
}

TEST_CASE("group invariants on random words") {
  std::mt19937_64 rng(2024);
  for (const char* spec : kClosedFormSpecs) {
    auto m = make_model(spec);
    const auto symbols = m.alphabet().symbols();
    for (int k = 0; k < 200; ++k) {
      const Word u = w(m, oracle::random_word(rng, symbols, 10));
      const Word v = w(m, oracle::random_word(rng, symbols, 10));
      const auto du = word_metric(m, u);
      const auto dv = word_metric(m, v);
      CAPTURE(spec);
      CHECK(word_metric(m, u + v) <= du + dv);
      CHECK(du <= static_cast<std::int64_t>(u.size()));
      CHECK(du == word_metric(m, formal_inverse(m.alphabet(), u)));
      CHECK(reduce(m, u + v) == reduce(m, reduce(m, u) + reduce(m, v)));
      CHECK(reduce(m, reduce(m, u)) == reduce(m, u));
      CHECK(reduce(m, u).empty() == is_identity(m, u));
      CHECK(m.distance(m.evaluate(u), m.evaluate(v)) ==
            word_metric(m, formal_inverse(m.alphabet(), u) + v));
      // Canonical words of closed-form models are geodesic.
      CHECK(static_cast<std::int64_t>(reduce(m, u).size()) == du);
    }
  }
}

TEST_CASE("closed-form metrics equal BFS distances on radius-6 balls") {
  for (const char* spec : kClosedFormSpecs) {
    auto m = make_model(spec);
    // Plain BFS, independent of the cayley module.
    std::unordered_map<Element, int, ElementHash> dist{{m.identity(), 0}};
    std::deque<Element> queue{m.identity()};
    while (!queue.empty()) {
      const Element g = queue.front();
      queue.pop_front();
      const int d = dist[g];
      if (d == 6) continue;
      for (std::size_t x = 0; x < m.alphabet().size(); ++x) {
        Element h = m.times(g, static_cast<Letter>(x));
        if (dist.emplace(h, d + 1).second) queue.push_back(std::move(h));
      }
    }
    CAPTURE(spec);
    for (const auto& [g, d] : dist) CHECK(m.norm(g) == d);
  }
}
