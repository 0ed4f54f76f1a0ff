#include <random>

#include "doctest.h"
#include "hypqg/error.hpp"
#include "hypqg/qg.hpp"
#include "oracles.hpp"

using namespace hypqg;

namespace {

QGParams qp(std::int64_t lambda, std::int64_t eps = 0) {
  return QGParams(Rational(lambda), Rational(eps));
}

std::string square(std::size_t n) {
  return std::string(n, 'a') + std::string(n, 'b') + std::string(n, 'A') +
         std::string(n, 'B');
}

struct Z2 {
  GroupModel model = make_model("abelian:2");
  Metric metric{model};
  Word operator()(std::string_view s) const {
    return parse_word(model.alphabet(), s);
  }
};

}  // namespace

TEST_CASE("QGParams validation and exact comparison") {
  CHECK_THROWS_AS(QGParams(Rational(1, 2), Rational(0)), ParameterError);
  CHECK_THROWS_AS(QGParams(Rational(1), Rational(-1, 3)), ParameterError);
  const QGParams p(Rational(3, 2), Rational(1, 3));
  // 5 <= 3/2 * 3 + 1/3 = 29/6, false; 4 <= 29/6 true.
  CHECK_FALSE(p.admits(5, 3));
  CHECK(p.admits(4, 3));
  CHECK(qp(8).admits(288, 36));
  CHECK_FALSE(qp(8).admits(289, 36 - 1));
}

TEST_CASE("is_quasigeodesic examples") {
  Z2 z;
  CHECK(is_quasigeodesic(z.metric, z("ab"), qp(1)).ok);
  auto r = is_quasigeodesic(z.metric, z("aA"), qp(3));
  CHECK_FALSE(r.ok);
  CHECK(*r.violation == SubpathViolation{0, 2, 2, 0});

  CHECK(is_quasigeodesic(z.metric, z("aaabAAA"), qp(7)).ok);
  r = is_quasigeodesic(z.metric, z("aaabAAA"), qp(5));
  CHECK_FALSE(r.ok);
  const auto expected = oracle::z2_violation("aaabAAA", 5, 100);
  REQUIRE(expected.has_value());
  CHECK(r.violation->i == expected->first);
  CHECK(r.violation->j == expected->second);
  // (0,7): 7 > 5 * 1.  (1,6) is not a violation since 5 <= 5 * 1.
  CHECK(*r.violation == SubpathViolation{0, 7, 7, 1});
}

TEST_CASE("is_quasigeodesic agrees with the brute-force oracle") {
  Z2 z;
  std::mt19937_64 rng(99);
  for (int k = 0; k < 400; ++k) {
    const auto s = oracle::random_word(rng, "aAbB", 16);
    for (std::int64_t lambda : {1, 2, 3, 5}) {
      const auto got = is_quasigeodesic(z.metric, z(s), qp(lambda));
      const auto want = oracle::z2_violation(s, lambda, 100);
      CHECK(got.ok == !want.has_value());
      if (want) {
        CHECK(got.violation->i == want->first);
        CHECK(got.violation->j == want->second);
      }
    }
  }
}

TEST_CASE("is_local_quasigeodesic examples") {
  Z2 z;
  CHECK(is_local_quasigeodesic(z.metric, z(square(4)), Rational(4), qp(1)).ok);
  CHECK_FALSE(oracle::z2_violation(square(4), 1, 4).has_value());
  const auto r =
      is_local_quasigeodesic(z.metric, z(square(4)), Rational(16), qp(1));
  CHECK_FALSE(r.ok);
  auto f2 = make_model("free:2");
  CHECK(is_local_quasigeodesic(Metric(f2), parse_word(f2.alphabet(), "abA"),
                               Rational(3), qp(1))
            .ok);
  CHECK_THROWS_AS(is_local_quasigeodesic(z.metric, z("ab"), Rational(0), qp(1)),
                  ParameterError);
  // Rational locality: windows of length <= floor(9/2) = 4.
  CHECK(is_local_quasigeodesic(z.metric, z(square(4)), Rational(9, 2), qp(1)).ok);
}

TEST_CASE("is_qg_loop examples") {
  Z2 z;
  CHECK(is_qg_loop(z.model, z("abAB")));
  CHECK_FALSE(is_qg_loop(z.model, z("")));
  auto f2 = make_model("free:2");
  CHECK_FALSE(is_qg_loop(f2, parse_word(f2.alphabet(), "abAB")));
  auto c3 = make_model("cyclic:3");
  CHECK(is_qg_loop(c3, parse_word(c3.alphabet(), "ttt")));
}

TEST_CASE("max_locality examples") {
  Z2 z;
  for (std::size_t n = 1; n <= 20; ++n) {
    CAPTURE(n);
    const auto s = square(n);
    CHECK(oracle::z2_max_locality(s, 1) == n + 1);
    CHECK(max_locality(z.metric, z(s), qp(1)) == n + 1);
  }
  CHECK(max_locality(z.metric, z("aA"), qp(1)) == 1);
  auto f2 = make_model("free:2");
  std::mt19937_64 rng(5);
  for (int k = 0; k < 50; ++k) {
    const auto s = oracle::free_reduce(oracle::random_word(rng, "aAbB", 14));
    CHECK(max_locality(Metric(f2), parse_word(f2.alphabet(), s), qp(1)) ==
          s.size());
  }
}

TEST_CASE("quasigeodesic invariants on random words") {
  std::mt19937_64 rng(1234);
  for (const char* spec : {"abelian:2", "free:2", "freeprod(cyclic:2,cyclic:3)",
                           "dirprod(free:2,cyclic:2)"}) {
    const auto model = make_model(spec);
    const Metric metric(model);
    const auto symbols = model.alphabet().symbols();
    CAPTURE(spec);
    for (int k = 0; k < 250; ++k) {
      const Word x = parse_word(model.alphabet(),
                                oracle::random_word(rng, symbols, 12));
      const bool q21 = is_quasigeodesic(metric, x, qp(2, 1)).ok;
      // Parameter monotonicity.
      if (q21) {
        CHECK(is_quasigeodesic(metric, x, qp(3, 1)).ok);
        CHECK(is_quasigeodesic(metric, x, qp(2, 2)).ok);
      }
      // Locality monotonicity and local = global at L >= |w|.
      const auto loc = max_locality(metric, x, qp(2, 1));
      for (std::size_t l = 1; l <= x.size(); ++l) {
        CHECK(is_local_quasigeodesic(metric, x, Rational(l), qp(2, 1)).ok ==
              (l <= loc));
      }
      if (!x.empty()) {
        CHECK(is_local_quasigeodesic(metric, x, Rational(x.size()), qp(2, 1))
                  .ok == q21);
      }
      // Subwords inherit the property.
      if (q21 && x.size() >= 2) {
        CHECK(is_quasigeodesic(metric, x.subword(1, x.size() - 1), qp(2, 1)).ok);
      }
      // Loops longer than epsilon are never quasigeodesic.
      if (is_qg_loop(model, x) && x.size() > 1) CHECK_FALSE(q21);
      // Geodesic <=> (1,0)-quasigeodesic <=> |w| = metric.
      CHECK(is_geodesic(metric, x) == is_quasigeodesic(metric, x, qp(1)).ok);
    }
  }
}
