#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "hypqg/cayley.hpp"
#include "hypqg/rational.hpp"

namespace hypqg {

// Exact (lambda, epsilon) with lambda >= 1, epsilon >= 0.
class QGParams {
 public:
  QGParams(Rational lambda, Rational epsilon);
  static QGParams geodesic() { return QGParams(Rational(1), Rational(0)); }

  const Rational& lambda() const { return lambda_; }
  const Rational& epsilon() const { return epsilon_; }

  // path_len <= lambda * dist + epsilon, in integer arithmetic.
  bool admits(std::int64_t path_len, std::int64_t dist) const {
    const __int128 lhs = static_cast<__int128>(path_len) * lden_ * eden_;
    const __int128 rhs = static_cast<__int128>(lnum_) * dist * eden_ +
                         static_cast<__int128>(enum_) * lden_;
    return lhs <= rhs;
  }

  friend bool operator==(const QGParams& a, const QGParams& b) {
    return a.lambda_ == b.lambda_ && a.epsilon_ == b.epsilon_;
  }

 private:
  Rational lambda_;
  Rational epsilon_;
  std::int64_t lnum_, lden_, enum_, eden_;
};

// A pair of path vertices i < j with j - i > lambda * d + epsilon.
struct SubpathViolation {
  std::size_t i = 0;
  std::size_t j = 0;
  std::int64_t path_len = 0;
  std::int64_t dist = 0;

  friend bool operator==(const SubpathViolation&,
                         const SubpathViolation&) = default;
};

struct QGCheck {
  bool ok = true;
  // Canonical violation: smallest j, then smallest i.
  std::optional<SubpathViolation> violation;

  explicit operator bool() const { return ok; }
};

// Vertices of the path labelled by a word, with exact pairwise distances.
class PathTrace {
 public:
  PathTrace(const Metric& metric, const Word& w);

  // Number of letters; vertices are 0..length().
  std::size_t length() const { return length_; }
  const Element& vertex(std::size_t k) const { return vertices_[k]; }
  std::int64_t distance(std::size_t i, std::size_t j) const {
    if (dim_ > 0) {
      std::int64_t total = 0;
      const std::int64_t* a = coords_.data() + i * dim_;
      const std::int64_t* b = coords_.data() + j * dim_;
      for (std::size_t k = 0; k < dim_; ++k) {
        total += a[k] > b[k] ? a[k] - b[k] : b[k] - a[k];
      }
      return total;
    }
    return metric_->distance(vertices_[i], vertices_[j]);
  }

 private:
  const Metric* metric_;
  std::size_t length_;
  std::vector<Element> vertices_;
  // Flat coordinates for free abelian models (l1 metric); dim_ == 0 means
  // the general route through the Metric.
  std::size_t dim_ = 0;
  std::vector<std::int64_t> coords_;
};

// First violation among pairs with j - i <= max_window, scanning j upward.
std::optional<SubpathViolation> first_violation(const PathTrace& trace,
                                                const QGParams& params,
                                                std::size_t max_window);

// All pairs 0 <= i < j <= |w|.
QGCheck is_quasigeodesic(const Metric& metric, const Word& w,
                         const QGParams& params);
// Pairs with j - i <= locality (locality > 0).
QGCheck is_local_quasigeodesic(const Metric& metric, const Word& w,
                               const Rational& locality,
                               const QGParams& params);
// Non-empty and represents the identity.
bool is_qg_loop(const GroupModel& model, const Word& w);
// Largest integer L with is_local_quasigeodesic(w, L, params); |w| when w
// is globally quasigeodesic.
std::size_t max_locality(const Metric& metric, const Word& w,
                         const QGParams& params);
bool is_geodesic(const Metric& metric, const Word& w);

}  // namespace hypqg
