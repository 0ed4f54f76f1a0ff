#include "hypqg/qg.hpp"

#include <algorithm>

#include "hypqg/error.hpp"

namespace hypqg {

QGParams::QGParams(Rational lambda, Rational epsilon)
    : lambda_(lambda), epsilon_(epsilon) {
  if (lambda_ < 1) {
    throw ParameterError("lambda must be >= 1, got " + to_string(lambda_));
  }
  if (epsilon_ < 0) {
    throw ParameterError("epsilon must be >= 0, got " + to_string(epsilon_));
  }
  lnum_ = lambda_.numerator();
  lden_ = lambda_.denominator();
  enum_ = epsilon_.numerator();
  eden_ = epsilon_.denominator();
}

PathTrace::PathTrace(const Metric& metric, const Word& w)
    : metric_(&metric),
      length_(w.size()),
      vertices_(trace_path(metric.model(), w)) {
  if (metric.model().family() == Family::kFreeAbelian) {
    dim_ = static_cast<std::size_t>(metric.model().parameter());
    coords_.reserve(vertices_.size() * dim_);
    for (const auto& v : vertices_) {
      coords_.insert(coords_.end(), v.code.begin(), v.code.end());
    }
  }
}

std::optional<SubpathViolation> first_violation(const PathTrace& trace,
                                                const QGParams& params,
                                                std::size_t max_window) {
  const std::size_t n = trace.length();
  for (std::size_t j = 1; j <= n; ++j) {
    const std::size_t lo = j > max_window ? j - max_window : 0;
    for (std::size_t i = lo; i < j; ++i) {
      const auto len = static_cast<std::int64_t>(j - i);
      const std::int64_t d = trace.distance(i, j);
      if (!params.admits(len, d)) return SubpathViolation{i, j, len, d};
    }
  }
  return std::nullopt;
}

QGCheck is_quasigeodesic(const Metric& metric, const Word& w,
                         const QGParams& params) {
  const PathTrace trace(metric, w);
  QGCheck out;
  out.violation = first_violation(trace, params, w.size());
  out.ok = !out.violation;
  return out;
}

QGCheck is_local_quasigeodesic(const Metric& metric, const Word& w,
                               const Rational& locality,
                               const QGParams& params) {
  if (locality <= 0) {
    throw ParameterError("locality must be positive, got " +
                         to_string(locality));
  }
  const auto window = static_cast<std::size_t>(
      std::min<std::int64_t>(floor_plus_one(locality) - 1,
                             static_cast<std::int64_t>(w.size())));
  const PathTrace trace(metric, w);
  QGCheck out;
  out.violation = first_violation(trace, params, window);
  out.ok = !out.violation;
  return out;
}

bool is_qg_loop(const GroupModel& model, const Word& w) {
  return !w.empty() && is_identity(model, w);
}

std::size_t max_locality(const Metric& metric, const Word& w,
                         const QGParams& params) {
  const PathTrace trace(metric, w);
  const std::size_t n = w.size();
  // Smallest violating window length, scanning lengths upward.
  for (std::size_t len = 1; len <= n; ++len) {
    for (std::size_t i = 0; i + len <= n; ++i) {
      if (!params.admits(static_cast<std::int64_t>(len),
                         trace.distance(i, i + len))) {
        return len - 1;
      }
    }
  }
  return n;
}

bool is_geodesic(const Metric& metric, const Word& w) {
  return metric.word_metric(w) == static_cast<std::int64_t>(w.size());
}

}  // namespace hypqg
