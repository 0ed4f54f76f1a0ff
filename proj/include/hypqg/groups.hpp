#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "hypqg/word.hpp"

namespace hypqg {

enum class Family {
  kFreeGroup,
  kFreeAbelian,
  kFiniteCyclic,
  kDirectProduct,
  kFreeProduct,
  kHeisenberg3,
};

enum class MetricMode { kClosedForm, kBfsCertified };

std::string_view to_string(Family family);
std::string_view to_string(MetricMode mode);

// Canonical form of a group element serialized as an integer tuple. Two
// elements of the same model are equal iff their codes are equal.
struct Element {
  std::vector<std::int64_t> code;

  friend auto operator<=>(const Element&, const Element&) = default;
  friend bool operator==(const Element&, const Element&) = default;
};

struct ElementHash {
  std::size_t operator()(const Element& e) const noexcept;
};

namespace detail {
class ModelImpl;
}

// A finitely generated group with an exact word problem. Cheap to copy;
// immutable and safe to share between threads.
class GroupModel {
 public:
  explicit GroupModel(std::shared_ptr<const detail::ModelImpl> impl);

  Family family() const;
  MetricMode metric_mode() const;
  bool has_closed_form() const {
    return metric_mode() == MetricMode::kClosedForm;
  }
  const GeneratorAlphabet& alphabet() const;
  // Canonical spec string, e.g. "freeprod(cyclic:2,cyclic:3)".
  const std::string& spec() const;
  // Rank for free/abelian, order for cyclic, 0 otherwise.
  std::int64_t parameter() const;
  // Empty unless this is a direct or free product.
  const std::vector<GroupModel>& factors() const;

  Element identity() const;
  // g <- g * x.
  void apply(Element& g, Letter x) const;
  Element times(Element g, Letter x) const {
    apply(g, x);
    return g;
  }
  // Element reached from `base` by reading w. Validates the alphabet.
  Element evaluate(const Word& w) const;
  Element evaluate_from(Element base, const Word& w) const;
  Element multiply(const Element& a, const Element& b) const;
  Element inverse(const Element& g) const;
  // Canonical representative word of g (the output of reduce).
  Word canonical_word(const Element& g) const;

  // Closed-form word length |g|; throws NotCertified for bfs_certified
  // models (use a Metric backed by a Ball instead).
  std::int64_t norm(const Element& g) const;
  // |a^-1 b| in closed form; same error contract as norm.
  std::int64_t distance(const Element& a, const Element& b) const;

  friend bool operator==(const GroupModel& a, const GroupModel& b) {
    return a.spec() == b.spec();
  }

 private:
  std::shared_ptr<const detail::ModelImpl> impl_;
};

GroupModel make_free_group(int rank);
GroupModel make_free_abelian(int rank);
GroupModel make_cyclic(int order);
GroupModel make_direct_product(const GroupModel& a, const GroupModel& b);
GroupModel make_free_product(const GroupModel& a, const GroupModel& b);
GroupModel make_heisenberg3();

// Parses the model grammar: free:r | abelian:r | cyclic:n | heis3 |
// dirprod(M,M) | freeprod(M,M). Throws ConfigError.
GroupModel make_model(std::string_view spec);

// Canonical form of w; idempotent, empty iff w represents the identity.
Word reduce(const GroupModel& model, const Word& w);
bool is_identity(const GroupModel& model, const Word& w);
// Exact |w| for closed-form models; NotCertified otherwise.
std::int64_t word_metric(const GroupModel& model, const Word& w);

// Vertices pi(0..|w|) of the path labelled w starting at `base`.
std::vector<Element> trace_path(const GroupModel& model, const Word& w);

}  // namespace hypqg
