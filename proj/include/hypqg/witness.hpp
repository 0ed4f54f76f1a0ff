#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hypqg/cayley.hpp"
#include "hypqg/qg.hpp"
#include "hypqg/rational.hpp"

namespace hypqg {

// A loop that is L-locally (lambda, 0)-quasigeodesic with |loop| <= K*L.
struct StarWitness {
  std::string model;
  Word loop;
  std::int64_t L = 0;
  Rational lambda{1};
  Rational K{1};
  bool verified = false;
};

struct StarCheck {
  bool ok = false;
  std::string reason;  // empty when ok
};

// a^n b^n A^n B^n on the first two generators of a free abelian group of
// rank >= 2. Throws PreconditionError for other families.
Word square_loop(const GroupModel& model, std::int64_t n);

// Scale-n member of the built-in witness family: square loops for free
// abelian groups, and the same commutator square on one infinite-order
// generator from each factor of a direct product. PreconditionError when
// the model has no built-in family.
Word family_loop(const GroupModel& model, std::int64_t n);

StarCheck verify_star_witness(const Metric& metric, const Word& loop,
                              std::int64_t L, const Rational& lambda,
                              const Rational& K);
// Re-verifies the stored fields; sets w.verified.
StarCheck verify_star_witness(StarWitness& w);

enum class SearchStatus { kFound, kExhausted, kBudgetExceeded };
std::string_view to_string(SearchStatus status);

struct StarSearchResult {
  SearchStatus status = SearchStatus::kExhausted;
  std::optional<StarWitness> witness;
  std::uint64_t nodes = 0;
};

// Depth-first search in lexicographic order over L-locally
// (lambda,0)-quasigeodesic words of length <= max_len; returns the first
// loop found. Requires max_len <= K*L.
StarSearchResult search_star_witness(const GroupModel& model, std::int64_t L,
                                     const Rational& lambda, const Rational& K,
                                     std::size_t max_len,
                                     std::uint64_t budget = 50'000'000);

struct TrimResult {
  Word loop;
  // Vertex indices of p^j and q^j along edge j.
  std::vector<std::size_t> p;
  std::vector<std::size_t> q;
  // d(p^j, q^j), each >= L.
  std::vector<std::int64_t> pq_distance;
};

// Cuts the corners of a closed polygon of geodesic edges whose vertices
// are 2L-separated from one of the neighbouring edges. The result starts
// at p^1 and is checked to be (L; 3, 0)-locally quasigeodesic, cyclically.
TrimResult trim_polygon(const Metric& metric, const std::vector<Word>& edges,
                        std::int64_t L);

// Rational constant 1/lambda - (2K-1)/lambda'. ParameterError unless > 0.
Rational separation_kappa(const Rational& lambda, const Rational& lambda_prime,
                          const Rational& K);
// Right-hand side (1/kappa)(2K*L_m + 1 + 1/lambda) of the scale gap.
Rational scale_gap_bound(const Rational& lambda, const Rational& K,
                         const Rational& kappa, std::int64_t L_m);
// Smallest integer scale strictly above the bound.
std::int64_t next_scale(const Rational& lambda, const Rational& K,
                        const Rational& kappa, std::int64_t L_m);

struct SeparationCertificate {
  std::string model;
  Word gamma_m, gamma_n;
  std::int64_t L_m = 0, L_n = 0;
  Rational lambda{1}, lambda_prime{1}, K{1}, kappa{0};
  std::int64_t t_m = 0, t_n = 0, T_n = 0;
  // |gamma_m(t_m)|, |gamma_n(t_n)|, |gamma_n(T_n)|.
  std::int64_t norm_m = 0, norm_n = 0, norm_T = 0;
  // Violation of prefix(gamma_n, T_n) under (lambda', 0).
  SubpathViolation negative;

  Word prefix_m() const { return gamma_m.prefix(t_m); }
  Word prefix_n() const { return gamma_n.prefix(t_n); }
  Word extension() const { return gamma_n.subword(t_n, T_n); }
};

// Builds and checks a certificate separating prefix(gamma_m, t_m) from
// prefix(gamma_n, t_n) in the (lambda', 0)-quasigeodesic language. K is
// inferred as max(|gamma_m|/L_m, |gamma_n|/L_n).
SeparationCertificate build_separation_pair(const Metric& metric,
                                            const StarWitness& m,
                                            const StarWitness& n,
                                            const Rational& lambda_prime);

struct VerificationReport {
  bool ok = true;
  std::vector<std::string> transcript;
};

// Re-checks every claim of a certificate from the loops and constants
// alone, through the qg predicates.
VerificationReport verify_certificate(const SeparationCertificate& cert);

struct Tower {
  std::string model;
  Rational lambda{1}, lambda_prime{1}, K{1}, kappa{0};
  std::vector<std::int64_t> scales;
  std::vector<StarWitness> witnesses;
  // Pairs (i, j), i < j, in lexicographic order.
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  std::vector<SeparationCertificate> certificates;
  // Any DFA for the (lambda', 0)-quasigeodesic language has at least this
  // many states.
  std::size_t dfa_lower_bound = 0;
};

inline constexpr std::size_t kDefaultMaxTowerLoop = 100'000;

Tower witness_tower(const GroupModel& model, const Rational& lambda,
                    const Rational& lambda_prime, const Rational& K,
                    std::size_t depth, unsigned threads = 0,
                    std::size_t max_loop_len = kDefaultMaxTowerLoop);

// JSON documents. The *_from_json functions throw ConfigError on malformed
// input.
std::string star_witness_to_json_text(const StarWitness& w);
StarWitness star_witness_from_json_text(const std::string& text);
std::string certificate_to_json_text(const SeparationCertificate& c);
SeparationCertificate certificate_from_json_text(const std::string& text);
std::string tower_to_json_text(const Tower& t);

// Verifies a star witness, certificate or tower document.
VerificationReport verify_document(const std::string& text);

}  // namespace hypqg
