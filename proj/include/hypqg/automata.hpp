#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hypqg/cayley.hpp"
#include "hypqg/qg.hpp"
#include "hypqg/word.hpp"

namespace hypqg {

// Complete DFA over a generator alphabet. transition is a dense
// states x letters table.
struct Dfa {
  GeneratorAlphabet alphabet;
  std::size_t states = 0;
  std::vector<std::uint32_t> transition;
  std::uint32_t initial = 0;
  std::vector<bool> accepting;

  std::uint32_t next(std::uint32_t s, Letter x) const {
    return transition[s * alphabet.size() + x];
  }
  // States from which no accepting state is reachable.
  std::vector<bool> dead_states() const;
  // Throws InvariantError if the table is not total or indices are bad.
  void validate() const;

  friend bool operator==(const Dfa&, const Dfa&) = default;
};

// The one-state DFA accepting everything (or nothing).
Dfa constant_dfa(const GeneratorAlphabet& alphabet, bool accept);

bool dfa_accepts(const Dfa& dfa, const Word& w);

// Minimal equivalent DFA with canonical numbering: BFS from the initial
// state in letter order, with the dead state (if any) last.
Dfa minimize(const Dfa& dfa);

struct EquivalenceResult {
  bool equivalent = true;
  // Smallest disagreeing word (lexicographic, prefixes first).
  std::optional<Word> counterexample;
};

// Compares the languages on all words of length <= n. Throws
// AlphabetError when the alphabets differ.
EquivalenceResult dfa_equiv_up_to(const Dfa& a, const Dfa& b, std::size_t n);

struct ConeTypeResult {
  Dfa dfa;  // minimized
  bool stabilized = false;
  // Distinct k-cone-types seen among elements with |g| <= R - k.
  std::size_t cone_types = 0;
};

// Geodesic-word automaton from k-cone-types computed in the radius R ball.
ConeTypeResult cone_type_automaton(const GroupModel& model, std::int64_t k,
                                   std::int64_t radius);

// Predicate for validate_language / nerode_classes: nullopt = geodesic.
using WordPredicate = std::optional<QGParams>;

struct LanguageReport {
  std::size_t max_len = 0;
  std::uint64_t words_checked = 0;
  std::uint64_t mismatches = 0;
  std::optional<Word> first_mismatch;
  // The empty word counts as quasigeodesic.
  bool empty_word_included = true;
};

// Exhaustive comparison of the DFA with the exact predicate on every word
// of length <= max_len.
LanguageReport validate_language(const Dfa& dfa, const GroupModel& model,
                                 const WordPredicate& predicate,
                                 std::size_t max_len);

struct NerodeReport {
  QGParams params = QGParams::geodesic();
  std::size_t horizon = 0;
  std::size_t max_prefix_len = 0;
  // Entry l: classes among qualifying prefixes of length <= l.
  std::vector<std::size_t> class_count_by_length;
  // Shortlex-first prefix of each class.
  std::vector<Word> representatives;
};

inline constexpr std::size_t kMaxSignatureWidth = std::size_t{1} << 22;

// Groups p-quasigeodesic prefixes of length <= max_prefix_len by which
// extensions of length <= horizon keep them p-quasigeodesic.
NerodeReport nerode_classes(const GroupModel& model, const QGParams& params,
                            std::size_t horizon, std::size_t max_prefix_len,
                            unsigned threads = 0);

std::string dfa_to_json_text(const Dfa& dfa);
// Throws ConfigError on malformed input.
Dfa dfa_from_json_text(const std::string& text);
std::string dfa_to_dot(const Dfa& dfa);

// Rebuilds an alphabet from its symbol string ("aAbB", "stT").
GeneratorAlphabet alphabet_from_symbols(const std::string& symbols);

}  // namespace hypqg
