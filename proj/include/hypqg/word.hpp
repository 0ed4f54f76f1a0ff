#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace hypqg {

// Index into a GeneratorAlphabet's ordered letter list.
using Letter = std::uint8_t;

// Signed generator letters in a fixed total order: generator i, then its
// inverse (omitted for involutions). Generator symbols are lowercase and
// inverses are the matching uppercase symbol.
class GeneratorAlphabet {
 public:
  GeneratorAlphabet() = default;
  // One lowercase symbol per generator; involution[i] marks order-2 gens.
  GeneratorAlphabet(std::vector<char> generator_symbols,
                    std::vector<bool> involution);

  std::size_t rank() const { return generators_.size(); }
  std::size_t size() const { return symbols_.size(); }

  char symbol(Letter x) const { return symbols_[x]; }
  Letter inverse(Letter x) const { return inverse_[x]; }
  // Generator index this letter belongs to.
  std::size_t generator_of(Letter x) const { return generator_[x]; }
  bool is_inverse_letter(Letter x) const { return inverted_[x]; }
  bool is_involution(std::size_t generator) const {
    return involution_[generator];
  }
  char generator_symbol(std::size_t generator) const {
    return generators_[generator];
  }
  // The letter spelling generator i (positive direction).
  Letter letter_of(std::size_t generator) const { return positive_[generator]; }
  const std::vector<bool>& involution_flags() const { return involution_; }

  bool contains(Letter x) const { return x < symbols_.size(); }
  // Letter for a symbol; throws AlphabetError on unknown symbols.
  Letter letter(char symbol) const;

  // e.g. "aAbB" or "stT".
  std::string symbols() const { return {symbols_.begin(), symbols_.end()}; }

  friend bool operator==(const GeneratorAlphabet& a,
                         const GeneratorAlphabet& b) {
    return a.generators_ == b.generators_ && a.involution_ == b.involution_;
  }

 private:
  std::vector<char> generators_;
  std::vector<bool> involution_;
  std::vector<char> symbols_;
  std::vector<Letter> inverse_;
  std::vector<std::size_t> generator_;
  std::vector<bool> inverted_;
  std::vector<Letter> positive_;
};

// A finite sequence of letters; labels a path in a Cayley graph starting at
// the identity. Ordering is pure lexicographic on letter indices (a proper
// prefix sorts first).
class Word {
 public:
  Word() = default;
  explicit Word(std::vector<Letter> letters) : letters_(std::move(letters)) {}
  Word(std::initializer_list<Letter> letters) : letters_(letters) {}

  std::size_t size() const { return letters_.size(); }
  bool empty() const { return letters_.empty(); }
  Letter operator[](std::size_t i) const { return letters_[i]; }
  Letter back() const { return letters_.back(); }

  auto begin() const { return letters_.begin(); }
  auto end() const { return letters_.end(); }
  std::span<const Letter> view() const { return letters_; }
  const std::vector<Letter>& letters() const { return letters_; }

  void push_back(Letter x) { letters_.push_back(x); }
  void pop_back() { letters_.pop_back(); }
  void append(const Word& w) {
    letters_.insert(letters_.end(), w.letters_.begin(), w.letters_.end());
  }

  // Letters [from, to).
  Word subword(std::size_t from, std::size_t to) const {
    return Word(std::vector<Letter>(letters_.begin() + from,
                                    letters_.begin() + to));
  }
  Word prefix(std::size_t n) const { return subword(0, n); }

  friend Word operator+(Word a, const Word& b) {
    a.append(b);
    return a;
  }
  friend auto operator<=>(const Word&, const Word&) = default;
  friend bool operator==(const Word&, const Word&) = default;

 private:
  std::vector<Letter> letters_;
};

// Formal inverse: reversed, each letter inverted.
Word formal_inverse(const GeneratorAlphabet& alphabet, const Word& w);

// Throws AlphabetError on a foreign symbol.
Word parse_word(const GeneratorAlphabet& alphabet, std::string_view text);
std::string to_string(const GeneratorAlphabet& alphabet, const Word& w);

// Throws AlphabetError when a letter index is outside the alphabet.
void check_word(const GeneratorAlphabet& alphabet, const Word& w);

}  // namespace hypqg
