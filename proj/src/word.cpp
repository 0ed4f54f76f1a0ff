#include "hypqg/word.hpp"

#include <algorithm>
#include <cctype>

#include "hypqg/error.hpp"

namespace hypqg {

GeneratorAlphabet::GeneratorAlphabet(std::vector<char> generator_symbols,
                                     std::vector<bool> involution)
    : generators_(std::move(generator_symbols)),
      involution_(std::move(involution)) {
  if (generators_.empty()) {
    throw ConfigError("alphabet needs at least one generator");
  }
  if (involution_.size() != generators_.size()) {
    throw ConfigError("involution flags do not match generator count");
  }
  for (std::size_t g = 0; g < generators_.size(); ++g) {
    const char c = generators_[g];
    if (!std::islower(static_cast<unsigned char>(c))) {
      throw ConfigError(std::string("generator symbol '") + c +
                        "' is not a lowercase letter");
    }
    if (std::count(generators_.begin(), generators_.end(), c) != 1) {
      throw ConfigError(std::string("duplicate generator symbol '") + c + "'");
    }
    const auto pos = static_cast<Letter>(symbols_.size());
    positive_.push_back(pos);
    symbols_.push_back(c);
    generator_.push_back(g);
    inverted_.push_back(false);
    if (involution_[g]) {
      inverse_.push_back(pos);
    } else {
      inverse_.push_back(pos + 1);
      symbols_.push_back(static_cast<char>(std::toupper(c)));
      generator_.push_back(g);
      inverted_.push_back(true);
      inverse_.push_back(pos);
    }
  }
}

Letter GeneratorAlphabet::letter(char symbol) const {
  const auto it = std::find(symbols_.begin(), symbols_.end(), symbol);
  if (it == symbols_.end()) {
    throw AlphabetError(std::string("letter '") + symbol +
                        "' is not in alphabet \"" + symbols() + "\"");
  }
  return static_cast<Letter>(it - symbols_.begin());
}

Word formal_inverse(const GeneratorAlphabet& alphabet, const Word& w) {
  std::vector<Letter> out;
  out.reserve(w.size());
  for (auto it = w.letters().rbegin(); it != w.letters().rend(); ++it) {
    out.push_back(alphabet.inverse(*it));
  }
  return Word(std::move(out));
}

Word parse_word(const GeneratorAlphabet& alphabet, std::string_view text) {
  std::vector<Letter> out;
  out.reserve(text.size());
  for (char c : text) out.push_back(alphabet.letter(c));
  return Word(std::move(out));
}

std::string to_string(const GeneratorAlphabet& alphabet, const Word& w) {
  std::string out;
  out.reserve(w.size());
  for (Letter x : w) out.push_back(alphabet.symbol(x));
  return out;
}

void check_word(const GeneratorAlphabet& alphabet, const Word& w) {
  for (Letter x : w) {
    if (!alphabet.contains(x)) {
      throw AlphabetError("letter index " + std::to_string(x) +
                          " is not in alphabet \"" + alphabet.symbols() +
                          "\"");
    }
  }
}

}  // namespace hypqg
