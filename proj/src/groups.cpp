#include "hypqg/groups.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <utility>

#include <boost/container_hash/hash.hpp>

#include "hypqg/error.hpp"

namespace hypqg {

std::string_view to_string(Family family) {
  switch (family) {
    case Family::kFreeGroup: return "FreeGroup";
    case Family::kFreeAbelian: return "FreeAbelian";
    case Family::kFiniteCyclic: return "FiniteCyclic";
    case Family::kDirectProduct: return "DirectProduct";
    case Family::kFreeProduct: return "FreeProduct";
    case Family::kHeisenberg3: return "Heisenberg3";
  }
  return "?";
}

std::string_view to_string(MetricMode mode) {
  return mode == MetricMode::kClosedForm ? "closed_form" : "bfs_certified";
}

std::size_t ElementHash::operator()(const Element& e) const noexcept {
  return boost::hash_range(e.code.begin(), e.code.end());
}

namespace detail {

class ModelImpl {
 public:
  ModelImpl(Family family, GeneratorAlphabet alphabet, std::string spec,
            std::int64_t parameter, MetricMode mode)
      : family_(family),
        alphabet_(std::move(alphabet)),
        spec_(std::move(spec)),
        parameter_(parameter),
        mode_(mode) {}
  virtual ~ModelImpl() = default;

  virtual Element identity() const = 0;
  virtual void apply(Element& g, Letter x) const = 0;
  virtual Element inverse(const Element& g) const = 0;
  virtual Word canonical_word(const Element& g) const = 0;
  // Only called when mode_ is closed form.
  virtual std::int64_t norm(const Element& g) const = 0;

  virtual Element multiply(const Element& a, const Element& b) const {
    Element out = a;
    for (Letter x : canonical_word(b)) apply(out, x);
    return out;
  }
  virtual std::int64_t distance(const Element& a, const Element& b) const {
    return norm(multiply(inverse(a), b));
  }

  Family family_;
  GeneratorAlphabet alphabet_;
  std::string spec_;
  std::int64_t parameter_;
  MetricMode mode_;
  std::vector<GroupModel> factors_;
};

namespace {

std::vector<char> first_symbols(int count) {
  std::vector<char> out;
  for (int i = 0; i < count; ++i) out.push_back(static_cast<char>('a' + i));
  return out;
}

// Letter index -> signed generator step in {+1,-1}.
int sign_of(const GeneratorAlphabet& alphabet, Letter x) {
  return alphabet.is_inverse_letter(x) ? -1 : 1;
}

class FreeGroupImpl final : public ModelImpl {
 public:
  explicit FreeGroupImpl(int rank)
      : ModelImpl(Family::kFreeGroup,
                  GeneratorAlphabet(first_symbols(rank),
                                    std::vector<bool>(rank, false)),
                  "free:" + std::to_string(rank), rank,
                  MetricMode::kClosedForm) {}

  Element identity() const override { return {}; }

  void apply(Element& g, Letter x) const override {
    if (!g.code.empty() && g.code.back() == alphabet_.inverse(x)) {
      g.code.pop_back();
    } else {
      g.code.push_back(x);
    }
  }

  Element inverse(const Element& g) const override {
    Element out;
    out.code.reserve(g.code.size());
    for (auto it = g.code.rbegin(); it != g.code.rend(); ++it) {
      out.code.push_back(alphabet_.inverse(static_cast<Letter>(*it)));
    }
    return out;
  }

  Word canonical_word(const Element& g) const override {
    std::vector<Letter> out(g.code.begin(), g.code.end());
    return Word(std::move(out));
  }

  std::int64_t norm(const Element& g) const override {
    return static_cast<std::int64_t>(g.code.size());
  }

  // a^-1 b in a tree: strip the common prefix of the reduced words.
  std::int64_t distance(const Element& a, const Element& b) const override {
    const auto& u = a.code;
    const auto& v = b.code;
    const auto n = std::min(u.size(), v.size());
    std::size_t common = 0;
    while (common < n && u[common] == v[common]) ++common;
    return static_cast<std::int64_t>(u.size() + v.size() - 2 * common);
  }
};

class AbelianImpl final : public ModelImpl {
 public:
  explicit AbelianImpl(int rank)
      : ModelImpl(Family::kFreeAbelian,
                  GeneratorAlphabet(first_symbols(rank),
                                    std::vector<bool>(rank, false)),
                  "abelian:" + std::to_string(rank), rank,
                  MetricMode::kClosedForm) {}

  Element identity() const override {
    return Element{std::vector<std::int64_t>(parameter_, 0)};
  }

  void apply(Element& g, Letter x) const override {
    g.code[alphabet_.generator_of(x)] += sign_of(alphabet_, x);
  }

  Element multiply(const Element& a, const Element& b) const override {
    Element out = a;
    for (std::size_t i = 0; i < out.code.size(); ++i) out.code[i] += b.code[i];
    return out;
  }

  Element inverse(const Element& g) const override {
    Element out = g;
    for (auto& c : out.code) c = -c;
    return out;
  }

  Word canonical_word(const Element& g) const override {
    Word out;
    for (std::size_t i = 0; i < g.code.size(); ++i) {
      const Letter pos = alphabet_.letter_of(i);
      const Letter x = g.code[i] >= 0 ? pos : alphabet_.inverse(pos);
      for (std::int64_t k = 0; k < std::llabs(g.code[i]); ++k) out.push_back(x);
    }
    return out;
  }

  std::int64_t norm(const Element& g) const override {
    std::int64_t total = 0;
    for (auto c : g.code) total += std::llabs(c);
    return total;
  }

  std::int64_t distance(const Element& a, const Element& b) const override {
    std::int64_t total = 0;
    for (std::size_t i = 0; i < a.code.size(); ++i) {
      total += std::llabs(b.code[i] - a.code[i]);
    }
    return total;
  }
};

class CyclicImpl final : public ModelImpl {
 public:
  explicit CyclicImpl(int order)
      : ModelImpl(Family::kFiniteCyclic,
                  GeneratorAlphabet({order == 2 ? 's' : 't'}, {order == 2}),
                  "cyclic:" + std::to_string(order), order,
                  MetricMode::kClosedForm) {}

  Element identity() const override { return Element{{0}}; }

  void apply(Element& g, Letter x) const override {
    const std::int64_t n = parameter_;
    g.code[0] = ((g.code[0] + sign_of(alphabet_, x)) % n + n) % n;
  }

  Element inverse(const Element& g) const override {
    return Element{{(parameter_ - g.code[0]) % parameter_}};
  }

  Word canonical_word(const Element& g) const override {
    const std::int64_t k = g.code[0];
    const std::int64_t n = parameter_;
    const Letter t = alphabet_.letter_of(0);
    if (k <= n - k) return Word(std::vector<Letter>(k, t));
    return Word(std::vector<Letter>(n - k, alphabet_.inverse(t)));
  }

  std::int64_t norm(const Element& g) const override {
    return std::min(g.code[0], parameter_ - g.code[0]);
  }

  std::int64_t distance(const Element& a, const Element& b) const override {
    const std::int64_t n = parameter_;
    const std::int64_t k = ((b.code[0] - a.code[0]) % n + n) % n;
    return std::min(k, n - k);
  }
};

// x, y with (a,b,c) <-> [[1,a,c],[0,1,b],[0,0,1]].
class HeisenbergImpl final : public ModelImpl {
 public:
  HeisenbergImpl()
      : ModelImpl(Family::kHeisenberg3, GeneratorAlphabet({'x', 'y'},
                                                          {false, false}),
                  "heis3", 0, MetricMode::kBfsCertified) {}

  Element identity() const override { return Element{{0, 0, 0}}; }

  void apply(Element& g, Letter x) const override {
    const int s = sign_of(alphabet_, x);
    if (alphabet_.generator_of(x) == 0) {
      g.code[0] += s;
    } else {
      g.code[1] += s;
      g.code[2] += s * g.code[0];
    }
  }

  Element multiply(const Element& a, const Element& b) const override {
    return Element{{a.code[0] + b.code[0], a.code[1] + b.code[1],
                    a.code[2] + b.code[2] + a.code[0] * b.code[1]}};
  }

  Element inverse(const Element& g) const override {
    return Element{{-g.code[0], -g.code[1], g.code[0] * g.code[1] - g.code[2]}};
  }

  // x^a y^b followed by a power of the central commutator xyXY.
  Word canonical_word(const Element& g) const override {
    const Letter x = alphabet_.letter_of(0);
    const Letter y = alphabet_.letter_of(1);
    const Letter X = alphabet_.inverse(x);
    const Letter Y = alphabet_.inverse(y);
    Word out;
    for (std::int64_t k = 0; k < std::llabs(g.code[0]); ++k) {
      out.push_back(g.code[0] >= 0 ? x : X);
    }
    for (std::int64_t k = 0; k < std::llabs(g.code[1]); ++k) {
      out.push_back(g.code[1] >= 0 ? y : Y);
    }
    const std::int64_t central = g.code[2] - g.code[0] * g.code[1];
    const Word up{x, y, X, Y};
    const Word down{y, x, Y, X};
    for (std::int64_t k = 0; k < std::llabs(central); ++k) {
      out.append(central >= 0 ? up : down);
    }
    return out;
  }

  std::int64_t norm(const Element&) const override {
    throw NotCertified("heis3 has no closed-form word metric");
  }
};

// Product letter -> (factor, factor letter).
struct LetterRoute {
  std::size_t factor;
  Letter letter;
};

// Factor 0 keeps its symbols; clashing symbols of factor 1 are renamed to
// the first unused lowercase letters.
std::pair<GeneratorAlphabet, std::vector<LetterRoute>> combine_alphabets(
    const GroupModel& a, const GroupModel& b) {
  std::vector<char> symbols;
  std::vector<bool> involution;
  std::vector<std::pair<std::size_t, std::size_t>> origin;
  const GroupModel* parts[2] = {&a, &b};
  for (std::size_t f = 0; f < 2; ++f) {
    const auto& alph = parts[f]->alphabet();
    for (std::size_t g = 0; g < alph.rank(); ++g) {
      char c = alph.generator_symbol(g);
      if (std::find(symbols.begin(), symbols.end(), c) != symbols.end()) {
        c = 'a';
        while (c <= 'z' &&
               std::find(symbols.begin(), symbols.end(), c) != symbols.end()) {
          ++c;
        }
        if (c > 'z') throw ConfigError("product has more than 26 generators");
      }
      symbols.push_back(c);
      involution.push_back(alph.is_involution(g));
      origin.emplace_back(f, g);
    }
  }
  GeneratorAlphabet alphabet(symbols, involution);
  std::vector<LetterRoute> routes(alphabet.size());
  for (std::size_t x = 0; x < alphabet.size(); ++x) {
    const auto letter = static_cast<Letter>(x);
    const auto [f, g] = origin[alphabet.generator_of(letter)];
    const auto& falph = parts[f]->alphabet();
    Letter fl = falph.letter_of(g);
    if (alphabet.is_inverse_letter(letter)) fl = falph.inverse(fl);
    routes[x] = {f, fl};
  }
  return {std::move(alphabet), std::move(routes)};
}

MetricMode product_mode(const GroupModel& a, const GroupModel& b) {
  return a.has_closed_form() && b.has_closed_form() ? MetricMode::kClosedForm
                                                    : MetricMode::kBfsCertified;
}

// Code layout: [len0, code0..., code1...].
class DirectProductImpl final : public ModelImpl {
 public:
  DirectProductImpl(const GroupModel& a, const GroupModel& b,
                    std::pair<GeneratorAlphabet, std::vector<LetterRoute>> ab)
      : ModelImpl(Family::kDirectProduct, std::move(ab.first),
                  "dirprod(" + a.spec() + "," + b.spec() + ")", 0,
                  product_mode(a, b)),
        routes_(std::move(ab.second)) {
    factors_ = {a, b};
  }

  Element identity() const override {
    return join(factors_[0].identity(), factors_[1].identity());
  }

  void apply(Element& g, Letter x) const override {
    auto [p, q] = split(g);
    const auto& r = routes_[x];
    if (r.factor == 0) {
      factors_[0].apply(p, r.letter);
    } else {
      factors_[1].apply(q, r.letter);
    }
    g = join(p, q);
  }

  Element multiply(const Element& a, const Element& b) const override {
    auto [a0, a1] = split(a);
    auto [b0, b1] = split(b);
    return join(factors_[0].multiply(a0, b0), factors_[1].multiply(a1, b1));
  }

  Element inverse(const Element& g) const override {
    auto [p, q] = split(g);
    return join(factors_[0].inverse(p), factors_[1].inverse(q));
  }

  Word canonical_word(const Element& g) const override {
    auto [p, q] = split(g);
    Word out;
    for (std::size_t f = 0; f < 2; ++f) {
      const Word w = factors_[f].canonical_word(f == 0 ? p : q);
      for (Letter fl : w) out.push_back(to_product(f, fl));
    }
    return out;
  }

  std::int64_t norm(const Element& g) const override {
    auto [p, q] = split(g);
    return factors_[0].norm(p) + factors_[1].norm(q);
  }

  std::int64_t distance(const Element& a, const Element& b) const override {
    auto [a0, a1] = split(a);
    auto [b0, b1] = split(b);
    return factors_[0].distance(a0, b0) + factors_[1].distance(a1, b1);
  }

 private:
  static Element join(const Element& p, const Element& q) {
    Element out;
    out.code.reserve(1 + p.code.size() + q.code.size());
    out.code.push_back(static_cast<std::int64_t>(p.code.size()));
    out.code.insert(out.code.end(), p.code.begin(), p.code.end());
    out.code.insert(out.code.end(), q.code.begin(), q.code.end());
    return out;
  }
  static std::pair<Element, Element> split(const Element& g) {
    const auto n = static_cast<std::size_t>(g.code[0]);
    Element p{{g.code.begin() + 1, g.code.begin() + 1 + n}};
    Element q{{g.code.begin() + 1 + n, g.code.end()}};
    return {std::move(p), std::move(q)};
  }
  Letter to_product(std::size_t f, Letter fl) const {
    for (std::size_t x = 0; x < routes_.size(); ++x) {
      if (routes_[x].factor == f && routes_[x].letter == fl) {
        return static_cast<Letter>(x);
      }
    }
    throw InvariantError("factor letter has no product letter");
  }

  std::vector<LetterRoute> routes_;
};

// Normal form: alternating nontrivial syllables. Code layout per syllable:
// [factor, len, code...].
class FreeProductImpl final : public ModelImpl {
 public:
  FreeProductImpl(const GroupModel& a, const GroupModel& b,
                  std::pair<GeneratorAlphabet, std::vector<LetterRoute>> ab)
      : ModelImpl(Family::kFreeProduct, std::move(ab.first),
                  "freeprod(" + a.spec() + "," + b.spec() + ")", 0,
                  product_mode(a, b)),
        routes_(std::move(ab.second)) {
    factors_ = {a, b};
  }

  Element identity() const override { return {}; }

  void apply(Element& g, Letter x) const override {
    const auto& r = routes_[x];
    auto syllables = split(g);
    if (!syllables.empty() && syllables.back().first == r.factor) {
      factors_[r.factor].apply(syllables.back().second, r.letter);
      if (syllables.back().second == factors_[r.factor].identity()) {
        syllables.pop_back();
      }
    } else {
      syllables.emplace_back(r.factor,
                             factors_[r.factor].times(
                                 factors_[r.factor].identity(), r.letter));
    }
    g = join(syllables);
  }

  Element inverse(const Element& g) const override {
    auto syllables = split(g);
    std::reverse(syllables.begin(), syllables.end());
    for (auto& [f, e] : syllables) e = factors_[f].inverse(e);
    return join(syllables);
  }

  Word canonical_word(const Element& g) const override {
    Word out;
    for (const auto& [f, e] : split(g)) {
      for (Letter fl : factors_[f].canonical_word(e)) {
        out.push_back(to_product(f, fl));
      }
    }
    return out;
  }

  std::int64_t norm(const Element& g) const override {
    std::int64_t total = 0;
    for (const auto& [f, e] : split(g)) total += factors_[f].norm(e);
    return total;
  }

 private:
  using Syllable = std::pair<std::size_t, Element>;

  static std::vector<Syllable> split(const Element& g) {
    std::vector<Syllable> out;
    std::size_t i = 0;
    while (i < g.code.size()) {
      const auto f = static_cast<std::size_t>(g.code[i]);
      const auto n = static_cast<std::size_t>(g.code[i + 1]);
      out.emplace_back(f, Element{{g.code.begin() + i + 2,
                                   g.code.begin() + i + 2 + n}});
      i += 2 + n;
    }
    return out;
  }
  static Element join(const std::vector<Syllable>& syllables) {
    Element out;
    for (const auto& [f, e] : syllables) {
      out.code.push_back(static_cast<std::int64_t>(f));
      out.code.push_back(static_cast<std::int64_t>(e.code.size()));
      out.code.insert(out.code.end(), e.code.begin(), e.code.end());
    }
    return out;
  }
  Letter to_product(std::size_t f, Letter fl) const {
    for (std::size_t x = 0; x < routes_.size(); ++x) {
      if (routes_[x].factor == f && routes_[x].letter == fl) {
        return static_cast<Letter>(x);
      }
    }
    throw InvariantError("factor letter has no product letter");
  }

  std::vector<LetterRoute> routes_;
};

void check_rank(int rank, const char* what) {
  if (rank < 1) {
    throw ConfigError(std::string(what) + " rank must be >= 1, got " +
                      std::to_string(rank));
  }
  if (rank > 26) {
    throw ConfigError(std::string(what) + " rank must be <= 26, got " +
                      std::to_string(rank));
  }
}

// Recursive-descent parser over the model grammar.
class SpecParser {
 public:
  explicit SpecParser(std::string_view text) : text_(text) {}

  GroupModel parse() {
    GroupModel model = parse_model();
    skip_space();
    if (pos_ != text_.size()) fail("trailing characters");
    return model;
  }

 private:
  GroupModel parse_model() {
    skip_space();
    std::string name;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])))) {
      name.push_back(text_[pos_++]);
    }
    skip_space();
    if (name == "heis3") return make_heisenberg3();
    if (name == "dirprod" || name == "freeprod") {
      expect('(');
      GroupModel a = parse_model();
      expect(',');
      GroupModel b = parse_model();
      expect(')');
      return name == "dirprod" ? make_direct_product(a, b)
                               : make_free_product(a, b);
    }
    if (name == "free" || name == "abelian" || name == "cyclic") {
      expect(':');
      const int value = parse_int();
      if (name == "free") return make_free_group(value);
      if (name == "abelian") return make_free_abelian(value);
      return make_cyclic(value);
    }
    fail(name.empty() ? "expected a model name" : "unknown model \"" + name + "\"");
  }

  int parse_int() {
    skip_space();
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
    }
    if (start == pos_ || pos_ - start > 6) fail("expected an integer");
    return std::stoi(std::string(text_.substr(start, pos_ - start)));
  }

  void expect(char c) {
    skip_space();
    if (pos_ >= text_.size() || text_[pos_] != c) {
      fail(std::string("expected '") + c + "'");
    }
    ++pos_;
  }

  void skip_space() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
    }
  }

  [[noreturn]] void fail(const std::string& why) const {
    throw ConfigError("bad model spec \"" + std::string(text_) + "\" at " +
                      std::to_string(pos_) + ": " + why);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace
}  // namespace detail

GroupModel::GroupModel(std::shared_ptr<const detail::ModelImpl> impl)
    : impl_(std::move(impl)) {}

Family GroupModel::family() const { return impl_->family_; }
MetricMode GroupModel::metric_mode() const { return impl_->mode_; }
const GeneratorAlphabet& GroupModel::alphabet() const {
  return impl_->alphabet_;
}
const std::string& GroupModel::spec() const { return impl_->spec_; }
std::int64_t GroupModel::parameter() const { return impl_->parameter_; }
const std::vector<GroupModel>& GroupModel::factors() const {
  return impl_->factors_;
}

Element GroupModel::identity() const { return impl_->identity(); }
void GroupModel::apply(Element& g, Letter x) const { impl_->apply(g, x); }

Element GroupModel::evaluate(const Word& w) const {
  return evaluate_from(identity(), w);
}

Element GroupModel::evaluate_from(Element base, const Word& w) const {
  check_word(alphabet(), w);
  for (Letter x : w) impl_->apply(base, x);
  return base;
}

Element GroupModel::multiply(const Element& a, const Element& b) const {
  return impl_->multiply(a, b);
}
Element GroupModel::inverse(const Element& g) const {
  return impl_->inverse(g);
}
Word GroupModel::canonical_word(const Element& g) const {
  return impl_->canonical_word(g);
}

std::int64_t GroupModel::norm(const Element& g) const {
  if (!has_closed_form()) {
    throw NotCertified(spec() + " has no closed-form word metric");
  }
  return impl_->norm(g);
}

std::int64_t GroupModel::distance(const Element& a, const Element& b) const {
  if (!has_closed_form()) {
    throw NotCertified(spec() + " has no closed-form word metric");
  }
  return impl_->distance(a, b);
}

GroupModel make_free_group(int rank) {
  detail::check_rank(rank, "free group");
  return GroupModel(std::make_shared<detail::FreeGroupImpl>(rank));
}

GroupModel make_free_abelian(int rank) {
  detail::check_rank(rank, "free abelian group");
  return GroupModel(std::make_shared<detail::AbelianImpl>(rank));
}

GroupModel make_cyclic(int order) {
  if (order < 2) {
    throw ConfigError("cyclic order must be >= 2, got " +
                      std::to_string(order));
  }
  return GroupModel(std::make_shared<detail::CyclicImpl>(order));
}

GroupModel make_direct_product(const GroupModel& a, const GroupModel& b) {
  return GroupModel(std::make_shared<detail::DirectProductImpl>(
      a, b, detail::combine_alphabets(a, b)));
}

GroupModel make_free_product(const GroupModel& a, const GroupModel& b) {
  return GroupModel(std::make_shared<detail::FreeProductImpl>(
      a, b, detail::combine_alphabets(a, b)));
}

GroupModel make_heisenberg3() {
  return GroupModel(std::make_shared<detail::HeisenbergImpl>());
}

GroupModel make_model(std::string_view spec) {
  return detail::SpecParser(spec).parse();
}

Word reduce(const GroupModel& model, const Word& w) {
  return model.canonical_word(model.evaluate(w));
}

bool is_identity(const GroupModel& model, const Word& w) {
  return model.evaluate(w) == model.identity();
}

std::int64_t word_metric(const GroupModel& model, const Word& w) {
  return model.norm(model.evaluate(w));
}

std::vector<Element> trace_path(const GroupModel& model, const Word& w) {
  check_word(model.alphabet(), w);
  std::vector<Element> out;
  out.reserve(w.size() + 1);
  out.push_back(model.identity());
  for (Letter x : w) out.push_back(model.times(out.back(), x));
  return out;
}

}  // namespace hypqg
