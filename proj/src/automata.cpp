#include "hypqg/automata.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <map>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "hypqg/error.hpp"

namespace hypqg {

namespace {

// Path vertices of a word under construction, with the predicate status of
// every prefix. Both predicates are prefix-closed, so a failed prefix fails
// all its extensions.
class IncrementalChecker {
 public:
  IncrementalChecker(const Metric& metric, const WordPredicate& predicate)
      : metric_(metric), predicate_(predicate) {
    path_.push_back(metric.model().identity());
    ok_.push_back(true);
  }

  std::size_t length() const { return path_.size() - 1; }
  bool ok() const { return ok_.back(); }

  bool push(Letter x) {
    path_.push_back(metric_.model().times(path_.back(), x));
    const std::size_t j = length();
    bool good = ok_.back();
    if (good) {
      if (!predicate_) {
        good = metric_.norm(path_.back()) == static_cast<std::int64_t>(j);
      } else {
        for (std::size_t i = 0; i < j && good; ++i) {
          good = predicate_->admits(static_cast<std::int64_t>(j - i),
                                    metric_.distance(path_[i], path_[j]));
        }
      }
    }
    ok_.push_back(good);
    return good;
  }

  void pop() {
    path_.pop_back();
    ok_.pop_back();
  }

 private:
  const Metric& metric_;
  const WordPredicate& predicate_;
  std::vector<Element> path_;
  std::vector<bool> ok_;
};

Metric certified_metric(const GroupModel& model, std::size_t radius) {
  return Metric::for_model(model, static_cast<std::int64_t>(radius));
}

}  // namespace

std::vector<bool> Dfa::dead_states() const {
  // Reverse reachability from accepting states.
  std::vector<std::vector<std::uint32_t>> reverse(states);
  const std::size_t letters = alphabet.size();
  for (std::size_t s = 0; s < states; ++s) {
    for (std::size_t x = 0; x < letters; ++x) {
      reverse[transition[s * letters + x]].push_back(
          static_cast<std::uint32_t>(s));
    }
  }
  std::vector<bool> live(states, false);
  std::deque<std::uint32_t> queue;
  for (std::size_t s = 0; s < states; ++s) {
    if (accepting[s]) {
      live[s] = true;
      queue.push_back(static_cast<std::uint32_t>(s));
    }
  }
  while (!queue.empty()) {
    const auto s = queue.front();
    queue.pop_front();
    for (auto r : reverse[s]) {
      if (!live[r]) {
        live[r] = true;
        queue.push_back(r);
      }
    }
  }
  std::vector<bool> dead(states);
  for (std::size_t s = 0; s < states; ++s) dead[s] = !live[s];
  return dead;
}

void Dfa::validate() const {
  if (states == 0) throw InvariantError("DFA has no states");
  if (transition.size() != states * alphabet.size()) {
    throw InvariantError("DFA transition table is not total");
  }
  if (accepting.size() != states) {
    throw InvariantError("DFA accepting set has the wrong size");
  }
  if (initial >= states) throw InvariantError("DFA initial state is invalid");
  for (auto t : transition) {
    if (t >= states) throw InvariantError("DFA transition leaves the states");
  }
}

Dfa constant_dfa(const GeneratorAlphabet& alphabet, bool accept) {
  Dfa d;
  d.alphabet = alphabet;
  d.states = 1;
  d.transition.assign(alphabet.size(), 0);
  d.accepting = {accept};
  return d;
}

bool dfa_accepts(const Dfa& dfa, const Word& w) {
  check_word(dfa.alphabet, w);
  std::uint32_t s = dfa.initial;
  for (Letter x : w) s = dfa.next(s, x);
  return dfa.accepting[s];
}

Dfa minimize(const Dfa& dfa) {
  dfa.validate();
  const std::size_t letters = dfa.alphabet.size();

  std::vector<std::uint32_t> reachable{dfa.initial};
  std::vector<bool> seen(dfa.states, false);
  seen[dfa.initial] = true;
  for (std::size_t k = 0; k < reachable.size(); ++k) {
    for (std::size_t x = 0; x < letters; ++x) {
      const auto t = dfa.next(reachable[k], static_cast<Letter>(x));
      if (!seen[t]) {
        seen[t] = true;
        reachable.push_back(t);
      }
    }
  }

  // Moore refinement.
  std::vector<std::uint32_t> cls(dfa.states, 0);
  for (auto s : reachable) cls[s] = dfa.accepting[s] ? 1 : 0;
  std::size_t count = 0;
  while (true) {
    std::map<std::vector<std::uint32_t>, std::uint32_t> ids;
    std::vector<std::uint32_t> next_cls(dfa.states, 0);
    for (auto s : reachable) {
      std::vector<std::uint32_t> key{cls[s]};
      for (std::size_t x = 0; x < letters; ++x) {
        key.push_back(cls[dfa.next(s, static_cast<Letter>(x))]);
      }
      const auto it =
          ids.emplace(std::move(key), static_cast<std::uint32_t>(ids.size()))
              .first;
      next_cls[s] = it->second;
    }
    cls = std::move(next_cls);
    if (ids.size() == count) break;
    count = ids.size();
  }

  // Quotient automaton.
  Dfa q;
  q.alphabet = dfa.alphabet;
  q.states = count;
  q.transition.assign(count * letters, 0);
  q.accepting.assign(count, false);
  for (auto s : reachable) {
    q.accepting[cls[s]] = dfa.accepting[s];
    for (std::size_t x = 0; x < letters; ++x) {
      q.transition[cls[s] * letters + x] =
          cls[dfa.next(s, static_cast<Letter>(x))];
    }
  }
  q.initial = cls[dfa.initial];
  const auto dead = q.dead_states();

  // Canonical numbering: BFS over live states, dead state last.
  constexpr auto kUnset = static_cast<std::uint32_t>(-1);
  std::vector<std::uint32_t> order(count, kUnset);
  std::vector<std::uint32_t> by_new;
  std::optional<std::uint32_t> dead_state;
  for (std::uint32_t s = 0; s < count; ++s) {
    if (dead[s]) dead_state = s;
  }
  if (!dead[q.initial]) {
    order[q.initial] = 0;
    by_new.push_back(q.initial);
    for (std::size_t k = 0; k < by_new.size(); ++k) {
      for (std::size_t x = 0; x < letters; ++x) {
        const auto t = q.transition[by_new[k] * letters + x];
        if (dead[t] || order[t] != kUnset) continue;
        order[t] = static_cast<std::uint32_t>(by_new.size());
        by_new.push_back(t);
      }
    }
  }
  if (dead_state) {
    order[*dead_state] = static_cast<std::uint32_t>(by_new.size());
    by_new.push_back(*dead_state);
  }

  Dfa out;
  out.alphabet = dfa.alphabet;
  out.states = by_new.size();
  out.transition.resize(out.states * letters);
  out.accepting.resize(out.states);
  out.initial = order[q.initial];
  for (std::size_t n = 0; n < by_new.size(); ++n) {
    const auto old = by_new[n];
    out.accepting[n] = q.accepting[old];
    for (std::size_t x = 0; x < letters; ++x) {
      out.transition[n * letters + x] = order[q.transition[old * letters + x]];
    }
  }
  return out;
}

EquivalenceResult dfa_equiv_up_to(const Dfa& a, const Dfa& b, std::size_t n) {
  if (!(a.alphabet == b.alphabet)) {
    throw AlphabetError("DFAs are over different alphabets: " +
                        a.alphabet.symbols() + " vs " + b.alphabet.symbols());
  }
  a.validate();
  b.validate();
  const std::size_t letters = a.alphabet.size();
  const std::size_t pairs = a.states * b.states;
  if (pairs * (n + 1) > 200'000'000) {
    throw ResourceError("bounded equivalence table too large");
  }
  auto pair_of = [&](std::uint32_t p, std::uint32_t q) {
    return static_cast<std::size_t>(p) * b.states + q;
  };
  // bad[d][pair]: some word of length <= d disagrees from this pair.
  std::vector<std::vector<char>> bad(n + 1, std::vector<char>(pairs, 0));
  for (std::uint32_t p = 0; p < a.states; ++p) {
    for (std::uint32_t q = 0; q < b.states; ++q) {
      bad[0][pair_of(p, q)] = a.accepting[p] != b.accepting[q];
    }
  }
  for (std::size_t d = 1; d <= n; ++d) {
    for (std::uint32_t p = 0; p < a.states; ++p) {
      for (std::uint32_t q = 0; q < b.states; ++q) {
        char v = bad[0][pair_of(p, q)];
        for (std::size_t x = 0; x < letters && !v; ++x) {
          const auto l = static_cast<Letter>(x);
          v = bad[d - 1][pair_of(a.next(p, l), b.next(q, l))];
        }
        bad[d][pair_of(p, q)] = v;
      }
    }
  }
  EquivalenceResult out;
  std::uint32_t p = a.initial, q = b.initial;
  if (!bad[n][pair_of(p, q)]) return out;
  out.equivalent = false;
  Word w;
  for (std::size_t remaining = n;; --remaining) {
    if (a.accepting[p] != b.accepting[q]) break;
    for (std::size_t x = 0; x < letters; ++x) {
      const auto l = static_cast<Letter>(x);
      if (bad[remaining - 1][pair_of(a.next(p, l), b.next(q, l))]) {
        w.push_back(l);
        p = a.next(p, l);
        q = b.next(q, l);
        break;
      }
    }
  }
  out.counterexample = std::move(w);
  return out;
}

ConeTypeResult cone_type_automaton(const GroupModel& model, std::int64_t k,
                                   std::int64_t radius) {
  if (k < 1) throw ConfigError("cone depth k must be >= 1");
  if (radius < 2 * k) throw ConfigError("radius must be >= 2k");
  const Ball ball = build_ball(model, radius);
  const std::size_t letters = model.alphabet().size();
  const std::int64_t horizon = radius - k;

  // Cone-type bit for every word u with |u| <= k, in lexicographic
  // preorder (bit 0 is the empty word).
  auto cone_type = [&](std::size_t v) {
    std::vector<bool> bits;
    auto dfs = [&](auto&& self, std::size_t at, std::int64_t depth) -> void {
      bits.push_back(true);
      if (depth == k) return;
      for (std::size_t x = 0; x < letters; ++x) {
        const auto t = ball.step(at, static_cast<Letter>(x));
        if (t && ball.dist(*t) == ball.dist(at) + 1) {
          self(self, *t, depth + 1);
        } else {
          // Whole subtree is non-geodesic.
          std::int64_t size = 1;
          for (std::int64_t r = depth + 1; r < k; ++r) {
            size = 1 + static_cast<std::int64_t>(letters) * size;
          }
          bits.insert(bits.end(), static_cast<std::size_t>(size), false);
        }
      }
    };
    dfs(dfs, v, 0);
    return bits;
  };

  std::map<std::vector<bool>, std::uint32_t> ids;
  std::vector<std::uint32_t> type_of(ball.size(), 0);
  std::vector<std::size_t> representative;
  std::vector<std::vector<bool>> type_bits;
  for (std::size_t v = 0; v < ball.size() && ball.dist(v) <= horizon; ++v) {
    auto bits = cone_type(v);
    const auto [it, fresh] =
        ids.emplace(bits, static_cast<std::uint32_t>(ids.size()));
    if (fresh) {
      representative.push_back(v);
      type_bits.push_back(std::move(bits));
    }
    type_of[v] = it->second;
  }
  const std::size_t types = representative.size();
  const auto dead = static_cast<std::uint32_t>(types);

  // Bit of the one-letter word x sits at preorder index 1 + x * S(k-1).
  std::size_t sub = 1;
  for (std::int64_t r = 1; r < k; ++r) sub = 1 + letters * sub;
  auto extends = [&](std::uint32_t type, std::size_t x) {
    return static_cast<bool>(type_bits[type][1 + x * sub]);
  };

  Dfa raw;
  raw.alphabet = model.alphabet();
  raw.states = types + 1;
  raw.transition.assign(raw.states * letters, dead);
  raw.accepting.assign(raw.states, true);
  raw.accepting[dead] = false;
  raw.initial = type_of[0];
  bool stabilized = true;
  for (std::uint32_t t = 0; t < types; ++t) {
    const auto v = representative[t];
    if (ball.dist(v) >= horizon) {
      stabilized = false;
      continue;
    }
    for (std::size_t x = 0; x < letters; ++x) {
      if (!extends(t, x)) continue;
      const auto target = *ball.step(v, static_cast<Letter>(x));
      raw.transition[t * letters + x] = type_of[target];
    }
  }
  // Every element strictly inside the horizon must agree with its
  // type's representative.
  for (std::size_t v = 0; v < ball.size() && ball.dist(v) < horizon; ++v) {
    const auto t = type_of[v];
    for (std::size_t x = 0; x < letters; ++x) {
      if (!extends(t, x)) continue;
      const auto target = *ball.step(v, static_cast<Letter>(x));
      if (raw.transition[t * letters + x] != type_of[target]) {
        stabilized = false;
      }
    }
  }
  return {minimize(raw), stabilized, types};
}

LanguageReport validate_language(const Dfa& dfa, const GroupModel& model,
                                 const WordPredicate& predicate,
                                 std::size_t max_len) {
  if (!(dfa.alphabet == model.alphabet())) {
    throw AlphabetError("DFA alphabet " + dfa.alphabet.symbols() +
                        " does not match model alphabet " +
                        model.alphabet().symbols());
  }
  dfa.validate();
  const Metric metric = certified_metric(model, max_len);
  const auto dead = dfa.dead_states();
  const std::size_t letters = dfa.alphabet.size();
  IncrementalChecker checker(metric, predicate);
  LanguageReport report;
  report.max_len = max_len;
  Word current;

  // Returns how many words a subtree contains, used when pruning.
  std::vector<std::uint64_t> subtree(max_len + 1, 1);
  for (std::size_t r = 1; r <= max_len; ++r) {
    subtree[r] = 1 + letters * subtree[r - 1];
  }

  auto dfs = [&](auto&& self, std::uint32_t state) -> void {
    const bool expected = checker.ok();
    ++report.words_checked;
    if (dfa.accepting[state] != expected) {
      ++report.mismatches;
      if (!report.first_mismatch) report.first_mismatch = current;
    }
    const std::size_t remaining = max_len - current.size();
    if (remaining == 0) return;
    if (!expected && dead[state]) {
      // Both reject every extension.
      report.words_checked += subtree[remaining] - 1;
      return;
    }
    for (std::size_t x = 0; x < letters; ++x) {
      const auto l = static_cast<Letter>(x);
      current.push_back(l);
      checker.push(l);
      self(self, dfa.next(state, l));
      checker.pop();
      current.pop_back();
    }
  };
  dfs(dfs, dfa.initial);
  return report;
}

NerodeReport nerode_classes(const GroupModel& model, const QGParams& params,
                            std::size_t horizon, std::size_t max_prefix_len,
                            unsigned threads) {
  if (horizon == 0 || max_prefix_len == 0) {
    throw ConfigError("horizon and max_prefix_len must be positive");
  }
  const std::size_t letters = model.alphabet().size();
  std::vector<std::size_t> subtree(horizon + 1, 1);
  for (std::size_t r = 1; r <= horizon; ++r) {
    subtree[r] = 1 + letters * subtree[r - 1];
    if (subtree[r] > kMaxSignatureWidth) {
      throw ResourceError("signature width " + std::to_string(letters) + "^" +
                          std::to_string(horizon) + " exceeds the limit of " +
                          std::to_string(kMaxSignatureWidth) + " extensions");
    }
  }
  const std::size_t width = subtree[horizon];
  const Metric metric = certified_metric(model, max_prefix_len + horizon);
  const WordPredicate predicate = params;

  // Qualifying prefixes in shortlex order.
  std::vector<Word> prefixes{Word{}};
  std::vector<std::size_t> level_end;
  {
    std::size_t begin = 0;
    level_end.push_back(1);
    for (std::size_t len = 1; len <= max_prefix_len; ++len) {
      const std::size_t end = prefixes.size();
      for (std::size_t p = begin; p < end; ++p) {
        for (std::size_t x = 0; x < letters; ++x) {
          Word w = prefixes[p];
          w.push_back(static_cast<Letter>(x));
          if (is_quasigeodesic(metric, w, params).ok) {
            prefixes.push_back(std::move(w));
          }
        }
      }
      begin = end;
      level_end.push_back(prefixes.size());
    }
  }

  using Signature = std::vector<std::uint64_t>;
  auto signature_of = [&](const Word& w) {
    Signature sig((width + 63) / 64, 0);
    IncrementalChecker checker(metric, predicate);
    for (Letter x : w) checker.push(x);
    std::size_t bit = 0;
    auto dfs = [&](auto&& self, std::size_t remaining) -> void {
      if (!checker.ok()) {
        bit += subtree[remaining];
        return;
      }
      sig[bit / 64] |= std::uint64_t{1} << (bit % 64);
      ++bit;
      if (remaining == 0) return;
      for (std::size_t x = 0; x < letters; ++x) {
        checker.push(static_cast<Letter>(x));
        self(self, remaining - 1);
        checker.pop();
      }
    };
    dfs(dfs, horizon);
    return sig;
  };

  std::vector<Signature> signatures(prefixes.size());
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(
      std::min<std::size_t>(threads, prefixes.size()));
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&, t] {
        for (std::size_t p = t; p < prefixes.size(); p += threads) {
          signatures[p] = signature_of(prefixes[p]);
        }
      });
    }
  }

  NerodeReport report;
  report.params = params;
  report.horizon = horizon;
  report.max_prefix_len = max_prefix_len;
  std::map<Signature, std::size_t> classes;
  std::size_t p = 0;
  for (std::size_t len = 0; len <= max_prefix_len; ++len) {
    for (; p < level_end[len]; ++p) {
      if (classes.emplace(signatures[p], classes.size()).second) {
        report.representatives.push_back(prefixes[p]);
      }
    }
    report.class_count_by_length.push_back(classes.size());
  }
  return report;
}

GeneratorAlphabet alphabet_from_symbols(const std::string& symbols) {
  std::vector<char> gens;
  std::vector<bool> involution;
  for (std::size_t k = 0; k < symbols.size(); ++k) {
    const char c = symbols[k];
    if (!std::islower(static_cast<unsigned char>(c))) {
      throw ConfigError("bad alphabet symbols: " + symbols);
    }
    const char inv = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    const bool paired = k + 1 < symbols.size() && symbols[k + 1] == inv;
    gens.push_back(c);
    involution.push_back(!paired);
    if (paired) ++k;
  }
  GeneratorAlphabet out(gens, involution);
  if (out.symbols() != symbols) {
    throw ConfigError("bad alphabet symbols: " + symbols);
  }
  return out;
}

std::string dfa_to_json_text(const Dfa& dfa) {
  const std::size_t letters = dfa.alphabet.size();
  nlohmann::json doc;
  doc["format"] = "hypqg-dfa";
  doc["alphabet"] = dfa.alphabet.symbols();
  doc["states"] = dfa.states;
  doc["initial"] = dfa.initial;
  auto& accepting = doc["accepting"] = nlohmann::json::array();
  auto& table = doc["transitions"] = nlohmann::json::array();
  for (std::size_t s = 0; s < dfa.states; ++s) {
    if (dfa.accepting[s]) accepting.push_back(s);
    table.push_back(std::vector<std::uint32_t>(
        dfa.transition.begin() + static_cast<std::ptrdiff_t>(s * letters),
        dfa.transition.begin() + static_cast<std::ptrdiff_t>((s + 1) * letters)));
  }
  return doc.dump();
}

Dfa dfa_from_json_text(const std::string& text) {
  try {
    const auto doc = nlohmann::json::parse(text);
    if (doc.at("format") != "hypqg-dfa") throw ConfigError("not a DFA document");
    Dfa d;
    d.alphabet = alphabet_from_symbols(doc.at("alphabet").get<std::string>());
    d.states = doc.at("states").get<std::size_t>();
    d.initial = doc.at("initial").get<std::uint32_t>();
    d.accepting.assign(d.states, false);
    for (const auto& s : doc.at("accepting")) {
      const auto v = s.get<std::size_t>();
      if (v >= d.states) throw ConfigError("accepting state out of range");
      d.accepting[v] = true;
    }
    const auto& table = doc.at("transitions");
    if (table.size() != d.states) throw ConfigError("transition table size");
    for (const auto& row : table) {
      if (row.size() != d.alphabet.size()) {
        throw ConfigError("transition row size");
      }
      for (const auto& t : row) d.transition.push_back(t.get<std::uint32_t>());
    }
    try {
      d.validate();
    } catch (const InvariantError& e) {
      throw ConfigError(e.what());
    }
    return d;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed DFA document: ") + e.what());
  }
}

std::string dfa_to_dot(const Dfa& dfa) {
  const auto dead = dfa.dead_states();
  std::ostringstream out;
  out << "digraph dfa {\n  rankdir=LR;\n  start [shape=point];\n";
  for (std::size_t s = 0; s < dfa.states; ++s) {
    out << "  " << s << " [shape="
        << (dfa.accepting[s] ? "doublecircle" : "circle");
    if (dead[s]) out << ", style=dashed";
    out << "];\n";
  }
  out << "  start -> " << dfa.initial << ";\n";
  const std::size_t letters = dfa.alphabet.size();
  for (std::size_t s = 0; s < dfa.states; ++s) {
    // One edge per target, labels merged.
    std::map<std::uint32_t, std::string> labels;
    for (std::size_t x = 0; x < letters; ++x) {
      labels[dfa.transition[s * letters + x]].push_back(
          dfa.alphabet.symbol(static_cast<Letter>(x)));
    }
    for (const auto& [t, label] : labels) {
      out << "  " << s << " -> " << t << " [label=\"" << label << "\"];\n";
    }
  }
  out << "}\n";
  return out.str();
}

}  // namespace hypqg
