#include "hypqg/witness.hpp"

#include <algorithm>
#include <future>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "hypqg/error.hpp"

namespace hypqg {

namespace {

Word power(Letter x, std::int64_t n) {
  return Word(std::vector<Letter>(static_cast<std::size_t>(n), x));
}

Word commutator_square(const GeneratorAlphabet& alphabet, Letter a, Letter b,
                       std::int64_t n) {
  return power(a, n) + power(b, n) + power(alphabet.inverse(a), n) +
         power(alphabet.inverse(b), n);
}

std::string describe(const SubpathViolation& v) {
  return "subpath (" + std::to_string(v.i) + "," + std::to_string(v.j) +
         ") of length " + std::to_string(v.path_len) + " spans distance " +
         std::to_string(v.dist);
}

std::string params_text(const Rational& lambda) {
  return "(" + to_string(lambda) + ",0)";
}

Metric metric_for(const GroupModel& model, std::size_t longest) {
  return Metric::for_model(model, static_cast<std::int64_t>(longest));
}

}  // namespace

Word square_loop(const GroupModel& model, std::int64_t n) {
  if (model.family() != Family::kFreeAbelian || model.parameter() < 2) {
    throw PreconditionError("square_loop needs a free abelian group of rank "
                            ">= 2, got " + model.spec());
  }
  if (n < 1) throw PreconditionError("square_loop needs n >= 1");
  const auto& a = model.alphabet();
  return commutator_square(a, a.letter_of(0), a.letter_of(1), n);
}

Word family_loop(const GroupModel& model, std::int64_t n) {
  if (model.family() == Family::kFreeAbelian) return square_loop(model, n);
  if (model.family() == Family::kDirectProduct) {
    if (n < 1) throw PreconditionError("family_loop needs n >= 1");
    const auto& f = model.factors();
    auto usable = [](const GroupModel& g) {
      return g.family() == Family::kFreeGroup ||
             g.family() == Family::kFreeAbelian;
    };
    if (usable(f[0]) && usable(f[1])) {
      const auto& a = model.alphabet();
      return commutator_square(a, a.letter_of(0), a.letter_of(f[0].alphabet().rank()),
                               n);
    }
  }
  throw PreconditionError("no built-in witness family for " + model.spec());
}

StarCheck verify_star_witness(const Metric& metric, const Word& loop,
                              std::int64_t L, const Rational& lambda,
                              const Rational& K) {
  StarCheck out;
  if (L < 1) {
    out.reason = "L must be positive";
    return out;
  }
  if (!is_qg_loop(metric.model(), loop)) {
    out.reason = "word is not a loop";
    return out;
  }
  if (Rational(static_cast<std::int64_t>(loop.size())) > K * L) {
    out.reason = "length " + std::to_string(loop.size()) + " exceeds K*L = " +
                 to_string(K * L);
    return out;
  }
  const auto check =
      is_local_quasigeodesic(metric, loop, Rational(L), QGParams(lambda, 0));
  if (!check.ok) {
    out.reason = "not " + std::to_string(L) + "-locally " +
                 params_text(lambda) + "-quasigeodesic: " +
                 describe(*check.violation);
    return out;
  }
  out.ok = true;
  return out;
}

StarCheck verify_star_witness(StarWitness& w) {
  const auto model = make_model(w.model);
  const Metric metric = metric_for(model, w.loop.size());
  auto check = verify_star_witness(metric, w.loop, w.L, w.lambda, w.K);
  w.verified = check.ok;
  return check;
}

std::string_view to_string(SearchStatus status) {
  switch (status) {
    case SearchStatus::kFound: return "found";
    case SearchStatus::kExhausted: return "exhausted";
    case SearchStatus::kBudgetExceeded: return "budget_exceeded";
  }
  return "?";
}

StarSearchResult search_star_witness(const GroupModel& model, std::int64_t L,
                                     const Rational& lambda, const Rational& K,
                                     std::size_t max_len,
                                     std::uint64_t budget) {
  if (L < 1) throw ConfigError("L must be positive");
  if (Rational(static_cast<std::int64_t>(max_len)) > K * L) {
    throw PreconditionError("max_len " + std::to_string(max_len) +
                            " exceeds K*L = " + to_string(K * L));
  }
  const QGParams params(lambda, 0);
  const Metric metric = metric_for(model, max_len);
  const std::size_t letters = model.alphabet().size();
  const auto window = static_cast<std::size_t>(L);
  const Element e = model.identity();

  StarSearchResult result;
  std::vector<Element> path{e};
  Word current;
  auto dfs = [&](auto&& self) -> bool {
    for (std::size_t x = 0; x < letters; ++x) {
      if (result.nodes >= budget) {
        result.status = SearchStatus::kBudgetExceeded;
        return true;
      }
      ++result.nodes;
      const auto l = static_cast<Letter>(x);
      path.push_back(model.times(path.back(), l));
      current.push_back(l);
      const std::size_t j = current.size();
      bool good = true;
      for (std::size_t i = j; i-- > 0 && j - i <= window && good;) {
        good = params.admits(static_cast<std::int64_t>(j - i),
                             metric.distance(path[i], path[j]));
      }
      if (good) {
        if (path.back() == e) {
          StarWitness w{model.spec(), current, L, lambda, K, false};
          w.verified = verify_star_witness(metric, w.loop, L, lambda, K).ok;
          if (w.verified) {
            result.witness = std::move(w);
            result.status = SearchStatus::kFound;
            return true;
          }
        } else if (j < max_len && self(self)) {
          return true;
        }
      }
      current.pop_back();
      path.pop_back();
    }
    return false;
  };
  if (max_len > 0) dfs(dfs);
  return result;
}

TrimResult trim_polygon(const Metric& metric, const std::vector<Word>& edges,
                        std::int64_t L) {
  const auto& model = metric.model();
  if (L < 1) throw ConfigError("L must be positive");
  const std::size_t d = edges.size();
  if (d < 2) throw PreconditionError("a polygon needs at least two edges");

  // Vertices of every edge, in the ambient group.
  std::vector<std::vector<Element>> verts(d);
  Element at = model.identity();
  for (std::size_t j = 0; j < d; ++j) {
    if (edges[j].empty()) throw PreconditionError("empty polygon edge");
    if (!is_geodesic(metric, edges[j])) {
      throw PreconditionError("edge " + std::to_string(j + 1) +
                              " is not a geodesic word");
    }
    verts[j] = trace_path(model, edges[j]);
    for (auto& v : verts[j]) v = model.multiply(at, v);
    at = verts[j].back();
  }
  if (!(at == model.identity())) {
    throw PreconditionError("polygon edges do not close up");
  }
  auto dist_to_edge = [&](const Element& x, std::size_t j) {
    std::int64_t best = -1;
    for (const auto& y : verts[j]) {
      const auto dxy = metric.distance(x, y);
      if (best < 0 || dxy < best) best = dxy;
    }
    return best;
  };
  const auto prev = [&](std::size_t j) { return (j + d - 1) % d; };
  const auto next = [&](std::size_t j) { return (j + 1) % d; };

  for (std::size_t j = 0; j < d; ++j) {
    for (std::size_t k = 0; k < verts[j].size(); ++k) {
      const auto sep = std::max(dist_to_edge(verts[j][k], prev(j)),
                                dist_to_edge(verts[j][k], next(j)));
      if (sep < 2 * L) {
        throw PreconditionError(
            "vertex " + std::to_string(k) + " of edge " + std::to_string(j + 1) +
            " (" + to_string(model.alphabet(), edges[j].prefix(k)) +
            " from the edge start) is within " + std::to_string(sep) +
            " < 2L = " + std::to_string(2 * L) + " of both neighbouring edges");
      }
    }
  }

  TrimResult out;
  out.p.assign(d, 0);
  out.q.assign(d, 0);
  for (std::size_t j = 0; j < d; ++j) {
    std::size_t k = 0;
    while (dist_to_edge(verts[j][k], next(j)) > L) ++k;
    if (dist_to_edge(verts[j][k], next(j)) != L) {
      throw InvariantError("distance to the next edge skipped the value L");
    }
    out.q[j] = k;
  }
  for (std::size_t j = 0; j < d; ++j) {
    const auto& qj = verts[j][out.q[j]];
    const std::size_t n = next(j);
    std::size_t k = 0;
    while (k < verts[n].size() && metric.distance(qj, verts[n][k]) != L) ++k;
    if (k == verts[n].size()) {
      throw InvariantError("no vertex of the next edge at distance L");
    }
    out.p[n] = k;
  }
  for (std::size_t j = 0; j < d; ++j) {
    if (out.p[j] > out.q[j]) {
      throw InvariantError("trim points out of order on edge " +
                           std::to_string(j + 1));
    }
    const auto dpq = metric.distance(verts[j][out.p[j]], verts[j][out.q[j]]);
    if (dpq < L) {
      throw InvariantError("d(p, q) = " + std::to_string(dpq) +
                           " < L on edge " + std::to_string(j + 1));
    }
    out.pq_distance.push_back(dpq);
    out.loop.append(edges[j].subword(out.p[j], out.q[j]));
    out.loop.append(canonical_geodesic(metric, verts[j][out.q[j]],
                                       verts[next(j)][out.p[next(j)]]));
  }
  if (!is_qg_loop(model, out.loop)) {
    throw InvariantError("trimmed path is not a loop");
  }
  // Windows across the base point are covered by going around once more.
  const auto wrap = std::min<std::size_t>(static_cast<std::size_t>(L),
                                          out.loop.size());
  const Word doubled = out.loop + out.loop.prefix(wrap);
  const auto check = is_local_quasigeodesic(metric, doubled, Rational(L),
                                            QGParams(Rational(3), Rational(0)));
  if (!check.ok) {
    throw InvariantError("trimmed loop is not (L;3,0)-local: " +
                         describe(*check.violation));
  }
  return out;
}

Rational separation_kappa(const Rational& lambda, const Rational& lambda_prime,
                          const Rational& K) {
  const Rational kappa = Rational(1) / lambda - (2 * K - 1) / lambda_prime;
  if (kappa <= 0) {
    throw ParameterError("kappa = 1/lambda - (2K-1)/lambda' = " +
                         to_string(kappa) +
                         " is not positive; need lambda' > (2K-1)*lambda = " +
                         to_string((2 * K - 1) * lambda));
  }
  return kappa;
}

Rational scale_gap_bound(const Rational& lambda, const Rational& K,
                         const Rational& kappa, std::int64_t L_m) {
  return (2 * K * L_m + 1 + Rational(1) / lambda) / kappa;
}

std::int64_t next_scale(const Rational& lambda, const Rational& K,
                        const Rational& kappa, std::int64_t L_m) {
  return floor_plus_one(scale_gap_bound(lambda, K, kappa, L_m));
}

namespace {

// The six inequalities that hold for every genuine certificate. Returns
// the failures.
std::vector<std::string> bookkeeping_failures(const SeparationCertificate& c) {
  std::vector<std::string> out;
  auto need = [&](bool ok, const std::string& what) {
    if (!ok) out.push_back("inequality fails: " + what);
  };
  const Rational tm(c.t_m), tn(c.t_n), Tn(c.T_n);
  need(c.L_m <= c.t_m && tm <= c.K * c.L_m, "L_m <= t_m <= K*L_m");
  need(c.L_n <= c.t_n, "L_n <= t_n");
  need(Tn <= c.K * c.L_n && c.K * c.L_n <= c.K * c.t_n, "T_n <= K*L_n <= K*t_n");
  need(tm / c.lambda <= c.norm_m && Rational(c.norm_m) <= (tm + 1) / c.lambda + 1,
       "t_m/lambda <= |gamma_m(t_m)| <= (t_m+1)/lambda + 1");
  need(tn / c.lambda <= c.norm_n && Rational(c.norm_n) <= (tn + 1) / c.lambda + 1,
       "t_n/lambda <= |gamma_n(t_n)| <= (t_n+1)/lambda + 1");
  need((Tn - 1) / c.lambda_prime - 1 <= c.norm_T &&
           Rational(c.norm_T) <= Tn / c.lambda_prime,
       "(T_n-1)/lambda' - 1 <= |gamma_n(T_n)| <= T_n/lambda'");
  return out;
}

Rational witness_ratio(const StarWitness& w) {
  return Rational(static_cast<std::int64_t>(w.loop.size()), w.L);
}

}  // namespace

SeparationCertificate build_separation_pair(const Metric& metric,
                                            const StarWitness& m,
                                            const StarWitness& n,
                                            const Rational& lambda_prime) {
  const auto& model = metric.model();
  if (!is_qg_loop(model, m.loop) || !is_qg_loop(model, n.loop)) {
    throw PreconditionError("both witnesses must be loops");
  }
  if (m.lambda != n.lambda) {
    throw PreconditionError("witnesses use different lambda");
  }
  if (m.L < 1 || n.L < 1) throw PreconditionError("localities must be >= 1");
  SeparationCertificate c;
  c.model = model.spec();
  c.gamma_m = m.loop;
  c.gamma_n = n.loop;
  c.L_m = m.L;
  c.L_n = n.L;
  c.lambda = m.lambda;
  c.lambda_prime = lambda_prime;
  c.K = std::max(witness_ratio(m), witness_ratio(n));
  c.kappa = separation_kappa(c.lambda, lambda_prime, c.K);
  const Rational gap = scale_gap_bound(c.lambda, c.K, c.kappa, c.L_m);
  if (Rational(c.L_n) <= gap) {
    throw ParameterError("scales too close: need L_n > " + to_string(gap) +
                         ", got L_n = " + std::to_string(c.L_n));
  }

  // Incremental prefix scans: the first violating vertex index j gives the
  // shortest failing prefix.
  const QGParams p(c.lambda, 0);
  const QGParams pp(lambda_prime, 0);
  const PathTrace trace_m(metric, c.gamma_m);
  const PathTrace trace_n(metric, c.gamma_n);
  const auto vm = first_violation(trace_m, p, c.gamma_m.size());
  const auto vn = first_violation(trace_n, p, c.gamma_n.size());
  const auto vT = first_violation(trace_n, pp, c.gamma_n.size());
  if (!vm || !vn || !vT) {
    throw InvariantError("a loop of positive length passed a global check");
  }
  c.t_m = static_cast<std::int64_t>(vm->j) - 1;
  c.t_n = static_cast<std::int64_t>(vn->j) - 1;
  c.T_n = static_cast<std::int64_t>(vT->j);
  c.negative = *vT;
  c.norm_m = metric.norm(trace_m.vertex(static_cast<std::size_t>(c.t_m)));
  c.norm_n = metric.norm(trace_n.vertex(static_cast<std::size_t>(c.t_n)));
  c.norm_T = metric.norm(trace_n.vertex(static_cast<std::size_t>(c.T_n)));
  if (c.T_n <= c.t_n) {
    throw InvariantError("T_n <= t_n: the extension segment is empty");
  }

  const auto failures = bookkeeping_failures(c);
  if (!failures.empty()) throw InvariantError(failures.front());
  const auto positive =
      is_quasigeodesic(metric, c.prefix_m() + c.extension(), pp);
  if (!positive.ok) {
    throw VerificationError(
        "prefix(gamma_m, t_m) + segment(gamma_n, t_n, T_n) is not " +
        params_text(lambda_prime) + "-quasigeodesic: " +
        describe(*positive.violation));
  }
  return c;
}

VerificationReport verify_certificate(const SeparationCertificate& c) {
  VerificationReport r;
  auto fail = [&](const std::string& what) {
    r.ok = false;
    r.transcript.push_back("FAIL " + what);
  };
  auto pass = [&](const std::string& what) {
    r.transcript.push_back("ok   " + what);
  };
  GroupModel model = make_model(c.model);
  const auto longest = std::max(c.gamma_m.size(), c.gamma_n.size());
  const Metric metric = metric_for(model, 2 * longest);

  if (c.lambda < 1 || c.lambda_prime < 1 || c.L_m < 1 || c.L_n < 1) {
    fail("constants out of range");
    return r;
  }
  if (Rational(1) / c.lambda - (2 * c.K - 1) / c.lambda_prime != c.kappa ||
      c.kappa <= 0) {
    fail("kappa " + to_string(c.kappa) +
         " is not 1/lambda - (2K-1)/lambda' or not positive");
    return r;
  }
  pass("kappa = " + to_string(c.kappa) + " > 0");
  for (const auto* side : {&c.gamma_m, &c.gamma_n}) {
    check_word(model.alphabet(), *side);
  }
  const auto check_witness = [&](const char* name, const Word& loop,
                                 std::int64_t L) {
    const auto w = verify_star_witness(metric, loop, L, c.lambda, c.K);
    if (w.ok) {
      pass(std::string(name) + " is an L-local (lambda,0) loop with |loop| <= K*L");
    } else {
      fail(std::string(name) + ": " + w.reason);
    }
    return w.ok;
  };
  if (!check_witness("gamma_m", c.gamma_m, c.L_m) ||
      !check_witness("gamma_n", c.gamma_n, c.L_n)) {
    return r;
  }
  const Rational gap = scale_gap_bound(c.lambda, c.K, c.kappa, c.L_m);
  if (Rational(c.L_n) > gap) {
    pass("scale gap L_n > " + to_string(gap));
  } else {
    fail("scales too close: L_n = " + std::to_string(c.L_n) + " <= " +
         to_string(gap));
  }

  const QGParams p(c.lambda, 0);
  const QGParams pp(c.lambda_prime, 0);
  auto in_range = [](std::int64_t t, const Word& w) {
    return t >= 1 && static_cast<std::size_t>(t) < w.size();
  };
  if (!in_range(c.t_m, c.gamma_m) || !in_range(c.t_n, c.gamma_n) ||
      !in_range(c.T_n, c.gamma_n) || c.T_n <= c.t_n) {
    fail("prefix lengths out of range");
    return r;
  }
  auto qg = [&](const Word& w, const QGParams& params) {
    return is_quasigeodesic(metric, w, params);
  };
  auto expect = [&](const std::string& what, const QGCheck& check,
                    bool want) {
    if (check.ok == want) {
      pass(what);
    } else if (check.violation) {
      fail(what + "; " + describe(*check.violation));
    } else {
      fail(what + "; no violation exists");
    }
  };
  const auto l = params_text(c.lambda);
  const auto lp = params_text(c.lambda_prime);
  for (const auto& [name, loop, t] :
       {std::tuple{"t_m", &c.gamma_m, c.t_m}, std::tuple{"t_n", &c.gamma_n, c.t_n}}) {
    expect(std::string("prefix of length ") + name + " is " + l + "-quasigeodesic",
           qg(loop->prefix(static_cast<std::size_t>(t)), p), true);
    expect(std::string("prefix of length ") + name + "+1 is not " + l +
               "-quasigeodesic (maximality)",
           qg(loop->prefix(static_cast<std::size_t>(t) + 1), p), false);
  }
  expect("prefix of length T_n is not " + lp + "-quasigeodesic",
         qg(c.gamma_n.prefix(static_cast<std::size_t>(c.T_n)), pp), false);
  expect("prefix of length T_n-1 is " + lp + "-quasigeodesic (minimality)",
         qg(c.gamma_n.prefix(static_cast<std::size_t>(c.T_n) - 1), pp), true);
  {
    const auto& v = c.negative;
    const auto T = static_cast<std::size_t>(c.T_n);
    bool real = v.i < v.j && v.j <= T &&
                v.path_len == static_cast<std::int64_t>(v.j - v.i);
    if (real) {
      const auto trace = trace_path(model, c.gamma_n.prefix(T));
      real = metric.distance(trace[v.i], trace[v.j]) == v.dist &&
             !pp.admits(v.path_len, v.dist);
    }
    if (real) {
      pass("recorded negative fact: " + describe(v));
    } else {
      fail("recorded negative fact is not a violation");
    }
  }
  expect("prefix(gamma_m, t_m) + segment(gamma_n, t_n, T_n) is " + lp +
             "-quasigeodesic",
         qg(c.prefix_m() + c.extension(), pp), true);

  // Stored norms must be the true ones before the inequalities mean anything.
  SeparationCertificate actual = c;
  actual.norm_m = metric.word_metric(c.prefix_m());
  actual.norm_n = metric.word_metric(c.prefix_n());
  actual.norm_T = metric.word_metric(c.gamma_n.prefix(static_cast<std::size_t>(c.T_n)));
  if (actual.norm_m != c.norm_m || actual.norm_n != c.norm_n ||
      actual.norm_T != c.norm_T) {
    fail("stored prefix norms do not match the loops");
  }
  const auto failures = bookkeeping_failures(actual);
  for (const auto& f : failures) fail(f);
  if (failures.empty()) pass("six bookkeeping inequalities");
  return r;
}

Tower witness_tower(const GroupModel& model, const Rational& lambda,
                    const Rational& lambda_prime, const Rational& K,
                    std::size_t depth, unsigned threads,
                    std::size_t max_loop_len) {
  if (depth < 2) throw ConfigError("tower depth must be >= 2");
  Tower t;
  t.model = model.spec();
  t.lambda = lambda;
  t.lambda_prime = lambda_prime;
  t.K = K;
  t.kappa = separation_kappa(lambda, lambda_prime, K);

  t.scales.push_back(1);
  while (t.scales.size() < depth) {
    t.scales.push_back(next_scale(lambda, K, t.kappa, t.scales.back()));
  }
  for (auto s : t.scales) {
    StarWitness w{model.spec(), {}, s, lambda, K, false};
    if (static_cast<std::size_t>(4 * s) > max_loop_len) {
      throw ResourceError("tower scale " + std::to_string(s) +
                          " needs a loop longer than the limit of " +
                          std::to_string(max_loop_len) + " letters");
    }
    w.loop = family_loop(model, s);
    t.witnesses.push_back(std::move(w));
  }
  std::size_t longest = 0;
  for (const auto& w : t.witnesses) longest = std::max(longest, w.loop.size());
  const Metric metric = metric_for(model, 2 * longest);
  for (auto& w : t.witnesses) {
    const auto check = verify_star_witness(metric, w.loop, w.L, w.lambda, w.K);
    if (!check.ok) {
      throw VerificationError("scale " + std::to_string(w.L) +
                              " witness fails: " + check.reason);
    }
    w.verified = true;
  }
  for (std::size_t i = 0; i < depth; ++i) {
    for (std::size_t j = i + 1; j < depth; ++j) t.pairs.emplace_back(i, j);
  }

  // Each certificate is built and independently re-verified on its own
  // task; results are collected in pair order.
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  t.certificates.resize(t.pairs.size());
  for (std::size_t begin = 0; begin < t.pairs.size(); begin += threads) {
    std::vector<std::future<void>> batch;
    const auto end = std::min(t.pairs.size(), begin + threads);
    for (std::size_t k = begin; k < end; ++k) {
      batch.push_back(std::async(std::launch::async, [&, k] {
        const auto [i, j] = t.pairs[k];
        auto cert = build_separation_pair(metric, t.witnesses[i],
                                          t.witnesses[j], lambda_prime);
        const auto report = verify_certificate(cert);
        if (!report.ok) {
          std::string msg = "certificate for scales " +
                            std::to_string(t.scales[i]) + "," +
                            std::to_string(t.scales[j]) + " fails:";
          for (const auto& line : report.transcript) msg += "\n  " + line;
          throw VerificationError(msg);
        }
        t.certificates[k] = std::move(cert);
      }));
    }
    for (auto& f : batch) f.get();
  }
  t.dfa_lower_bound = depth;
  return t;
}

namespace {

using nlohmann::json;

json certificate_json(const SeparationCertificate& c) {
  const auto model = make_model(c.model);
  const auto& a = model.alphabet();
  json j;
  j["format"] = "hypqg-separation-certificate";
  j["format_version"] = 1;
  j["model"] = c.model;
  j["gamma_m"] = to_string(a, c.gamma_m);
  j["gamma_n"] = to_string(a, c.gamma_n);
  j["L_m"] = c.L_m;
  j["L_n"] = c.L_n;
  j["lambda"] = to_string(c.lambda);
  j["lambda_prime"] = to_string(c.lambda_prime);
  j["K"] = to_string(c.K);
  j["kappa"] = to_string(c.kappa);
  j["t_m"] = c.t_m;
  j["t_n"] = c.t_n;
  j["T_n"] = c.T_n;
  j["norm_gamma_m_t_m"] = c.norm_m;
  j["norm_gamma_n_t_n"] = c.norm_n;
  j["norm_gamma_n_T_n"] = c.norm_T;
  j["negative_fact"] = {{"i", c.negative.i},
                        {"j", c.negative.j},
                        {"path_len", c.negative.path_len},
                        {"dist", c.negative.dist}};
  j["distinguishing"] = {{"prefix_m", to_string(a, c.prefix_m())},
                         {"prefix_n", to_string(a, c.prefix_n())},
                         {"extension", to_string(a, c.extension())}};
  return j;
}

SeparationCertificate certificate_from_json(const json& j) {
  if (j.at("format") != "hypqg-separation-certificate" ||
      j.at("format_version") != 1) {
    throw ConfigError("not a separation certificate");
  }
  SeparationCertificate c;
  c.model = j.at("model").get<std::string>();
  const auto model = make_model(c.model);
  const auto& a = model.alphabet();
  try {
    c.gamma_m = parse_word(a, j.at("gamma_m").get<std::string>());
    c.gamma_n = parse_word(a, j.at("gamma_n").get<std::string>());
  } catch (const AlphabetError& e) {
    throw ConfigError(e.what());
  }
  c.L_m = j.at("L_m").get<std::int64_t>();
  c.L_n = j.at("L_n").get<std::int64_t>();
  c.lambda = parse_rational(j.at("lambda").get<std::string>());
  c.lambda_prime = parse_rational(j.at("lambda_prime").get<std::string>());
  c.K = parse_rational(j.at("K").get<std::string>());
  c.kappa = parse_rational(j.at("kappa").get<std::string>());
  c.t_m = j.at("t_m").get<std::int64_t>();
  c.t_n = j.at("t_n").get<std::int64_t>();
  c.T_n = j.at("T_n").get<std::int64_t>();
  c.norm_m = j.at("norm_gamma_m_t_m").get<std::int64_t>();
  c.norm_n = j.at("norm_gamma_n_t_n").get<std::int64_t>();
  c.norm_T = j.at("norm_gamma_n_T_n").get<std::int64_t>();
  const auto& neg = j.at("negative_fact");
  c.negative = {neg.at("i").get<std::size_t>(), neg.at("j").get<std::size_t>(),
                neg.at("path_len").get<std::int64_t>(),
                neg.at("dist").get<std::int64_t>()};
  return c;
}

json star_json(const StarWitness& w) {
  const auto model = make_model(w.model);
  json j;
  j["format"] = "hypqg-star-witness";
  j["format_version"] = 1;
  j["model"] = w.model;
  j["loop"] = to_string(model.alphabet(), w.loop);
  j["L"] = w.L;
  j["lambda"] = to_string(w.lambda);
  j["K"] = to_string(w.K);
  j["verified"] = w.verified;
  return j;
}

StarWitness star_from_json(const json& j) {
  if (j.at("format") != "hypqg-star-witness" || j.at("format_version") != 1) {
    throw ConfigError("not a star witness");
  }
  StarWitness w;
  w.model = j.at("model").get<std::string>();
  const auto model = make_model(w.model);
  try {
    w.loop = parse_word(model.alphabet(), j.at("loop").get<std::string>());
  } catch (const AlphabetError& e) {
    throw ConfigError(e.what());
  }
  w.L = j.at("L").get<std::int64_t>();
  w.lambda = parse_rational(j.at("lambda").get<std::string>());
  w.K = parse_rational(j.at("K").get<std::string>());
  w.verified = j.at("verified").get<bool>();
  return w;
}

template <typename F>
auto with_json(const std::string& text, F&& f) {
  try {
    return f(json::parse(text));
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed document: ") + e.what());
  }
}

}  // namespace

std::string star_witness_to_json_text(const StarWitness& w) {
  return star_json(w).dump(2);
}

StarWitness star_witness_from_json_text(const std::string& text) {
  return with_json(text, [](const json& j) { return star_from_json(j); });
}

std::string certificate_to_json_text(const SeparationCertificate& c) {
  return certificate_json(c).dump(2);
}

SeparationCertificate certificate_from_json_text(const std::string& text) {
  return with_json(text,
                   [](const json& j) { return certificate_from_json(j); });
}

std::string tower_to_json_text(const Tower& t) {
  const auto model = make_model(t.model);
  json j;
  j["format"] = "hypqg-tower";
  j["format_version"] = 1;
  j["model"] = t.model;
  j["lambda"] = to_string(t.lambda);
  j["lambda_prime"] = to_string(t.lambda_prime);
  j["K"] = to_string(t.K);
  j["kappa"] = to_string(t.kappa);
  j["scales"] = t.scales;
  j["dfa_lower_bound"] = t.dfa_lower_bound;
  auto& ws = j["witnesses"] = json::array();
  for (const auto& w : t.witnesses) ws.push_back(star_json(w));
  auto& cs = j["certificates"] = json::array();
  for (std::size_t k = 0; k < t.certificates.size(); ++k) {
    auto c = certificate_json(t.certificates[k]);
    c["scale_indices"] = {t.pairs[k].first, t.pairs[k].second};
    cs.push_back(std::move(c));
  }
  // prefix(gamma_i, t_i) for every scale; pairwise separated by the
  // certificates' extensions.
  auto& prefixes = j["distinguishing_prefixes"] = json::array();
  for (std::size_t i = 0; i < t.scales.size(); ++i) {
    for (std::size_t k = 0; k < t.pairs.size(); ++k) {
      const auto& c = t.certificates[k];
      if (t.pairs[k].first == i || t.pairs[k].second == i) {
        const Word w = t.pairs[k].first == i ? c.prefix_m() : c.prefix_n();
        prefixes.push_back(to_string(model.alphabet(), w));
        break;
      }
    }
  }
  return j.dump(2);
}

VerificationReport verify_document(const std::string& text) {
  return with_json(text, [](const json& j) {
    const auto format = j.at("format").get<std::string>();
    if (format == "hypqg-star-witness") {
      StarWitness w = star_from_json(j);
      const bool claimed = w.verified;
      const auto check = verify_star_witness(w);
      VerificationReport r;
      r.ok = check.ok;
      r.transcript.push_back(check.ok ? "ok   star witness verified"
                                      : "FAIL " + check.reason);
      if (claimed != check.ok) {
        r.ok = false;
        r.transcript.push_back("FAIL stored verified flag disagrees");
      }
      return r;
    }
    if (format == "hypqg-separation-certificate") {
      return verify_certificate(certificate_from_json(j));
    }
    if (format == "hypqg-tower") {
      VerificationReport r;
      const auto& certs = j.at("certificates");
      const auto scales = j.at("scales").size();
      if (scales < 2 || certs.size() != scales * (scales - 1) / 2) {
        r.ok = false;
        r.transcript.push_back("FAIL tower does not certify every pair of scales");
      }
      for (std::size_t k = 0; k < certs.size(); ++k) {
        const auto sub = verify_certificate(certificate_from_json(certs[k]));
        r.ok = r.ok && sub.ok;
        for (const auto& line : sub.transcript) {
          r.transcript.push_back("[" + std::to_string(k) + "] " + line);
        }
      }
      return r;
    }
    throw ConfigError("unknown document format: " + format);
  });
}

}  // namespace hypqg
