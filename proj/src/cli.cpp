#include "hypqg/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iomanip>
#include <memory>
#include <nlohmann/json.hpp>
#include <set>
#include <sstream>

#include "hypqg/automata.hpp"
#include "hypqg/cayley.hpp"
#include "hypqg/error.hpp"
#include "hypqg/geodetic.hpp"
#include "hypqg/qg.hpp"
#include "hypqg/witness.hpp"

namespace hypqg::cli {

namespace {

using nlohmann::json;

struct Param {
  const char* name;
  const char* help;
};

struct KindSpec {
  const char* kind;
  const char* help;
  std::vector<Param> params;
};

const Param kModel{"model", "group model, e.g. abelian:2 or freeprod(cyclic:2,cyclic:3)"};

const std::vector<KindSpec>& kind_specs() {
  static const std::vector<KindSpec> specs = {
      {"ball", "build a Cayley ball and report sphere sizes",
       {kModel, {"radius", "ball radius"}, {"max-vertices", "vertex limit"},
        {"dot", "write the ball as DOT"}, {"csv", "write sphere sizes as CSV"}}},
      {"qg-check", "test a word against (lambda, epsilon) and an optional locality",
       {kModel, {"word", "word over the model alphabet"},
        {"lambda", "p/q, default 1/1"}, {"epsilon", "p/q, default 0/1"},
        {"locality", "p/q; omit for the global predicate"},
        {"radius", "ball radius for models without a closed form"}}},
      {"star-search", "search for a locally quasigeodesic loop",
       {kModel, {"L", "locality"}, {"lambda", "p/q"}, {"K", "p/q length ratio"},
        {"max-len", "longest word searched"}, {"budget", "node budget"},
        {"witness-out", "write the witness document"}}},
      {"star-verify", "re-verify a witness document or an inline loop",
       {kModel, {"input", "witness, certificate or tower document"},
        {"loop", "inline loop word"}, {"L", "locality"}, {"lambda", "p/q"},
        {"K", "p/q"}, {"radius", "ball radius for models without a closed form"}}},
      {"trim", "trim a geodesic polygon into a (L; 3, 0)-local loop",
       {kModel, {"L", "locality"}, {"edges", "comma-separated edge words"},
        {"shape", "square or hexagon (instead of --edges)"},
        {"side", "side length for --shape"},
        {"radius", "ball radius for models without a closed form"}}},
      {"tower", "build a witness tower with separation certificates",
       {kModel, {"lambda", "p/q, default 1/1"}, {"lambda-prime", "p/q"},
        {"K", "p/q"}, {"depth", "number of scales"},
        {"max-loop-len", "longest loop the tower may build"},
        {"cert-out", "write the tower document"}}},
      {"nerode", "count Nerode classes of a quasigeodesic language",
       {kModel, {"lambda", "p/q, default 1/1"}, {"epsilon", "p/q, default 0/1"},
        {"horizon", "extension length"}, {"max-prefix", "prefix length"},
        {"csv", "write class counts per length"}}},
      {"cone-dfa", "geodesic automaton from cone types",
       {kModel, {"k", "cone depth"}, {"radius", "ball radius"},
        {"validate-len", "also validate up to this length"},
        {"dfa-out", "write the DFA document"}, {"dot", "write the DFA as DOT"}}},
      {"validate-dfa", "compare a DFA with the exact predicate",
       {kModel, {"dfa", "DFA document"}, {"lambda", "p/q; omit for geodesics"},
        {"epsilon", "p/q, default 0/1"}, {"max-len", "longest word checked"}}},
      {"geodetic", "check uniqueness of geodesics in a ball",
       {kModel, {"radius", "ball radius"}}},
      {"iec", "find isometrically embedded odd circuits",
       {kModel, {"radius", "ball radius"}, {"max-n", "largest n, loops of length 2n+1"}}},
      {"bigon", "bigon widths by endpoint distance",
       {kModel, {"radius", "largest endpoint distance"},
        {"sample", "number of sampled endpoints; 0 = all"},
        {"max-work", "work limit"}, {"csv", "write distance,width"}}},
      {"delta", "thin-triangle defect of balls",
       {kModel, {"radius", "largest radius"},
        {"min-radius", "smallest radius, default = radius"},
        {"sample", "sampled triangles per radius; 0 = all"},
        {"csv", "write radius,delta_hat,triangles,skipped"}}},
      {"l2g", "local-to-global probe for quasigeodesics",
       {kModel, {"L", "locality"}, {"lambda", "p/q, default 1/1"},
        {"epsilon", "p/q, default 0/1"}, {"max-len", "longest word"},
        {"budget", "node budget"}, {"keep-loops", "loops stored in the report"}}},
      {"verify", "re-verify a witness, certificate or tower document",
       {{"input", "document to verify"}}},
  };
  return specs;
}

// Keys naming files. They are left out of the config echo so that reports
// do not depend on where outputs go.
const std::set<std::string> kPathKeys = {"dot",      "csv",        "witness-out",
                                         "cert-out", "dfa-out",    "input",
                                         "dfa"};

const KindSpec& spec_of(const std::string& kind) {
  for (const auto& s : kind_specs()) {
    if (kind == s.kind) return s;
  }
  throw ConfigError("unknown experiment kind: " + kind);
}

// Typed access to config values.
class Values {
 public:
  explicit Values(const ExperimentConfig& c) : c_(c) {}

  bool has(const std::string& key) const { return c_.values.count(key) > 0; }

  const std::string& str(const std::string& key) const {
    const auto it = c_.values.find(key);
    if (it == c_.values.end()) throw ConfigError("missing --" + key);
    return it->second;
  }

  std::int64_t integer(const std::string& key) const {
    const auto& text = str(key);
    std::int64_t v = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
      throw ConfigError("--" + key + " must be an integer, got \"" + text + "\"");
    }
    return v;
  }
  std::int64_t integer(const std::string& key, std::int64_t fallback) const {
    return has(key) ? integer(key) : fallback;
  }
  std::int64_t non_negative(const std::string& key) const {
    const auto v = integer(key);
    if (v < 0) throw ConfigError("--" + key + " must be >= 0");
    return v;
  }
  std::int64_t non_negative(const std::string& key, std::int64_t fallback) const {
    return has(key) ? non_negative(key) : fallback;
  }

  Rational rational(const std::string& key) const {
    try {
      return parse_rational(str(key));
    } catch (const ConfigError& e) {
      throw ConfigError("--" + key + ": " + e.what());
    }
  }
  Rational rational(const std::string& key, Rational fallback) const {
    return has(key) ? rational(key) : fallback;
  }

  QGParams params() const {
    return QGParams(rational("lambda", Rational(1)), rational("epsilon", Rational(0)));
  }

 private:
  const ExperimentConfig& c_;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string rat(const Rational& r) { return to_string(r); }

json word_json(const GroupModel& m, const Word& w) {
  return to_string(m.alphabet(), w);
}

json violation_json(const std::optional<SubpathViolation>& v) {
  if (!v) return nullptr;
  return {{"i", v->i}, {"j", v->j}, {"path_len", v->path_len}, {"dist", v->dist}};
}

// Outcome of one experiment body.
struct Outcome {
  json result = json::object();
  std::optional<bool> verified;  // set by verifying kinds
  std::vector<std::string> transcript;
  bool exhaustive = true;
  bool truncated = false;  // budget hit; result is partial
  std::vector<SideOutput> side;
};

void add_side(Outcome& o, const Values& v, const std::string& key,
              std::string content) {
  if (v.has(key)) o.side.push_back({v.str(key), std::move(content)});
}

std::optional<std::filesystem::path> cache_dir_of(const ExperimentConfig& c) {
  if (c.cache_dir) return c.cache_dir;
  if (const char* env = std::getenv("HYPQG_CACHE_DIR"); env && *env) {
    return std::filesystem::path(env);
  }
  return std::nullopt;
}

std::shared_ptr<const Ball> ball_for(const ExperimentConfig& c,
                                     const GroupModel& model, std::int64_t radius,
                                     std::size_t max_vertices = kDefaultMaxBallVertices) {
  if (radius < 0) throw ConfigError("--radius must be >= 0");
  if (const auto dir = cache_dir_of(c)) {
    return std::make_shared<const Ball>(
        build_ball_cached(model, radius, *dir, max_vertices));
  }
  return std::make_shared<const Ball>(build_ball(model, radius, max_vertices));
}

Outcome run_ball(const ExperimentConfig& c, const Values& v) {
  Outcome o;
  const auto model = make_model(v.str("model"));
  const auto ball = ball_for(c, model, v.non_negative("radius"),
                             static_cast<std::size_t>(v.non_negative(
                                 "max-vertices", kDefaultMaxBallVertices)));
  const auto spheres = ball->sphere_sizes();
  o.result = {{"radius", ball->radius()},
              {"vertices", ball->size()},
              {"sphere_sizes", spheres},
              {"alphabet", model.alphabet().symbols()}};
  if (v.has("dot")) add_side(o, v, "dot", export_dot(*ball));
  if (v.has("csv")) {
    std::ostringstream csv;
    csv << "distance,size\n";
    for (std::size_t d = 0; d < spheres.size(); ++d) csv << d << "," << spheres[d] << "\n";
    add_side(o, v, "csv", csv.str());
  }
  return o;
}

Outcome run_qg_check(const ExperimentConfig&, const Values& v) {
  Outcome o;
  const auto model = make_model(v.str("model"));
  const auto w = parse_word(model.alphabet(), v.str("word"));
  const auto metric = Metric::for_model(
      model, v.non_negative("radius", static_cast<std::int64_t>(w.size())));
  const auto params = v.params();
  const auto check = v.has("locality")
                         ? is_local_quasigeodesic(metric, w, v.rational("locality"), params)
                         : is_quasigeodesic(metric, w, params);
  o.result = {{"word", word_json(model, w)},
              {"length", w.size()},
              {"ok", check.ok},
              {"violation", violation_json(check.violation)},
              {"max_locality", max_locality(metric, w, params)},
              {"geodesic", is_geodesic(metric, w)},
              {"loop", is_qg_loop(model, w)}};
  return o;
}

json witness_json(const StarWitness& w) {
  return json::parse(star_witness_to_json_text(w));
}

Outcome run_star_search(const ExperimentConfig&, const Values& v) {
  Outcome o;
  const auto model = make_model(v.str("model"));
  const auto r = search_star_witness(
      model, v.integer("L"), v.rational("lambda"), v.rational("K"),
      static_cast<std::size_t>(v.non_negative("max-len")),
      static_cast<std::uint64_t>(v.non_negative("budget", 50'000'000)));
  o.result = {{"status", std::string(to_string(r.status))},
              {"nodes", r.nodes},
              {"witness", r.witness ? witness_json(*r.witness) : json(nullptr)}};
  o.exhaustive = r.status != SearchStatus::kBudgetExceeded;
  o.truncated = !o.exhaustive;
  if (r.witness) add_side(o, v, "witness-out", star_witness_to_json_text(*r.witness));
  return o;
}

Outcome verify_input(const Values& v) {
  Outcome o;
  const auto text = read_file(v.str("input"));
  std::string format;
  try {
    format = json::parse(text).at("format").get<std::string>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("parse error: ") + e.what());
  }
  const auto report = verify_document(text);
  o.result = {{"document_format", format}, {"verified", report.ok}};
  o.verified = report.ok;
  o.transcript = report.transcript;
  return o;
}

Outcome run_star_verify(const ExperimentConfig&, const Values& v) {
  if (v.has("input")) return verify_input(v);
  Outcome o;
  StarWitness w;
  w.model = v.str("model");
  const auto model = make_model(w.model);
  w.loop = parse_word(model.alphabet(), v.str("loop"));
  w.L = v.integer("L");
  w.lambda = v.rational("lambda");
  w.K = v.rational("K");
  const auto metric = Metric::for_model(
      model, v.non_negative("radius", static_cast<std::int64_t>(w.loop.size())));
  const auto check = verify_star_witness(metric, w.loop, w.L, w.lambda, w.K);
  w.verified = check.ok;
  o.result = {{"witness", witness_json(w)}, {"verified", check.ok}};
  o.verified = check.ok;
  o.transcript.push_back(check.ok ? "ok   star witness" : "FAIL " + check.reason);
  return o;
}

std::vector<Word> polygon_edges(const GroupModel& model, const Values& v) {
  std::vector<Word> edges;
  if (v.has("edges")) {
    std::stringstream s(v.str("edges"));
    std::string part;
    while (std::getline(s, part, ',')) edges.push_back(parse_word(model.alphabet(), part));
    return edges;
  }
  const auto shape = v.str("shape");
  const auto side = v.integer("side");
  if (side < 1) throw ConfigError("--side must be positive");
  if (model.alphabet().rank() < 2) throw ConfigError("--shape needs two generators");
  const auto& al = model.alphabet();
  const Letter a = al.letter_of(0), b = al.letter_of(1);
  auto run = [](Letter x, std::int64_t n) {
    return Word(std::vector<Letter>(static_cast<std::size_t>(n), x));
  };
  if (shape == "square") {
    return {run(a, side), run(b, side), run(al.inverse(a), side),
            run(al.inverse(b), side)};
  }
  if (shape == "hexagon") {
    return {run(a, 2 * side), run(b, side), run(al.inverse(a), side),
            run(b, side), run(al.inverse(a), side), run(al.inverse(b), 2 * side)};
  }
  throw ConfigError("--shape must be square or hexagon");
}

Outcome run_trim(const ExperimentConfig&, const Values& v) {
  Outcome o;
  const auto model = make_model(v.str("model"));
  const auto edges = polygon_edges(model, v);
  std::int64_t perimeter = 0;
  for (const auto& e : edges) perimeter += static_cast<std::int64_t>(e.size());
  const auto metric = Metric::for_model(model, v.non_negative("radius", perimeter));
  const auto L = v.integer("L");
  const auto r = trim_polygon(metric, edges, L);
  json e = json::array();
  for (const auto& w : edges) e.push_back(word_json(model, w));
  o.result = {{"edges", e},
              {"L", L},
              {"loop", word_json(model, r.loop)},
              {"length", r.loop.size()},
              {"p", r.p},
              {"q", r.q},
              {"pq_distance", r.pq_distance}};
  o.verified = true;
  o.transcript.push_back("ok   loop is cyclically (L; 3/1, 0/1)-locally quasigeodesic");
  o.transcript.push_back("ok   d(p^j, q^j) >= L on every edge");
  return o;
}

Outcome run_tower(const ExperimentConfig& c, const Values& v) {
  Outcome o;
  const auto model = make_model(v.str("model"));
  const auto t = witness_tower(
      model, v.rational("lambda", Rational(1)), v.rational("lambda-prime"),
      v.rational("K"), static_cast<std::size_t>(v.non_negative("depth")), c.threads,
      static_cast<std::size_t>(v.non_negative("max-loop-len", kDefaultMaxTowerLoop)));
  const auto text = tower_to_json_text(t);
  const auto doc = json::parse(text);
  const auto check = verify_document(text);
  o.result = {{"scales", t.scales},
              {"kappa", rat(t.kappa)},
              {"certificates", t.certificates.size()},
              {"dfa_lower_bound", t.dfa_lower_bound},
              {"tower", doc}};
  o.verified = check.ok;
  o.transcript = check.transcript;
  add_side(o, v, "cert-out", text);
  return o;
}

Outcome run_nerode(const ExperimentConfig& c, const Values& v) {
  Outcome o;
  const auto model = make_model(v.str("model"));
  const auto r = nerode_classes(model, v.params(),
                                static_cast<std::size_t>(v.non_negative("horizon")),
                                static_cast<std::size_t>(v.non_negative("max-prefix")),
                                c.threads);
  json reps = json::array();
  for (const auto& w : r.representatives) reps.push_back(word_json(model, w));
  o.result = {{"lambda", rat(r.params.lambda())},
              {"epsilon", rat(r.params.epsilon())},
              {"horizon", r.horizon},
              {"max_prefix_len", r.max_prefix_len},
              {"class_count_by_length", r.class_count_by_length},
              {"classes", r.representatives.size()},
              {"representatives", reps}};
  if (v.has("csv")) {
    std::ostringstream csv;
    csv << "length,classes\n";
    for (std::size_t l = 0; l < r.class_count_by_length.size(); ++l) {
      csv << l << "," << r.class_count_by_length[l] << "\n";
    }
    add_side(o, v, "csv", csv.str());
  }
  return o;
}

json language_json(const GroupModel& m, const LanguageReport& r) {
  return {{"max_len", r.max_len},
          {"words_checked", r.words_checked},
          {"mismatches", r.mismatches},
          {"first_mismatch",
           r.first_mismatch ? word_json(m, *r.first_mismatch) : json(nullptr)},
          {"empty_word_included", r.empty_word_included}};
}

Outcome run_cone_dfa(const ExperimentConfig&, const Values& v) {
  Outcome o;
  const auto model = make_model(v.str("model"));
  const auto r = cone_type_automaton(model, v.integer("k"), v.integer("radius"));
  const auto dead = r.dfa.dead_states();
  const auto live = r.dfa.states - static_cast<std::size_t>(
                                       std::count(dead.begin(), dead.end(), true));
  o.result = {{"states", r.dfa.states},
              {"live_states", live},
              {"stabilized", r.stabilized},
              {"cone_types", r.cone_types},
              {"dfa", json::parse(dfa_to_json_text(r.dfa))}};
  if (v.has("validate-len")) {
    const auto lr = validate_language(r.dfa, model, std::nullopt,
                                      static_cast<std::size_t>(v.non_negative("validate-len")));
    o.result["validation"] = language_json(model, lr);
    o.verified = lr.mismatches == 0;
    o.transcript.push_back((lr.mismatches == 0 ? "ok   " : "FAIL ") +
                           std::to_string(lr.mismatches) + " mismatches up to length " +
                           std::to_string(lr.max_len));
  }
  add_side(o, v, "dfa-out", dfa_to_json_text(r.dfa));
  add_side(o, v, "dot", dfa_to_dot(r.dfa));
  return o;
}

Outcome run_validate_dfa(const ExperimentConfig&, const Values& v) {
  Outcome o;
  const auto model = make_model(v.str("model"));
  const auto dfa = dfa_from_json_text(read_file(v.str("dfa")));
  WordPredicate predicate;
  if (v.has("lambda") || v.has("epsilon")) predicate = v.params();
  const auto r = validate_language(dfa, model, predicate,
                                   static_cast<std::size_t>(v.non_negative("max-len")));
  o.result = language_json(model, r);
  o.result["predicate"] =
      predicate ? json{{"lambda", rat(predicate->lambda())},
                       {"epsilon", rat(predicate->epsilon())}}
                : json("geodesic");
  o.verified = r.mismatches == 0;
  o.transcript.push_back((r.mismatches == 0 ? "ok   " : "FAIL ") +
                         std::to_string(r.mismatches) + " mismatches in " +
                         std::to_string(r.words_checked) + " words");
  return o;
}

Outcome run_geodetic(const ExperimentConfig& c, const Values& v) {
  Outcome o;
  const auto model = make_model(v.str("model"));
  const auto ball = ball_for(c, model, v.non_negative("radius"));
  const auto r = is_geodetic(*ball);
  json ce = nullptr;
  if (r.counterexample) {
    ce = {{"from", word_json(model, model.canonical_word(ball->vertex(r.counterexample->u)))},
          {"to", word_json(model, model.canonical_word(ball->vertex(r.counterexample->v)))},
          {"first", word_json(model, r.counterexample->first)},
          {"second", word_json(model, r.counterexample->second)}};
  }
  o.result = {{"radius", ball->radius()},
              {"geodetic", r.geodetic},
              {"counterexample", ce},
              {"certified_pairs", r.certified_pairs},
              {"skipped_pairs", r.skipped_pairs}};
  return o;
}

Outcome run_iec(const ExperimentConfig& c, const Values& v) {
  Outcome o;
  const auto model = make_model(v.str("model"));
  const auto radius = v.non_negative("radius");
  const auto ball = ball_for(c, model, radius);
  const auto records = find_iecs(ball, v.integer("max-n", radius));
  json list = json::array();
  for (const auto& r : records) {
    list.push_back({{"loop", word_json(model, r.loop)}, {"n", r.n}});
  }
  o.result = {{"radius", radius}, {"count", records.size()}, {"iecs", list}};
  return o;
}

SamplingPolicy policy_of(const ExperimentConfig& c, const Values& v) {
  const auto n = v.non_negative("sample", 0);
  return n == 0 ? SamplingPolicy::all()
                : SamplingPolicy::sampled(c.seed, static_cast<std::size_t>(n));
}

Outcome run_bigon(const ExperimentConfig& c, const Values& v) {
  Outcome o;
  const auto model = make_model(v.str("model"));
  const auto policy = policy_of(c, v);
  const auto r = bigon_width(model, v.non_negative("radius"), policy,
                             static_cast<std::uint64_t>(
                                 v.non_negative("max-work", kDefaultBigonWork)));
  o.exhaustive = policy.exhaustive;
  o.result = {{"radius", r.radius},
              {"policy", policy.describe()},
              {"width_by_distance", r.width_by_distance},
              {"max_width", r.max_width},
              {"endpoint", word_json(model, r.endpoint)},
              {"first", word_json(model, r.first)},
              {"second", word_json(model, r.second)},
              {"endpoints_examined", r.endpoints_examined}};
  add_side(o, v, "csv", bigon_csv(r));
  return o;
}

Outcome run_delta(const ExperimentConfig& c, const Values& v) {
  Outcome o;
  const auto model = make_model(v.str("model"));
  const auto hi = v.non_negative("radius");
  const auto lo = v.non_negative("min-radius", hi);
  if (lo > hi) throw ConfigError("--min-radius exceeds --radius");
  const auto policy = policy_of(c, v);
  std::vector<DeltaReport> reports;
  json rows = json::array();
  for (auto R = lo; R <= hi; ++R) {
    reports.push_back(delta_estimate(ball_for(c, model, R), policy, c.threads));
    const auto& d = reports.back();
    json ext = json::array();
    for (const auto& w : d.extremal) ext.push_back(word_json(model, w));
    rows.push_back({{"radius", d.radius},
                    {"delta_hat", rat(d.delta_hat)},
                    {"triangles", d.triangles},
                    {"skipped_uncertified", d.skipped_uncertified},
                    {"extremal", ext},
                    {"canonical_sides_only", d.canonical_sides_only}});
  }
  o.exhaustive = policy.exhaustive;
  o.result = {{"policy", policy.describe()}, {"radii", rows}};
  add_side(o, v, "csv", delta_csv(reports));
  return o;
}

Outcome run_l2g(const ExperimentConfig&, const Values& v) {
  Outcome o;
  const auto model = make_model(v.str("model"));
  const auto r = local_to_global_probe(
      model, v.integer("L"), v.params(),
      static_cast<std::size_t>(v.non_negative("max-len")),
      static_cast<std::uint64_t>(v.non_negative("budget", 100'000'000)),
      static_cast<std::size_t>(v.non_negative("keep-loops", 64)));
  json loops = json::array();
  for (const auto& w : r.loops) loops.push_back(word_json(model, w));
  o.result = {{"L", r.L},
              {"lambda", rat(r.params.lambda())},
              {"epsilon", rat(r.params.epsilon())},
              {"max_len", r.max_len},
              {"words", r.words},
              {"globally_ok", r.globally_ok},
              {"first_failure",
               r.first_failure ? word_json(model, *r.first_failure) : json(nullptr)},
              {"worst_lambda", rat(r.worst_lambda)},
              {"loop_count", r.loop_count},
              {"loops", loops},
              {"nodes", r.nodes}};
  o.exhaustive = r.exhaustive;
  o.truncated = !r.exhaustive;
  return o;
}

Outcome run_verify(const ExperimentConfig&, const Values& v) { return verify_input(v); }

using Runner = std::function<Outcome(const ExperimentConfig&, const Values&)>;

const std::map<std::string, Runner>& runners() {
  static const std::map<std::string, Runner> table = {
      {"ball", run_ball},           {"qg-check", run_qg_check},
      {"star-search", run_star_search}, {"star-verify", run_star_verify},
      {"trim", run_trim},           {"tower", run_tower},
      {"nerode", run_nerode},       {"cone-dfa", run_cone_dfa},
      {"validate-dfa", run_validate_dfa}, {"geodetic", run_geodetic},
      {"iec", run_iec},             {"bigon", run_bigon},
      {"delta", run_delta},         {"l2g", run_l2g},
      {"verify", run_verify},
  };
  return table;
}

json config_echo(const ExperimentConfig& c) {
  json values = json::object();
  for (const auto& [k, val] : c.values) {
    if (!kPathKeys.count(k)) values[k] = val;
  }
  return {{"kind", c.kind}, {"seed", c.seed}, {"values", values}};
}

}  // namespace

const std::vector<std::string>& experiment_kinds() {
  static const std::vector<std::string> kinds = [] {
    std::vector<std::string> out;
    for (const auto& s : kind_specs()) out.emplace_back(s.kind);
    return out;
  }();
  return kinds;
}

Report run_experiment(const ExperimentConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  json doc = {{"format", "hypqg-report"},
              {"schema_version", kReportSchemaVersion},
              {"version", HYPQG_VERSION},
              {"config", config_echo(config)}};
  Report report;
  auto fail = [&](int code, const char* status, const char* type, const std::string& msg) {
    report.exit_code = code;
    doc["status"] = status;
    doc["error"] = {{"type", type}, {"message", msg}};
  };
  try {
    const auto& spec = spec_of(config.kind);
    for (const auto& [key, value] : config.values) {
      const bool known = std::any_of(spec.params.begin(), spec.params.end(),
                                     [&](const Param& p) { return key == p.name; });
      if (!known) throw ConfigError("unknown parameter for " + config.kind + ": " + key);
    }
    const Values values(config);
    Outcome o = runners().at(config.kind)(config, values);
    doc["result"] = std::move(o.result);
    doc["exhaustive"] = o.exhaustive;
    if (o.verified) {
      doc["verification"] = {{"ok", *o.verified}, {"transcript", o.transcript}};
    }
    if (o.verified && !*o.verified) {
      report.exit_code = kExitVerificationFailed;
      doc["status"] = "verification_failed";
    } else if (o.truncated) {
      report.exit_code = kExitBudgetTruncated;
      doc["status"] = "truncated";
    } else {
      doc["status"] = "ok";
      report.side_outputs = std::move(o.side);
    }
  } catch (const ResourceError& e) {
    fail(kExitBudgetTruncated, "truncated", "resource", e.what());
    doc["exhaustive"] = false;
  } catch (const VerificationError& e) {
    fail(kExitVerificationFailed, "verification_failed", "verification", e.what());
  } catch (const InvariantError& e) {
    fail(kExitVerificationFailed, "verification_failed", "invariant", e.what());
  } catch (const ParameterError& e) {
    fail(kExitConfigError, "config_error", "parameter", e.what());
  } catch (const PreconditionError& e) {
    fail(kExitConfigError, "config_error", "precondition", e.what());
  } catch (const AlphabetError& e) {
    fail(kExitConfigError, "config_error", "alphabet", e.what());
  } catch (const NotCertified& e) {
    fail(kExitConfigError, "config_error", "not_certified", e.what());
  } catch (const ConfigError& e) {
    fail(kExitConfigError, "config_error", "config", e.what());
  } catch (const std::exception& e) {
    fail(kExitInternal, "internal_error", "internal", e.what());
  }
  if (config.timing) {
    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
    std::ostringstream s;
    s << std::fixed << std::setprecision(3) << elapsed.count();
    doc["timing"] = {{"wall_seconds", s.str()}};
  }
  report.json = doc.dump(2) + "\n";
  return report;
}

bool write_side_outputs(const Report& report, std::ostream& err) {
  for (const auto& s : report.side_outputs) {
    std::ofstream out(s.path, std::ios::binary);
    if (!out || !(out << s.content)) {
      err << "hypqg: cannot write " << s.path.string() << "\n";
      return false;
    }
  }
  return true;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app("Quasigeodesic language and hyperbolicity experiments", "hypqg");
  app.require_subcommand(1);
  app.set_config("--config", "", "INI/TOML file; subcommand keys go under [kind]");
  app.set_version_flag("--version", std::string(HYPQG_VERSION));
  ExperimentConfig config;
  std::string out_path;
  app.add_option("--threads", config.threads, "worker thread cap (0 = all cores)");
  app.add_option("--seed", config.seed, "seed for sampled experiments");
  app.add_flag("--timing", config.timing, "add wall-clock timing to the report");
  app.add_option("--out", out_path, "report path (default: stdout)");
  std::string cache;
  app.add_option("--cache-dir", cache, "ball cache directory")->envname("HYPQG_CACHE_DIR");

  // One string slot per (kind, parameter).
  std::map<std::string, std::map<std::string, std::string>> slots;
  std::map<std::string, CLI::App*> subs;
  for (const auto& spec : kind_specs()) {
    auto* sub = app.add_subcommand(spec.kind, spec.help);
    subs[spec.kind] = sub;
    auto& mine = slots[spec.kind];
    for (const auto& p : spec.params) {
      sub->add_option(std::string("--") + p.name, mine[p.name], p.help);
    }
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitConfigError;
  }
  for (const auto& [kind, sub] : subs) {
    if (!sub->parsed()) continue;
    config.kind = kind;
    for (const auto& p : spec_of(kind).params) {
      if (sub->get_option(std::string("--") + p.name)->count() > 0) {
        config.values[p.name] = slots[kind][p.name];
      }
    }
  }
  if (!cache.empty()) config.cache_dir = cache;

  const auto report = run_experiment(config);
  if (out_path.empty()) {
    out << report.json;
  } else {
    std::ofstream f(out_path, std::ios::binary);
    if (!f || !(f << report.json)) {
      err << "hypqg: cannot write " << out_path << "\n";
      return kExitInternal;
    }
  }
  if (!write_side_outputs(report, err)) return kExitInternal;
  if (report.exit_code != kExitOk) {
    const auto doc = json::parse(report.json);
    if (doc.contains("error")) {
      err << "hypqg: " << doc["error"]["message"].get<std::string>() << "\n";
    } else {
      err << "hypqg: " << doc["status"].get<std::string>() << "\n";
    }
  }
  return report.exit_code;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv{"hypqg"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace hypqg::cli
