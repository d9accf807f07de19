// Acceptance gate: one PASS/FAIL line per criterion, non-zero exit on any
// failure.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "annote/fact_file.hpp"
#include "annote/inference.hpp"
#include "annote/knowledge_base.hpp"
#include "annote/model.hpp"
#include "annote/query.hpp"
#include "cli.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace annote;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

constexpr const char* kClassicQuery =
    R"(("auteur", ["Alain Juillet"]) ET ("mots-clés", ["désinformation", "intelligence stratégique", "décision"]))";

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Records the first failure and keeps counting.
struct Check {
  std::size_t failures = 0;
  std::string first;

  void expect(bool ok, const std::string& what) {
    if (ok) return;
    if (failures++ == 0) first = what;
  }
  Outcome outcome(const std::string& detail) const {
    if (failures == 0) return {true, detail};
    return {false, std::to_string(failures) + " mismatches; first: " + first};
  }
};

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt_seconds(double s) {
  std::ostringstream out;
  out.precision(3);
  out << std::fixed << s << " s";
  return out.str();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::string fixture_path(const std::string& name) { return std::string(ANNOTE_TEST_DATA_DIR) + "/" + name; }

KnowledgeBase load_desk(Check& check) {
  auto result = load_facts(read_file(fixture_path("desk.facts")));
  check.expect(result.diagnostics.empty(), "desk fixture has diagnostics");
  return std::move(result.kb);
}

std::string join(const std::vector<std::string>& ids) {
  std::string out = "{";
  for (std::size_t i = 0; i < ids.size(); ++i) out += (i ? ", " : "") + ids[i];
  return out + "}";
}

struct CliRun {
  int status;
  std::string out;
};

CliRun run_cli(const std::string& kb_path, std::vector<std::string> args) {
  args.insert(args.begin(), {"--kb", kb_path});
  std::ostringstream out, err;
  const int status = cli::run_cli(args, out, err);
  return {status, out.str()};
}

std::vector<std::string> id_lines(const std::string& text) {
  std::vector<std::string> ids;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) {
    if (line.rfind("rewrite: ", 0) != 0 && line.rfind("stored form: ", 0) != 0) ids.push_back(line);
  }
  return ids;
}

// A kb file holding the desk fixture, for end-to-end CLI checks.
class DeskKbFile {
 public:
  DeskKbFile() {
    path_ = (fs::temp_directory_path() / ("annote_acceptance_" + std::to_string(::getpid()) + ".facts")).string();
    fs::remove(path_);
    std::ostringstream out, err;
    status_ = cli::run_cli({"--kb", path_, "ingest", fixture_path("desk.facts")}, out, err);
  }
  ~DeskKbFile() { fs::remove(path_); }
  const std::string& path() const { return path_; }
  int status() const { return status_; }

 private:
  std::string path_;
  int status_ = 0;
};

bool index_identical(const KnowledgeBase& a, const KnowledgeBase& b) {
  if (a.size() != b.size()) return false;
  for (const auto& [id, object] : a.objects()) {
    const auto* other = b.find(id);
    if (other == nullptr || other->target != object.target || other->pairs != object.pairs) return false;
  }
  return a.documents() == b.documents() && a.annotators() == b.annotators() &&
         a.by_attribute() == b.by_attribute() && a.by_term() == b.by_term() && a.by_target() == b.by_target();
}

// 1. Classic two-parameter search on the desk fixture.
Outcome golden_classic_search() {
  Check check;
  const auto start = Clock::now();
  const auto kb = load_desk(check);
  const auto ids = eval(kb, parse_query(kClassicQuery));
  const double elapsed = seconds_since(start);
  const std::vector<std::string> expected = {"note_008", "note_211", "note_702"};
  check.expect(ids == expected, "eval returned " + join(ids));
  check.expect(ids == test::naive_eval(kb, parse_query(kClassicQuery)), "naive scan disagrees");
  check.expect(elapsed < 1.0, "took " + fmt_seconds(elapsed));

  DeskKbFile file;
  check.expect(file.status() == 0, "ingest of desk fixture failed");
  const auto r = run_cli(file.path(), {"query", kClassicQuery});
  check.expect(r.status == 0 && id_lines(r.out) == expected, "cli query printed " + r.out);
  return check.outcome("result " + join(ids) + " in " + fmt_seconds(elapsed));
}

// 2. Constrained search: rewrite shape and result.
Outcome golden_constrained_search() {
  Check check;
  const auto start = Clock::now();
  const auto kb = load_desk(check);
  const std::vector<Term> terms = {normalize_term("désinformation"), normalize_term("protection du patrimoine"),
                                   normalize_term("pertinent")};
  const auto report = rewrite_constrained(kb, terms);
  const auto ids = search_constrained(kb, terms);
  const double elapsed = seconds_since(start);

  const auto& e = report.rewritten;
  const bool conjunction = e.kind() == QueryExpr::Kind::And && e.children().size() == 3;
  check.expect(conjunction, "rewrite is not a 3-way conjunction: " + print_query(e));
  if (conjunction) {
    for (std::size_t i = 0; i < 3; ++i) {
      std::function<bool(const QueryExpr&)> all_on_term = [&](const QueryExpr& x) {
        if (x.is_leaf()) return x.criterion().values == std::vector<Term>{terms[i]};
        return std::all_of(x.children().begin(), x.children().end(), all_on_term);
      };
      check.expect(all_on_term(e.children()[i]), "conjunct " + std::to_string(i) + " is not about its term");
    }
    const auto& pertinent = e.children()[2];
    std::set<std::string> attributes;
    if (pertinent.kind() == QueryExpr::Kind::Or) {
      for (const auto& leaf : pertinent.children()) {
        if (leaf.is_leaf()) attributes.insert(leaf.criterion().attribute->text());
      }
    }
    check.expect(attributes.count("souligner") && attributes.count("ordonner"),
                 "pertinent does not expand to souligner OU ordonner");
  }
  check.expect(ids == std::vector<std::string>{"note_211"}, "search returned " + join(ids));
  check.expect(elapsed < 1.0, "took " + fmt_seconds(elapsed));

  DeskKbFile file;
  const auto r = run_cli(file.path(), {"find", "désinformation", "protection du patrimoine", "pertinent"});
  check.expect(r.status == 0 && id_lines(r.out) == std::vector<std::string>{"note_211"},
               "cli find printed " + r.out);
  return check.outcome(print_query(e) + " -> " + join(ids) + " in " + fmt_seconds(elapsed));
}

// 3. Attribute and value inference on the fixture's ambiguous term and scale.
Outcome golden_inference() {
  Check check;
  const auto kb = load_desk(check);
  const auto attributes = infer_attributes(kb, {normalize_term("pertinent")});
  std::set<std::string> names;
  for (const auto& c : attributes) names.insert(c.attribute.text());
  check.expect(names.count("souligner") && names.count("ordonner"), "pertinent candidates lack a reading");

  const std::vector<Value> scale = {weighted("pauvre", 0), weighted("faible", 1), weighted("moyen", 2),
                                    weighted("riche", 3), weighted("pertinent", 4)};
  const auto values = infer_values(kb, normalize_attribute("ordonner"));
  check.expect(!values.empty() && values.front().values == scale, "ordonner scale differs");
  check.expect(values.size() == 1, "ordonner has extra value lists");
  return check.outcome("pertinent -> {ordonner, souligner}; ordonner -> 5-step scale ending (pertinent, 4)");
}

// 4. Indexed evaluation and inference against brute-force scans.
Outcome oracle_equivalence() {
  Check check;
  const auto start = Clock::now();
  const test::Vocabulary vocab(50, 500);
  constexpr std::size_t kKbs = 100;
  constexpr std::size_t kQueriesPerKb = 12;
  std::mt19937_64 rng(2024);
  std::size_t queries = 0, infer_checks = 0;
  for (std::size_t seed = 0; seed < kKbs; ++seed) {
    const auto kb = test::random_kb(seed, vocab);
    check.expect(kb.size() == 1000, "kb size " + std::to_string(kb.size()));
    for (std::size_t q = 0; q < kQueriesPerKb; ++q, ++queries) {
      const auto expr = test::random_query(rng, vocab, 5, &kb);
      check.expect(eval(kb, expr) == test::naive_eval(kb, expr), "eval mismatch on " + print_query(expr));
    }
    for (std::size_t k = 0; k < 10; ++k, ++infer_checks) {
      std::vector<Term> terms = {test::pick(rng, vocab.terms())};
      if (test::chance(rng, 0.5)) terms.push_back(test::pick(rng, vocab.terms()));
      check.expect(infer_attributes(kb, terms) == test::naive_infer_attributes(kb, terms),
                   "infer_attributes mismatch for " + terms.front().text());
    }
    for (const auto& attribute : vocab.attributes()) {
      ++infer_checks;
      check.expect(infer_values(kb, attribute) == test::naive_infer_values(kb, attribute),
                   "infer_values mismatch for " + attribute.text());
    }
  }
  const double elapsed = seconds_since(start);
  check.expect(elapsed < 60.0, "took " + fmt_seconds(elapsed));
  return check.outcome(std::to_string(kKbs) + " kbs, " + std::to_string(queries) + " queries, " +
                       std::to_string(infer_checks) + " inference checks, 0 mismatches in " + fmt_seconds(elapsed));
}

// 5. classify against the definition on generated pair lists.
Outcome classification_totality() {
  Check check;
  std::mt19937_64 rng(55);
  constexpr std::size_t kCases = 20000;
  std::size_t seen[3] = {0, 0, 0};
  for (std::size_t i = 0; i < kCases; ++i) {
    std::vector<AVPair> pairs(test::uniform(rng, 0, 6));
    bool all_both = true, any_neither = false;
    for (auto& pair : pairs) {
      const bool has_attribute = test::chance(rng, 0.75);
      const bool has_values = test::chance(rng, 0.75);
      if (has_attribute) pair.attribute = normalize_attribute("a" + std::to_string(test::uniform(rng, 0, 3)));
      if (has_values) {
        for (std::size_t v = test::uniform(rng, 1, 3); v > 0; --v) pair.values.push_back(plain("t" + std::to_string(v)));
      }
      all_both = all_both && has_attribute && has_values;
      any_neither = any_neither || (!has_attribute && !has_values);
    }
    const auto expected = (pairs.empty() || any_neither) ? ExplicitnessState::Invalid
                          : all_both                     ? ExplicitnessState::Explicit
                                                         : ExplicitnessState::Implicit;
    const auto got = classify(pairs);
    check.expect(got == expected, "case " + std::to_string(i));
    switch (got) {
      case ExplicitnessState::Explicit: ++seen[0]; break;
      case ExplicitnessState::Implicit: ++seen[1]; break;
      case ExplicitnessState::Invalid: ++seen[2]; break;
      default: check.expect(false, "fourth outcome"); break;
    }
  }
  return check.outcome(std::to_string(kCases) + " cases (" + std::to_string(seen[0]) + " explicit, " +
                       std::to_string(seen[1]) + " implicit, " + std::to_string(seen[2]) + " invalid)");
}

QueryExpr awkward_query(std::mt19937_64& rng, std::size_t depth) {
  if (depth <= 1 || test::chance(rng, 0.35)) {
    Criterion c;
    if (!test::chance(rng, 0.2)) c.attribute = normalize_attribute(test::awkward_text(rng));
    for (std::size_t n = test::uniform(rng, 1, 3); n > 0; --n) c.values.push_back(normalize_term(test::awkward_text(rng)));
    return QueryExpr::leaf(std::move(c));
  }
  if (test::chance(rng, 0.25)) return QueryExpr::negate(awkward_query(rng, depth - 1));
  std::vector<QueryExpr> children;
  for (std::size_t n = test::uniform(rng, 2, 3); n > 0; --n) children.push_back(awkward_query(rng, depth - 1));
  return test::chance(rng, 0.5) ? QueryExpr::all_of(std::move(children)) : QueryExpr::any_of(std::move(children));
}

// 6. Query print/parse and fact-file save/load round-trips.
Outcome round_trips() {
  Check check;
  std::mt19937_64 rng(66);
  const test::Vocabulary vocab(50, 500);
  constexpr std::size_t kAsts = 10000;
  for (std::size_t i = 0; i < kAsts; ++i) {
    const auto e = i % 2 == 0 ? test::random_query(rng, vocab, 5, nullptr, true) : awkward_query(rng, 5);
    const auto text = print_query(e);
    check.expect(parse_query(text) == e, "query round-trip: " + text);
  }
  constexpr std::size_t kKbs = 100;
  for (std::size_t seed = 0; seed < kKbs; ++seed) {
    test::KbShape shape;
    shape.objects = 500;
    const auto kb = test::random_kb(1000 + seed, vocab, shape);
    const auto once = save_facts(kb);
    const auto reloaded = load_facts(once);
    check.expect(reloaded.diagnostics.empty(), "reload diagnostics for seed " + std::to_string(seed));
    check.expect(index_identical(kb, reloaded.kb), "kb round-trip differs for seed " + std::to_string(seed));
    check.expect(save_facts(reloaded.kb) == once, "save is not a fixpoint for seed " + std::to_string(seed));
  }
  Check desk_check;
  const auto desk = load_desk(desk_check);
  const auto desk_text = save_facts(desk);
  check.expect(desk_check.failures == 0, "desk fixture load");
  check.expect(save_facts(load_facts(desk_text).kb) == desk_text, "desk save is not a fixpoint");
  return check.outcome(std::to_string(kAsts) + " ASTs, " + std::to_string(kKbs) + " kbs, save fixpoint holds");
}

AnnotationObject link(const std::string& id, const std::string& target, const AVPair& pair) {
  AnnotationObject o;
  o.id = id;
  o.target = target;
  o.pairs = {pair};
  o.meta = fact_file_meta();
  return o;
}

// 7. Cycle rejection and chain tracing.
Outcome chain_safety() {
  Check check;
  std::mt19937_64 rng(77);
  const auto pair = av_pair("lien", {"suite"});

  std::size_t cycles = 0;
  for (std::size_t c = 0; c < 1000; ++c, ++cycles) {
    KnowledgeBase kb;
    const std::size_t length = test::uniform(rng, 1, 50);
    std::vector<std::size_t> order(length);
    for (std::size_t i = 0; i < length; ++i) order[i] = i;
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t k = 0; k < length; ++k) {
      const auto i = order[k];
      const auto obj = link("c" + std::to_string(i), "c" + std::to_string((i + 1) % length), pair);
      try {
        kb.insert(obj);
        check.expect(k + 1 < length, "cycle of length " + std::to_string(length) + " accepted");
      } catch (const Error& e) {
        check.expect(k + 1 == length && e.code() == ErrorCode::CyclicTarget,
                     "unexpected rejection in cycle of length " + std::to_string(length));
      }
    }
    check.expect(kb.size() == length - 1, "kb kept a rejected insert");
  }

  constexpr std::size_t kChains = 10000;
  constexpr std::size_t kChainsPerKb = 100;
  for (std::size_t batch = 0; batch < kChains / kChainsPerKb; ++batch) {
    KnowledgeBase kb;
    struct Chain {
      std::string head, base;
      std::size_t depth;
    };
    std::vector<Chain> chains;
    std::vector<AnnotationObject> pending;
    for (std::size_t c = 0; c < kChainsPerKb; ++c) {
      const std::string prefix = "b" + std::to_string(batch) + "_c" + std::to_string(c) + "_";
      const std::size_t depth = test::uniform(rng, 1, 50);
      const std::string base = "doc_" + std::to_string(test::uniform(rng, 0, 20));
      std::string target = base;
      for (std::size_t d = 0; d < depth; ++d) {
        const auto id = prefix + std::to_string(d);
        pending.push_back(link(id, target, pair));
        target = id;
      }
      chains.push_back({target, base, depth});
    }
    // Random insertion order exercises dangling targets defined later.
    std::shuffle(pending.begin(), pending.end(), rng);
    for (auto& object : pending) kb.insert(std::move(object));
    for (const auto& chain : chains) {
      const auto trace = trace_chain(kb, chain.head);
      check.expect(trace.size() == chain.depth + 1 && trace.front() == chain.head && trace.back() == chain.base,
                   "chain from " + chain.head);
    }
  }
  return check.outcome(std::to_string(cycles) + " cycles rejected at closure, " + std::to_string(kChains) +
                       " chains of depth <= 50 traced");
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"golden classic search", golden_classic_search},
      {"golden constrained search", golden_constrained_search},
      {"golden inference", golden_inference},
      {"oracle equivalence", oracle_equivalence},
      {"classification totality", classification_totality},
      {"round-trips", round_trips},
      {"chain safety", chain_safety},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome outcome;
    try {
      outcome = criteria[i].second();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    std::cout << (outcome.pass ? "PASS" : "FAIL") << " " << i + 1 << " " << criteria[i].first << ": "
              << outcome.detail << std::endl;
    if (!outcome.pass) ++failed;
  }
  return failed == 0 ? 0 : 1;
}
