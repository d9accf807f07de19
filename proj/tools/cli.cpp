#include "cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "annote/fact_file.hpp"
#include "annote/inference.hpp"
#include "annote/knowledge_base.hpp"
#include "annote/query.hpp"

namespace annote::cli {
namespace {

using nlohmann::json;

std::optional<std::string> read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) return std::nullopt;
  return buffer.str();
}

// Writes through a sibling temp file so a failed write leaves the old kb.
bool write_text(const std::string& path, const std::string& text) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path temp = target;
  temp += ".tmp";
  {
    std::ofstream out(temp, std::ios::binary | std::ios::trunc);
    if (!out) return false;
    out << text;
    if (!out.flush()) return false;
  }
  std::error_code ec;
  fs::rename(temp, target, ec);
  if (ec) {
    fs::remove(temp, ec);
    return false;
  }
  return true;
}

// A kb file is written by this tool, so any rejected line means it was
// damaged or hand-edited badly; refuse to work on a partial view of it.
std::optional<KnowledgeBase> load_kb(const CliConfig& config, std::ostream& err, bool allow_missing = false) {
  if (config.kb_path.empty()) {
    err << "error: --kb <path> is required\n";
    return std::nullopt;
  }
  if (allow_missing && !std::filesystem::exists(config.kb_path)) return KnowledgeBase{};
  const auto text = read_text(config.kb_path);
  if (!text) {
    err << "error: cannot read kb file " << config.kb_path << "\n";
    return std::nullopt;
  }
  auto result = load_facts(*text);
  if (!result.diagnostics.empty()) {
    for (const auto& d : result.diagnostics) err << config.kb_path << ": " << to_string(d) << "\n";
    err << "error: kb file " << config.kb_path << " is not a valid fact file\n";
    return std::nullopt;
  }
  return std::move(result.kb);
}

std::string quote(std::string_view text) {
  std::string out = "\"";
  for (const char c : text) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::string format_value(const Value& value) {
  if (!value.rank) return quote(value.term.text());
  return "(" + quote(value.term.text()) + ", " + std::to_string(*value.rank) + ")";
}

std::string format_pair(const AVPair& pair) {
  std::string out = "(";
  out += pair.attribute ? quote(pair.attribute->text()) : std::string("_");
  out += ", [";
  for (std::size_t i = 0; i < pair.values.size(); ++i) {
    if (i > 0) out += ", ";
    out += format_value(pair.values[i]);
  }
  return out + "])";
}

json value_json(const Value& value) {
  json j = {{"term", value.term.text()}};
  j["rank"] = value.rank ? json(*value.rank) : json(nullptr);
  return j;
}

json pair_json(const AVPair& pair) {
  json values = json::array();
  for (const auto& v : pair.values) values.push_back(value_json(v));
  return {{"attribute", pair.attribute ? json(pair.attribute->text()) : json(nullptr)}, {"values", values}};
}

json object_json(const AnnotationObject& object) {
  json pairs = json::array();
  for (const auto& p : object.pairs) pairs.push_back(pair_json(p));
  json j = {{"id", object.id},
            {"target", object.target},
            {"state", to_string(classify(object))},
            {"pairs", pairs}};
  if (object.provenance) j["support"] = object.provenance->support;
  return j;
}

void print_json(std::ostream& out, const json& document) { out << document.dump(2) << "\n"; }

void print_ids(std::ostream& out, const std::vector<std::string>& ids) {
  for (const auto& id : ids) out << id << "\n";
}

// Number of code points in the first `bytes` bytes, for caret alignment.
std::size_t display_column(std::string_view text, std::size_t bytes) {
  bytes = std::min(bytes, text.size());
  return static_cast<std::size_t>(std::count_if(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(bytes),
                                                [](char c) { return (static_cast<unsigned char>(c) & 0xC0) != 0x80; }));
}

void report_syntax_error(std::string_view query, const SyntaxError& e, std::ostream& err) {
  err << "error: " << e.what() << "\n";
  err << "  " << query << "\n";
  err << "  " << std::string(display_column(query, e.position()), ' ') << "^\n";
}

}  // namespace

int cmd_ingest(const CliConfig& config, const std::string& input_path, std::ostream& out, std::ostream& err) {
  auto kb = load_kb(config, err, true);
  if (!kb) return kFailure;
  const auto text = read_text(input_path);
  if (!text) {
    err << "error: cannot read " << input_path << "\n";
    return kFailure;
  }
  auto result = load_facts(*text, std::move(*kb));
  if (!write_text(config.kb_path, save_facts(result.kb))) {
    err << "error: cannot write kb file " << config.kb_path << "\n";
    return kFailure;
  }
  if (config.output_format == OutputFormat::Json) {
    json diagnostics = json::array();
    for (const auto& d : result.diagnostics) {
      diagnostics.push_back(
          {{"line", d.line}, {"column", d.column}, {"code", to_string(d.code)}, {"reason", d.reason}});
    }
    print_json(out, {{"input", input_path},
                     {"objects_loaded", result.objects_loaded},
                     {"lines_rejected", result.lines_rejected},
                     {"diagnostics", diagnostics}});
  } else {
    for (const auto& d : result.diagnostics) err << input_path << ": " << to_string(d) << "\n";
    out << result.objects_loaded << " objects loaded, " << result.lines_rejected << " rejected\n";
  }
  return result.lines_rejected == 0 ? kOk : kPartialIngest;
}

int cmd_query(const CliConfig& config, const std::string& query_text, std::ostream& out, std::ostream& err) {
  std::optional<QueryExpr> query;
  try {
    query = parse_query(query_text);
  } catch (const SyntaxError& e) {
    report_syntax_error(query_text, e, err);
    return kFailure;
  }
  const auto kb = load_kb(config, err);
  if (!kb) return kFailure;
  std::vector<std::string> ids;
  try {
    ids = eval(*kb, *query);
  } catch (const Error& e) {
    // Constrained leaves belong to `find`.
    err << "error: " << e.what() << "\n";
    return kFailure;
  }
  if (config.output_format == OutputFormat::Json) {
    print_json(out, {{"query", print_query(*query)}, {"results", ids}});
  } else {
    print_ids(out, ids);
  }
  return kOk;
}

int cmd_find(const CliConfig& config, const std::vector<std::string>& raw_terms, std::ostream& out,
             std::ostream& err) {
  if (raw_terms.empty()) {
    err << "error: find needs at least one term\n";
    return kFailure;
  }
  std::vector<Term> terms;
  try {
    for (const auto& raw : raw_terms) terms.push_back(normalize_term(raw));
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kFailure;
  }
  const auto kb = load_kb(config, err);
  if (!kb) return kFailure;

  std::optional<RewriteReport> report;
  std::vector<std::string> unresolved;
  try {
    report = rewrite_constrained(*kb, terms);
    for (const auto& t : report->unresolved_terms) unresolved.push_back(t.text());
  } catch (const Error& e) {
    if (e.code() != ErrorCode::AllUnresolved) throw;
    std::set<std::string> seen;
    for (const auto& t : terms) {
      if (seen.insert(t.text()).second) unresolved.push_back(t.text());
    }
  }

  const bool failed = !unresolved.empty() && (config.strict || !report);
  std::vector<std::string> ids;
  if (report && !failed) {
    ids = search_constrained(*kb, terms, config.strict ? UnresolvedPolicy::Strict : UnresolvedPolicy::Lenient);
  }
  const int status = failed && config.strict ? kUnresolved : kOk;

  if (config.output_format == OutputFormat::Json) {
    json document = {{"terms", json::array()}, {"unresolved", unresolved}, {"results", ids}};
    for (const auto& t : terms) document["terms"].push_back(t.text());
    document["rewrite"] = report ? json(print_query(report->rewritten)) : json(nullptr);
    if (config.show_stored_form) {
      document["stored_form"] = report ? json(stored_form(*kb, *report)) : json(nullptr);
    }
    if (report) {
      json candidates = json::object();
      for (const auto& [term, list] : report->per_term_candidates) {
        json entry = json::array();
        for (const auto& c : list) entry.push_back({{"attribute", c.attribute.text()}, {"support", c.support}});
        candidates[term.text()] = entry;
      }
      document["candidates"] = candidates;
    }
    print_json(out, document);
    return status;
  }

  if (report) {
    out << "rewrite: " << print_query(report->rewritten) << "\n";
    if (config.show_stored_form) out << "stored form: " << stored_form(*kb, *report) << "\n";
  }
  if (!unresolved.empty()) {
    auto& stream = status == kOk ? out : err;
    stream << "unresolved:";
    for (std::size_t i = 0; i < unresolved.size(); ++i) stream << (i ? ", " : " ") << unresolved[i];
    stream << "\n";
  }
  print_ids(out, ids);
  return status;
}

int cmd_classify(const CliConfig& config, std::ostream& out, std::ostream& err) {
  const auto kb = load_kb(config, err);
  if (!kb) return kFailure;
  std::map<ExplicitnessState, std::size_t> counts;
  json listing = json::array();
  for (const auto& [id, object] : kb->objects()) {
    const auto state = classify(object);
    ++counts[state];
    if (config.output_format == OutputFormat::Json) {
      listing.push_back({{"id", id}, {"state", to_string(state)}});
    } else {
      out << id << " " << to_string(state) << "\n";
    }
  }
  const auto explicit_count = counts[ExplicitnessState::Explicit];
  const auto implicit_count = counts[ExplicitnessState::Implicit];
  if (config.output_format == OutputFormat::Json) {
    print_json(out, {{"objects", listing},
                     {"total", kb->size()},
                     {"explicit", explicit_count},
                     {"implicit", implicit_count}});
  } else {
    out << kb->size() << " objects: " << explicit_count << " explicit, " << implicit_count << " implicit\n";
  }
  return kOk;
}

int cmd_explicate(const CliConfig& config, const std::string& object_id, std::ostream& out, std::ostream& err) {
  const auto kb = load_kb(config, err);
  if (!kb) return kFailure;
  const auto* object = kb->find(object_id);
  if (!object) {
    err << "error: unknown object id " << object_id << "\n";
    return kFailure;
  }
  const bool json_mode = config.output_format == OutputFormat::Json;
  if (classify(*object) == ExplicitnessState::Explicit) {
    if (json_mode) {
      print_json(out, {{"id", object_id}, {"state", "Explicit"}, {"candidates", json::array()}});
    } else {
      out << object_id << " is already explicit\n";
    }
    return kOk;
  }
  std::vector<AnnotationObject> candidates;
  try {
    candidates = explicate(*kb, *object, config.cap);
  } catch (const NoCandidatesError& e) {
    err << "error: no candidates for pair " << e.pair_index() + 1 << " " << format_pair(object->pairs[e.pair_index()])
        << " of " << object_id << "\n";
    return kNoCandidates;
  }
  if (json_mode) {
    json list = json::array();
    for (const auto& c : candidates) list.push_back(object_json(c));
    print_json(out, {{"id", object_id}, {"state", "Implicit"}, {"candidates", list}});
    return kOk;
  }
  for (std::size_t k = 0; k < candidates.size(); ++k) {
    const auto& c = candidates[k];
    out << k + 1 << ". " << c.id << " support:";
    for (const auto& s : c.provenance->support) out << " " << s;
    out << "\n";
    for (const auto& p : c.pairs) out << "   " << format_pair(p) << "\n";
  }
  return kOk;
}

int cmd_chain(const CliConfig& config, const std::string& object_id, std::ostream& out, std::ostream& err) {
  const auto kb = load_kb(config, err);
  if (!kb) return kFailure;
  std::vector<std::string> chain;
  try {
    chain = trace_chain(*kb, object_id);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kFailure;
  }
  if (config.output_format == OutputFormat::Json) {
    print_json(out, {{"id", object_id}, {"chain", chain}});
  } else {
    print_ids(out, chain);
  }
  return kOk;
}

int cmd_export(const CliConfig& config, std::ostream& out, std::ostream& err) {
  const auto kb = load_kb(config, err);
  if (!kb) return kFailure;
  if (config.output_format == OutputFormat::Text) {
    out << save_facts(*kb);
    return kOk;
  }
  json objects = json::array();
  for (const auto& [_, object] : kb->objects()) objects.push_back(object_json(object));
  json documents = json::array();
  for (const auto& [id, record] : kb->documents()) {
    json d = {{"id", id}, {"tier", to_string(record.tier)}};
    if (record.content_ref) d["content_ref"] = *record.content_ref;
    documents.push_back(d);
  }
  json annotators = json::array();
  for (const auto& [id, profile] : kb->annotators()) {
    annotators.push_back({{"id", id}, {"name", profile.name}, {"role", to_string(profile.role)}});
  }
  print_json(out, {{"objects", objects}, {"documents", documents}, {"annotators", annotators}});
  return kOk;
}

int cmd_stats(const CliConfig& config, std::ostream& out, std::ostream& err) {
  const auto kb = load_kb(config, err);
  if (!kb) return kFailure;
  std::size_t implicit_count = 0;
  std::size_t pairs = 0;
  for (const auto& [_, object] : kb->objects()) {
    pairs += object.pairs.size();
    if (classify(object) == ExplicitnessState::Implicit) ++implicit_count;
  }
  std::map<DocumentTier, std::size_t> tiers;
  for (const auto& [_, record] : kb->documents()) ++tiers[record.tier];
  const std::vector<std::pair<std::string, std::size_t>> rows = {
      {"objects", kb->size()},
      {"explicit", kb->size() - implicit_count},
      {"implicit", implicit_count},
      {"pairs", pairs},
      {"attributes", kb->by_attribute().size()},
      {"terms", kb->by_term().size()},
      {"documents", kb->documents().size()},
      {"primary", tiers[DocumentTier::Primary]},
      {"secondary", tiers[DocumentTier::Secondary]},
      {"tertiary", tiers[DocumentTier::Tertiary]},
      {"annotators", kb->annotators().size()},
  };
  if (config.output_format == OutputFormat::Json) {
    json document = json::object();
    for (const auto& [name, value] : rows) document[name] = value;
    print_json(out, document);
  } else {
    for (const auto& [name, value] : rows) out << name << ": " << value << "\n";
  }
  return kOk;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Knowledge base of annotation facts", "annote-kb"};
  app.require_subcommand(0, 1);
  app.fallthrough();

  CliConfig config;
  std::string format = "text";
  app.add_option("--kb", config.kb_path, "Fact file holding the knowledge base");
  app.add_option("--format", format, "Output format")->check(CLI::IsMember({"text", "json"}));
  app.add_flag("--strict,!--lenient", config.strict, "Unresolved find terms empty the result (default) or are dropped");
  app.add_option("--cap", config.cap, "Maximum explicate candidates")->check(CLI::PositiveNumber);
  app.add_flag("--show-paper-form", config.show_stored_form, "find: also print the stored-value-list rewrite");

  std::string input_path;
  auto* ingest = app.add_subcommand("ingest", "Merge a fact file into the kb");
  ingest->add_option("file", input_path, "Fact file to read")->required();

  std::string query_text;
  auto* query = app.add_subcommand("query", "Evaluate a boolean query");
  query->add_option("expr", query_text, "Query, e.g. (\"auteur\", [\"Alain Juillet\"])")->required();

  std::vector<std::string> terms;
  auto* find = app.add_subcommand("find", "Search by terms, inferring their attributes");
  find->add_option("terms", terms, "Terms; quote terms containing spaces")->required();

  auto* classify_cmd = app.add_subcommand("classify", "Report each object as explicit or implicit");

  std::string object_id;
  auto* explicate_cmd = app.add_subcommand("explicate", "Propose explicit readings of an implicit object");
  explicate_cmd->add_option("id", object_id, "Object id")->required();

  auto* chain = app.add_subcommand("chain", "Follow targets from an annotation down to a document");
  chain->add_option("id", object_id, "Object or document id")->required();

  auto* export_cmd = app.add_subcommand("export", "Print the kb");
  auto* stats = app.add_subcommand("stats", "Print kb counts");
  auto* help = app.add_subcommand("help", "Show usage");

  const std::string usage = app.help();
  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << usage;
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << "run 'annote-kb help' for usage\n";
    return kFailure;
  }
  config.output_format = format == "json" ? OutputFormat::Json : OutputFormat::Text;

  if (app.get_subcommands().empty() || help->parsed()) {
    out << usage;
    return kOk;
  }
  if (config.kb_path.empty()) {
    err << "error: --kb <path> is required\n";
    return kFailure;
  }
  try {
    if (ingest->parsed()) return cmd_ingest(config, input_path, out, err);
    if (query->parsed()) return cmd_query(config, query_text, out, err);
    if (find->parsed()) return cmd_find(config, terms, out, err);
    if (classify_cmd->parsed()) return cmd_classify(config, out, err);
    if (explicate_cmd->parsed()) return cmd_explicate(config, object_id, out, err);
    if (chain->parsed()) return cmd_chain(config, object_id, out, err);
    if (export_cmd->parsed()) return cmd_export(config, out, err);
    if (stats->parsed()) return cmd_stats(config, out, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kFailure;
  }
  return kOk;
}

}  // namespace annote::cli
