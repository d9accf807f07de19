#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

namespace annote::cli {

enum class OutputFormat { Text, Json };

struct CliConfig {
  std::string kb_path;
  OutputFormat output_format = OutputFormat::Text;
  bool strict = true;
  std::size_t cap = 16;
  bool show_stored_form = false;
};

// Exit statuses.
inline constexpr int kOk = 0;
inline constexpr int kFailure = 1;
inline constexpr int kPartialIngest = 2;
inline constexpr int kUnresolved = 3;
inline constexpr int kNoCandidates = 4;

int cmd_ingest(const CliConfig& config, const std::string& input_path, std::ostream& out, std::ostream& err);
int cmd_query(const CliConfig& config, const std::string& query_text, std::ostream& out, std::ostream& err);
int cmd_find(const CliConfig& config, const std::vector<std::string>& terms, std::ostream& out, std::ostream& err);
int cmd_classify(const CliConfig& config, std::ostream& out, std::ostream& err);
int cmd_explicate(const CliConfig& config, const std::string& object_id, std::ostream& out, std::ostream& err);
int cmd_chain(const CliConfig& config, const std::string& object_id, std::ostream& out, std::ostream& err);
int cmd_export(const CliConfig& config, std::ostream& out, std::ostream& err);
int cmd_stats(const CliConfig& config, std::ostream& out, std::ostream& err);

// Parses `args` (without the program name) and dispatches to a command.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace annote::cli
