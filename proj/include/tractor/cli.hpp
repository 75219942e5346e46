#pragma once

// Batch front end: grading tables, classification sweeps and Courant
// verification runs, reported as JSON or text.

#include "tractor/coisotropy.hpp"
#include "tractor/courant.hpp"
#include "tractor/scalar.hpp"

#include <json.hpp>

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace tractor::cli {

inline constexpr int kExitPass = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kSchemaVersion = 1;

using Json = nlohmann::ordered_json;

enum class Command { grade, classify, verify };
enum class Format { json, text };

struct RunConfig {
  Command command = Command::grade;
  std::optional<Family> family;
  std::optional<int> rank;
  std::optional<SigmaSet> sigma;
  std::string config_path;  // verify only
  Format format = Format::json;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> samples;
  std::optional<int> max_poly_degree;
  std::size_t sweep_cap = kDefaultSweepCap;
  bool timings = false;  // adds wall-clock timings, which breaks byte-identical output
};

/// Invalid command line or configuration; maps to exit code 2.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Configuration field with the wrong shape; `path` names the field, e.g. "connection[1].form".
class ConfigError : public UsageError {
 public:
  ConfigError(const std::string& path, const std::string& what) : UsageError(path + ": " + what), path_(path) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

struct ConnectionTerm {
  int value_index = 0;
  std::string form;
};

/// Parsed verify configuration, before any literal is interpreted.
struct ContextConfig {
  Family family = Family::A;
  int rank = 1;
  SigmaSet sigma;
  std::vector<ConnectionTerm> connection;
  std::string h_form = "0";
  std::uint64_t seed = 1;
  std::size_t samples = 50;
  int max_poly_degree = 2;
};

struct CommandResult {
  Json document;
  int exit_code = kExitPass;
};

/// Parses "1,3" into {1,3}.
SigmaSet parse_sigma_list(const std::string& text);

/// Throws ParseError (JSON syntax, with line and column) or ConfigError.
ContextConfig parse_context_config(const std::string& text);

/// Builds the context described by a configuration; literal errors carry the field path.
CourantContext<Rational> build_context(const ContextConfig& cfg);

CommandResult cmd_grade(const RunConfig& config);
CommandResult cmd_classify(const RunConfig& config);
CommandResult cmd_verify(const RunConfig& config);
CommandResult cmd_verify(const RunConfig& config, const ContextConfig& context);

std::string render_text(const Json& document);

/// Entry point used by the executable.
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace tractor::cli
