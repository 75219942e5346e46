#include "tractor/cli.hpp"

#include "tractor/literal.hpp"
#include "tractor/verify.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

namespace tractor::cli {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

Json sigma_json(const SigmaSet& sigma) {
  Json out = Json::array();
  for (int s : sigma) out.push_back(s);
  return out;
}

Json check_json(const CheckResult& c) {
  Json out;
  out["name"] = c.name;
  out["passed"] = c.passed;
  out["evaluated"] = c.evaluated;
  if (!c.witness.empty()) out["witness"] = c.witness;
  if (!c.note.empty()) out["note"] = c.note;
  return out;
}

Json report_json(const Report& r) {
  Json out;
  out["name"] = r.title;
  out["passed"] = r.passed();
  if (r.vacuous) out["vacuous"] = true;
  Json checks = Json::array();
  for (const auto& c : r.checks) checks.push_back(check_json(c));
  out["checks"] = std::move(checks);
  return out;
}

Json algebra_json(const LieAlgebra<Rational>& a) {
  Json out;
  out["family"] = std::string(1, family_letter(a.family()));
  out["rank"] = a.rank();
  out["dimension"] = a.dimension();
  return out;
}

Json root_json(const RootVector& r) {
  Json out = Json::array();
  for (int c : r) out.push_back(c);
  return out;
}

Json header(const char* command) {
  Json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["command"] = command;
  return doc;
}

LieAlgebra<Rational> algebra_from(const RunConfig& config) {
  if (!config.family) throw UsageError("--family is required");
  if (!config.rank) throw UsageError("--rank is required");
  return build_algebra<Rational>(*config.family, *config.rank);
}

void check_sigma(const SigmaSet& sigma, int rank, const std::string& where) {
  if (sigma.empty()) throw UsageError(where + ": sigma must be nonempty");
  for (int s : sigma)
    if (s < 1 || s > rank)
      throw UsageError(where + ": simple root index " + std::to_string(s) + " out of range 1.." + std::to_string(rank));
}

// JSON access with field paths in the errors

const Json& require(const Json& obj, const char* key, const std::string& path) {
  if (!obj.is_object()) throw ConfigError(path.empty() ? "<root>" : path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw ConfigError(path.empty() ? key : path + "." + key, "missing field");
  return *it;
}

std::string join(const std::string& path, const char* key) { return path.empty() ? key : path + "." + key; }

long long as_int(const Json& v, const std::string& path) {
  if (!v.is_number_integer()) throw ConfigError(path, "expected an integer");
  return v.get<long long>();
}

std::string as_string(const Json& v, const std::string& path) {
  if (!v.is_string()) throw ConfigError(path, "expected a string");
  return v.get<std::string>();
}

PolyForm<Rational> parse_field_form(const std::string& text, int n, int degree, const std::string& path) {
  try {
    return parse_form<Rational>(text, n, degree);
  } catch (const ParseError& e) {
    throw ConfigError(path, e.what());
  }
}

Json dims_json(const GradedDecomposition<Rational>& gd) {
  Json out = Json::array();
  for (int j = -gd.k; j <= gd.k; ++j) out.push_back(gd.dim(j));
  return out;
}

Json grading_element_json(const LieAlgebra<Rational>& a, const GradedDecomposition<Rational>& gd) {
  Json out;
  Json coords = Json::object();
  for (Eigen::Index i = 0; i < gd.grading_element.size(); ++i)
    if (!is_zero(gd.grading_element(i))) coords[a.basis_label(i)] = to_string(gd.grading_element(i));
  out["coordinates"] = std::move(coords);
  if (a.has_realization()) {
    const auto m = a.realize(gd.grading_element);
    Json diag = Json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) diag.push_back(to_string(m(i, i)));
    out["matrix_diagonal"] = std::move(diag);
  }
  return out;
}

}  // namespace

SigmaSet parse_sigma_list(const std::string& text) {
  SigmaSet out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    const auto first = item.find_first_not_of(" \t");
    const auto last = item.find_last_not_of(" \t");
    if (first == std::string::npos) throw UsageError("empty entry in sigma list '" + text + "'");
    item = item.substr(first, last - first + 1);
    std::size_t used = 0;
    int value = 0;
    try {
      value = std::stoi(item, &used);
    } catch (const std::exception&) {
      throw UsageError("sigma entry '" + item + "' is not an integer");
    }
    if (used != item.size()) throw UsageError("sigma entry '" + item + "' is not an integer");
    out.insert(value);
  }
  if (out.empty()) throw UsageError("sigma list is empty");
  return out;
}

ContextConfig parse_context_config(const std::string& text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    std::size_t line = 1, column = 1;
    const std::size_t end = std::min<std::size_t>(e.byte > 0 ? e.byte - 1 : 0, text.size());
    for (std::size_t i = 0; i < end; ++i) {
      if (text[i] == '\n') {
        line += 1;
        column = 1;
      } else {
        column += 1;
      }
    }
    // nlohmann messages look like "[json.exception.parse_error.101] parse error at line 2, column 17: <detail>"
    std::string what = e.what();
    const auto detail = what.find(": ", what.find("column"));
    what = detail == std::string::npos ? "malformed document" : what.substr(detail + 2);
    throw ParseError("invalid JSON: " + what, line, column);
  }
  if (!doc.is_object()) throw ConfigError("<root>", "expected an object");

  ContextConfig cfg;
  const Json& alg = require(doc, "algebra", "");
  const std::string family = as_string(require(alg, "family", "algebra"), "algebra.family");
  try {
    cfg.family = parse_family(family);
  } catch (const UnsupportedInput& e) {
    throw ConfigError("algebra.family", e.what());
  }
  const long long rank = as_int(require(alg, "rank", "algebra"), "algebra.rank");
  if (rank < 1 || rank > kMaxRank) throw ConfigError("algebra.rank", "rank " + std::to_string(rank) + " out of range");
  cfg.rank = static_cast<int>(rank);

  const Json& sigma = require(doc, "sigma", "");
  if (!sigma.is_array()) throw ConfigError("sigma", "expected an array of simple root indices");
  for (std::size_t i = 0; i < sigma.size(); ++i) {
    const std::string path = "sigma[" + std::to_string(i) + "]";
    const long long s = as_int(sigma[i], path);
    if (s < 1 || s > cfg.rank)
      throw ConfigError(path, "simple root index " + std::to_string(s) + " out of range 1.." + std::to_string(cfg.rank));
    cfg.sigma.insert(static_cast<int>(s));
  }
  if (cfg.sigma.empty()) throw ConfigError("sigma", "must be nonempty");

  if (auto it = doc.find("connection"); it != doc.end()) {
    if (!it->is_array()) throw ConfigError("connection", "expected an array");
    for (std::size_t i = 0; i < it->size(); ++i) {
      const std::string path = "connection[" + std::to_string(i) + "]";
      const Json& entry = (*it)[i];
      ConnectionTerm term;
      const long long idx = as_int(require(entry, "value_index", path), join(path, "value_index"));
      if (idx < 0) throw ConfigError(join(path, "value_index"), "must be nonnegative");
      term.value_index = static_cast<int>(idx);
      term.form = as_string(require(entry, "form", path), join(path, "form"));
      cfg.connection.push_back(std::move(term));
    }
  }
  if (auto it = doc.find("h_form"); it != doc.end()) cfg.h_form = as_string(*it, "h_form");
  if (auto it = doc.find("seed"); it != doc.end()) {
    if (!it->is_number_unsigned()) throw ConfigError("seed", "expected a nonnegative integer");
    cfg.seed = it->get<std::uint64_t>();
  }
  if (auto it = doc.find("samples"); it != doc.end()) {
    const long long s = as_int(*it, "samples");
    if (s < 1) throw ConfigError("samples", "must be positive");
    cfg.samples = static_cast<std::size_t>(s);
  }
  if (auto it = doc.find("max_poly_degree"); it != doc.end()) {
    const long long s = as_int(*it, "max_poly_degree");
    if (s < 1 || s > 8) throw ConfigError("max_poly_degree", "must be in 1..8");
    cfg.max_poly_degree = static_cast<int>(s);
  }
  return cfg;
}

CourantContext<Rational> build_context(const ContextConfig& cfg) {
  std::shared_ptr<const LieAlgebra<Rational>> algebra;
  try {
    algebra = std::make_shared<const LieAlgebra<Rational>>(build_algebra<Rational>(cfg.family, cfg.rank));
  } catch (const UnsupportedInput& e) {
    throw ConfigError("algebra", e.what());
  }
  auto gd = grade(*algebra, cfg.sigma);
  const int n = static_cast<int>(gd.negative_part().size());
  const int m = static_cast<int>(gd.component(0).size());
  if (n > kMaxChartDim)
    throw ConfigError("sigma", "chart dimension " + std::to_string(n) + " exceeds " + std::to_string(kMaxChartDim));

  ValuedForm<Rational> connection(n, 1, m);
  for (std::size_t i = 0; i < cfg.connection.size(); ++i) {
    const std::string path = "connection[" + std::to_string(i) + "]";
    const auto& term = cfg.connection[i];
    if (term.value_index >= m)
      throw ConfigError(path + ".value_index", "index " + std::to_string(term.value_index) +
                                                   " out of range for dim g_0 = " + std::to_string(m));
    connection[term.value_index] += parse_field_form(term.form, n, 1, path + ".form");
  }
  PolyForm<Rational> h = parse_field_form(cfg.h_form, n, 3, "h_form");
  return make_context(std::move(algebra), std::move(gd), std::move(connection), std::move(h));
}

CommandResult cmd_grade(const RunConfig& config) {
  const auto start = Clock::now();
  const auto a = algebra_from(config);
  std::vector<SigmaSet> sigmas;
  if (config.sigma) {
    check_sigma(*config.sigma, a.rank(), "--sigma");
    sigmas.push_back(*config.sigma);
  } else {
    for (unsigned mask = 1; mask < (1u << a.rank()); ++mask) {
      SigmaSet s;
      for (int i = 0; i < a.rank(); ++i)
        if (mask & (1u << i)) s.insert(i + 1);
      sigmas.push_back(std::move(s));
    }
  }

  CommandResult result;
  Json doc = header("grade");
  doc["algebra"] = algebra_json(a);
  Json rows = Json::array();
  bool all = true;
  for (const auto& sigma : sigmas) {
    const auto gd = grade(a, sigma);
    Report checks = verify_grading(a, gd);
    const Report duality = verify_duality(a, gd);
    for (const auto& c : duality.checks) checks.checks.push_back(c);
    Json row;
    row["sigma"] = sigma_json(sigma);
    row["k"] = gd.k;
    row["dims"] = dims_json(gd);
    row["grading_element"] = grading_element_json(a, gd);
    row["passed"] = checks.passed();
    Json list = Json::array();
    for (const auto& c : checks.checks) list.push_back(check_json(c));
    row["checks"] = std::move(list);
    rows.push_back(std::move(row));
    all = all && checks.passed();
  }
  doc["gradings"] = std::move(rows);
  doc["passed"] = all;
  if (config.timings) doc["timings_ms"] = Json{{"total", elapsed_ms(start)}};
  result.document = std::move(doc);
  result.exit_code = all ? kExitPass : kExitFail;
  return result;
}

CommandResult cmd_classify(const RunConfig& config) {
  const auto start = Clock::now();
  const auto a = algebra_from(config);
  const RootDatum rd = root_decomposition(a);
  SweepResult sweep;
  try {
    sweep = sweep_root_subalgebras(a, config.sweep_cap);
  } catch (const SweepCapExceeded& e) {
    throw UsageError(std::string("classify refused: ") + e.what());
  }

  CommandResult result;
  Json doc = header("classify");
  doc["algebra"] = algebra_json(a);
  doc["root_count"] = sweep.root_count;
  doc["cap"] = config.sweep_cap;
  doc["subsets"] = sweep.entries.size();
  doc["closed"] = sweep.count_closed();
  doc["coisotropic"] = sweep.count_coisotropic();
  doc["parabolic"] = sweep.count_parabolic();
  Json cx = Json::array();
  for (const auto& e : sweep.counterexamples) {
    Json item;
    Json roots = Json::array();
    for (int r : e.descriptor.root_subset) roots.push_back(root_json(rd.roots[static_cast<std::size_t>(r)]));
    item["roots"] = std::move(roots);
    item["closed"] = e.descriptor.closed;
    item["is_subalgebra"] = e.is_subalgebra;
    item["is_coisotropic"] = e.is_coisotropic;
    item["is_parabolic"] = e.is_parabolic;
    cx.push_back(std::move(item));
  }
  doc["counterexamples"] = std::move(cx);
  const bool ok = sweep.counterexamples.empty();
  doc["passed"] = ok;
  if (config.timings) doc["timings_ms"] = Json{{"total", elapsed_ms(start)}};
  result.document = std::move(doc);
  result.exit_code = ok ? kExitPass : kExitFail;
  return result;
}

CommandResult cmd_verify(const RunConfig& config, const ContextConfig& context) {
  ContextConfig cfg = context;
  if (config.seed) cfg.seed = *config.seed;
  if (config.samples) cfg.samples = *config.samples;
  if (config.max_poly_degree) cfg.max_poly_degree = *config.max_poly_degree;
  if (cfg.samples < 1) throw UsageError("--samples must be positive");
  if (cfg.max_poly_degree < 1) throw UsageError("--max-degree must be positive");

  const auto ctx = build_context(cfg);
  SamplingOptions opt;
  opt.seed = cfg.seed;
  opt.max_degree = cfg.max_poly_degree;

  Json timings;
  auto t = Clock::now();
  const auto samples = axiom_samples(ctx, cfg.samples, opt);
  const Report axioms = check_axioms(ctx, samples);
  timings["axioms"] = elapsed_ms(t);
  t = Clock::now();
  const Report compat = check_compatibility(ctx, cfg.samples, opt);
  timings["compatibility"] = elapsed_ms(t);
  t = Clock::now();
  const TwistSummary twist = check_twist(ctx, samples);
  timings["twist"] = elapsed_ms(t);

  CommandResult result;
  Json doc = header("verify");
  doc["algebra"] = algebra_json(*ctx.algebra);
  doc["sigma"] = sigma_json(cfg.sigma);
  doc["chart_dim"] = ctx.n;
  doc["fiber_dim"] = ctx.fiber_dim();
  doc["seed"] = cfg.seed;
  doc["samples"] = cfg.samples;
  doc["max_poly_degree"] = cfg.max_poly_degree;
  doc["connection"] = Json::array();
  for (int a = 0; a < ctx.fiber_dim(); ++a) doc["connection"].push_back(to_string(ctx.connection[a]));
  doc["h_form"] = to_string(ctx.h_form);
  Json suites = Json::array();
  suites.push_back(report_json(axioms));
  suites.push_back(report_json(compat));
  suites.push_back(report_json(twist.report));
  doc["suites"] = std::move(suites);
  Json jacobi;
  jacobi["status"] = twist.h4_zero ? "holds" : "twisted";
  jacobi["h4"] = twist.h4;
  jacobi["sign"] = kJacobiatorTwistSign;
  jacobi["jacobiator_vanishes"] = twist.jacobiator_vanishes;
  doc["jacobi"] = std::move(jacobi);
  const bool ok = axioms.passed() && compat.passed() && twist.report.passed();
  doc["passed"] = ok;
  if (config.timings) doc["timings_ms"] = std::move(timings);
  result.document = std::move(doc);
  result.exit_code = ok ? kExitPass : kExitFail;
  return result;
}

CommandResult cmd_verify(const RunConfig& config) {
  if (config.config_path.empty()) throw UsageError("verify requires --config <path>");
  std::ifstream in(config.config_path);
  if (!in) throw UsageError("cannot read config file '" + config.config_path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return cmd_verify(config, parse_context_config(buffer.str()));
}

std::string render_text(const Json& doc) {
  std::ostringstream out;
  const std::string command = doc.value("command", "");
  const auto verdict = [](bool b) { return b ? "pass" : "FAIL"; };
  const auto checks_text = [&](const Json& checks, const std::string& indent) {
    for (const auto& c : checks) {
      out << indent << c["name"].get<std::string>() << ": " << verdict(c["passed"].get<bool>()) << " ("
          << c["evaluated"].get<std::size_t>() << ")";
      if (c.contains("witness")) out << "  " << c["witness"].get<std::string>();
      out << "\n";
    }
  };
  if (doc.contains("algebra")) {
    const auto& a = doc["algebra"];
    out << command << " " << a["family"].get<std::string>() << a["rank"].get<int>() << " (dim "
        << a["dimension"].get<long long>() << ")\n";
  }
  if (command == "grade") {
    for (const auto& row : doc["gradings"]) {
      out << "sigma " << row["sigma"].dump() << "  k=" << row["k"].get<int>() << "  dims";
      for (const auto& d : row["dims"]) out << " " << d.get<long long>();
      out << "  " << verdict(row["passed"].get<bool>()) << "\n";
      if (row["grading_element"].contains("matrix_diagonal")) {
        out << "  K = diag(";
        bool first = true;
        for (const auto& v : row["grading_element"]["matrix_diagonal"]) {
          out << (first ? "" : ", ") << v.get<std::string>();
          first = false;
        }
        out << ")\n";
      }
      for (const auto& c : row["checks"])
        if (!c["passed"].get<bool>()) out << "  " << c["name"].get<std::string>() << ": FAIL  " << c.value("witness", "") << "\n";
    }
  } else if (command == "classify") {
    out << "roots " << doc["root_count"].get<std::size_t>() << ", closed " << doc["closed"].get<std::size_t>()
        << ", coisotropic " << doc["coisotropic"].get<std::size_t>() << ", parabolic "
        << doc["parabolic"].get<std::size_t>() << ", counterexamples " << doc["counterexamples"].size() << "\n";
    for (const auto& c : doc["counterexamples"]) out << "  counterexample " << c["roots"].dump() << "\n";
  } else if (command == "verify") {
    out << "sigma " << doc["sigma"].dump() << "  n=" << doc["chart_dim"].get<int>() << "  dim E="
        << doc["fiber_dim"].get<int>() << "  seed " << doc["seed"].get<std::uint64_t>() << "  samples "
        << doc["samples"].get<std::size_t>() << "\n";
    for (const auto& s : doc["suites"]) {
      out << s["name"].get<std::string>() << ": " << verdict(s["passed"].get<bool>())
          << (s.value("vacuous", false) ? " (vacuous)" : "") << "\n";
      checks_text(s["checks"], "  ");
    }
    out << "jacobi: " << doc["jacobi"]["status"].get<std::string>() << ", H4 = " << doc["jacobi"]["h4"].get<std::string>()
        << "\n";
  }
  if (doc.contains("timings_ms")) out << "timings_ms " << doc["timings_ms"].dump() << "\n";
  out << (doc.value("passed", false) ? "PASS" : "FAIL") << "\n";
  return out.str();
}

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Parabolic gradings, coisotropy sweeps and pre-Courant verification"};
  app.require_subcommand(1);

  RunConfig config;
  std::string family, sigma, format = "json";
  int rank = 0;
  std::uint64_t seed = 0;
  std::size_t samples = 0;
  int degree = 0;

  const auto common = [&](CLI::App* sub) {
    sub->add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "text"}));
    sub->add_flag("--timings", config.timings, "Include wall-clock timings");
  };
  const auto algebra_opts = [&](CLI::App* sub) {
    sub->add_option("--family", family, "Lie algebra family (A, B, C, D)")->required();
    sub->add_option("--rank", rank, "Rank")->required();
  };

  auto* grade_cmd = app.add_subcommand("grade", "Tabulate gradings for one or all sigma");
  algebra_opts(grade_cmd);
  grade_cmd->add_option("--sigma", sigma, "Comma-separated simple root indices");
  common(grade_cmd);

  auto* classify_cmd = app.add_subcommand("classify", "Compare coisotropy and parabolicity over root subalgebras");
  algebra_opts(classify_cmd);
  classify_cmd->add_option("--cap", config.sweep_cap, "Largest root count to enumerate");
  common(classify_cmd);

  auto* verify_cmd = app.add_subcommand("verify", "Run the Courant verification suites for a context config");
  verify_cmd->add_option("--config", config.config_path, "Context configuration (JSON)")->required();
  auto* seed_opt = verify_cmd->add_option("--seed", seed, "Sampling seed");
  auto* samples_opt = verify_cmd->add_option("--samples", samples, "Random samples per suite");
  auto* degree_opt = verify_cmd->add_option("--max-degree", degree, "Largest polynomial degree in samples");
  common(verify_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitPass;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    config.format = format == "text" ? Format::text : Format::json;
    if (!family.empty()) config.family = parse_family(family);
    if (rank != 0 || !family.empty()) config.rank = rank;
    if (!sigma.empty()) config.sigma = parse_sigma_list(sigma);
    if (*seed_opt) config.seed = seed;
    if (*samples_opt) config.samples = samples;
    if (*degree_opt) config.max_poly_degree = degree;

    CommandResult result;
    if (*grade_cmd) {
      config.command = Command::grade;
      result = cmd_grade(config);
    } else if (*classify_cmd) {
      config.command = Command::classify;
      result = cmd_classify(config);
    } else {
      config.command = Command::verify;
      result = cmd_verify(config);
    }
    if (config.format == Format::json) out << result.document.dump(2) << "\n";
    else out << render_text(result.document);
    return result.exit_code;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

}  // namespace tractor::cli
