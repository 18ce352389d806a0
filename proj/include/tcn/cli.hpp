#ifndef TCN_CLI_HPP
#define TCN_CLI_HPP

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "tcn/decompose.hpp"
#include "tcn/frontend.hpp"
#include "tcn/preprocess.hpp"
#include "tcn/search.hpp"
#include "tcn/stats.hpp"

namespace tcn::cli {

enum Exit : int { Ok = 0, ParseError = 1, IoError = 2, Unbounded = 3 };

struct SolveFlags {
  bool all_solutions = false;
  bool no_preprocess = false;
  std::optional<double> timeout;
  bool stats = false;
};

namespace detail {

inline std::optional<std::string> read_file(const std::string& path, std::ostream& err) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    err << "error: cannot read " << path << "\n";
    return std::nullopt;
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Reads and parses a model; diagnostics go to err. Sets code on failure.
inline std::optional<SourceNetwork> load(const std::string& path, std::ostream& err, int& code) {
  auto text = read_file(path, err);
  if (!text) {
    code = IoError;
    return std::nullopt;
  }
  ParseResult r = parse_model(*text);
  for (const auto& d : r.diagnostics) err << path << ":" << d.to_string() << "\n";
  if (!r.ok()) {
    code = ParseError;
    return std::nullopt;
  }
  return std::move(*r.network);
}

inline std::string number(double v) {
  std::ostringstream ss;
  ss << std::setprecision(6) << v;
  return ss.str();
}

inline std::string number(const std::optional<double>& v) { return v ? number(*v) : "undefined"; }

inline nlohmann::json json_number(const std::optional<double>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

inline nlohmann::json histogram_json(const NetworkStats& s) {
  nlohmann::json h = nlohmann::json::object();
  for (std::size_t i = 0; i < kOpRowCount; ++i) h[std::string(to_string(static_cast<OpRow>(i)))] = (*s.histogram)[i];
  return h;
}

inline nlohmann::json stats_json(const ModelStats& m) {
  nlohmann::json j;
  j["source"] = {{"variables", m.source.variables}, {"constraints", m.source.constraints}};
  j["tcn"] = {{"variables", m.tcn.variables}, {"constraints", m.tcn.constraints}, {"ops", histogram_json(m.tcn)}};
  j["preprocessed"] = {{"variables", m.preprocessed.variables},
                       {"constraints", m.preprocessed.constraints},
                       {"ops", histogram_json(m.preprocessed)}};
  j["ratios"] = {
      {"tcn", {{"variables", json_number(m.tcn_variable_ratio())}, {"constraints", json_number(m.tcn_constraint_ratio())}}},
      {"preprocessed",
       {{"variables", json_number(m.preprocessed_variable_ratio())},
        {"constraints", json_number(m.preprocessed_constraint_ratio())}}},
  };
  const auto& r = m.report;
  j["preprocess"] = {{"iterations", r.iterations},
                     {"removed_simplified", r.removed_simplified},
                     {"removed_cse", r.removed_cse},
                     {"removed_entailed", r.removed_entailed},
                     {"variables_added", r.variables_added},
                     {"variables_eliminated", r.variables_eliminated},
                     {"unsat", r.unsat},
                     {"elapsed_seconds", r.elapsed_seconds}};
  return j;
}

inline void stats_lines(const ModelStats& m, std::ostream& out) {
  auto stage = [&](std::string_view name, const NetworkStats& s) {
    out << name << ".variables: " << s.variables << "\n";
    out << name << ".constraints: " << s.constraints << "\n";
  };
  stage("source", m.source);
  stage("tcn", m.tcn);
  stage("preprocessed", m.preprocessed);
  out << "ratio.tcn.variables: " << number(m.tcn_variable_ratio()) << "\n";
  out << "ratio.tcn.constraints: " << number(m.tcn_constraint_ratio()) << "\n";
  out << "ratio.preprocessed.variables: " << number(m.preprocessed_variable_ratio()) << "\n";
  out << "ratio.preprocessed.constraints: " << number(m.preprocessed_constraint_ratio()) << "\n";
  for (const auto* s : {&m.tcn, &m.preprocessed}) {
    const std::string_view name = s == &m.tcn ? "tcn" : "preprocessed";
    for (std::size_t i = 0; i < kOpRowCount; ++i) {
      out << name << ".ops." << to_string(static_cast<OpRow>(i)) << ": " << (*s->histogram)[i] << "\n";
    }
  }
  const auto& r = m.report;
  out << "preprocess.iterations: " << r.iterations << "\n";
  out << "preprocess.removed_simplified: " << r.removed_simplified << "\n";
  out << "preprocess.removed_cse: " << r.removed_cse << "\n";
  out << "preprocess.removed_entailed: " << r.removed_entailed << "\n";
  out << "preprocess.variables_added: " << r.variables_added << "\n";
  out << "preprocess.variables_eliminated: " << r.variables_eliminated << "\n";
  out << "preprocess.unsat: " << (r.unsat ? "true" : "false") << "\n";
  out << "preprocess.elapsed_seconds: " << number(r.elapsed_seconds) << "\n";
}

inline void print_solution(const SourceNetwork& net, const Assignment& row, std::ostream& out) {
  for (VarId v = 0; v < row.size(); ++v) out << net.domains.name(v) << " = " << row[v] << ";\n";
  out << "----------\n";
}

}  // namespace detail

/// Writes the tcn-v1 dump of the decomposed (optionally preprocessed) model.
inline int cmd_compile(const std::string& path, bool with_preprocess, std::ostream& out, std::ostream& err) {
  int code = Ok;
  auto net = detail::load(path, err, code);
  if (!net) return code;
  TcnNetwork t = tcn(*net);
  if (with_preprocess) t = preprocess(t, false).network;
  out << dump(t);
  return Ok;
}

inline int cmd_solve(const std::string& path, const SolveFlags& flags, std::ostream& out, std::ostream& err) {
  int code = Ok;
  auto net = detail::load(path, err, code);
  if (!net) return code;
  ModelSolveOptions opts;
  opts.preprocess = !flags.no_preprocess;
  opts.search.all_solutions = flags.all_solutions;
  opts.search.timeout_seconds = flags.timeout;
  ModelSolveResult r;
  try {
    r = solve_model(*net, opts, [&](const Assignment& row) { detail::print_solution(*net, row, out); });
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::UnboundedVariable) throw;
    err << "error: " << e.what() << "\n";
    return Unbounded;
  }
  const bool complete = r.status == SolveStatus::Optimal || r.status == SolveStatus::Unsat ||
                        (r.status == SolveStatus::Sat && flags.all_solutions && !net->objective.is_optimization());
  if (complete) out << "==========\n";
  out << "status: " << to_string(r.status) << "\n";
  if (flags.stats) {
    out << "stats.nodes: " << r.stats.nodes << "\n";
    out << "stats.fails: " << r.stats.fails << "\n";
    out << "stats.peak_depth: " << r.stats.peak_depth << "\n";
    out << "stats.solutions: " << r.solutions.size() << "\n";
    out << "stats.propagations: " << r.stats.propagations << "\n";
    out << "stats.wall_seconds: " << detail::number(r.stats.wall_seconds) << "\n";
    if (r.objective) out << "stats.objective: " << *r.objective << "\n";
    if (r.report) {
      out << "stats.preprocess_iterations: " << r.report->iterations << "\n";
      out << "stats.preprocess_unsat: " << (r.report->unsat ? "true" : "false") << "\n";
    }
  }
  return Ok;
}

inline int cmd_stats(const std::string& path, bool json, std::ostream& out, std::ostream& err) {
  int code = Ok;
  auto net = detail::load(path, err, code);
  if (!net) return code;
  const ModelStats m = model_stats(*net);
  if (json) {
    out << detail::stats_json(m).dump(2) << "\n";
  } else {
    detail::stats_lines(m, out);
  }
  return Ok;
}

/// Aggregates every `*.tcm` model of a directory into the size-increase table.
inline int cmd_stats_batch(const std::string& dir, bool json, std::ostream& out, std::ostream& err) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) {
    err << "error: not a directory: " << dir << "\n";
    return IoError;
  }
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir, ec)) {
    if (entry.is_regular_file() && entry.path().extension() == ".tcm") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  int code = Ok;
  std::vector<std::string> names;
  std::vector<ModelStats> models;
  for (const auto& f : files) {
    int c = Ok;
    auto net = detail::load(f.string(), err, c);
    if (!net) {
      code = std::max(code, c);
      continue;
    }
    names.push_back(f.filename().string());
    models.push_back(model_stats(*net));
  }
  const auto table = summarize(models);
  if (json) {
    nlohmann::json j;
    j["instances"] = nlohmann::json::array();
    for (std::size_t i = 0; i < models.size(); ++i) {
      nlohmann::json m = detail::stats_json(models[i]);
      m["name"] = names[i];
      j["instances"].push_back(std::move(m));
    }
    for (const auto& row : table) {
      auto summary = [](const Summary& s) {
        return nlohmann::json{{"count", s.count}, {"average", s.average}, {"median", s.median},
                              {"stddev", s.stddev}, {"max", s.max}};
      };
      j["table"][row.stage] = {{"variables", summary(row.variables)}, {"constraints", summary(row.constraints)}};
    }
    out << j.dump(2) << "\n";
    return code;
  }
  out << "instances: " << models.size() << "\n";
  for (std::size_t i = 0; i < models.size(); ++i) {
    const auto& m = models[i];
    out << names[i] << ": source " << m.source.variables << "/" << m.source.constraints << ", tcn "
        << m.tcn.variables << "/" << m.tcn.constraints << ", preprocessed " << m.preprocessed.variables << "/"
        << m.preprocessed.constraints << "\n";
  }
  out << "\n";
  out << std::left << std::setw(14) << "" << std::setw(44) << "Variables" << "Constraints\n";
  out << std::setw(14) << "";
  for (int k = 0; k < 2; ++k) {
    for (const char* h : {"average", "median", "stddev", "max"}) out << std::setw(11) << h;
  }
  out << "\n";
  auto cell = [](double v) { return detail::number(v) + "x"; };
  for (const auto& row : table) {
    out << std::setw(14) << row.stage;
    for (const Summary* s : {&row.variables, &row.constraints}) {
      if (s->count == 0) {
        for (int k = 0; k < 4; ++k) out << std::setw(11) << "-";
      } else {
        for (double v : {s->average, s->median, s->stddev, s->max}) out << std::setw(11) << cell(v);
      }
    }
    out << "\n";
  }
  return code;
}

/// Entry point shared by the executable and the tests.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Ternary constraint network toolkit"};
  app.require_subcommand(1);

  std::string model;
  bool with_preprocess = false;
  auto* compile = app.add_subcommand("compile", "Decompose a model and print the tcn-v1 dump");
  compile->add_option("model", model, "Model file")->required();
  compile->add_flag("--preprocess", with_preprocess, "Preprocess before printing");

  SolveFlags flags;
  double timeout = 0;
  auto* solve = app.add_subcommand("solve", "Solve a model");
  solve->add_option("model", model, "Model file")->required();
  solve->add_flag("--all-solutions", flags.all_solutions, "Enumerate every solution");
  solve->add_flag("--no-preprocess", flags.no_preprocess, "Search the decomposed network directly");
  auto* timeout_opt = solve->add_option("--timeout", timeout, "Time limit in seconds")->check(CLI::NonNegativeNumber);
  solve->add_flag("--stats", flags.stats, "Print search statistics");

  bool json = false;
  std::string batch;
  auto* stats = app.add_subcommand("stats", "Report network sizes and operator counts");
  stats->add_option("model", model, "Model file");
  stats->add_option("--batch", batch, "Aggregate every .tcm model of a directory");
  stats->add_flag("--json", json, "Machine-readable output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    std::ostringstream o, r;
    const int code = app.exit(e, o, r);
    out << o.str();
    err << r.str();
    return code;
  }

  try {
    if (*compile) return cmd_compile(model, with_preprocess, out, err);
    if (*solve) {
      if (*timeout_opt) flags.timeout = timeout;
      return cmd_solve(model, flags, out, err);
    }
    if (!batch.empty()) return cmd_stats_batch(batch, json, out, err);
    if (model.empty()) {
      err << "error: stats needs a model or --batch <dir>\n";
      return ParseError;
    }
    return cmd_stats(model, json, out, err);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return e.kind() == ErrorKind::UnboundedVariable ? Unbounded : ParseError;
  }
}

}  // namespace tcn::cli

#endif
