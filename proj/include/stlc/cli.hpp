#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "stlc/diff.hpp"
#include "stlc/elaborate.hpp"
#include "stlc/generator.hpp"
#include "stlc/krivine.hpp"
#include "stlc/refocus.hpp"

namespace stlc::cli {

enum ExitCode : int { kOk = 0, kInputError = 1, kDisagreement = 2, kFuelExhausted = 3 };

/// Source text plus where it came from, for diagnostics.
struct Source {
  std::string origin;
  std::string text;
};

/// An argument naming an existing file is read; anything else is the term itself.
inline Source load_source(const std::string& arg) {
  std::error_code ec;
  if (std::filesystem::is_regular_file(arg, ec)) {
    std::ifstream in(arg, std::ios::binary);
    if (!in) throw Error("cannot read " + arg);
    std::ostringstream buf;
    buf << in.rdbuf();
    return Source{arg, buf.str()};
  }
  return Source{"<expr>", arg};
}

/// `origin:line:col: error: message`, followed by the offending line and a caret.
inline std::string format_diagnostic(const Source& src, const SourceError& e) {
  const std::size_t pos = std::min(e.span().begin, src.text.size());
  std::size_t line = 1;
  std::size_t line_start = 0;
  for (std::size_t i = 0; i < pos; ++i) {
    if (src.text[i] == '\n') {
      ++line;
      line_start = i + 1;
    }
  }
  std::size_t line_end = src.text.find('\n', line_start);
  if (line_end == std::string::npos) line_end = src.text.size();
  const std::size_t col = pos - line_start;
  const std::size_t width =
      std::max<std::size_t>(1, std::min(e.span().end, line_end) > pos ? std::min(e.span().end, line_end) - pos : 1);
  std::ostringstream out;
  out << src.origin << ':' << line << ':' << (col + 1) << ": error: " << e.what() << '\n';
  out << "  " << src.text.substr(line_start, line_end - line_start) << '\n';
  out << "  " << std::string(col, ' ') << std::string(width, '^') << '\n';
  return out.str();
}

inline Term parse_source(const Source& src) { return elaborate(parse_term(src.text)); }

inline int run_check(const std::string& input, std::ostream& out, std::ostream& err) {
  Source src;
  try {
    src = load_source(input);
    out << to_string(parse_source(src).type()) << '\n';
    return kOk;
  } catch (const SourceError& e) {
    err << format_diagnostic(src, e);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
  }
  return kInputError;
}

struct EvalArgs {
  std::string machine = "krivine";
  std::size_t fuel = kDefaultFuel;
  std::string trace_path;
  bool verbose_trace = false;
  bool verbose = false;
  std::string input;
};

inline EvalResult evaluate_with(Machine m, const Term& t, std::size_t fuel, const EvalOptions& opts) {
  switch (m) {
    case Machine::Smallstep:
      return evaluate_smallstep(Closed::closure(t, Env{}), fuel, opts);
    case Machine::Refocus:
      return evaluate_refocus(Closed::closure(t, Env{}), fuel, opts);
    case Machine::Krivine:
      return evaluate_krivine(t, fuel, opts);
  }
  throw std::logic_error("unreachable");
}

inline void write_json(const std::string& path, const nlohmann::json& j) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot write " + path);
  f << j.dump(2) << '\n';
}

inline int run_eval(const EvalArgs& a, std::ostream& out, std::ostream& err) {
  const auto machine = parse_machine(a.machine);
  if (!machine) {
    err << "error: unknown machine '" << a.machine << "' (expected smallstep, refocus or krivine)\n";
    return kInputError;
  }
  Source src;
  Term term = Term::var(0, Ty::base());
  try {
    src = load_source(a.input);
    term = parse_source(src);
  } catch (const SourceError& e) {
    err << format_diagnostic(src, e);
    return kInputError;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }
  EvalOptions opts;
  opts.verbose_trace = a.verbose_trace;
  try {
    EvalResult r = evaluate_with(*machine, term, a.fuel, opts);
    out << describe_value(r.value, a.verbose) << '\n';
    out << "steps: " << r.log.total() << '\n';
    if (!a.trace_path.empty()) write_json(a.trace_path, r.log.to_json());
    return kOk;
  } catch (const FuelExhausted& e) {
    err << "error: " << e.what() << '\n';
    if (!a.trace_path.empty()) write_json(a.trace_path, e.partial_log().to_json());
    return kFuelExhausted;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }
}

struct FuzzArgs {
  std::uint64_t seed = 42;
  std::size_t count = 100;
  std::size_t depth = 5;
  std::string goal = "o -> o";
};

inline GenConfig to_config(const FuzzArgs& f) {
  GenConfig cfg;
  cfg.seed = f.seed;
  cfg.count = f.count;
  cfg.max_depth = f.depth;
  cfg.goal = parse_type(f.goal);
  return cfg;
}

struct DiffArgs {
  std::size_t fuel = kDefaultFuel;
  std::vector<std::string> inputs;
  bool fuzz = false;
  FuzzArgs gen;
  std::string json_path;
  std::size_t jobs = 1;
};

inline int run_diff_command(const DiffArgs& a, std::ostream& out, std::ostream& err) {
  std::vector<Term> terms;
  try {
    if (a.fuzz) {
      terms = generate_term(to_config(a.gen));
    } else {
      if (a.inputs.empty()) {
        err << "error: diff needs input files or --fuzz\n";
        return kInputError;
      }
      for (const auto& in : a.inputs) {
        Source src;
        try {
          src = load_source(in);
          terms.push_back(parse_source(src));
        } catch (const SourceError& e) {
          err << format_diagnostic(src, e);
          return kInputError;
        }
      }
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }

  DiffOptions opts;
  opts.fuel = a.fuel;
  opts.jobs = a.jobs;
  const DiffReport report = run_diff(terms, opts);
  for (const auto& r : report.records) {
    out << (r.agree() ? "ok   " : "FAIL ") << '#' << r.index << "  " << r.term << "  steps: smallstep="
        << r.smallstep.steps() << " refocus=" << r.refocus.steps() << " krivine=" << r.krivine.steps() << '\n';
    if (!r.agree()) {
      for (const auto* run : {&r.smallstep, &r.refocus, &r.krivine})
        if (run->error) out << "       error: " << *run->error << '\n';
    }
  }
  out << "passed: " << report.passed() << '/' << report.records.size() << '\n';
  if (!a.json_path.empty()) write_json(a.json_path, report.to_json());
  if (report.any_fuel_exhausted()) return kFuelExhausted;
  return report.failed() == 0 ? kOk : kDisagreement;
}

struct FuzzCommandArgs {
  FuzzArgs gen;
  std::string emit_dir;
};

inline int run_fuzz(const FuzzCommandArgs& a, std::ostream& out, std::ostream& err) {
  std::vector<Term> terms;
  try {
    terms = generate_term(to_config(a.gen));
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }
  if (a.emit_dir.empty()) {
    for (const auto& t : terms) out << print_term(t) << '\n';
    return kOk;
  }
  std::error_code ec;
  std::filesystem::create_directories(a.emit_dir, ec);
  if (ec) {
    err << "error: cannot create " << a.emit_dir << ": " << ec.message() << '\n';
    return kInputError;
  }
  for (std::size_t i = 0; i < terms.size(); ++i) {
    const auto path = std::filesystem::path(a.emit_dir) / ("term_" + std::to_string(i) + ".lam");
    std::ofstream f(path, std::ios::binary);
    if (!f) {
      err << "error: cannot write " << path.string() << '\n';
      return kInputError;
    }
    f << print_term(terms[i]) << '\n';
  }
  out << "wrote " << terms.size() << " terms to " << a.emit_dir << '\n';
  return kOk;
}

inline void add_gen_options(CLI::App* cmd, FuzzArgs& g) {
  cmd->add_option("--seed", g.seed, "Generator seed");
  cmd->add_option("--count", g.count, "Number of terms")->check(CLI::PositiveNumber);
  cmd->add_option("--depth", g.depth, "Maximum generation depth")->check(CLI::PositiveNumber);
  cmd->add_option("--goal", g.goal, "Goal type, e.g. \"o -> o\"");
}

/// Entry point shared by the `stlc` binary and the tests.
inline int cli_main(int argc, const char* const* argv, std::ostream& out = std::cout,
                    std::ostream& err = std::cerr) {
  CLI::App app{"Simply typed lambda calculus workbench: small-step, refocused and Krivine evaluators"};
  app.require_subcommand(1);

  std::string check_input;
  auto* check = app.add_subcommand("check", "Parse and type-check a term, printing its type");
  check->add_option("input", check_input, "Term file or expression")->required();

  EvalArgs eval_args;
  auto* eval = app.add_subcommand("eval", "Evaluate a closed term to weak head normal form");
  eval->add_option("--machine", eval_args.machine, "smallstep | refocus | krivine")
      ->check(CLI::IsMember({"smallstep", "refocus", "krivine"}));
  eval->add_option("--fuel", eval_args.fuel, "Step budget")->check(CLI::PositiveNumber);
  eval->add_option("--trace", eval_args.trace_path, "Write the step log as JSON to this path");
  eval->add_flag("--verbose-trace", eval_args.verbose_trace, "Record full machine states in the trace");
  eval->add_flag("--verbose", eval_args.verbose, "Print value environments recursively");
  eval->add_option("input", eval_args.input, "Term file or expression")->required();

  DiffArgs diff_args;
  auto* diff = app.add_subcommand("diff", "Run all three evaluators and compare their results");
  diff->add_option("--fuel", diff_args.fuel, "Step budget per evaluator")->check(CLI::PositiveNumber);
  diff->add_flag("--fuzz", diff_args.fuzz, "Compare on generated terms instead of files");
  add_gen_options(diff, diff_args.gen);
  diff->add_option("--json", diff_args.json_path, "Write the report as JSON to this path");
  diff->add_option("--jobs", diff_args.jobs, "Worker threads");
  diff->add_option("inputs", diff_args.inputs, "Term files or expressions");

  FuzzCommandArgs fuzz_args;
  auto* fuzz = app.add_subcommand("fuzz", "Generate random closed well-typed terms");
  add_gen_options(fuzz, fuzz_args.gen);
  fuzz->add_option("--emit", fuzz_args.emit_dir, "Write term_<i>.lam files into this directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInputError;
  }

  if (*check) return run_check(check_input, out, err);
  if (*eval) return run_eval(eval_args, out, err);
  if (*diff) return run_diff_command(diff_args, out, err);
  if (*fuzz) return run_fuzz(fuzz_args, out, err);
  return kInputError;
}

}  // namespace stlc::cli
