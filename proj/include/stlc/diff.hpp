#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <cstddef>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "stlc/krivine.hpp"
#include "stlc/reduction.hpp"
#include "stlc/refocus.hpp"

namespace stlc {

/// Outcome of one evaluator on one term.
struct MachineRun {
  std::optional<Value> value;
  std::optional<StepLog> log;
  /// Set when the evaluator threw; `fuel_exhausted` marks the budget case.
  std::optional<std::string> error;
  bool fuel_exhausted = false;

  [[nodiscard]] bool ok() const noexcept { return value.has_value(); }
  [[nodiscard]] std::size_t steps() const noexcept { return log ? log->total() : 0; }
};

struct DiffRecord {
  std::size_t index = 0;
  std::string term;
  MachineRun smallstep;
  MachineRun refocus;
  MachineRun krivine;
  bool smallstep_refocus_value = false;
  bool refocus_krivine_value = false;
  bool smallstep_refocus_log = false;

  [[nodiscard]] bool agree() const noexcept {
    return smallstep_refocus_value && refocus_krivine_value && smallstep_refocus_log;
  }
  [[nodiscard]] bool fuel_exhausted() const noexcept {
    return smallstep.fuel_exhausted || refocus.fuel_exhausted || krivine.fuel_exhausted;
  }

  [[nodiscard]] nlohmann::json to_json() const {
    nlohmann::json values = nlohmann::json::object();
    nlohmann::json steps = nlohmann::json::object();
    nlohmann::json errors = nlohmann::json::object();
    const std::array<std::pair<const char*, const MachineRun*>, 3> runs{
        {{"smallstep", &smallstep}, {"refocus", &refocus}, {"krivine", &krivine}}};
    for (const auto& [name, run] : runs) {
      values[name] = run->value ? describe_value(*run->value) : nullptr;
      steps[name] = run->steps();
      if (run->error) errors[name] = *run->error;
    }
    nlohmann::json j{{"index", index},
                     {"term", term},
                     {"values", std::move(values)},
                     {"steps", std::move(steps)},
                     {"agree", agree()},
                     {"flags",
                      {{"value_smallstep_refocus", smallstep_refocus_value},
                       {"value_refocus_krivine", refocus_krivine_value},
                       {"log_smallstep_refocus", smallstep_refocus_log}}}};
    if (!errors.empty()) j["errors"] = std::move(errors);
    return j;
  }
};

struct DiffReport {
  std::vector<DiffRecord> records;

  [[nodiscard]] std::size_t passed() const {
    return static_cast<std::size_t>(std::count_if(records.begin(), records.end(),
                                                  [](const DiffRecord& r) { return r.agree(); }));
  }
  [[nodiscard]] std::size_t failed() const { return records.size() - passed(); }
  [[nodiscard]] bool any_fuel_exhausted() const {
    return std::any_of(records.begin(), records.end(), [](const DiffRecord& r) { return r.fuel_exhausted(); });
  }

  [[nodiscard]] nlohmann::json to_json() const {
    nlohmann::json terms = nlohmann::json::array();
    for (const auto& r : records) terms.push_back(r.to_json());
    return nlohmann::json{{"terms", std::move(terms)}, {"passed", passed()}, {"failed", failed()}};
  }
};

struct DiffOptions {
  std::size_t fuel = kDefaultFuel;
  EvalOptions eval;
  /// Worker threads; 0 or 1 runs inline.
  std::size_t jobs = 1;
};

namespace detail {

template <typename F>
MachineRun run_machine(F&& evaluate) {
  MachineRun run;
  try {
    EvalResult r = evaluate();
    run.value = std::move(r.value);
    run.log = std::move(r.log);
  } catch (const FuelExhausted& e) {
    run.error = e.what();
    run.fuel_exhausted = true;
    run.log = e.partial_log();
  } catch (const std::exception& e) {
    run.error = e.what();
  }
  return run;
}

inline bool same_value(const MachineRun& a, const MachineRun& b) {
  return a.value && b.value && *a.value == *b.value;
}

}  // namespace detail

/// Runs all three evaluators on one closed term and compares them.
inline DiffRecord diff_term(const Term& t, std::size_t index, const DiffOptions& opts = {}) {
  DiffRecord rec;
  rec.index = index;
  rec.term = print_term(t);
  const Closed start = Closed::closure(t, Env{});
  rec.smallstep = detail::run_machine([&] { return evaluate_smallstep(start, opts.fuel, opts.eval); });
  rec.refocus = detail::run_machine([&] { return evaluate_refocus(start, opts.fuel, opts.eval); });
  rec.krivine = detail::run_machine([&] { return evaluate_krivine(t, opts.fuel, opts.eval); });
  rec.smallstep_refocus_value = detail::same_value(rec.smallstep, rec.refocus);
  rec.refocus_krivine_value = detail::same_value(rec.refocus, rec.krivine);
  rec.smallstep_refocus_log = rec.smallstep.ok() && rec.refocus.ok() &&
                              rec.smallstep.log->kinds() == rec.refocus.log->kinds();
  return rec;
}

/// Differential run over a batch. Per-term failures, fuel exhaustion
/// included, are recorded rather than thrown. Records keep input order.
inline DiffReport run_diff(const std::vector<Term>& terms, const DiffOptions& opts = {}) {
  detail::require_fuel(opts.fuel);
  DiffReport report;
  report.records.resize(terms.size());
  const std::size_t jobs = std::min<std::size_t>(std::max<std::size_t>(opts.jobs, 1), std::max<std::size_t>(terms.size(), 1));
  if (jobs == 1) {
    for (std::size_t i = 0; i < terms.size(); ++i) report.records[i] = diff_term(terms[i], i, opts);
    return report;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> workers;
  workers.reserve(jobs);
  for (std::size_t w = 0; w < jobs; ++w) {
    workers.emplace_back([&] {
      for (std::size_t i = next.fetch_add(1); i < terms.size(); i = next.fetch_add(1))
        report.records[i] = diff_term(terms[i], i, opts);
    });
  }
  for (auto& th : workers) th.join();
  return report;
}

inline DiffReport run_diff(const std::vector<Term>& terms, std::size_t fuel) {
  DiffOptions opts;
  opts.fuel = fuel;
  return run_diff(terms, opts);
}

}  // namespace stlc
