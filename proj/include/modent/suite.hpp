#pragma once

// Library-wide property batteries in one deterministic sweep: each row
// names a module and a property, runs a seeded batch of trials, and keeps
// the worst margin seen (oriented so larger means safer). The CSV emitter
// fixes the column order and %.17g formatting, so a fixed seed yields a
// byte-identical report.

#include <cstdint>
#include <string>
#include <vector>

namespace modent {

struct SuiteConfig {
  std::uint64_t seed = 20260814;
  int trials = 10;                   // base batch size per battery
  std::vector<int> dims = {2, 3, 4, 5};
  double margin_tol = 1e-8;          // slack for inequality margins
  bool inject_bug = false;  // self test: flips one inequality before judging
};

struct PropertyResult {
  std::string module;
  std::string property;
  int trials = 0;
  double worst_margin = 0;
  bool pass = false;
  std::string replay;  // how to reproduce a failure; empty on pass
};

std::vector<PropertyResult> run_suite(const SuiteConfig& cfg);

bool all_pass(const std::vector<PropertyResult>& rows);

// Header module,property,trials,worst_margin,pass; one row per property.
std::string suite_to_csv(const std::vector<PropertyResult>& rows);

}  // namespace modent
