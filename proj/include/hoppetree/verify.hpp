#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace hoppetree::verify {

enum class Tier { exact, statistical, all };

Tier tier_from_name(std::string_view name);

struct VerifyOptions {
  Tier tier = Tier::all;
  std::uint64_t seed = 1;
  int workers = 0;
  // Test hook: perturbs one exact check so the harness must report failure.
  bool inject_fault = false;
};

struct CheckResult {
  int criterion;  // acceptance criterion this check belongs to
  std::string name;
  double observed;
  double budget;
  std::string comparator;  // "<=", ">="
  bool pass;
  std::string note;
};

std::vector<CheckResult> run_verification(const VerifyOptions& options);

// Runs only the checks belonging to one acceptance criterion (1..13).
std::vector<CheckResult> run_criterion(int criterion, const VerifyOptions& options);

// One line per check: name, observed, budget, PASS/FAIL.
void print_check(std::ostream& os, const CheckResult& check);

bool all_passed(const std::vector<CheckResult>& checks);

}  // namespace hoppetree::verify
