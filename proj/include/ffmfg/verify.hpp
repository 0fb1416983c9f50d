#pragma once

// Self-check suite behind `ffmfg verify`: closed forms against independent
// numeric oracles plus randomized property checks, grouped by topic.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace ffmfg::verify {

struct Options {
  double entropy_tol = 1e-9;  // relative residual of the entropy-flux condition
  std::uint64_t seed = 20240601;
};

struct GroupResult {
  std::string name;
  std::size_t checks = 0;
  std::size_t failures = 0;
  std::optional<std::string> witness;  // first failing case

  bool passed() const { return failures == 0; }
};

std::vector<GroupResult> run_groups(const Options& options);

/// Prints one PASS/FAIL line per group; returns 0 iff all pass, else 1.
int run_verify(const Options& options, std::ostream& out);

}  // namespace ffmfg::verify
