// Acceptance suite: evaluates every criterion at its pinned tolerance and
// prints one pass/fail line each. Exits nonzero if any criterion fails.

#include <cstdio>
#include <cstdlib>
#include <cstring>

#include "blfquad/verification.hpp"

int main(int argc, char** argv) {
  blfquad::verification::Options opt;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--fast") == 0) opt.fast = true;
    if (std::strcmp(argv[i], "--seed") == 0 && i + 1 < argc)
      opt.seed = std::strtoul(argv[++i], nullptr, 10);
  }

  int failures = 0;
  for (const auto& c : blfquad::verification::acceptance_criteria(opt)) {
    std::printf("[%s] criterion %s -- %s\n", c.pass ? "PASS" : "FAIL",
                c.name.c_str(), c.detail.c_str());
    if (!c.pass) ++failures;
  }
  if (failures > 0) {
    std::printf("%d criterion(s) failed\n", failures);
    return 1;
  }
  std::printf("all acceptance criteria passed\n");
  return 0;
}
