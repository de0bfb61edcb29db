// Acceptance runner: one PASS/FAIL line per criterion, nonzero exit if any fails.
// Pass --verbose for the per-check table.

#include <cstring>
#include <iostream>

#include "ruled/verify/acceptance.hpp"

int main(int argc, char** argv) {
  const bool verbose = argc > 1 && std::strcmp(argv[1], "--verbose") == 0;
  try {
    const auto results = ruled::verify::run_acceptance(ruled::verify::AcceptanceOptions{});
    if (verbose) ruled::verify::print_table(std::cout, results);
    ruled::verify::print_summary(std::cout, results);
    for (const auto& r : results)
      if (!r.passed()) return 1;
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "acceptance run aborted: " << e.what() << '\n';
    return 1;
  }
}
