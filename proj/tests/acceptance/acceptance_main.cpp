// Runs every acceptance criterion and prints one PASS/FAIL line each.
// Usage: fracgrad_acceptance [criterion ...]

#include <cstdlib>
#include <iostream>
#include <string>

#include "fracgrad/acceptance.hpp"

int main(int argc, char** argv) {
  fracgrad::acceptance::Options options;
  for (int i = 1; i < argc; ++i) options.only.push_back(std::atoi(argv[i]));
  options.on_result = [](const fracgrad::acceptance::CriterionResult& r) {
    std::cout << fracgrad::acceptance::format_line(r) << std::endl;
  };
  int failed = 0;
  try {
    for (const auto& r : fracgrad::acceptance::run(options)) failed += r.passed ? 0 : 1;
  } catch (const std::exception& e) {
    std::cout << "FAIL  acceptance run aborted: " << e.what() << std::endl;
    return 1;
  }
  std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed") << std::endl;
  return failed == 0 ? 0 : 1;
}
