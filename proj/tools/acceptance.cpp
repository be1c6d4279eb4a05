// Acceptance report: one PASS/FAIL line per acceptance criterion, numbered 1 to 7.
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fmt/format.h>
#include <spdlog/spdlog.h>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "critmass/battery.hpp"

namespace {

using critmass::Check;

struct Line {
  int number;
  std::string title;
  bool passed;
  std::string detail;
};

std::string failures(const std::vector<Check>& checks) {
  std::string out;
  for (const Check& c : checks)
    if (!c.passed) out += fmt::format("{}{} [{}]", out.empty() ? "" : "; ", c.name, c.detail);
  return out;
}

Line from_checks(int number, std::string title, const std::vector<Check>& checks) {
  const std::string bad = failures(checks);
  return {number, std::move(title), bad.empty(),
          bad.empty() ? fmt::format("{} checks passed", checks.size()) : bad};
}

void print(const Line& l) {
  fmt::print("{} [{}] {}: {}\n", l.passed ? "PASS" : "FAIL", l.number, l.title, l.detail);
  std::fflush(stdout);
}

}  // namespace

int main() {
  spdlog::set_level(spdlog::level::warn);
  if (const char* level = std::getenv("CRITMASS_LOG")) spdlog::set_level(spdlog::level::from_str(level));

  critmass::Battery battery(critmass::BatteryConfig{});
  std::vector<Line> lines;
  auto report = [&](Line l) {
    print(l);
    lines.push_back(std::move(l));
  };

  report(from_checks(1, "conservation and structure", battery.conservation()));
  report(from_checks(2, "closed-form oracles", battery.oracles()));
  report(from_checks(3, "constant orderings", battery.constants()));
  report(from_checks(4, "intersection-point dichotomy at n=256 and n=512", battery.dichotomy()));

  // The literal parameter point comes first; the two trailing checks are companions at interior points.
  const std::vector<Check> t12 = battery.theorem12();
  const std::vector<Check> literal(t12.begin(), t12.begin() + 3);
  report(from_checks(5, "off-intersection bookkeeping at (3, 1.5, 1.25)", literal));
  for (auto it = t12.begin() + 3; it != t12.end(); ++it)
    fmt::print("     companion {}: {} [{}]\n", it->passed ? "pass" : "fail", it->name, it->detail);

  report(from_checks(6, "negative-energy construction", battery.negative_energy()));

  const auto log = std::filesystem::temp_directory_path() / "critmass_acceptance_verify.txt";
  const std::string command = fmt::format("\"{}\" verify > \"{}\" 2>&1", CRITMASS_CLI, log.string());
  const auto start = std::chrono::steady_clock::now();
  const int status = std::system(command.c_str());
  const double minutes = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count() / 60.0;
  const int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  report({7, "verify exits 0 in under 15 minutes", code == 0 && minutes < 15.0,
          fmt::format("exit {} after {:.1f} min, log {}", code, minutes, log.string())});

  std::size_t passed = 0;
  for (const Line& l : lines) passed += l.passed;
  fmt::print("{} of {} criteria passed\n", passed, lines.size());
  return passed == lines.size() ? 0 : 1;
}
