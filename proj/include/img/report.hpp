#ifndef IMG_REPORT_HPP
#define IMG_REPORT_HPP

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

namespace img {

struct Check {
  std::string id;
  std::string claim;
  bool passed = false;
  std::string detail;
};

/// Ordered list of pass/fail checks produced by the verification routines.
struct Report {
  std::string title;
  std::vector<Check> checks;

  void add(std::string id, std::string claim, bool passed, std::string detail = {}) {
    checks.push_back({std::move(id), std::move(claim), passed, std::move(detail)});
  }

  bool allPassed() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
  }

  const Check* find(const std::string& id) const {
    for (const auto& c : checks)
      if (c.id == id) return &c;
    return nullptr;
  }
};

}  // namespace img

#endif  // IMG_REPORT_HPP
