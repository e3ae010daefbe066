#include "report.hpp"

#include <algorithm>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace groupoidkit::cli {

bool Report::ok() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.ok; });
}

std::string digest(const std::vector<std::string>& inputs) {
  std::uint64_t h = 14695981039346656037ull;
  for (const auto& s : inputs) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 1099511628211ull;
    }
    h ^= 0xff;
    h *= 1099511628211ull;
  }
  std::ostringstream out;
  out << std::hex << std::setw(16) << std::setfill('0') << h;
  return out.str();
}

void print_text(std::ostream& out, const Report& r) {
  out << "command: " << r.command << '\n';
  out << "inputs: " << digest(r.inputs) << '\n';
  for (const auto& l : r.lines) out << l << '\n';
  for (const auto& c : r.checks) {
    out << (c.ok ? "PASS " : "FAIL ") << c.name;
    if (!c.detail.empty()) out << ": " << c.detail;
    out << '\n';
  }
  if (!r.checks.empty()) out << (r.ok() ? "all checks passed" : "some checks failed") << '\n';
}

void print_json(std::ostream& out, const Report& r) {
  Json j;
  j["command"] = r.command;
  j["inputs_digest"] = digest(r.inputs);
  j["result"] = r.result;
  Json checks = Json::array();
  for (const auto& c : r.checks) {
    Json item{{"name", c.name}, {"pass", c.ok}};
    if (!c.detail.empty()) item["witness"] = c.detail;
    checks.push_back(std::move(item));
  }
  j["checks"] = std::move(checks);
  j["ok"] = r.ok();
  out << j.dump(2) << '\n';
}

}  // namespace groupoidkit::cli
