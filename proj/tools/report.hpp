#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

#include "groupoidkit/bgr.hpp"

namespace groupoidkit::cli {

using Json = nlohmann::ordered_json;

// What one command prints. `lines` is the human-readable body; `result` the
// same content for --format json.
struct Report {
  std::string command;
  std::vector<std::string> inputs;
  std::vector<std::string> lines;
  Json result = Json::object();
  std::vector<CheckResult> checks;

  void check(std::string name, bool ok, std::string witness = {}) {
    checks.push_back({std::move(name), ok, std::move(witness)});
  }
  void add_checks(const std::vector<CheckResult>& more) {
    checks.insert(checks.end(), more.begin(), more.end());
  }
  bool ok() const;
};

// FNV-1a over the inputs, as 16 hex digits.
std::string digest(const std::vector<std::string>& inputs);

void print_text(std::ostream& out, const Report& r);
void print_json(std::ostream& out, const Report& r);

}  // namespace groupoidkit::cli
