#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "rzlmi/scalar.hpp"

namespace rzlmi {

enum class Status { kPass, kFail, kInconclusive };
std::string to_string(Status s);
int exit_code(Status s);  // 0 pass, 1 fail, 2 inconclusive

// Where a check failed: a line (x0, dir), a point, or both.
struct Witness {
  std::vector<double> x0;
  std::vector<double> dir;
  std::vector<double> point;
  std::string detail;
  double value = 0.0;
  nlohmann::json to_json() const;
};

struct VerdictReport {
  std::string check;
  Status status = Status::kPass;
  int tested = 0;
  double tol = 0.0;
  double max_residual = 0.0;
  std::optional<Witness> witness;
  std::string message;
  nlohmann::json extra = nlohmann::json::object();

  bool passed() const { return status == Status::kPass; }
  nlohmann::json to_json() const;
};

std::vector<double> real_parts(const std::vector<Complex>& v);

}  // namespace rzlmi
