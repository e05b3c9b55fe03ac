#include "rzlmi/verdict.hpp"

#include <atomic>

#include "rzlmi/sampling.hpp"

namespace rzlmi {

namespace {
std::atomic<int> g_threads{0};
}

int default_threads() {
  const int n = g_threads.load();
  if (n > 0) return n;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw ? static_cast<int>(hw) : 1;
}

void set_default_threads(int n) { g_threads.store(n); }

std::string to_string(Status s) {
  switch (s) {
    case Status::kPass:
      return "pass";
    case Status::kFail:
      return "fail";
    case Status::kInconclusive:
      return "inconclusive";
  }
  return "?";
}

int exit_code(Status s) {
  switch (s) {
    case Status::kPass:
      return 0;
    case Status::kFail:
      return 1;
    case Status::kInconclusive:
      return 2;
  }
  return 3;
}

nlohmann::json Witness::to_json() const {
  nlohmann::json j = nlohmann::json::object();
  if (!x0.empty()) j["x0"] = x0;
  if (!dir.empty()) j["dir"] = dir;
  if (!point.empty()) j["point"] = point;
  if (!detail.empty()) j["detail"] = detail;
  j["value"] = value;
  return j;
}

nlohmann::json VerdictReport::to_json() const {
  nlohmann::json j;
  j["check"] = check;
  j["status"] = to_string(status);
  j["tested"] = tested;
  j["tol"] = tol;
  j["max_residual"] = max_residual;
  if (witness) j["witness"] = witness->to_json();
  if (!message.empty()) j["message"] = message;
  if (!extra.empty()) j["extra"] = extra;
  return j;
}

std::vector<double> real_parts(const std::vector<Complex>& v) {
  std::vector<double> out;
  out.reserve(v.size());
  for (const auto& z : v) out.push_back(z.real());
  return out;
}

}  // namespace rzlmi
