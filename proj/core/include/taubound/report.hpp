#pragma once

#include <cstdint>
#include <fstream>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

namespace taubound {

/// Structured outcome of a verification pipeline or brute-force suite.
struct VerificationReport {
  std::string id;
  nlohmann::json parameters = nlohmann::json::object();
  bool confirmed = false;
  bool partial = false;   // some guarded stage was skipped
  std::vector<nlohmann::json> witnesses;
  nlohmann::json exhaustion = nlohmann::json::object();
  std::vector<std::string> notes;
  double wall_seconds = 0.0;
  unsigned digits = 0;

  nlohmann::json to_json() const;
  static VerificationReport from_json(const nlohmann::json& j);
};

/// Append-only newline-delimited JSON checkpoint log; interrupted long scans
/// resume by skipping boxes already recorded as done.
class CheckpointLog {
 public:
  CheckpointLog() = default;
  explicit CheckpointLog(std::string path);

  bool enabled() const { return !path_.empty(); }
  bool completed(const std::string& phase, const std::string& box_id) const;
  void record(const std::string& phase, const std::string& box_id, const std::string& status,
              const nlohmann::json& best_witness);

 private:
  std::string path_;
  std::set<std::string> done_;
};

}  // namespace taubound
