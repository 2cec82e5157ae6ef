#include "taubound/report.hpp"

#include <stdexcept>

namespace taubound {

nlohmann::json VerificationReport::to_json() const {
  return nlohmann::json{
      {"id", id},
      {"parameters", parameters},
      {"confirmed", confirmed},
      {"partial", partial},
      {"witnesses", witnesses},
      {"exhaustion", exhaustion},
      {"notes", notes},
      {"wall_seconds", wall_seconds},
      {"digits", digits},
  };
}

VerificationReport VerificationReport::from_json(const nlohmann::json& j) {
  VerificationReport r;
  r.id = j.at("id").get<std::string>();
  r.parameters = j.at("parameters");
  r.confirmed = j.at("confirmed").get<bool>();
  r.partial = j.at("partial").get<bool>();
  r.witnesses = j.at("witnesses").get<std::vector<nlohmann::json>>();
  r.exhaustion = j.at("exhaustion");
  r.notes = j.at("notes").get<std::vector<std::string>>();
  r.wall_seconds = j.at("wall_seconds").get<double>();
  r.digits = j.at("digits").get<unsigned>();
  return r;
}

CheckpointLog::CheckpointLog(std::string path) : path_(std::move(path)) {
  if (path_.empty()) return;
  std::ifstream in(path_);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded()) continue;
    if (j.value("status", "") == "done") {
      done_.insert(j.value("phase", "") + "/" + j.value("box_id", ""));
    }
  }
}

bool CheckpointLog::completed(const std::string& phase, const std::string& box_id) const {
  return done_.count(phase + "/" + box_id) > 0;
}

void CheckpointLog::record(const std::string& phase, const std::string& box_id,
                           const std::string& status, const nlohmann::json& best_witness) {
  if (path_.empty()) return;
  std::ofstream out(path_, std::ios::app);
  if (!out) throw std::runtime_error("CheckpointLog: cannot open " + path_);
  nlohmann::json j{
      {"phase", phase}, {"box_id", box_id}, {"status", status}, {"best_witness", best_witness}};
  out << j.dump() << '\n';
  if (status == "done") done_.insert(phase + "/" + box_id);
}

}  // namespace taubound
