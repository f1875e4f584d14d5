#include "sflopt/decision.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace sflopt {

std::vector<int> Assignment::channels_main(int client) const {
  std::vector<int> out;
  for (std::size_t i = 0; i < owner_main.size(); ++i) {
    if (owner_main[i] == client) out.push_back(static_cast<int>(i));
  }
  return out;
}

std::vector<int> Assignment::channels_fed(int client) const {
  std::vector<int> out;
  for (std::size_t i = 0; i < owner_fed.size(); ++i) {
    if (owner_fed[i] == client) out.push_back(static_cast<int>(i));
  }
  return out;
}

namespace {

int max_owner(const std::vector<int>& owners) {
  int m = -1;
  for (int o : owners) m = std::max(m, o);
  return m;
}

nlohmann::json per_client_lists(const std::vector<int>& owners) {
  const int k_clients = max_owner(owners) + 1;
  std::vector<std::vector<int>> lists(static_cast<std::size_t>(k_clients));
  for (std::size_t i = 0; i < owners.size(); ++i) {
    lists[static_cast<std::size_t>(owners[i])].push_back(static_cast<int>(i));
  }
  return nlohmann::json(lists);
}

std::vector<int> owners_from_lists(const nlohmann::json& lists, const char* what) {
  std::size_t total = 0;
  for (const auto& l : lists) total += l.size();
  std::vector<int> owners(total, -1);
  for (std::size_t k = 0; k < lists.size(); ++k) {
    for (const auto& idx : lists[k]) {
      const auto i = idx.get<std::size_t>();
      if (i >= owners.size() || owners[i] != -1) {
        throw std::runtime_error(std::string("decision: malformed ") + what + " channel lists");
      }
      owners[i] = static_cast<int>(k);
    }
  }
  return owners;
}

}  // namespace

std::string decision_to_json(const Decision& d) {
  nlohmann::json j;
  j["assignment"]["main"] = per_client_lists(d.assignment.owner_main);
  j["assignment"]["fed"] = per_client_lists(d.assignment.owner_fed);
  j["psd_main_w_hz"] = d.psd_main_w_hz;
  j["psd_fed_w_hz"] = d.psd_fed_w_hz;
  j["split_point"] = d.split.split_point;
  j["rank"] = d.rank;
  return j.dump(2);
}

Decision decision_from_json(const std::string& json_text) {
  const auto j = nlohmann::json::parse(json_text);
  Decision d;
  d.assignment.owner_main = owners_from_lists(j.at("assignment").at("main"), "main");
  d.assignment.owner_fed = owners_from_lists(j.at("assignment").at("fed"), "fed");
  d.psd_main_w_hz = j.at("psd_main_w_hz").get<std::vector<double>>();
  d.psd_fed_w_hz = j.at("psd_fed_w_hz").get<std::vector<double>>();
  d.split.split_point = j.at("split_point").get<int>();
  d.rank = j.at("rank").get<int>();
  return d;
}

Decision load_decision(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("decision: cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return decision_from_json(buf.str());
}

void save_decision(const Decision& d, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("decision: cannot write '" + path + "'");
  out << decision_to_json(d) << "\n";
}

}  // namespace sflopt
