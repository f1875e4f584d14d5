#pragma once

#include <string>
#include <vector>

namespace sflopt {

// Subchannel ownership for both links. Storing the owning client per
// subchannel makes exclusivity (one owner per subchannel) hold by
// construction.
struct Assignment {
  std::vector<int> owner_main;  // length M, value = client index
  std::vector<int> owner_fed;   // length N

  // Subchannel indices owned by a client, ascending.
  std::vector<int> channels_main(int client) const;
  std::vector<int> channels_fed(int client) const;
};

// Contiguous split: layers 1..split_point run on the client, the rest on the
// main server. The monotone layer-placement constraint holds by construction;
// valid values are 1..L-1 so each side keeps at least one layer.
struct SplitDecision {
  int split_point = 1;
};

// One candidate solution of the joint problem.
struct Decision {
  Assignment assignment;
  std::vector<double> psd_main_w_hz;  // per main subchannel, W/Hz
  std::vector<double> psd_fed_w_hz;   // per fed subchannel
  SplitDecision split;
  int rank = 1;
};

// JSON round-trip used by the CLI (`optimize --out` / `simulate --decision`).
std::string decision_to_json(const Decision& d);
Decision decision_from_json(const std::string& json_text);
Decision load_decision(const std::string& path);
void save_decision(const Decision& d, const std::string& path);

}  // namespace sflopt
