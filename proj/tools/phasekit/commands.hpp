#pragma once

#include <string>
#include <vector>

#include "run.hpp"

namespace pkcli {

struct CommandArgs {
  std::string state = "fock:0";
  std::string symbols = "Q,P,Q2,P2,H";
  int tiles = 0; // 0: D + 2 per axis
  std::vector<std::string> cells;
  std::string input;
  std::string truth;
  std::string times = "0,1";
  std::string suite = "all";
};

int cmd_density(const RunConfig& cfg, const CommandArgs& a);
int cmd_marginals(const RunConfig& cfg, const CommandArgs& a);
int cmd_expect(const RunConfig& cfg, const CommandArgs& a);
int cmd_effects(const RunConfig& cfg, const CommandArgs& a);
int cmd_reconstruct(const RunConfig& cfg, const CommandArgs& a);
int cmd_evolve(const RunConfig& cfg, const CommandArgs& a);
int cmd_bargmann(const RunConfig& cfg, const CommandArgs& a);
int cmd_check(const RunConfig& cfg, const CommandArgs& a);

// check suites; each appends to `report["checks"]`
json run_checks(const RunConfig& cfg, const std::string& suite);

} // namespace pkcli
