#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include <phasekit/phasekit.hpp>

namespace pkcli {

using nlohmann::json;
namespace pk = phasekit;

// Everything shared by the subcommands. Populated by CLI11 from flags and the
// optional TOML config file (flags win).
struct RunConfig {
  double m = 1.0;
  double omega = 1.0;
  std::string sigma = "matched"; // a number, or "matched" for 1/sqrt(2 m omega)
  int D = 32;
  std::string grid = "auto";     // auto | off | H | HQ,HP
  double spacing = 0.05;
  std::string generator = "coherent"; // coherent | fock_mixture:w0,w1,... | matrix_file:PATH
  std::string out;               // run directory; default phasekit-runs/<command>-<hash>
  std::uint64_t seed = 0;

  pk::OscParams params() const; // validated
  json to_json() const;
};

pk::FrameSpec make_frame(const RunConfig& cfg);
pk::FrameSpec make_frame(const RunConfig& cfg, int D); // same generator, other truncation
// Throws InadequateGridError for "off".
pk::PhaseGrid make_grid(const RunConfig& cfg, const pk::FrameSpec& frame);

// fock:n | coherent:q,p | matrix_file:PATH | random | random_pure
struct State {
  std::string spec;
  pk::CMatrix W;
  std::optional<pk::CVector> psi; // set for pure states
};
State make_state(const std::string& spec, const RunConfig& cfg);

std::vector<double> parse_list(const std::string& text, const std::string& what);

// One directory per run. Files are written in full and their paths echoed on stdout;
// manifest.json is written last.
class RunDir {
public:
  RunDir(const RunConfig& cfg, const std::string& command, const json& args);
  std::filesystem::path write(const std::string& name, const std::string& contents);
  void finish();

private:
  std::filesystem::path dir_;
  json manifest_;
  std::vector<std::string> files_;
};

std::uint64_t fnv1a(const std::string& s);

} // namespace pkcli
