#include "run.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <Eigen/Core>

namespace pkcli {

namespace {

bool starts_with(const std::string& s, const std::string& prefix) { return s.rfind(prefix, 0) == 0; }

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw pk::InvalidArgument("cannot read '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

double parse_double(const std::string& s, const std::string& what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (...) {
    throw pk::InvalidArgument(what + ": '" + s + "' is not a number");
  }
  if (used != s.size()) throw pk::InvalidArgument(what + ": '" + s + "' is not a number");
  return v;
}

// Operator or vector JSON; a vector yields a pure state.
State load_state_file(const std::string& path, int D) {
  const std::string text = read_file(path);
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw pk::InvalidArgument("malformed state file '" + path + "': " + e.what());
  }
  State s;
  if (j.contains("coeffs")) {
    pk::CVector v = pk::io::vector_from_json(text);
    if (v.size() != D) throw pk::InvalidArgument("state file dimension does not match D");
    if (v.norm() == 0.0) throw pk::InvalidArgument("state vector is zero");
    v /= v.norm();
    s.W = pk::projector(v);
    s.psi = v;
  } else {
    s.W = pk::io::operator_from_json(text).matrix;
    if (s.W.rows() != D) throw pk::InvalidArgument("state file dimension does not match D");
    pk::require_density(s.W, "state file");
  }
  return s;
}

} // namespace

std::vector<double> parse_list(const std::string& text, const std::string& what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_double(item, what));
  if (out.empty()) throw pk::InvalidArgument(what + ": empty list");
  return out;
}

pk::OscParams RunConfig::params() const {
  pk::OscParams p{m, omega, 0.0};
  if (!(m > 0.0) || !(omega > 0.0)) throw pk::InvalidArgument("m and omega must be positive");
  p.sigma = sigma == "matched" ? p.ladder_width() : parse_double(sigma, "sigma");
  p.validate();
  if (D < 2) throw pk::InvalidArgument("D must be at least 2");
  if (!(spacing > 0.0)) throw pk::InvalidArgument("spacing must be positive");
  return p;
}

json RunConfig::to_json() const {
  const pk::OscParams p = params();
  return {{"m", m},       {"omega", omega},         {"sigma", p.sigma}, {"D", D},
          {"grid", grid}, {"spacing", spacing},     {"generator", generator},
          {"seed", seed}, {"matched", p.matched()}};
}

pk::FrameSpec make_frame(const RunConfig& cfg) { return make_frame(cfg, cfg.D); }

pk::FrameSpec make_frame(const RunConfig& cfg, int D) {
  const pk::OscParams p = cfg.params();
  const std::string& g = cfg.generator;
  if (g == "coherent") return pk::FrameSpec::coherent(p, D);
  if (starts_with(g, "fock_mixture:"))
    return pk::FrameSpec::fock_mixture(p, D, parse_list(g.substr(13), "fock_mixture weights"));
  if (starts_with(g, "matrix_file:")) {
    const auto rec = pk::io::operator_from_json(read_file(g.substr(12)));
    return pk::FrameSpec::from_generator(p, D, rec.matrix);
  }
  throw pk::InvalidArgument("unknown generator '" + g + "' (coherent | fock_mixture:w,... | matrix_file:PATH)");
}

pk::PhaseGrid make_grid(const RunConfig& cfg, const pk::FrameSpec& frame) {
  if (cfg.grid == "auto") return pk::auto_grid(frame, cfg.spacing);
  if (cfg.grid == "off") throw pk::InadequateGridError("grid is off: nothing to sample on");
  const auto h = parse_list(cfg.grid, "grid half-widths");
  if (h.size() > 2 || h[0] <= 0.0 || h.back() <= 0.0)
    throw pk::InvalidArgument("grid must be auto, off, H or HQ,HP with positive half-widths");
  return pk::PhaseGrid::centered(h[0], h.back(), cfg.spacing);
}

State make_state(const std::string& spec, const RunConfig& cfg) {
  const pk::OscParams p = cfg.params();
  const int D = cfg.D;
  State s;
  if (starts_with(spec, "fock:")) {
    const double n = parse_double(spec.substr(5), "fock level");
    if (n < 0 || n >= D || n != static_cast<int>(n)) throw pk::InvalidArgument("fock level must be in 0..D-1");
    s.psi = pk::basis_vector(static_cast<int>(n), D);
  } else if (starts_with(spec, "coherent:")) {
    const auto qp = parse_list(spec.substr(9), "coherent state");
    if (qp.size() != 2) throw pk::InvalidArgument("coherent state needs q,p");
    // U_qp phi_0, renormalized after truncation
    const pk::CVector c = pk::displacement_block(qp[0], qp[1], p, D, 1).col(0);
    s.psi = c / c.norm();
  } else if (starts_with(spec, "matrix_file:")) {
    s = load_state_file(spec.substr(12), D);
  } else if (spec == "random") {
    // random states live on the trusted block so second moments stay exact
    pk::Rng rng(cfg.seed);
    s.W = pk::random_density(D, pk::trusted_block(D), rng);
  } else if (spec == "random_pure") {
    pk::Rng rng(cfg.seed);
    s.psi = pk::random_pure(D, pk::trusted_block(D), rng);
  } else {
    throw pk::InvalidArgument("unknown state '" + spec +
                              "' (fock:n | coherent:q,p | matrix_file:PATH | random | random_pure)");
  }
  if (s.psi) s.W = pk::projector(*s.psi);
  s.spec = spec;
  return s;
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

RunDir::RunDir(const RunConfig& cfg, const std::string& command, const json& args) {
  json config = cfg.to_json();
  config["command"] = command;
  config["args"] = args;
  const std::uint64_t hash = fnv1a(config.dump());
  char hex[17];
  std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(hash));
  dir_ = cfg.out.empty() ? std::filesystem::path("phasekit-runs") / (command + "-" + hex) : std::filesystem::path(cfg.out);
  std::filesystem::create_directories(dir_);
  manifest_ = {{"tool", "phasekit"},
               {"version", PHASEKIT_VERSION_STRING},
               {"command", command},
               {"config", config},
               {"config_hash", hex},
               {"libraries",
                {{"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                               std::to_string(EIGEN_MINOR_VERSION)},
                 {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                                       std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                                       std::to_string(NLOHMANN_JSON_VERSION_PATCH)}}}};
}

std::filesystem::path RunDir::write(const std::string& name, const std::string& contents) {
  const auto path = dir_ / name;
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << contents;
  out.close();
  if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
  files_.push_back(name);
  std::cout << path.string() << '\n';
  return path;
}

void RunDir::finish() {
  manifest_["files"] = files_;
  write("manifest.json", manifest_.dump(2) + "\n");
}

} // namespace pkcli
