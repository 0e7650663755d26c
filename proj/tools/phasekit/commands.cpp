#include "commands.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>

namespace pkcli {

namespace {

json cplx_json(pk::cplx v) { return json::array({v.real(), v.imag()}); }

json frame_json(const pk::FrameSpec& f, const RunConfig& cfg) {
  static const char* kinds[] = {"matched_coherent", "gaussian", "general"};
  return {{"generator", cfg.generator},
          {"kind", kinds[static_cast<int>(f.kind())]},
          {"generator_dim", f.generator_dim()},
          {"pure", f.pure()}};
}

json grid_obj(const pk::PhaseGrid& g) { return json::parse(pk::io::grid_json(g)); }

std::string csv(const pk::DensityField& rho) {
  std::ostringstream os;
  pk::io::write_density_csv(os, rho);
  return os.str();
}

std::string axis_csv(const pk::AxisGrid& axis, const std::vector<double>& v, const std::string& name) {
  std::ostringstream os;
  pk::io::write_axis_csv(os, axis, v, name);
  return os.str();
}

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

} // namespace

int cmd_density(const RunConfig& cfg, const CommandArgs& a) {
  const auto frame = make_frame(cfg);
  const auto grid = make_grid(cfg, frame);
  const State s = make_state(a.state, cfg);
  const auto rho = pk::husimi(s.W, frame, grid);
  const auto adequacy = pk::grid_adequacy(frame, grid);
  RunDir run(cfg, "density", {{"state", a.state}});
  run.write("density.csv", csv(rho));
  run.write("state.json", pk::io::operator_to_json(s.W, pk::OperatorKind::density, frame.params()) + "\n");
  run.write("density.json", dump({{"state", a.state},
                                  {"params", json::parse(pk::io::params_json(frame.params()))},
                                  {"D", cfg.D},
                                  {"frame", frame_json(frame, cfg)},
                                  {"grid", grid_obj(grid)},
                                  {"adequate", adequacy.adequate},
                                  {"boundary_max", adequacy.boundary_max},
                                  {"quadrature_sum", pk::quadrature_sum(rho)},
                                  {"max", *std::max_element(rho.values.begin(), rho.values.end())}}));
  run.finish();
  return 0;
}

int cmd_marginals(const RunConfig& cfg, const CommandArgs& a) {
  const auto frame = make_frame(cfg);
  const auto grid = make_grid(cfg, frame);
  const State s = make_state(a.state, cfg);
  const auto rho = pk::husimi(s.W, frame, grid);
  const auto [mq, mp] = pk::marginals(rho);
  const auto [eq, ep] = pk::confidence_functions(frame, cfg.spacing);
  const auto rep = pk::uncertainty_report(s.W, frame, grid);
  RunDir run(cfg, "marginals", {{"state", a.state}});
  run.write("marginal_q.csv", axis_csv(mq.axis, mq.values, "q"));
  run.write("marginal_p.csv", axis_csv(mp.axis, mp.values, "p"));
  run.write("confidence_q.csv", axis_csv(eq.axis, eq.values, "q"));
  run.write("confidence_p.csv", axis_csv(ep.axis, ep.values, "p"));
  json warn = json::array();
  for (const auto& w : mq.warnings) warn.push_back(w);
  run.write("marginals.json", dump({{"state", a.state},
                                    {"eta_q", {{"mean", eq.mean}, {"variance", eq.variance}}},
                                    {"eta_p", {{"mean", ep.mean}, {"variance", ep.variance}}},
                                    {"uncertainty", json::parse(pk::io::uncertainty_json(rep))},
                                    {"warnings", warn}}));
  run.finish();
  return 0;
}

int cmd_expect(const RunConfig& cfg, const CommandArgs& a) {
  const auto frame = make_frame(cfg);
  const auto grid = make_grid(cfg, frame);
  const State s = make_state(a.state, cfg);
  const auto rho = pk::husimi(s.W, frame, grid);
  json rows = json::array();
  for (const auto& sym : split(a.symbols)) {
    const auto f = pk::dequantizer_for(sym, frame);
    const auto c = (sym == "Q2" || sym == "P2" || sym == "H") ? pk::check_dequantizer(s.W, sym, frame, grid)
                                                              : pk::check_dequantizer(s.W, f, rho);
    rows.push_back({{"symbol", sym},
                    {"quantum", c.quantum},
                    {"classical", c.classical},
                    {"discrepancy", c.discrepancy},
                    {"dequantizer", json::parse(pk::io::dequantizer_to_json(f))}});
  }
  RunDir run(cfg, "expect", {{"state", a.state}, {"symbols", a.symbols}});
  run.write("expect.json", dump({{"state", a.state}, {"rows", rows}}));
  run.finish();
  return 0;
}

int cmd_effects(const RunConfig& cfg, const CommandArgs& a) {
  const auto frame = make_frame(cfg);
  const auto grid = make_grid(cfg, frame);
  std::vector<pk::Cell> cells;
  for (const auto& c : a.cells) {
    const auto v = parse_list(c, "cell");
    if (v.size() != 4) throw pk::InvalidArgument("cell needs q0,q1,p0,p1");
    cells.push_back({v[0], v[1], v[2], v[3]});
  }
  const bool tiled = cells.empty();
  if (tiled) cells = pk::tile_grid(grid, a.tiles > 0 ? a.tiles : cfg.D + 2);
  const auto set = pk::effect_of_region(cells, frame, grid);
  json list = json::array();
  for (std::size_t k = 0; k < cells.size(); ++k) {
    const auto& c = cells[k];
    list.push_back({{"cell", {c.q0, c.q1, c.p0, c.p1}},
                    {"effect", json::parse(pk::io::operator_to_json(set.effects[k], pk::OperatorKind::hermitian,
                                                                    frame.params()))}});
  }
  RunDir run(cfg, "effects", {{"tiles", a.tiles}, {"cells", a.cells}});
  run.write("effects.json", dump({{"grid", grid_obj(grid)}, {"effects", list}}));
  run.write("completeness.json", pk::io::completeness_json(pk::completeness_rank(set)) + "\n");
  run.write("fourier.json", pk::io::fourier_json(pk::fourier_criterion(frame, grid)) + "\n");
  run.finish();
  return 0;
}

int cmd_reconstruct(const RunConfig& cfg, const CommandArgs& a) {
  if (a.input.empty()) throw pk::InvalidArgument("reconstruct needs --input <density csv>");
  std::ifstream in(a.input);
  if (!in) throw pk::InvalidArgument("cannot read '" + a.input + "'");
  const auto rho = pk::io::read_density_csv(in);
  const auto frame = make_frame(cfg);
  pk::ReconstructionOptions opt;
  if (!a.truth.empty()) opt.truth = make_state("matrix_file:" + a.truth, cfg).W;
  json args = {{"input", a.input}, {"truth", a.truth}};
  try {
    const auto r = pk::reconstruct_state(rho, frame, opt);
    RunDir run(cfg, "reconstruct", args);
    run.write("reconstruction.json", pk::io::reconstruction_json(r, frame.params()) + "\n");
    run.write("state.json", pk::io::operator_to_json(r.W, pk::OperatorKind::density, frame.params()) + "\n");
    run.finish();
    std::cerr << "reconstructed D=" << cfg.D << " rank " << r.rank << ", residual " << r.residual_raw
              << (r.trace_distance ? ", trace distance " + pk::io::format_double(*r.trace_distance) : std::string()) << '\n';
  } catch (const pk::RankDeficiencyError& e) {
    RunDir run(cfg, "reconstruct", args);
    run.write("rank_report.json", dump({{"rank", e.rank()}, {"required", e.required()}, {"message", e.what()}}));
    run.finish();
    throw;
  }
  return 0;
}

int cmd_evolve(const RunConfig& cfg, const CommandArgs& a) {
  const auto frame = make_frame(cfg);
  const auto grid = make_grid(cfg, frame);
  const State s = make_state(a.state, cfg);
  const auto times = parse_list(a.times, "times");
  const auto series = pk::evolve_density(s.W, frame, grid, times);
  std::ostringstream os;
  os << "t,q,p,rho\n";
  json per_t = json::array();
  for (std::size_t k = 0; k < times.size(); ++k) {
    const auto& r = series[k];
    for (int j = 0; j < grid.np; ++j)
      for (int i = 0; i < grid.nq; ++i)
        os << pk::io::format_double(times[k]) << ',' << pk::io::format_double(grid.q(i)) << ','
           << pk::io::format_double(grid.p(j)) << ',' << pk::io::format_double(r.at(i, j)) << '\n';
    json row = {{"t", times[k]}, {"quadrature_sum", pk::quadrature_sum(r)}};
    if (frame.matched_coherent()) {
      const auto lm = pk::liouville_match(s.W, frame, grid, times[k]);
      row["liouville"] = {{"max_error", lm.max_error}, {"exact_error", lm.exact_error}, {"points", lm.points}};
    } else {
      row["liouville"] = "skipped: the Liouville identity needs the matched width sigma = 1/sqrt(2 m omega)";
    }
    per_t.push_back(row);
  }
  RunDir run(cfg, "evolve", {{"state", a.state}, {"times", a.times}});
  run.write("evolve.csv", os.str());
  run.write("evolve.json", dump({{"state", a.state}, {"times", per_t}}));
  run.finish();
  return 0;
}

int cmd_bargmann(const RunConfig& cfg, const CommandArgs& a) {
  const auto frame = make_frame(cfg);
  const State s = make_state(a.state, cfg);
  if (!s.psi) throw pk::InvalidArgument("bargmann needs a pure state");
  const auto coeffs = pk::bargmann_transform(*s.psi, frame);
  json c = json::array();
  for (Eigen::Index n = 0; n < coeffs.size(); ++n) c.push_back(cplx_json(coeffs(n)));
  json ops = json::object();
  const std::pair<const char*, pk::BargmannOp> list[] = {{"Q", pk::BargmannOp::Q},
                                                          {"P", pk::BargmannOp::P},
                                                          {"a", pk::BargmannOp::a},
                                                          {"adag", pk::BargmannOp::adag},
                                                          {"H", pk::BargmannOp::H}};
  for (const auto& [name, op] : list) {
    const auto r = pk::bargmann_ops_check(op, *s.psi, frame);
    ops[name] = {{"residual", r.residual}, {"truncated", r.truncated}};
  }
  RunDir run(cfg, "bargmann", {{"state", a.state}});
  run.write("bargmann.json",
            dump({{"state", a.state}, {"coefficients", c}, {"norm2", pk::bargmann_norm2(coeffs)}, {"operators", ops}}));
  run.finish();
  return 0;
}

int cmd_check(const RunConfig& cfg, const CommandArgs& a) {
  const json report = run_checks(cfg, a.suite);
  RunDir run(cfg, "check", {{"suite", a.suite}});
  run.write("check.json", dump(report));
  run.finish();
  int failed = 0;
  for (const auto& c : report.at("checks"))
    if (c.at("status") == "fail") {
      ++failed;
      std::cerr << "FAIL " << c.at("suite").get<std::string>() << '/' << c.at("name").get<std::string>()
                << ": value " << c.at("value").dump() << ", limit " << c.at("limit").dump() << '\n';
    }
  std::cerr << report.at("passed").get<int>() << " passed, " << failed << " failed, "
            << report.at("skipped").get<int>() << " skipped\n";
  return failed ? 1 : 0;
}

} // namespace pkcli
