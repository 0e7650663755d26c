#include "phasekit/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "phasekit/error.hpp"

namespace phasekit::io {

using nlohmann::json;

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

json params_obj(const OscParams& p) { return {{"m", p.m}, {"omega", p.omega}, {"sigma", p.sigma}}; }

OscParams params_from(const json& j) {
  OscParams p;
  p.m = j.at("m").get<double>();
  p.omega = j.at("omega").get<double>();
  p.sigma = j.at("sigma").get<double>();
  p.validate();
  return p;
}

json grid_obj(const PhaseGrid& g) {
  return {{"q_min", g.q_min}, {"p_min", g.p_min}, {"dq", g.dq}, {"dp", g.dp}, {"nq", g.nq}, {"np", g.np}};
}

template <class F>
auto parse(const std::string& what, F&& f) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw InvalidArgument("malformed " + what + " JSON: " + e.what());
  }
}

} // namespace

std::string params_json(const OscParams& params) { return params_obj(params).dump(); }
std::string grid_json(const PhaseGrid& grid) { return grid_obj(grid).dump(); }

std::string operator_to_json(const CMatrix& A, OperatorKind kind, const OscParams& params) {
  json entries = json::array();
  for (Eigen::Index i = 0; i < A.rows(); ++i)
    for (Eigen::Index k = 0; k < A.cols(); ++k) entries.push_back({A(i, k).real(), A(i, k).imag()});
  json j{{"D", A.rows()}, {"kind", to_string(kind)}, {"params", params_obj(params)}, {"entries", entries}};
  return j.dump(2);
}

OperatorRecord operator_from_json(const std::string& text) {
  return parse("operator", [&] {
    const json j = json::parse(text);
    OperatorRecord r;
    const int D = j.at("D").get<int>();
    if (D < 1) throw InvalidArgument("operator JSON: D must be positive");
    r.kind = operator_kind_from_string(j.value("kind", std::string("general")));
    r.params = j.contains("params") ? params_from(j.at("params")) : OscParams{};
    const auto& e = j.at("entries");
    if (!e.is_array() || static_cast<int>(e.size()) != D * D)
      throw InvalidArgument("operator JSON: expected D*D entries");
    r.matrix.resize(D, D);
    for (int i = 0; i < D; ++i)
      for (int k = 0; k < D; ++k) {
        const auto& v = e.at(static_cast<std::size_t>(i * D + k));
        r.matrix(i, k) = cplx(v.at(0).get<double>(), v.at(1).get<double>());
      }
    return r;
  });
}

std::string vector_to_json(const CVector& v, const OscParams& params) {
  json coeffs = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) coeffs.push_back({v(i).real(), v(i).imag()});
  json j{{"D", v.size()}, {"kind", "vector"}, {"params", params_obj(params)}, {"coeffs", coeffs}};
  return j.dump(2);
}

CVector vector_from_json(const std::string& text) {
  return parse("vector", [&] {
    const json j = json::parse(text);
    const auto& c = j.at("coeffs");
    CVector v(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) v(i) = cplx(c.at(i).at(0).get<double>(), c.at(i).at(1).get<double>());
    return v;
  });
}

std::string dequantizer_to_json(const Dequantizer& d) {
  json coeffs = json::array();
  for (const auto& t : d.terms) coeffs.push_back({{"q", t.q_power}, {"p", t.p_power}, {"value", t.coefficient}});
  json j{{"symbol", d.symbol}, {"coefficients", coeffs}, {"constant", d.constant}, {"params", params_obj(d.params)}};
  return j.dump(2);
}

void write_density_csv(std::ostream& os, const DensityField& rho) {
  const PhaseGrid& g = rho.grid;
  os << "q,p,rho\n";
  for (int j = 0; j < g.np; ++j)
    for (int i = 0; i < g.nq; ++i)
      os << format_double(g.q(i)) << ',' << format_double(g.p(j)) << ',' << format_double(rho.at(i, j)) << '\n';
}

void write_wave_csv(std::ostream& os, const WaveField& psi) {
  const PhaseGrid& g = psi.grid;
  os << "q,p,re,im\n";
  for (int j = 0; j < g.np; ++j)
    for (int i = 0; i < g.nq; ++i) {
      const cplx v = psi.at(i, j);
      os << format_double(g.q(i)) << ',' << format_double(g.p(j)) << ',' << format_double(v.real()) << ','
         << format_double(v.imag()) << '\n';
    }
}

namespace {

[[noreturn]] void malformed(const std::string& why) { throw InvalidArgument("malformed density CSV: " + why); }

double parse_number(const std::string& s) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (...) {
    malformed("'" + s + "' is not a number");
  }
  if (used != s.size() || !std::isfinite(v)) malformed("'" + s + "' is not a finite number");
  return v;
}

// Uniform axis through the sorted distinct coordinates.
AxisGrid infer_axis(std::vector<double> xs, const char* name) {
  std::sort(xs.begin(), xs.end());
  std::vector<double> u;
  for (double x : xs)
    if (u.empty() || std::abs(x - u.back()) > 1e-9 * std::max(1.0, std::abs(x))) u.push_back(x);
  if (u.size() < 2) malformed(std::string("need at least two distinct ") + name + " values");
  const double h = (u.back() - u.front()) / (u.size() - 1);
  for (std::size_t i = 0; i < u.size(); ++i)
    if (std::abs(u[i] - (u.front() + h * i)) > 1e-6 * h) malformed(std::string(name) + " values are not uniform");
  return {u.front(), h, static_cast<int>(u.size())};
}

} // namespace

DensityField read_density_csv(std::istream& is) {
  std::string line;
  bool header = false;
  std::vector<double> qs, ps, vs;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (!header) {
      if (line != "q,p,rho") malformed("expected header 'q,p,rho'");
      header = true;
      continue;
    }
    std::vector<std::string> cols;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cols.push_back(cell);
    if (cols.size() != 3) malformed("expected three columns in '" + line + "'");
    qs.push_back(parse_number(cols[0]));
    ps.push_back(parse_number(cols[1]));
    vs.push_back(parse_number(cols[2]));
  }
  if (!header) malformed("missing header");
  const AxisGrid qa = infer_axis(qs, "q");
  const AxisGrid pa = infer_axis(ps, "p");
  DensityField rho(PhaseGrid::from_axes(qa, pa));
  if (vs.size() != rho.grid.size()) malformed("row count does not match a full rectangular grid");
  std::vector<bool> seen(vs.size(), false);
  for (std::size_t k = 0; k < vs.size(); ++k) {
    const int i = static_cast<int>(std::lround((qs[k] - qa.start) / qa.step));
    const int j = static_cast<int>(std::lround((ps[k] - pa.start) / pa.step));
    const std::size_t idx = rho.grid.index(i, j);
    if (seen[idx]) malformed("duplicate grid point");
    seen[idx] = true;
    rho.values[idx] = vs[k];
  }
  return rho;
}

void write_char_csv(std::ostream& os, const CharSamples& s) {
  os << "# D=" << s.D << " m=" << format_double(s.params.m) << " omega=" << format_double(s.params.omega) << '\n';
  os << "q,p,re,im\n";
  const PhaseGrid& g = s.grid;
  for (int j = 0; j < g.np; ++j)
    for (int i = 0; i < g.nq; ++i) {
      const cplx v = s.values[g.index(i, j)];
      os << format_double(g.q(i)) << ',' << format_double(g.p(j)) << ',' << format_double(v.real()) << ','
         << format_double(v.imag()) << '\n';
    }
}

void write_axis_csv(std::ostream& os, const AxisGrid& axis, const std::vector<double>& values,
                    const std::string& coordinate) {
  os << coordinate << ",density\n";
  for (int i = 0; i < axis.n; ++i) os << format_double(axis.at(i)) << ',' << format_double(values[i]) << '\n';
}

std::string uncertainty_json(const UncertaintyReport& r) {
  json j{{"var_EQ", r.var_EQ},
         {"var_EP", r.var_EP},
         {"var_etaQ", r.var_etaQ},
         {"var_etaP", r.var_etaP},
         {"var_FQ", r.var_FQ},
         {"var_FP", r.var_FP},
         {"product_E", r.product_E},
         {"product_eta", r.product_eta},
         {"product_F", r.product_F},
         {"additivity_defect_Q", r.additivity_defect_Q},
         {"additivity_defect_P", r.additivity_defect_P},
         {"additivity_ok", r.additivity_ok},
         {"heisenberg_ok", r.heisenberg_ok},
         {"confidence_ok", r.confidence_ok},
         {"joint_ok", r.joint_ok}};
  return j.dump(2);
}

std::string completeness_json(const CompletenessReport& r) {
  json j{{"rank", r.rank},
         {"required", r.required},
         {"complete", r.complete},
         {"too_few_cells", r.too_few_cells},
         {"singular_values", r.singular_values}};
  return j.dump(2);
}

std::string fourier_json(const FourierReport& r) {
  json j{{"min_modulus", r.min_modulus},
         {"argmin", {{"q", r.argmin.q}, {"p", r.argmin.p}}},
         {"zero_cells", r.zero_cells},
         {"closed_form_defect", r.closed_form_defect ? json(*r.closed_form_defect) : json(nullptr)}};
  return j.dump(2);
}

std::string reconstruction_json(const ReconstructionResult& r, const OscParams& params) {
  json j{{"rank", r.rank},
         {"residual_raw", r.residual_raw},
         {"residual_projected", r.residual_projected},
         {"psd_projection_engaged", r.psd_projection_engaged},
         {"clipped_weight", r.clipped_weight},
         {"trace_distance", r.trace_distance ? json(*r.trace_distance) : json(nullptr)},
         {"state", json::parse(operator_to_json(r.W, OperatorKind::density, params))}};
  return j.dump(2);
}

} // namespace phasekit::io
