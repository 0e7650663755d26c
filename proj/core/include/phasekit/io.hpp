#pragma once

#include <iosfwd>
#include <string>

#include "phasekit/classrep.hpp"
#include "phasekit/dequant.hpp"
#include "phasekit/displacement.hpp"
#include "phasekit/dynamics.hpp"
#include "phasekit/fock.hpp"

// Serialization. Field names are documented in docs/schema.md.
namespace phasekit::io {

// Shortest round-trip decimal form ("%.17g").
std::string format_double(double v);

struct OperatorRecord {
  CMatrix matrix;
  OperatorKind kind = OperatorKind::general;
  OscParams params;
};

std::string operator_to_json(const CMatrix& A, OperatorKind kind, const OscParams& params);
OperatorRecord operator_from_json(const std::string& text); // throws InvalidArgument

std::string vector_to_json(const CVector& v, const OscParams& params);
CVector vector_from_json(const std::string& text);

std::string dequantizer_to_json(const Dequantizer& d);

// CSV, p-major then q. Header: q,p,rho / q,p,re,im.
void write_density_csv(std::ostream& os, const DensityField& rho);
void write_wave_csv(std::ostream& os, const WaveField& psi);
// Reads q,p,rho rows written by write_density_csv; the grid is inferred from the
// coordinates. Throws InvalidArgument on malformed input.
DensityField read_density_csv(std::istream& is);

// "# D=<D> m=<m> omega=<omega>" then q,p,re,im.
void write_char_csv(std::ostream& os, const CharSamples& samples);
// x,density
void write_axis_csv(std::ostream& os, const AxisGrid& axis, const std::vector<double>& values,
                    const std::string& coordinate);

std::string params_json(const OscParams& params);
std::string grid_json(const PhaseGrid& grid);
std::string uncertainty_json(const UncertaintyReport& r);
std::string completeness_json(const CompletenessReport& r);
std::string fourier_json(const FourierReport& r);
std::string reconstruction_json(const ReconstructionResult& r, const OscParams& params);

} // namespace phasekit::io
