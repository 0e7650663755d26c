#pragma once

#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "phasekit/coherent.hpp"
#include "phasekit/fock.hpp"
#include "phasekit/frame.hpp"
#include "phasekit/grid.hpp"

namespace phasekit {

// rho(q,p) = (1/2pi) tr(W a_qp). W must be a density operator of dimension frame.dim();
// throws InadequateGridError if the grid fails the boundary-decay criterion.
DensityField husimi(const CMatrix& W, const FrameSpec& frame, const PhaseGrid& grid);
// Several states on one grid; frame overlaps are computed once per point.
std::vector<DensityField> husimi_batch(const std::vector<CMatrix>& Ws, const FrameSpec& frame,
                                       const PhaseGrid& grid);

// Axis sums times spacing.
std::pair<AxisDensity, AxisDensity> marginals(const DensityField& rho);

struct ConfidenceFunction {
  AxisGrid axis;
  std::vector<double> values;
  double mean = 0.0;
  double variance = 0.0;
};

// eta^Q(x) = <-x|a|-x>, eta^P(k) = <-k|a~|-k>; moments are exact generator moments.
std::pair<ConfidenceFunction, ConfidenceFunction> confidence_functions(const FrameSpec& frame,
                                                                       double spacing = 0.05);

using PhaseFunction = std::function<double(double q, double p)>;

double classical_expectation(const DensityField& rho, const PhaseFunction& f);
double classical_variance(const DensityField& rho, const PhaseFunction& f);
double classical_expectation(const DensityField& rho, const std::vector<double>& f);
double classical_variance(const DensityField& rho, const std::vector<double>& f);

struct UncertaintyReport {
  double var_EQ = 0.0, var_EP = 0.0;     // quantum variances of Q, P
  double var_etaQ = 0.0, var_etaP = 0.0; // confidence-function variances
  double var_FQ = 0.0, var_FP = 0.0;     // variances of the Husimi marginals
  double product_E = 0.0, product_eta = 0.0, product_F = 0.0;
  double additivity_defect_Q = 0.0, additivity_defect_P = 0.0; // |var F - var E - var eta|
  bool additivity_ok = false;  // both defects below 1e-6
  bool heisenberg_ok = false;  // product_E >= 1/4 - 1e-9
  bool joint_ok = false;       // product_F >= 1 - 1e-9
  bool confidence_ok = false;  // product_eta >= 1/4 - 1e-9
};

UncertaintyReport uncertainty_report(const CMatrix& W, const FrameSpec& frame, const PhaseGrid& grid);
UncertaintyReport uncertainty_report(const CMatrix& W, const FrameSpec& frame); // auto grid, spacing 0.05

// Axis-aligned rectangle [q0, q1) x [p0, p1).
struct Cell {
  double q0 = 0.0, q1 = 0.0, p0 = 0.0, p1 = 0.0;
};

struct EffectSet {
  std::vector<Cell> cells;
  std::vector<CMatrix> effects; // F(B) = (1/2pi) sum_{k in B} a_k dq dp
  int D = 0;
};

EffectSet effect_of_region(const std::vector<Cell>& cells, const FrameSpec& frame, const PhaseGrid& grid);

// n x n uniform tiling of the grid's extent.
std::vector<Cell> tile_grid(const PhaseGrid& grid, int n);

struct CompletenessReport {
  int rank = 0;
  int required = 0; // D^2
  bool complete = false;
  bool too_few_cells = false;
  std::vector<double> singular_values;
};

// Rank of the stacked hermitian coordinates at threshold 1e-8 sigma_max.
CompletenessReport completeness_rank(const std::vector<CMatrix>& effects);
CompletenessReport completeness_rank(const EffectSet& effects);
// Tiling with n = D + 2 cells per axis.
CompletenessReport completeness_rank(const FrameSpec& frame, const PhaseGrid& grid);

struct FourierReport {
  double min_modulus = 0.0;
  PhasePoint argmin;
  // Matched frame only: max ||tr aU| - e^{-|z|^2/2}| over trusted grid points.
  std::optional<double> closed_form_defect;
  int zero_cells = 0; // grid cells whose corner values bracket zero in Re and Im
};

FourierReport fourier_criterion(const FrameSpec& frame, const PhaseGrid& grid);

struct ReconstructionOptions {
  std::optional<CMatrix> truth;
  double ridge = 1e-10;                 // relative to the largest diagonal entry of the normal matrix
  std::optional<double> max_residual;   // throw PreconditionError when exceeded
};

struct ReconstructionResult {
  CMatrix W;     // after PSD projection
  CMatrix W_raw; // least-squares fit with trace constraint
  int rank = 0;
  double residual_raw = 0.0;       // sum |rho_k - rho_fit_k| dq dp
  double residual_projected = 0.0;
  bool psd_projection_engaged = false;
  double clipped_weight = 0.0;
  std::optional<double> trace_distance;
};

// Least squares for rho_k = (1/2pi) tr(W a_k) over hermitian W with tr W = 1, then
// eigenvalue clipping. Throws RankDeficiencyError when the samples do not determine W.
ReconstructionResult reconstruct_state(const DensityField& rho, const FrameSpec& frame,
                                       const ReconstructionOptions& options = {});

// Normalized indicator of the grid cell nearest the origin. No density operator
// has this Husimi function, so its reconstruction residual stays large.
DensityField cell_indicator(const PhaseGrid& grid);

} // namespace phasekit
