#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "netident/graph.hpp"

namespace netident {

using Complex = std::complex<double>;

/// Strictly causal FIR filter per edge: taps[e][d] is the coefficient of
/// q^-d, taps[e][0] == 0. Edge e is g.edges()[e].
struct EdgeDynamics {
  std::vector<std::vector<double>> taps;

  [[nodiscard]] int order(std::size_t e) const {
    return static_cast<int>(taps[e].size()) - 1;
  }
  [[nodiscard]] int max_order() const;
  /// G_e(z) = sum_d taps[e][d] z^-d.
  [[nodiscard]] Complex response(std::size_t e, Complex z) const;
};

/// Largest spectral radius of G(z) allowed on the unit circle.
inline constexpr double kMaxSpectralRadius = 0.8;
/// Radius the synthesizer scales looped networks down to.
inline constexpr double kTargetSpectralRadius = 0.5;
inline constexpr int kSpectralGridPoints = 512;

/// Random dynamics with every edge of the given order. The q^-1 tap dominates
/// the others so no edge response vanishes on the unit circle; if the network
/// has loops, all taps are rescaled so that the spectral radius of G(z) on a
/// dense unit-circle grid is kTargetSpectralRadius. Deterministic per seed.
EdgeDynamics synth_dynamics(const Network& g, std::uint64_t seed, int order);

/// G(z) as an L x L complex matrix (G(i, j) is the edge j -> i).
Eigen::MatrixXcd network_response(const Network& g, const EdgeDynamics& dyn,
                                  Complex z);
/// (I - G(z))^-1.
Eigen::MatrixXcd closed_loop_response(const Network& g,
                                      const EdgeDynamics& dyn, Complex z);
/// Max over `points` equispaced unit-circle samples of the spectral radius of
/// G(z).
double max_spectral_radius(const Network& g, const EdgeDynamics& dyn,
                           int points = kSpectralGridPoints);

/// Independent unit-variance white Gaussian sequences, L x samples.
Eigen::MatrixXd white_excitation(int channels, int samples, std::uint64_t seed);

struct Signals {
  Eigen::MatrixXd w;  // L x N node signals
  Eigen::MatrixXd y;  // p x N measured rows of w
};

class SimulationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Runs w(t) = sum_e G_e(q) w(t) + r(t) from rest; throws SimulationError on
/// non-finite values.
Signals simulate(const Network& g, const EdgeDynamics& dyn,
                 const Eigen::MatrixXd& r);

/// Closed-loop impulse response length after which the remaining absolute
/// tail sum of every entry of T falls below `tolerance`. Throws
/// SimulationError if that does not happen within `max_length` taps.
int impulse_response_length(const Network& g, const EdgeDynamics& dyn,
                            double tolerance, int max_length);

/// FIR estimate of the measured rows of T: taps[tau](row, k) is the
/// coefficient of q^-tau from r_k to the row-th measured node.
struct FirEstimate {
  NodeSet rows;
  std::vector<Eigen::MatrixXd> taps;
  /// Per measured row, ||y - estimate|| / ||y||.
  std::vector<double> residuals;

  [[nodiscard]] int length() const { return static_cast<int>(taps.size()); }
  [[nodiscard]] Eigen::MatrixXcd response(Complex z) const;
};

class EstimationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr double kMaxRelativeResidual = 1e-8;

/// Least-squares deconvolution of each measured row against the known
/// excitations, with `length` taps per input. Inputs that cannot reach a row
/// in g get no regressors. Throws EstimationError if the regression is
/// ill-conditioned or a relative residual exceeds max_residual.
FirEstimate estimate_ct(const Network& g, const Eigen::MatrixXd& y,
                        const Eigen::MatrixXd& r, int length,
                        double max_residual = kMaxRelativeResidual);

/// 4 (order + 1) points on the open upper unit semicircle.
std::vector<Complex> frequency_grid(int order);

/// Frequency samples of the measured rows of T.
struct MeasuredResponse {
  NodeSet rows;
  std::vector<Complex> z;
  std::vector<Eigen::MatrixXcd> t;  // one p x L matrix per frequency
};

MeasuredResponse sample_response(const FirEstimate& est,
                                 const std::vector<Complex>& z);
MeasuredResponse exact_response(const Network& g, const EdgeDynamics& dyn,
                                const std::vector<Complex>& z);

struct RecoveryResult {
  /// Per edge of g.edges(): uniquely determined by the measured rows.
  std::vector<bool> unique;
  /// Per edge: fitted taps (index 0 is the zero instantaneous term), set
  /// only where unique.
  std::vector<std::optional<std::vector<double>>> estimate;
  /// Per node i: RMS over frequencies of the residual of column i.
  std::vector<double> column_residual;
};

/// Relative singular-value threshold for per-frequency uniqueness.
inline constexpr double kRecoveryRankTolerance = 1e-8;

/// Solves C T (I - G) = C column by column. For column i the unknowns at each
/// frequency are the responses of the edges leaving i; an edge counts as
/// unique when its unknown is determined at a majority of the frequencies,
/// and its FIR taps of the given order are then fitted to those values.
RecoveryResult recover_g(const MeasuredResponse& t, const Network& g,
                         const std::vector<int>& edge_orders);

// ---------------------------------------------------------------------------

struct ExperimentOptions {
  std::uint64_t seed = 42;
  int order = 3;
  int samples = 4000;
  /// Tail tolerance used to pick the FIR estimation length.
  double truncation_tolerance = 1e-13;
};

struct EdgeOutcome {
  Edge edge{};
  std::vector<double> truth;
  std::optional<std::vector<double>> estimate;
  bool unique = false;
  double relative_error = 0.0;  // meaningful when unique
};

struct ExperimentReport {
  int fir_length = 0;
  std::vector<double> estimation_residuals;
  std::vector<double> column_residuals;
  std::vector<EdgeOutcome> edges;
  EdgeDynamics dynamics;
  Signals signals;
  Eigen::MatrixXd excitation;
};

/// synth_dynamics -> simulate -> estimate_ct -> recover_g on g's measured
/// set, comparing every recovered edge with the true taps.
ExperimentReport run_experiment(const Network& g, const ExperimentOptions& opt);

/// ||a - b|| / ||b||.
double relative_error(const std::vector<double>& estimate,
                      const std::vector<double>& truth);

}  // namespace netident
