#include "netident/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/Eigenvalues>

namespace netident {

int EdgeDynamics::max_order() const {
  int m = 0;
  for (std::size_t e = 0; e < taps.size(); ++e) m = std::max(m, order(e));
  return m;
}

Complex EdgeDynamics::response(std::size_t e, Complex z) const {
  const Complex zinv = 1.0 / z;
  Complex acc = 0.0, power = 1.0;
  for (double c : taps[e]) {
    acc += c * power;
    power *= zinv;
  }
  return acc;
}

Eigen::MatrixXcd network_response(const Network& g, const EdgeDynamics& dyn,
                                  Complex z) {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(g.size(), g.size());
  for (std::size_t e = 0; e < g.edges().size(); ++e)
    m(g.edges()[e].to, g.edges()[e].from) = dyn.response(e, z);
  return m;
}

Eigen::MatrixXcd closed_loop_response(const Network& g,
                                      const EdgeDynamics& dyn, Complex z) {
  const Eigen::MatrixXcd i_minus_g =
      Eigen::MatrixXcd::Identity(g.size(), g.size()) -
      network_response(g, dyn, z);
  return i_minus_g.partialPivLu().inverse();
}

double max_spectral_radius(const Network& g, const EdgeDynamics& dyn,
                           int points) {
  if (g.size() == 0 || g.edge_count() == 0) return 0.0;
  double worst = 0.0;
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver;
  for (int k = 0; k < points; ++k) {
    const double omega = 2.0 * std::numbers::pi * k / points;
    solver.compute(network_response(g, dyn, std::polar(1.0, omega)), false);
    worst = std::max(worst, solver.eigenvalues().cwiseAbs().maxCoeff());
  }
  return worst;
}

EdgeDynamics synth_dynamics(const Network& g, std::uint64_t seed, int order) {
  if (order < 1) throw std::invalid_argument("FIR order must be >= 1");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> lead(0.6, 1.0);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::bernoulli_distribution sign(0.5);
  // |tap 1| >= 0.6 > sum of the other magnitudes (<= 0.4), so no edge
  // response has a zero on the unit circle.
  const double spread = order > 1 ? 0.4 / (order - 1) : 0.0;

  EdgeDynamics dyn;
  dyn.taps.reserve(g.edges().size());
  for (std::size_t e = 0; e < g.edges().size(); ++e) {
    std::vector<double> taps(static_cast<std::size_t>(order) + 1, 0.0);
    taps[1] = (sign(rng) ? 1.0 : -1.0) * lead(rng);
    for (int d = 2; d <= order; ++d) taps[d] = spread * unit(rng);
    dyn.taps.push_back(std::move(taps));
  }
  if (!is_acyclic(g)) {
    const double rho = max_spectral_radius(g, dyn);
    if (rho > kTargetSpectralRadius) {
      const double scale = kTargetSpectralRadius / rho;
      for (auto& taps : dyn.taps)
        for (double& c : taps) c *= scale;
    }
  }
  return dyn;
}

Eigen::MatrixXd white_excitation(int channels, int samples,
                                 std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd r(channels, samples);
  for (int t = 0; t < samples; ++t)
    for (int c = 0; c < channels; ++c) r(c, t) = normal(rng);
  return r;
}

Signals simulate(const Network& g, const EdgeDynamics& dyn,
                 const Eigen::MatrixXd& r) {
  if (r.rows() != g.size())
    throw std::invalid_argument("excitation must have one channel per node");
  const Eigen::Index samples = r.cols();
  Signals s;
  s.w = r;
  const auto& edges = g.edges();
  for (Eigen::Index t = 0; t < samples; ++t) {
    for (std::size_t e = 0; e < edges.size(); ++e) {
      const auto& taps = dyn.taps[e];
      double acc = 0.0;
      for (std::size_t d = 1; d < taps.size() && d <= std::size_t(t); ++d)
        acc += taps[d] * s.w(edges[e].from, t - static_cast<Eigen::Index>(d));
      s.w(edges[e].to, t) += acc;
    }
  }
  if (!s.w.allFinite())
    throw SimulationError("node signals diverged; dynamics are unstable");
  s.y.resize(static_cast<Eigen::Index>(g.measured().size()), samples);
  for (std::size_t k = 0; k < g.measured().size(); ++k)
    s.y.row(static_cast<Eigen::Index>(k)) = s.w.row(g.measured()[k]);
  return s;
}

int impulse_response_length(const Network& g, const EdgeDynamics& dyn,
                            double tolerance, int max_length) {
  const int n = g.size();
  const int order = std::max(1, dyn.max_order());
  const int window = std::max(8, order * n);
  const auto& edges = g.edges();
  std::vector<Eigen::MatrixXd> h;
  h.push_back(Eigen::MatrixXd::Identity(n, n));
  // Stop once a full window of taps is negligible; past that point the
  // response decays geometrically.
  for (int t = 1;; ++t) {
    if (t > max_length)
      throw SimulationError(
          "closed-loop impulse response does not decay within " +
          std::to_string(max_length) + " taps");
    Eigen::MatrixXd next = Eigen::MatrixXd::Zero(n, n);
    for (std::size_t e = 0; e < edges.size(); ++e) {
      const auto& taps = dyn.taps[e];
      for (std::size_t d = 1; d < taps.size() && d <= std::size_t(t); ++d)
        next.row(edges[e].to) += taps[d] * h[t - d].row(edges[e].from);
    }
    h.push_back(std::move(next));
    if (t >= window) {
      double recent = 0.0;
      for (int k = t - window + 1; k <= t; ++k)
        recent = std::max(recent, h[k].cwiseAbs().maxCoeff());
      if (recent * window < tolerance * 1e-3) break;
    }
  }
  Eigen::MatrixXd tail = Eigen::MatrixXd::Zero(n, n);
  int length = static_cast<int>(h.size());
  for (int t = static_cast<int>(h.size()) - 1; t >= 1; --t) {
    tail += h[t].cwiseAbs();
    if (tail.maxCoeff() >= tolerance) break;
    length = t;
  }
  return length;
}

Eigen::MatrixXcd FirEstimate::response(Complex z) const {
  const Eigen::Index p = static_cast<Eigen::Index>(rows.size());
  const Eigen::Index l = taps.empty() ? 0 : taps.front().cols();
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(p, l);
  Complex power = 1.0;
  for (const auto& tap : taps) {
    m += power * tap.cast<Complex>();
    power /= z;
  }
  return m;
}

FirEstimate estimate_ct(const Network& g, const Eigen::MatrixXd& y,
                        const Eigen::MatrixXd& r, int length,
                        double max_residual) {
  if (length < 1) throw std::invalid_argument("FIR length must be >= 1");
  const int n = g.size();
  const Eigen::Index samples = r.cols();
  const NodeSet& rows = g.measured();
  if (r.rows() != n || y.rows() != static_cast<Eigen::Index>(rows.size()) ||
      y.cols() != samples)
    throw std::invalid_argument("signal dimensions do not match the network");

  FirEstimate est;
  est.rows = rows;
  est.taps.assign(static_cast<std::size_t>(length),
                  Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(rows.size()), n));
  if (rows.empty()) return est;

  const Eigen::Index width = static_cast<Eigen::Index>(n) * length;
  if (width > samples)
    throw EstimationError("more FIR coefficients than samples");
  Eigen::MatrixXd phi = Eigen::MatrixXd::Zero(samples, width);
  for (int k = 0; k < n; ++k)
    for (int tau = 0; tau < length; ++tau)
      phi.col(k * length + tau).tail(samples - tau) =
          r.row(k).head(samples - tau).transpose();
  Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(width, width);
  gram.selfadjointView<Eigen::Lower>().rankUpdate(phi.transpose());
  gram = gram.selfadjointView<Eigen::Lower>();
  const Eigen::MatrixXd cross = phi.transpose() * y.transpose();

  for (std::size_t row = 0; row < rows.size(); ++row) {
    const auto ancestors = reaching(g, rows[row]);
    std::vector<Eigen::Index> cols;
    for (int k = 0; k < n; ++k)
      if (ancestors[k])
        for (int tau = 0; tau < length; ++tau) cols.push_back(k * length + tau);
    const Eigen::Index m = static_cast<Eigen::Index>(cols.size());
    Eigen::MatrixXd sub_gram(m, m);
    Eigen::VectorXd sub_cross(m);
    Eigen::MatrixXd sub_phi(samples, m);
    for (Eigen::Index a = 0; a < m; ++a) {
      sub_cross(a) = cross(cols[a], static_cast<Eigen::Index>(row));
      sub_phi.col(a) = phi.col(cols[a]);
      for (Eigen::Index b = 0; b < m; ++b)
        sub_gram(a, b) = gram(cols[a], cols[b]);
    }
    const Eigen::LDLT<Eigen::MatrixXd> ldlt(sub_gram);
    if (ldlt.info() != Eigen::Success || !(ldlt.rcond() > 1e-12))
      throw EstimationError("ill-conditioned regression; excitation too short");
    const Eigen::VectorXd theta = ldlt.solve(sub_cross);

    const Eigen::VectorXd target = y.row(static_cast<Eigen::Index>(row)).transpose();
    const double rel = (target - sub_phi * theta).norm() / target.norm();
    est.residuals.push_back(rel);
    if (!(rel <= max_residual))
      throw EstimationError("relative residual " + std::to_string(rel) +
                            " on row " + g.label(rows[row]) +
                            "; FIR length too short");
    for (Eigen::Index a = 0; a < m; ++a) {
      const int k = static_cast<int>(cols[a] / length);
      const int tau = static_cast<int>(cols[a] % length);
      est.taps[tau](static_cast<Eigen::Index>(row), k) = theta(a);
    }
  }
  return est;
}

std::vector<Complex> frequency_grid(int order) {
  const int points = 4 * (order + 1);
  std::vector<Complex> z;
  for (int f = 0; f < points; ++f)
    z.push_back(std::polar(1.0, std::numbers::pi * (f + 0.5) / points));
  return z;
}

MeasuredResponse sample_response(const FirEstimate& est,
                                 const std::vector<Complex>& z) {
  MeasuredResponse m{est.rows, z, {}};
  for (Complex zf : z) m.t.push_back(est.response(zf));
  return m;
}

MeasuredResponse exact_response(const Network& g, const EdgeDynamics& dyn,
                                const std::vector<Complex>& z) {
  MeasuredResponse m{g.measured(), z, {}};
  for (Complex zf : z) {
    const Eigen::MatrixXcd t = closed_loop_response(g, dyn, zf);
    Eigen::MatrixXcd rows(static_cast<Eigen::Index>(g.measured().size()),
                          g.size());
    for (std::size_t k = 0; k < g.measured().size(); ++k)
      rows.row(static_cast<Eigen::Index>(k)) = t.row(g.measured()[k]);
    m.t.push_back(std::move(rows));
  }
  return m;
}

namespace {

struct Equilibrated {
  Eigen::MatrixXcd a;
  Eigen::VectorXd row_scale;
  Eigen::VectorXd col_scale;
};

Equilibrated equilibrate(const Eigen::MatrixXcd& m) {
  Equilibrated e{m, Eigen::VectorXd::Ones(m.rows()),
                 Eigen::VectorXd::Ones(m.cols())};
  for (int pass = 0; pass < 3; ++pass) {
    for (Eigen::Index r = 0; r < e.a.rows(); ++r) {
      const double s = e.a.row(r).cwiseAbs().maxCoeff();
      if (s > 0) {
        e.a.row(r) /= s;
        e.row_scale(r) /= s;
      }
    }
    for (Eigen::Index c = 0; c < e.a.cols(); ++c) {
      const double s = e.a.col(c).cwiseAbs().maxCoeff();
      if (s > 0) {
        e.a.col(c) /= s;
        e.col_scale(c) /= s;
      }
    }
  }
  return e;
}

int numerical_rank(const Eigen::MatrixXcd& m) {
  if (m.size() == 0) return 0;
  const Eigen::JacobiSVD<Eigen::MatrixXcd> svd(equilibrate(m).a);
  const auto& sigma = svd.singularValues();
  if (sigma(0) == 0.0) return 0;
  int rank = 0;
  for (Eigen::Index k = 0; k < sigma.size(); ++k)
    rank += sigma(k) > kRecoveryRankTolerance * sigma(0);
  return rank;
}

Eigen::MatrixXcd drop_column(const Eigen::MatrixXcd& m, Eigen::Index col) {
  Eigen::MatrixXcd out(m.rows(), m.cols() - 1);
  for (Eigen::Index c = 0, k = 0; c < m.cols(); ++c)
    if (c != col) out.col(k++) = m.col(c);
  return out;
}

// Minimum-norm least-squares solution in equilibrated coordinates; the
// uniquely determined components do not depend on the scaling.
Eigen::VectorXcd truncated_solve(const Eigen::MatrixXcd& m,
                                 const Eigen::VectorXcd& b) {
  const Equilibrated e = equilibrate(m);
  const Eigen::JacobiSVD<Eigen::MatrixXcd> svd(
      e.a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sigma = svd.singularValues();
  const Eigen::VectorXcd rhs = e.row_scale.cast<Complex>().asDiagonal() * b;
  Eigen::VectorXcd y = Eigen::VectorXcd::Zero(m.cols());
  for (Eigen::Index k = 0; k < sigma.size(); ++k) {
    if (!(sigma(k) > kRecoveryRankTolerance * sigma(0))) break;
    y += svd.matrixV().col(k) *
         (svd.matrixU().col(k).adjoint() * rhs)(0) / sigma(k);
  }
  return e.col_scale.cast<Complex>().asDiagonal() * y;
}

std::vector<double> fit_fir(const std::vector<Complex>& z,
                            const std::vector<Complex>& values, int order) {
  const Eigen::Index eqs = static_cast<Eigen::Index>(2 * z.size());
  Eigen::MatrixXd a(eqs, order);
  Eigen::VectorXd b(eqs);
  for (std::size_t f = 0; f < z.size(); ++f) {
    Complex power = 1.0;
    for (int d = 1; d <= order; ++d) {
      power /= z[f];
      a(2 * f, d - 1) = power.real();
      a(2 * f + 1, d - 1) = power.imag();
    }
    b(2 * f) = values[f].real();
    b(2 * f + 1) = values[f].imag();
  }
  const Eigen::VectorXd theta = a.colPivHouseholderQr().solve(b);
  std::vector<double> taps(static_cast<std::size_t>(order) + 1, 0.0);
  for (int d = 1; d <= order; ++d) taps[d] = theta(d - 1);
  return taps;
}

}  // namespace

RecoveryResult recover_g(const MeasuredResponse& t, const Network& g,
                         const std::vector<int>& edge_orders) {
  const auto& edges = g.edges();
  if (edge_orders.size() != edges.size())
    throw std::invalid_argument("one FIR order per edge required");
  RecoveryResult res;
  res.unique.assign(edges.size(), false);
  res.estimate.assign(edges.size(), std::nullopt);
  res.column_residual.assign(static_cast<std::size_t>(g.size()), 0.0);
  const std::size_t freqs = t.z.size();
  const Eigen::Index p = static_cast<Eigen::Index>(t.rows.size());

  // Edge index by (from, to); edges are sorted.
  auto edge_index = [&](NodeIndex from, NodeIndex to) {
    return static_cast<std::size_t>(
        std::lower_bound(edges.begin(), edges.end(), Edge{from, to}) -
        edges.begin());
  };

  // Entries from inputs that cannot reach a row are zero by topology.
  std::vector<std::vector<bool>> reaches;
  for (NodeIndex row : t.rows) reaches.push_back(reaching(g, row));
  auto entry = [&](const Eigen::MatrixXcd& tf, Eigen::Index r, NodeIndex k) {
    return reaches[r][k] ? tf(r, k) : Complex(0.0);
  };

  for (NodeIndex i = 0; i < g.size(); ++i) {
    const NodeSet& out = g.out_neighbors(i);
    const Eigen::Index d = static_cast<Eigen::Index>(out.size());
    std::vector<std::vector<Complex>> values(out.size());
    std::vector<std::vector<Complex>> at(out.size());
    double sq = 0.0;
    for (std::size_t f = 0; f < freqs; ++f) {
      const Eigen::MatrixXcd& tf = t.t[f];
      Eigen::MatrixXcd m(p, d);
      Eigen::VectorXcd b(p);
      for (Eigen::Index r = 0; r < p; ++r) {
        for (Eigen::Index k = 0; k < d; ++k) m(r, k) = entry(tf, r, out[k]);
        b(r) = entry(tf, r, i) - (t.rows[r] == i ? 1.0 : 0.0);
      }
      if (d == 0 || p == 0) {
        sq += b.squaredNorm();
        continue;
      }
      const Eigen::VectorXcd x = truncated_solve(m, b);
      sq += (m * x - b).squaredNorm();
      const int full = numerical_rank(m);
      for (Eigen::Index k = 0; k < d; ++k) {
        if (numerical_rank(drop_column(m, k)) + 1 != full) continue;
        values[k].push_back(x(k));
        at[k].push_back(t.z[f]);
      }
    }
    res.column_residual[i] = freqs ? std::sqrt(sq / freqs) : 0.0;

    for (std::size_t k = 0; k < out.size(); ++k) {
      const std::size_t e = edge_index(i, out[k]);
      const int order = edge_orders[e];
      if (2 * at[k].size() <= freqs || static_cast<int>(at[k].size()) < order)
        continue;
      res.unique[e] = true;
      res.estimate[e] = fit_fir(at[k], values[k], order);
    }
  }
  return res;
}

double relative_error(const std::vector<double>& estimate,
                      const std::vector<double>& truth) {
  double diff = 0.0, norm = 0.0;
  for (std::size_t k = 0; k < truth.size(); ++k) {
    const double a = k < estimate.size() ? estimate[k] : 0.0;
    diff += (a - truth[k]) * (a - truth[k]);
    norm += truth[k] * truth[k];
  }
  for (std::size_t k = truth.size(); k < estimate.size(); ++k)
    diff += estimate[k] * estimate[k];
  return std::sqrt(diff) / std::sqrt(norm);
}

ExperimentReport run_experiment(const Network& g, const ExperimentOptions& opt) {
  if (opt.samples < 10 * opt.order * std::max(1, g.size()))
    throw std::invalid_argument("need at least 10 * order * L samples");
  ExperimentReport rep;
  rep.dynamics = synth_dynamics(g, opt.seed, opt.order);
  rep.excitation = white_excitation(g.size(), opt.samples, opt.seed + 1);
  rep.signals = simulate(g, rep.dynamics, rep.excitation);

  const int max_length = opt.samples / (2 * std::max(1, g.size()));
  rep.fir_length = impulse_response_length(g, rep.dynamics,
                                           opt.truncation_tolerance, max_length);
  const FirEstimate est =
      estimate_ct(g, rep.signals.y, rep.excitation, rep.fir_length);
  rep.estimation_residuals = est.residuals;

  std::vector<int> orders;
  for (std::size_t e = 0; e < g.edges().size(); ++e)
    orders.push_back(rep.dynamics.order(e));
  const RecoveryResult rec = recover_g(
      sample_response(est, frequency_grid(std::max(1, rep.dynamics.max_order()))),
      g, orders);
  rep.column_residuals = rec.column_residual;

  for (std::size_t e = 0; e < g.edges().size(); ++e) {
    EdgeOutcome o;
    o.edge = g.edges()[e];
    o.truth = rep.dynamics.taps[e];
    o.unique = rec.unique[e];
    o.estimate = rec.estimate[e];
    if (o.estimate) o.relative_error = relative_error(*o.estimate, o.truth);
    rep.edges.push_back(std::move(o));
  }
  return rep;
}

}  // namespace netident
