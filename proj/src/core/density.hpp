#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

namespace fpfgain {

// Row view into an N x d particle array (column-major storage, so rows are
// strided).
using PointRef = Eigen::Ref<const Eigen::VectorXd, 0, Eigen::InnerStride<>>;

struct GaussianComponent {
  double weight = 0.0;
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;
};

// Mixture-of-Gaussians density with analytic moments.  Construction
// validates the mixture (positive weights summing to 1, symmetric
// positive-definite covariances) and factorizes each covariance for
// sampling and pdf evaluation.
class DensityModel {
 public:
  explicit DensityModel(std::vector<GaussianComponent> components);

  static DensityModel gaussian(Eigen::VectorXd mean, Eigen::MatrixXd cov);
  static DensityModel gaussian1d(double mean, double variance);
  // 0.5 N(-1, sigma^2) + 0.5 N(+1, sigma^2), the standard two-mode benchmark
  static DensityModel symmetric_bimodal(double sigma);

  int dimension() const { return dim_; }
  const std::vector<GaussianComponent>& components() const {
    return components_;
  }
  const Eigen::MatrixXd& cholesky(std::size_t k) const { return chol_[k]; }

  double pdf(PointRef x) const;
  double pdf1(double x) const;

  Eigen::VectorXd mean() const;
  Eigen::MatrixXd covariance() const;

 private:
  std::vector<GaussianComponent> components_;
  std::vector<Eigen::MatrixXd> chol_;  // lower triangular factors
  std::vector<double> log_norm_;       // -d/2 log(2 pi) - sum log L_ii
  int dim_ = 0;
};

// Observation map h: R^d -> R together with the mean value to subtract.
// `gradient` is optional; solvers that need it fall back to sample-based
// stencils when it is absent.
struct ObservationFunction {
  std::function<double(PointRef)> value;
  std::function<Eigen::VectorXd(PointRef)> gradient;
  double centered_mean = 0.0;

  double centered(PointRef x) const { return value(x) - centered_mean; }
};

// h(x) = coef . x with analytic gradient; centered_mean left at 0
ObservationFunction linear_observation(Eigen::VectorXd coef);
ObservationFunction linear_observation1d();

struct ParticleEnsemble {
  Eigen::MatrixXd points;  // N x d
  std::uint64_t seed = 0;
  std::shared_ptr<const DensityModel> source;  // model sampled, if any

  Eigen::Index size() const { return points.rows(); }
  Eigen::Index dim() const { return points.cols(); }
};

ParticleEnsemble sample(const DensityModel& model, Eigen::Index n,
                        std::uint64_t seed);
ParticleEnsemble ensemble_from_points(Eigen::MatrixXd points);

// hhat = integral of h against the mixture (closed form for linear h)
double analytic_linear_mean(const DensityModel& model,
                            const Eigen::VectorXd& coef);
// hhat estimated as the sample mean of h over an ensemble
double empirical_mean(const ObservationFunction& h,
                      const ParticleEnsemble& ensemble);
Eigen::VectorXd centered_values(const ObservationFunction& h,
                                const Eigen::MatrixXd& points);

struct GridSpec {
  double lo = 0.0;
  double hi = 0.0;
  Eigen::Index n_points = 0;
};

// Exact solution of the weighted Poisson equation in d=1 on a truncated
// grid, used as the oracle for both gain solvers.
struct ScalarExactSolution {
  Eigen::VectorXd grid;
  Eigen::VectorXd phi;   // zero rho-mean
  Eigen::VectorXd gain;  // dphi/dx
  Eigen::VectorXd rho;
  double lo = 0.0;
  double hi = 0.0;
};

// gain(x) = -(1/rho(x)) * integral_lo^x rho h_c, phi = integral of gain,
// shifted to zero rho-weighted mean.  Prefix integrals are accumulated with
// cumulative Simpson; in the right half the integral is accumulated from hi
// downward, which keeps tail gains free of cancellation (gain at the two
// truncation endpoints is exactly zero by construction).
ScalarExactSolution exact_scalar_solution(const DensityModel& model,
                                          const ObservationFunction& h,
                                          const GridSpec& grid);

// max over interior grid points of |(1/rho) d/dx(rho dphi/dx) + h_c| by
// central differences
double poisson_residual(const DensityModel& model,
                        const ScalarExactSolution& solution,
                        const ObservationFunction& h);

// default truncation: [min mu_i - 8 sigma_max, max mu_i + 8 sigma_max]
GridSpec default_grid(const DensityModel& model, Eigen::Index n_points = 4001);

// composite trapezoid on a uniform grid
double trapezoid(const Eigen::VectorXd& f, double dx);
// cumulative Simpson on a uniform grid (fourth order at every node)
Eigen::VectorXd cumulative_simpson(const Eigen::VectorXd& f, double dx);

}  // namespace fpfgain
