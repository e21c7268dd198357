#include "core/density.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "core/errors.hpp"
#include "core/rng.hpp"

namespace fpfgain {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr double kDensityFloor = 1e-300;

}  // namespace

DensityModel::DensityModel(std::vector<GaussianComponent> components)
    : components_(std::move(components)) {
  if (components_.empty()) {
    throw Error(ErrorCode::invalid_argument, "mixture has no components");
  }
  dim_ = static_cast<int>(components_.front().mean.size());
  if (dim_ < 1) {
    throw Error(ErrorCode::invalid_argument, "component mean is empty");
  }
  double wsum = 0.0;
  for (const auto& c : components_) {
    if (!(c.weight > 0.0)) {
      throw Error(ErrorCode::invalid_argument, "component weight must be > 0");
    }
    wsum += c.weight;
    if (c.mean.size() != dim_ || c.cov.rows() != dim_ || c.cov.cols() != dim_) {
      throw Error(ErrorCode::invalid_argument,
                  "component dimensions are inconsistent");
    }
    const double scale = std::max(1.0, c.cov.cwiseAbs().maxCoeff());
    if ((c.cov - c.cov.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
      throw Error(ErrorCode::invalid_argument, "covariance is not symmetric");
    }
  }
  if (std::abs(wsum - 1.0) > 1e-12) {
    throw Error(ErrorCode::invalid_argument, "weights must sum to 1");
  }
  chol_.reserve(components_.size());
  log_norm_.reserve(components_.size());
  for (const auto& c : components_) {
    Eigen::LLT<Eigen::MatrixXd> llt(c.cov);
    if (llt.info() != Eigen::Success) {
      throw Error(ErrorCode::invalid_argument,
                  "covariance is not positive-definite");
    }
    Eigen::MatrixXd L = llt.matrixL();
    double log_det_sqrt = 0.0;
    for (int i = 0; i < dim_; ++i) log_det_sqrt += std::log(L(i, i));
    chol_.push_back(std::move(L));
    log_norm_.push_back(-0.5 * dim_ * std::log(kTwoPi) - log_det_sqrt);
  }
}

DensityModel DensityModel::gaussian(Eigen::VectorXd mean, Eigen::MatrixXd cov) {
  return DensityModel({GaussianComponent{1.0, std::move(mean), std::move(cov)}});
}

DensityModel DensityModel::gaussian1d(double mean, double variance) {
  Eigen::VectorXd m(1);
  m << mean;
  Eigen::MatrixXd c(1, 1);
  c << variance;
  return gaussian(std::move(m), std::move(c));
}

DensityModel DensityModel::symmetric_bimodal(double sigma) {
  Eigen::VectorXd m1(1), m2(1);
  m1 << -1.0;
  m2 << 1.0;
  Eigen::MatrixXd c(1, 1);
  c << sigma * sigma;
  return DensityModel({GaussianComponent{0.5, m1, c},
                       GaussianComponent{0.5, m2, c}});
}

double DensityModel::pdf(PointRef x) const {
  if (x.size() != dim_) {
    throw Error(ErrorCode::invalid_argument, "pdf: point has wrong dimension");
  }
  double p = 0.0;
  for (std::size_t k = 0; k < components_.size(); ++k) {
    const Eigen::VectorXd diff = x - components_[k].mean;
    const Eigen::VectorXd y =
        chol_[k].triangularView<Eigen::Lower>().solve(diff);
    p += components_[k].weight * std::exp(-0.5 * y.squaredNorm() + log_norm_[k]);
  }
  return p;
}

double DensityModel::pdf1(double x) const {
  return pdf(Eigen::Map<const Eigen::VectorXd>(&x, 1));
}

Eigen::VectorXd DensityModel::mean() const {
  Eigen::VectorXd m = Eigen::VectorXd::Zero(dim_);
  for (const auto& c : components_) m += c.weight * c.mean;
  return m;
}

Eigen::MatrixXd DensityModel::covariance() const {
  const Eigen::VectorXd m = mean();
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(dim_, dim_);
  for (const auto& c : components_) {
    s += c.weight * (c.cov + c.mean * c.mean.transpose());
  }
  return s - m * m.transpose();
}

ObservationFunction linear_observation(Eigen::VectorXd coef) {
  ObservationFunction h;
  auto c = std::make_shared<Eigen::VectorXd>(std::move(coef));
  h.value = [c](PointRef x) { return c->dot(x); };
  h.gradient = [c](PointRef) { return *c; };
  return h;
}

ObservationFunction linear_observation1d() {
  return linear_observation(Eigen::VectorXd::Ones(1));
}

ParticleEnsemble sample(const DensityModel& model, Eigen::Index n,
                        std::uint64_t seed) {
  if (n < 1) {
    throw Error(ErrorCode::invalid_argument, "sample: n must be >= 1");
  }
  const int d = model.dimension();
  const auto& comps = model.components();
  std::vector<double> cumw(comps.size());
  double acc = 0.0;
  for (std::size_t k = 0; k < comps.size(); ++k) {
    acc += comps[k].weight;
    cumw[k] = acc;
  }
  cumw.back() = 1.0;

  Rng rng(seed);
  ParticleEnsemble e;
  e.points.resize(n, d);
  e.seed = seed;
  e.source = std::make_shared<DensityModel>(model);
  Eigen::VectorXd z(d);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double u = rng.uniform();
    const std::size_t k =
        std::lower_bound(cumw.begin(), cumw.end(), u) - cumw.begin();
    for (int j = 0; j < d; ++j) z[j] = rng.normal();
    e.points.row(i) =
        (comps[k].mean + model.cholesky(k).triangularView<Eigen::Lower>() * z)
            .transpose();
  }
  return e;
}

ParticleEnsemble ensemble_from_points(Eigen::MatrixXd points) {
  if (points.rows() < 1 || points.cols() < 1) {
    throw Error(ErrorCode::invalid_argument, "ensemble must be non-empty");
  }
  if (!points.allFinite()) {
    throw Error(ErrorCode::invalid_argument, "ensemble has non-finite points");
  }
  ParticleEnsemble e;
  e.points = std::move(points);
  return e;
}

double analytic_linear_mean(const DensityModel& model,
                            const Eigen::VectorXd& coef) {
  return coef.dot(model.mean());
}

double empirical_mean(const ObservationFunction& h,
                      const ParticleEnsemble& ensemble) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < ensemble.size(); ++i) {
    s += h.value(ensemble.points.row(i).transpose());
  }
  return s / static_cast<double>(ensemble.size());
}

Eigen::VectorXd centered_values(const ObservationFunction& h,
                                const Eigen::MatrixXd& points) {
  Eigen::VectorXd v(points.rows());
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    v[i] = h.centered(points.row(i).transpose());
  }
  return v;
}

double trapezoid(const Eigen::VectorXd& f, double dx) {
  const Eigen::Index n = f.size();
  if (n < 2) return 0.0;
  return dx * (f.sum() - 0.5 * (f[0] + f[n - 1]));
}

Eigen::VectorXd cumulative_simpson(const Eigen::VectorXd& f, double dx) {
  const Eigen::Index n = f.size();
  Eigen::VectorXd out = Eigen::VectorXd::Zero(n);
  if (n < 2) return out;
  if (n == 2) {
    out[1] = 0.5 * dx * (f[0] + f[1]);
    return out;
  }
  // odd nodes by the local cubic, even nodes by composite Simpson
  out[1] = dx / 12.0 * (5.0 * f[0] + 8.0 * f[1] - f[2]);
  for (Eigen::Index j = 2; j < n; ++j) {
    if (j % 2 == 0) {
      out[j] = out[j - 2] + dx / 3.0 * (f[j - 2] + 4.0 * f[j - 1] + f[j]);
    } else if (j + 1 < n) {
      out[j] = out[j - 1] + dx / 12.0 * (5.0 * f[j - 1] + 8.0 * f[j] - f[j + 1]);
    } else {
      out[j] = out[j - 1] + dx / 12.0 * (-f[j - 2] + 8.0 * f[j - 1] + 5.0 * f[j]);
    }
  }
  return out;
}

GridSpec default_grid(const DensityModel& model, Eigen::Index n_points) {
  if (model.dimension() != 1) {
    throw Error(ErrorCode::invalid_argument, "default_grid requires d = 1");
  }
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  double smax = 0.0;
  for (const auto& c : model.components()) {
    lo = std::min(lo, c.mean[0]);
    hi = std::max(hi, c.mean[0]);
    smax = std::max(smax, std::sqrt(c.cov(0, 0)));
  }
  return GridSpec{lo - 8.0 * smax, hi + 8.0 * smax, n_points};
}

ScalarExactSolution exact_scalar_solution(const DensityModel& model,
                                          const ObservationFunction& h,
                                          const GridSpec& grid) {
  if (model.dimension() != 1) {
    throw Error(ErrorCode::invalid_argument,
                "exact_scalar_solution requires d = 1");
  }
  if (grid.n_points < 5 || !(grid.hi > grid.lo)) {
    throw Error(ErrorCode::invalid_argument, "bad grid specification");
  }
  const Eigen::Index n = grid.n_points;
  const double dx = (grid.hi - grid.lo) / static_cast<double>(n - 1);

  ScalarExactSolution sol;
  sol.lo = grid.lo;
  sol.hi = grid.hi;
  sol.grid.resize(n);
  sol.rho.resize(n);
  Eigen::VectorXd hv(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const double x = grid.lo + dx * static_cast<double>(j);
    sol.grid[j] = x;
    sol.rho[j] = model.pdf1(x);
    if (sol.rho[j] < kDensityFloor) {
      throw Error(ErrorCode::domain, "density underflow");
    }
    hv[j] = h.value(Eigen::Map<const Eigen::VectorXd>(&x, 1));
  }

  const double mass = trapezoid(sol.rho, dx);
  if (mass < 1.0 - 1e-8) {
    throw Error(ErrorCode::domain, "truncation too tight");
  }

  // Center h against the grid so the compatibility condition holds to
  // quadrature accuracy; starts from the caller-supplied mean.
  Eigen::VectorXd hc = hv.array() - h.centered_mean;
  hc.array() -= trapezoid((sol.rho.array() * hc.array()).matrix(), dx) / mass;

  const Eigen::VectorXd f = sol.rho.array() * hc.array();
  const Eigen::VectorXd left = cumulative_simpson(f, dx);
  const Eigen::VectorXd right =
      cumulative_simpson(f.reverse(), dx).reverse();  // integral x..hi

  Eigen::Index split = 0;
  sol.rho.maxCoeff(&split);
  sol.gain.resize(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    sol.gain[j] = (j <= split) ? -left[j] / sol.rho[j] : right[j] / sol.rho[j];
  }

  sol.phi = cumulative_simpson(sol.gain, dx);
  sol.phi.array() -=
      trapezoid((sol.phi.array() * sol.rho.array()).matrix(), dx) / mass;
  return sol;
}

double poisson_residual(const DensityModel& model,
                        const ScalarExactSolution& solution,
                        const ObservationFunction& h) {
  const Eigen::Index n = solution.grid.size();
  if (n < 3) {
    throw Error(ErrorCode::invalid_argument, "solution grid too small");
  }
  const double dx = solution.grid[1] - solution.grid[0];
  const double span = solution.grid[n - 1] - solution.grid[0];
  if (std::abs(span - dx * static_cast<double>(n - 1)) > 1e-9 * std::abs(span)) {
    throw Error(ErrorCode::invalid_argument, "solution grid is not uniform");
  }
  double worst = 0.0;
  for (Eigen::Index j = 1; j + 1 < n; ++j) {
    const double x = solution.grid[j];
    const double rho = model.pdf1(x);
    const double flux_left = solution.rho[j - 1] * solution.gain[j - 1];
    const double flux_right = solution.rho[j + 1] * solution.gain[j + 1];
    const double r = (flux_right - flux_left) / (2.0 * dx) / rho +
                     h.centered(Eigen::Map<const Eigen::VectorXd>(&x, 1));
    worst = std::max(worst, std::abs(r));
  }
  return worst;
}

}  // namespace fpfgain
