#pragma once

#include <Eigen/Dense>

#include <utility>
#include <vector>

#include "core/density.hpp"

namespace fpfgain {

enum class BasisKind { monomial, hermite };

// Finite polynomial basis {psi_1, ..., psi_M} with analytic gradients.  The
// constant function is excluded (it is in the kernel of the weak form).
// d=1 monomials are {x, x^2, ..., x^M}; in d>1 the basis is the
// total-degree-graded multivariate monomials.  The Hermite kind uses
// probabilists' Hermite polynomials scaled per coordinate to the empirical
// mean/std of the ensemble the basis was built from.
class BasisSet {
 public:
  static BasisSet monomial(int dim, int m_count);
  static BasisSet hermite(const ParticleEnsemble& ensemble, int m_count);

  BasisKind kind() const { return kind_; }
  int size() const { return static_cast<int>(exponents_.size()); }
  int dim() const { return dim_; }

  // values of all M basis functions at x
  Eigen::VectorXd values(PointRef x) const;
  // gradients, M x d
  Eigen::MatrixXd gradients(PointRef x) const;

 private:
  BasisSet() = default;

  BasisKind kind_ = BasisKind::monomial;
  int dim_ = 1;
  std::vector<Eigen::VectorXi> exponents_;  // multi-index per basis function
  Eigen::VectorXd shift_;                   // hermite: per-coordinate mean
  Eigen::VectorXd scale_;                   // hermite: per-coordinate std
};

struct GalerkinSolution {
  BasisSet basis;
  Eigen::VectorXd coefficients;
  double condition_estimate = 0.0;

  Eigen::VectorXd gain_at(PointRef x) const;
  double value_at(PointRef x) const;
};

// A_ml = (1/N) sum_i grad psi_l(X^i) . grad psi_m(X^i)
// b_m  = (1/N) sum_i h_c(X^i) psi_m(X^i)
std::pair<Eigen::MatrixXd, Eigen::VectorXd> assemble(
    const ParticleEnsemble& ensemble, const BasisSet& basis,
    const ObservationFunction& h);

// Solves A c = b for symmetric positive-semidefinite A.  Fails loudly when A
// is singular to working precision; never regularizes.
GalerkinSolution solve(const Eigen::MatrixXd& a, const Eigen::VectorXd& b,
                       BasisSet basis);

GalerkinSolution fit_galerkin(const ParticleEnsemble& ensemble,
                              const BasisSet& basis,
                              const ObservationFunction& h);

// sqrt( integral (phi^{M,N} - phi)^2 rho dx ) on the oracle grid, after
// shifting phi^{M,N} to zero rho-mean
double l2_error_vs_oracle(const GalerkinSolution& solution,
                          const ScalarExactSolution& oracle,
                          const DensityModel& model);

// quadrature-exact A and b on the oracle grid (d = 1), the N -> infinity
// limit of assemble(); used by law-of-large-numbers and trend tests
std::pair<Eigen::MatrixXd, Eigen::VectorXd> assemble_quadrature(
    const ScalarExactSolution& oracle, const BasisSet& basis,
    const ObservationFunction& h);

}  // namespace fpfgain
