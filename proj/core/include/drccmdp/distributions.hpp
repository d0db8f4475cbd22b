// Copyright 2026 The drccmdp Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include "drccmdp/mdp.hpp"

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace drccmdp {

enum class GeneratorKind { Gaussian, Laplace, GeneralizedStable };

/// Characteristic generator of an elliptical family:
///   Gaussian           psi(t) = exp(-t)
///   Laplace            psi(t) = 1 / (1 + t)
///   GeneralizedStable  psi(t) = exp(-omega1 * t^(omega2/2)),  omega1, omega2 > 0
struct Generator {
    GeneratorKind kind = GeneratorKind::Gaussian;
    double omega1 = 0.0;
    double omega2 = 0.0;

    static Generator gaussian() { return {GeneratorKind::Gaussian, 0.0, 0.0}; }
    static Generator laplace() { return {GeneratorKind::Laplace, 0.0, 0.0}; }
    static Generator generalized_stable(double omega1, double omega2);

    std::string name() const;
};

/// psi(t) for the given generator. Laplace rejects t = -1 (pole);
/// GeneralizedStable rejects t < 0 (fractional power of a negative).
double generator_value(const Generator& gen, double t);

/// An elliptical law E_d(mu, Sigma, psi): location, dispersion, generator.
/// The dispersion matrix must be symmetric within 1e-12; positive
/// definiteness is only required (and checked) where a reformulation
/// needs it.
struct EllipticalLaw {
    Eigen::VectorXd location;
    Eigen::MatrixXd dispersion;
    Generator generator;

    EllipticalLaw() = default;
    EllipticalLaw(Eigen::VectorXd mu, Eigen::MatrixXd sigma, Generator gen);

    int dim() const { return static_cast<int>(location.size()); }
    /// Throws AssumptionError unless the dispersion admits a Cholesky factor.
    void require_positive_definite(const std::string& what) const;
};

/// Finite mixture of same-dimension elliptical laws with weights summing to 1.
struct MixtureLaw {
    Eigen::VectorXd weights;
    std::vector<EllipticalLaw> components;

    MixtureLaw() = default;
    MixtureLaw(Eigen::VectorXd weights, std::vector<EllipticalLaw> components);

    int dim() const { return components.empty() ? 0 : components.front().dim(); }
    int count() const { return static_cast<int>(components.size()); }
};

/// CDF of the standard 1-D law E_1(0, 1, psi). Supported for Gaussian and
/// Laplace; generalized stable laws have no tractable CDF and raise
/// UnsupportedGeneratorError.
double std_cdf(const Generator& gen, double z);

enum class QuantileMethod {
    Bisection,         // high-accuracy inversion of std_cdf (default)
    RationalApproximation // Abramowitz-Stegun 26.2.23 rational fit (Gaussian only)
};

/// Inverse of std_cdf on (0, 1). The Gaussian rational approximation carries
/// the documented 4.5e-4 absolute error bound; solver paths use bisection.
double std_quantile(const Generator& gen, double p,
                    QuantileMethod method = QuantileMethod::Bisection);

/// d/dp of the standard Gaussian quantile, 1 / phi(Phi^{-1}(p)).
double gaussian_quantile_derivative(double p);

/// E[X] for X log-elliptical with 1-D parameters (mu, sigma2):
/// exp(mu) * psi(-sigma2 / 2). Laplace diverges for sigma2 >= 2.
double log_elliptical_mean(double mu, double sigma2, const Generator& gen);

/// Throws AssumptionError unless inf_{t<=0} psi(t) >= exp(-delta), the
/// condition under which the KL worst-case expectation reformulation holds.
/// Gaussian and Laplace have inf = 1 over their domains and always pass;
/// generalized stable generators are undefined on t < 0 and always fail.
void require_worst_case_assumption(const Generator& gen, double delta);

struct WorstCaseExpectation {
    double value = 0.0; // inf over the KL ball of E[tau' r]
    double alpha = 0.0; // minimizing dual scale; +inf when delta = 0
};

/// Worst-case expected reward inf_{F in KL ball} E_F[tau' r] for an
/// elliptical reference law. Gaussian uses the closed form
/// tau'mu - sqrt(2 delta0 tau'Sigma tau); other generators minimize
/// g(alpha) = -tau'mu + alpha log psi(-tau'Sigma tau / (2 alpha^2)) + alpha delta0
/// on a log-spaced alpha grid refined by golden-section search, and return
/// -g(alpha*).
WorstCaseExpectation worst_case_expectation(const OccupationVector& tau,
                                            const EllipticalLaw& law, double delta0);

struct UnivariateElliptical {
    double mean = 0.0;
    double variance = 0.0;
    Generator generator;
};

/// Parameters of a' X for X elliptical: (a'mu, a'Sigma a, psi).
UnivariateElliptical linear_image_params(const EllipticalLaw& law,
                                         const Eigen::VectorXd& a);

/// Symmetric PSD square root via eigendecomposition; small negative
/// eigenvalues (>= -1e-10) are clamped to zero.
Eigen::MatrixXd psd_sqrt(const Eigen::MatrixXd& m);

} // namespace drccmdp
