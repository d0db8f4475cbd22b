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

#include "drccmdp/distributions.hpp"

#include "drccmdp/errors.hpp"
#include "drccmdp/scalar_opt.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <limits>

namespace drccmdp {

namespace {

constexpr double kSymmetryTol = 1e-12;
constexpr double kPi = 3.14159265358979323846;

double gaussian_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

double gaussian_pdf(double z) { return std::exp(-0.5 * z * z) / std::sqrt(2.0 * kPi); }

double laplace_cdf(double z) {
    return z < 0.0 ? 0.5 * std::exp(z) : 1.0 - 0.5 * std::exp(-z);
}

// Abramowitz-Stegun 26.2.23: upper-tail quantile for tail probability
// p in (0, 1/2], absolute error below 4.5e-4.
double rational_tail_quantile(double p) {
    const double t = std::sqrt(-2.0 * std::log(p));
    const double num = 2.515517 + t * (0.802853 + t * 0.010328);
    const double den = 1.0 + t * (1.432788 + t * (0.189269 + t * 0.001308));
    return t - num / den;
}

// Bisection inversion of a monotone CDF; bracket [-40, 40] covers every
// representable double probability for both supported generators.
double bisect_quantile(const Generator& gen, double p) {
    double lo = -40.0;
    double hi = 40.0;
    for (int i = 0; i < 200 && (hi - lo) > 1e-13; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (std_cdf(gen, mid) < p)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace

Generator Generator::generalized_stable(double omega1, double omega2) {
    if (!(omega1 > 0.0) || !(omega2 > 0.0))
        throw DomainError("generalized stable laws require omega1, omega2 > 0");
    return {GeneratorKind::GeneralizedStable, omega1, omega2};
}

std::string Generator::name() const {
    switch (kind) {
    case GeneratorKind::Gaussian: return "gaussian";
    case GeneratorKind::Laplace: return "laplace";
    case GeneratorKind::GeneralizedStable: return "generalized_stable";
    }
    return "unknown";
}

double generator_value(const Generator& gen, double t) {
    switch (gen.kind) {
    case GeneratorKind::Gaussian: return std::exp(-t);
    case GeneratorKind::Laplace:
        if (t == -1.0) throw DomainError("Laplace generator has a pole at t = -1");
        return 1.0 / (1.0 + t);
    case GeneratorKind::GeneralizedStable:
        if (t < 0.0)
            throw DomainError(
                "generalized stable generator undefined for t < 0 "
                "(fractional power of a negative)");
        return std::exp(-gen.omega1 * std::pow(t, gen.omega2 / 2.0));
    }
    throw DomainError("unknown generator");
}

EllipticalLaw::EllipticalLaw(Eigen::VectorXd mu, Eigen::MatrixXd sigma, Generator gen)
    : location(std::move(mu)), dispersion(std::move(sigma)), generator(gen) {
    if (dispersion.rows() != dispersion.cols() || dispersion.rows() != location.size())
        throw ValidationError("dispersion matrix shape does not match location");
    const double asym = (dispersion - dispersion.transpose()).cwiseAbs().maxCoeff();
    if (asym > kSymmetryTol)
        throw ValidationError("dispersion matrix is not symmetric (max asymmetry " +
                              std::to_string(asym) + ")");
}

void EllipticalLaw::require_positive_definite(const std::string& what) const {
    Eigen::LLT<Eigen::MatrixXd> llt(dispersion);
    if (llt.info() != Eigen::Success)
        throw AssumptionError(what + ": dispersion matrix is not positive definite");
}

MixtureLaw::MixtureLaw(Eigen::VectorXd w, std::vector<EllipticalLaw> comps)
    : weights(std::move(w)), components(std::move(comps)) {
    if (weights.size() != static_cast<Eigen::Index>(components.size()) ||
        components.empty())
        throw ValidationError("mixture needs one weight per component");
    double sum = 0.0;
    for (int j = 0; j < weights.size(); ++j) {
        if (!(weights(j) >= 0.0)) throw ValidationError("mixture weights must be >= 0");
        sum += weights(j);
    }
    if (std::abs(sum - 1.0) > kSymmetryTol)
        throw ValidationError("mixture weights sum to " + std::to_string(sum) +
                              ", expected 1");
    for (const auto& c : components)
        if (c.dim() != components.front().dim())
            throw ValidationError("mixture components must share dimension");
}

double std_cdf(const Generator& gen, double z) {
    switch (gen.kind) {
    case GeneratorKind::Gaussian: return gaussian_cdf(z);
    case GeneratorKind::Laplace: return laplace_cdf(z);
    case GeneratorKind::GeneralizedStable:
        throw UnsupportedGeneratorError(
            "generalized stable laws have no tractable CDF");
    }
    throw DomainError("unknown generator");
}

double std_quantile(const Generator& gen, double p, QuantileMethod method) {
    if (!(p > 0.0 && p < 1.0)) throw DomainError("quantile requires p in (0, 1)");
    switch (gen.kind) {
    case GeneratorKind::Gaussian:
        if (method == QuantileMethod::RationalApproximation)
            return p < 0.5 ? -rational_tail_quantile(p) : rational_tail_quantile(1.0 - p);
        return bisect_quantile(gen, p);
    case GeneratorKind::Laplace:
        return p < 0.5 ? std::log(2.0 * p) : -std::log(2.0 * (1.0 - p));
    case GeneratorKind::GeneralizedStable:
        throw UnsupportedGeneratorError(
            "generalized stable laws have no tractable quantile");
    }
    throw DomainError("unknown generator");
}

double gaussian_quantile_derivative(double p) {
    if (!(p > 0.0 && p < 1.0))
        throw DomainError("quantile derivative requires p in (0, 1)");
    return 1.0 / gaussian_pdf(std_quantile(Generator::gaussian(), p));
}

double log_elliptical_mean(double mu, double sigma2, const Generator& gen) {
    if (!(sigma2 >= 0.0)) throw DomainError("variance must be nonnegative");
    if (gen.kind == GeneratorKind::Laplace && sigma2 >= 2.0)
        throw DivergentMeanError(
            "log-Laplace mean diverges for sigma^2 >= 2 (generator pole)");
    return std::exp(mu) * generator_value(gen, -0.5 * sigma2);
}

void require_worst_case_assumption(const Generator& gen, double delta) {
    if (!(delta >= 0.0)) throw DomainError("KL radius must be nonnegative");
    switch (gen.kind) {
    case GeneratorKind::Gaussian:
    case GeneratorKind::Laplace:
        // inf over the generator domain within t <= 0 equals psi(0) = 1,
        // and 1 >= exp(-delta) for every delta >= 0.
        return;
    case GeneratorKind::GeneralizedStable:
        throw AssumptionError(
            "generalized stable generator undefined on t < 0; the worst-case "
            "expectation equivalence cannot be established");
    }
}

WorstCaseExpectation worst_case_expectation(const OccupationVector& tau,
                                            const EllipticalLaw& law, double delta0) {
    if (tau.tau.size() != law.dim())
        throw DomainError("occupation vector / law dimension mismatch");
    law.require_positive_definite("worst_case_expectation");
    require_worst_case_assumption(law.generator, delta0);

    const double mean = tau.tau.dot(law.location);
    const double var = tau.tau.dot(law.dispersion * tau.tau);
    const double inf = std::numeric_limits<double>::infinity();

    if (delta0 == 0.0) return {mean, inf};
    if (var <= 0.0) return {mean, 0.0};

    if (law.generator.kind == GeneratorKind::Gaussian)
        return {mean - std::sqrt(2.0 * delta0 * var),
                std::sqrt(var / (2.0 * delta0))};

    // g(alpha) = -mean + alpha log psi(-var / (2 alpha^2)) + alpha delta0,
    // minimized over the generator's valid domain. For Laplace that domain is
    // alpha > sqrt(var / 2), where the log argument stays positive.
    const double inf_penalty = std::numeric_limits<double>::max();
    auto g = [&](double alpha) -> double {
        const double t = -var / (2.0 * alpha * alpha);
        if (law.generator.kind == GeneratorKind::Laplace && t <= -1.0)
            return inf_penalty;
        const double psi = generator_value(law.generator, t);
        if (!(psi > 0.0)) return inf_penalty;
        return -mean + alpha * std::log(psi) + alpha * delta0;
    };
    double lo = 1e-6;
    if (law.generator.kind == GeneratorKind::Laplace)
        lo = std::max(lo, std::sqrt(var / 2.0) * (1.0 + 1e-12));
    const auto grid = log_spaced(lo, 1e6, 200);
    const double alpha_star = grid_then_golden_minimize(g, grid, 1e-10);
    return {-g(alpha_star), alpha_star};
}

UnivariateElliptical linear_image_params(const EllipticalLaw& law,
                                         const Eigen::VectorXd& a) {
    if (a.size() != law.dim())
        throw DomainError("linear_image_params: dimension mismatch");
    return {a.dot(law.location), a.dot(law.dispersion * a), law.generator};
}

Eigen::MatrixXd psd_sqrt(const Eigen::MatrixXd& m) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m);
    if (eig.info() != Eigen::Success)
        throw AssumptionError("eigendecomposition failed in psd_sqrt");
    Eigen::VectorXd vals = eig.eigenvalues();
    for (int i = 0; i < vals.size(); ++i) {
        if (vals(i) < -1e-10)
            throw AssumptionError("matrix is not positive semidefinite in psd_sqrt");
        vals(i) = std::sqrt(std::max(vals(i), 0.0));
    }
    return eig.eigenvectors() * vals.asDiagonal() * eig.eigenvectors().transpose();
}

} // namespace drccmdp
