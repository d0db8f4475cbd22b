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

// Primal-dual interior-point method for small dense cone programs, on the
// homogeneous self-dual embedding:
//
//     A'y + G'z + c*theta        = 0
//     -A x + b*theta             = 0
//     -G x + h*theta             = s
//     -c'x - b'y - h'z           = kappa
//     s in K, z in K, theta >= 0, kappa >= 0, s o z = 0, theta*kappa = 0.
//
// theta > 0 at convergence recovers an optimal pair (x, y, z, s)/theta;
// kappa > 0 yields a primal-infeasibility or unboundedness certificate.
// Search directions use Nesterov-Todd scaling and Mehrotra
// predictor-corrector steps; each step solves one quasidefinite KKT system
// with two right-hand sides.

#include "drccmdp/ipm.hpp"

#include "drccmdp/errors.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <limits>

namespace drccmdp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Nesterov-Todd scaling, materialized densely per cone block. W is symmetric
// and satisfies W z = W^{-1} s = lambda for the current iterate.
struct Scaling {
    Eigen::VectorXd lp_w;               // sqrt(s_i / z_i) on the orthant part
    std::vector<Eigen::MatrixXd> soc_w; // beta (2 v v' - J) per SOC block
    Eigen::VectorXd lambda;             // scaled point, full cone layout
};

struct ConeOps {
    ConeDims dims;

    int block_count() const { return 1 + static_cast<int>(dims.q.size()); }

    // identity element e of the cone's Jordan algebra
    Eigen::VectorXd identity() const {
        Eigen::VectorXd e = Eigen::VectorXd::Zero(dims.total());
        e.head(dims.l).setOnes();
        int off = dims.l;
        for (int qi : dims.q) {
            e(off) = 1.0;
            off += qi;
        }
        return e;
    }

    // u o v
    Eigen::VectorXd product(const Eigen::VectorXd& u, const Eigen::VectorXd& v) const {
        Eigen::VectorXd out(dims.total());
        out.head(dims.l) = u.head(dims.l).cwiseProduct(v.head(dims.l));
        int off = dims.l;
        for (int qi : dims.q) {
            const auto u1 = u.segment(off + 1, qi - 1);
            const auto v1 = v.segment(off + 1, qi - 1);
            out(off) = u.segment(off, qi).dot(v.segment(off, qi));
            out.segment(off + 1, qi - 1) = u(off) * v1 + v(off) * u1;
            off += qi;
        }
        return out;
    }

    // solve lambda o u = d for u
    Eigen::VectorXd divide(const Eigen::VectorXd& lambda, const Eigen::VectorXd& d) const {
        Eigen::VectorXd out(dims.total());
        out.head(dims.l) = d.head(dims.l).cwiseQuotient(lambda.head(dims.l));
        int off = dims.l;
        for (int qi : dims.q) {
            const double a = lambda(off);
            const auto b = lambda.segment(off + 1, qi - 1);
            const double det = a * a - b.squaredNorm();
            const double u0 = (a * d(off) - b.dot(d.segment(off + 1, qi - 1))) / det;
            out(off) = u0;
            out.segment(off + 1, qi - 1) = (d.segment(off + 1, qi - 1) - u0 * b) / a;
            off += qi;
        }
        return out;
    }

    // Largest t with u + t*dir in K; +inf when the ray never leaves the cone.
    double max_step(const Eigen::VectorXd& u, const Eigen::VectorXd& dir) const {
        double step = kInf;
        for (int i = 0; i < dims.l; ++i)
            if (dir(i) < 0.0) step = std::min(step, -u(i) / dir(i));
        int off = dims.l;
        for (int qi : dims.q) {
            // roots of (u0 + t d0)^2 - |u1 + t d1|^2, smallest positive one
            const double u0 = u(off);
            const double d0 = dir(off);
            const auto u1 = u.segment(off + 1, qi - 1);
            const auto d1 = dir.segment(off + 1, qi - 1);
            const double a = d0 * d0 - d1.squaredNorm();
            const double b = 2.0 * (u0 * d0 - u1.dot(d1));
            const double c = u0 * u0 - u1.squaredNorm();
            double root = kInf;
            if (std::abs(a) < 1e-300) {
                if (b < 0.0) root = -c / b;
            } else {
                const double disc = b * b - 4.0 * a * c;
                if (disc >= 0.0) {
                    const double sd = std::sqrt(disc);
                    const double qf = -0.5 * (b + (b >= 0.0 ? sd : -sd));
                    const double r1 = qf / a;
                    const double r2 = (qf != 0.0) ? c / qf : kInf;
                    for (double r : {r1, r2})
                        if (r > 0.0) root = std::min(root, r);
                }
            }
            step = std::min(step, root);
            off += qi;
        }
        return step;
    }

    // Shift needed to push u comfortably inside K: max over blocks of the
    // boundary violation along e.
    double interior_shift(const Eigen::VectorXd& u) const {
        double shift = -kInf;
        if (dims.l > 0) shift = std::max(shift, -u.head(dims.l).minCoeff());
        int off = dims.l;
        for (int qi : dims.q) {
            shift = std::max(shift, u.segment(off + 1, qi - 1).norm() - u(off));
            off += qi;
        }
        return shift;
    }

    Scaling compute_scaling(const Eigen::VectorXd& s, const Eigen::VectorXd& z) const {
        Scaling w;
        w.lambda.resize(dims.total());
        w.lp_w = (s.head(dims.l).array() / z.head(dims.l).array()).sqrt();
        w.lambda.head(dims.l) = (s.head(dims.l).array() * z.head(dims.l).array()).sqrt();
        int off = dims.l;
        for (int qi : dims.q) {
            const auto sk = s.segment(off, qi);
            const auto zk = z.segment(off, qi);
            const double a =
                std::sqrt(sk(0) * sk(0) - sk.tail(qi - 1).squaredNorm());
            const double bnrm =
                std::sqrt(zk(0) * zk(0) - zk.tail(qi - 1).squaredNorm());
            const double beta = std::sqrt(a / bnrm);
            const double cc = std::sqrt((1.0 + sk.dot(zk) / (a * bnrm)) / 2.0);

            Eigen::VectorXd v = zk / bnrm;
            v.tail(qi - 1) *= -1.0; // J z
            v += sk / a;
            v /= 2.0 * cc;
            v(0) += 1.0;
            v /= std::sqrt(2.0 * v(0));

            // W_k = beta (2 v v' - J); v' J v = 1 so W_k is invertible with
            // W_k^{-1} = (1/beta)(2 (Jv)(Jv)' - J).
            Eigen::MatrixXd wk = 2.0 * beta * (v * v.transpose());
            wk(0, 0) -= beta;
            for (int i = 1; i < qi; ++i) wk(i, i) += beta;
            w.soc_w.push_back(std::move(wk));

            const double dd = 2.0 * cc + sk(0) / a + zk(0) / bnrm;
            Eigen::VectorXd lk(qi);
            lk(0) = cc;
            lk.tail(qi - 1) = ((cc + zk(0) / bnrm) / dd) * (sk.tail(qi - 1) / a) +
                              ((cc + sk(0) / a) / dd) * (zk.tail(qi - 1) / bnrm);
            w.lambda.segment(off, qi) = std::sqrt(a * bnrm) * lk;
            off += qi;
        }
        return w;
    }

    Eigen::VectorXd apply_w(const Scaling& w, const Eigen::VectorXd& u) const {
        Eigen::VectorXd out(dims.total());
        out.head(dims.l) = w.lp_w.cwiseProduct(u.head(dims.l));
        int off = dims.l;
        for (std::size_t k = 0; k < w.soc_w.size(); ++k) {
            const int qi = dims.q[k];
            out.segment(off, qi) = w.soc_w[k] * u.segment(off, qi);
            off += qi;
        }
        return out;
    }

    Eigen::VectorXd apply_w_inverse(const Scaling& w, const Eigen::VectorXd& u) const {
        Eigen::VectorXd out(dims.total());
        out.head(dims.l) = u.head(dims.l).cwiseQuotient(w.lp_w);
        int off = dims.l;
        for (std::size_t k = 0; k < w.soc_w.size(); ++k) {
            const int qi = dims.q[k];
            // solve W_k t = u_k; blocks are tiny, LLT is exact enough
            out.segment(off, qi) = w.soc_w[k].ldlt().solve(u.segment(off, qi));
            off += qi;
        }
        return out;
    }
};

struct KktSolver {
    const StandardConeProblem& prob;
    const ConeOps& ops;
    double reg;
    int n, p, m;
    Eigen::MatrixXd K;
    Eigen::PartialPivLU<Eigen::MatrixXd> lu;

    KktSolver(const StandardConeProblem& pr, const ConeOps& o, double regularization)
        : prob(pr), ops(o), reg(regularization), n(static_cast<int>(pr.c.size())),
          p(static_cast<int>(pr.A.rows())), m(static_cast<int>(pr.G.rows())),
          K(Eigen::MatrixXd::Zero(n + p + m, n + p + m)) {}

    // K = [ reg*I   A'      G'          ]
    //     [ A      -reg*I   0           ]
    //     [ G       0      -W'W - reg*I ]
    void factor(const Scaling* w) {
        K.setZero();
        K.topLeftCorner(n, n).diagonal().setConstant(reg);
        if (p > 0) {
            K.block(0, n, n, p) = prob.A.transpose();
            K.block(n, 0, p, n) = prob.A;
            K.block(n, n, p, p).diagonal().setConstant(-reg);
        }
        K.block(0, n + p, n, m) = prob.G.transpose();
        K.block(n + p, 0, m, n) = prob.G;
        auto wsq = K.block(n + p, n + p, m, m);
        if (w == nullptr) {
            wsq.diagonal().setConstant(-1.0 - reg);
        } else {
            for (int i = 0; i < ops.dims.l; ++i)
                wsq(i, i) = -w->lp_w(i) * w->lp_w(i) - reg;
            int off = ops.dims.l;
            for (std::size_t k = 0; k < w->soc_w.size(); ++k) {
                const int qi = ops.dims.q[k];
                wsq.block(off, off, qi, qi) = -(w->soc_w[k] * w->soc_w[k]);
                wsq.block(off, off, qi, qi).diagonal().array() -= reg;
                off += qi;
            }
        }
        lu.compute(K);
    }

    // One step of iterative refinement against the unregularized blocks is
    // unnecessary at this scale; refine against K itself to absorb LU error.
    Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const {
        Eigen::VectorXd x = lu.solve(rhs);
        x += lu.solve(rhs - K * x);
        return x;
    }
};

struct Rhs3 {
    Eigen::VectorXd stacked;
    Rhs3(const Eigen::VectorXd& rx, const Eigen::VectorXd& ry, const Eigen::VectorXd& rz) {
        stacked.resize(rx.size() + ry.size() + rz.size());
        stacked << rx, ry, rz;
    }
};

} // namespace

IpmResult ipm_solve(const StandardConeProblem& prob, const IpmSettings& settings) {
    const int n = static_cast<int>(prob.c.size());
    const int p = static_cast<int>(prob.A.rows());
    const int m = static_cast<int>(prob.G.rows());
    if (m <= 0) throw ValidationError("cone program has no cone constraints");
    if (prob.G.cols() != n || (p > 0 && prob.A.cols() != n) || prob.h.size() != m ||
        prob.b.size() != p || prob.dims.total() != m)
        throw ValidationError("standard-form cone problem dimensions are inconsistent");

    ConeOps ops{prob.dims};
    const double nu = static_cast<double>(prob.dims.degree());
    const Eigen::VectorXd e = ops.identity();

    KktSolver kkt(prob, ops, settings.static_regularization);

    // Initial point: least-squares primal/dual estimates shifted into the
    // cone interior, theta = kappa = 1.
    kkt.factor(nullptr);
    Eigen::VectorXd x, y, z, s;
    {
        const Eigen::VectorXd u =
            kkt.solve(Rhs3(Eigen::VectorXd::Zero(n), prob.b, prob.h).stacked);
        x = u.head(n);
        s = -u.tail(m);
        const double shift_p = ops.interior_shift(s);
        if (shift_p >= -1e-8 * std::max(1.0, s.norm())) s += (1.0 + shift_p) * e;

        const Eigen::VectorXd v = kkt.solve(
            Rhs3(-prob.c, Eigen::VectorXd::Zero(p), Eigen::VectorXd::Zero(m)).stacked);
        y = v.segment(n, p);
        z = v.tail(m);
        const double shift_d = ops.interior_shift(z);
        if (shift_d >= -1e-8 * std::max(1.0, z.norm())) z += (1.0 + shift_d) * e;
    }
    double theta = 1.0;
    double kappa = 1.0;

    const double norm_b = 1.0 + prob.b.norm();
    const double norm_h = 1.0 + prob.h.norm();
    const double norm_c = 1.0 + prob.c.norm();

    IpmResult result;
    for (int iter = 0; iter <= settings.max_iterations; ++iter) {
        result.iterations = iter;

        // Residuals of the embedding.
        Eigen::VectorXd res1 = prob.G.transpose() * z + prob.c * theta;
        if (p > 0) res1 += prob.A.transpose() * y;
        const Eigen::VectorXd res2 = (p > 0)
                                         ? Eigen::VectorXd(-prob.A * x + prob.b * theta)
                                         : Eigen::VectorXd::Zero(0);
        const Eigen::VectorXd res3 = -prob.G * x + prob.h * theta - s;
        const double res4 =
            -prob.c.dot(x) - (p > 0 ? prob.b.dot(y) : 0.0) - prob.h.dot(z) - kappa;

        // Scaled iterate and stopping tests.
        const Eigen::VectorXd xs = x / theta;
        const Eigen::VectorXd ys = y / theta;
        const Eigen::VectorXd zs = z / theta;
        const Eigen::VectorXd ss = s / theta;
        const double pcost = prob.c.dot(xs);
        double pres = (prob.G * xs + ss - prob.h).norm() / norm_h;
        if (p > 0) pres = std::max(pres, (prob.A * xs - prob.b).norm() / norm_b);
        Eigen::VectorXd dres_vec = prob.G.transpose() * zs + prob.c;
        if (p > 0) dres_vec += prob.A.transpose() * ys;
        const double dres = dres_vec.norm() / norm_c;
        const double gap = ss.dot(zs);
        const double relgap = gap / std::max(1.0, std::abs(pcost));

        if (pres <= settings.feastol && dres <= settings.feastol &&
            (gap <= settings.abstol || relgap <= settings.reltol)) {
            result.status = SolveStatus::Optimal;
            result.x = xs;
            result.y = ys;
            result.z = zs;
            result.s = ss;
            result.objective = pcost;
            result.feasibility_residual = pres;
            result.duality_gap = gap;
            return result;
        }

        // Certificates through the embedding.
        const double iota = (p > 0 ? prob.b.dot(y) : 0.0) + prob.h.dot(z);
        if (iota < -1e-14) {
            Eigen::VectorXd cert = prob.G.transpose() * (z / -iota);
            if (p > 0) cert += prob.A.transpose() * (y / -iota);
            if (cert.norm() / norm_c <= settings.feastol) {
                result.status = SolveStatus::Infeasible;
                result.y = y / -iota;
                result.z = z / -iota;
                result.feasibility_residual = cert.norm() / norm_c;
                return result;
            }
        }
        const double zeta = prob.c.dot(x);
        if (zeta < -1e-14) {
            const Eigen::VectorXd xu = x / -zeta;
            const Eigen::VectorXd su = s / -zeta;
            double cert = (prob.G * xu + su).norm() / norm_h;
            if (p > 0) cert = std::max(cert, (prob.A * xu).norm() / norm_b);
            if (cert <= settings.feastol) {
                result.status = SolveStatus::Unbounded;
                result.x = xu;
                result.s = su;
                result.feasibility_residual = cert;
                return result;
            }
        }
        if (iter == settings.max_iterations) break;

        const double mu = (s.dot(z) + theta * kappa) / (nu + 1.0);
        if (!(mu > 0.0) || theta < 1e-14) break;

        const Scaling w = ops.compute_scaling(s, z);
        kkt.factor(&w);

        // Common second right-hand side (-c, b, h) shared by both steps.
        const Eigen::VectorXd ub = kkt.solve(Rhs3(-prob.c, prob.b, prob.h).stacked);
        const double pub =
            prob.c.dot(ub.head(n)) + (p > 0 ? prob.b.dot(ub.segment(n, p)) : 0.0) +
            prob.h.dot(ub.tail(m));

        struct Direction {
            Eigen::VectorXd dx, dy, dz, ds;
            double dtheta = 0.0, dkappa = 0.0;
        };
        auto solve_direction = [&](double eta, const Eigen::VectorXd& d_s,
                                   double d_kappa) -> Direction {
            const Eigen::VectorXd wdiv = ops.apply_w(w, ops.divide(w.lambda, d_s));
            const Eigen::VectorXd ua = kkt.solve(
                Rhs3(-eta * res1, eta * res2, eta * res3 + wdiv).stacked);
            const double pua = prob.c.dot(ua.head(n)) +
                               (p > 0 ? prob.b.dot(ua.segment(n, p)) : 0.0) +
                               prob.h.dot(ua.tail(m));
            const double denom = kappa / theta - pub;
            Direction dir;
            dir.dtheta = (pua - eta * res4 - d_kappa / theta) / denom;
            const Eigen::VectorXd u = ua + dir.dtheta * ub;
            dir.dx = u.head(n);
            dir.dy = u.segment(n, p);
            dir.dz = u.tail(m);
            dir.ds = -wdiv - ops.apply_w(w, ops.apply_w(w, dir.dz));
            dir.dkappa = (-d_kappa - kappa * dir.dtheta) / theta;
            return dir;
        };
        auto boundary_step = [&](const Direction& dir) {
            double a = std::min(ops.max_step(s, dir.ds), ops.max_step(z, dir.dz));
            if (dir.dtheta < 0.0) a = std::min(a, -theta / dir.dtheta);
            if (dir.dkappa < 0.0) a = std::min(a, -kappa / dir.dkappa);
            return a;
        };

        // Predictor.
        const Eigen::VectorXd lam_sq = ops.product(w.lambda, w.lambda);
        const Direction aff = solve_direction(1.0, lam_sq, theta * kappa);
        const double alpha_aff = std::min(1.0, boundary_step(aff));
        const double sigma = std::pow(1.0 - alpha_aff, 3);

        // Corrector.
        const Eigen::VectorXd corr = ops.product(ops.apply_w_inverse(w, aff.ds),
                                                 ops.apply_w(w, aff.dz));
        const Eigen::VectorXd d_s = lam_sq + corr - sigma * mu * e;
        const double d_kappa = theta * kappa + aff.dtheta * aff.dkappa - sigma * mu;
        const Direction dir = solve_direction(1.0 - sigma, d_s, d_kappa);

        const double alpha =
            std::min(1.0, settings.step_fraction * boundary_step(dir));
        if (!(alpha > 1e-12)) break;

        x += alpha * dir.dx;
        y += alpha * dir.dy;
        z += alpha * dir.dz;
        s += alpha * dir.ds;
        theta += alpha * dir.dtheta;
        kappa += alpha * dir.dkappa;
    }

    result.status = SolveStatus::NumericalLimit;
    result.x = x / theta;
    result.y = y / theta;
    result.z = z / theta;
    result.s = s / theta;
    result.objective = prob.c.dot(result.x);
    return result;
}

} // namespace drccmdp
