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

#include "drccmdp/conic.hpp"

#include "drccmdp/errors.hpp"
#include "drccmdp/ipm.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <limits>

namespace drccmdp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

nlohmann::json vector_to_json(const Eigen::VectorXd& v, bool inf_as_null = false) {
    nlohmann::json arr = nlohmann::json::array();
    for (int i = 0; i < v.size(); ++i) {
        if (inf_as_null && std::isinf(v(i)))
            arr.push_back(nullptr);
        else
            arr.push_back(v(i));
    }
    return arr;
}

nlohmann::json matrix_to_json(const Eigen::MatrixXd& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (int r = 0; r < m.rows(); ++r) {
        nlohmann::json row = nlohmann::json::array();
        for (int c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        rows.push_back(row);
    }
    return rows;
}

} // namespace

void ConicProgram::validate() const {
    if (num_vars <= 0) throw ValidationError("conic program has no variables");
    auto check_vec = [&](const Eigen::VectorXd& v, const std::string& what) {
        if (v.size() != num_vars)
            throw ValidationError("conic program: " + what + " has wrong dimension");
    };
    check_vec(objective_linear, "objective");
    if (lower.size() != num_vars || upper.size() != num_vars)
        throw ValidationError("conic program: bounds have wrong dimension");
    for (const auto& t : objective_norms) {
        if (t.A.cols() != num_vars || t.b.size() != t.A.rows())
            throw ValidationError("conic program: objective norm term is inconsistent");
        if (!std::isfinite(t.coeff) || t.coeff < 0.0)
            throw ValidationError("conic program: objective norm coefficient invalid");
    }
    for (const auto& eq : equalities) check_vec(eq.a, "equality " + eq.name);
    for (const auto& in : inequalities) check_vec(in.a, "inequality " + in.name);
    for (const auto& soc : socs) {
        check_vec(soc.c, "soc " + soc.name);
        if (soc.A.cols() != num_vars || soc.b.size() != soc.A.rows())
            throw ValidationError("conic program: soc " + soc.name + " is inconsistent");
        if (!std::isfinite(soc.k) || soc.k < 0.0)
            throw ValidationError("conic program: soc " + soc.name +
                                  " has an invalid cone multiplier");
    }
}

double ConicProgram::objective_value(const Eigen::VectorXd& x) const {
    double value = objective_linear.dot(x);
    for (const auto& t : objective_norms) value += t.coeff * (t.A * x + t.b).norm();
    return value;
}

std::string ConicProgram::to_json_string() const {
    nlohmann::json j;
    j["num_vars"] = num_vars;
    j["minimize"]["linear"] = vector_to_json(objective_linear);
    j["minimize"]["norm_terms"] = nlohmann::json::array();
    for (const auto& t : objective_norms)
        j["minimize"]["norm_terms"].push_back(
            {{"coeff", t.coeff}, {"A", matrix_to_json(t.A)}, {"b", vector_to_json(t.b)}});
    auto lin = [](const std::vector<LinearConstraint>& cs) {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& c : cs)
            arr.push_back({{"name", c.name}, {"a", vector_to_json(c.a)}, {"rhs", c.rhs}});
        return arr;
    };
    j["equalities"] = lin(equalities);
    j["inequalities_ge"] = lin(inequalities);
    j["soc"] = nlohmann::json::array();
    for (const auto& soc : socs)
        j["soc"].push_back({{"name", soc.name},
                            {"c", vector_to_json(soc.c)},
                            {"d", soc.d},
                            {"k", soc.k},
                            {"A", matrix_to_json(soc.A)},
                            {"b", vector_to_json(soc.b)}});
    j["lower"] = vector_to_json(lower, true);
    j["upper"] = vector_to_json(upper, true);
    return j.dump(2);
}

std::string to_string(SolveStatus status) {
    switch (status) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::Infeasible: return "infeasible";
    case SolveStatus::Unbounded: return "unbounded";
    case SolveStatus::NumericalLimit: return "numerical-limit";
    }
    return "unknown";
}

BackendResult InteriorPointBackend::solve(const ConicProgram& program) const {
    program.validate();
    const int n0 = program.num_vars;
    const int extra = static_cast<int>(program.objective_norms.size());
    const int n = n0 + extra;

    StandardConeProblem sp;
    sp.c.setZero(n);
    sp.c.head(n0) = program.objective_linear;
    for (int i = 0; i < extra; ++i)
        sp.c(n0 + i) = program.objective_norms[static_cast<std::size_t>(i)].coeff;

    const int p = static_cast<int>(program.equalities.size());
    sp.A.setZero(p, n);
    sp.b.setZero(p);
    for (int r = 0; r < p; ++r) {
        sp.A.row(r).head(n0) = program.equalities[static_cast<std::size_t>(r)].a;
        sp.b(r) = program.equalities[static_cast<std::size_t>(r)].rhs;
    }

    // Cone rows: orthant first (bounds, then >= inequalities), then one SOC
    // block per objective norm term and named SOC constraint.
    struct DualSlot {
        std::string name;
        int row;
    };
    std::vector<DualSlot> dual_slots;
    int l = 0;
    for (int jv = 0; jv < n0; ++jv) {
        if (std::isfinite(program.lower(jv))) ++l;
        if (std::isfinite(program.upper(jv))) ++l;
    }
    l += static_cast<int>(program.inequalities.size());
    int m = l;
    std::vector<int> q;
    for (const auto& t : program.objective_norms) {
        q.push_back(static_cast<int>(t.A.rows()) + 1);
        m += q.back();
    }
    for (const auto& soc : program.socs) {
        q.push_back(static_cast<int>(soc.A.rows()) + 1);
        m += q.back();
    }

    sp.G.setZero(m, n);
    sp.h.setZero(m);
    sp.dims.l = l;
    sp.dims.q = q;

    int row = 0;
    for (int jv = 0; jv < n0; ++jv) {
        if (std::isfinite(program.lower(jv))) {
            sp.G(row, jv) = -1.0;
            sp.h(row) = -program.lower(jv);
            ++row;
        }
        if (std::isfinite(program.upper(jv))) {
            sp.G(row, jv) = 1.0;
            sp.h(row) = program.upper(jv);
            ++row;
        }
    }
    for (const auto& in : program.inequalities) {
        sp.G.row(row).head(n0) = -in.a;
        sp.h(row) = -in.rhs;
        if (!in.name.empty()) dual_slots.push_back({in.name, row});
        ++row;
    }
    int epi = 0;
    for (const auto& t : program.objective_norms) {
        const int rows = static_cast<int>(t.A.rows());
        sp.G(row, n0 + epi) = -1.0;
        sp.G.block(row + 1, 0, rows, n0) = -t.A;
        sp.h.segment(row + 1, rows) = t.b;
        row += rows + 1;
        ++epi;
    }
    for (const auto& soc : program.socs) {
        const int rows = static_cast<int>(soc.A.rows());
        sp.G.row(row).head(n0) = -soc.c;
        sp.h(row) = soc.d;
        sp.G.block(row + 1, 0, rows, n0) = -soc.k * soc.A;
        sp.h.segment(row + 1, rows) = soc.k * soc.b;
        if (!soc.name.empty()) dual_slots.push_back({soc.name, row});
        row += rows + 1;
    }

    const IpmResult ipm = ipm_solve(sp, settings_);

    BackendResult out;
    out.status = ipm.status;
    out.iterations = ipm.iterations;
    out.feasibility_residual = ipm.feasibility_residual;
    out.duality_gap = ipm.duality_gap;
    if (ipm.x.size() >= n0) out.x = ipm.x.head(n0);
    out.objective = ipm.objective;
    if (ipm.status == SolveStatus::Optimal)
        for (const auto& slot : dual_slots) out.duals[slot.name] = ipm.z(slot.row);
    return out;
}

const SolverBackend& embedded_backend() {
    static const InteriorPointBackend backend;
    return backend;
}

BackendResult conic_solve(const ConicProgram& program, const SolverBackend* backend) {
    return backend ? backend->solve(program) : embedded_backend().solve(program);
}

} // namespace drccmdp
