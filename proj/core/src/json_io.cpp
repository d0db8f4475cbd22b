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

#include "drccmdp/json_io.hpp"

#include "drccmdp/errors.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <sstream>

namespace drccmdp {

namespace {

using nlohmann::json;

json parse_or_throw(const std::string& text, const std::string& what) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) throw ValidationError(what + ": malformed JSON");
    return j;
}

Eigen::VectorXd vector_from(const json& arr, const std::string& what) {
    if (!arr.is_array()) throw ValidationError(what + " must be an array");
    Eigen::VectorXd v(arr.size());
    for (std::size_t i = 0; i < arr.size(); ++i) {
        if (!arr[i].is_number()) throw ValidationError(what + " must be numeric");
        v(static_cast<Eigen::Index>(i)) = arr[i].get<double>();
    }
    return v;
}

Generator generator_from(const json& j) {
    if (j.is_null()) return Generator::gaussian();
    const std::string kind = j.is_string() ? j.get<std::string>()
                                           : j.value("kind", std::string("gaussian"));
    if (kind == "gaussian") return Generator::gaussian();
    if (kind == "laplace") return Generator::laplace();
    if (kind == "generalized_stable")
        return Generator::generalized_stable(j.value("omega1", 1.0),
                                             j.value("omega2", 1.0));
    throw ValidationError("unknown generator kind '" + kind + "'");
}

EllipticalLaw law_from(const json& j, const std::string& what) {
    if (!j.contains("mean")) throw ValidationError(what + ": missing mean");
    const Eigen::VectorXd mu = vector_from(j["mean"], what + ".mean");
    Eigen::MatrixXd sigma;
    if (j.contains("cov_diag")) {
        const Eigen::VectorXd d = vector_from(j["cov_diag"], what + ".cov_diag");
        if (d.size() != mu.size())
            throw ValidationError(what + ": cov_diag length mismatch");
        sigma = d.asDiagonal();
    } else if (j.contains("cov")) {
        const auto& rows = j["cov"];
        sigma.resize(mu.size(), mu.size());
        if (!rows.is_array() || static_cast<Eigen::Index>(rows.size()) != mu.size())
            throw ValidationError(what + ": cov must be a square matrix");
        for (Eigen::Index r = 0; r < mu.size(); ++r) {
            const Eigen::VectorXd row = vector_from(rows[static_cast<std::size_t>(r)],
                                                    what + ".cov row");
            if (row.size() != mu.size())
                throw ValidationError(what + ": cov must be a square matrix");
            sigma.row(r) = row;
        }
    } else {
        throw ValidationError(what + ": missing cov or cov_diag");
    }
    return {mu, sigma, generator_from(j.contains("generator") ? j["generator"] : json())};
}

MixtureLaw mixture_from(const json& j, const std::string& what) {
    const Eigen::VectorXd weights = vector_from(j.at("weights"), what + ".weights");
    std::vector<EllipticalLaw> comps;
    for (const auto& cj : j.at("components"))
        comps.push_back(law_from(cj, what + ".component"));
    return {weights, std::move(comps)};
}

} // namespace

std::string read_text_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::string& path, const std::string& contents) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot write file: " + path);
    out << contents;
}

MdpInstance parse_instance_json(const std::string& text) {
    const json j = parse_or_throw(text, "instance");
    for (const char* field : {"states", "actions", "transition", "initial", "discount"})
        if (!j.contains(field))
            throw ValidationError(std::string("instance: missing field '") + field + "'");

    const int states = j["states"].get<int>();
    std::vector<int> actions;
    for (const auto& a : j["actions"]) actions.push_back(a.get<int>());
    if (static_cast<int>(actions.size()) != states)
        throw ValidationError("instance: actions list length must equal states");

    int pairs = 0;
    for (int a : actions) pairs += a;
    Eigen::MatrixXd transition(pairs, states);
    const auto& tj = j["transition"];
    if (!tj.is_array() || static_cast<int>(tj.size()) != states)
        throw ValidationError("instance: transition must have one entry per state");
    int row = 0;
    for (int s = 0; s < states; ++s) {
        const auto& per_state = tj[static_cast<std::size_t>(s)];
        if (!per_state.is_array() ||
            static_cast<int>(per_state.size()) != actions[static_cast<std::size_t>(s)])
            throw ValidationError("instance: transition[" + std::to_string(s) +
                                  "] must have one row per action");
        for (const auto& rowj : per_state) {
            const Eigen::VectorXd p = vector_from(rowj, "instance.transition row");
            if (p.size() != states)
                throw ValidationError("instance: transition rows must have one entry "
                                      "per next state");
            transition.row(row++) = p;
        }
    }
    return MdpInstance(actions, transition, vector_from(j["initial"], "instance.initial"),
                       j["discount"].get<double>());
}

MdpInstance load_instance_json(const std::string& path) {
    return parse_instance_json(read_text_file(path));
}

std::string instance_to_json_string(const MdpInstance& mdp) {
    json j;
    j["states"] = mdp.num_states();
    json actions = json::array();
    for (int s = 0; s < mdp.num_states(); ++s) actions.push_back(mdp.num_actions(s));
    j["actions"] = actions;
    json transition = json::array();
    for (int s = 0; s < mdp.num_states(); ++s) {
        json per_state = json::array();
        for (int a = 0; a < mdp.num_actions(s); ++a) {
            json row = json::array();
            for (int sp = 0; sp < mdp.num_states(); ++sp)
                row.push_back(mdp.transition()(mdp.pair_index(s, a), sp));
            per_state.push_back(row);
        }
        transition.push_back(per_state);
    }
    j["transition"] = transition;
    json initial = json::array();
    for (int s = 0; s < mdp.num_states(); ++s) initial.push_back(mdp.initial()(s));
    j["initial"] = initial;
    j["discount"] = mdp.discount();
    return j.dump(2);
}

void save_instance_json(const MdpInstance& mdp, const std::string& path) {
    write_text_file(path, instance_to_json_string(mdp));
}

Eigen::MatrixXd load_kernel_json(const std::string& path, int num_pairs,
                                 int num_states) {
    const json j = parse_or_throw(read_text_file(path), "kernel");
    const json& tj = j.is_object() && j.contains("transition") ? j["transition"] : j;
    if (!tj.is_array() || tj.empty())
        throw ValidationError("kernel: expected nested arrays");
    // accepted layouts: flat [pair][next_state] or nested [state][action][next_state]
    const bool nested = tj.front().is_array() && !tj.front().empty() &&
                        tj.front().front().is_array();
    std::vector<json> rows;
    for (const auto& entry : tj) {
        if (nested)
            for (const auto& rowj : entry) rows.push_back(rowj);
        else
            rows.push_back(entry);
    }
    if (static_cast<int>(rows.size()) != num_pairs)
        throw ValidationError("kernel: expected " + std::to_string(num_pairs) +
                              " rows, got " + std::to_string(rows.size()));
    Eigen::MatrixXd kernel(num_pairs, num_states);
    for (int r = 0; r < num_pairs; ++r) {
        const Eigen::VectorXd p = vector_from(rows[static_cast<std::size_t>(r)],
                                              "kernel row");
        if (p.size() != num_states)
            throw ValidationError("kernel: rows must have one entry per state");
        kernel.row(r) = p;
    }
    return kernel;
}

SolveConfigFile load_solve_config_json(const std::string& path) {
    const json j = parse_or_throw(read_text_file(path), "config");
    SolveConfigFile cfg;
    if (j.contains("objective")) {
        const auto& oj = j["objective"];
        if (oj.contains("mixture"))
            cfg.mixture_objective = MixtureObjectiveBall{
                mixture_from(oj["mixture"], "objective.mixture"), oj.value("radius", 0.0)};
        else
            cfg.objective =
                ObjectiveBall{law_from(oj, "objective"), oj.value("radius", 0.0)};
    }
    if (j.contains("constraints")) {
        std::size_t k = 0;
        for (const auto& cj : j["constraints"]) {
            const std::string name =
                cj.value("name", "cc" + std::to_string(k));
            const double xi = cj.value("xi", 0.0);
            const double eps = cj.value("epsilon", 0.8);
            const KlRadius radius{cj.value("radius", 0.0)};
            if (cj.contains("mixture")) {
                cfg.mixture_constraints.push_back(
                    {name, mixture_from(cj["mixture"], name + ".mixture"), xi, radius});
            } else {
                cfg.constraints.push_back(
                    {name, law_from(cj, name), xi, eps, radius});
            }
            ++k;
        }
    }
    if (j.contains("epsilon_hat")) cfg.epsilon_hat = j["epsilon_hat"].get<double>();
    cfg.product_form = j.value("joint_constraint_form", std::string("product")) !=
                       std::string("sum");
    if (j.contains("joint_solver")) {
        const auto& aj = j["joint_solver"];
        if (aj.contains("y0")) cfg.y0 = vector_from(aj["y0"], "joint_solver.y0");
        cfg.max_iterations = aj.value("max_iterations", cfg.max_iterations);
        cfg.movement_tolerance = aj.value("movement_tolerance", cfg.movement_tolerance);
        cfg.step_length = aj.value("step_length", cfg.step_length);
        cfg.line_search_accuracy =
            aj.value("line_search_accuracy", cfg.line_search_accuracy);
    }
    cfg.workers = j.value("workers", 0);
    return cfg;
}

} // namespace drccmdp
