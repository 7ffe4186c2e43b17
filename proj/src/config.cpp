/*
 Copyright 2026 The sidare-control Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/

#include "sidare/config.hpp"

#include <cmath>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>

#include "json.hpp"
#include "sidare/errors.hpp"

namespace sidare {

namespace {

using nlohmann::json;

/// View of one JSON object that remembers which keys were read so leftovers
/// can be reported.
class Section {
public:
    Section(const json& node, std::string path) : node_(node), path_(std::move(path)) {
        if (!node_.is_object()) {
            throw ConfigError(where() + " must be an object");
        }
    }

    bool has(const char* key) const { return node_.contains(key); }

    void number(const char* key, double& out) {
        if (const json* v = take(key)) {
            if (!v->is_number()) {
                throw ConfigError(where(key) + " must be a number");
            }
            out = v->get<double>();
            if (!std::isfinite(out)) {
                throw ConfigError(where(key) + " must be finite");
            }
        }
    }

    void count(const char* key, std::size_t& out) {
        if (const json* v = take(key)) {
            if (!v->is_number_integer() || v->get<long long>() < 0) {
                throw ConfigError(where(key) + " must be a non-negative integer");
            }
            out = v->get<std::size_t>();
        }
    }

    void flag(const char* key, bool& out) {
        if (const json* v = take(key)) {
            if (!v->is_boolean()) {
                throw ConfigError(where(key) + " must be true or false");
            }
            out = v->get<bool>();
        }
    }

    void text(const char* key, std::string& out) {
        if (const json* v = take(key)) {
            if (!v->is_string()) {
                throw ConfigError(where(key) + " must be a string");
            }
            out = v->get<std::string>();
        }
    }

    void numbers(const char* key, std::vector<double>& out) {
        if (const json* v = take(key)) {
            if (!v->is_array()) {
                throw ConfigError(where(key) + " must be a list of numbers");
            }
            out.clear();
            for (const auto& item : *v) {
                if (!item.is_number()) {
                    throw ConfigError(where(key) + " must be a list of numbers");
                }
                out.push_back(item.get<double>());
            }
        }
    }

    std::optional<Section> child(const char* key) {
        if (const json* v = take(key)) {
            return Section(*v, join(key));
        }
        return std::nullopt;
    }

    void finish() const {
        for (const auto& item : node_.items()) {
            if (!used_.count(item.key())) {
                throw ConfigError("unknown key " + where(item.key().c_str()));
            }
        }
    }

private:
    const json* take(const char* key) {
        if (!node_.contains(key)) {
            return nullptr;
        }
        used_.insert(key);
        return &node_.at(key);
    }

    std::string join(const char* key) const {
        return path_.empty() ? std::string(key) : path_ + "." + key;
    }

    std::string where(const char* key = nullptr) const {
        if (!key) {
            return path_.empty() ? "config" : "'" + path_ + "'";
        }
        return "'" + join(key) + "'";
    }

    const json& node_;
    std::string path_;
    std::set<std::string> used_;
};

template <class F>
void rethrow_as_config(const char* what, F&& check) {
    try {
        check();
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& ex) {
        throw ConfigError(std::string(what) + ": " + ex.what());
    }
}

void read_model(Section& s, ModelParams& m) {
    s.number("beta", m.beta);
    s.number("gamma_i", m.gamma_i);
    s.number("gamma_d", m.gamma_d);
    s.number("gamma_a", m.gamma_a);
    s.number("nu", m.nu);
    s.number("xi_i", m.xi_i);
    s.number("xi_d", m.xi_d);
    const bool explicit_mu_hat = s.has("mu_hat");
    s.number("mu", m.mu);
    s.number("mu_hat", m.mu_hat);
    if (!explicit_mu_hat) {
        m.mu_hat = 5.0 * m.mu;
    }
    s.number("h_bar", m.h_bar);
    s.number("u_max", m.u_max);
    s.finish();
}

void read_initial(Section& s, EpidemicState& x) {
    s.number("s", x.s);
    s.number("i", x.i);
    s.number("d", x.d);
    s.number("a", x.a);
    s.number("e", x.e);
    s.finish();
    x.r = 1.0 - x.s - x.i - x.d - x.a - x.e;
}

CostAxis parse_axis(const std::string& name) {
    if (name == "running") {
        return CostAxis::Running;
    }
    if (name == "intervention") {
        return CostAxis::Intervention;
    }
    throw ConfigError("'frontier.cost_axis' must be \"running\" or \"intervention\"");
}

const char* axis_name(CostAxis axis) {
    return axis == CostAxis::Running ? "running" : "intervention";
}

}  // namespace

void RunConfig::validate() const {
    rethrow_as_config("model", [&] { model.validate(); });
    rethrow_as_config("initial_state", [&] { initial.validate(); });
    rethrow_as_config("weights", [&] { weights.validate(); });
    rethrow_as_config("solver", [&] { solver.validate(); });
    rethrow_as_config("discretize", [&] { discretize.validate(solver.grid, model.u_max); });
    rethrow_as_config("frontier", [&] {
        frontier.grid.validate();
        if (!(frontier.basis_tolerance > 0.0 && frontier.basis_tolerance < 1.0)) {
            throw ConfigError("basis_tolerance must lie in (0, 1)");
        }
    });
    rethrow_as_config("uncertainty", [&] { uncertainty.validate(); });
}

RunConfig parse_config(const std::string& json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& ex) {
        throw ConfigError(std::string("config is not valid JSON: ") + ex.what());
    }

    RunConfig cfg;
    Section top(root, "");
    if (auto s = top.child("model")) {
        read_model(*s, cfg.model);
    }
    if (auto s = top.child("initial_state")) {
        read_initial(*s, cfg.initial);
    }
    if (auto s = top.child("grid")) {
        double horizon = cfg.solver.grid.horizon();
        double step = cfg.solver.grid.step();
        s->number("horizon", horizon);
        s->number("step", step);
        s->finish();
        rethrow_as_config("grid", [&] { cfg.solver.grid = TimeGrid(horizon, step); });
    }
    if (auto s = top.child("weights")) {
        s->number("theta_a", cfg.weights.theta_a);
        s->number("theta_e", cfg.weights.theta_e);
        s->finish();
    }
    if (auto s = top.child("solver")) {
        s->count("max_iterations", cfg.solver.max_iterations);
        s->number("convergence_tol", cfg.solver.convergence_tol);
        s->number("damping", cfg.solver.damping);
        s->flag("safeguard", cfg.solver.safeguard);
        s->number("polish_band", cfg.solver.polish_band);
        s->numbers("start_fractions", cfg.solver.extra_start_fractions);
        s->finish();
    }

    double catalog_step = 0.01;
    std::vector<double> catalog;
    if (auto s = top.child("discretize")) {
        s->count("levels", cfg.discretize.n_levels);
        s->count("switches", cfg.discretize.n_switches);
        s->number("delta", cfg.discretize.delta);
        s->flag("rescore_prune", cfg.discretize.rescore_prune);
        if (s->has("catalog") && s->has("catalog_step")) {
            throw ConfigError("'discretize' takes either 'catalog' or 'catalog_step', not both");
        }
        s->number("catalog_step", catalog_step);
        s->numbers("catalog", catalog);
        s->finish();
    }
    rethrow_as_config("discretize.catalog", [&] {
        cfg.discretize.catalog = catalog.empty() ? PolicyCatalog::uniform(cfg.model.u_max, catalog_step)
                                                 : PolicyCatalog(catalog);
    });

    if (auto s = top.child("frontier")) {
        ScenarioGrid& g = cfg.frontier.grid;
        s->numbers("nu", g.nu);
        s->numbers("h_bar", g.h_bar);
        s->numbers("theta_a", g.theta_a);
        if (s->has("theta_e") && (s->has("theta_e_points") || s->has("theta_e_max"))) {
            throw ConfigError("'frontier' takes either 'theta_e' or 'theta_e_points'/'theta_e_max'");
        }
        std::size_t points = 40;
        double max = 2.5e4;
        s->count("theta_e_points", points);
        s->number("theta_e_max", max);
        s->numbers("theta_e", g.theta_e);
        if (!s->has("theta_e")) {
            rethrow_as_config("frontier.theta_e", [&] { g.theta_e = default_theta_e_grid(points, max); });
        }
        std::string axis = axis_name(cfg.frontier.axis);
        s->text("cost_axis", axis);
        cfg.frontier.axis = parse_axis(axis);
        s->number("basis_tolerance", cfg.frontier.basis_tolerance);
        s->flag("allow_extended", g.allow_extended);
        s->finish();
    }
    if (auto s = top.child("uncertainty")) {
        UncertaintyGrid& u = cfg.uncertainty;
        s->number("r0_min", u.r0_min);
        s->number("r0_max", u.r0_max);
        s->count("r0_points", u.r0_points);
        s->number("ifr_min", u.ifr_min);
        s->number("ifr_max", u.ifr_max);
        s->count("ifr_points", u.ifr_points);
        s->number("nominal_r0", u.nominal_r0);
        s->number("nominal_ifr", u.nominal_ifr);
        s->finish();
    }
    top.count("threads", cfg.threads);
    top.text("output_dir", cfg.output_dir);
    top.finish();

    cfg.frontier.threads = cfg.threads;
    cfg.validate();
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ConfigError("cannot read config file " + path);
    }
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config(text.str());
}

std::string dump_config(const RunConfig& cfg) {
    nlohmann::ordered_json j;
    const ModelParams& m = cfg.model;
    j["model"] = {{"beta", m.beta},   {"gamma_i", m.gamma_i}, {"gamma_d", m.gamma_d},
                  {"gamma_a", m.gamma_a}, {"nu", m.nu},   {"xi_i", m.xi_i},
                  {"xi_d", m.xi_d},   {"mu", m.mu},           {"mu_hat", m.mu_hat},
                  {"h_bar", m.h_bar}, {"u_max", m.u_max}};
    j["initial_state"] = {{"s", cfg.initial.s},
                          {"i", cfg.initial.i},
                          {"d", cfg.initial.d},
                          {"a", cfg.initial.a},
                          {"e", cfg.initial.e}};
    j["grid"] = {{"horizon", cfg.grid().horizon()}, {"step", cfg.grid().step()}};
    j["weights"] = {{"theta_a", cfg.weights.theta_a}, {"theta_e", cfg.weights.theta_e}};
    j["solver"] = {{"max_iterations", cfg.solver.max_iterations},
                   {"convergence_tol", cfg.solver.convergence_tol},
                   {"damping", cfg.solver.damping},
                   {"safeguard", cfg.solver.safeguard},
                   {"polish_band", cfg.solver.polish_band},
                   {"start_fractions", cfg.solver.extra_start_fractions}};
    j["discretize"] = {{"levels", cfg.discretize.n_levels},
                       {"switches", cfg.discretize.n_switches},
                       {"delta", cfg.discretize.delta},
                       {"catalog", cfg.discretize.catalog.levels()},
                       {"rescore_prune", cfg.discretize.rescore_prune}};
    const ScenarioGrid& g = cfg.frontier.grid;
    j["frontier"] = {{"nu", g.nu},
                     {"h_bar", g.h_bar},
                     {"theta_a", g.theta_a},
                     {"theta_e", g.theta_e},
                     {"cost_axis", axis_name(cfg.frontier.axis)},
                     {"basis_tolerance", cfg.frontier.basis_tolerance},
                     {"allow_extended", g.allow_extended}};
    const UncertaintyGrid& u = cfg.uncertainty;
    j["uncertainty"] = {{"r0_min", u.r0_min},         {"r0_max", u.r0_max},
                        {"r0_points", u.r0_points},   {"ifr_min", u.ifr_min},
                        {"ifr_max", u.ifr_max},       {"ifr_points", u.ifr_points},
                        {"nominal_r0", u.nominal_r0}, {"nominal_ifr", u.nominal_ifr}};
    j["threads"] = cfg.threads;
    j["output_dir"] = cfg.output_dir;
    return j.dump(2) + "\n";
}

}  // namespace sidare
