#include "cli.hpp"

#include "riskdp/errors.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

namespace riskdp::cli {

namespace {

constexpr const char* kSchemaVersion = "1";

[[noreturn]] void fail(const std::string& where, const std::string& what) {
    throw ValidationError(where + ": " + what);
}

const json& field(const json& node, const std::string& key, const std::string& where) {
    if (!node.is_object()) {
        fail(where, "expected an object");
    }
    const auto it = node.find(key);
    if (it == node.end()) {
        fail(where + "/" + key, "missing");
    }
    return *it;
}

double number(const json& node, const std::string& where) {
    if (!node.is_number()) {
        fail(where, "expected a number");
    }
    const double x = node.get<double>();
    if (!std::isfinite(x)) {
        fail(where, "not finite");
    }
    return x;
}

std::size_t count(const json& node, const std::string& where) {
    if (!node.is_number_integer() || node.get<long long>() < 1) {
        fail(where, "expected a positive integer");
    }
    return node.get<std::size_t>();
}

std::vector<std::string> names(const json& node, const std::string& where) {
    if (!node.is_array() || node.empty()) {
        fail(where, "expected a non-empty array of names");
    }
    std::vector<std::string> out;
    for (std::size_t i = 0; i < node.size(); ++i) {
        if (!node[i].is_string()) {
            fail(where + "/" + std::to_string(i), "expected a string");
        }
        out.push_back(node[i].get<std::string>());
    }
    auto sorted = out;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
        fail(where, "duplicate name");
    }
    return out;
}

std::map<std::string, std::size_t> index_of(const std::vector<std::string>& list) {
    std::map<std::string, std::size_t> out;
    for (std::size_t i = 0; i < list.size(); ++i) {
        out.emplace(list[i], i);
    }
    return out;
}

std::size_t lookup(const std::map<std::string, std::size_t>& index, const std::string& name,
                   const std::string& where) {
    const auto it = index.find(name);
    if (it == index.end()) {
        fail(where, "undeclared name '" + name + "'");
    }
    return it->second;
}

const json& body_of(const json& doc, const std::string& kind) {
    if (!doc.is_object()) {
        fail("", "document must be an object");
    }
    const auto& version = field(doc, "schema_version", "");
    if (!version.is_string() || version.get<std::string>() != kSchemaVersion) {
        fail("/schema_version", std::string("expected \"") + kSchemaVersion + "\"");
    }
    const auto& k = field(doc, "kind", "");
    if (!k.is_string() || k.get<std::string>() != kind) {
        fail("/kind", "expected \"" + kind + "\"");
    }
    return field(doc, "body", "");
}

/// Per-stage transition tables: either "stages" (one per stage) or "transitions" (shared).
std::vector<const json*> stage_tables(const json& body, std::size_t horizon, std::string& prefix) {
    std::vector<const json*> tables;
    if (body.contains("stages")) {
        const auto& stages = body["stages"];
        if (!stages.is_array() || stages.size() != horizon) {
            fail("/body/stages", "expected an array with one entry per stage");
        }
        for (const auto& s : stages) {
            tables.push_back(&s);
        }
        prefix = "/body/stages/";
    } else {
        const auto& shared = field(body, "transitions", "/body");
        tables.assign(horizon, &shared);
        prefix = "/body/transitions";
    }
    return tables;
}

std::string table_path(const std::string& prefix, std::size_t t) {
    return prefix.back() == '/' ? prefix + std::to_string(t) : prefix;
}

/// risk[t][x], resolved from "risk", "stage_risk" and "state_risk".
std::vector<std::vector<TransitionRiskMapping>> risk_table(const json& body, std::size_t horizon,
                                                           const std::vector<std::string>& states) {
    const auto base = body.contains("risk") ? parse_risk(body["risk"], "/body/risk") : TransitionRiskMapping::expectation();
    std::vector<std::vector<TransitionRiskMapping>> out(horizon, std::vector<TransitionRiskMapping>(states.size(), base));
    if (body.contains("stage_risk")) {
        const auto& list = body["stage_risk"];
        if (!list.is_array() || list.size() + 1 != horizon) {
            fail("/body/stage_risk", "expected one mapping per stage except the last");
        }
        for (std::size_t t = 0; t < list.size(); ++t) {
            const auto r = parse_risk(list[t], "/body/stage_risk/" + std::to_string(t));
            std::fill(out[t].begin(), out[t].end(), r);
        }
    }
    if (body.contains("state_risk")) {
        const auto& map = body["state_risk"];
        if (!map.is_object()) {
            fail("/body/state_risk", "expected an object keyed by state");
        }
        const auto index = index_of(states);
        for (const auto& [name, node] : map.items()) {
            const auto x = lookup(index, name, "/body/state_risk");
            const auto r = parse_risk(node, "/body/state_risk/" + name);
            for (auto& stage : out) {
                stage[x] = r;
            }
        }
    }
    return out;
}

std::ofstream open_output(const std::filesystem::path& dir, const std::string& name) {
    std::filesystem::create_directories(dir);
    std::ofstream out(dir / name, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write " + (dir / name).string());
    }
    return out;
}

void write_json(const std::filesystem::path& dir, const std::string& name, const json& doc) {
    auto out = open_output(dir, name);
    out << doc.dump(2) << '\n';
}

json summary_json(const machine::CostSummary& s) {
    json q = json::object();
    for (const auto& [level, value] : s.quantiles) {
        char key[16];
        std::snprintf(key, sizeof key, "%.2f", level);
        q[key] = value;
    }
    return {{"runs", s.runs},
            {"mean", s.mean},
            {"std_error", s.std_error},
            {"upper_semideviation", s.upper_semideviation},
            {"interquartile_range", s.interquartile_range()},
            {"min", s.min},
            {"max", s.max},
            {"quantiles", q}};
}

json machine_params_json(const machine::MachineModel& m) {
    const auto [f1, f2] = m.uniform_densities();
    return {{"m1", f1.lower}, {"m2", f2.lower},       {"M1", f1.upper}, {"M2", f2.upper},
            {"p", m.p()},     {"R", m.replacement_cost()}, {"T", m.horizon()}, {"gamma", m.gamma()},
            {"initial_belief", m.initial_belief()}};
}

machine::MachineModel machine_model(const RunConfig& cfg, double default_gamma) {
    if (!cfg.input.empty()) {
        auto model = parse_machine(read_document(cfg.input));
        return cfg.gamma ? model.with_gamma(*cfg.gamma) : model;
    }
    return parse_params(cfg.params.value_or("0,80,100,500,0.2,50,6"), cfg.gamma.value_or(default_gamma));
}

} // namespace

std::string format_double(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

json read_document(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ValidationError(path.string() + ": cannot open");
    }
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ValidationError(path.string() + ": " + e.what());
    }
}

TransitionRiskMapping parse_risk(const json& node, const std::string& where) {
    const auto& kind = field(node, "kind", where);
    if (!kind.is_string()) {
        fail(where + "/kind", "expected a string");
    }
    const auto k = kind.get<std::string>();
    try {
        if (k == "expectation") {
            return TransitionRiskMapping::expectation();
        }
        if (k == "entropic") {
            return TransitionRiskMapping::entropic(number(field(node, "gamma", where), where + "/gamma"));
        }
        if (k == "mean_semideviation") {
            const double order = node.contains("order") ? number(node["order"], where + "/order") : 1.0;
            return TransitionRiskMapping::mean_semideviation(number(field(node, "kappa", where), where + "/kappa"),
                                                             order);
        }
    } catch (const DomainError& e) {
        fail(where, e.what());
    }
    fail(where + "/kind", "unknown risk mapping '" + k + "'");
}

FiniteHorizonMdp parse_mdp(const json& doc) {
    const auto& body = body_of(doc, "mdp");
    const auto states = names(field(body, "states", "/body"), "/body/states");
    const auto controls = names(field(body, "controls", "/body"), "/body/controls");
    const auto horizon = count(field(body, "horizon", "/body"), "/body/horizon");
    const auto sx = index_of(states);
    const auto su = index_of(controls);
    auto risk = risk_table(body, horizon, states);

    std::string prefix;
    const auto tables = stage_tables(body, horizon, prefix);
    std::vector<FiniteHorizonMdp::Stage> stages(horizon);
    for (std::size_t t = 0; t < horizon; ++t) {
        const bool last = t + 1 == horizon;
        const auto here = table_path(prefix, t);
        const auto& table = *tables[t];
        if (!table.is_object()) {
            fail(here, "expected an object keyed by state");
        }
        stages[t].actions.resize(states.size());
        for (const auto& [xname, row] : table.items()) {
            const auto x = lookup(sx, xname, here);
            if (!row.is_object()) {
                fail(here + "/" + xname, "expected an object keyed by control");
            }
            for (const auto& [uname, entry] : row.items()) {
                const auto at = here + "/" + xname + "/" + uname;
                MdpAction action{lookup(su, uname, here + "/" + xname), number(field(entry, "cost", at), at + "/cost"),
                                 {}};
                if (!last) {
                    const auto& next = field(entry, "next", at);
                    if (!next.is_object()) {
                        fail(at + "/next", "expected an object keyed by state");
                    }
                    action.next.assign(states.size(), 0.0);
                    for (const auto& [nname, prob] : next.items()) {
                        action.next[lookup(sx, nname, at + "/next")] += number(prob, at + "/next/" + nname);
                    }
                }
                stages[t].actions[x].push_back(std::move(action));
            }
        }
        if (!last) {
            stages[t].risk = std::move(risk[t]);
        }
    }
    return FiniteHorizonMdp(states, controls, std::move(stages));
}

FinitePomdp parse_pomdp(const json& doc) {
    const auto& body = body_of(doc, "pomdp");
    const auto obs = names(field(body, "obs_states", "/body"), "/body/obs_states");
    const auto hidden = names(field(body, "hidden_states", "/body"), "/body/hidden_states");
    const auto controls = names(field(body, "controls", "/body"), "/body/controls");
    const auto horizon = count(field(body, "horizon", "/body"), "/body/horizon");
    const auto sx = index_of(obs);
    const auto sy = index_of(hidden);
    const auto su = index_of(controls);

    FinitePomdp::Builder builder(obs, hidden, controls, horizon);
    const auto risk = risk_table(body, horizon, obs);
    for (std::size_t t = 0; t + 1 < horizon; ++t) {
        for (StateId x = 0; x < obs.size(); ++x) {
            builder.set_risk(t, x, risk[t][x]);
        }
    }

    std::string prefix;
    const auto tables = stage_tables(body, horizon, prefix);
    for (std::size_t t = 0; t < horizon; ++t) {
        const bool last = t + 1 == horizon;
        const auto here = table_path(prefix, t);
        const auto& table = *tables[t];
        if (!table.is_object()) {
            fail(here, "expected an object keyed by observable state");
        }
        for (const auto& [xname, row] : table.items()) {
            const auto x = lookup(sx, xname, here);
            if (!row.is_object()) {
                fail(here + "/" + xname, "expected an object keyed by control");
            }
            for (const auto& [uname, entry] : row.items()) {
                const auto at = here + "/" + xname + "/" + uname;
                const auto u = lookup(su, uname, here + "/" + xname);
                const double cost = number(field(entry, "cost", at), at + "/cost");
                std::vector<RowId> rows;
                if (!last) {
                    const auto& next = field(entry, "next", at);
                    for (std::size_t y = 0; y < hidden.size(); ++y) {
                        const auto yat = at + "/next/" + hidden[y];
                        const auto& by_obs = field(next, hidden[y], at + "/next");
                        if (!by_obs.is_object()) {
                            fail(yat, "expected an object keyed by observable state");
                        }
                        std::vector<JointEntry> entries;
                        for (const auto& [xn, by_hidden] : by_obs.items()) {
                            const auto xnext = lookup(sx, xn, yat);
                            if (!by_hidden.is_object()) {
                                fail(yat + "/" + xn, "expected an object keyed by hidden state");
                            }
                            for (const auto& [yn, prob] : by_hidden.items()) {
                                entries.push_back({xnext, lookup(sy, yn, yat + "/" + xn),
                                                   number(prob, yat + "/" + xn + "/" + yn)});
                            }
                        }
                        try {
                            rows.push_back(builder.intern_row(std::move(entries)));
                        } catch (const ValidationError& e) {
                            throw ValidationError("pomdp: stage " + std::to_string(t + 1) + ", state '" + xname +
                                                  "', control '" + uname + "', hidden '" + hidden[y] +
                                                  "': kernel row invalid (" + e.what() + ")");
                        }
                    }
                }
                builder.add_action(t, x, u, cost, std::move(rows));
            }
        }
    }

    if (body.contains("initial_belief")) {
        const auto& b = body["initial_belief"];
        if (!b.is_object()) {
            fail("/body/initial_belief", "expected an object keyed by hidden state");
        }
        std::vector<double> weights(hidden.size(), 0.0);
        for (const auto& [yn, w] : b.items()) {
            weights[lookup(sy, yn, "/body/initial_belief")] = number(w, "/body/initial_belief/" + yn);
        }
        try {
            builder.set_initial_belief(BeliefState(std::move(weights)));
        } catch (const ValidationError& e) {
            fail("/body/initial_belief", e.what());
        }
    }
    if (body.contains("initial_states")) {
        std::vector<StateId> start;
        for (const auto& n : names(body["initial_states"], "/body/initial_states")) {
            start.push_back(lookup(sx, n, "/body/initial_states"));
        }
        builder.set_initial_states(std::move(start));
    }
    return builder.build();
}

machine::MachineModel parse_machine(const json& doc) {
    const auto& body = body_of(doc, "machine");
    const auto get = [&](const char* key) { return number(field(body, key, "/body"), std::string("/body/") + key); };
    const double gamma = body.contains("gamma") ? get("gamma") : 0.9;
    const double xi = body.contains("initial_belief") ? get("initial_belief") : 1.0;
    const auto T = count(field(body, "T", "/body"), "/body/T");
    return machine::MachineModel(machine::Uniform{get("m1"), get("M1")}, machine::Uniform{get("m2"), get("M2")},
                                 get("p"), get("R"), T, gamma, xi);
}

machine::MachineModel parse_params(const std::string& text, double gamma) {
    std::vector<double> v;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        try {
            std::size_t used = 0;
            v.push_back(std::stod(item, &used));
            if (used != item.size()) {
                throw std::invalid_argument(item);
            }
        } catch (const std::exception&) {
            throw ValidationError("--params: '" + item + "' is not a number");
        }
    }
    if (v.size() != 7) {
        throw ValidationError("--params: expected m1,m2,M1,M2,p,R,T");
    }
    if (v[6] < 1.0 || v[6] != std::floor(v[6])) {
        throw ValidationError("--params: T must be a positive integer");
    }
    return machine::MachineModel::uniform(v[0], v[1], v[2], v[3], v[4], v[5], static_cast<std::size_t>(v[6]), gamma);
}

int solve_mdp_cmd(const RunConfig& cfg) {
    const auto model = parse_mdp(read_document(cfg.input));
    const auto sol = solve(model);

    auto values = open_output(cfg.out, "values.csv");
    auto policy = open_output(cfg.out, "policy.csv");
    values << "t,state,value\n";
    policy << "t,state,control\n";
    for (std::size_t t = 0; t < model.horizon(); ++t) {
        for (StateId x = 0; x < model.state_count(); ++x) {
            values << t + 1 << ',' << model.states()[x] << ',' << format_double(sol.values[t][x]) << '\n';
            policy << t + 1 << ',' << model.states()[x] << ',' << model.controls()[sol.policy[t][x]] << '\n';
        }
    }
    json initial = json::object();
    for (StateId x = 0; x < model.state_count(); ++x) {
        initial[model.states()[x]] = sol.values[0][x];
    }
    write_json(cfg.out, "summary.json",
               {{"kind", "mdp"}, {"horizon", model.horizon()}, {"states", model.state_count()}, {"initial_values", initial}});
    return kOk;
}

int solve_pomdp_cmd(const RunConfig& cfg) {
    const auto model = parse_pomdp(read_document(cfg.input));
    PomdpSolveOptions options;
    options.node_budget = cfg.budget;
    const auto sol = solve_reachable(model, options);

    auto values = open_output(cfg.out, "values.csv");
    auto policy = open_output(cfg.out, "policy.csv");
    std::string header = "t,state";
    for (const auto& y : model.hidden_states()) {
        header += ",belief_" + y;
    }
    values << header << ",value\n";
    policy << header << ",control\n";
    for (const auto& node : sol.nodes()) {
        std::string key = std::to_string(node.t + 1) + ',' + model.obs_states()[node.x];
        for (double w : node.belief.weights()) {
            key += ',' + format_double(w);
        }
        values << key << ',' << format_double(node.value) << '\n';
        policy << key << ',' << model.controls()[node.control] << '\n';
    }
    json initial = json::array();
    for (StateId x : model.initial_states()) {
        const auto& node = sol.at(0, x, model.initial_belief());
        initial.push_back({{"state", model.obs_states()[x]}, {"value", node.value},
                           {"control", model.controls()[node.control]}});
    }
    write_json(cfg.out, "summary.json",
               {{"kind", "pomdp"}, {"node_count", sol.node_count()}, {"depth", model.horizon()}, {"initial", initial}});
    return kOk;
}

int machine_demo_cmd(const RunConfig& cfg) {
    if (cfg.grid < 2) {
        throw ValidationError("--grid: need at least 2 points");
    }
    if (cfg.runs == 0) {
        throw ValidationError("--runs: must be positive");
    }
    const auto model = machine_model(cfg, 0.9);
    const auto averse = machine::solve(model);
    const auto neutral = machine::solve(model.with_gamma(0.0));
    const std::size_t T = model.horizon();

    auto values = open_output(cfg.out, "values.csv");
    values << "t,xi,w_risk_neutral,w_risk_averse\n";
    for (std::size_t t = 1; t <= T; ++t) {
        for (std::size_t i = 0; i < cfg.grid; ++i) {
            const double xi = static_cast<double>(i) / static_cast<double>(cfg.grid - 1);
            values << t << ',' << format_double(xi) << ',' << format_double(neutral.w(t, xi)) << ','
                   << format_double(averse.w(t, xi)) << '\n';
        }
    }
    auto thresholds = open_output(cfg.out, "thresholds.csv");
    thresholds << "t,xi_star_neutral,xi_star_averse\n";
    for (std::size_t t = 1; t <= T; ++t) {
        thresholds << t << ',' << format_double(neutral.policy().thresholds()[t - 1]) << ','
                   << format_double(averse.policy().thresholds()[t - 1]) << '\n';
    }

    const auto sim_neutral = machine::simulate(model, neutral.policy(), cfg.runs, cfg.seed, cfg.workers);
    const auto sim_averse = machine::simulate(model, averse.policy(), cfg.runs, cfg.seed, cfg.workers);

    // Fixed bins over the attainable range of the total cost.
    const auto [f1, f2] = model.uniform_densities();
    const double lo = static_cast<double>(T + 1) * f1.lower;
    const double hi = static_cast<double>(T) * model.replacement_cost() + static_cast<double>(T + 1) * f2.upper;
    const double width = (hi - lo) / static_cast<double>(cfg.bins);
    const auto bin_of = [&](double x) {
        const auto b = static_cast<std::size_t>(std::max(0.0, std::floor((x - lo) / width)));
        return std::min(b, cfg.bins - 1);
    };
    std::vector<std::size_t> count_neutral(cfg.bins, 0);
    std::vector<std::size_t> count_averse(cfg.bins, 0);
    for (double x : sim_neutral.totals) {
        ++count_neutral[bin_of(x)];
    }
    for (double x : sim_averse.totals) {
        ++count_averse[bin_of(x)];
    }
    auto histogram = open_output(cfg.out, "histogram.csv");
    histogram << "bin_low,bin_high,count_neutral,count_averse\n";
    for (std::size_t b = 0; b < cfg.bins; ++b) {
        histogram << format_double(lo + static_cast<double>(b) * width) << ','
                  << format_double(b + 1 == cfg.bins ? hi : lo + static_cast<double>(b + 1) * width) << ','
                  << count_neutral[b] << ',' << count_averse[b] << '\n';
    }

    write_json(cfg.out, "summary.json",
               {{"kind", "machine"},
                {"parameters", machine_params_json(model)},
                {"seed", cfg.seed},
                {"runs", cfg.runs},
                {"thresholds_neutral", neutral.policy().thresholds()},
                {"thresholds_averse", averse.policy().thresholds()},
                {"risk_neutral", summary_json(sim_neutral.summary)},
                {"risk_averse", summary_json(sim_averse.summary)}});
    return kOk;
}

int machine_simulate_cmd(const RunConfig& cfg) {
    if (cfg.runs == 0) {
        throw ValidationError("--runs: must be positive");
    }
    const auto model = machine_model(cfg, 0.9);
    const auto sol = machine::solve(model);
    const auto sim = machine::simulate(model, sol.policy(), cfg.runs, cfg.seed, cfg.workers);
    auto samples = open_output(cfg.out, "samples.csv");
    samples << "run,total_cost\n";
    for (std::size_t r = 0; r < sim.totals.size(); ++r) {
        samples << r << ',' << format_double(sim.totals[r]) << '\n';
    }
    write_json(cfg.out, "summary.json",
               {{"kind", "machine"},
                {"parameters", machine_params_json(model)},
                {"seed", cfg.seed},
                {"thresholds", sol.policy().thresholds()},
                {"cost", summary_json(sim.summary)}});
    return kOk;
}

int run(int argc, char** argv) {
    CLI::App app{"Risk-averse finite-horizon dynamic programming"};
    app.require_subcommand(1);
    RunConfig cfg;

    const auto common = [&](CLI::App* sub) {
        sub->add_option("--out", cfg.out, "Output directory")->default_str(".");
        sub->add_option("--seed", cfg.seed, "Random seed");
        sub->add_option("--workers", cfg.workers, "Simulation threads")->check(CLI::PositiveNumber);
    };
    auto* mdp = app.add_subcommand("solve-mdp", "Backward induction on an mdp document");
    mdp->add_option("--input", cfg.input, "Model document")->required();
    common(mdp);

    auto* pomdp = app.add_subcommand("solve-pomdp", "Reachable-belief induction on a pomdp document");
    pomdp->add_option("--input", cfg.input, "Model document")->required();
    pomdp->add_option("--budget", cfg.budget, "Maximum number of belief nodes")->check(CLI::PositiveNumber);
    common(pomdp);

    const auto machine_opts = [&](CLI::App* sub) {
        sub->add_option("--input", cfg.input, "Machine document (overrides --params)");
        sub->add_option("--params", cfg.params, "m1,m2,M1,M2,p,R,T");
        sub->add_option("--gamma", cfg.gamma, "Semideviation weight");
        sub->add_option("--runs", cfg.runs, "Simulated runs");
        common(sub);
    };
    auto* demo = app.add_subcommand("machine-demo", "Solve, compare with the risk-neutral policy, and simulate both");
    machine_opts(demo);
    demo->add_option("--grid", cfg.grid, "Belief grid points");
    demo->add_option("--bins", cfg.bins, "Histogram bins")->check(CLI::PositiveNumber);
    auto* sim = app.add_subcommand("machine-simulate", "Simulate the optimal threshold policy");
    machine_opts(sim);

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kValidation;
    }
    cfg.command = app.get_subcommands().front()->get_name();

    try {
        if (cfg.command == "solve-mdp") {
            return solve_mdp_cmd(cfg);
        }
        if (cfg.command == "solve-pomdp") {
            return solve_pomdp_cmd(cfg);
        }
        if (cfg.command == "machine-demo") {
            return machine_demo_cmd(cfg);
        }
        return machine_simulate_cmd(cfg);
    } catch (const ResourceError& e) {
        std::cerr << "resource limit: " << e.what() << '\n';
        return kResource;
    } catch (const ValidationError& e) {
        std::cerr << "invalid input: " << e.what() << '\n';
        return kValidation;
    } catch (const DomainError& e) {
        std::cerr << "invalid input: " << e.what() << '\n';
        return kValidation;
    } catch (const json::exception& e) {
        std::cerr << "invalid input: " << e.what() << '\n';
        return kValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUnexpected;
    }
}

} // namespace riskdp::cli
