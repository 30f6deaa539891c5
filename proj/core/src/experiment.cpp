// Copyright 2026 The lgtsim Authors
//
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
#include "lgtsim/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include <boost/algorithm/string.hpp>
#include <boost/lexical_cast.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <nlohmann/json.hpp>

#include "lgtsim/ansatz.hpp"
#include "lgtsim/error.hpp"
#include "lgtsim/objective.hpp"
#include "lgtsim/optimizers.hpp"

namespace lgtsim {

namespace fs = std::filesystem;
namespace pt = boost::property_tree;
using json = nlohmann::json;

namespace {

const std::set<std::string> kKnownKeys = {
    "model.n_sites",         "model.J",
    "model.U",               "model.dt",
    "model.n_steps",         "model.chi_site",
    "simulate.variants",     "simulate.gammas",
    "simulate.shots",        "simulate.seeds",
    "simulate.trajectories", "simulate.bonds_in_x",
    "simulate.qubit_flip",   "simulate.qubit_gamma",  "optimize.optimizers",
    "optimize.template",     "optimize.target",
    "optimize.trials",       "optimize.iterations",
    "optimize.threshold",    "optimize.infidelity_samples",
    "optimize.variant",      "optimize.compress",
    "optimize.compress_restarts",
    "vne.l_max",             "vne.n_samples",
    "vne.slack",             "vne.ensemble",
    "vne.target",            "vne.family",
    "mitigation.spin_filter", "mitigation.charge_filter",
    "mitigation.variants",   "mitigation.sharpen",
    "mitigation.sharpen_factor", "mitigation.relabel",
    "run.out",               "run.artifacts",
    "run.seed",              "run.jobs",
};

template <class T>
T convert(const std::string &key, const std::string &raw) {
    const std::string v = boost::trim_copy(raw);
    if constexpr (std::is_same_v<T, bool>) {
        const std::string l = boost::to_lower_copy(v);
        if (l == "true" || l == "yes" || l == "on" || l == "1")
            return true;
        if (l == "false" || l == "no" || l == "off" || l == "0")
            return false;
        throw ValidationError("config: " + key + " expects a boolean, got '" + v + "'");
    } else {
        try {
            return boost::lexical_cast<T>(v);
        } catch (const boost::bad_lexical_cast &) {
            throw ValidationError("config: cannot parse " + key + " = '" + v + "'");
        }
    }
}

template <class T>
std::vector<T> convert_list(const std::string &key, const std::string &raw) {
    std::vector<std::string> parts;
    boost::split(parts, raw, boost::is_any_of(","));
    std::vector<T> out;
    for (const auto &p : parts)
        if (!boost::trim_copy(p).empty())
            out.push_back(convert<T>(key, p));
    return out;
}

template <class T>
void read(const pt::ptree &tree, const std::string &key, T &field) {
    if (auto v = tree.get_optional<std::string>(key))
        field = convert<T>(key, *v);
}

template <class T>
void read_opt(const pt::ptree &tree, const std::string &key, std::optional<T> &field) {
    if (auto v = tree.get_optional<std::string>(key))
        field = convert<T>(key, *v);
}

template <class T>
void read_list(const pt::ptree &tree, const std::string &key, std::vector<T> &field) {
    if (auto v = tree.get_optional<std::string>(key))
        field = convert_list<T>(key, *v);
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

/// Writes through a temporary file so readers never see a partial file.
void write_atomic(const fs::path &path, const std::string &content) {
    if (path.has_parent_path())
        fs::create_directories(path.parent_path());
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out)
            throw Error("cannot write " + tmp.string());
        out << content;
    }
    fs::rename(tmp, path);
}

CMatrix hopping_target(const ExperimentConfig &cfg, const std::string &name) {
    if (name == "identity")
        return CMatrix::Identity(8, 8);
    if (name == "C")
        return target_unitary_C(*cfg.J, *cfg.dt);
    throw ValidationError("config: unknown hopping target '" + name + "'");
}

std::uint64_t fnv1a(const std::string &s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

} // namespace

ExperimentConfig ExperimentConfig::from_string(const std::string &text) {
    pt::ptree tree;
    std::istringstream in(text);
    try {
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error &e) {
        throw ValidationError(std::string("config: ") + e.what());
    }
    for (const auto &[section, body] : tree) {
        if (body.empty())
            throw ValidationError("config: key '" + section + "' outside a section");
        for (const auto &[key, value] : body)
            if (!kKnownKeys.count(section + "." + key))
                throw ValidationError("config: unknown key " + section + "." + key);
    }

    ExperimentConfig c;
    c.source = text;
    read(tree, "model.n_sites", c.n_sites);
    read_opt(tree, "model.J", c.J);
    read_opt(tree, "model.U", c.U);
    read_opt(tree, "model.dt", c.dt);
    read(tree, "model.n_steps", c.n_steps);
    read(tree, "model.chi_site", c.chi_site);

    if (auto v = tree.get_optional<std::string>("simulate.variants")) {
        c.variants.clear();
        for (const auto &name : convert_list<std::string>("simulate.variants", *v))
            c.variants.push_back(variant_from_name(name));
    }
    if (auto v = tree.get_optional<std::string>("simulate.gammas"))
        c.gammas = convert_list<double>("simulate.gammas", *v);
    read(tree, "simulate.shots", c.shots);
    read_list(tree, "simulate.seeds", c.seeds);
    read(tree, "simulate.trajectories", c.trajectories);
    read(tree, "simulate.bonds_in_x", c.bonds_in_x);
    read_list(tree, "simulate.qubit_flip", c.qubit_flip);
    read_list(tree, "simulate.qubit_gamma", c.qubit_gamma);

    read_list(tree, "optimize.optimizers", c.optimizers);
    read(tree, "optimize.template", c.c_template);
    read(tree, "optimize.target", c.target);
    read(tree, "optimize.trials", c.trials);
    read(tree, "optimize.iterations", c.iterations);
    read(tree, "optimize.threshold", c.threshold);
    read(tree, "optimize.infidelity_samples", c.infidelity_samples);
    if (auto v = tree.get_optional<std::string>("optimize.variant"))
        c.variant = variant_from_name(boost::trim_copy(*v));
    read(tree, "optimize.compress", c.compress);
    read(tree, "optimize.compress_restarts", c.compress_restarts);

    read(tree, "vne.l_max", c.l_max);
    read(tree, "vne.n_samples", c.vne.n_samples);
    read(tree, "vne.slack", c.vne.slack);
    if (auto v = tree.get_optional<std::string>("vne.ensemble"))
        c.vne.ensemble = ensemble_from_name(boost::trim_copy(*v));
    read(tree, "vne.target", c.vne_target);
    read(tree, "vne.family", c.vne_family);

    read(tree, "mitigation.spin_filter", c.mitigation.spin_filter);
    read(tree, "mitigation.charge_filter", c.mitigation.charge_filter);
    read(tree, "mitigation.variants", c.mitigation.variants);
    read(tree, "mitigation.sharpen", c.mitigation.sharpen);
    read(tree, "mitigation.sharpen_factor", c.mitigation.sharpen_factor);
    read(tree, "mitigation.relabel", c.mitigation.relabel);

    std::string out, artifacts;
    read(tree, "run.out", out);
    read(tree, "run.artifacts", artifacts);
    if (!out.empty())
        c.out_dir = out;
    if (!artifacts.empty())
        c.artifact_dir = artifacts;
    read(tree, "run.seed", c.master_seed);
    read(tree, "run.jobs", c.jobs);
    return c;
}

ExperimentConfig ExperimentConfig::load(const fs::path &path) {
    std::ifstream in(path);
    if (!in)
        throw ValidationError("config: cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return from_string(ss.str());
}

TrotterConfig ExperimentConfig::trotter(Variant v) const {
    if (!J || !U || !dt)
        throw ValidationError("config: model.J, model.U and model.dt must be set explicitly");
    TrotterConfig t;
    t.J = *J;
    t.U = *U;
    t.dt = *dt;
    t.n_steps = n_steps;
    t.variant = v;
    return t;
}

std::string ExperimentConfig::hash() const {
    std::ostringstream key;
    key << source << "|seed=" << master_seed;
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(key.str())));
    return buf;
}

void ExperimentConfig::validate_for(const std::string &command) const {
    auto need_physics = [&] {
        if (!J || !U || !dt)
            throw ValidationError("config: model.J, model.U and model.dt must be set explicitly");
        if (!std::isfinite(*J) || !std::isfinite(*U) || !(*dt > 0.0))
            throw ValidationError("config: J and U must be finite and dt > 0");
    };
    if (jobs < 1)
        throw ValidationError("config: run.jobs must be >= 1");
    if (command == "optimize") {
        need_physics();
        if (optimizers.empty())
            throw ValidationError("config: optimize.optimizers is empty");
        for (const auto &o : optimizers)
            (void)OptimizerSpec::from_name(o);
        if (trials < 1 || iterations < 1)
            throw ValidationError("config: optimize.trials and iterations must be >= 1");
        if (!(threshold > 0.0))
            throw ValidationError("config: optimize.threshold must be > 0");
        if (infidelity_samples < 1)
            throw ValidationError("config: optimize.infidelity_samples must be >= 1");
        if (variant == Variant::Direct)
            throw ValidationError("config: optimize.variant must be gbo or vne");
        (void)template_by_name(c_template);
    } else if (command == "vne-scan") {
        if (vne_target != "identity")
            need_physics();
        if (l_max < 1)
            throw ValidationError("config: vne.l_max must be >= 1");
        if (vne.n_samples < 1 || !(vne.slack >= 0.0))
            throw ValidationError("config: vne.n_samples >= 1 and vne.slack >= 0 required");
        if (vne_family != "hopping" && vne_family != "bond")
            throw ValidationError("config: vne.family must be hopping or bond");
    } else if (command == "simulate") {
        need_physics();
        if (!gammas || gammas->empty())
            throw ValidationError("config: simulate.gammas must be set explicitly");
        for (double g : *gammas)
            if (!(g >= 0.0 && g <= 1.0))
                throw ValidationError("config: gamma outside [0, 1]");
        if (n_sites < 2 || n_sites % 2)
            throw ValidationError("config: model.n_sites must be even and >= 2");
        if (3 * n_sites > 24)
            throw CapacityError("config: more than 24 qubits requested");
        if (n_steps < 0)
            throw ValidationError("config: model.n_steps must be >= 0");
        if (chi_site < 1 || chi_site > n_sites)
            throw ValidationError("config: model.chi_site must be in 1..n_sites");
        if (variants.empty() || seeds.empty() || shots < 1)
            throw ValidationError("config: variants, seeds and shots are required");
        if (trajectories < 0)
            throw ValidationError("config: simulate.trajectories must be >= 0");
        mitigation.validate();
        if (mitigation.charge_filter && !bonds_in_x)
            throw ValidationError("config: charge filter needs simulate.bonds_in_x = true");
        NoiseConfig{0.0, qubit_flip, qubit_gamma}.validate();
    } else if (command == "report") {
        if (n_sites < 2 || n_sites % 2)
            throw ValidationError("config: model.n_sites must be even and >= 2");
    } else {
        throw ValidationError("unknown command '" + command + "'");
    }
}

fs::path artifact_path(const fs::path &dir, Variant v) {
    return dir / ("compiled_" + variant_name(v) + ".json");
}

void save_artifact(const CompiledArtifact &a, const fs::path &path) {
    json j;
    j["variant"] = variant_name(a.variant);
    j["J"] = a.J;
    j["U"] = a.U;
    j["dt"] = a.dt;
    j["c_cost"] = a.c_cost;
    j["c_state_infidelity"] = a.c_state_infidelity;
    auto block = [](const std::optional<CompiledBlock> &b) -> json {
        if (!b)
            return nullptr;
        return json{{"circuit", to_text(b->circuit, b->params)},
                    {"two_qubit", two_qubit_count(b->circuit)}};
    };
    j["c_block"] = block(a.blocks.c_block);
    j["b_block"] = block(a.blocks.b_block);
    write_atomic(path, j.dump(2) + "\n");
}

CompiledArtifact load_artifact(const fs::path &path) {
    std::ifstream in(path);
    if (!in)
        throw MissingArtifactError("missing compiled artifact " + path.string() +
                                   "; run 'lgtsim optimize --config <cfg>' with optimize.variant "
                                   "set to the wanted variant and the same --out directory");
    CompiledArtifact a;
    try {
        const json j = json::parse(in);
        a.variant = variant_from_name(j.at("variant").get<std::string>());
        a.J = j.at("J").get<double>();
        a.U = j.at("U").get<double>();
        a.dt = j.at("dt").get<double>();
        a.c_cost = j.at("c_cost").get<double>();
        a.c_state_infidelity = j.at("c_state_infidelity").get<double>();
        auto block = [](const json &b) -> std::optional<CompiledBlock> {
            if (b.is_null())
                return std::nullopt;
            return CompiledBlock{from_text(b.at("circuit").get<std::string>()), ParamVector()};
        };
        a.blocks.c_block = block(j.at("c_block"));
        a.blocks.b_block = block(j.at("b_block"));
    } catch (const json::exception &e) {
        throw ValidationError("artifact " + path.string() + " is malformed: " + e.what());
    }
    return a;
}

namespace {

struct FitOutcome {
    TrialRecord best;
    std::string best_name;
};

FitOutcome fit_all(const ExperimentConfig &cfg, const DifferentiableObjective &f,
                   std::ostringstream &history, std::ostringstream *precond) {
    FitOutcome out;
    bool have = false;
    for (const auto &name : cfg.optimizers) {
        const OptimizerSpec spec = OptimizerSpec::from_name(name);
        const TrialSet ts = run_trials(spec, f, cfg.trials, cfg.iterations, cfg.master_seed);
        for (std::size_t k = 0; k < ts.all.size(); ++k)
            for (std::size_t i = 0; i < ts.all[k].cost_history.size(); ++i)
                history << spec.name() << ',' << k << ',' << i << ','
                        << fmt(ts.all[k].cost_history[i]) << '\n';
        if (precond && ts.best.preconditioner && precond->tellp() == 0) {
            const Eigen::MatrixXd &K = *ts.best.preconditioner;
            for (Eigen::Index r = 0; r < K.rows(); ++r) {
                for (Eigen::Index c = 0; c < K.cols(); ++c)
                    *precond << (c ? "," : "") << fmt(K(r, c));
                *precond << '\n';
            }
        }
        if (!have || ts.best.final_cost() < out.best.final_cost()) {
            out.best = ts.best;
            out.best_name = spec.name();
            have = true;
        }
    }
    return out;
}

void append_ledger(std::ostringstream &ledger, const std::string &block,
                   const std::vector<RemovedGate> &removed) {
    for (const auto &r : removed) {
        ledger << block << ',' << r.position << ',' << kind_name(r.kind) << ',';
        for (std::size_t i = 0; i < r.targets.size(); ++i)
            ledger << (i ? " " : "") << r.targets[i];
        ledger << ',' << fmt(r.angle) << ',' << (r.accepted ? "removed" : "restored") << '\n';
    }
}

} // namespace

OptimizeSummary cmd_optimize(const ExperimentConfig &cfg) {
    cfg.validate_for("optimize");
    fs::create_directories(cfg.out_dir);
    OptimizeSummary summary;

    const CMatrix target = hopping_target(cfg, cfg.target);
    const Circuit tmpl = template_by_name(cfg.c_template);
    const UnitaryCost f(ObjectiveHandle(target, tmpl));

    std::ostringstream history, precond, ledger;
    history << "optimizer,trial,iter,cost\n";
    ledger << "block,position,kind,targets,angle,status\n";
    const FitOutcome fit = fit_all(cfg, f, history, &precond);
    const auto emit = [&](const std::string &name, const std::string &body) {
        write_atomic(cfg.out_dir / name, body);
        summary.written.push_back(cfg.out_dir / name);
    };
    emit("cost_history.csv", history.str());
    if (precond.tellp() > 0)
        emit("preconditioner.csv", precond.str());

    summary.best_optimizer = fit.best_name;
    summary.best_cost = fit.best.final_cost();
    if (summary.best_cost > cfg.threshold)
        throw ConvergenceError("best cost " + fmt(summary.best_cost) + " from " + fit.best_name +
                               " is above threshold " + fmt(cfg.threshold) +
                               "; raise optimize.trials or optimize.iterations, or change run.seed");

    PruneResult pr = prune_identity_gates(tmpl, fit.best.x_final, target);
    append_ledger(ledger, "C", pr.ledger);
    CompiledBlock c_block{pr.circuit, pr.params};
    if (cfg.compress) {
        CompressOptions co;
        co.optimizer = OptimizerSpec::from_name("lbfgs");
        co.iterations = 2000;
        co.restarts = cfg.compress_restarts;
        co.threshold = std::min(cfg.threshold, 1e-8);
        co.two_qubit_only = true;
        co.seed = cfg.master_seed;
        const CompressResult cr = greedy_compress(c_block.circuit, c_block.params, target, co);
        for (std::size_t pos : cr.removed_positions)
            ledger << "C," << pos << ",XX,,,compressed\n";
        c_block = {cr.circuit, cr.params};
    }
    summary.best_cost = 1.0 - std::pow(phase_insensitive_overlap(
                                           target, circuit_unitary(c_block.circuit, c_block.params)),
                                       2);
    summary.c_two_qubit = two_qubit_count(c_block.circuit);
    summary.c_params = c_block.circuit.n_params();

    std::mt19937_64 rng(cfg.master_seed);
    Circuit reference(3);
    reference.add(Gate::unitary(target, {0, 1, 2}, kDirectCCost, "C"));
    summary.state_infidelity = state_infidelity_check(c_block.circuit.bind(c_block.params),
                                                      reference, cfg.infidelity_samples, rng);

    CompiledArtifact art;
    art.variant = cfg.variant;
    art.J = *cfg.J;
    art.U = *cfg.U;
    art.dt = *cfg.dt;
    art.c_cost = summary.best_cost;
    art.c_state_infidelity = summary.state_infidelity;
    art.blocks.c_block = c_block;
    if (cfg.variant == Variant::Vne) {
        // The bond block keeps the single XX + RY layer the entropy scan selects.
        const CMatrix b_target = target_unitary_B(*cfg.U, *cfg.dt);
        const Circuit b_tmpl = bond_family(1);
        const UnitaryCost fb(ObjectiveHandle(b_target, b_tmpl));
        const TrialSet tb =
            run_trials(OptimizerSpec::from_name("ipg"), fb, cfg.trials, cfg.iterations, cfg.master_seed);
        if (tb.best.final_cost() > cfg.threshold)
            throw ConvergenceError("bond block did not converge (cost " +
                                   fmt(tb.best.final_cost()) + ")");
        art.blocks.b_block = CompiledBlock{b_tmpl, tb.best.x_final};
    }
    if (cfg.target == "C") {
        emit("removed_gates.csv", ledger.str());
        save_artifact(art, artifact_path(cfg.out_dir, cfg.variant));
        summary.written.push_back(artifact_path(cfg.out_dir, cfg.variant));
    }
    json manifest{{"command", "optimize"},
                  {"config_hash", cfg.hash()},
                  {"seed", cfg.master_seed},
                  {"template", cfg.c_template},
                  {"target", cfg.target},
                  {"best_optimizer", summary.best_optimizer},
                  {"best_cost", summary.best_cost},
                  {"state_infidelity", summary.state_infidelity},
                  {"two_qubit", summary.c_two_qubit},
                  {"params", summary.c_params}};
    emit("optimize_manifest.json", manifest.dump(2) + "\n");
    return summary;
}

DepthScan cmd_vne_scan(const ExperimentConfig &cfg) {
    cfg.validate_for("vne-scan");
    fs::create_directories(cfg.out_dir);
    TemplateFamily family;
    CMatrix target;
    if (cfg.vne_family == "bond") {
        family = bond_family;
        target = cfg.vne_target == "identity" ? CMatrix(CMatrix::Identity(4, 4))
                                              : target_unitary_B(*cfg.U, *cfg.dt);
    } else {
        family = hopping_family;
        target = hopping_target(cfg, cfg.vne_target);
    }
    const DepthScan scan = depth_scan(family, target, cfg.l_max, cfg.vne, cfg.master_seed);
    std::ostringstream csv;
    csv << "depth,subset,ansatz_mean,target_mean,pass\n";
    for (const auto &row : scan.rows) {
        for (std::size_t s = 0; s < row.profile.subsets.size(); ++s) {
            std::string name;
            for (int q : row.profile.subsets[s])
                name += std::to_string(q);
            csv << row.depth << ',' << name << ',' << fmt(row.profile.mean[s]) << ','
                << fmt(scan.target.mean[s]) << ',' << (row.pass ? 1 : 0) << '\n';
        }
    }
    write_atomic(cfg.out_dir / "depth_table.csv", csv.str());
    json manifest{{"command", "vne-scan"},     {"config_hash", cfg.hash()},
                  {"seed", cfg.master_seed},    {"min_depth", scan.min_depth},
                  {"slack", cfg.vne.slack},     {"n_samples", cfg.vne.n_samples},
                  {"ensemble", ensemble_name(cfg.vne.ensemble)}};
    write_atomic(cfg.out_dir / "vne_manifest.json", manifest.dump(2) + "\n");
    if (scan.min_depth < 0)
        throw ExhaustionError("no depth up to " + std::to_string(cfg.l_max) +
                              " passes the entropy test");
    return scan;
}

namespace {

std::mt19937_64 job_rng(std::uint64_t master, std::uint64_t seed, double gamma) {
    std::uint64_t gbits = 0;
    static_assert(sizeof gbits == sizeof gamma);
    std::memcpy(&gbits, &gamma, sizeof gbits);
    // The variant is left out on purpose: all variants share noise draws.
    std::seed_seq seq{static_cast<std::uint32_t>(master), static_cast<std::uint32_t>(master >> 32),
                      static_cast<std::uint32_t>(seed),   static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(gbits),  static_cast<std::uint32_t>(gbits >> 32)};
    return std::mt19937_64(seq);
}

} // namespace

std::vector<ChiRow> simulate_job(const ExperimentConfig &cfg, Variant variant, double gamma,
                                 std::uint64_t seed, const CompiledSet *compiled,
                                 const std::vector<double> *oracle) {
    const LatticeLayout layout(cfg.n_sites);
    const TrotterConfig tc = cfg.trotter(variant);
    const Circuit step = build_trotter_step(layout, tc, compiled);
    const StateVector init = initial_state(layout);

    std::vector<double> own_oracle;
    if (!oracle) {
        own_oracle = exact_evolution_oracle(layout, cfg.trotter(Variant::Direct), cfg.chi_site);
        oracle = &own_oracle;
    }

    std::vector<int> x_qubits;
    if (cfg.bonds_in_x)
        for (int j = 0; j < layout.n_sites(); ++j)
            x_qubits.push_back(layout.bond(j));

    NoiseConfig noise;
    noise.gamma = gamma;
    noise.qubit_flip = cfg.qubit_flip;
    noise.qubit_gamma = cfg.qubit_gamma;
    StepRunOptions opts;
    opts.trajectories = cfg.trajectories;

    std::mt19937_64 rng = job_rng(cfg.master_seed, seed, gamma);
    std::vector<ShotHistogram> per_step;
    const MitigationPlan &plan = cfg.mitigation;
    if (plan.variants == 1 && !plan.relabel) {
        per_step = run_noisy_steps(step, tc.n_steps, init, noise, cfg.shots, x_qubits, rng, opts);
    } else {
        DebiasOptions dopts;
        dopts.relabel = plan.relabel;
        const auto vars = debias_variants(step, plan.variants, rng, dopts);
        std::vector<std::vector<ShotHistogram>> runs;
        const std::uint64_t m = vars.size();
        for (std::uint64_t v = 0; v < m; ++v) {
            const std::uint64_t shots = cfg.shots / m + (v < cfg.shots % m ? 1 : 0);
            if (shots == 0)
                continue;
            std::vector<int> phys_x;
            for (int q : x_qubits)
                phys_x.push_back(vars[v].perm[static_cast<std::size_t>(q)]);
            // Per-qubit noise is indexed by physical qubit, so relabeling moves it.
            auto hs = run_noisy_steps(vars[v].circuit, tc.n_steps,
                                      permute_state(init, vars[v].perm), noise, shots, phys_x, rng,
                                      opts);
            for (auto &h : hs)
                h = unpermute_histogram(h, vars[v].perm);
            runs.push_back(std::move(hs));
        }
        for (int k = 0; k <= tc.n_steps; ++k) {
            std::vector<ShotHistogram> at;
            for (const auto &r : runs)
                at.push_back(r[static_cast<std::size_t>(k)]);
            per_step.push_back(aggregate(at,
                                         plan.sharpen && at.size() >= 3 ? AggregateMode::Sharpen
                                                                        : AggregateMode::Average,
                                         plan.sharpen_factor));
        }
    }

    const int n_up = initial_up_count(layout);
    const int n_down = initial_down_count(layout);
    const std::vector<int> charges =
        plan.charge_filter ? expected_charge_pattern(layout) : std::vector<int>{};
    std::vector<ChiRow> rows;
    for (int k = 0; k <= tc.n_steps; ++k) {
        ChiRow row;
        row.step = k;
        row.t = k * tc.dt;
        row.variant = variant;
        row.gamma = gamma;
        row.seed = seed;
        row.shots = cfg.shots;
        row.oracle = (*oracle)[static_cast<std::size_t>(k)];
        ShotHistogram h = per_step[static_cast<std::size_t>(k)];
        const double total = static_cast<double>(h.total());
        try {
            if (plan.spin_filter)
                h = postselect_spin(h, layout, n_up, n_down).histogram;
            if (plan.charge_filter)
                h = postselect_charge(h, layout, charges).histogram;
            row.discarded = 1.0 - static_cast<double>(h.total()) / total;
            row.chi = magnetization_correlator(h, layout, cfg.chi_site);
        } catch (const NoDataError &) {
            row.discarded = 1.0;
            row.chi = std::nan("");
        }
        rows.push_back(row);
    }
    return rows;
}

namespace {

std::string chi_csv_header() {
    return "step,t,chi,variant,gamma,seed,shots,discarded_frac,oracle\n";
}

std::string chi_csv_rows(const std::vector<ChiRow> &rows) {
    std::ostringstream out;
    for (const auto &r : rows)
        out << r.step << ',' << fmt(r.t) << ',' << fmt(r.chi) << ',' << variant_name(r.variant)
            << ',' << fmt(r.gamma) << ',' << r.seed << ',' << r.shots << ','
            << fmt(r.discarded) << ',' << fmt(r.oracle) << '\n';
    return out.str();
}

} // namespace

std::vector<ChiRow> cmd_simulate(const ExperimentConfig &cfg) {
    cfg.validate_for("simulate");
    fs::create_directories(cfg.out_dir);
    const fs::path art_dir = cfg.artifact_dir.empty() ? cfg.out_dir : cfg.artifact_dir;

    std::vector<std::optional<CompiledSet>> compiled;
    for (Variant v : cfg.variants) {
        if (v == Variant::Direct) {
            compiled.emplace_back();
            continue;
        }
        const CompiledArtifact a = load_artifact(artifact_path(art_dir, v));
        if (a.variant != v || a.J != *cfg.J || a.U != *cfg.U || a.dt != *cfg.dt)
            throw MissingArtifactError("artifact " + artifact_path(art_dir, v).string() +
                                       " was built for other parameters; rerun 'lgtsim optimize'");
        compiled.emplace_back(a.blocks);
    }

    const LatticeLayout layout(cfg.n_sites);
    const std::vector<double> oracle =
        exact_evolution_oracle(layout, cfg.trotter(Variant::Direct), cfg.chi_site);

    struct Job {
        std::size_t variant_index;
        double gamma;
        std::uint64_t seed;
    };
    std::vector<Job> jobs;
    for (std::size_t v = 0; v < cfg.variants.size(); ++v)
        for (double g : *cfg.gammas)
            for (std::uint64_t s : cfg.seeds)
                jobs.push_back({v, g, s});

    std::vector<std::vector<ChiRow>> results(jobs.size());
    std::vector<std::exception_ptr> errors(jobs.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < jobs.size(); i = next++) {
            const Job &job = jobs[i];
            const Variant v = cfg.variants[job.variant_index];
            try {
                const auto &c = compiled[job.variant_index];
                results[i] = simulate_job(cfg, v, job.gamma, job.seed, c ? &*c : nullptr, &oracle);
                const std::string stem = variant_name(v) + "_g" + fmt(job.gamma) + "_s" +
                                         std::to_string(job.seed);
                write_atomic(cfg.out_dir / "jobs" / (stem + ".csv"),
                             chi_csv_header() + chi_csv_rows(results[i]));
                double mean_discard = 0.0;
                for (const auto &r : results[i])
                    mean_discard += r.discarded;
                mean_discard /= static_cast<double>(results[i].size());
                json m{{"gamma", job.gamma},
                       {"shots", cfg.shots},
                       {"seed", job.seed},
                       {"master_seed", cfg.master_seed},
                       {"variant", variant_name(v)},
                       {"variants", cfg.mitigation.variants},
                       {"mitigation",
                        {{"spin_filter", cfg.mitigation.spin_filter},
                         {"charge_filter", cfg.mitigation.charge_filter},
                         {"sharpen", cfg.mitigation.sharpen},
                         {"sharpen_factor", cfg.mitigation.sharpen_factor},
                         {"relabel", cfg.mitigation.relabel}}},
                       {"trajectories", cfg.trajectories},
                       {"discard_fraction", mean_discard},
                       {"config_hash", cfg.hash()}};
                write_atomic(cfg.out_dir / "jobs" / (stem + ".json"), m.dump(2) + "\n");
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const int n_workers = std::max(1, std::min<int>(cfg.jobs, static_cast<int>(jobs.size())));
    std::vector<std::thread> pool;
    for (int w = 1; w < n_workers; ++w)
        pool.emplace_back(worker);
    worker();
    for (auto &t : pool)
        t.join();
    for (auto &e : errors)
        if (e)
            std::rethrow_exception(e);

    std::vector<ChiRow> all;
    std::string body = chi_csv_header();
    for (const auto &r : results) {
        body += chi_csv_rows(r);
        all.insert(all.end(), r.begin(), r.end());
    }
    write_atomic(cfg.out_dir / "chi.csv", body);
    json manifest{{"command", "simulate"},
                  {"config_hash", cfg.hash()},
                  {"seed", cfg.master_seed},
                  {"jobs", jobs.size()},
                  {"n_sites", cfg.n_sites},
                  {"n_steps", cfg.n_steps},
                  {"J", *cfg.J},
                  {"U", *cfg.U},
                  {"dt", *cfg.dt},
                  {"gammas", *cfg.gammas},
                  {"shots", cfg.shots}};
    write_atomic(cfg.out_dir / "simulate_manifest.json", manifest.dump(2) + "\n");
    return all;
}

int template_step_cost(Variant v, int n_sites) {
    switch (v) {
    case Variant::Direct:
        return 2 * n_sites * kDirectCCost + n_sites * kDirectBCost;
    case Variant::Gbo:
        return 2 * n_sites * two_qubit_count(hopping_ansatz_gbo()) + n_sites * kDirectBCost;
    case Variant::Vne:
        return 2 * n_sites * two_qubit_count(hopping_ansatz_reduced()) +
               n_sites * two_qubit_count(bond_family(1));
    }
    return 0;
}

std::vector<CostRow> cmd_report(const ExperimentConfig &cfg) {
    cfg.validate_for("report");
    fs::create_directories(cfg.out_dir);
    const fs::path art_dir = cfg.artifact_dir.empty() ? cfg.out_dir : cfg.artifact_dir;
    const LatticeLayout layout(cfg.n_sites);
    std::vector<CostRow> rows;
    for (Variant v : {Variant::Direct, Variant::Gbo, Variant::Vne}) {
        CostRow row{v, cfg.n_sites, 0, "template"};
        if (v == Variant::Direct) {
            TrotterConfig tc;
            tc.J = 1.0;
            tc.U = 1.0;
            tc.dt = 0.1; // the direct cost does not depend on the angles
            row.two_qubit = two_qubit_count(build_trotter_step(layout, tc));
            row.source = "model";
        } else if (fs::exists(artifact_path(art_dir, v))) {
            const CompiledArtifact a = load_artifact(artifact_path(art_dir, v));
            TrotterConfig tc;
            tc.J = a.J;
            tc.U = a.U;
            tc.dt = a.dt;
            tc.variant = v;
            row.two_qubit = two_qubit_count(build_trotter_step(layout, tc, &a.blocks));
            row.source = "artifact";
        } else {
            row.two_qubit = template_step_cost(v, cfg.n_sites);
        }
        rows.push_back(row);
    }
    std::ostringstream csv;
    csv << "variant,n_sites,two_qubit_per_step,per_site,source\n";
    for (const auto &r : rows)
        csv << variant_name(r.variant) << ',' << r.n_sites << ',' << r.two_qubit << ','
            << r.two_qubit / r.n_sites << ',' << r.source << '\n';
    write_atomic(cfg.out_dir / "gate_cost.csv", csv.str());
    return rows;
}

} // namespace lgtsim
