#include "sqt/cli.hpp"

#include "sqt/errors.hpp"
#include "sqt/json_io.hpp"
#include "sqt/scattering.hpp"
#include "sqt/sq.hpp"
#include "sqt/verify.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>

namespace sqt {

namespace {

struct CommonFlags {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::string out_path;
    std::string format = "csv";
};

struct Context {
    Json config = Json::object();
    std::uint64_t seed = 0;
    const CommonFlags *flags = nullptr;
    std::ostream *out = nullptr;
    std::ostream *err = nullptr;
};

Json load_json_file(const std::string &path) {
    std::ifstream in(path);
    if (!in) throw InvalidInput("cannot open " + path);
    try {
        return Json::parse(in);
    } catch (const Json::parse_error &e) {
        throw InvalidInput("malformed JSON in " + path + ": " + e.what());
    }
}

std::size_t get_count(const Json &cfg, const char *key, std::size_t fallback, std::size_t min_value = 0) {
    if (!cfg.contains(key)) return fallback;
    const Json &v = cfg.at(key);
    if (!v.is_number_integer() || v.get<long long>() < static_cast<long long>(min_value))
        throw InvalidInput(std::string(key) + " must be an integer >= " + std::to_string(min_value));
    return v.get<std::size_t>();
}

double get_real(const Json &cfg, const char *key, double fallback) {
    if (!cfg.contains(key)) return fallback;
    const Json &v = cfg.at(key);
    if (!v.is_number() || !std::isfinite(v.get<double>())) throw InvalidInput(std::string(key) + " must be a finite number");
    return v.get<double>();
}

std::uint64_t get_seed(const Json &cfg, const char *key, std::uint64_t fallback) {
    if (!cfg.contains(key)) return fallback;
    const Json &v = cfg.at(key);
    if (!v.is_number_integer() || v.get<long long>() < 0) throw InvalidInput(std::string(key) + " must be a non-negative integer");
    return v.get<std::uint64_t>();
}

std::size_t thread_cap() {
    const char *env = std::getenv("SQ_TOOLKIT_THREADS");
    if (env == nullptr || *env == '\0') return 0;
    try {
        std::size_t pos = 0;
        const long long n = std::stoll(env, &pos);
        if (pos != std::string(env).size() || n < 0) throw InvalidInput("");
        return static_cast<std::size_t>(n);
    } catch (const std::exception &) {
        throw InvalidInput("SQ_TOOLKIT_THREADS must be a non-negative integer");
    }
}

// The state a config refers to: inline "state", a "state_file", the config itself, or a random state
// over "factor_dims" ("product": true for a product state) drawn from the seed.
StateVector resolve_state(const Context &ctx) {
    const Json &cfg = ctx.config;
    if (cfg.contains("state")) return state_from_json(cfg.at("state"));
    if (cfg.contains("state_file")) {
        if (!cfg.at("state_file").is_string()) throw InvalidInput("state_file must be a path");
        return state_from_json(load_json_file(cfg.at("state_file").get<std::string>()));
    }
    if (cfg.contains("amplitudes")) return state_from_json(cfg);
    if (cfg.contains("factor_dims")) {
        const Json &dims_j = cfg.at("factor_dims");
        if (!dims_j.is_array() || dims_j.empty()) throw InvalidInput("factor_dims must be a non-empty array");
        Dims dims;
        for (const auto &d : dims_j) {
            if (!d.is_number_integer() || d.get<long long>() <= 0) throw InvalidInput("factor_dims must be positive integers");
            dims.push_back(d.get<std::size_t>());
        }
        Rng rng(ctx.seed);
        const bool product = cfg.value("product", false);
        return product ? random_product_state(dims, rng) : random_state(dims, rng);
    }
    throw InvalidInput("config names no state (expected state, state_file, amplitudes or factor_dims)");
}

void emit(const Context &ctx, const std::string &text) {
    if (ctx.flags->out_path.empty()) {
        *ctx.out << text;
        return;
    }
    std::ofstream file(ctx.flags->out_path, std::ios::binary);
    if (!file) throw InvalidInput("cannot write " + ctx.flags->out_path);
    file << text;
}

std::vector<double> rounded(const std::vector<double> &xs) {
    std::vector<double> r;
    for (double x : xs) r.push_back(round12(x));
    return r;
}

int cmd_schmidt(const Context &ctx) {
    const StateVector state = resolve_state(ctx);
    const SchmidtForm form  = schmidt(state);
    const double error      = (form.reconstruct() - state.amplitudes()).cwiseAbs().maxCoeff();
    const Json report       = {{"factor_dims", state.factor_dims()},
                               {"rank", form.rank()},
                               {"weights", rounded(form.weights)},
                               {"entropy", round12(shannon_entropy(form.weights))},
                               {"reconstruction_error", error}};
    emit(ctx, report.dump(2) + "\n");
    return exit_ok;
}

int cmd_sq(const Context &ctx) {
    const StateVector state = resolve_state(ctx);
    const std::string method = ctx.config.value("method", std::string("closed_form"));
    if (method == "closed_form") {
        if (state.factor_count() != 2) throw NotBipartite("closed_form needs exactly 2 factors");
        emit(ctx, to_json(sq_bipartite(state)).dump(2) + "\n");
        return exit_ok;
    }
    if (method != "search") throw InvalidInput("method must be closed_form or search");

    SearchOptions opt;
    opt.restarts  = get_count(ctx.config, "restarts", 10, 1);
    opt.max_iters = get_count(ctx.config, "max_iters", opt.max_iters, 1);
    opt.tol       = get_real(ctx.config, "tol", 1e-10);
    if (opt.tol < 0.0) throw InvalidInput("tol must be non-negative");
    opt.seed    = ctx.seed;
    opt.threads = thread_cap();
    const SqResult result = sq_search(state, opt);
    Json report           = to_json(result);
    if (state.factor_count() == 2) report["gap_to_closed_form"] = round12(result.value - sq_bipartite(state).value);
    emit(ctx, report.dump(2) + "\n");
    return exit_ok;
}

int cmd_verify(const Context &ctx) {
    VerifyConfig vc;
    vc.samples               = get_count(ctx.config, "samples", vc.samples);
    vc.observables_per_state = get_count(ctx.config, "observables_per_state", vc.observables_per_state);
    vc.max_dim               = get_count(ctx.config, "max_dim", vc.max_dim);
    vc.tolerance             = get_real(ctx.config, "tolerance", vc.tolerance);
    vc.seed                  = ctx.seed;
    const VerifyReport report = run_verification(vc);

    Json props = Json::array();
    for (const auto &p : report.properties)
        props.push_back({{"name", p.name},
                         {"passed", p.passed},
                         {"samples", p.samples},
                         {"worst_violation", p.worst_violation},
                         {"threshold", p.threshold}});
    const Json out = {{"seed", vc.seed}, {"passed", report.all_passed()}, {"properties", props}};
    emit(ctx, out.dump(2) + "\n");
    return report.all_passed() ? exit_ok : exit_property_violation;
}

CollisionModel model_from_config(const Json &cfg, std::uint64_t seed) {
    const std::size_t d = get_count(cfg, "d", 4, 1);
    CollisionModel m;
    m.d1               = get_count(cfg, "d1", d, 1);
    m.d2               = get_count(cfg, "d2", d, 1);
    m.free_energies_1  = cfg.contains("free_energies_1") ? cfg.at("free_energies_1").get<std::vector<double>>()
                                                         : box_levels(m.d1);
    m.free_energies_2  = cfg.contains("free_energies_2") ? cfg.at("free_energies_2").get<std::vector<double>>()
                                                         : box_levels(m.d2);
    m.coupling         = get_real(cfg, "coupling", 0.5);
    m.duration         = get_real(cfg, "duration", 1.0);
    m.interaction_seed = get_seed(cfg, "interaction_seed", seed);
    m.validate();
    return m;
}

int write_trajectory(const Context &ctx, const GasTrajectory &traj) {
    const std::string body = ctx.flags->format == "json" ? to_json(traj).dump(2) + "\n" : to_csv(traj);
    const double initial   = traj.sq_estimates.front();
    const double final     = traj.sq_estimates.back();
    const double peak      = *std::max_element(traj.sq_estimates.begin(), traj.sq_estimates.end());
    const Json summary     = {{"initial", round12(initial)}, {"final", round12(final)}, {"max", round12(peak)}};
    emit(ctx, body);
    (ctx.flags->out_path.empty() ? *ctx.err : *ctx.out) << summary.dump() << "\n";
    return exit_ok;
}

int cmd_scatter(const Context &ctx) {
    const CollisionModel model = model_from_config(ctx.config, ctx.seed);
    Rng rng(ctx.seed);
    const StateVector in1 = ctx.config.contains("in1") ? state_from_json(ctx.config.at("in1"))
                                                       : random_state({model.d1}, rng);
    const StateVector in2 = ctx.config.contains("in2") ? state_from_json(ctx.config.at("in2"))
                                                       : random_state({model.d2}, rng);
    const auto samples = get_count(ctx.config, "samples", 11, 2);
    return write_trajectory(ctx, entropy_trajectory(model, in1, in2, samples));
}

int cmd_gas(const Context &ctx) {
    const std::size_t n = get_count(ctx.config, "n", 3);
    const std::size_t d = get_count(ctx.config, "d", 2, 1);
    Json model_cfg      = ctx.config;
    model_cfg["d"]      = d;
    model_cfg.erase("d1");
    model_cfg.erase("d2");
    const CollisionModel model = model_from_config(model_cfg, ctx.seed);
    GasOptions opt;
    opt.restarts  = get_count(ctx.config, "restarts", opt.restarts, 1);
    opt.max_iters = get_count(ctx.config, "max_iters", opt.max_iters, 1);
    opt.threads   = thread_cap();
    const auto collisions = get_count(ctx.config, "collisions", 10);
    return write_trajectory(ctx, gas_run(n, d, collisions, model, ctx.seed, opt));
}

} // namespace

int run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
    CLI::App app{"Entropy of pure multi-particle states under product measurements"};
    app.require_subcommand(1);

    struct Sub {
        const char *name;
        const char *help;
        int (*run)(const Context &);
        CommonFlags flags;
        CLI::App *app = nullptr;
    };
    std::vector<Sub> subs = {
        {"schmidt", "Schmidt decomposition of a bipartite state", cmd_schmidt, {}},
        {"sq", "S_q of a state (closed_form or search)", cmd_sq, {}},
        {"verify", "Run the property battery and report violations", cmd_verify, {}},
        {"scatter", "Two-particle collision entropy trajectory", cmd_scatter, {}},
        {"gas", "Dilute n-particle gas with sequential pair collisions", cmd_gas, {}},
    };
    for (auto &s : subs) {
        s.app = app.add_subcommand(s.name, s.help);
        s.app->add_option("--config", s.flags.config_path, "JSON config file");
        s.app->add_option("--seed", s.flags.seed, "Random seed (overrides the config)");
        s.app->add_option("--out", s.flags.out_path, "Output file (default stdout)");
        s.app->add_option("--format", s.flags.format, "Trajectory format")->check(CLI::IsMember({"csv", "json"}));
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &) {
        out << app.help();
        return exit_ok;
    } catch (const CLI::CallForAllHelp &) {
        out << app.help("", CLI::AppFormatMode::All);
        return exit_ok;
    } catch (const CLI::ParseError &e) {
        err << "error: " << e.what() << "\n";
        return exit_config_error;
    }

    for (const auto &s : subs) {
        if (!s.app->parsed()) continue;
        try {
            Context ctx;
            ctx.flags = &s.flags;
            ctx.out   = &out;
            ctx.err   = &err;
            if (!s.flags.config_path.empty()) ctx.config = load_json_file(s.flags.config_path);
            if (!ctx.config.is_object()) throw InvalidInput("config must be a JSON object");
            ctx.seed = s.flags.seed ? *s.flags.seed : get_seed(ctx.config, "seed", 0);
            return s.run(ctx);
        } catch (const InvalidInput &e) {
            err << "config error: " << e.what() << "\n";
            return exit_config_error;
        } catch (const Json::exception &e) {
            err << "config error: " << e.what() << "\n";
            return exit_config_error;
        } catch (const DomainError &e) {
            err << "domain error: " << e.what() << "\n";
            return exit_domain_error;
        }
    }
    return exit_config_error;
}

} // namespace sqt
