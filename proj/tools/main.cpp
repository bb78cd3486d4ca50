// CLI for the nilbracket library: one subcommand per experiment kind, a JSON
// config file with field-wise flag overrides (flags win), and deterministic
// line-delimited output. Exit codes: 0 success, 1 verification failure,
// 2 invalid input.

#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include <nilbracket/lab.hpp>

namespace lab = nilbracket::lab;

namespace {

lab::json load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw lab::ConfigError("config", "cannot open '" + path + "'");
    try {
        return lab::json::parse(in);
    } catch (const std::exception& e) {
        throw lab::ConfigError("config", "parse error in '" + path + "': " + e.what());
    }
}

lab::json parse_inline_json(const std::string& text, const std::string& field) {
    try {
        return lab::json::parse(text);
    } catch (const std::exception& e) {
        throw lab::ConfigError(field, std::string("inline JSON parse error: ") + e.what());
    }
}

struct SubFlags {
    CLI::App* app = nullptr;
    std::string kind;

    std::string config_path;
    unsigned d = 0;
    std::vector<std::string> alpha;
    std::vector<std::string> theta;
    std::string epsilon;
    std::string window;
    unsigned grid = 0;
    std::uint64_t seed = 0;
    std::vector<long long> sequence;
    std::vector<long long> members;
    std::string expr;
    std::vector<std::string> terms;
    std::string constraints;
    unsigned steps = 0;
    std::string space;
    std::string witness_powers;
    unsigned perturb_denominator = 0;
    std::string suite;
    std::string format;
    unsigned jobs = 0;

    bool has(const std::string& flag) const {
        const CLI::Option* opt = app->get_option_no_throw(flag);
        return opt != nullptr && opt->count() > 0;
    }
};

void add_subcommand(CLI::App& app, std::vector<std::unique_ptr<SubFlags>>& subs,
                    const std::string& kind, const std::string& description) {
    auto holder = std::make_unique<SubFlags>();
    SubFlags& f = *holder;
    f.kind = kind;
    f.app = app.add_subcommand(kind, description);

    f.app->add_option("--config", f.config_path,
                      "JSON config file; explicit flags override its fields");
    f.app->add_option("--seed", f.seed, "seed for randomized draws");
    f.app->add_option("--format", f.format, "output format: jsonl (exact) or csv (lossy)");
    f.app->add_option("--jobs", f.jobs,
                      "worker threads for window scans; output is independent of the count");

    const bool windowed = kind == "eval" || kind == "power" || kind == "orbit" ||
                          kind == "return-set" || kind == "multi-return" ||
                          kind == "progressions" || kind == "sgd" || kind == "level-set";
    if (windowed)
        f.app->add_option("--window", f.window, "closed integer window LO:HI");
    if (kind != "eval" && kind != "level-set" && kind != "verify")
        f.app->add_option("--d", f.d, "dimension / gap bound / progression depth");
    if (kind == "power" || kind == "reduce" || kind == "orbit" || kind == "return-set" ||
        kind == "multi-return")
        f.app->add_option("--alpha", f.alpha,
                          "exact rational \"p/q\" (repeat; meaning depends on the subcommand)");
    if (kind == "return-set" || kind == "multi-return" || kind == "level-set")
        f.app->add_option("--epsilon", f.epsilon, "exact rational closeness threshold");
    if (kind == "orbit")
        f.app->add_option("--theta", f.theta, "start coordinates \"p/q\" (repeat; default origin)");
    if (kind == "multi-return") {
        f.app->add_option("--grid", f.grid, "witness grid denominator (torus witnesses k/grid)");
        f.app->add_option("--steps", f.steps, "simultaneous return depth (default: d)");
        f.app->add_option("--space", f.space, "torus (default) or nil");
        f.app->add_option("--witness-powers", f.witness_powers,
                          "nil space: witness power window LO:HI");
        f.app->add_option("--perturb-den", f.perturb_denominator,
                          "nil space: witness perturbation denominator (0 disables)");
    }
    if (kind == "eval") {
        f.app->add_option("--expr", f.expr, "expression tree as inline JSON");
        f.app->add_option("--term", f.terms,
                          "nested-word term COEFF:POWER (repeat; bracketed right to left)");
    }
    if (kind == "level-set") {
        f.app->add_option("--term", f.terms, "monomial constraint COEFF:POWER (repeat)");
        f.app->add_option("--constraints", f.constraints,
                          "inline JSON array of {expr, epsilon} constraints");
    }
    if (kind == "sgd")
        f.app->add_option("--p", f.sequence, "sequence value (repeat, all >= 1)");
    if (kind == "progressions")
        f.app->add_option("--member", f.members, "set member (repeat)");
    if (kind == "verify")
        f.app->add_option("--suite", f.suite, "suite name or \"all\"");

    subs.push_back(std::move(holder));
}

lab::ExperimentConfig build_config(const SubFlags& f) {
    lab::ExperimentConfig cfg;
    if (f.has("--config")) lab::apply_config_json(cfg, load_config_file(f.config_path));
    cfg.kind = f.kind;
    if (f.has("--d")) cfg.d = f.d;
    if (f.has("--alpha")) cfg.alpha = f.alpha;
    if (f.has("--theta")) cfg.theta = f.theta;
    if (f.has("--epsilon")) cfg.epsilon = f.epsilon;
    if (f.has("--window")) cfg.window = lab::parse_window(f.window);
    if (f.has("--grid")) cfg.grid = f.grid;
    if (f.has("--seed")) cfg.seed = f.seed;
    if (f.has("--p")) cfg.sequence = f.sequence;
    if (f.has("--member")) cfg.members = f.members;
    if (f.has("--expr")) cfg.expr = parse_inline_json(f.expr, "expr");
    if (f.has("--term")) cfg.terms = f.terms;
    if (f.has("--constraints")) cfg.constraints = parse_inline_json(f.constraints, "constraints");
    if (f.has("--steps")) cfg.steps = f.steps;
    if (f.has("--space")) cfg.space = f.space;
    if (f.has("--witness-powers")) {
        nilbracket::Window w = lab::parse_window(f.witness_powers, "witness_powers");
        cfg.witness_lo = w.lo;
        cfg.witness_hi = w.hi;
    }
    if (f.has("--perturb-den")) cfg.perturb_denominator = f.perturb_denominator;
    if (f.has("--suite")) cfg.suite = f.suite;
    if (f.has("--format")) cfg.format = f.format;
    if (f.has("--jobs")) cfg.jobs = f.jobs;
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Exact experiments with bracket polynomials, unipotent lattice reduction, and "
        "return-time sets. Output is line-delimited JSON with exact rational strings "
        "(CSV on request), byte-identical for identical (config, seed)."};
    app.require_subcommand(0, 1);

    std::string top_config;
    CLI::Option* top_config_opt =
        app.add_option("--config", top_config, "JSON config file naming the experiment kind");

    std::vector<std::unique_ptr<SubFlags>> subs;
    add_subcommand(app, subs, "eval", "evaluate a bracket expression over a window");
    add_subcommand(app, subs, "power", "closed-form powers of the first-superdiagonal matrix");
    add_subcommand(app, subs, "reduce", "fundamental-domain reduction of one matrix");
    add_subcommand(app, subs, "orbit", "affine torus skew-product orbit");
    add_subcommand(app, subs, "return-set", "entrywise return times of the reduced orbit");
    add_subcommand(app, subs, "multi-return", "simultaneous return times with witness search");
    add_subcommand(app, subs, "progressions", "common differences of progressions inside a set");
    add_subcommand(app, subs, "sgd", "sums of a sequence with bounded selection gaps");
    add_subcommand(app, subs, "level-set", "integers where every constraint is near-integral");
    add_subcommand(app, subs, "verify", "run the exact property suites");

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);  // --help/--version
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        lab::ExperimentConfig cfg;
        const SubFlags* active = nullptr;
        for (const auto& sub : subs)
            if (sub->app->parsed()) active = sub.get();
        if (active != nullptr) {
            cfg = build_config(*active);
        } else if (top_config_opt->count() > 0) {
            lab::apply_config_json(cfg, load_config_file(top_config));
        } else {
            std::cerr << app.help();
            return 2;
        }
        return lab::run(cfg, std::cout, std::cerr);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
