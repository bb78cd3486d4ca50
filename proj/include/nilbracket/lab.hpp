#pragma once

// Experiment runner behind the CLI: a validated configuration, deterministic
// row emission (JSONL, or CSV as a lossy convenience), and optional fan-out of
// window scans across worker threads. Identical (config, seed) produces
// byte-identical output regardless of worker count: chunks are contiguous
// subwindows merged in window order, and row values never depend on the
// partitioning. Exact rationals are emitted as strings; float fields are
// advisory renderings only.

#include <json.hpp>

#include <algorithm>
#include <cstdint>
#include <exception>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "genpoly.hpp"
#include "indexset.hpp"
#include "nildyn.hpp"
#include "rational.hpp"
#include "setfam.hpp"
#include "unipotent.hpp"
#include "verify.hpp"

namespace nilbracket::lab {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

// Invalid input: the offending field is part of the message. The CLI maps
// this (and any other input-shaped failure) to exit code 2.
class ConfigError : public std::runtime_error {
   public:
    ConfigError(const std::string& field, const std::string& message)
        : std::runtime_error(field + ": " + message), field_(field) {}
    const std::string& field() const { return field_; }

   private:
    std::string field_;
};

struct ExperimentConfig {
    std::string kind;  // eval | power | reduce | orbit | return-set |
                       // multi-return | progressions | sgd | level-set | verify

    unsigned d = 0;                    // dimension / gap / progression depth, per kind
    std::vector<std::string> alpha;    // exact rational strings; meaning is per kind
    std::vector<std::string> theta;    // orbit: start coordinates (default: origin)
    std::string epsilon;               // exact rational string
    std::optional<Window> window;
    unsigned grid = 64;                // multi-return: witness grid denominator
    std::uint64_t seed = 20260815;     // randomized suites only
    std::vector<long long> sequence;   // sgd: the sequence P
    std::vector<long long> members;    // progressions: the set S
    json expr;                         // eval: expression tree (null = unset)
    std::vector<std::string> terms;    // "coeff:power" monomials (eval: nested word)
    json constraints;                  // level-set: [{expr, epsilon}, ...] (null = unset)
    unsigned steps = 0;                // multi-return: 0 means "use d"
    std::string space = "torus";       // multi-return: torus | nil
    long long witness_lo = 0;          // multi-return nil: witness power window
    long long witness_hi = 0;
    unsigned perturb_denominator = 0;  // multi-return nil: 0 disables perturbations
    std::string suite = "all";         // verify: suite name or "all"
    std::string format = "jsonl";      // jsonl | csv
    unsigned jobs = 1;
};

inline const std::vector<std::string>& experiment_kinds() {
    static const std::vector<std::string> kinds{"eval",         "power",        "reduce",
                                                "orbit",        "return-set",   "multi-return",
                                                "progressions", "sgd",          "level-set",
                                                "verify"};
    return kinds;
}

// --------------------------------------------------------------------------
// Expression trees as JSON:
//   {"op":"mono","coeff":"p/q","power":k}
//   {"op":"bracket","arg":E}
//   {"op":"scale","coeff":"p/q","arg":E}
//   {"op":"sum","args":[E,...]}
//   {"op":"prod","coeff":"p/q","power":k,"brackets":[E,...]}
// --------------------------------------------------------------------------

inline genpoly::GPExpr expr_from_json(const json& j, const std::string& where = "expr") {
    if (!j.is_object() || !j.contains("op") || !j["op"].is_string())
        throw ConfigError(where, "expected an object with a string \"op\"");
    const std::string op = j["op"].get<std::string>();
    auto coeff = [&](const char* key) {
        if (!j.contains(key) || !j[key].is_string())
            throw ConfigError(where, op + " needs a rational string \"" + key + "\"");
        try {
            return parse_rational(j[key].get<std::string>());
        } catch (const std::exception& e) {
            throw ConfigError(where + "." + key, e.what());
        }
    };
    auto power = [&] {
        if (!j.contains("power") || !j["power"].is_number_unsigned())
            throw ConfigError(where, op + " needs a non-negative integer \"power\"");
        return j["power"].get<unsigned>();
    };
    try {
        if (op == "mono") return genpoly::GPExpr::mono(coeff("coeff"), power());
        if (op == "bracket") {
            if (!j.contains("arg")) throw ConfigError(where, "bracket needs \"arg\"");
            return genpoly::GPExpr::bracket(expr_from_json(j["arg"], where + ".arg"));
        }
        if (op == "scale") {
            if (!j.contains("arg")) throw ConfigError(where, "scale needs \"arg\"");
            return genpoly::GPExpr::scale(coeff("coeff"), expr_from_json(j["arg"], where + ".arg"));
        }
        if (op == "sum") {
            if (!j.contains("args") || !j["args"].is_array())
                throw ConfigError(where, "sum needs an array \"args\"");
            std::vector<genpoly::GPExpr> parts;
            for (std::size_t t = 0; t < j["args"].size(); ++t)
                parts.push_back(expr_from_json(j["args"][t], where + ".args[" + std::to_string(t) + "]"));
            return genpoly::GPExpr::sum(std::move(parts));
        }
        if (op == "prod") {
            if (!j.contains("brackets") || !j["brackets"].is_array())
                throw ConfigError(where, "prod needs an array \"brackets\"");
            std::vector<genpoly::GPExpr> parts;
            for (std::size_t t = 0; t < j["brackets"].size(); ++t)
                parts.push_back(
                    expr_from_json(j["brackets"][t], where + ".brackets[" + std::to_string(t) + "]"));
            return genpoly::GPExpr::prod(coeff("coeff"), power(), std::move(parts));
        }
    } catch (const std::invalid_argument& e) {
        throw ConfigError(where, e.what());
    }
    throw ConfigError(where, "unknown op '" + op + "'");
}

inline ordered_json expr_to_json(const genpoly::GPExpr& expr) {
    const auto& node = expr.node();
    ordered_json j;
    switch (node.kind) {
        case genpoly::GPExpr::Kind::Mono:
            j["op"] = "mono";
            j["coeff"] = to_string(node.coeff);
            j["power"] = node.power;
            return j;
        case genpoly::GPExpr::Kind::Bracket:
            j["op"] = "bracket";
            j["arg"] = expr_to_json(node.children[0]);
            return j;
        case genpoly::GPExpr::Kind::Scale:
            j["op"] = "scale";
            j["coeff"] = to_string(node.coeff);
            j["arg"] = expr_to_json(node.children[0]);
            return j;
        case genpoly::GPExpr::Kind::Sum: {
            j["op"] = "sum";
            ordered_json args = ordered_json::array();
            for (const auto& child : node.children) args.push_back(expr_to_json(child));
            j["args"] = std::move(args);
            return j;
        }
        case genpoly::GPExpr::Kind::Prod: {
            j["op"] = "prod";
            j["coeff"] = to_string(node.coeff);
            j["power"] = node.power;
            ordered_json brackets = ordered_json::array();
            for (const auto& child : node.children) brackets.push_back(expr_to_json(child));
            j["brackets"] = std::move(brackets);
            return j;
        }
    }
    throw std::logic_error("expr_to_json: unreachable");
}

// --------------------------------------------------------------------------
// Config parsing helpers.
// --------------------------------------------------------------------------

// "LO:HI" with signed integers.
inline Window parse_window(const std::string& text, const std::string& field = "window") {
    // Search from position 1 so a leading '-' on LO is never taken as the separator.
    const std::size_t sep = text.find(':', 1);
    if (sep == std::string::npos) throw ConfigError(field, "expected LO:HI, got '" + text + "'");
    try {
        std::size_t used_lo = 0, used_hi = 0;
        long long lo = std::stoll(text.substr(0, sep), &used_lo);
        long long hi = std::stoll(text.substr(sep + 1), &used_hi);
        if (used_lo != sep || used_hi != text.size() - sep - 1)
            throw ConfigError(field, "trailing junk in '" + text + "'");
        if (lo > hi) throw ConfigError(field, "lo > hi in '" + text + "'");
        return Window(lo, hi);
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception&) {
        throw ConfigError(field, "expected LO:HI, got '" + text + "'");
    }
}

// "coeff:power" with coeff a rational string, e.g. "1/3:2" for (1/3)·n².
inline std::pair<Rational, unsigned> parse_term(const std::string& text,
                                                const std::string& field = "terms") {
    const std::size_t sep = text.rfind(':');
    if (sep == std::string::npos)
        throw ConfigError(field, "expected COEFF:POWER, got '" + text + "'");
    try {
        Rational coeff = parse_rational(text.substr(0, sep));
        std::size_t used = 0;
        unsigned long power = std::stoul(text.substr(sep + 1), &used);
        if (used != text.size() - sep - 1) throw ConfigError(field, "trailing junk in '" + text + "'");
        return {std::move(coeff), static_cast<unsigned>(power)};
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError(field, std::string(e.what()) + " in '" + text + "'");
    }
}

// Applies the keys present in a JSON config object. Unknown keys are errors.
inline void apply_config_json(ExperimentConfig& cfg, const json& j) {
    if (!j.is_object()) throw ConfigError("config", "top level must be an object");
    for (const auto& [key, value] : j.items()) {
        try {
            if (key == "kind") cfg.kind = value.get<std::string>();
            else if (key == "d") cfg.d = value.get<unsigned>();
            else if (key == "alpha") cfg.alpha = value.get<std::vector<std::string>>();
            else if (key == "theta") cfg.theta = value.get<std::vector<std::string>>();
            else if (key == "epsilon") cfg.epsilon = value.get<std::string>();
            else if (key == "window") {
                if (value.is_string()) cfg.window = parse_window(value.get<std::string>());
                else if (value.is_array() && value.size() == 2)
                    cfg.window = Window(value[0].get<long long>(), value[1].get<long long>());
                else if (value.is_object())
                    cfg.window = Window(value.at("lo").get<long long>(), value.at("hi").get<long long>());
                else throw ConfigError("window", "expected \"LO:HI\", [lo,hi], or {lo,hi}");
            } else if (key == "grid") cfg.grid = value.get<unsigned>();
            else if (key == "seed") cfg.seed = value.get<std::uint64_t>();
            else if (key == "sequence") cfg.sequence = value.get<std::vector<long long>>();
            else if (key == "members") cfg.members = value.get<std::vector<long long>>();
            else if (key == "expr") cfg.expr = value;
            else if (key == "terms") cfg.terms = value.get<std::vector<std::string>>();
            else if (key == "constraints") cfg.constraints = value;
            else if (key == "steps") cfg.steps = value.get<unsigned>();
            else if (key == "space") cfg.space = value.get<std::string>();
            else if (key == "witness_powers") {
                Window w = value.is_string() ? parse_window(value.get<std::string>(), "witness_powers")
                                             : Window(value.at(0).get<long long>(),
                                                      value.at(1).get<long long>());
                cfg.witness_lo = w.lo;
                cfg.witness_hi = w.hi;
            } else if (key == "perturb_denominator") cfg.perturb_denominator = value.get<unsigned>();
            else if (key == "suite") cfg.suite = value.get<std::string>();
            else if (key == "format") cfg.format = value.get<std::string>();
            else if (key == "jobs") cfg.jobs = value.get<unsigned>();
            else throw ConfigError(key, "unknown config key");
        } catch (const ConfigError&) {
            throw;
        } catch (const std::exception& e) {
            throw ConfigError(key, e.what());
        }
    }
}

namespace detail {

inline Rational parse_field(const std::string& text, const std::string& field) {
    try {
        return parse_rational(text);
    } catch (const std::exception& e) {
        throw ConfigError(field, e.what());
    }
}

inline std::vector<Rational> parse_rationals(const std::vector<std::string>& texts,
                                             const std::string& field) {
    std::vector<Rational> out;
    out.reserve(texts.size());
    for (std::size_t t = 0; t < texts.size(); ++t)
        out.push_back(parse_field(texts[t], field + "[" + std::to_string(t) + "]"));
    return out;
}

inline unsigned need_d(const ExperimentConfig& cfg) {
    if (cfg.d == 0) throw ConfigError("d", "required and must be >= 1");
    return cfg.d;
}

inline Window need_window(const ExperimentConfig& cfg) {
    if (!cfg.window) throw ConfigError("window", "required (LO:HI)");
    return *cfg.window;
}

inline Rational need_epsilon(const ExperimentConfig& cfg) {
    if (cfg.epsilon.empty()) throw ConfigError("epsilon", "required");
    Rational eps = parse_field(cfg.epsilon, "epsilon");
    if (eps <= 0) throw ConfigError("epsilon", "must be > 0");
    return eps;
}

inline std::vector<std::string> rational_strings(const std::vector<Rational>& xs) {
    std::vector<std::string> out;
    out.reserve(xs.size());
    for (const Rational& x : xs) out.push_back(to_string(x));
    return out;
}

inline std::vector<double> rational_floats(const std::vector<Rational>& xs) {
    std::vector<double> out;
    out.reserve(xs.size());
    for (const Rational& x : xs) out.push_back(to_double(x));
    return out;
}

inline std::vector<std::string> int_strings(const std::vector<Int>& xs) {
    std::vector<std::string> out;
    out.reserve(xs.size());
    for (const Int& x : xs) out.push_back(to_string(x));
    return out;
}

// Contiguous partition of a window into at most `jobs` chunks; results are
// concatenated in window order, so the output is independent of `jobs`.
template <class PerWindow>
std::vector<ordered_json> chunked_rows(Window w, unsigned jobs, PerWindow per_window) {
    const long long len = w.length();
    long long workers = std::max(1u, jobs);
    if (workers > len) workers = len;
    if (workers <= 1) return per_window(w);

    std::vector<Window> chunks;
    const long long base = len / workers, extra = len % workers;
    long long lo = w.lo;
    for (long long t = 0; t < workers; ++t) {
        const long long size = base + (t < extra ? 1 : 0);
        chunks.emplace_back(lo, lo + size - 1);
        lo += size;
    }

    std::vector<std::vector<ordered_json>> partial(chunks.size());
    std::vector<std::exception_ptr> errors(chunks.size());
    std::vector<std::thread> threads;
    threads.reserve(chunks.size());
    for (std::size_t t = 0; t < chunks.size(); ++t)
        threads.emplace_back([&, t] {
            try {
                partial[t] = per_window(chunks[t]);
            } catch (...) {
                errors[t] = std::current_exception();
            }
        });
    for (std::thread& th : threads) th.join();
    for (const std::exception_ptr& e : errors)
        if (e) std::rethrow_exception(e);

    std::vector<ordered_json> rows;
    for (std::vector<ordered_json>& part : partial)
        for (ordered_json& row : part) rows.push_back(std::move(row));
    return rows;
}

inline std::string csv_cell(const ordered_json& value) {
    std::string raw;
    if (value.is_string()) raw = value.get<std::string>();
    else if (value.is_boolean()) raw = value.get<bool>() ? "true" : "false";
    else if (value.is_array()) {
        for (std::size_t t = 0; t < value.size(); ++t) {
            if (t) raw += ";";
            raw += csv_cell(value[t]);
        }
    } else if (value.is_null()) raw = "";
    else raw = value.dump();

    if (raw.find_first_of(",\"\n") == std::string::npos) return raw;
    std::string quoted = "\"";
    for (char c : raw) {
        if (c == '"') quoted += '"';
        quoted += c;
    }
    return quoted + "\"";
}

inline void emit(const std::vector<ordered_json>& rows, const std::string& format,
                 std::ostream& out) {
    if (format == "jsonl") {
        for (const ordered_json& row : rows) out << row.dump() << '\n';
        return;
    }
    if (format == "csv") {
        if (rows.empty()) return;
        std::string header;
        for (const auto& [key, value] : rows.front().items()) {
            if (!header.empty()) header += ",";
            header += key;
        }
        out << header << '\n';
        for (const ordered_json& row : rows) {
            std::string line;
            for (const auto& [key, value] : row.items()) {
                if (!line.empty()) line += ",";
                line += csv_cell(value);
            }
            out << line << '\n';
        }
        return;
    }
    throw ConfigError("format", "expected jsonl or csv, got '" + format + "'");
}

// ---- per-kind row builders -------------------------------------------------

inline std::vector<ordered_json> rows_eval(const ExperimentConfig& cfg) {
    const Window window = need_window(cfg);
    const bool has_expr = !cfg.expr.is_null();
    const bool has_terms = !cfg.terms.empty();
    if (has_expr == has_terms)
        throw ConfigError("expr", "eval needs exactly one of an expression tree or term list");

    auto value_row = [](const char* op, long long n, const Rational& value) {
        ordered_json row;
        row["op"] = op;
        row["n"] = n;
        row["value"] = to_string(value);
        row["nearest"] = to_string(Int(nearest_int(value)));
        row["residual"] = to_string(bracket_residual(value));
        row["dist"] = to_string(dist_to_int(value));
        row["value_float"] = to_double(value);
        return row;
    };

    if (has_terms) {
        std::vector<std::pair<unsigned, Rational>> terms;
        for (const std::string& text : cfg.terms) {
            auto [coeff, power] = parse_term(text);
            if (power == 0) throw ConfigError("terms", "nested-word powers must be >= 1");
            terms.emplace_back(power, std::move(coeff));
        }
        genpoly::SGPSpec spec(std::move(terms));
        return chunked_rows(window, cfg.jobs, [&](Window w) {
            std::vector<ordered_json> rows;
            for (long long n = w.lo; n <= w.hi; ++n)
                rows.push_back(value_row("eval_sgp", n, genpoly::eval_sgp(spec, n)));
            return rows;
        });
    }

    genpoly::GPExpr expr = expr_from_json(cfg.expr);
    return chunked_rows(window, cfg.jobs, [&](Window w) {
        std::vector<ordered_json> rows;
        for (long long n = w.lo; n <= w.hi; ++n)
            rows.push_back(value_row("eval_gp", n, genpoly::eval_gp(expr, n)));
        return rows;
    });
}

inline std::vector<ordered_json> rows_power(const ExperimentConfig& cfg) {
    const unsigned d = need_d(cfg);
    const Window window = need_window(cfg);
    std::vector<Rational> alpha = parse_rationals(cfg.alpha, "alpha");
    if (alpha.size() != d)
        throw ConfigError("alpha", "need exactly d = " + std::to_string(d) + " values");
    return chunked_rows(window, cfg.jobs, [&](Window w) {
        std::vector<ordered_json> rows;
        for (long long n = w.lo; n <= w.hi; ++n) {
            unipotent::UTMatrix a = unipotent::pow_closed(alpha, n);
            ordered_json row;
            row["op"] = "pow_closed";
            row["n"] = n;
            row["entries"] = rational_strings(a.entries());
            row["entries_float"] = rational_floats(a.entries());
            rows.push_back(std::move(row));
        }
        return rows;
    });
}

inline std::vector<ordered_json> rows_reduce(const ExperimentConfig& cfg) {
    const unsigned d = need_d(cfg);
    std::vector<Rational> entries = parse_rationals(cfg.alpha, "alpha");
    if (entries.size() != unipotent::detail::entry_count(d))
        throw ConfigError("alpha", "need d(d+1)/2 = " +
                                        std::to_string(unipotent::detail::entry_count(d)) +
                                        " entries in superdiagonal order");
    unipotent::UTMatrix w(d, std::move(entries));
    unipotent::ReducedPoint red = unipotent::reduce_mod_lattice(w);
    ordered_json row;
    row["op"] = "reduce_mod_lattice";
    row["entries"] = rational_strings(w.entries());
    row["rep"] = rational_strings(red.rep.entries());
    row["rep_float"] = rational_floats(red.rep.entries());
    row["lattice"] = int_strings(red.lattice.entries());
    return {std::move(row)};
}

inline std::vector<ordered_json> rows_orbit(const ExperimentConfig& cfg) {
    const unsigned d = need_d(cfg);
    const Window window = need_window(cfg);
    std::vector<Rational> alpha = parse_rationals(cfg.alpha, "alpha");
    if (alpha.size() != 1) throw ConfigError("alpha", "orbit takes a single rotation number");
    nildyn::TorusAffine t(d, std::move(alpha[0]));
    nildyn::TorusPoint start = nildyn::TorusPoint::origin(d);
    if (!cfg.theta.empty()) {
        std::vector<Rational> coords = parse_rationals(cfg.theta, "theta");
        if (coords.size() != d)
            throw ConfigError("theta", "need exactly d = " + std::to_string(d) + " coordinates");
        start = nildyn::TorusPoint(std::move(coords));
    }
    return chunked_rows(window, cfg.jobs, [&](Window w) {
        std::vector<ordered_json> rows;
        for (long long n = w.lo; n <= w.hi; ++n) {
            nildyn::TorusPoint p = nildyn::torus_iterate(t, start, n);
            ordered_json row;
            row["op"] = "torus_iterate";
            row["n"] = n;
            row["coords"] = rational_strings(p.coords);
            row["coords_float"] = rational_floats(p.coords);
            rows.push_back(std::move(row));
        }
        return rows;
    });
}

inline std::vector<ordered_json> rows_return_set(const ExperimentConfig& cfg) {
    const unsigned d = need_d(cfg);
    const Window window = need_window(cfg);
    const Rational eps = need_epsilon(cfg);
    std::vector<Rational> alpha = parse_rationals(cfg.alpha, "alpha");
    if (alpha.size() != d)
        throw ConfigError("alpha", "need exactly d = " + std::to_string(d) + " values");
    nildyn::NilRotation rot(d, std::move(alpha));
    return chunked_rows(window, cfg.jobs, [&](Window w) {
        std::vector<ordered_json> rows;
        const IndexSet hits = nildyn::nil_return_set(rot, eps, w);
        for (long long n : hits.members()) {
            Rational residual = nildyn::fz_tables(rot, n).max_abs_z();
            ordered_json row;
            row["op"] = "nil_return_set";
            row["n"] = n;
            row["max_residual"] = to_string(residual);
            row["max_residual_float"] = to_double(residual);
            rows.push_back(std::move(row));
        }
        return rows;
    });
}

inline std::vector<ordered_json> rows_multi_return(const ExperimentConfig& cfg) {
    const unsigned d = need_d(cfg);
    const Window window = need_window(cfg);
    const Rational eps = need_epsilon(cfg);
    const unsigned steps = cfg.steps ? cfg.steps : d;
    std::vector<Rational> alpha = parse_rationals(cfg.alpha, "alpha");

    if (cfg.space == "torus") {
        if (alpha.size() != 1)
            throw ConfigError("alpha", "torus multi-return takes a single rotation number");
        if (cfg.grid == 0) throw ConfigError("grid", "must be >= 1");
        nildyn::TorusAffine t(d, std::move(alpha[0]));
        nildyn::Box box = nildyn::Box::uniform(d, eps);
        return chunked_rows(window, cfg.jobs, [&](Window w) {
            std::vector<ordered_json> rows;
            for (const nildyn::TorusReturnHit& hit :
                 nildyn::multi_return_hits(t, box, steps, w, cfg.grid)) {
                ordered_json row;
                row["op"] = "multi_return_set";
                row["n"] = hit.n;
                row["witness"] = rational_strings(hit.witness.coords);
                row["witness_float"] = rational_floats(hit.witness.coords);
                rows.push_back(std::move(row));
            }
            return rows;
        });
    }
    if (cfg.space == "nil") {
        if (alpha.size() != d)
            throw ConfigError("alpha", "need exactly d = " + std::to_string(d) + " values");
        nildyn::NilRotation rot(d, std::move(alpha));
        nildyn::NilWitnessParams params{cfg.witness_lo, cfg.witness_hi, cfg.perturb_denominator};
        if (params.power_lo > params.power_hi)
            throw ConfigError("witness_powers", "lo > hi");
        return chunked_rows(window, cfg.jobs, [&](Window w) {
            std::vector<ordered_json> rows;
            for (const nildyn::NilReturnHit& hit :
                 nildyn::nil_multi_return_hits(rot, eps, steps, w, params)) {
                ordered_json row;
                row["op"] = "nil_multi_return_set";
                row["n"] = hit.n;
                row["witness"] = rational_strings(hit.witness.entries());
                row["witness_float"] = rational_floats(hit.witness.entries());
                rows.push_back(std::move(row));
            }
            return rows;
        });
    }
    throw ConfigError("space", "expected torus or nil, got '" + cfg.space + "'");
}

inline std::vector<ordered_json> rows_progressions(const ExperimentConfig& cfg) {
    const unsigned d = need_d(cfg);
    const Window window = need_window(cfg);
    if (cfg.members.empty()) throw ConfigError("members", "required");
    std::vector<long long> sorted = cfg.members;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    for (long long m : sorted)
        if (!window.contains(m))
            throw ConfigError("members", "member " + std::to_string(m) + " outside window");
    IndexSet s(window, std::move(sorted));
    std::vector<ordered_json> rows;
    const IndexSet diffs = setfam::common_difference_set(s, d);
    for (long long n : diffs.members()) {
        ordered_json row;
        row["op"] = "common_difference_set";
        row["n"] = n;
        std::optional<long long> witness = setfam::progression_witness(s, d, n);
        row["witness_m"] = witness ? ordered_json(*witness) : ordered_json(nullptr);
        rows.push_back(std::move(row));
    }
    return rows;
}

inline std::vector<ordered_json> rows_sgd(const ExperimentConfig& cfg) {
    const unsigned d = need_d(cfg);
    if (cfg.sequence.empty()) throw ConfigError("sequence", "required");
    for (long long v : cfg.sequence)
        if (v < 1) throw ConfigError("sequence", "values must be >= 1");
    setfam::SequenceP p(cfg.sequence);
    std::vector<ordered_json> rows;
    const IndexSet sums = setfam::sg_d(p, d, cfg.window);
    for (long long value : sums.members()) {
        ordered_json row;
        row["op"] = "sums_with_gaps";
        row["value"] = value;
        rows.push_back(std::move(row));
    }
    return rows;
}

inline std::vector<ordered_json> rows_level_set(const ExperimentConfig& cfg) {
    const Window window = need_window(cfg);
    std::vector<std::pair<genpoly::GPExpr, Rational>> constraints;
    if (!cfg.constraints.is_null()) {
        if (!cfg.terms.empty())
            throw ConfigError("constraints", "give either constraints or terms, not both");
        if (!cfg.constraints.is_array() || cfg.constraints.empty())
            throw ConfigError("constraints", "expected a non-empty array");
        for (std::size_t t = 0; t < cfg.constraints.size(); ++t) {
            const json& c = cfg.constraints[t];
            const std::string where = "constraints[" + std::to_string(t) + "]";
            if (!c.is_object() || !c.contains("expr") || !c.contains("epsilon"))
                throw ConfigError(where, "expected {expr, epsilon}");
            if (!c["epsilon"].is_string()) throw ConfigError(where + ".epsilon", "expected a string");
            Rational eps = parse_field(c["epsilon"].get<std::string>(), where + ".epsilon");
            if (eps <= 0) throw ConfigError(where + ".epsilon", "must be > 0");
            constraints.emplace_back(expr_from_json(c["expr"], where + ".expr"), std::move(eps));
        }
    } else {
        if (cfg.terms.empty()) throw ConfigError("terms", "level-set needs terms or constraints");
        const Rational eps = need_epsilon(cfg);
        for (const std::string& text : cfg.terms) {
            auto [coeff, power] = parse_term(text);
            constraints.emplace_back(genpoly::GPExpr::mono(std::move(coeff), power), eps);
        }
    }
    genpoly::LevelSetSpec spec(std::move(constraints));
    return chunked_rows(window, cfg.jobs, [&](Window w) {
        std::vector<ordered_json> rows;
        const IndexSet level = genpoly::level_set(spec, w);
        for (long long n : level.members()) {
            ordered_json row;
            row["op"] = "level_set";
            row["n"] = n;
            std::vector<std::string> dists;
            for (const auto& [expr, eps] : spec.constraints)
                dists.push_back(to_string(dist_to_int(genpoly::eval_gp(expr, n))));
            row["dists"] = std::move(dists);
            rows.push_back(std::move(row));
        }
        return rows;
    });
}

}  // namespace detail

// Runs one experiment, streaming rows to `out` and progress/timing to `err`.
// Returns 0 on success, 1 when a verification suite fails. Invalid input
// throws ConfigError (the CLI maps it to exit 2).
inline int run(const ExperimentConfig& cfg, std::ostream& out, std::ostream& err) {
    const auto& kinds = experiment_kinds();
    if (std::find(kinds.begin(), kinds.end(), cfg.kind) == kinds.end())
        throw ConfigError("kind", "unknown kind '" + cfg.kind + "'");
    if (cfg.format != "jsonl" && cfg.format != "csv")
        throw ConfigError("format", "expected jsonl or csv, got '" + cfg.format + "'");

    if (cfg.kind == "verify") {
        std::vector<std::string> names;
        if (cfg.suite == "all") names = verify::suite_names();
        else {
            const auto all = verify::suite_names();
            if (std::find(all.begin(), all.end(), cfg.suite) == all.end())
                throw ConfigError("suite", "unknown suite '" + cfg.suite + "'");
            names.push_back(cfg.suite);
        }
        std::vector<ordered_json> rows;
        verify::TrialSink sink;
        if (cfg.format == "jsonl")
            sink = [&rows](const std::string& suite, const std::string& label, bool ok) {
                ordered_json row;
                row["op"] = "verify_trial";
                row["suite"] = suite;
                row["label"] = label;
                row["ok"] = ok;
                rows.push_back(std::move(row));
            };
        bool all_pass = true;
        for (const std::string& name : names) {
            verify::SuiteResult result = verify::run_suite(name, cfg.seed, sink);
            all_pass = all_pass && result.pass;
            ordered_json row;
            row["op"] = "verify_suite";
            row["suite"] = result.name;
            row["criterion"] = result.criterion;
            row["pass"] = result.pass;
            row["checks"] = result.checks;
            row["failures"] = result.failures;
            row["notes"] = result.notes;
            rows.push_back(std::move(row));
            err << "suite " << result.name << ": " << (result.pass ? "pass" : "FAIL") << " ("
                << result.checks << " checks, " << result.seconds << " s)\n";
        }
        detail::emit(rows, cfg.format, out);
        return all_pass ? 0 : 1;
    }

    std::vector<ordered_json> rows;
    if (cfg.kind == "eval") rows = detail::rows_eval(cfg);
    else if (cfg.kind == "power") rows = detail::rows_power(cfg);
    else if (cfg.kind == "reduce") rows = detail::rows_reduce(cfg);
    else if (cfg.kind == "orbit") rows = detail::rows_orbit(cfg);
    else if (cfg.kind == "return-set") rows = detail::rows_return_set(cfg);
    else if (cfg.kind == "multi-return") rows = detail::rows_multi_return(cfg);
    else if (cfg.kind == "progressions") rows = detail::rows_progressions(cfg);
    else if (cfg.kind == "sgd") rows = detail::rows_sgd(cfg);
    else if (cfg.kind == "level-set") rows = detail::rows_level_set(cfg);
    detail::emit(rows, cfg.format, out);
    return 0;
}

}  // namespace nilbracket::lab
