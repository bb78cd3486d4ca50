#include <catch2/catch_amalgamated.hpp>

#include <sstream>
#include <string>
#include <vector>

#include <nilbracket/lab.hpp>

using namespace nilbracket;
namespace lab = nilbracket::lab;

namespace {

struct RunOutput {
    int exit_code;
    std::vector<lab::json> rows;
    std::string raw;
};

RunOutput run_config(const lab::ExperimentConfig& cfg) {
    std::ostringstream out, err;
    int code = lab::run(cfg, out, err);
    RunOutput result{code, {}, out.str()};
    std::istringstream lines(result.raw);
    std::string line;
    while (std::getline(lines, line))
        if (!line.empty()) result.rows.push_back(lab::json::parse(line));
    return result;
}

std::vector<long long> row_field(const RunOutput& out, const std::string& key) {
    std::vector<long long> values;
    for (const lab::json& row : out.rows)
        if (row.contains(key)) values.push_back(row[key].get<long long>());
    return values;
}

}  // namespace

TEST_CASE("window strings parse with signs and reject malformed input") {
    Window w = lab::parse_window("-5:12");
    CHECK(w.lo == -5);
    CHECK(w.hi == 12);
    CHECK(lab::parse_window("1:8").lo == 1);
    CHECK_THROWS_AS(lab::parse_window("5"), lab::ConfigError);
    CHECK_THROWS_AS(lab::parse_window("a:b"), lab::ConfigError);
    CHECK_THROWS_AS(lab::parse_window("8:1"), lab::ConfigError);
    CHECK_THROWS_AS(lab::parse_window("1:2:3"), lab::ConfigError);
    CHECK_THROWS_AS(lab::parse_window(""), lab::ConfigError);
}

TEST_CASE("term strings pair a rational coefficient with a power") {
    auto [coeff, power] = lab::parse_term("1/3:2");
    CHECK(coeff == make_rational(1, 3));
    CHECK(power == 2);
    CHECK(lab::parse_term("-2/7:1").first == make_rational(-2, 7));
    CHECK_THROWS_AS(lab::parse_term("1/3"), lab::ConfigError);
    CHECK_THROWS_AS(lab::parse_term("1/3:x"), lab::ConfigError);
    CHECK_THROWS_AS(lab::parse_term("1/3:2:9"), lab::ConfigError);
}

TEST_CASE("expression trees round-trip through JSON") {
    using genpoly::GPExpr;
    GPExpr expr = GPExpr::sum(
        {GPExpr::prod(make_rational(2, 5), 1,
                      {GPExpr::mono(make_rational(1, 3), 2)}),
         GPExpr::scale(make_rational(-1, 2),
                       GPExpr::bracket(GPExpr::mono(make_rational(7, 4), 1)))});
    lab::ordered_json encoded = lab::expr_to_json(expr);
    GPExpr decoded = lab::expr_from_json(encoded);
    for (long long n = -10; n <= 10; ++n)
        CHECK(genpoly::eval_gp(decoded, n) == genpoly::eval_gp(expr, n));

    CHECK_THROWS_AS(lab::expr_from_json(lab::json::parse(R"({"coeff":"1/2"})")),
                    lab::ConfigError);
    CHECK_THROWS_AS(lab::expr_from_json(lab::json::parse(R"({"op":"spline"})")),
                    lab::ConfigError);
    CHECK_THROWS_AS(lab::expr_from_json(lab::json::parse(R"({"op":"mono","coeff":"1/2","power":0})")),
                    lab::ConfigError);
    CHECK_THROWS_AS(lab::expr_from_json(lab::json::parse(R"({"op":"mono","coeff":"1/0","power":1})")),
                    lab::ConfigError);
    CHECK_THROWS_AS(lab::expr_from_json(lab::json::parse(R"({"op":"sum","args":[]})")),
                    lab::ConfigError);
}

TEST_CASE("config JSON applies known keys and rejects unknown ones") {
    lab::ExperimentConfig cfg;
    lab::apply_config_json(cfg, lab::json::parse(R"({
        "kind": "return-set", "d": 2, "alpha": ["1/2", "1/2"],
        "epsilon": "3/10", "window": "1:8", "seed": 7, "jobs": 3
    })"));
    CHECK(cfg.kind == "return-set");
    CHECK(cfg.d == 2);
    CHECK(cfg.alpha == std::vector<std::string>{"1/2", "1/2"});
    CHECK(cfg.epsilon == "3/10");
    REQUIRE(cfg.window.has_value());
    CHECK(cfg.window->lo == 1);
    CHECK(cfg.window->hi == 8);
    CHECK(cfg.seed == 7);
    CHECK(cfg.jobs == 3);

    lab::ExperimentConfig array_window;
    lab::apply_config_json(array_window, lab::json::parse(R"({"window": [-4, 4]})"));
    CHECK(array_window.window->lo == -4);
    lab::ExperimentConfig object_window;
    lab::apply_config_json(object_window, lab::json::parse(R"({"window": {"lo": 0, "hi": 5}})"));
    CHECK(object_window.window->hi == 5);

    lab::ExperimentConfig bad;
    CHECK_THROWS_AS(lab::apply_config_json(bad, lab::json::parse(R"({"alpha_vec": []})")),
                    lab::ConfigError);
    CHECK_THROWS_AS(lab::apply_config_json(bad, lab::json::parse(R"({"d": "two"})")),
                    lab::ConfigError);
    CHECK_THROWS_AS(lab::apply_config_json(bad, lab::json::parse(R"([1,2])")), lab::ConfigError);
}

TEST_CASE("return-set runs emit one row per returning n") {
    lab::ExperimentConfig cfg;
    cfg.kind = "return-set";
    cfg.d = 2;
    cfg.alpha = {"1/2", "1/2"};
    cfg.epsilon = "3/10";
    cfg.window = Window(1, 8);
    RunOutput out = run_config(cfg);
    CHECK(out.exit_code == 0);
    CHECK(row_field(out, "n") == std::vector<long long>{2, 6, 8});
    for (const lab::json& row : out.rows) {
        CHECK(row["op"] == "nil_return_set");
        CHECK(parse_rational(row["max_residual"].get<std::string>()) < make_rational(3, 10));
    }
}

TEST_CASE("sums-with-gaps runs list the admissible sums") {
    lab::ExperimentConfig cfg;
    cfg.kind = "sgd";
    cfg.d = 1;
    cfg.sequence = {1, 2, 4};
    RunOutput out = run_config(cfg);
    CHECK(out.exit_code == 0);
    CHECK(row_field(out, "value") == std::vector<long long>{1, 2, 3, 4, 6, 7});
}

TEST_CASE("evaluation runs carry exact strings with advisory floats") {
    lab::ExperimentConfig cfg;
    cfg.kind = "eval";
    cfg.terms = {"1/3:2"};
    cfg.window = Window(0, 5);
    RunOutput out = run_config(cfg);
    REQUIRE(out.rows.size() == 6);
    CHECK(out.rows[2]["op"] == "eval_sgp");
    CHECK(out.rows[2]["value"] == "4/3");
    CHECK(out.rows[2]["nearest"] == "1");
    CHECK(out.rows[2]["dist"] == "1/3");
    CHECK(out.rows[2]["value_float"].get<double>() == Catch::Approx(4.0 / 3.0));

    lab::ExperimentConfig expr_cfg;
    expr_cfg.kind = "eval";
    expr_cfg.expr = lab::json::parse(R"({"op":"mono","coeff":"1/2","power":1})");
    expr_cfg.window = Window(0, 4);
    RunOutput evals = run_config(expr_cfg);
    CHECK(evals.rows[1]["op"] == "eval_gp");
    CHECK(evals.rows[1]["value"] == "1/2");
    CHECK(evals.rows[1]["residual"] == "1/2");

    lab::ExperimentConfig both = expr_cfg;
    both.terms = {"1/2:1"};
    CHECK_THROWS_AS(run_config(both), lab::ConfigError);
    lab::ExperimentConfig neither;
    neither.kind = "eval";
    neither.window = Window(0, 4);
    CHECK_THROWS_AS(run_config(neither), lab::ConfigError);
}

TEST_CASE("level-set runs accept shared-epsilon terms and constraint lists") {
    lab::ExperimentConfig cfg;
    cfg.kind = "level-set";
    cfg.terms = {"1/3:2"};
    cfg.epsilon = "1/4";
    cfg.window = Window(0, 5);
    RunOutput out = run_config(cfg);
    CHECK(row_field(out, "n") == std::vector<long long>{0, 3});

    lab::ExperimentConfig general;
    general.kind = "level-set";
    general.constraints = lab::json::parse(
        R"([{"expr": {"op":"mono","coeff":"1/3","power":2}, "epsilon": "1/4"},
            {"expr": {"op":"mono","coeff":"1/2","power":1}, "epsilon": "1/4"}])");
    general.window = Window(0, 5);
    RunOutput both = run_config(general);
    CHECK(row_field(both, "n") == std::vector<long long>{0});
    CHECK(both.rows[0]["dists"].size() == 2);

    lab::ExperimentConfig conflict = general;
    conflict.terms = {"1/3:2"};
    CHECK_THROWS_AS(run_config(conflict), lab::ConfigError);
}

TEST_CASE("reduction runs report representative and lattice witness") {
    lab::ExperimentConfig cfg;
    cfg.kind = "reduce";
    cfg.d = 2;
    cfg.alpha = {"7/10", "3/5", "9/10"};
    RunOutput out = run_config(cfg);
    REQUIRE(out.rows.size() == 1);
    CHECK(out.rows[0]["rep"] == std::vector<std::string>{"-3/10", "-2/5", "1/5"});
    CHECK(out.rows[0]["lattice"] == std::vector<std::string>{"-1", "-1", "0"});

    cfg.alpha = {"7/10"};
    CHECK_THROWS_AS(run_config(cfg), lab::ConfigError);
}

TEST_CASE("orbit runs follow the skew product") {
    lab::ExperimentConfig cfg;
    cfg.kind = "orbit";
    cfg.d = 2;
    cfg.alpha = {"1/4"};
    cfg.window = Window(0, 3);
    RunOutput out = run_config(cfg);
    REQUIRE(out.rows.size() == 4);
    CHECK(out.rows[3]["coords"] == std::vector<std::string>{"3/4", "3/4"});

    cfg.theta = {"1/2", "0"};
    RunOutput shifted = run_config(cfg);
    CHECK(shifted.rows[0]["coords"] == std::vector<std::string>{"1/2", "0"});
}

TEST_CASE("multi-return runs search torus and quotient witnesses") {
    lab::ExperimentConfig cfg;
    cfg.kind = "multi-return";
    cfg.d = 1;
    cfg.alpha = {"1/4"};
    cfg.epsilon = "1/8";
    cfg.window = Window(0, 8);
    cfg.steps = 1;
    RunOutput torus = run_config(cfg);
    CHECK(row_field(torus, "n") == std::vector<long long>{0, 4, 8});
    CHECK(torus.rows[0]["witness"] == std::vector<std::string>{"0"});

    lab::ExperimentConfig nil;
    nil.kind = "multi-return";
    nil.space = "nil";
    nil.d = 2;
    nil.alpha = {"1/2", "1/2"};
    nil.epsilon = "3/10";
    nil.window = Window(1, 8);
    nil.steps = 1;
    RunOutput quotient = run_config(nil);
    CHECK(row_field(quotient, "n") == std::vector<long long>{2, 6, 8});

    lab::ExperimentConfig bad = cfg;
    bad.space = "plane";
    CHECK_THROWS_AS(run_config(bad), lab::ConfigError);
}

TEST_CASE("progression runs attach a witness base point") {
    lab::ExperimentConfig cfg;
    cfg.kind = "progressions";
    cfg.d = 2;
    cfg.members = {0, 3, 6, 9};
    cfg.window = Window(0, 9);
    RunOutput out = run_config(cfg);
    CHECK(row_field(out, "n") == std::vector<long long>{0, 3});
    for (const lab::json& row : out.rows) CHECK(row["witness_m"].is_number());

    cfg.members = {0, 42};
    CHECK_THROWS_AS(run_config(cfg), lab::ConfigError);
}

TEST_CASE("identical configs are byte-identical across worker counts") {
    lab::ExperimentConfig cfg;
    cfg.kind = "eval";
    cfg.expr = lab::json::parse(
        R"({"op":"sum","args":[{"op":"mono","coeff":"3/7","power":2},
             {"op":"bracket","arg":{"op":"mono","coeff":"5/9","power":1}}]})");
    cfg.window = Window(-60, 60);
    RunOutput serial = run_config(cfg);
    for (unsigned jobs : {2u, 3u, 8u, 200u}) {
        lab::ExperimentConfig parallel = cfg;
        parallel.jobs = jobs;
        CHECK(run_config(parallel).raw == serial.raw);
    }

    lab::ExperimentConfig returns;
    returns.kind = "return-set";
    returns.d = 2;
    returns.alpha = {"3/7", "1/3"};
    returns.epsilon = "1/5";
    returns.window = Window(-40, 40);
    RunOutput one = run_config(returns);
    returns.jobs = 5;
    CHECK(run_config(returns).raw == one.raw);
}

TEST_CASE("csv output is a lossy table with one header") {
    lab::ExperimentConfig cfg;
    cfg.kind = "sgd";
    cfg.d = 2;
    cfg.sequence = {1, 2, 4};
    cfg.format = "csv";
    std::ostringstream raw, err;
    CHECK(lab::run(cfg, raw, err) == 0);
    std::istringstream lines(raw.str());
    std::string header;
    REQUIRE(std::getline(lines, header));
    CHECK(header == "op,value");
    std::string first;
    REQUIRE(std::getline(lines, first));
    CHECK(first == "sums_with_gaps,1");

    cfg.format = "tsv";
    CHECK_THROWS_AS(run_config(cfg), lab::ConfigError);
}

TEST_CASE("verification runs stream trial rows and a suite summary") {
    lab::ExperimentConfig cfg;
    cfg.kind = "verify";
    cfg.suite = "known-answers";
    RunOutput out = run_config(cfg);
    CHECK(out.exit_code == 0);
    REQUIRE(!out.rows.empty());
    const lab::json& summary = out.rows.back();
    CHECK(summary["op"] == "verify_suite");
    CHECK(summary["suite"] == "known-answers");
    CHECK(summary["pass"] == true);
    CHECK(summary["criterion"] == 11);
    bool saw_trial = false;
    for (const lab::json& row : out.rows)
        if (row["op"] == "verify_trial") {
            saw_trial = true;
            CHECK(row["ok"] == true);
        }
    CHECK(saw_trial);

    cfg.suite = "nonexistent";
    CHECK_THROWS_AS(run_config(cfg), lab::ConfigError);

    lab::ExperimentConfig bad_kind;
    bad_kind.kind = "explore";
    CHECK_THROWS_AS(run_config(bad_kind), lab::ConfigError);
}
