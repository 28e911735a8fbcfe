#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "lptile/experiments.hpp"

#include "json.hpp"

using namespace lptile;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {
int run_cli(const std::string& args) {
    const std::string cmd = std::string(LPTILE_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

std::string slurp(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

// minimal structural validator for the subset of JSON Schema the report uses
bool validate(const json& schema, const json& value);

bool type_matches(const std::string& t, const json& v) {
    if (t == "object") return v.is_object();
    if (t == "array") return v.is_array();
    if (t == "string") return v.is_string();
    if (t == "integer") return v.is_number_integer() || v.is_number_unsigned();
    if (t == "number") return v.is_number();
    if (t == "boolean") return v.is_boolean();
    return false;
}

bool validate(const json& schema, const json& value) {
    if (schema.contains("type") && !type_matches(schema["type"], value)) return false;
    if (schema.contains("enum")) {
        bool any = false;
        for (const auto& e : schema["enum"])
            if (e == value) any = true;
        if (!any) return false;
    }
    if (schema.contains("required"))
        for (const auto& key : schema["required"])
            if (!value.contains(key.get<std::string>())) return false;
    if (schema.contains("properties"))
        for (const auto& [key, sub] : schema["properties"].items())
            if (value.contains(key) && !validate(sub, value[key])) return false;
    return true;
}
}  // namespace

TEST_CASE("config parsing: sections, overrides, comments, lists") {
    std::stringstream ss(
        "# global\n"
        "n = 1024\n"
        "trials = 7\n"
        "[varq]\n"
        "trials = 50\n"
        "p = 2, 3, 4\n");
    const Config cfg = Config::parse(ss);
    CHECK(cfg.get_long("varq", "n", 0) == 1024);        // falls back to global
    CHECK(cfg.get_long("varq", "trials", 0) == 50);     // section wins
    CHECK(cfg.get_long("martingale", "trials", 0) == 7);
    const auto list = cfg.get_list("varq", "p", {});
    REQUIRE(list.size() == 3);
    CHECK(list[1] == 3.0);
    CHECK(cfg.get_double("varq", "missing", 2.5) == 2.5);

    std::stringstream bad("novalue\n");
    CHECK_THROWS_AS(Config::parse(bad), std::invalid_argument);
}

TEST_CASE("run_experiment rejects unknown names and bad grid sizes") {
    Config cfg;
    CHECK_THROWS_AS(run_experiment("nope", cfg, 1, std::nullopt), std::invalid_argument);
    CHECK_THROWS_AS(run_experiment("varq", cfg, 1, std::size_t{100}), std::invalid_argument);
    CHECK(experiment_names().size() == 12);
}

TEST_CASE("reports are deterministic given config and seed") {
    Config cfg;
    cfg.set("varq", "trials", "40");
    const ExperimentResult a = run_experiment("varq", cfg, 99, std::nullopt);
    const ExperimentResult b = run_experiment("varq", cfg, 99, std::nullopt);
    CHECK(a.csv == b.csv);  // byte identical
    json ja = json::parse(a.json);
    json jb = json::parse(b.json);
    ja.erase("wall_time_ms");
    jb.erase("wall_time_ms");
    CHECK(ja == jb);

    const ExperimentResult c = run_experiment("varq", cfg, 100, std::nullopt);
    json jc = json::parse(c.json);
    CHECK(jc["seed"] == 100);
}

TEST_CASE("reports validate against the shipped schema") {
    const json schema = json::parse(slurp(LPTILE_SCHEMA_PATH));
    Config cfg;
    cfg.set("varq", "trials", "10");
    for (const std::string name : {"varq", "greedy-split", "martingale"}) {
        const ExperimentResult r = run_experiment(name, cfg, 7, std::nullopt);
        const json rep = json::parse(r.json);
        CHECK(validate(schema, rep));
    }
    // a report missing a required field must fail the validator
    json broken = json::parse(run_experiment("varq", cfg, 7, std::nullopt).json);
    broken.erase("seed");
    CHECK(!validate(schema, broken));
}

TEST_CASE("emit_report writes both files; empty results give header-only CSV") {
    const fs::path dir = fs::temp_directory_path() / "lptile_test_emit";
    fs::remove_all(dir);
    ExperimentResult r;
    r.csv = "a,b\n";
    r.json = "{}\n";
    CHECK(emit_report("demo", r, dir) == 0);
    CHECK(slurp(dir / "demo.csv") == "a,b\n");
    r.numerical_ok = false;
    CHECK(emit_report("demo", r, dir) == 3);
    fs::remove_all(dir);
}

TEST_CASE("cli binary: exit codes and byte-identical reruns") {
    const fs::path dir = fs::temp_directory_path() / "lptile_test_cli";
    fs::remove_all(dir);
    fs::create_directories(dir);

    CHECK(run_cli("varq --seed 5 --out " + (dir / "a").string()) == 0);
    CHECK(run_cli("varq --seed 5 --out " + (dir / "b").string()) == 0);
    CHECK(slurp(dir / "a" / "varq.csv") == slurp(dir / "b" / "varq.csv"));
    {
        json ja = json::parse(slurp(dir / "a" / "varq.json"));
        json jb = json::parse(slurp(dir / "b" / "varq.json"));
        ja.erase("wall_time_ms");
        jb.erase("wall_time_ms");
        CHECK(ja == jb);
    }

    SUBCASE("unknown experiment exits 2 with no partial output") {
        const fs::path out = dir / "unknown";
        CHECK(run_cli("no-such-experiment --out " + out.string()) == 2);
        CHECK(!fs::exists(out / "no-such-experiment.csv"));
    }
    SUBCASE("missing config file exits 2 with no partial output") {
        const fs::path out = dir / "missingcfg";
        CHECK(run_cli("varq --config /nonexistent.cfg --out " + out.string()) == 2);
        CHECK(!fs::exists(out / "varq.csv"));
    }
    SUBCASE("bad --n exits 2") {
        CHECK(run_cli("varq --n 100 --out " + (dir / "badn").string()) == 2);
    }
    SUBCASE("config file steers the experiment") {
        const fs::path cfgfile = dir / "t.cfg";
        std::ofstream(cfgfile) << "[varq]\ntrials = 12\n";
        CHECK(run_cli("varq --config " + cfgfile.string() + " --out " +
                      (dir / "cfg").string()) == 0);
        const json rep = json::parse(slurp(dir / "cfg" / "varq.json"));
        CHECK(rep["config"]["varq.trials"] == "12");
    }
    fs::remove_all(dir);
}
