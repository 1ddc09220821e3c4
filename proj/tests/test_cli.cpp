#include <catch2/catch_amalgamated.hpp>

#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct RunResult {
    int exit_code = -1;
    std::string output;
};

RunResult run_cli(const std::string& args) {
    fs::path out = fs::temp_directory_path() / "profinite_cli_out.txt";
    std::string command = std::string(PROFINITE_CLI_PATH) + " " + args + " > " + out.string() + " 2>/dev/null";
    int status = std::system(command.c_str());
    RunResult result;
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    std::ifstream in(out);
    std::stringstream buffer;
    buffer << in.rdbuf();
    result.output = buffer.str();
    return result;
}

fs::path write_file(const std::string& name, const std::string& content) {
    fs::path path = fs::temp_directory_path() / name;
    std::ofstream out(path);
    out << content;
    return path;
}

fs::path word_framework_file() {
    json even = {{"alphabet", {"a", "b"}}, {"states", 2},      {"initial", 0},
                 {"transition", {{1, 1}, {0, 0}}},             {"value_of", {"even", "odd"}},
                 {"name", "even-length"}};
    json has_a = {{"alphabet", {"a", "b"}}, {"states", 2},     {"initial", 0},
                  {"transition", {{1, 0}, {1, 1}}},            {"value_of", {"no", "yes"}},
                  {"name", "contains-a"}};
    return write_file("word_fw.json", json{{"dfas", {even, has_a}}}.dump());
}

fs::path fo_framework_file() {
    json j = {{"signature", {{"relations", {{{"name", "E"}, {"arity", 2}}}}}},
              {"sentences", {"exists x . E(x,x)", "exists x . exists y . !x=y"}}};
    return write_file("fo_fw.json", j.dump());
}

}  // namespace

TEST_CASE("approx subcommand") {
    auto fw = word_framework_file();

    SECTION("computes the exact four-point space") {
        auto result = run_cli("approx --framework word --file " + fw.string() + " --indices 0,1");
        REQUIRE(result.exit_code == 0);
        json report = json::parse(result.output);
        CHECK(report.at("level") == 2);
        CHECK(report.at("exact") == true);
        CHECK(report.at("points").size() == 4);
        CHECK(report.at("recognisers") == json({0, 1}));
    }

    SECTION("missing file exits 2") {
        auto result = run_cli("approx --framework word --file /nonexistent.json");
        CHECK(result.exit_code == 2);
    }

    SECTION("malformed file exits 2") {
        auto broken = write_file("broken.json", "{not json");
        auto result = run_cli("approx --framework word --file " + broken.string());
        CHECK(result.exit_code == 2);
    }

    SECTION("indices out of range exit 3") {
        auto result = run_cli("approx --framework word --file " + fw.string() + " --indices 0,9");
        CHECK(result.exit_code == 3);
    }

    SECTION("first-order spaces are budgeted") {
        auto fo = fo_framework_file();
        auto result =
            run_cli("approx --framework fo --file " + fo.string() + " --indices 0,1 --budget 13");
        REQUIRE(result.exit_code == 0);
        json report = json::parse(result.output);
        CHECK(report.at("exact") == false);
        CHECK(report.at("points").size() >= 3);
    }
}

TEST_CASE("realize subcommand") {
    auto fw = word_framework_file();
    auto result = run_cli("realize --framework word --file " + fw.string() + " --indices 0,1");
    REQUIRE(result.exit_code == 0);
    json report = json::parse(result.output);
    REQUIRE(report.at("realizations").size() == 4);
    for (const auto& row : report.at("realizations")) {
        CHECK(row.contains("point"));
        CHECK(row.at("witness").is_string());
    }
}

TEST_CASE("equations subcommand") {
    auto fw = word_framework_file();

    SECTION("empty generator list allows every pair") {
        auto gens = write_file("gens_empty.json", "[]");
        auto result = run_cli("equations --framework word --file " + fw.string() +
                              " --indices 0,1 --generators " + gens.string());
        REQUIRE(result.exit_code == 0);
        json report = json::parse(result.output);
        CHECK(report.at("equations").size() == 16);
    }

    SECTION("two-point chain keeps three equations") {
        auto gens = write_file("gens_chain.json",
                               json::array({{{"recogniser", 0}, {"accepted", {"even"}}}}).dump());
        auto result = run_cli("equations --framework word --file " + fw.string() +
                              " --indices 0 --generators " + gens.string());
        REQUIRE(result.exit_code == 0);
        json report = json::parse(result.output);
        CHECK(report.at("equations").size() == 3);
    }

    SECTION("classic pair derives the nine common equations") {
        auto gens = write_file("gens_pair.json",
                               json::array({{{"recogniser", 0}, {"accepted", {"even"}}},
                                            {{"recogniser", 1}, {"accepted", {"yes"}}}})
                                   .dump());
        auto result = run_cli("equations --framework word --file " + fw.string() +
                              " --indices 0,1 --generators " + gens.string());
        REQUIRE(result.exit_code == 0);
        json report = json::parse(result.output);
        CHECK(report.at("equations").size() == 9);
    }
}

TEST_CASE("check subcommand") {
    auto fw = word_framework_file();
    auto gens = write_file("gens_single.json",
                           json::array({{{"recogniser", 0}, {"accepted", {"even"}}}}).dump());

    SECTION("a generator is in its own lattice") {
        auto candidate =
            write_file("cand_even.json", json{{"recogniser", 0}, {"accepted", {"even"}}}.dump());
        auto result = run_cli("check --framework word --file " + fw.string() + " --indices 0,1" +
                              " --generators " + gens.string() + " --candidate " + candidate.string());
        REQUIRE(result.exit_code == 0);
        json report = json::parse(result.output);
        CHECK(report.at("verdict") == "IN_LATTICE");
        CHECK(report.at("certificate").is_null());
        CHECK(report.at("exact") == true);
    }

    SECTION("the complement of the lone generator raises a certificate") {
        auto candidate =
            write_file("cand_odd.json", json{{"recogniser", 0}, {"accepted", {"odd"}}}.dump());
        auto result = run_cli("check --framework word --file " + fw.string() + " --indices 0,1" +
                              " --generators " + gens.string() + " --candidate " + candidate.string());
        REQUIRE(result.exit_code == 1);
        json report = json::parse(result.output);
        CHECK(report.at("verdict") == "NOT_IN_LATTICE");
        REQUIRE(report.at("certificate").is_object());
        CHECK(report.at("certificate").contains("u"));
        CHECK(report.at("certificate").contains("v"));
    }

    SECTION("malformed candidate exits 2") {
        auto candidate = write_file("cand_bad.json", "{\"recogniser\": 0}");
        auto result = run_cli("check --framework word --file " + fw.string() + " --indices 0,1" +
                              " --generators " + gens.string() + " --candidate " + candidate.string());
        CHECK(result.exit_code == 2);
    }
}

TEST_CASE("verify subcommand") {
    SECTION("randomized suite passes") {
        auto result = run_cli("verify --trials 25 --seed 5");
        REQUIRE(result.exit_code == 0);
        json report = json::parse(result.output);
        CHECK(report.at("trials") == 25);
        CHECK(report.at("passed") == 25);
        CHECK(report.at("failed") == 0);
    }

    SECTION("same seed gives byte-identical reports") {
        auto first = run_cli("verify --trials 40 --seed 11");
        auto second = run_cli("verify --trials 40 --seed 11");
        CHECK(first.exit_code == 0);
        CHECK(first.output == second.output);
    }

    SECTION("zero trials is an empty pass") {
        auto result = run_cli("verify --trials 0");
        REQUIRE(result.exit_code == 0);
        json report = json::parse(result.output);
        CHECK(report.at("trials") == 0);
        CHECK(report.at("failed") == 0);
    }

    SECTION("text output is available") {
        auto result = run_cli("verify --trials 5 --output text");
        REQUIRE(result.exit_code == 0);
        CHECK(result.output.find("5/5 trials passed") != std::string::npos);
    }
}
