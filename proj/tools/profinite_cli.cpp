// Command-line front end: loads framework definitions from JSON files,
// builds truncated spaces, derives equation sets, decides lattice
// membership and runs the randomized theorem suite.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "profinite/equations.hpp"
#include "profinite/fo.hpp"
#include "profinite/framework.hpp"
#include "profinite/json_io.hpp"
#include "profinite/space.hpp"
#include "profinite/words.hpp"

namespace {

using nlohmann::json;
using namespace profinite;

constexpr int exit_ok = 0;
constexpr int exit_certificate = 1;
constexpr int exit_parse_error = 2;
constexpr int exit_bad_indices = 3;

struct CliConfig {
    std::string framework_kind = "word";
    std::string framework_file;
    std::size_t budget = 200;
    std::vector<std::size_t> indices;
    std::uint64_t seed = 0;
    std::size_t trials = 200;
    std::string output = "json";
};

struct cli_file_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw cli_file_error("cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw cli_file_error(path + ": " + e.what());
    }
}

// Word framework files: {"dfas": [<dfa>, ...]}.
Framework<std::string> load_word_framework(const json& j) {
    std::vector<std::pair<std::string, words::Dfa>> dfas;
    std::size_t index = 0;
    for (const auto& d : j.at("dfas")) {
        std::string name = d.contains("name") ? d.at("name").get<std::string>()
                                              : "dfa" + std::to_string(index);
        dfas.emplace_back(std::move(name), io::dfa_from_json(d));
        ++index;
    }
    if (dfas.empty()) throw cli_file_error("word framework needs at least one DFA");
    words::Alphabet alphabet = dfas.front().second.alphabet();
    return words::word_framework(std::move(alphabet), std::move(dfas));
}

// First-order framework files:
// {"signature": {...}, "sentences": ["exists x . E(x,x)", ...]}.
Framework<fo::FiniteStructure> load_fo_framework(const json& j) {
    fo::Signature sig = io::signature_from_json(j.at("signature"));
    std::vector<std::pair<std::string, fo::Sentence>> sentences;
    std::size_t index = 0;
    for (const auto& s : j.at("sentences")) {
        try {
            sentences.emplace_back("s" + std::to_string(index),
                                   fo::parse_sentence(s.get<std::string>()));
        } catch (const fo::parse_error& e) {
            throw cli_file_error("sentence " + std::to_string(index) + ": " + e.what());
        }
        ++index;
    }
    if (sentences.empty()) throw cli_file_error("fo framework needs at least one sentence");
    return fo::fo_framework(std::move(sig), std::move(sentences));
}

void check_indices(std::size_t recogniser_count, const std::vector<std::size_t>& indices) {
    for (std::size_t i : indices)
        if (i >= recogniser_count)
            throw std::out_of_range("recogniser index " + std::to_string(i) + " out of range (" +
                                    std::to_string(recogniser_count) + " recognisers)");
}

template <typename Object>
std::vector<std::size_t> effective_indices(const Framework<Object>& fw, const CliConfig& cfg) {
    if (!cfg.indices.empty()) return cfg.indices;
    std::vector<std::size_t> all(fw.recogniser_count());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    return all;
}

void emit(const CliConfig& cfg, const json& report, const std::string& text) {
    if (cfg.output == "json")
        std::cout << report.dump(2) << "\n";
    else
        std::cout << text;
}

json witness_to_json(const std::string& w) { return json(w); }
json witness_to_json(const fo::FiniteStructure& m) { return io::structure_to_json(m); }

template <typename Object>
int run_approx(Framework<Object>& fw, const CliConfig& cfg) {
    auto indices = effective_indices(fw, cfg);
    check_indices(fw.recogniser_count(), indices);
    auto space = approximation_space(fw, indices, cfg.budget);
    std::ostringstream text;
    text << "level " << space.level() << (space.exact ? " exact" : " up to budget") << ", "
         << space.points.size() << " points\n";
    for (const auto& p : space.points) {
        text << " ";
        for (const auto& v : p) text << " " << v;
        text << "\n";
    }
    emit(cfg, io::space_to_json(space), text.str());
    return exit_ok;
}

template <typename Object>
int run_realize(Framework<Object>& fw, const CliConfig& cfg) {
    auto indices = effective_indices(fw, cfg);
    check_indices(fw.recogniser_count(), indices);
    auto space = approximation_space(fw, indices, cfg.budget);
    json rows = json::array();
    std::ostringstream text;
    for (const auto& p : space.points) {
        auto w = realize(fw, space, p);
        json row{{"point", p}};
        row["witness"] = w ? witness_to_json(*w) : json();
        rows.push_back(std::move(row));
        text << " ";
        for (const auto& v : p) text << " " << v;
        text << "  <-  " << (w ? fw.describe(*w) : "(not found)") << "\n";
    }
    emit(cfg, json{{"exact", space.exact}, {"realizations", rows}}, text.str());
    return exit_ok;
}

template <typename Object>
LanguageFamily load_family(const Framework<Object>& fw, const std::string& path) {
    LanguageFamily fam;
    for (const auto& l : load_json(path)) fam.members.push_back(io::language_from_json(fw, l));
    return fam;
}

template <typename Object>
int run_equations(Framework<Object>& fw, const CliConfig& cfg, const std::string& generators_file) {
    auto indices = effective_indices(fw, cfg);
    check_indices(fw.recogniser_count(), indices);
    LanguageFamily fam = load_family(fw, generators_file);
    for (const Language& l : fam.members) check_indices(fw.recogniser_count(), {l.recogniser_index});
    auto space = approximation_space(fw, indices, cfg.budget);
    EquationSet es = derive_equations(fw, space, fam);
    std::ostringstream text;
    text << es.pairs.size() << " equations on " << space.points.size() << " points\n";
    for (const Equation& e : es.pairs)
        text << "  " << io::equation_to_json(e).dump() << "\n";
    emit(cfg, json{{"exact", space.exact}, {"equations", io::equation_set_to_json(es)}}, text.str());
    return exit_ok;
}

template <typename Object>
int run_check(Framework<Object>& fw, const CliConfig& cfg, const std::string& generators_file,
              const std::string& candidate_file) {
    auto indices = effective_indices(fw, cfg);
    check_indices(fw.recogniser_count(), indices);
    LanguageFamily fam = load_family(fw, generators_file);
    Language candidate = io::language_from_json(fw, load_json(candidate_file));
    auto space = approximation_space(fw, indices, cfg.budget);
    DefinabilityVerdict verdict = check_definable(fw, space, fam, candidate);
    std::ostringstream text;
    text << (verdict.in_lattice ? "IN_LATTICE" : "NOT_IN_LATTICE");
    if (verdict.certificate) text << "  certificate " << io::equation_to_json(*verdict.certificate).dump();
    text << (verdict.exact ? "" : "  (advisory: space is an under-approximation)") << "\n";
    emit(cfg, io::verdict_to_json(verdict), text.str());
    return verdict.in_lattice ? exit_ok : exit_certificate;
}

// Randomized suite over synthetic ground sets: closure versus defined
// family, plain and Boolean.
int run_verify(const CliConfig& cfg) {
    std::mt19937_64 rng(cfg.seed);
    std::size_t passed = 0, failed = 0;
    for (std::size_t t = 0; t < cfg.trials; ++t) {
        std::uniform_int_distribution<std::size_t> size_dist(1, 5);
        const std::size_t n = size_dist(rng);
        std::uniform_int_distribution<std::size_t> count_dist(0, 4);
        std::uniform_int_distribution<std::uint64_t> mask_dist(0, (std::uint64_t{1} << n) - 1);
        std::vector<PointSubset> gens;
        for (std::size_t g = count_dist(rng); g-- > 0;) {
            std::uint64_t mask = mask_dist(rng);
            PointSubset s(n);
            for (std::size_t i = 0; i < n; ++i) s[i] = mask >> i & 1;
            gens.push_back(std::move(s));
        }

        auto lattice = lattice_closure_subsets(gens, n);
        bool ok = is_lattice_of_subsets(lattice, n) &&
                  defined_subsets(derive_equation_pairs(lattice, n), n) == lattice;
        auto algebra = boolean_closure_subsets(gens, n);
        ok = ok && is_lattice_of_subsets(algebra, n) &&
             defined_subsets(derive_symmetric_pairs(algebra, n), n) == algebra;
        ++(ok ? passed : failed);
    }
    json report{{"trials", cfg.trials}, {"passed", passed}, {"failed", failed}, {"seed", cfg.seed}};
    std::ostringstream text;
    text << passed << "/" << cfg.trials << " trials passed (seed " << cfg.seed << ")\n";
    emit(cfg, report, text.str());
    return failed == 0 ? exit_ok : exit_certificate;
}

template <typename Command>
int with_framework(const CliConfig& cfg, Command&& command) {
    json j = load_json(cfg.framework_file);
    if (cfg.framework_kind == "word") {
        auto fw = load_word_framework(j);
        return command(fw);
    }
    auto fw = load_fo_framework(j);
    return command(fw);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Truncated profinite spaces of recognisable languages"};
    app.require_subcommand(1);

    CliConfig cfg;
    std::string generators_file;
    std::string candidate_file;

    auto add_common = [&](CLI::App* cmd, bool needs_file) {
        cmd->add_option("--framework", cfg.framework_kind, "Framework kind")
            ->check(CLI::IsMember({"word", "fo"}));
        auto* file = cmd->add_option("--file", cfg.framework_file, "Framework definition file");
        if (needs_file) file->required();
        cmd->add_option("--budget", cfg.budget, "Objects enumerated for non-exact spaces");
        cmd->add_option("--indices", cfg.indices, "Recogniser indices (default: all)")->delimiter(',');
        cmd->add_option("--seed", cfg.seed, "Random seed");
        cmd->add_option("--trials", cfg.trials, "Trial count");
        cmd->add_option("--output", cfg.output, "Report format")
            ->check(CLI::IsMember({"json", "text"}));
    };

    auto* approx = app.add_subcommand("approx", "Compute an approximation space");
    add_common(approx, true);

    auto* realize_cmd = app.add_subcommand("realize", "Realize every point by an object");
    add_common(realize_cmd, true);

    auto* equations = app.add_subcommand("equations", "Derive the common equation set");
    add_common(equations, true);
    equations->add_option("--generators", generators_file, "Language list file")->required();

    auto* check = app.add_subcommand("check", "Decide lattice membership of a candidate");
    add_common(check, true);
    check->add_option("--generators", generators_file, "Language list file")->required();
    check->add_option("--candidate", candidate_file, "Candidate language file")->required();

    auto* verify = app.add_subcommand("verify", "Randomized closure-vs-equations suite");
    add_common(verify, false);

    CLI11_PARSE(app, argc, argv);

    try {
        if (approx->parsed())
            return with_framework(cfg, [&](auto& fw) { return run_approx(fw, cfg); });
        if (realize_cmd->parsed())
            return with_framework(cfg, [&](auto& fw) { return run_realize(fw, cfg); });
        if (equations->parsed())
            return with_framework(cfg, [&](auto& fw) { return run_equations(fw, cfg, generators_file); });
        if (check->parsed())
            return with_framework(cfg,
                                  [&](auto& fw) { return run_check(fw, cfg, generators_file, candidate_file); });
        if (verify->parsed()) return run_verify(cfg);
    } catch (const cli_file_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_parse_error;
    } catch (const std::out_of_range& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_bad_indices;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_parse_error;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_parse_error;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    }
    return exit_ok;
}
