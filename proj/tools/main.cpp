#include "harness.hpp"

#include "nnproof/checker.hpp"
#include "nnproof/oracles.hpp"
#include "nnproof/proof.hpp"
#include "nnproof/query.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <sstream>

using namespace nnproof;

namespace {

constexpr int exit_sat = 10;
constexpr int exit_unsat = 20;
constexpr int exit_resource = 30;
constexpr int exit_reject = 1;
constexpr int exit_malformed = 2;

std::vector<minimizer::Mode> parse_modes(const std::string &list)
{
    std::vector<minimizer::Mode> modes;
    std::stringstream in(list);
    std::string name;
    while (std::getline(in, name, ','))
        if (!name.empty())
            modes.push_back(minimizer::mode_from_name(name));
    return modes;
}

void print_stats(const std::string &label, const ProofStats &s)
{
    std::cout << label << ": proof_size " << s.proof_size << ", lemmas " << s.lemma_count << ", leaves "
              << s.leaf_count << ", depth " << s.depth << ", bytes " << s.serialized_bytes << "\n";
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Proof-producing ReLU network verifier with proof checking and minimization"};
    app.require_subcommand(1);

    std::string network_file, property_file, proof_file, out_file;
    std::string mode_name = "none";
    harness::RunOptions run;
    bool no_timing = false;

    auto *verify_cmd = app.add_subcommand("verify", "Verify a property; exit 10 SAT, 20 UNSAT, 30 resource-out");
    verify_cmd->add_option("network", network_file)->required();
    verify_cmd->add_option("property", property_file)->required();
    verify_cmd->add_option("--minimize", mode_name, "none | min-baseline | deps | greedy | global");
    verify_cmd->add_option("--timeout", run.config.timeout_seconds, "Seconds, 0 for none");
    verify_cmd->add_option("--memory-cap", run.config.memory_cap_bytes, "Bytes of live proof, 0 for none");
    verify_cmd->add_option("--max-depth", run.config.max_depth);
    verify_cmd->add_option("--passes", run.config.tightening_passes, "Bound tightening passes per node");
    verify_cmd->add_option("--seed", run.config.seed);
    verify_cmd->add_option("--proof-out", proof_file);
    verify_cmd->add_flag("--no-timing", no_timing, "Write zero durations");

    auto *check_cmd = app.add_subcommand("check", "Check a proof; exit 0 accept, 1 reject, 2 malformed");
    check_cmd->add_option("network", network_file)->required();
    check_cmd->add_option("property", property_file)->required();
    check_cmd->add_option("proof", proof_file)->required();

    auto *minimize_cmd = app.add_subcommand("minimize", "Minimize a proof offline");
    minimize_cmd->add_option("proof", proof_file)->required();
    minimize_cmd->add_option("--mode", mode_name)->required();
    minimize_cmd->add_option("--out", out_file);

    harness::GenConfig gen;
    std::string out_dir;
    auto *gen_cmd = app.add_subcommand("gen", "Generate a synthetic query suite");
    gen_cmd->add_option("--inputs", gen.inputs);
    gen_cmd->add_option("--neurons", gen.neurons, "ReLUs per hidden layer");
    gen_cmd->add_option("--layers", gen.layers, "Hidden layers");
    gen_cmd->add_option("--count", gen.count);
    gen_cmd->add_option("--seed", gen.seed);
    gen_cmd->add_option("--out-dir", out_dir)->required();

    std::vector<std::string> record_files;
    std::string baseline = "none";
    bool csv = false;
    auto *stats_cmd = app.add_subcommand("stats", "Aggregate records into a per-mode table");
    stats_cmd->add_option("records", record_files)->required();
    stats_cmd->add_option("--baseline", baseline);
    stats_cmd->add_flag("--csv", csv);

    auto *oracle_cmd = app.add_subcommand("oracle", "Decide a query by phase enumeration");
    oracle_cmd->add_option("network", network_file)->required();
    oracle_cmd->add_option("property", property_file)->required();

    std::string suite_dir, modes_list = "none,deps,greedy,global", proof_dir;
    auto *suite_cmd = app.add_subcommand("suite", "Run a suite under several modes; NNPROOF_JOBS sets workers");
    suite_cmd->add_option("--dir", suite_dir)->required();
    suite_cmd->add_option("--modes", modes_list);
    suite_cmd->add_option("--out", out_file)->required();
    suite_cmd->add_option("--proof-dir", proof_dir);
    suite_cmd->add_option("--timeout", run.config.timeout_seconds);
    suite_cmd->add_option("--passes", run.config.tightening_passes);
    suite_cmd->add_option("--seed", run.config.seed);
    suite_cmd->add_flag("--no-timing", no_timing);

    CLI11_PARSE(app, argc, argv);
    run.timing = !no_timing;

    try {
        if (verify_cmd->parsed()) {
            run.config.mode = minimizer::mode_from_name(mode_name);
            harness::GeneratedQuery query{network_file, load_network(network_file), load_property(property_file)};
            std::string proof;
            const auto record = harness::run_query(query, run, &proof);
            std::cout << harness::record_to_line(record) << "\n";
            if (!proof_file.empty() && !proof.empty())
                save_text(proof_file, proof);
            if (record.verdict == "sat")
                return exit_sat;
            if (record.verdict == "unsat")
                return exit_unsat;
            return exit_resource;
        }
        if (check_cmd->parsed()) {
            TableauQuery query;
            ProofTree tree;
            try {
                query = encode_query(load_network(network_file), load_property(property_file));
                tree = deserialize_proof(load_text(proof_file));
            } catch (const std::exception &e) {
                std::cout << "malformed: " << e.what() << "\n";
                return exit_malformed;
            }
            const auto result = checker::check_proof(query, tree);
            if (result.accepted()) {
                std::cout << "accept\n";
                return 0;
            }
            std::cout << "reject\n";
            for (const auto &reason : result.reasons)
                std::cout << "  " << reason << "\n";
            return exit_reject;
        }
        if (minimize_cmd->parsed()) {
            auto tree = deserialize_proof(load_text(proof_file));
            print_stats("before", proof_stats(tree));
            minimizer::minimize_offline(tree, minimizer::mode_from_name(mode_name));
            print_stats("after", proof_stats(tree));
            if (!out_file.empty())
                save_text(out_file, serialize_proof(tree));
            return 0;
        }
        if (gen_cmd->parsed()) {
            harness::write_suite(harness::generate_suite(gen), out_dir);
            std::cout << "wrote " << gen.count << " queries to " << out_dir << "\n";
            return 0;
        }
        if (stats_cmd->parsed()) {
            std::vector<harness::Record> records;
            for (const auto &file : record_files)
                for (auto &r : harness::read_records(file))
                    records.push_back(std::move(r));
            const auto table = harness::summarize(records, baseline);
            std::cout << (csv ? harness::format_csv(table) : harness::format_table(table));
            return 0;
        }
        if (oracle_cmd->parsed()) {
            const auto query = encode_query(load_network(network_file), load_property(property_file));
            const auto verdict = oracles::enumerate_phases(query);
            std::cout << (verdict.sat ? "sat" : "unsat") << " (" << verdict.lp_calls << " LP calls)\n";
            return verdict.sat ? exit_sat : exit_unsat;
        }
        if (suite_cmd->parsed()) {
            const auto suite = harness::read_suite(suite_dir);
            const auto records =
                harness::run_suite(suite, parse_modes(modes_list), run, harness::jobs_from_environment(),
                                   proof_dir.empty() ? std::nullopt : std::optional<std::string>(proof_dir));
            std::string text;
            for (const auto &r : records)
                text += harness::record_to_line(r) + "\n";
            save_text(out_file, text);
            std::cout << "wrote " << records.size() << " records to " << out_file << "\n";
            return 0;
        }
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_malformed;
    }
    return 0;
}
