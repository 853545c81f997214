#pragma once

#include "nnproof/minimizer.hpp"
#include "nnproof/network.hpp"
#include "nnproof/search.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace nnproof::harness {

struct GenConfig {
    std::size_t inputs = 2;
    std::size_t neurons = 4; // per hidden layer
    std::size_t layers = 2;  // hidden ReLU layers
    std::size_t count = 20;
    std::uint64_t seed = 1;
};

struct GeneratedQuery {
    std::string name;
    Network network;
    Property property;
};

/// Random fully connected ReLU networks with one identity output and a
/// robustness-style box property. The output threshold is drawn between the
/// interval lower bound of the output and the smallest sampled output, which
/// biases the suite toward UNSAT while keeping the bound tightening active.
std::vector<GeneratedQuery> generate_suite(const GenConfig &config);

GeneratedQuery generate_query(const GenConfig &config, std::uint64_t seed, const std::string &name);

/// Writes <name>.network.json and <name>.property.json for every query.
void write_suite(const std::vector<GeneratedQuery> &suite, const std::string &directory);
/// Reads the pairs written by write_suite, sorted by name.
std::vector<GeneratedQuery> read_suite(const std::string &directory);

/// One query under one mode.
struct Record {
    std::string query;
    std::string mode;
    std::string verdict; // sat | unsat | resource-out
    std::string resource; // set for resource-out
    std::size_t proof_size = 0;
    std::size_t lemma_count = 0;
    std::size_t leaf_count = 0;
    std::size_t depth = 0;
    std::size_t proof_bytes = 0;
    std::size_t nodes = 0;
    std::size_t lp_calls = 0;
    std::size_t lemmas_learned = 0;
    std::optional<bool> accepted; // checker verdict for UNSAT proofs
    double verify_seconds = 0;
    double check_seconds = 0;
    std::uint64_t seed = 0;
    std::vector<std::string> witness; // SAT input values

    bool operator==(const Record &) const = default;
};

std::string record_to_line(const Record &record);
/// Throws ParseError on a malformed line.
Record record_from_line(const std::string &line);
std::vector<Record> read_records(const std::string &path);

struct RunOptions {
    VerifyConfig config;
    bool timing = true; // false zeroes every duration for byte-identical output
};

/// Verifies the query and, on UNSAT, re-reads and checks the serialized
/// proof. The proof text is returned through `proof` when requested.
Record run_query(const GeneratedQuery &query, const RunOptions &options, std::string *proof = nullptr);

/// Runs every query under every mode on `jobs` worker threads. Records come
/// back in (query, mode) order regardless of scheduling.
std::vector<Record> run_suite(const std::vector<GeneratedQuery> &suite, const std::vector<minimizer::Mode> &modes,
                              const RunOptions &options, std::size_t jobs,
                              const std::optional<std::string> &proof_dir = std::nullopt);

/// Worker count from NNPROOF_JOBS, defaulting to the hardware concurrency.
std::size_t jobs_from_environment();

struct ModeSummary {
    std::string mode;
    std::size_t queries = 0;   // records of this mode
    std::size_t common = 0;    // queries UNSAT under every mode, the averaging set
    double avg_proof_size = 0;
    double avg_verify_seconds = 0;
    double avg_check_seconds = 0;
    std::optional<double> size_change;   // (mode - baseline) / baseline
    std::optional<double> verify_change;
    std::optional<double> check_change;
    std::optional<double> median_reduction; // median over common queries of 1 - size/baseline size
};

struct StatsTable {
    std::string baseline;
    std::vector<ModeSummary> modes;
};

/// Averages over the queries that are UNSAT in every mode present, in the
/// shape "Avg. value [+-% of baseline]".
StatsTable summarize(const std::vector<Record> &records, const std::string &baseline);

std::string format_table(const StatsTable &table);
std::string format_csv(const StatsTable &table);

} // namespace nnproof::harness
