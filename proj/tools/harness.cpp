#include "harness.hpp"

#include "nnproof/checker.hpp"
#include "nnproof/proof.hpp"
#include "nnproof/query.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <thread>

namespace nnproof::harness {

namespace {

using json = nlohmann::json;

class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform integer in [lo, hi].
    long between(long lo, long hi)
    {
        const auto span = static_cast<std::uint64_t>(hi - lo + 1);
        return lo + static_cast<long>(engine_() % span);
    }

    Rational rational(long lo, long hi, long den) { return ratio(between(lo, hi), den); }

  private:
    std::mt19937_64 engine_;
};

RationalVector sample_input(Rng &rng, const Property &property)
{
    RationalVector x;
    for (const auto &box : property.input_bounds) {
        const Rational t = ratio(rng.between(0, 16), 16);
        x.push_back(box.lower + t * (box.upper - box.lower));
    }
    return x;
}

Rational output_lower_bound(const Network &network, const Property &property)
{
    Property box = property;
    box.output_constraints.clear();
    const auto query = encode_query(network, box);
    return query.lower[query.outputs.front()];
}

} // namespace

GeneratedQuery generate_query(const GenConfig &config, std::uint64_t seed, const std::string &name)
{
    Rng rng(seed);
    GeneratedQuery out;
    out.name = name;
    auto &network = out.network;
    network.layers.push_back(Layer{config.inputs, {}, {}, Activation::Identity});
    std::size_t previous = config.inputs;
    for (std::size_t l = 0; l <= config.layers; ++l) {
        const bool output = l == config.layers;
        Layer layer;
        layer.size = output ? 1 : config.neurons;
        layer.activation = output ? Activation::Identity : Activation::ReLU;
        for (std::size_t i = 0; i < layer.size; ++i) {
            RationalVector row;
            for (std::size_t j = 0; j < previous; ++j)
                row.push_back(rng.rational(-4, 4, 2));
            layer.weights.push_back(std::move(row));
            layer.biases.push_back(output ? Rational(0) : rng.rational(-2, 2, 2));
        }
        previous = layer.size;
        network.layers.push_back(std::move(layer));
    }

    auto &property = out.property;
    for (std::size_t i = 0; i < config.inputs; ++i) {
        const Rational center = rng.rational(-4, 4, 4);
        const Rational radius = rng.rational(1, 2, 4);
        property.input_bounds.push_back({center - radius, center + radius});
    }

    const Rational lower = output_lower_bound(network, property);
    Rational sampled_min = evaluate_network(network, sample_input(rng, property)).front();
    for (int s = 0; s < 64; ++s)
        sampled_min = std::min(sampled_min, evaluate_network(network, sample_input(rng, property)).front());
    const Rational alpha = ratio(rng.between(10, 15), 16);
    Rational threshold = lower + alpha * (sampled_min - lower);
    if (sampled_min == lower)
        threshold = lower - Rational(1, 4);
    property.output_constraints.push_back({{Rational(1)}, threshold});
    return out;
}

std::vector<GeneratedQuery> generate_suite(const GenConfig &config)
{
    std::vector<GeneratedQuery> suite;
    for (std::size_t i = 0; i < config.count; ++i) {
        char name[32];
        std::snprintf(name, sizeof name, "q%04zu", i);
        suite.push_back(generate_query(config, config.seed * 1000003ULL + i, name));
    }
    return suite;
}

void write_suite(const std::vector<GeneratedQuery> &suite, const std::string &directory)
{
    std::filesystem::create_directories(directory);
    for (const auto &q : suite) {
        save_text(directory + "/" + q.name + ".network.json", network_to_json(q.network));
        save_text(directory + "/" + q.name + ".property.json", property_to_json(q.property));
    }
}

std::vector<GeneratedQuery> read_suite(const std::string &directory)
{
    const std::string suffix = ".network.json";
    std::vector<std::string> names;
    for (const auto &entry : std::filesystem::directory_iterator(directory)) {
        const auto file = entry.path().filename().string();
        if (file.size() > suffix.size() && file.ends_with(suffix))
            names.push_back(file.substr(0, file.size() - suffix.size()));
    }
    std::sort(names.begin(), names.end());
    std::vector<GeneratedQuery> suite;
    for (const auto &name : names)
        suite.push_back({name, load_network(directory + "/" + name + suffix),
                         load_property(directory + "/" + name + ".property.json")});
    return suite;
}

std::string record_to_line(const Record &r)
{
    json doc;
    doc["query"] = r.query;
    doc["mode"] = r.mode;
    doc["verdict"] = r.verdict;
    if (!r.resource.empty())
        doc["resource"] = r.resource;
    doc["proof_size"] = r.proof_size;
    doc["lemmas"] = r.lemma_count;
    doc["leaves"] = r.leaf_count;
    doc["depth"] = r.depth;
    doc["proof_bytes"] = r.proof_bytes;
    doc["nodes"] = r.nodes;
    doc["lp_calls"] = r.lp_calls;
    doc["lemmas_learned"] = r.lemmas_learned;
    if (r.accepted)
        doc["accepted"] = *r.accepted;
    doc["verify_seconds"] = r.verify_seconds;
    doc["check_seconds"] = r.check_seconds;
    doc["seed"] = r.seed;
    if (!r.witness.empty())
        doc["witness"] = r.witness;
    return doc.dump();
}

Record record_from_line(const std::string &line)
{
    try {
        const json doc = json::parse(line);
        Record r;
        r.query = doc.at("query").get<std::string>();
        r.mode = doc.at("mode").get<std::string>();
        r.verdict = doc.at("verdict").get<std::string>();
        r.resource = doc.value("resource", "");
        r.proof_size = doc.at("proof_size").get<std::size_t>();
        r.lemma_count = doc.at("lemmas").get<std::size_t>();
        r.leaf_count = doc.at("leaves").get<std::size_t>();
        r.depth = doc.at("depth").get<std::size_t>();
        r.proof_bytes = doc.at("proof_bytes").get<std::size_t>();
        r.nodes = doc.at("nodes").get<std::size_t>();
        r.lp_calls = doc.at("lp_calls").get<std::size_t>();
        r.lemmas_learned = doc.at("lemmas_learned").get<std::size_t>();
        if (doc.contains("accepted"))
            r.accepted = doc.at("accepted").get<bool>();
        r.verify_seconds = doc.at("verify_seconds").get<double>();
        r.check_seconds = doc.at("check_seconds").get<double>();
        r.seed = doc.at("seed").get<std::uint64_t>();
        if (doc.contains("witness"))
            r.witness = doc.at("witness").get<std::vector<std::string>>();
        return r;
    } catch (const json::exception &e) {
        throw ParseError(std::string("malformed record: ") + e.what());
    }
}

std::vector<Record> read_records(const std::string &path)
{
    std::istringstream in(load_text(path));
    std::vector<Record> records;
    std::string line;
    while (std::getline(in, line))
        if (!line.empty())
            records.push_back(record_from_line(line));
    return records;
}

Record run_query(const GeneratedQuery &query, const RunOptions &options, std::string *proof)
{
    using clock = std::chrono::steady_clock;
    Record record;
    record.query = query.name;
    record.mode = minimizer::mode_name(options.config.mode);
    record.seed = options.config.seed;

    const auto start = clock::now();
    const auto verdict = verify(query.network, query.property, options.config);
    const std::chrono::duration<double> verify_time = clock::now() - start;
    record.verify_seconds = options.timing ? verify_time.count() : 0;
    record.nodes = verdict.stats.nodes;
    record.lp_calls = verdict.stats.lp_calls;
    record.lemmas_learned = verdict.stats.lemmas_learned;

    if (const auto *sat = std::get_if<Sat>(&verdict.outcome)) {
        record.verdict = "sat";
        const auto encoded = encode_query(query.network, query.property);
        for (const VarIndex v : encoded.inputs)
            record.witness.push_back(format_rational(sat->witness[v]));
    } else if (const auto *unsat = std::get_if<Unsat>(&verdict.outcome)) {
        record.verdict = "unsat";
        const auto text = serialize_proof(unsat->proof);
        const auto stats = proof_stats(unsat->proof);
        record.proof_size = stats.proof_size;
        record.lemma_count = stats.lemma_count;
        record.leaf_count = stats.leaf_count;
        record.depth = stats.depth;
        record.proof_bytes = stats.serialized_bytes;
        const auto check_start = clock::now();
        const auto reparsed = deserialize_proof(text);
        const auto result = checker::check_proof(encode_query(query.network, query.property), reparsed);
        const std::chrono::duration<double> check_time = clock::now() - check_start;
        record.check_seconds = options.timing ? check_time.count() : 0;
        record.accepted = result.accepted();
        if (proof)
            *proof = text;
    } else {
        record.verdict = "resource-out";
        record.resource = resource_name(std::get<ResourceOut>(verdict.outcome).kind);
    }
    return record;
}

std::vector<Record> run_suite(const std::vector<GeneratedQuery> &suite, const std::vector<minimizer::Mode> &modes,
                              const RunOptions &options, std::size_t jobs,
                              const std::optional<std::string> &proof_dir)
{
    const std::size_t total = suite.size() * modes.size();
    std::vector<Record> records(total);
    std::vector<std::string> errors(total);
    std::atomic<std::size_t> next{0};
    if (proof_dir)
        std::filesystem::create_directories(*proof_dir);
    auto worker = [&] {
        for (std::size_t task = next++; task < total; task = next++) {
            const auto &query = suite[task / modes.size()];
            RunOptions local = options;
            local.config.mode = modes[task % modes.size()];
            try {
                std::string proof;
                records[task] = run_query(query, local, proof_dir ? &proof : nullptr);
                if (proof_dir && !proof.empty())
                    save_text(*proof_dir + "/" + query.name + "." + records[task].mode + ".proof", proof);
            } catch (const std::exception &e) {
                errors[task] = query.name + ": " + e.what();
            }
        }
    };
    std::vector<std::thread> threads;
    for (std::size_t t = 0; t < std::max<std::size_t>(1, std::min(jobs, total)); ++t)
        threads.emplace_back(worker);
    for (auto &thread : threads)
        thread.join();
    for (const auto &error : errors)
        if (!error.empty())
            throw std::runtime_error(error);
    return records;
}

std::size_t jobs_from_environment()
{
    if (const char *value = std::getenv("NNPROOF_JOBS")) {
        const long parsed = std::strtol(value, nullptr, 10);
        if (parsed > 0)
            return static_cast<std::size_t>(parsed);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

StatsTable summarize(const std::vector<Record> &records, const std::string &baseline)
{
    std::vector<std::string> modes;
    std::map<std::string, std::map<std::string, const Record *>> by_query; // query -> mode -> record
    std::map<std::string, std::size_t> counts;
    for (const auto &r : records) {
        if (std::find(modes.begin(), modes.end(), r.mode) == modes.end())
            modes.push_back(r.mode);
        by_query[r.query][r.mode] = &r;
        ++counts[r.mode];
    }
    std::vector<std::string> common;
    for (const auto &[query, per_mode] : by_query) {
        bool all = per_mode.size() == modes.size();
        for (const auto &[mode, r] : per_mode)
            all = all && r->verdict == "unsat";
        if (all)
            common.push_back(query);
    }

    StatsTable table;
    table.baseline = baseline;
    for (const auto &mode : modes) {
        ModeSummary s;
        s.mode = mode;
        s.queries = counts[mode];
        s.common = common.size();
        std::vector<double> reductions;
        for (const auto &query : common) {
            const Record &r = *by_query[query][mode];
            s.avg_proof_size += static_cast<double>(r.proof_size);
            s.avg_verify_seconds += r.verify_seconds;
            s.avg_check_seconds += r.check_seconds;
            const auto base = by_query[query].find(baseline);
            if (base != by_query[query].end() && base->second->proof_size > 0)
                reductions.push_back(1.0 - static_cast<double>(r.proof_size) /
                                               static_cast<double>(base->second->proof_size));
        }
        if (!common.empty()) {
            const auto n = static_cast<double>(common.size());
            s.avg_proof_size /= n;
            s.avg_verify_seconds /= n;
            s.avg_check_seconds /= n;
        }
        if (!reductions.empty()) {
            std::sort(reductions.begin(), reductions.end());
            const std::size_t mid = reductions.size() / 2;
            s.median_reduction = reductions.size() % 2 ? reductions[mid] : (reductions[mid - 1] + reductions[mid]) / 2;
        }
        table.modes.push_back(s);
    }
    const auto base = std::find_if(table.modes.begin(), table.modes.end(),
                                   [&](const ModeSummary &s) { return s.mode == baseline; });
    if (base != table.modes.end()) {
        const ModeSummary reference = *base;
        auto change = [](double value, double ref) -> std::optional<double> {
            if (ref == 0)
                return std::nullopt;
            return (value - ref) / ref;
        };
        for (auto &s : table.modes) {
            s.size_change = change(s.avg_proof_size, reference.avg_proof_size);
            s.verify_change = change(s.avg_verify_seconds, reference.avg_verify_seconds);
            s.check_change = change(s.avg_check_seconds, reference.avg_check_seconds);
        }
    }
    return table;
}

namespace {

std::string percent(const std::optional<double> &value)
{
    if (!value)
        return "n/a";
    char buffer[32];
    std::snprintf(buffer, sizeof buffer, "%+.1f%%", *value * 100);
    return buffer;
}

std::string number(double value, const char *format)
{
    char buffer[32];
    std::snprintf(buffer, sizeof buffer, format, value);
    return buffer;
}

} // namespace

std::string format_table(const StatsTable &table)
{
    std::ostringstream out;
    char line[256];
    std::snprintf(line, sizeof line, "%-13s %7s %7s  %-24s %-24s %-24s %s\n", "mode", "queries", "common",
                  "avg proof size", "avg verify s", "avg check s", "median size reduction");
    out << line;
    for (const auto &s : table.modes) {
        const std::string size = number(s.avg_proof_size, "%.2f") + " [" + percent(s.size_change) + "]";
        const std::string verify = number(s.avg_verify_seconds, "%.4f") + " [" + percent(s.verify_change) + "]";
        const std::string check = number(s.avg_check_seconds, "%.4f") + " [" + percent(s.check_change) + "]";
        std::snprintf(line, sizeof line, "%-13s %7zu %7zu  %-24s %-24s %-24s %s\n", s.mode.c_str(), s.queries,
                      s.common, size.c_str(), verify.c_str(), check.c_str(), percent(s.median_reduction).c_str());
        out << line;
    }
    out << "percentages are (mode - " << table.baseline << ") / " << table.baseline
        << " over queries UNSAT in every mode\n";
    return out.str();
}

std::string format_csv(const StatsTable &table)
{
    auto opt = [](const std::optional<double> &v) { return v ? number(*v, "%.6f") : std::string(); };
    std::ostringstream out;
    out << "mode,queries,common,avg_proof_size,size_change,avg_verify_seconds,verify_change,avg_check_seconds,"
           "check_change,median_size_reduction\n";
    for (const auto &s : table.modes)
        out << s.mode << ',' << s.queries << ',' << s.common << ',' << number(s.avg_proof_size, "%.6f") << ','
            << opt(s.size_change) << ',' << number(s.avg_verify_seconds, "%.6f") << ',' << opt(s.verify_change)
            << ',' << number(s.avg_check_seconds, "%.6f") << ',' << opt(s.check_change) << ','
            << opt(s.median_reduction) << '\n';
    return out.str();
}

} // namespace nnproof::harness
