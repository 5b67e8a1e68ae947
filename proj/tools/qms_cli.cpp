// qms: command-line front end for minimum search over a simulated QRAM.
//
//   qms min     --input values.csv [--mode optimal] [--trace --output trace.json]
//   qms verify  --input values.csv [value]
//   qms kmeans  --input points.csv --k 4 [--bits 8] [--output clusters.json]
//   qms bench   --n-min 2 --n-max 10 --bits 6 --trials 20 --output bench.csv
//
// Exit codes: 0 success, 2 input error, 3 resource error, 1 anything else.

#include <cstdint>
#include <iostream>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qmin/baselines.hpp"
#include "qmin/io.hpp"
#include "qmin/qkmeans.hpp"
#include "qmin/qms.hpp"
#include "qmin/qram.hpp"

namespace {

enum ExitCode : int { kOk = 0, kFailure = 1, kInputError = 2, kResourceError = 3 };

struct RunConfig {
    std::string input;
    std::string output;
    std::optional<std::uint64_t> seed;
    unsigned retries = 3;
    std::string mode = "bbht";
    bool trace = false;
    std::optional<unsigned> bits;
    std::size_t k = 0;
    std::size_t max_iters = 50;
    double tol = 1e-6;
    unsigned n_min = 2;
    unsigned n_max = 10;
    unsigned trials = 20;
    std::optional<std::uint64_t> value;
};

std::uint64_t resolve_seed(const RunConfig& rc) {
    if (rc.seed) return *rc.seed;
    std::random_device rd;
    return (std::uint64_t{rd()} << 32) | rd();
}

qmin::QmsConfig qms_config(const RunConfig& rc, std::uint64_t seed) {
    qmin::QmsConfig cfg;
    const auto mode = qmin::parse_iteration_mode(rc.mode);
    if (!mode) throw qmin::InputError("unknown --mode '" + rc.mode + "' (single|optimal|bbht)");
    if (rc.retries < 1) throw qmin::InputError("--retries must be at least 1");
    cfg.mode = *mode;
    cfg.retries = rc.retries;
    cfg.seed = seed;
    return cfg;
}

void emit_json(const RunConfig& rc, const qmin::io::ordered_json& j) {
    const auto text = j.dump(2) + "\n";
    if (rc.output.empty()) std::cout << text;
    else qmin::io::write_file(rc.output, text);
}

int cmd_min(const RunConfig& rc) {
    const auto seed = resolve_seed(rc);
    const auto cfg = qms_config(rc, seed);
    const auto ds = qmin::plan_dataset(qmin::io::parse_dataset(qmin::io::read_file(rc.input)), rc.bits);
    const auto trace = qmin::run_descent(ds, cfg);

    std::cout << "minimum: " << trace.result_value << "\n";
    std::cout << "addresses:";
    for (auto a : trace.result_addresses) std::cout << ' ' << a;
    std::cout << "\ntotal_queries: " << trace.total_queries << "\n";
    std::cout << "seed: " << seed << "\n";
    if (trace.all_padding) std::cerr << "warning: every value equals the padding sentinel\n";
    if (trace.result_addresses.empty())
        std::cerr << "warning: the descent settled on a value that is not stored in the dataset\n";

    if (rc.trace || !rc.output.empty()) emit_json(rc, qmin::io::trace_json(trace, rc.trace));
    return kOk;
}

int cmd_verify(const RunConfig& rc) {
    const auto seed = resolve_seed(rc);
    const auto cfg = qms_config(rc, seed);
    const auto ds = qmin::plan_dataset(qmin::io::parse_dataset(qmin::io::read_file(rc.input)), rc.bits);
    const auto state = qmin::prepare_encoded(ds, qmin::build_ux(ds));
    const bool ok = qmin::verify_roundtrip(state, ds);
    std::cout << "qram_roundtrip: " << (ok ? "ok" : "FAILED") << "\n";
    std::cout << "n: " << ds.n << "\nm: " << ds.m << "\n";
    if (rc.value) {
        if (*rc.value > ds.data_mask())
            throw qmin::InputError("value " + std::to_string(*rc.value) + " does not fit in " +
                                   std::to_string(ds.m) + " bits");
        std::cout << "member(" << *rc.value << "): " << (qmin::verify_membership(ds, *rc.value, cfg) ? "true" : "false")
                  << "\n";
    }
    std::cout << "seed: " << seed << "\n";
    return ok ? kOk : kFailure;
}

int cmd_kmeans(const RunConfig& rc) {
    const auto seed = resolve_seed(rc);
    const auto cfg = qms_config(rc, seed);
    const auto pts = qmin::io::parse_points(qmin::io::read_file(rc.input));
    if (rc.k < 1 || rc.k > pts.size())
        throw qmin::InputError("--k " + std::to_string(rc.k) + " must be in 1.." + std::to_string(pts.size()));
    qmin::kmeans::LloydOptions opt;
    opt.m_bits = rc.bits.value_or(8);
    opt.max_iters = rc.max_iters;
    opt.tol = rc.tol;
    opt.keep_traces = rc.trace;
    if (opt.max_iters < 1) throw qmin::InputError("--max-iters must be at least 1");
    const auto res = qmin::kmeans::run_lloyd(pts, rc.k, cfg, opt);

    std::cout << "objective: " << qmin::io::ordered_json(res.assignment.objective).dump() << "\n";
    std::cout << "iterations: " << res.iterations << "\n";
    std::cout << "seed: " << seed << "\n";
    if (!rc.output.empty()) emit_json(rc, qmin::io::lloyd_json(res, cfg, opt, rc.k));
    else std::cout << qmin::io::lloyd_json(res, cfg, opt, rc.k).dump(2) << "\n";
    return kOk;
}

int cmd_bench(const RunConfig& rc) {
    const auto seed = resolve_seed(rc);
    if (rc.n_min < 1 || rc.n_min > rc.n_max) throw qmin::InputError("need 1 <= --n-min <= --n-max");
    if (rc.trials < 1) throw qmin::InputError("--trials must be at least 1");
    const unsigned m = rc.bits.value_or(6);
    std::vector<unsigned> widths;
    for (unsigned n = rc.n_min; n <= rc.n_max; ++n) widths.push_back(n);
    const auto records = qmin::bench_sweep(widths, m, rc.trials, seed);
    qmin::emit_bench_csv(records, rc.output, qmin::BenchMeta{seed, rc.trials, qmin::kBenchRetries});
    std::cout << "rows: " << records.size() << "\nseed: " << seed << "\n";
    return kOk;
}

void add_common(CLI::App* sub, RunConfig& rc) {
    sub->add_option("--seed", rc.seed, "RNG seed (random when omitted; always reported)");
    sub->add_option("--retries", rc.retries, "failed prefix checks before the 1-branch")->capture_default_str();
    sub->add_option("--mode", rc.mode, "Grover iteration policy: single|optimal|bbht")
        ->check(CLI::IsMember({"single", "optimal", "bbht"}))
        ->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Minimum search over a simulated quantum RAM"};
    app.require_subcommand(1);
    RunConfig rc;

    auto* min = app.add_subcommand("min", "find the minimum of an integer dataset");
    min->add_option("--input", rc.input, "dataset: one unsigned integer per line, or a JSON array")->required();
    min->add_option("--output", rc.output, "JSON result/trace file");
    min->add_option("--bits", rc.bits, "data register width (default: width of the maximum)");
    min->add_flag("--trace", rc.trace, "include the per-step descent trace");
    add_common(min, rc);

    auto* verify = app.add_subcommand("verify", "check the QRAM encoding, optionally membership of a value");
    verify->add_option("--input", rc.input, "dataset file")->required();
    verify->add_option("--bits", rc.bits, "data register width");
    verify->add_option("value", rc.value, "value to search for");
    add_common(verify, rc);

    auto* km = app.add_subcommand("kmeans", "K-means with QMS nearest-centroid selection");
    km->add_option("--input", rc.input, "points CSV, one point per row")->required();
    km->add_option("--output", rc.output, "clustering JSON file");
    km->add_option("--k", rc.k, "number of centroids")->required();
    km->add_option("--bits", rc.bits, "distance quantization bits (default 8)");
    km->add_option("--max-iters", rc.max_iters, "iteration cap")->capture_default_str();
    km->add_option("--tol", rc.tol, "stop when the objective improves by less than this")->capture_default_str();
    km->add_flag("--trace", rc.trace, "include per-point descent traces");
    add_common(km, rc);

    auto* bench = app.add_subcommand("bench", "query-count sweep against classical baselines");
    bench->add_option("--n-min", rc.n_min, "smallest address width")->capture_default_str();
    bench->add_option("--n-max", rc.n_max, "largest address width")->capture_default_str();
    bench->add_option("--bits", rc.bits, "value bit width (default 6)");
    bench->add_option("--trials", rc.trials, "random datasets per width")->capture_default_str();
    bench->add_option("--output", rc.output, "CSV file")->required();
    bench->add_option("--seed", rc.seed, "RNG seed (random when omitted; always reported)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kInputError;
    }

    try {
        if (*min) return cmd_min(rc);
        if (*verify) return cmd_verify(rc);
        if (*km) return cmd_kmeans(rc);
        if (*bench) return cmd_bench(rc);
    } catch (const qmin::InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInputError;
    } catch (const qmin::IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInputError;
    } catch (const qmin::ResourceError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kResourceError;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kFailure;
    }
    return kFailure;
}
