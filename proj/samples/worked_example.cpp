// Walks the five-value example {5, 4, 12, 10, 8} through the prefix descent
// and prints every step.

#include <cstdio>

#include "qmin/qms.hpp"
#include "qmin/qram.hpp"

int main() {
    const auto ds = qmin::plan_dataset({5, 4, 12, 10, 8});
    std::printf("n = %u address qubits, m = %u data qubits, padding = %llu\n", ds.n, ds.m,
                static_cast<unsigned long long>(ds.pad_value));

    qmin::QmsConfig cfg;
    cfg.mode = qmin::IterationMode::OptimalForKnownT;
    cfg.seed = 7;
    const auto trace = qmin::run_descent(ds, cfg);

    for (const auto& s : trace.steps) {
        std::printf("prefix %-5s t=%llu k=%llu attempts=%u measured |%llu>|%s>  %s\n",
                    s.tried_prefix.to_string().c_str(), static_cast<unsigned long long>(s.marked_count),
                    static_cast<unsigned long long>(s.grover_iterations), s.attempts,
                    static_cast<unsigned long long>(s.measured_address),
                    qmin::Prefix::of_value(s.measured_value, ds.m).to_string().c_str(),
                    s.branch == qmin::Branch::Accept0 ? "accept" : "fall back to 1");
    }
    std::printf("minimum %llu after %llu oracle queries\n", static_cast<unsigned long long>(trace.result_value),
                static_cast<unsigned long long>(trace.total_queries));
}
