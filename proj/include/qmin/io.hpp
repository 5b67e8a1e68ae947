#pragma once

// File formats: integer datasets (one value per line, or a JSON array),
// point CSVs, and the JSON documents the CLI writes.

#include <cerrno>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "qmin/errors.hpp"
#include "qmin/qkmeans.hpp"
#include "qmin/qms.hpp"

namespace qmin::io {

using nlohmann::ordered_json;

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_file(const std::string& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path + " for writing");
    out << content;
    if (!out) throw IoError("failed writing " + path);
}

namespace detail {

inline std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

inline std::uint64_t parse_u64(std::string_view tok, const std::string& where) {
    if (tok.empty()) throw InputError(where + ": empty value");
    for (char c : tok)
        if (c < '0' || c > '9')
            throw InputError(where + ": '" + std::string(tok) + "' is not an unsigned decimal integer");
    errno = 0;
    const std::string s(tok);
    char* end = nullptr;
    const auto v = std::strtoull(s.c_str(), &end, 10);
    if (errno == ERANGE) throw InputError(where + ": '" + s + "' does not fit in 64 bits");
    return v;
}

inline double parse_real(std::string_view tok, const std::string& where) {
    const std::string s(trim(tok));
    if (s.empty()) throw InputError(where + ": empty coordinate");
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size() || errno == ERANGE || !std::isfinite(v))
        throw InputError(where + ": '" + s + "' is not a finite real number");
    return v;
}

}  // namespace detail

/// One unsigned decimal per line (a trailing comma is tolerated), or a JSON
/// array of unsigned integers. Blank lines and lines starting with '#' are skipped.
inline std::vector<std::uint64_t> parse_dataset(std::string_view text) {
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string_view::npos && text[first] == '[') {
        ordered_json j;
        try {
            j = ordered_json::parse(text);
        } catch (const nlohmann::json::parse_error& e) {
            throw InputError(std::string("JSON dataset: ") + e.what());
        }
        std::vector<std::uint64_t> out;
        for (std::size_t i = 0; i < j.size(); ++i) {
            if (!j[i].is_number_unsigned())
                throw InputError("JSON dataset element " + std::to_string(i) + " is not an unsigned integer");
            out.push_back(j[i].get<std::uint64_t>());
        }
        if (out.empty()) throw InputError("dataset is empty");
        return out;
    }

    std::vector<std::uint64_t> out;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        const auto line = detail::trim(text.substr(pos, nl == std::string_view::npos ? text.npos : nl - pos));
        ++line_no;
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        if (line.empty() || line.front() == '#') continue;
        auto tok = line;
        if (tok.back() == ',') tok = detail::trim(tok.substr(0, tok.size() - 1));
        out.push_back(detail::parse_u64(tok, "line " + std::to_string(line_no)));
    }
    if (out.empty()) throw InputError("dataset is empty");
    return out;
}

/// Comma-separated real coordinates, one point per row.
inline kmeans::PointSet parse_points(std::string_view text) {
    std::vector<kmeans::Point> pts;
    std::size_t row = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        const auto line = detail::trim(text.substr(pos, nl == std::string_view::npos ? text.npos : nl - pos));
        ++row;
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        if (line.empty() || line.front() == '#') continue;
        const std::string where = "row " + std::to_string(row);
        kmeans::Point p;
        std::size_t cpos = 0;
        while (true) {
            const auto comma = line.find(',', cpos);
            p.push_back(detail::parse_real(line.substr(cpos, comma == line.npos ? line.npos : comma - cpos), where));
            if (comma == line.npos) break;
            cpos = comma + 1;
        }
        if (!pts.empty() && p.size() != pts.front().size())
            throw InputError(where + ": expected " + std::to_string(pts.front().size()) + " columns, got " +
                             std::to_string(p.size()));
        pts.push_back(std::move(p));
    }
    if (pts.empty()) throw InputError("no points in input");
    return kmeans::PointSet(std::move(pts));
}

inline ordered_json config_json(const QmsConfig& cfg) {
    ordered_json j;
    j["mode"] = std::string(to_string(cfg.mode));
    j["retries"] = cfg.retries;
    j["seed"] = cfg.seed;
    if (cfg.warm_start) j["warm_start"] = *cfg.warm_start;
    return j;
}

inline ordered_json step_json(const DescentStep& s) {
    ordered_json j;
    j["prefix"] = s.tried_prefix.to_string();
    j["t"] = s.marked_count;
    j["k"] = s.grover_iterations;
    j["measured_address"] = s.measured_address;
    j["measured_value"] = s.measured_value;
    j["branch"] = std::string(to_string(s.branch));
    j["queries"] = s.oracle_queries;
    j["attempts"] = s.attempts;
    return j;
}

/// {steps, result_value, result_addresses, total_queries, config, seed, ...};
/// `with_steps = false` drops the per-step array.
inline ordered_json trace_json(const DescentTrace& t, bool with_steps = true) {
    ordered_json j;
    if (with_steps) {
        j["steps"] = ordered_json::array();
        for (const auto& s : t.steps) j["steps"].push_back(step_json(s));
    }
    j["result_value"] = t.result_value;
    j["result_bits"] = Prefix::of_value(t.result_value, t.m).to_string();
    j["result_addresses"] = t.result_addresses;
    j["total_queries"] = t.total_queries;
    j["config"] = config_json(t.config);
    j["seed"] = t.config.seed;
    j["n"] = t.n;
    j["m"] = t.m;
    j["start_prefix"] = t.start_prefix.to_string();
    j["all_padding"] = t.all_padding;
    return j;
}

inline ordered_json lloyd_json(const kmeans::LloydResult& r, const QmsConfig& cfg, const kmeans::LloydOptions& opt,
                               std::size_t K) {
    ordered_json j;
    j["centroids"] = r.centroids;
    j["labels"] = r.assignment.labels;
    j["objective_history"] = r.objective_history;
    j["objective"] = r.assignment.objective;
    j["iterations"] = r.iterations;
    ordered_json c = config_json(cfg);
    c["k"] = K;
    c["bits"] = opt.m_bits;
    c["max_iters"] = opt.max_iters;
    c["tol"] = opt.tol;
    j["config"] = c;
    j["seed"] = cfg.seed;
    if (opt.keep_traces) {
        j["traces"] = ordered_json::array();
        for (const auto& round : r.traces) {
            ordered_json rj = ordered_json::array();
            for (const auto& t : round) rj.push_back(trace_json(t));
            j["traces"].push_back(rj);
        }
    }
    return j;
}

}  // namespace qmin::io
