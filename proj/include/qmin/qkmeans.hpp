#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "qmin/errors.hpp"
#include "qmin/qms.hpp"
#include "qmin/qram.hpp"
#include "qmin/rng.hpp"

namespace qmin::kmeans {

using Point = std::vector<double>;

/// Nonempty set of finite points sharing one dimension.
class PointSet {
public:
    PointSet() = default;
    explicit PointSet(std::vector<Point> points) : points_(std::move(points)) {
        if (points_.empty()) throw InputError("point set is empty");
        const auto dim = points_.front().size();
        if (dim == 0) throw InputError("points need at least one coordinate");
        for (std::size_t i = 0; i < points_.size(); ++i) {
            if (points_[i].size() != dim)
                throw InputError("point " + std::to_string(i) + " has " + std::to_string(points_[i].size()) +
                                 " coordinates, expected " + std::to_string(dim));
            for (double c : points_[i])
                if (!std::isfinite(c)) throw InputError("point " + std::to_string(i) + " is not finite");
        }
    }

    std::size_t size() const noexcept { return points_.size(); }
    std::size_t dimension() const noexcept { return points_.empty() ? 0 : points_.front().size(); }
    const Point& operator[](std::size_t i) const { return points_[i]; }
    const std::vector<Point>& points() const noexcept { return points_; }

private:
    std::vector<Point> points_;
};

using CentroidSet = std::vector<Point>;

struct Assignment {
    std::vector<std::size_t> labels;
    double objective = 0.0;  ///< sum of squared distances to the labelled centroids
};

/// Integer encoding of squared distances: level = d^2 / scale.
struct QuantizationSpec {
    unsigned m_bits = 8;
    double scale = 1.0;

    std::uint64_t max_level() const { return (std::uint64_t{1} << m_bits) - 2; }
};

inline double squared_distance(const Point& a, const Point& b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        acc += d * d;
    }
    return acc;
}

inline double objective(const PointSet& pts, const CentroidSet& cents, const std::vector<std::size_t>& labels) {
    double acc = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) acc += squared_distance(pts[i], cents[labels[i]]);
    return acc;
}

/// Scale that maps the largest point-centroid squared distance onto the top
/// non-sentinel level 2^m - 2.
inline QuantizationSpec fit_quantization(const PointSet& pts, const CentroidSet& cents, unsigned m_bits) {
    if (m_bits < 2 || m_bits > 62) throw InputError("quantization needs 2..62 bits");
    double max_d = 0.0;
    for (const auto& p : pts.points())
        for (const auto& c : cents) max_d = std::max(max_d, squared_distance(p, c));
    QuantizationSpec q{m_bits, 1.0};
    if (max_d > 0.0) q.scale = max_d / static_cast<double>(q.max_level());
    return q;
}

/// Squared distances to every centroid as integers in [0, 2^m - 2]; the
/// all-ones QRAM padding level is never produced.
inline std::vector<std::uint64_t> quantize_distances(const Point& point, const CentroidSet& cents,
                                                     const QuantizationSpec& q) {
    if (q.m_bits < 2 || !(q.scale > 0.0)) throw ContractViolation("invalid quantization spec");
    std::vector<std::uint64_t> out;
    out.reserve(cents.size());
    const double top = static_cast<double>(q.max_level());
    for (const auto& c : cents) {
        const double level = std::round(squared_distance(point, c) / q.scale);
        out.push_back(static_cast<std::uint64_t>(std::clamp(level, 0.0, top)));
    }
    return out;
}

/// Re-runs allowed when a descent ends on a value no centroid has (the
/// padding sentinel included). That outcome is classically detectable.
inline constexpr unsigned kMaxRedescents = 8;

/// Extra padded address qubits for the per-point search. With 2^n >= K the
/// marked fraction stays at or below 1/4, where H/X/MCX Grover succeeds with
/// high probability instead of the coin flip at t = N/2.
inline constexpr unsigned kAddressHeadroom = 2;

/// Nearest centroid for every point, each chosen by a QMS descent over the
/// point's quantized distances. Point i draws its randomness from the
/// "kmeans-point" stream with index i; re-runs use "kmeans-redescent".
/// Only the last descent of each point is kept in `traces`.
inline Assignment assign_via_qms(const PointSet& pts, const CentroidSet& cents, const QuantizationSpec& q,
                                 const QmsConfig& cfg, std::vector<DescentTrace>* traces = nullptr) {
    if (cents.empty()) throw InputError("need at least one centroid");
    Assignment asg;
    asg.labels.resize(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const auto dists = quantize_distances(pts[i], cents, q);
        auto ds = plan_dataset(dists, q.m_bits);
        if (ds.n + kAddressHeadroom + ds.m + 1 <= kMaxQubits) ds.n += kAddressHeadroom;
        QmsConfig point_cfg = cfg;
        point_cfg.seed = derive_seed(cfg.seed, "kmeans-point", i);
        auto trace = run_descent(ds, point_cfg);
        for (unsigned r = 0; r < kMaxRedescents && trace.result_addresses.empty(); ++r) {
            point_cfg.seed = derive_seed(cfg.seed, "kmeans-redescent", (std::uint64_t{i} << 8) | r);
            trace = run_descent(ds, point_cfg);
        }
        if (trace.result_value == ds.pad_value)
            throw std::logic_error("QMS selected the QRAM padding sentinel");
        std::size_t label = 0;
        if (!trace.result_addresses.empty()) {
            label = static_cast<std::size_t>(trace.result_addresses.front());
        } else {
            // The descent settled on a value no centroid has; keep the last
            // address it actually measured with an accepted prefix.
            for (auto it = trace.steps.rbegin(); it != trace.steps.rend(); ++it) {
                if (it->branch == Branch::Accept0 && ds.occupied(it->measured_address)) {
                    label = static_cast<std::size_t>(it->measured_address);
                    break;
                }
            }
        }
        asg.labels[i] = label;
        if (traces) traces->push_back(std::move(trace));
    }
    asg.objective = objective(pts, cents, asg.labels);
    return asg;
}

/// Classical nearest centroid on real distances; ties go to the lowest index.
inline Assignment assign_classical(const PointSet& pts, const CentroidSet& cents) {
    if (cents.empty()) throw InputError("need at least one centroid");
    Assignment asg;
    asg.labels.resize(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < cents.size(); ++j) {
            const double d = squared_distance(pts[i], cents[j]);
            if (d < best) {
                best = d;
                asg.labels[i] = j;
            }
        }
    }
    asg.objective = objective(pts, cents, asg.labels);
    return asg;
}

/// Coordinate means of each cluster; an empty cluster keeps its previous centroid.
inline CentroidSet update_centroids(const PointSet& pts, const Assignment& asg, const CentroidSet& previous) {
    const std::size_t K = previous.size();
    const std::size_t dim = pts.dimension();
    CentroidSet sums(K, Point(dim, 0.0));
    std::vector<std::size_t> counts(K, 0);
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const auto j = asg.labels.at(i);
        detail::require(j < K, "label out of range");
        for (std::size_t d = 0; d < dim; ++d) sums[j][d] += pts[i][d];
        ++counts[j];
    }
    CentroidSet next(K);
    for (std::size_t j = 0; j < K; ++j) {
        if (counts[j] == 0) {
            next[j] = previous[j];
            continue;
        }
        next[j] = sums[j];
        for (double& c : next[j]) c /= static_cast<double>(counts[j]);
    }
    return next;
}

/// K distinct points drawn uniformly without replacement.
inline CentroidSet init_centroids(const PointSet& pts, std::size_t K, std::uint64_t seed) {
    if (K < 1) throw InputError("K must be at least 1");
    if (K > pts.size())
        throw InputError("K = " + std::to_string(K) + " exceeds the " + std::to_string(pts.size()) + " points");
    std::vector<std::size_t> idx(pts.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    Rng rng(derive_seed(seed, "kmeans-init"));
    for (std::size_t i = 0; i < K; ++i) {
        const auto j = i + static_cast<std::size_t>(uniform_below(rng, idx.size() - i));
        std::swap(idx[i], idx[j]);
    }
    CentroidSet cents;
    for (std::size_t i = 0; i < K; ++i) cents.push_back(pts[idx[i]]);
    return cents;
}

enum class ArgminMethod { Qms, Classical };

struct LloydOptions {
    unsigned m_bits = 8;
    std::size_t max_iters = 50;
    double tol = 1e-6;
    ArgminMethod argmin = ArgminMethod::Qms;
    bool keep_traces = false;
};

struct LloydResult {
    CentroidSet centroids;
    Assignment assignment;
    std::size_t iterations = 0;
    std::vector<double> objective_history;
    std::vector<std::vector<DescentTrace>> traces;  ///< per round, when requested
};

/// Alternates assignment and centroid update until the objective improves by
/// less than `tol` or `max_iters` rounds have run. Round r uses the QMS seed
/// stream "kmeans-round" r, and the quantization scale is refit every round.
inline LloydResult run_lloyd(const PointSet& pts, CentroidSet centroids, const QmsConfig& cfg,
                             const LloydOptions& opt) {
    if (centroids.empty() || centroids.size() > pts.size()) throw InputError("need 1 <= K <= |S|");
    if (opt.max_iters < 1) throw InputError("max_iters must be at least 1");
    LloydResult res;
    for (std::size_t round = 0; round < opt.max_iters; ++round) {
        Assignment asg;
        if (opt.argmin == ArgminMethod::Classical) {
            asg = assign_classical(pts, centroids);
        } else {
            QmsConfig round_cfg = cfg;
            round_cfg.seed = derive_seed(cfg.seed, "kmeans-round", round);
            const auto q = fit_quantization(pts, centroids, opt.m_bits);
            std::vector<DescentTrace> traces;
            asg = assign_via_qms(pts, centroids, q, round_cfg, opt.keep_traces ? &traces : nullptr);
            if (opt.keep_traces) res.traces.push_back(std::move(traces));
        }
        res.objective_history.push_back(asg.objective);
        centroids = update_centroids(pts, asg, centroids);
        res.assignment = std::move(asg);
        res.iterations = round + 1;
        const auto& h = res.objective_history;
        if (h.size() >= 2 && h[h.size() - 2] - h.back() < opt.tol) break;
    }
    res.centroids = std::move(centroids);
    return res;
}

inline LloydResult run_lloyd(const PointSet& pts, std::size_t K, const QmsConfig& cfg, const LloydOptions& opt) {
    return run_lloyd(pts, init_centroids(pts, K, cfg.seed), cfg, opt);
}

}  // namespace qmin::kmeans
