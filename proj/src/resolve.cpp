#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "arlabel/placement.hpp"

namespace arlabel {
namespace {

// Lengths may sum to the span up to rounding.
constexpr double kCapacitySlack = 1e-12;

double block_median(std::vector<double> values)
{
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    if (n % 2 == 1) {
        return values[n / 2];
    }
    return 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

// Non-decreasing L1 fit by pool-adjacent-violators with median block values.
std::vector<double> isotonic_l1(const std::vector<double>& targets)
{
    struct Block {
        std::vector<double> values;
        double level;
    };
    std::vector<Block> blocks;
    for (double t : targets) {
        blocks.push_back({{t}, t});
        while (blocks.size() > 1 && blocks[blocks.size() - 2].level > blocks.back().level) {
            Block last = std::move(blocks.back());
            blocks.pop_back();
            Block& prev = blocks.back();
            prev.values.insert(prev.values.end(), last.values.begin(), last.values.end());
            prev.level = block_median(prev.values);
        }
    }
    std::vector<double> fit;
    fit.reserve(targets.size());
    for (const auto& b : blocks) {
        fit.insert(fit.end(), b.values.size(), b.level);
    }
    return fit;
}

// Intervals already in the order to preserve. Returns centers in that order.
std::vector<double> resolve_sorted(const std::vector<double>& desired, const std::vector<double>& lengths,
                                   double lo, double hi)
{
    const std::size_t n = desired.size();
    if (n == 0) {
        return {};
    }
    const double total = std::accumulate(lengths.begin(), lengths.end(), 0.0);
    if (total > (hi - lo) + kCapacitySlack) {
        throw CapacityExceeded("intervals need " + std::to_string(total) + " but span is " +
                               std::to_string(hi - lo));
    }

    // c_i = z_i + offset_i turns the spacing constraints into z non-decreasing.
    std::vector<double> offset(n, 0.0);
    for (std::size_t i = 1; i < n; ++i) {
        offset[i] = offset[i - 1] + 0.5 * (lengths[i - 1] + lengths[i]);
    }
    std::vector<double> targets(n);
    for (std::size_t i = 0; i < n; ++i) {
        targets[i] = desired[i] - offset[i];
    }
    std::vector<double> z = isotonic_l1(targets);

    const double z_lo = lo + 0.5 * lengths.front();
    const double z_hi = std::max(z_lo, hi - 0.5 * lengths.back() - offset.back());
    std::vector<double> centers(n);
    for (std::size_t i = 0; i < n; ++i) {
        centers[i] = std::clamp(z[i], z_lo, z_hi) + offset[i];
    }
    return centers;
}

double total_displacement(const std::vector<double>& a, const std::vector<double>& b)
{
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        sum += std::abs(a[i] - b[i]);
    }
    return sum;
}

}  // namespace

std::vector<double> distribute_evenly(std::size_t count, double length, double lo, double hi)
{
    std::vector<double> centers(count);
    if (count == 0) {
        return centers;
    }
    if (count == 1) {
        centers[0] = 0.5 * (lo + hi);
        return centers;
    }
    const double pitch = (hi - lo - length) / static_cast<double>(count - 1);
    for (std::size_t i = 0; i < count; ++i) {
        centers[i] = lo + 0.5 * length + pitch * static_cast<double>(i);
    }
    return centers;
}

std::vector<double> resolve_overlaps_1d(const std::vector<Interval1D>& intervals, double lo, double hi,
                                        bool circular)
{
    const std::size_t n = intervals.size();
    std::vector<double> result(n);
    if (n == 0) {
        return result;
    }

    if (!circular) {
        std::vector<std::size_t> order(n);
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return intervals[a].desired_center < intervals[b].desired_center;
        });
        std::vector<double> desired(n);
        std::vector<double> lengths(n);
        for (std::size_t k = 0; k < n; ++k) {
            desired[k] = intervals[order[k]].desired_center;
            lengths[k] = intervals[order[k]].length;
        }
        const auto centers = resolve_sorted(desired, lengths, lo, hi);
        for (std::size_t k = 0; k < n; ++k) {
            result[order[k]] = centers[k];
        }
        return result;
    }

    const double period = hi - lo;
    std::vector<double> pos(n);
    for (std::size_t i = 0; i < n; ++i) {
        double p = std::fmod(intervals[i].desired_center - lo, period);
        if (p < 0.0) {
            p += period;
        }
        if (p >= period) {
            p = 0.0;
        }
        pos[i] = p;
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return pos[a] < pos[b]; });

    // Cut the circle in the middle of each gap between circular neighbours,
    // solve the linear problem on [cut, cut + period], keep the cheapest.
    double best_cost = std::numeric_limits<double>::infinity();
    std::vector<double> best;
    std::size_t best_start = 0;
    for (std::size_t start = 0; start < n; ++start) {
        std::vector<double> desired(n);
        std::vector<double> lengths(n);
        for (std::size_t k = 0; k < n; ++k) {
            const std::size_t idx = (start + k) % n;
            desired[k] = pos[order[idx]] + (idx < start ? period : 0.0);
            lengths[k] = intervals[order[idx]].length;
        }
        const double prev = start == 0 ? pos[order[n - 1]] - period : pos[order[start - 1]];
        const double cut = 0.5 * (prev + desired[0]);
        auto centers = resolve_sorted(desired, lengths, cut, cut + period);
        const double cost = total_displacement(centers, desired);
        if (cost < best_cost) {
            best_cost = cost;
            best = std::move(centers);
            best_start = start;
        }
    }
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t idx = (best_start + k) % n;
        double c = std::fmod(best[k], period);
        if (c < 0.0) {
            c += period;
        }
        if (c >= period) {
            c = 0.0;
        }
        result[order[idx]] = lo + c;
    }
    return result;
}

}  // namespace arlabel
