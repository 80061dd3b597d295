#include "choquet/integral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace choquet {

namespace {

struct Scratch {
    std::vector<std::pair<double, std::size_t>> order;
    std::vector<double> integrand;
};

thread_local Scratch scratch;

void check_input(std::span<const double> f, const Measure& mu) {
    if (f.size() != mu.ground_size()) {
        throw DimensionError("vector length " + std::to_string(f.size()) +
                             " does not match measure ground size " +
                             std::to_string(mu.ground_size()));
    }
    for (double v : f) {
        if (std::isnan(v)) throw DomainError("attribute vector contains NaN");
    }
}

// Ascending by (value, attribute index); the deterministic order all
// formulations share.
void sort_ascending(std::span<const double> f, std::vector<std::pair<double, std::size_t>>& order) {
    order.clear();
    order.reserve(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) order.emplace_back(f[i], i);
    std::sort(order.begin(), order.end());
}

}  // namespace

double choquet_integral(std::span<const double> f, const Measure& mu) {
    check_input(f, mu);
    const std::size_t m = f.size();
    if (m == 0) return 0.0;
    auto& order = scratch.order;
    sort_ascending(f, order);
    SubsetKey chain = SubsetKey::full(m);
    double sum = 0.0;
    double prev = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        sum += mu.evaluate(chain) * (order[i].first - prev);
        prev = order[i].first;
        chain.remove(order[i].second);
    }
    return sum;
}

double choquet_integral_weight_differences(std::span<const double> f, const Measure& mu) {
    check_input(f, mu);
    const std::size_t m = f.size();
    if (m == 0) return 0.0;
    std::vector<std::pair<double, std::size_t>> order;
    sort_ascending(f, order);
    SubsetKey chain = SubsetKey::full(m);
    double sum = 0.0;
    double current = mu.evaluate(chain);
    for (std::size_t i = 0; i < m; ++i) {
        chain.remove(order[i].second);
        const double next = i + 1 < m ? mu.evaluate(chain) : 0.0;
        sum += order[i].first * (current - next);
        current = next;
    }
    return sum;
}

double choquet_integral_descending(std::span<const double> f, const Measure& mu) {
    check_input(f, mu);
    const std::size_t m = f.size();
    if (m == 0) return 0.0;
    std::vector<std::pair<double, std::size_t>> order;
    sort_ascending(f, order);
    // Prefixes of the descending order are the suffix sets of the ascending one.
    SubsetKey prefix;
    double sum = 0.0;
    for (std::size_t i = m; i-- > 0;) {
        prefix.add(order[i].second);
        const double next = i > 0 ? order[i - 1].first : 0.0;
        sum += mu.evaluate(prefix) * (order[i].first - next);
    }
    return sum;
}

double choquet_integral_mobius(std::span<const double> f, const MobiusRepresentation& mobius) {
    if (f.size() != mobius.ground_size()) {
        throw DimensionError("vector length does not match Mobius ground size");
    }
    double sum = 0.0;
    for (const auto& [subset, c] : mobius.coeffs()) {
        double lo = std::numeric_limits<double>::infinity();
        subset.for_each([&](std::size_t i) { lo = std::min(lo, f[i]); });
        if (!subset.empty()) sum += c * lo;
    }
    return sum;
}

double choquet_integral_mobius_dual(std::span<const double> f,
                                    const MobiusRepresentation& mobius) {
    if (f.size() != mobius.ground_size()) {
        throw DimensionError("vector length does not match Mobius ground size");
    }
    double sum = 0.0;
    for (const auto& [subset, c] : mobius.coeffs()) {
        double hi = -std::numeric_limits<double>::infinity();
        subset.for_each([&](std::size_t i) { hi = std::max(hi, f[i]); });
        if (!subset.empty()) sum += c * hi;
    }
    return sum;
}

double choquet_distance(std::span<const double> x, std::span<const double> y,
                        const Measure& mu) {
    if (x.size() != y.size()) {
        throw DimensionError("distance arguments have different lengths");
    }
    auto& diffs = scratch.integrand;
    diffs.resize(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) diffs[i] = std::abs(x[i] - y[i]);
    return choquet_integral(diffs, mu);
}

double choquet_similarity(std::span<const double> x, std::span<const double> y,
                          const Measure& mu, double bound) {
    if (x.size() != y.size()) {
        throw DimensionError("similarity arguments have different lengths");
    }
    if (!(bound > 0.0)) throw DomainError("similarity bound must be positive");
    auto& integrand = scratch.integrand;
    integrand.resize(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = std::abs(x[i] - y[i]);
        if (d > bound) {
            throw DomainError("attribute-wise distance " + std::to_string(d) +
                              " exceeds similarity bound " + std::to_string(bound));
        }
        integrand[i] = 1.0 - d / bound;
    }
    return choquet_integral(integrand, mu);
}

AlphaDistanceSpec::AlphaDistanceSpec(MeasurePtr measure, double alpha)
    : measure_(std::move(measure)), alpha_(alpha) {
    if (!(alpha >= 0.0 && alpha <= 1.0)) {
        throw DomainError("alpha must lie in [0,1]");
    }
    dual_ = dual(measure_);
}

double alpha_choquet_distance(std::span<const double> x, std::span<const double> y,
                              const AlphaDistanceSpec& spec) {
    if (spec.alpha() == 0.0) return choquet_distance(x, y, *spec.measure());
    if (spec.alpha() == 1.0) return choquet_distance(x, y, *spec.dual_measure());
    const double direct = choquet_distance(x, y, *spec.measure());
    const double dual_d = choquet_distance(x, y, *spec.dual_measure());
    return (1.0 - spec.alpha()) * direct + spec.alpha() * dual_d;
}

}  // namespace choquet
