#include "choquet/fuzzy_rough.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

namespace choquet {

namespace {

constexpr double kMaxRange = 1.0;  // maximum attribute range on normalized data

void check_subset(const Dataset& dataset, const SubsetKey& subset) {
    if (!subset.is_subset_of(SubsetKey::full(dataset.n_attributes()))) {
        throw InvalidSubsetError("subset mentions attributes outside the dataset");
    }
}

std::size_t require_two_classes(const std::vector<std::size_t>& ids) {
    std::size_t max_id = 0;
    for (std::size_t id : ids) max_id = std::max(max_id, id);
    if (max_id == 0) {
        throw DegenerateDecisionError("dependency measure needs at least two decision classes");
    }
    return max_id + 1;
}

double implication(Implicator imp, double p, double q) {
    switch (imp) {
        case Implicator::Lukasiewicz: return std::min(1.0, 1.0 - p + q);
        case Implicator::KleeneDienes: return std::max(1.0 - p, q);
    }
    return 0.0;
}

// d_B(z,y) with early exit once the accumulating value can no longer beat
// `cap` (both variants only grow as attributes are added).
double inner_distance(const Dataset& ds, InnerDistance kind,
                      const std::vector<std::size_t>& attrs, std::size_t z, std::size_t y,
                      double cap) {
    const double* rz = ds.values.data() + z * ds.n_attributes();
    const double* ry = ds.values.data() + y * ds.n_attributes();
    if (kind == InnerDistance::Chebyshev) {
        double worst = 0.0;
        for (std::size_t a : attrs) {
            worst = std::max(worst, std::abs(rz[a] - ry[a]));
            if (worst >= cap) return worst;
        }
        return worst;
    }
    double sum = 0.0;
    const double denom = static_cast<double>(attrs.size());
    for (std::size_t a : attrs) {
        sum += std::abs(rz[a] - ry[a]);
        if (sum / denom >= cap) return sum / denom;
    }
    return sum / denom;
}

// Distance from y to its nearest other-class instance on `attrs`.
double nearest_other_class(const Dataset& ds, const FRConfig& config,
                           const std::vector<std::size_t>& attrs,
                           const std::vector<std::size_t>& ids, std::size_t y) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t z = 0; z < ds.n_instances(); ++z) {
        if (ids[z] == ids[y]) continue;
        best = std::min(best, inner_distance(ds, config.inner_distance, attrs, z, y, best));
        if (best == 0.0) break;
    }
    // No competitor: the instance is perfectly discriminated.
    return std::isinf(best) ? kMaxRange : best;
}

}  // namespace

double gamma_classification(const Dataset& dataset, const SubsetKey& subset,
                            const FRConfig& config) {
    check_subset(dataset, subset);
    const std::vector<std::size_t> ids = dataset.label_ids();
    require_two_classes(ids);
    if (subset.empty()) return 0.0;
    const std::vector<std::size_t> attrs = subset.indices();
    double sum = 0.0;
    for (std::size_t y = 0; y < dataset.n_instances(); ++y) {
        sum += nearest_other_class(dataset, config, attrs, ids, y);
    }
    return sum;
}

double delta_classification(const Dataset& dataset, const SubsetKey& subset,
                            const FRConfig& config) {
    check_subset(dataset, subset);
    const std::vector<std::size_t> ids = dataset.label_ids();
    require_two_classes(ids);
    if (subset.empty()) return 0.0;
    const std::vector<std::size_t> attrs = subset.indices();
    double worst = std::numeric_limits<double>::infinity();
    for (std::size_t y = 0; y < dataset.n_instances(); ++y) {
        worst = std::min(worst, nearest_other_class(dataset, config, attrs, ids, y));
    }
    return worst;
}

double pos_region(const Dataset& dataset, const SubsetKey& subset, std::size_t instance,
                  const FRConfig& config) {
    check_subset(dataset, subset);
    const std::size_t n = dataset.n_instances();
    if (instance >= n) throw InvalidSubsetError("instance index out of range");
    const std::vector<std::size_t> ids = dataset.label_ids();
    const std::vector<std::size_t> attrs = subset.indices();

    // R_B(instance, z) for every z; R_empty == 1.
    std::vector<double> rel(n, 1.0);
    if (!attrs.empty()) {
        for (std::size_t z = 0; z < n; ++z) {
            const double d = inner_distance(dataset, config.inner_distance, attrs, z, instance,
                                            std::numeric_limits<double>::infinity());
            rel[z] = std::clamp(1.0 - d, 0.0, 1.0);
        }
    }
    double best = 0.0;
    for (std::size_t x = 0; x < n; ++x) {
        double inner = 1.0;
        for (std::size_t z = 0; z < n; ++z) {
            const double rd = ids[x] == ids[z] ? 1.0 : 0.0;
            inner = std::min(inner, implication(config.implicator, rel[z], rd));
            if (inner == 0.0) break;
        }
        best = std::max(best, inner);
        if (best == 1.0) break;
    }
    return best;
}

double gamma_general(const Dataset& dataset, const SubsetKey& subset, const FRConfig& config) {
    double sum = 0.0;
    for (std::size_t y = 0; y < dataset.n_instances(); ++y) {
        sum += pos_region(dataset, subset, y, config);
    }
    return sum;
}

double delta_general(const Dataset& dataset, const SubsetKey& subset, const FRConfig& config) {
    double worst = 1.0;
    for (std::size_t y = 0; y < dataset.n_instances(); ++y) {
        worst = std::min(worst, pos_region(dataset, subset, y, config));
    }
    return worst;
}

namespace {

// Shared state for the memoized dependency measure: label ids plus, for each
// instance, its other-class competitors ordered by full-attribute-set
// distance. Scanning candidates nearest-first makes the per-attribute early
// exit in inner_distance effective.
struct DependencyContext {
    std::shared_ptr<const Dataset> dataset;
    FRConfig config;
    DependencyMode mode;
    std::vector<std::size_t> ids;
    std::vector<std::vector<std::uint32_t>> candidates;

    DependencyContext(std::shared_ptr<const Dataset> ds, const FRConfig& cfg, DependencyMode md)
        : dataset(std::move(ds)), config(cfg), mode(md), ids(dataset->label_ids()) {
        require_two_classes(ids);
        const std::size_t n = dataset->n_instances();
        std::vector<std::size_t> all(dataset->n_attributes());
        std::iota(all.begin(), all.end(), 0);
        candidates.resize(n);
        std::vector<std::pair<double, std::uint32_t>> buf;
        for (std::size_t y = 0; y < n; ++y) {
            buf.clear();
            for (std::size_t z = 0; z < n; ++z) {
                if (ids[z] == ids[y]) continue;
                const double d = inner_distance(*dataset, config.inner_distance, all, z, y,
                                                std::numeric_limits<double>::infinity());
                buf.emplace_back(d, static_cast<std::uint32_t>(z));
            }
            std::sort(buf.begin(), buf.end());
            candidates[y].reserve(buf.size());
            for (const auto& [d, z] : buf) candidates[y].push_back(z);
        }
    }

    double evaluate(const SubsetKey& subset) const {
        if (subset.empty()) return 0.0;
        const std::vector<std::size_t> attrs = subset.indices();
        const std::size_t n = dataset->n_instances();
        double sum = 0.0;
        double overall = std::numeric_limits<double>::infinity();
        for (std::size_t y = 0; y < n; ++y) {
            double best = std::numeric_limits<double>::infinity();
            for (std::uint32_t z : candidates[y]) {
                best = std::min(best,
                                inner_distance(*dataset, config.inner_distance, attrs, z, y, best));
                if (best == 0.0) break;
            }
            if (std::isinf(best)) best = kMaxRange;
            sum += best;
            overall = std::min(overall, best);
        }
        return mode == DependencyMode::Gamma ? sum : overall;
    }
};

}  // namespace

std::shared_ptr<LazyMeasure> make_dependency_measure(std::shared_ptr<const Dataset> dataset,
                                                     const FRConfig& config, DependencyMode mode) {
    auto ctx = std::make_shared<DependencyContext>(std::move(dataset), config, mode);
    const std::size_t m = ctx->dataset->n_attributes();
    return std::make_shared<LazyMeasure>(
        m, [ctx](const SubsetKey& subset) { return ctx->evaluate(subset); });
}

}  // namespace choquet
