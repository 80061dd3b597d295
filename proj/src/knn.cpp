#include "choquet/knn.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "choquet/parallel.hpp"
#include "choquet/rng.hpp"

namespace choquet {

// --- DistanceSpec ----------------------------------------------------------

namespace {

std::string format_short(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

}  // namespace

std::string DistanceSpec::name() const {
    switch (kind) {
        case DistanceKind::Manhattan: return "MAN";
        case DistanceKind::Chi2Weighted: return "CHI";
        case DistanceKind::MiWeighted: return "MI";
        case DistanceKind::Mahalanobis: return "MAH";
        case DistanceKind::MahalanobisManhattan: return "MAH1";
        case DistanceKind::MahalanobisMi: return "MAMI";
        case DistanceKind::FuzzyRoughWeighted: return "WFR";
        case DistanceKind::FuzzyRoughChoquet: return "CFR:" + format_short(alpha);
    }
    return "?";
}

DistanceSpec DistanceSpec::parse(const std::string& token) {
    DistanceSpec spec;
    std::string head = token;
    std::string arg;
    if (const auto colon = token.find(':'); colon != std::string::npos) {
        head = token.substr(0, colon);
        arg = token.substr(colon + 1);
    }
    if (head == "MAN") {
        spec.kind = DistanceKind::Manhattan;
    } else if (head == "CHI") {
        spec.kind = DistanceKind::Chi2Weighted;
    } else if (head == "MI") {
        spec.kind = DistanceKind::MiWeighted;
    } else if (head == "MAH") {
        spec.kind = DistanceKind::Mahalanobis;
    } else if (head == "MAH1") {
        spec.kind = DistanceKind::MahalanobisManhattan;
    } else if (head == "MAMI") {
        spec.kind = DistanceKind::MahalanobisMi;
    } else if (head == "WFR") {
        spec.kind = DistanceKind::FuzzyRoughWeighted;
    } else if (head == "CFR") {
        spec.kind = DistanceKind::FuzzyRoughChoquet;
        spec.alpha = 0.0;
        if (!arg.empty()) {
            double a = 0.0;
            auto [ptr, ec] = std::from_chars(arg.data(), arg.data() + arg.size(), a);
            if (ec != std::errc{} || ptr != arg.data() + arg.size()) {
                throw ParseError("cannot parse alpha in distance token '" + token + "'");
            }
            spec.alpha = a;
        }
        if (!(spec.alpha >= 0.0 && spec.alpha <= 1.0)) {
            throw DomainError("alpha must lie in [0,1] in '" + token + "'");
        }
        return spec;
    } else {
        throw ParseError("unknown distance '" + token + "'");
    }
    if (!arg.empty()) {
        throw ParseError("distance '" + head + "' takes no parameter");
    }
    return spec;
}

std::vector<DistanceSpec> DistanceSpec::parse_roster(const std::string& comma_separated) {
    std::vector<DistanceSpec> out;
    std::stringstream ss(comma_separated);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (!tok.empty()) out.push_back(parse(tok));
    }
    if (out.empty()) throw ParseError("empty distance roster");
    return out;
}

// --- Fitted distances --------------------------------------------------------

namespace {

class ManhattanFit final : public FittedDistance {
public:
    ManhattanFit() : FittedDistance("MAN") {}
    double distance(std::span<const double> x, std::span<const double> y) const override {
        return manhattan(x, y);
    }
};

class WeightedFit final : public FittedDistance {
public:
    WeightedFit(std::string name, WeightVector w)
        : FittedDistance(std::move(name)), weights_(std::move(w)) {}
    double distance(std::span<const double> x, std::span<const double> y) const override {
        return weighted_manhattan(x, y, weights_);
    }

private:
    WeightVector weights_;
};

class MahalanobisFit final : public FittedDistance {
public:
    explicit MahalanobisFit(CovarianceModel model)
        : FittedDistance("MAH"), model_(std::move(model)) {}
    double distance(std::span<const double> x, std::span<const double> y) const override {
        return mahalanobis(x, y, model_);
    }

private:
    CovarianceModel model_;
};

class MahalanobisManhattanFit final : public FittedDistance {
public:
    explicit MahalanobisManhattanFit(CovarianceModel model)
        : FittedDistance("MAH1"), model_(std::move(model)) {}
    double distance(std::span<const double> x, std::span<const double> y) const override {
        return mahalanobis_manhattan(x, y, model_);
    }

private:
    CovarianceModel model_;
};

class MamiFit final : public FittedDistance {
public:
    MamiFit(CovarianceModel model, WeightVector transformed_weights)
        : FittedDistance("MAMI"),
          model_(std::move(model)),
          weights_(std::move(transformed_weights)) {}
    double distance(std::span<const double> x, std::span<const double> y) const override {
        return mami_distance(x, y, model_, weights_);
    }

private:
    CovarianceModel model_;
    WeightVector weights_;
};

class ChoquetFit final : public FittedDistance {
public:
    ChoquetFit(std::string name, std::shared_ptr<LazyMeasure> measure, double alpha)
        : FittedDistance(std::move(name)),
          measure_(std::move(measure)),
          spec_(measure_, alpha) {}
    double distance(std::span<const double> x, std::span<const double> y) const override {
        return alpha_choquet_distance(x, y, spec_);
    }
    std::shared_ptr<const LazyMeasure> dependency_measure() const override { return measure_; }

private:
    std::shared_ptr<LazyMeasure> measure_;
    AlphaDistanceSpec spec_;
};

}  // namespace

FittedDistancePtr fit_distance(const DistanceSpec& spec, std::shared_ptr<const Dataset> train) {
    switch (spec.kind) {
        case DistanceKind::Manhattan:
            return std::make_shared<ManhattanFit>();
        case DistanceKind::Chi2Weighted:
            return std::make_shared<WeightedFit>("CHI", chi2_weights(*train));
        case DistanceKind::MiWeighted:
            return std::make_shared<WeightedFit>("MI", mi_weights(*train, spec.mi_k));
        case DistanceKind::Mahalanobis:
            return std::make_shared<MahalanobisFit>(fit_covariance(*train, spec.shrinkage));
        case DistanceKind::MahalanobisManhattan:
            return std::make_shared<MahalanobisManhattanFit>(
                fit_covariance(*train, spec.shrinkage));
        case DistanceKind::MahalanobisMi: {
            CovarianceModel model = fit_covariance(*train, spec.shrinkage);
            const Dataset whitened = apply_whitening(model, *train);
            WeightVector w = mi_weights(whitened, spec.mi_k);
            return std::make_shared<MamiFit>(std::move(model), std::move(w));
        }
        case DistanceKind::FuzzyRoughWeighted:
            return std::make_shared<WeightedFit>("WFR", wfr_weights(*train, spec.fr));
        case DistanceKind::FuzzyRoughChoquet: {
            auto measure = make_dependency_measure(train, spec.fr, DependencyMode::Gamma);
            return std::make_shared<ChoquetFit>(spec.name(), std::move(measure), spec.alpha);
        }
    }
    throw DomainError("unhandled distance kind");
}

// --- KNN ---------------------------------------------------------------------

namespace {

std::size_t predict_id(const Dataset& train, const std::vector<std::size_t>& train_ids,
                       std::size_t n_classes, std::span<const double> query, std::size_t k,
                       const FittedDistance& dist,
                       std::vector<std::pair<double, std::size_t>>& scratch) {
    const std::size_t n = train.n_instances();
    scratch.clear();
    scratch.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        scratch.emplace_back(dist.distance(query, train.row(i)), i);
    }
    const std::size_t kk = std::min(k, n);
    std::partial_sort(scratch.begin(), scratch.begin() + kk, scratch.end());
    std::vector<std::size_t> votes(n_classes, 0);
    std::vector<double> class_dist(n_classes, 0.0);
    for (std::size_t i = 0; i < kk; ++i) {
        ++votes[train_ids[scratch[i].second]];
        class_dist[train_ids[scratch[i].second]] += scratch[i].first;
    }
    // majority; ties by smaller summed distance, then smaller label id
    std::size_t best = 0;
    for (std::size_t c = 1; c < n_classes; ++c) {
        if (votes[c] > votes[best] ||
            (votes[c] == votes[best] && class_dist[c] < class_dist[best])) {
            best = c;
        }
    }
    return best;
}

}  // namespace

std::string knn_predict(const Dataset& train, std::span<const double> query, std::size_t k,
                        const FittedDistance& distance) {
    if (train.n_instances() == 0) throw InsufficientDataError("empty training set");
    if (k == 0 || k > train.n_instances()) {
        throw DomainError("k must lie in [1, n_train]");
    }
    const std::vector<std::string> classes = train.classes();
    const std::vector<std::size_t> ids = train.label_ids();
    std::vector<std::pair<double, std::size_t>> scratch;
    return classes[predict_id(train, ids, classes.size(), query, k, distance, scratch)];
}

std::vector<std::string> knn_predict_all(const std::shared_ptr<const Dataset>& train,
                                         const Dataset& test, std::size_t k,
                                         const FittedDistance& distance) {
    if (train->n_instances() == 0) throw InsufficientDataError("empty training set");
    if (k == 0 || k > train->n_instances()) {
        throw DomainError("k must lie in [1, n_train]");
    }
    const std::vector<std::string> classes = train->classes();
    const std::vector<std::size_t> ids = train->label_ids();
    std::vector<std::string> out(test.n_instances());
    parallel_for(test.n_instances(), [&](std::size_t q) {
        thread_local std::vector<std::pair<double, std::size_t>> scratch;
        out[q] = classes[predict_id(*train, ids, classes.size(), test.row(q), k, distance,
                                    scratch)];
    });
    return out;
}

double balanced_accuracy(const std::vector<std::string>& predictions,
                         const std::vector<std::string>& labels) {
    if (predictions.size() != labels.size()) {
        throw DimensionError("prediction/label count mismatch");
    }
    std::map<std::string, std::pair<std::size_t, std::size_t>> per_class;  // correct, total
    for (std::size_t i = 0; i < labels.size(); ++i) {
        auto& [correct, total] = per_class[labels[i]];
        ++total;
        if (predictions[i] == labels[i]) ++correct;
    }
    if (per_class.empty()) throw InsufficientDataError("no labels");
    double sum = 0.0;
    for (const auto& [cls, ct] : per_class) {
        sum += static_cast<double>(ct.first) / static_cast<double>(ct.second);
    }
    return sum / static_cast<double>(per_class.size());
}

double accuracy(const std::vector<std::string>& predictions,
                const std::vector<std::string>& labels) {
    if (predictions.size() != labels.size()) {
        throw DimensionError("prediction/label count mismatch");
    }
    std::size_t correct = 0;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (predictions[i] == labels[i]) ++correct;
    }
    return labels.empty() ? 0.0 : static_cast<double>(correct) / static_cast<double>(labels.size());
}

std::vector<int> stratified_kfold(const Dataset& dataset, std::size_t folds, std::uint64_t seed) {
    if (folds < 2) throw DomainError("need at least 2 folds");
    const std::vector<std::string> classes = dataset.classes();
    const std::vector<std::size_t> ids = dataset.label_ids();
    std::vector<int> assignment(dataset.n_instances(), -1);
    Rng rng(seed);
    std::size_t dealt = 0;
    for (std::size_t c = 0; c < classes.size(); ++c) {
        std::vector<std::size_t> members;
        for (std::size_t i = 0; i < ids.size(); ++i) {
            if (ids[i] == c) members.push_back(i);
        }
        rng.shuffle(members);
        // Round-robin from a rotating start so remainders spread over folds.
        for (std::size_t j = 0; j < members.size(); ++j) {
            assignment[members[j]] = static_cast<int>((dealt + j) % folds);
        }
        dealt += members.size();
    }
    return assignment;
}

// --- Wilcoxon signed-rank -------------------------------------------------------

namespace {

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

}  // namespace

WilcoxonResult wilcoxon_signed_rank(std::span<const double> a, std::span<const double> b,
                                    WilcoxonMethod method) {
    if (a.size() != b.size()) throw DimensionError("paired samples differ in length");
    std::vector<double> diffs;
    diffs.reserve(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        if (d != 0.0) diffs.push_back(d);
    }
    WilcoxonResult res;
    res.n_nonzero = diffs.size();
    if (diffs.empty()) {
        res.degenerate = true;
        res.p_value = 1.0;
        res.used = method == WilcoxonMethod::NormalApprox ? WilcoxonMethod::NormalApprox
                                                          : WilcoxonMethod::Exact;
        return res;
    }
    const std::size_t n = diffs.size();

    // Average ranks of |d|; doubled ranks stay integral under ties.
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t i, std::size_t j) { return std::abs(diffs[i]) < std::abs(diffs[j]); });
    std::vector<std::int64_t> doubled_rank(n, 0);
    std::vector<std::size_t> tie_sizes;
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i;
        while (j < n && std::abs(diffs[order[j]]) == std::abs(diffs[order[i]])) ++j;
        // positions i..j-1 (0-based) share the doubled average rank (i+1)+(j)
        const std::int64_t dr = static_cast<std::int64_t>(i + 1 + j);
        for (std::size_t t = i; t < j; ++t) doubled_rank[order[t]] = dr;
        tie_sizes.push_back(j - i);
        i = j;
    }
    std::int64_t w2 = 0;  // doubled W+
    for (std::size_t i = 0; i < n; ++i) {
        if (diffs[i] > 0.0) w2 += doubled_rank[i];
    }
    res.statistic = static_cast<double>(w2) / 2.0;

    const bool exact = method == WilcoxonMethod::Exact ||
                       (method == WilcoxonMethod::Auto && n < 15);
    if (exact) {
        res.used = WilcoxonMethod::Exact;
        // Conditional null distribution of the doubled statistic: each rank
        // enters the positive set independently with probability 1/2.
        const std::int64_t total = std::accumulate(doubled_rank.begin(), doubled_rank.end(),
                                                   std::int64_t{0});
        std::vector<double> count(static_cast<std::size_t>(total) + 1, 0.0);
        count[0] = 1.0;
        std::int64_t reach = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const std::int64_t r = doubled_rank[i];
            reach += r;
            for (std::int64_t s = reach; s >= r; --s) {
                count[s] += count[s - r];
            }
        }
        const double denom = std::pow(2.0, static_cast<double>(n));
        double below = 0.0, above = 0.0;
        for (std::int64_t s = 0; s <= total; ++s) {
            if (s <= w2) below += count[s];
            if (s >= w2) above += count[s];
        }
        res.p_value = std::min(1.0, 2.0 * std::min(below, above) / denom);
        return res;
    }

    res.used = WilcoxonMethod::NormalApprox;
    const double nd = static_cast<double>(n);
    const double mean = nd * (nd + 1.0) / 4.0;
    double tie_term = 0.0;
    for (std::size_t t : tie_sizes) {
        const double td = static_cast<double>(t);
        tie_term += td * td * td - td;
    }
    const double var = nd * (nd + 1.0) * (2.0 * nd + 1.0) / 24.0 - tie_term / 48.0;
    if (var <= 0.0) {
        res.p_value = 1.0;
        return res;
    }
    // continuity correction toward the mean
    double num = res.statistic - mean;
    num -= num > 0 ? 0.5 : (num < 0 ? -0.5 : 0.0);
    const double z = num / std::sqrt(var);
    res.p_value = std::min(1.0, 2.0 * (1.0 - normal_cdf(std::abs(z))));
    return res;
}

// --- Cross-validation ---------------------------------------------------------

namespace {

std::string fold_digest(const std::vector<int>& assignment) {
    std::uint64_t h = 1469598103934665603ULL;  // FNV-1a
    for (int f : assignment) {
        h ^= static_cast<std::uint64_t>(f);
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace

EvalReport cross_validate(const Dataset& dataset, const std::vector<DistanceSpec>& specs,
                          std::size_t k, std::size_t folds, std::uint64_t seed) {
    EvalReport report;
    report.dataset_name = dataset.provenance;
    report.seed = seed;
    report.folds = folds;
    report.k = k;
    for (const auto& s : specs) report.distance_names.push_back(s.name());
    report.fold_accuracies.assign(specs.size(), std::vector<double>(folds, 0.0));

    const std::vector<int> assignment = stratified_kfold(dataset, folds, seed);
    report.fold_digest = fold_digest(assignment);
    const std::vector<std::string> all_classes = dataset.classes();

    for (std::size_t f = 0; f < folds; ++f) {
        std::vector<std::size_t> train_idx, test_idx;
        for (std::size_t i = 0; i < assignment.size(); ++i) {
            (assignment[i] == static_cast<int>(f) ? test_idx : train_idx).push_back(i);
        }
        if (test_idx.empty()) {
            report.warnings.push_back("fold " + std::to_string(f) + " is empty");
            continue;
        }
        Dataset train = dataset.subset(train_idx);
        Dataset test = dataset.subset(test_idx);
        const Normalizer nz = Normalizer::fit(train);
        auto norm_train = std::make_shared<const Dataset>(nz.apply(train));
        const Dataset norm_test = nz.apply(test);
        for (const std::string& cls : all_classes) {
            if (std::find(test.labels.begin(), test.labels.end(), cls) == test.labels.end()) {
                report.warnings.push_back("fold " + std::to_string(f) + ": class '" + cls +
                                          "' missing from the test split");
            }
            if (std::find(train.labels.begin(), train.labels.end(), cls) == train.labels.end()) {
                report.warnings.push_back("fold " + std::to_string(f) + ": class '" + cls +
                                          "' missing from the training split");
            }
        }
        for (std::size_t s = 0; s < specs.size(); ++s) {
            const FittedDistancePtr dist = fit_distance(specs[s], norm_train);
            const std::vector<std::string> preds =
                knn_predict_all(norm_train, norm_test, k, *dist);
            report.fold_accuracies[s][f] = balanced_accuracy(preds, test.labels);
        }
    }

    report.mean_accuracies.resize(specs.size());
    for (std::size_t s = 0; s < specs.size(); ++s) {
        const auto& acc = report.fold_accuracies[s];
        report.mean_accuracies[s] =
            std::accumulate(acc.begin(), acc.end(), 0.0) / static_cast<double>(folds);
    }
    report.p_values.assign(specs.size(), std::vector<double>(specs.size(), 1.0));
    for (std::size_t i = 0; i < specs.size(); ++i) {
        for (std::size_t j = 0; j < specs.size(); ++j) {
            if (i == j) continue;
            report.p_values[i][j] =
                wilcoxon_signed_rank(report.fold_accuracies[i], report.fold_accuracies[j]).p_value;
        }
    }
    return report;
}

std::string EvalReport::to_json() const {
    nlohmann::ordered_json j;
    j["dataset"] = dataset_name;
    j["seed"] = seed;
    j["folds"] = folds;
    j["k"] = k;
    j["fold_digest"] = fold_digest;
    j["distances"] = distance_names;
    j["fold_balanced_accuracies"] = fold_accuracies;
    j["mean_balanced_accuracies"] = mean_accuracies;
    j["wilcoxon_p_values"] = p_values;
    j["warnings"] = warnings;
    return j.dump(2);
}

std::string EvalReport::to_csv() const {
    std::string out = "dataset,distance,fold,balanced_accuracy\n";
    for (std::size_t s = 0; s < distance_names.size(); ++s) {
        for (std::size_t f = 0; f < fold_accuracies[s].size(); ++f) {
            char buf[64];
            auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), fold_accuracies[s][f]);
            out += dataset_name + "," + distance_names[s] + "," + std::to_string(f) + "," +
                   std::string(buf, ptr) + "\n";
        }
    }
    return out;
}

}  // namespace choquet
