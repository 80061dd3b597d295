#ifndef CHOQUET_KNN_HPP
#define CHOQUET_KNN_HPP

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "choquet/baselines.hpp"
#include "choquet/dataset.hpp"
#include "choquet/fuzzy_rough.hpp"
#include "choquet/integral.hpp"

namespace choquet {

enum class DistanceKind {
    Manhattan,             // MAN
    Chi2Weighted,          // CHI
    MiWeighted,            // MI
    Mahalanobis,           // MAH
    MahalanobisManhattan,  // MAH1
    MahalanobisMi,         // MAMI
    FuzzyRoughWeighted,    // WFR
    FuzzyRoughChoquet,     // CFR:alpha
};

struct DistanceSpec {
    DistanceKind kind = DistanceKind::Manhattan;
    double alpha = 0.0;      // FuzzyRoughChoquet mixture parameter
    int mi_k = 3;            // neighbor count for MI estimation
    double shrinkage = 0.1;  // covariance shrinkage for the Mahalanobis family
    FRConfig fr;

    std::string name() const;

    // Parses roster tokens: MAN, CHI, MI, MAH, MAH1, MAMI, WFR, CFR, CFR:0.5.
    static DistanceSpec parse(const std::string& token);
    static std::vector<DistanceSpec> parse_roster(const std::string& comma_separated);
};

// A distance with all its data-dependent state (weights, covariance,
// dependency measure) fitted on one training split. Immutable after fitting;
// distance() is safe to call from multiple threads.
class FittedDistance {
public:
    virtual ~FittedDistance() = default;
    virtual double distance(std::span<const double> x, std::span<const double> y) const = 0;
    const std::string& name() const { return name_; }

    // The memoized dependency measure, when this distance carries one.
    virtual std::shared_ptr<const LazyMeasure> dependency_measure() const { return nullptr; }

protected:
    explicit FittedDistance(std::string name) : name_(std::move(name)) {}

private:
    std::string name_;
};

using FittedDistancePtr = std::shared_ptr<const FittedDistance>;

FittedDistancePtr fit_distance(const DistanceSpec& spec, std::shared_ptr<const Dataset> train);

// Majority vote over the k nearest training instances. Neighbors are chosen
// by (distance, training index); vote ties go to the class with the smaller
// summed neighbor distance, then to the smaller label.
std::string knn_predict(const Dataset& train, std::span<const double> query, std::size_t k,
                        const FittedDistance& distance);

// Predictions for every instance of `test`, computed in parallel with a
// deterministic result.
std::vector<std::string> knn_predict_all(const std::shared_ptr<const Dataset>& train,
                                         const Dataset& test, std::size_t k,
                                         const FittedDistance& distance);

// Unweighted mean of per-class recall, over the classes present in `labels`.
double balanced_accuracy(const std::vector<std::string>& predictions,
                         const std::vector<std::string>& labels);

// Plain fraction of correct predictions.
double accuracy(const std::vector<std::string>& predictions,
                const std::vector<std::string>& labels);

// Per-instance fold index in [0, folds); class-proportional and deterministic
// for a fixed seed, with per-class fold sizes differing by at most one.
std::vector<int> stratified_kfold(const Dataset& dataset, std::size_t folds, std::uint64_t seed);

enum class WilcoxonMethod { Auto, Exact, NormalApprox };

struct WilcoxonResult {
    double statistic = 0.0;  // sum of ranks of positive differences
    double p_value = 1.0;
    std::size_t n_nonzero = 0;
    bool degenerate = false;  // all differences zero; p reported as 1
    WilcoxonMethod used = WilcoxonMethod::Exact;
};

// Two-sided paired signed-rank test. Zero differences are dropped and ties
// get average ranks. Auto uses the exact conditional distribution below 15
// nonzero pairs and the tie-corrected normal approximation otherwise.
WilcoxonResult wilcoxon_signed_rank(std::span<const double> a, std::span<const double> b,
                                    WilcoxonMethod method = WilcoxonMethod::Auto);

struct EvalReport {
    std::string dataset_name;
    std::uint64_t seed = 0;
    std::size_t folds = 0;
    std::size_t k = 0;
    std::string fold_digest;  // hash of the fold assignment
    std::vector<std::string> distance_names;
    std::vector<std::vector<double>> fold_accuracies;  // [distance][fold]
    std::vector<double> mean_accuracies;
    std::vector<std::vector<double>> p_values;  // pairwise Wilcoxon over folds
    std::vector<std::string> warnings;

    std::string to_json() const;
    // Flat rows: dataset,distance,fold,balanced_accuracy
    std::string to_csv() const;
};

// Stratified cross-validation with per-fold refitting of normalization,
// weights, covariance models and dependency measures. All specs share the
// same fold assignment.
EvalReport cross_validate(const Dataset& dataset, const std::vector<DistanceSpec>& specs,
                          std::size_t k, std::size_t folds, std::uint64_t seed);

}  // namespace choquet

#endif
