#ifndef CHOQUET_BASELINES_HPP
#define CHOQUET_BASELINES_HPP

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "choquet/dataset.hpp"
#include "choquet/fuzzy_rough.hpp"

namespace choquet {

// Per-attribute nonnegative weights. An all-zero vector makes the weighted
// distances degenerate (identically zero); callers that fit weights from data
// accept that and rely on deterministic tie-breaking downstream.
using WeightVector = std::vector<double>;

double manhattan(std::span<const double> x, std::span<const double> y);

double weighted_manhattan(std::span<const double> x, std::span<const double> y,
                          const WeightVector& weights);

// Chi-square statistic of each attribute against the class attribute,
// computed from per-class sums of the (nonnegative) feature values:
// observed_c = sum of a over class c, expected_c = total * n_c / n.
// Classes with expected 0 contribute 0.
WeightVector chi2_weights(const Dataset& dataset);

enum class MiEstimator { KnnEstimator, Binned };

// Mutual information between each attribute and the class attribute, via the
// k-nearest-neighbor estimator for a continuous feature against a discrete
// target. Falls back to a deterministic equal-width 10-bin plug-in estimator
// when some class has fewer than k+1 instances (or when selected directly).
// Negative estimates clamp to 0.
WeightVector mi_weights(const Dataset& dataset, int k = 3,
                        MiEstimator estimator = MiEstimator::KnnEstimator);

// Fuzzy-rough gamma weights: w_a = gamma_d({a}).
WeightVector wfr_weights(const Dataset& dataset, const FRConfig& config = {});

// Shrunk covariance of the training features together with its inverse and
// symmetric inverse square root (the whitening transform). Eigenvalues are
// floored at 1e-10 before inversion.
struct CovarianceModel {
    Eigen::MatrixXd sigma;      // (1-lambda) * Sigma_ml + lambda * (tr/m) * I
    Eigen::MatrixXd whitening;  // sigma^{-1/2}, symmetric
    Eigen::MatrixXd precision;  // sigma^{-1} after flooring
    double shrinkage = 0.1;
};

CovarianceModel fit_covariance(const Dataset& train, double shrinkage = 0.1);

double mahalanobis(std::span<const double> x, std::span<const double> y,
                   const CovarianceModel& model);

// Whitening transform applied to each argument, then the Manhattan distance.
double mahalanobis_manhattan(std::span<const double> x, std::span<const double> y,
                             const CovarianceModel& model);

// Weighted Manhattan distance in whitened coordinates; the weights are meant
// to be mutual-information weights fitted on whitened training features.
double mami_distance(std::span<const double> x, std::span<const double> y,
                     const CovarianceModel& model, const WeightVector& transformed_weights);

// The dataset with every feature row mapped through the whitening transform
// (labels unchanged). Used to fit weights in the transformed space and to
// cache transforms in the KNN harness.
Dataset apply_whitening(const CovarianceModel& model, const Dataset& dataset);

}  // namespace choquet

#endif
