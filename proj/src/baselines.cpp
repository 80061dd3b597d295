#include "choquet/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace choquet {

namespace {

void check_lengths(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) {
        throw DimensionError("distance arguments have different lengths");
    }
}

std::vector<std::size_t> class_counts(const std::vector<std::size_t>& ids) {
    std::size_t k = 0;
    for (std::size_t id : ids) k = std::max(k, id + 1);
    std::vector<std::size_t> counts(k, 0);
    for (std::size_t id : ids) ++counts[id];
    return counts;
}

// digamma at positive integer arguments: psi(n) = -gamma + H_{n-1}.
double digamma_int(std::size_t n) {
    constexpr double kEulerGamma = 0.57721566490153286060651209008240243;
    double h = 0.0;
    for (std::size_t i = 1; i < n; ++i) h += 1.0 / static_cast<double>(i);
    return -kEulerGamma + h;
}

double knn_mi_column(const std::vector<double>& column, const std::vector<std::size_t>& ids,
                     const std::vector<std::size_t>& counts, int k) {
    const std::size_t n = column.size();

    // Sorted copies: full sample and one per class.
    std::vector<double> all_sorted(column);
    std::sort(all_sorted.begin(), all_sorted.end());
    std::vector<std::vector<double>> class_sorted(counts.size());
    for (std::size_t c = 0; c < counts.size(); ++c) class_sorted[c].reserve(counts[c]);
    for (std::size_t i = 0; i < n; ++i) class_sorted[ids[i]].push_back(column[i]);
    for (auto& v : class_sorted) std::sort(v.begin(), v.end());

    double sum_psi_k = 0.0, sum_psi_label = 0.0, sum_psi_m = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const std::vector<double>& mine = class_sorted[ids[i]];
        const int ki = std::min<std::size_t>(k, counts[ids[i]] - 1);
        // k-th nearest same-class distance via a two-pointer walk outward
        // from the instance's position in the sorted class column.
        auto it = std::lower_bound(mine.begin(), mine.end(), column[i]);
        std::size_t lo = it - mine.begin();  // first element == column[i]
        std::size_t hi = lo;                 // exclusive
        // skip self: widen over one exact copy
        hi = hi < mine.size() ? hi + 1 : hi;
        double radius = 0.0;
        for (int step = 0; step < ki; ++step) {
            const double left = lo > 0 ? column[i] - mine[lo - 1] : std::numeric_limits<double>::infinity();
            const double right = hi < mine.size() ? mine[hi] - column[i] : std::numeric_limits<double>::infinity();
            if (left <= right) {
                radius = left;
                --lo;
            } else {
                radius = right;
                ++hi;
            }
        }
        // Count sample points strictly inside the radius (all duplicates when
        // the radius is zero), excluding the point itself.
        std::size_t cnt;
        if (radius == 0.0) {
            cnt = std::upper_bound(all_sorted.begin(), all_sorted.end(), column[i]) -
                  std::lower_bound(all_sorted.begin(), all_sorted.end(), column[i]);
        } else {
            const double lo_v = column[i] - radius;
            const double hi_v = column[i] + radius;
            auto first = std::lower_bound(all_sorted.begin(), all_sorted.end(), lo_v);
            auto last = std::upper_bound(all_sorted.begin(), all_sorted.end(), hi_v);
            // strict inequality on both ends
            while (first != last && *first == lo_v) ++first;
            while (last != first && *(last - 1) == hi_v) --last;
            cnt = last - first;
        }
        const std::size_t m_i = cnt - 1;
        sum_psi_k += digamma_int(static_cast<std::size_t>(ki));
        sum_psi_label += digamma_int(counts[ids[i]]);
        sum_psi_m += digamma_int(m_i + 1);
    }
    const double nd = static_cast<double>(n);
    const double mi =
        digamma_int(n) + sum_psi_k / nd - sum_psi_label / nd - sum_psi_m / nd;
    return std::max(0.0, mi);
}

double binned_mi_column(const std::vector<double>& column, const std::vector<std::size_t>& ids,
                        const std::vector<std::size_t>& counts) {
    constexpr int kBins = 10;
    const std::size_t n = column.size();
    const auto [mn_it, mx_it] = std::minmax_element(column.begin(), column.end());
    const double mn = *mn_it, mx = *mx_it;
    if (mx == mn) return 0.0;
    const double width = (mx - mn) / kBins;
    std::vector<std::size_t> joint(kBins * counts.size(), 0);
    std::vector<std::size_t> bin_counts(kBins, 0);
    for (std::size_t i = 0; i < n; ++i) {
        int b = static_cast<int>((column[i] - mn) / width);
        b = std::clamp(b, 0, kBins - 1);
        ++joint[b * counts.size() + ids[i]];
        ++bin_counts[b];
    }
    double mi = 0.0;
    const double nd = static_cast<double>(n);
    for (int b = 0; b < kBins; ++b) {
        for (std::size_t c = 0; c < counts.size(); ++c) {
            const std::size_t j = joint[b * counts.size() + c];
            if (j == 0) continue;
            const double pj = j / nd;
            mi += pj * std::log(pj * nd * nd / (static_cast<double>(bin_counts[b]) *
                                                static_cast<double>(counts[c])));
        }
    }
    return std::max(0.0, mi);
}

}  // namespace

double manhattan(std::span<const double> x, std::span<const double> y) {
    check_lengths(x, y);
    double sum = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) sum += std::abs(x[i] - y[i]);
    return sum;
}

double weighted_manhattan(std::span<const double> x, std::span<const double> y,
                          const WeightVector& weights) {
    check_lengths(x, y);
    if (weights.size() != x.size()) {
        throw DimensionError("weight vector length does not match");
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) sum += weights[i] * std::abs(x[i] - y[i]);
    return sum;
}

WeightVector chi2_weights(const Dataset& dataset) {
    const std::size_t n = dataset.n_instances();
    const std::size_t m = dataset.n_attributes();
    const std::vector<std::size_t> ids = dataset.label_ids();
    const std::vector<std::size_t> counts = class_counts(ids);
    WeightVector weights(m, 0.0);
    for (std::size_t a = 0; a < m; ++a) {
        std::vector<double> observed(counts.size(), 0.0);
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double v = dataset.value(i, a);
            if (v < 0.0) {
                throw DomainError("chi2 weights require nonnegative feature values");
            }
            observed[ids[i]] += v;
            total += v;
        }
        double chi2 = 0.0;
        for (std::size_t c = 0; c < counts.size(); ++c) {
            const double expected = total * static_cast<double>(counts[c]) / static_cast<double>(n);
            if (expected > 0.0) {
                const double d = observed[c] - expected;
                chi2 += d * d / expected;
            }
        }
        weights[a] = chi2;
    }
    return weights;
}

WeightVector mi_weights(const Dataset& dataset, int k, MiEstimator estimator) {
    if (k < 1) throw DomainError("mi_weights needs k >= 1");
    const std::size_t m = dataset.n_attributes();
    const std::vector<std::size_t> ids = dataset.label_ids();
    const std::vector<std::size_t> counts = class_counts(ids);
    bool use_knn = estimator == MiEstimator::KnnEstimator;
    for (std::size_t c : counts) {
        if (c < static_cast<std::size_t>(k) + 1) use_knn = false;
    }
    WeightVector weights(m, 0.0);
    std::vector<double> column(dataset.n_instances());
    for (std::size_t a = 0; a < m; ++a) {
        for (std::size_t i = 0; i < dataset.n_instances(); ++i) column[i] = dataset.value(i, a);
        weights[a] = use_knn ? knn_mi_column(column, ids, counts, k)
                             : binned_mi_column(column, ids, counts);
    }
    return weights;
}

WeightVector wfr_weights(const Dataset& dataset, const FRConfig& config) {
    const std::size_t m = dataset.n_attributes();
    WeightVector weights(m, 0.0);
    for (std::size_t a = 0; a < m; ++a) {
        weights[a] = gamma_classification(dataset, SubsetKey{}.with(a), config);
    }
    return weights;
}

CovarianceModel fit_covariance(const Dataset& train, double shrinkage) {
    const std::size_t n = train.n_instances();
    const std::size_t m = train.n_attributes();
    if (n < 2) throw InsufficientDataError("covariance needs at least two instances");
    if (!(shrinkage >= 0.0 && shrinkage <= 1.0)) {
        throw DomainError("shrinkage must lie in [0,1]");
    }
    Eigen::MatrixXd X(n, m);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t a = 0; a < m; ++a) X(i, a) = train.value(i, a);
    }
    const Eigen::RowVectorXd mean = X.colwise().mean();
    X.rowwise() -= mean;
    // Maximum-likelihood covariance (divide by n).
    Eigen::MatrixXd sigma = (X.adjoint() * X) / static_cast<double>(n);
    const double mu = sigma.trace() / static_cast<double>(m);
    sigma = (1.0 - shrinkage) * sigma +
            shrinkage * mu * Eigen::MatrixXd::Identity(m, m);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sigma);
    Eigen::VectorXd evals = eig.eigenvalues().cwiseMax(1e-10);
    const Eigen::MatrixXd& V = eig.eigenvectors();
    CovarianceModel model;
    model.sigma = sigma;
    model.whitening = V * evals.cwiseSqrt().cwiseInverse().asDiagonal() * V.adjoint();
    model.precision = V * evals.cwiseInverse().asDiagonal() * V.adjoint();
    model.shrinkage = shrinkage;
    return model;
}

double mahalanobis(std::span<const double> x, std::span<const double> y,
                   const CovarianceModel& model) {
    check_lengths(x, y);
    if (static_cast<Eigen::Index>(x.size()) != model.precision.rows()) {
        throw DimensionError("vector length does not match covariance model");
    }
    Eigen::VectorXd d(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) d(i) = x[i] - y[i];
    const double q = d.dot(model.precision * d);
    return std::sqrt(std::max(0.0, q));
}

double mahalanobis_manhattan(std::span<const double> x, std::span<const double> y,
                             const CovarianceModel& model) {
    check_lengths(x, y);
    if (static_cast<Eigen::Index>(x.size()) != model.whitening.rows()) {
        throw DimensionError("vector length does not match covariance model");
    }
    Eigen::VectorXd vx(x.size()), vy(y.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        vx(i) = x[i];
        vy(i) = y[i];
    }
    return ((model.whitening * vx) - (model.whitening * vy)).cwiseAbs().sum();
}

double mami_distance(std::span<const double> x, std::span<const double> y,
                     const CovarianceModel& model, const WeightVector& transformed_weights) {
    check_lengths(x, y);
    if (static_cast<Eigen::Index>(x.size()) != model.whitening.rows() ||
        transformed_weights.size() != x.size()) {
        throw DimensionError("vector length does not match covariance model or weights");
    }
    Eigen::VectorXd vx(x.size()), vy(y.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        vx(i) = x[i];
        vy(i) = y[i];
    }
    const Eigen::VectorXd wx = model.whitening * vx;
    const Eigen::VectorXd wy = model.whitening * vy;
    double sum = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sum += transformed_weights[i] * std::abs(wx(static_cast<Eigen::Index>(i)) -
                                                 wy(static_cast<Eigen::Index>(i)));
    }
    return sum;
}

Dataset apply_whitening(const CovarianceModel& model, const Dataset& dataset) {
    const std::size_t m = dataset.n_attributes();
    if (static_cast<Eigen::Index>(m) != model.whitening.rows()) {
        throw DimensionError("dataset width does not match covariance model");
    }
    Dataset out = dataset;
    Eigen::VectorXd v(m);
    for (std::size_t i = 0; i < dataset.n_instances(); ++i) {
        for (std::size_t a = 0; a < m; ++a) v(a) = dataset.value(i, a);
        const Eigen::VectorXd w = model.whitening * v;
        for (std::size_t a = 0; a < m; ++a) out.values[i * m + a] = w(a);
    }
    return out;
}

}  // namespace choquet
