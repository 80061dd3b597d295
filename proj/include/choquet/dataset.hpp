#ifndef CHOQUET_DATASET_HPP
#define CHOQUET_DATASET_HPP

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "choquet/errors.hpp"

namespace choquet {

// Numeric conditional attributes plus a categorical decision attribute.
// Values are stored row-major.
struct Dataset {
    std::vector<std::string> attribute_names;
    std::vector<double> values;       // n * m, row-major
    std::vector<std::string> labels;  // n decision values, verbatim
    std::string provenance;

    std::size_t n_instances() const { return labels.size(); }
    std::size_t n_attributes() const { return attribute_names.size(); }

    std::span<const double> row(std::size_t i) const {
        return {values.data() + i * n_attributes(), n_attributes()};
    }
    double value(std::size_t i, std::size_t a) const { return values[i * n_attributes() + a]; }

    // Distinct labels in sorted order, and per-instance label ids.
    std::vector<std::string> classes() const;
    std::vector<std::size_t> label_ids() const;

    Dataset subset(const std::vector<std::size_t>& instance_indices) const;
    Dataset without_column(std::size_t attribute) const;
};

// CSV with a header row; the last column is the decision attribute, all other
// columns must parse as decimal reals. Labels are kept verbatim as strings.
Dataset load_csv(std::istream& in, const std::string& origin = "<stream>");
Dataset load_csv_file(const std::string& path);
void save_csv(std::ostream& out, const Dataset& dataset);
void save_csv_file(const std::string& path, const Dataset& dataset);

// Per-attribute min/max scaling fitted on a training split; transformed
// training values land in [0,1], other data is clamped into [0,1].
// Constant columns map to 0.
class Normalizer {
public:
    static Normalizer fit(const Dataset& train);

    Dataset apply(const Dataset& dataset) const;

    const std::vector<double>& mins() const { return min_; }
    const std::vector<double>& maxs() const { return max_; }

private:
    std::vector<double> min_, max_;
};

// Two informative uniform features a1, a2 plus exact copies of a2; the label
// is 1 iff a1 >= a2.
Dataset synthetic_duplicates(std::size_t n_train, std::size_t m_dup, std::uint64_t seed);

// Same construction with Gaussian-noise copies a2 + eps instead of exact
// duplicates.
Dataset synthetic_correlated(std::size_t n_train, std::size_t m_corr, double sigma,
                             std::uint64_t seed);

enum class ExtraColumns { None, Duplicates, Correlated };

// Labeled points near the decision boundary: (y + dx, y + dy) with
// y ~ U[0,1], dx, dy ~ U[-0.1, 0.1]. Extra columns (duplicates of a2 or noisy
// copies) are appended to match a training configuration. Points may fall
// slightly outside [0,1] and are intentionally not clamped.
Dataset boundary_test_set(std::size_t n, std::uint64_t seed,
                          std::size_t m_extra = 0,
                          ExtraColumns kind = ExtraColumns::None,
                          double sigma = 0.1);

}  // namespace choquet

#endif
