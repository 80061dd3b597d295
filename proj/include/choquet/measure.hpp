#ifndef CHOQUET_MEASURE_HPP
#define CHOQUET_MEASURE_HPP

#include <atomic>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "choquet/errors.hpp"
#include "choquet/subset_key.hpp"

namespace choquet {

// A set function mu on subsets of a finite attribute ground set with
// mu(empty) = 0. Monotone in all shipped implementations except where a
// caller builds an explicit table on purpose (check_monotone validates).
class Measure {
public:
    virtual ~Measure() = default;

    virtual std::size_t ground_size() const = 0;

    // mu(subset). Throws InvalidSubsetError if the subset mentions attribute
    // indices >= ground_size().
    virtual double evaluate(const SubsetKey& subset) const = 0;

    // mu of the full ground set.
    double total() const { return evaluate(SubsetKey::full(ground_size())); }

protected:
    void require_valid(const SubsetKey& subset) const;
};

using MeasurePtr = std::shared_ptr<const Measure>;

// mu(A) = sum of per-attribute weights over A.
class AdditiveMeasure : public Measure {
public:
    explicit AdditiveMeasure(std::vector<double> weights);

    std::size_t ground_size() const override { return weights_.size(); }
    double evaluate(const SubsetKey& subset) const override;

    const std::vector<double>& weights() const { return weights_; }

private:
    std::vector<double> weights_;
};

// mu(A) = |A|.
class CountingMeasure : public Measure {
public:
    explicit CountingMeasure(std::size_t ground_size) : m_(ground_size) {}

    std::size_t ground_size() const override { return m_; }
    double evaluate(const SubsetKey& subset) const override;

private:
    std::size_t m_;
};

// Dense table over all 2^m subsets, indexed by bit mask. Capped at m = 20
// (~1M entries); exhaustive operations (monotonicity check, Mobius transform,
// Shapley values) live here.
class ExplicitMeasure : public Measure {
public:
    static constexpr std::size_t kMaxGroundSize = 20;

    // table[mask] = mu(subset with that mask); table.size() must be 2^m,
    // table[0] must be 0 and all values nonnegative. Monotonicity is NOT
    // enforced here so that check_monotone has something to check.
    ExplicitMeasure(std::size_t ground_size, std::vector<double> table);

    std::size_t ground_size() const override { return m_; }
    double evaluate(const SubsetKey& subset) const override;

    double value(std::uint64_t mask) const { return table_[mask]; }
    const std::vector<double>& table() const { return table_; }

private:
    std::size_t m_;
    std::vector<double> table_;
};

// Memoizing wrapper around a pure subset evaluator. Safe for concurrent
// readers: insertion is synchronized and idempotent, so any interleaving of
// evaluate() calls returns the same values as a single-threaded run. The
// evaluator must not re-enter the same LazyMeasure.
class LazyMeasure : public Measure {
public:
    using Evaluator = std::function<double(const SubsetKey&)>;

    LazyMeasure(std::size_t ground_size, Evaluator evaluator);

    std::size_t ground_size() const override { return m_; }
    double evaluate(const SubsetKey& subset) const override;

    // Number of distinct subsets evaluated so far.
    std::size_t cache_entries() const;

private:
    static constexpr std::size_t kDenseLimit = 20;  // dense cache up to 2^20 slots

    std::size_t m_;
    Evaluator evaluator_;

    bool dense_;
    mutable std::unique_ptr<double[]> dense_values_;
    mutable std::unique_ptr<std::atomic<std::uint8_t>[]> dense_ready_;
    mutable std::mutex dense_mutex_;
    mutable std::atomic<std::size_t> dense_entries_{0};

    mutable std::unordered_map<SubsetKey, double, SubsetKeyHash> sparse_;
    mutable std::shared_mutex sparse_mutex_;
};

// dual(mu)(A) = mu(ground) - mu(ground \ A). Lazy wrapper; caching is the
// base measure's business.
class DualMeasure : public Measure {
public:
    explicit DualMeasure(MeasurePtr base);

    std::size_t ground_size() const override { return base_->ground_size(); }
    double evaluate(const SubsetKey& subset) const override;

    const MeasurePtr& base() const { return base_; }

private:
    MeasurePtr base_;
    double total_;
};

// mu_alpha(A) = (1-alpha) mu(A) + alpha dual(mu)(A). alpha = 0.5 gives the
// self-dual symmetrization.
class MixtureMeasure : public Measure {
public:
    MixtureMeasure(MeasurePtr base, double alpha);

    std::size_t ground_size() const override { return base_->ground_size(); }
    double evaluate(const SubsetKey& subset) const override;

    double alpha() const { return alpha_; }
    const MeasurePtr& base() const { return base_; }

private:
    MeasurePtr base_;
    double alpha_;
    double total_;
};

// Counts evaluate() calls against a wrapped measure; used to verify the
// m-evaluations-per-distance contract and cache behaviour.
class InstrumentedMeasure : public Measure {
public:
    explicit InstrumentedMeasure(MeasurePtr base) : base_(std::move(base)) {}

    std::size_t ground_size() const override { return base_->ground_size(); }
    double evaluate(const SubsetKey& subset) const override;

    std::uint64_t calls() const { return calls_.load(std::memory_order_relaxed); }
    std::size_t distinct_subsets() const;
    void reset();

private:
    MeasurePtr base_;
    mutable std::atomic<std::uint64_t> calls_{0};
    mutable std::mutex mutex_;
    mutable std::unordered_set<SubsetKey, SubsetKeyHash> distinct_;
};

// Dual as a factory: collapses dual-of-dual back to the base measure, which
// makes the involution identity exact rather than merely within rounding.
MeasurePtr dual(MeasurePtr measure);

MeasurePtr mixture(MeasurePtr measure, double alpha);

struct MonotonicityReport {
    bool monotone = true;
    // First covering pair (A, A u {a}) with mu(A) > mu(A u {a}), if any.
    std::optional<std::pair<SubsetKey, SubsetKey>> violation;
};

// Exhaustive check over all covering pairs, equivalent to the full
// subset-inclusion condition.
MonotonicityReport check_monotone(const ExplicitMeasure& measure);

// Signed subset coefficients; summing coefficients over subsets of B
// reproduces mu(B).
class MobiusRepresentation {
public:
    using CoeffMap = std::unordered_map<SubsetKey, double, SubsetKeyHash>;

    MobiusRepresentation(std::size_t ground_size, CoeffMap coeffs)
        : m_(ground_size), coeffs_(std::move(coeffs)) {}

    std::size_t ground_size() const { return m_; }
    double coeff(const SubsetKey& subset) const;
    const CoeffMap& coeffs() const { return coeffs_; }

private:
    std::size_t m_;
    CoeffMap coeffs_;
};

// Alternating-sum transform, computed with the in-place subset convolution
// in O(m 2^m). Exact zeros are dropped from the coefficient map.
MobiusRepresentation mobius_transform(const ExplicitMeasure& measure);

// Inverse (zeta) transform: sum of coefficients over subsets of `subset`.
double zeta_reconstruct(const MobiusRepresentation& mobius, const SubsetKey& subset);

// Average marginal contribution of `attribute` over all subsets; the values
// sum to mu(ground) across attributes.
double shapley_value(const ExplicitMeasure& measure, std::size_t attribute);

// Evaluates an arbitrary measure on every subset (m <= 20).
ExplicitMeasure materialize(const Measure& measure);

// --- Measure file format ---------------------------------------------------
//
//   attrs: name1,name2,...
//   =0
//   name1=0.1
//   name1,name2=0.3
//   ...
//
// One line per subset (the empty subset has an empty left-hand side); every
// subset of the named attributes must appear exactly once.

struct NamedMeasure {
    std::vector<std::string> attribute_names;
    ExplicitMeasure measure;
};

NamedMeasure load_measure(std::istream& in);
NamedMeasure load_measure_file(const std::string& path);
void save_measure(std::ostream& out, const ExplicitMeasure& measure,
                  const std::vector<std::string>& attribute_names);

}  // namespace choquet

#endif
