#ifndef CHOQUET_INTEGRAL_HPP
#define CHOQUET_INTEGRAL_HPP

#include <span>

#include "choquet/measure.hpp"

namespace choquet {

// Choquet integral of f against mu, computed on the ascending order of f as
//
//   sum_i mu({x*_i,...,x*_m}) * (f(x*_i) - f(x*_{i-1})),   f(x*_0) = 0,
//
// which touches exactly m nested subsets per call — the property the measure
// memoization relies on. Ties in f are ordered by attribute index, so the
// evaluated chain is reproducible. f may contain negative values.
double choquet_integral(std::span<const double> f, const Measure& mu);

// Equivalent form weighting each f value by the measure difference of
// consecutive chain sets: sum_i f(x*_i) * (mu(A*_i) - mu(A*_{i+1})).
double choquet_integral_weight_differences(std::span<const double> f, const Measure& mu);

// Equivalent form over prefixes of the descending order:
// sum_i mu({y*_1,...,y*_i}) * (f(y*_i) - f(y*_{i+1})), f(y*_{m+1}) = 0.
double choquet_integral_descending(std::span<const double> f, const Measure& mu);

// Subset-coefficient form: sum_B coeff(B) * min_{a in B} f(a). Brute-force
// oracle for small ground sets.
double choquet_integral_mobius(std::span<const double> f, const MobiusRepresentation& mobius);

// Same against the dual measure: sum_B coeff(B) * max_{a in B} f(a).
double choquet_integral_mobius_dual(std::span<const double> f,
                                    const MobiusRepresentation& mobius);

// d^mu(x,y) = integral of the attribute-wise absolute differences.
double choquet_distance(std::span<const double> x, std::span<const double> y,
                        const Measure& mu);

// R^mu(x,y) = integral of (1 - |a(x)-a(y)|/bound). Requires every
// attribute-wise distance to stay within `bound`.
double choquet_similarity(std::span<const double> x, std::span<const double> y,
                          const Measure& mu, double bound = 1.0);

// Distance under the convex mixture (1-alpha) mu + alpha dual(mu), evaluated
// as the linear combination of the two plain distances.
class AlphaDistanceSpec {
public:
    AlphaDistanceSpec(MeasurePtr measure, double alpha);

    double alpha() const { return alpha_; }
    const MeasurePtr& measure() const { return measure_; }
    const MeasurePtr& dual_measure() const { return dual_; }

private:
    MeasurePtr measure_;
    MeasurePtr dual_;
    double alpha_;
};

double alpha_choquet_distance(std::span<const double> x, std::span<const double> y,
                              const AlphaDistanceSpec& spec);

}  // namespace choquet

#endif
