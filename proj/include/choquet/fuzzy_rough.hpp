#ifndef CHOQUET_FUZZY_ROUGH_HPP
#define CHOQUET_FUZZY_ROUGH_HPP

#include <memory>

#include "choquet/dataset.hpp"
#include "choquet/measure.hpp"

namespace choquet {

enum class InnerDistance {
    Chebyshev,      // d_B(z,y) = max_{a in B} |a(z)-a(y)|; keeps gamma monotone in B
    ManhattanMean,  // d_B(z,y) = mean_{a in B} |a(z)-a(y)|
};

enum class Implicator {
    Lukasiewicz,  // I(p,q) = min(1, 1-p+q)
    KleeneDienes  // I(p,q) = max(1-p, q)
};

// Configuration of the fuzzy-rough dependency measures. The similarity
// relation on a subset B is R_B(x,y) = min_{a in B} (1 - |a(x)-a(y)|) on
// normalized data; the decision relation is crisp equality of class labels.
struct FRConfig {
    InnerDistance inner_distance = InnerDistance::Chebyshev;
    Implicator implicator = Implicator::Lukasiewicz;
};

enum class DependencyMode { Gamma, Delta };

// gamma_d(B) = sum over instances y of the distance from y to its nearest
// instance of a different class, measured on the attributes in B.
// gamma_d(empty) = 0 by convention. Throws DegenerateDecisionError when the
// dataset has a single class.
double gamma_classification(const Dataset& dataset, const SubsetKey& subset,
                            const FRConfig& config = {});

// Same with min over instances instead of the sum.
double delta_classification(const Dataset& dataset, const SubsetKey& subset,
                            const FRConfig& config = {});

// Membership of instance y in the B-positive region:
// POS(y) = max_x min_z I(R_B(y,z), R_d(x,z)). The empty subset uses
// R_empty = 1.
double pos_region(const Dataset& dataset, const SubsetKey& subset, std::size_t instance,
                  const FRConfig& config = {});

// Sum (resp. minimum) of pos_region over all instances. Works for any
// decision attribute representable by the crisp relation; no degeneracy
// errors by design.
double gamma_general(const Dataset& dataset, const SubsetKey& subset,
                     const FRConfig& config = {});
double delta_general(const Dataset& dataset, const SubsetKey& subset,
                     const FRConfig& config = {});

// The gamma/delta dependency as a memoized measure over attribute subsets,
// backed by the classification forms. Each distinct subset is evaluated at
// most once per measure instance; the dataset is shared and must outlive
// nothing (ownership is taken).
std::shared_ptr<LazyMeasure> make_dependency_measure(std::shared_ptr<const Dataset> dataset,
                                                     const FRConfig& config = {},
                                                     DependencyMode mode = DependencyMode::Gamma);

}  // namespace choquet

#endif
