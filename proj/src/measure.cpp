#include "choquet/measure.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace choquet {

void Measure::require_valid(const SubsetKey& subset) const {
    const std::size_t m = ground_size();
    if (!subset.is_subset_of(SubsetKey::full(m))) {
        throw InvalidSubsetError("subset contains attribute indices >= ground size " +
                                 std::to_string(m));
    }
}

// --- AdditiveMeasure ---------------------------------------------------------

AdditiveMeasure::AdditiveMeasure(std::vector<double> weights) : weights_(std::move(weights)) {
    for (double w : weights_) {
        if (!(w >= 0.0) || std::isnan(w)) {
            throw DomainError("additive measure weights must be nonnegative");
        }
    }
}

double AdditiveMeasure::evaluate(const SubsetKey& subset) const {
    require_valid(subset);
    double sum = 0.0;
    subset.for_each([&](std::size_t i) { sum += weights_[i]; });
    return sum;
}

double CountingMeasure::evaluate(const SubsetKey& subset) const {
    require_valid(subset);
    return static_cast<double>(subset.count());
}

// --- ExplicitMeasure ---------------------------------------------------------

ExplicitMeasure::ExplicitMeasure(std::size_t ground_size, std::vector<double> table)
    : m_(ground_size), table_(std::move(table)) {
    if (m_ > kMaxGroundSize) {
        throw CapacityError("explicit measure limited to " + std::to_string(kMaxGroundSize) +
                            " attributes, got " + std::to_string(m_));
    }
    if (table_.size() != (std::size_t{1} << m_)) {
        throw DimensionError("explicit measure table must have 2^m entries");
    }
    if (table_[0] != 0.0) {
        throw DomainError("measure of the empty set must be 0");
    }
    for (double v : table_) {
        if (std::isnan(v) || v < 0.0) {
            throw DomainError("measure values must be nonnegative reals");
        }
    }
}

double ExplicitMeasure::evaluate(const SubsetKey& subset) const {
    require_valid(subset);
    return table_[subset.mask()];
}

// --- LazyMeasure -------------------------------------------------------------

LazyMeasure::LazyMeasure(std::size_t ground_size, Evaluator evaluator)
    : m_(ground_size), evaluator_(std::move(evaluator)), dense_(ground_size <= kDenseLimit) {
    if (dense_) {
        const std::size_t n = std::size_t{1} << m_;
        dense_values_ = std::make_unique<double[]>(n);
        dense_ready_ = std::make_unique<std::atomic<std::uint8_t>[]>(n);
        for (std::size_t i = 0; i < n; ++i) {
            dense_ready_[i].store(0, std::memory_order_relaxed);
        }
    }
}

double LazyMeasure::evaluate(const SubsetKey& subset) const {
    require_valid(subset);
    if (dense_) {
        const std::size_t idx = subset.mask();
        if (dense_ready_[idx].load(std::memory_order_acquire)) {
            return dense_values_[idx];
        }
        std::lock_guard<std::mutex> lock(dense_mutex_);
        if (dense_ready_[idx].load(std::memory_order_acquire)) {
            return dense_values_[idx];
        }
        const double v = evaluator_(subset);
        dense_values_[idx] = v;
        dense_ready_[idx].store(1, std::memory_order_release);
        dense_entries_.fetch_add(1, std::memory_order_relaxed);
        return v;
    }
    {
        std::shared_lock lock(sparse_mutex_);
        auto it = sparse_.find(subset);
        if (it != sparse_.end()) return it->second;
    }
    std::unique_lock lock(sparse_mutex_);
    auto it = sparse_.find(subset);
    if (it != sparse_.end()) return it->second;
    const double v = evaluator_(subset);
    sparse_.emplace(subset, v);
    return v;
}

std::size_t LazyMeasure::cache_entries() const {
    if (dense_) return dense_entries_.load(std::memory_order_relaxed);
    std::shared_lock lock(sparse_mutex_);
    return sparse_.size();
}

// --- DualMeasure / MixtureMeasure ---------------------------------------------

DualMeasure::DualMeasure(MeasurePtr base) : base_(std::move(base)), total_(base_->total()) {}

double DualMeasure::evaluate(const SubsetKey& subset) const {
    require_valid(subset);
    return total_ - base_->evaluate(subset.complement(ground_size()));
}

MixtureMeasure::MixtureMeasure(MeasurePtr base, double alpha)
    : base_(std::move(base)), alpha_(alpha), total_(base_->total()) {
    if (!(alpha >= 0.0 && alpha <= 1.0)) {
        throw DomainError("mixture alpha must lie in [0,1]");
    }
}

double MixtureMeasure::evaluate(const SubsetKey& subset) const {
    require_valid(subset);
    const double direct = base_->evaluate(subset);
    const double dual_v = total_ - base_->evaluate(subset.complement(ground_size()));
    return (1.0 - alpha_) * direct + alpha_ * dual_v;
}

double InstrumentedMeasure::evaluate(const SubsetKey& subset) const {
    calls_.fetch_add(1, std::memory_order_relaxed);
    {
        std::lock_guard<std::mutex> lock(mutex_);
        distinct_.insert(subset);
    }
    return base_->evaluate(subset);
}

std::size_t InstrumentedMeasure::distinct_subsets() const {
    std::lock_guard<std::mutex> lock(mutex_);
    return distinct_.size();
}

void InstrumentedMeasure::reset() {
    calls_.store(0, std::memory_order_relaxed);
    std::lock_guard<std::mutex> lock(mutex_);
    distinct_.clear();
}

MeasurePtr dual(MeasurePtr measure) {
    if (auto d = std::dynamic_pointer_cast<const DualMeasure>(measure)) {
        return d->base();
    }
    return std::make_shared<DualMeasure>(std::move(measure));
}

MeasurePtr mixture(MeasurePtr measure, double alpha) {
    return std::make_shared<MixtureMeasure>(std::move(measure), alpha);
}

// --- Exhaustive operations -----------------------------------------------------

MonotonicityReport check_monotone(const ExplicitMeasure& measure) {
    const std::size_t m = measure.ground_size();
    const std::uint64_t n = std::uint64_t{1} << m;
    for (std::uint64_t mask = 0; mask < n; ++mask) {
        for (std::size_t a = 0; a < m; ++a) {
            const std::uint64_t bit = std::uint64_t{1} << a;
            if (mask & bit) continue;
            if (measure.value(mask) > measure.value(mask | bit)) {
                return {false, std::make_pair(SubsetKey{mask}, SubsetKey{mask | bit})};
            }
        }
    }
    return {};
}

MobiusRepresentation mobius_transform(const ExplicitMeasure& measure) {
    const std::size_t m = measure.ground_size();
    const std::size_t n = std::size_t{1} << m;
    std::vector<double> coeff = measure.table();
    for (std::size_t a = 0; a < m; ++a) {
        const std::size_t bit = std::size_t{1} << a;
        for (std::size_t mask = 0; mask < n; ++mask) {
            if (mask & bit) coeff[mask] -= coeff[mask ^ bit];
        }
    }
    MobiusRepresentation::CoeffMap map;
    map.reserve(n);
    for (std::size_t mask = 1; mask < n; ++mask) {
        if (coeff[mask] != 0.0) map.emplace(SubsetKey{mask}, coeff[mask]);
    }
    return {m, std::move(map)};
}

double MobiusRepresentation::coeff(const SubsetKey& subset) const {
    auto it = coeffs_.find(subset);
    return it == coeffs_.end() ? 0.0 : it->second;
}

double zeta_reconstruct(const MobiusRepresentation& mobius, const SubsetKey& subset) {
    double sum = 0.0;
    for (const auto& [key, c] : mobius.coeffs()) {
        if (key.is_subset_of(subset)) sum += c;
    }
    return sum;
}

double shapley_value(const ExplicitMeasure& measure, std::size_t attribute) {
    const std::size_t m = measure.ground_size();
    if (attribute >= m) {
        throw InvalidSubsetError("attribute index out of range for Shapley value");
    }
    // weight(s) = s!(m-s-1)!/m! = 1 / (m * C(m-1, s))
    std::vector<double> weight(m);
    double binom = 1.0;  // C(m-1, s), exact for m <= 20
    for (std::size_t s = 0; s < m; ++s) {
        weight[s] = 1.0 / (static_cast<double>(m) * binom);
        binom = binom * static_cast<double>(m - 1 - s) / static_cast<double>(s + 1);
    }
    const std::uint64_t bit = std::uint64_t{1} << attribute;
    const std::uint64_t n = std::uint64_t{1} << m;
    double phi = 0.0;
    for (std::uint64_t mask = 0; mask < n; ++mask) {
        if (mask & bit) continue;
        const std::size_t s = static_cast<std::size_t>(std::popcount(mask));
        phi += weight[s] * (measure.value(mask | bit) - measure.value(mask));
    }
    return phi;
}

ExplicitMeasure materialize(const Measure& measure) {
    const std::size_t m = measure.ground_size();
    if (m > ExplicitMeasure::kMaxGroundSize) {
        throw CapacityError("cannot materialize a measure on more than 20 attributes");
    }
    const std::size_t n = std::size_t{1} << m;
    std::vector<double> table(n);
    for (std::size_t mask = 0; mask < n; ++mask) {
        table[mask] = measure.evaluate(SubsetKey{mask});
    }
    return {m, std::move(table)};
}

// --- File format ----------------------------------------------------------------

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_csv(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    std::stringstream ss(s);
    while (std::getline(ss, cur, ',')) out.push_back(trim(cur));
    if (!s.empty() && s.back() == ',') out.push_back("");
    return out;
}

double parse_double(const std::string& tok, const std::string& context) {
    double v = 0.0;
    const char* first = tok.data();
    const char* last = tok.data() + tok.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last) {
        throw ParseError("cannot parse number '" + tok + "' (" + context + ")");
    }
    return v;
}

}  // namespace

NamedMeasure load_measure(std::istream& in) {
    std::string line;
    std::vector<std::string> names;
    std::size_t line_no = 0;
    // header
    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        if (t.rfind("attrs:", 0) != 0) {
            throw ParseError("measure file must start with an 'attrs:' header line");
        }
        names = split_csv(t.substr(6));
        break;
    }
    if (names.empty()) throw ParseError("measure file has no attribute names");
    const std::size_t m = names.size();
    if (m > ExplicitMeasure::kMaxGroundSize) {
        throw CapacityError("measure file declares more than 20 attributes");
    }
    std::unordered_map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < m; ++i) {
        if (!index.emplace(names[i], i).second) {
            throw ParseError("duplicate attribute name '" + names[i] + "'");
        }
    }
    const std::size_t n = std::size_t{1} << m;
    std::vector<double> table(n, 0.0);
    std::vector<bool> seen(n, false);
    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos) {
            throw ParseError("line " + std::to_string(line_no) + ": expected 'subset=value'");
        }
        const std::string lhs = trim(t.substr(0, eq));
        std::uint64_t mask = 0;
        if (!lhs.empty()) {
            for (const std::string& tok : split_csv(lhs)) {
                auto it = index.find(tok);
                if (it == index.end()) {
                    throw ParseError("line " + std::to_string(line_no) + ": unknown attribute '" +
                                     tok + "'");
                }
                mask |= std::uint64_t{1} << it->second;
            }
        }
        if (seen[mask]) {
            throw ParseError("line " + std::to_string(line_no) + ": subset listed twice");
        }
        seen[mask] = true;
        table[mask] = parse_double(trim(t.substr(eq + 1)), "line " + std::to_string(line_no));
    }
    for (std::size_t mask = 0; mask < n; ++mask) {
        if (!seen[mask]) {
            std::string desc;
            SubsetKey{mask}.for_each([&](std::size_t i) {
                if (!desc.empty()) desc += ",";
                desc += names[i];
            });
            throw ParseError("measure file misses subset {" + desc + "}");
        }
    }
    return {std::move(names), ExplicitMeasure(m, std::move(table))};
}

NamedMeasure load_measure_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open measure file '" + path + "'");
    return load_measure(in);
}

void save_measure(std::ostream& out, const ExplicitMeasure& measure,
                  const std::vector<std::string>& attribute_names) {
    const std::size_t m = measure.ground_size();
    if (attribute_names.size() != m) {
        throw DimensionError("attribute name count does not match ground size");
    }
    out << "attrs:";
    for (std::size_t i = 0; i < m; ++i) out << (i ? "," : " ") << attribute_names[i];
    out << "\n";
    const std::size_t n = std::size_t{1} << m;
    char buf[64];
    for (std::size_t mask = 0; mask < n; ++mask) {
        std::string lhs;
        SubsetKey{mask}.for_each([&](std::size_t i) {
            if (!lhs.empty()) lhs += ",";
            lhs += attribute_names[i];
        });
        auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), measure.value(mask));
        out << lhs << "=" << std::string_view(buf, ptr - buf) << "\n";
    }
}

}  // namespace choquet
