#include "choquet/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "choquet/rng.hpp"

namespace choquet {

std::vector<std::string> Dataset::classes() const {
    std::vector<std::string> out(labels);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<std::size_t> Dataset::label_ids() const {
    const std::vector<std::string> cls = classes();
    std::vector<std::size_t> ids(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i) {
        ids[i] = std::lower_bound(cls.begin(), cls.end(), labels[i]) - cls.begin();
    }
    return ids;
}

Dataset Dataset::subset(const std::vector<std::size_t>& instance_indices) const {
    Dataset out;
    out.attribute_names = attribute_names;
    out.provenance = provenance;
    const std::size_t m = n_attributes();
    out.values.reserve(instance_indices.size() * m);
    out.labels.reserve(instance_indices.size());
    for (std::size_t i : instance_indices) {
        const auto r = row(i);
        out.values.insert(out.values.end(), r.begin(), r.end());
        out.labels.push_back(labels[i]);
    }
    return out;
}

Dataset Dataset::without_column(std::size_t attribute) const {
    Dataset out;
    out.provenance = provenance;
    const std::size_t m = n_attributes();
    for (std::size_t a = 0; a < m; ++a) {
        if (a != attribute) out.attribute_names.push_back(attribute_names[a]);
    }
    out.labels = labels;
    out.values.reserve(n_instances() * (m - 1));
    for (std::size_t i = 0; i < n_instances(); ++i) {
        for (std::size_t a = 0; a < m; ++a) {
            if (a != attribute) out.values.push_back(value(i, a));
        }
    }
    return out;
}

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_comma(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    std::stringstream ss(line);
    while (std::getline(ss, cur, ',')) out.push_back(trim(cur));
    if (!line.empty() && line.back() == ',') out.push_back("");
    return out;
}

std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

}  // namespace

Dataset load_csv(std::istream& in, const std::string& origin) {
    std::string line;
    if (!std::getline(in, line)) {
        throw ParseError(origin + ": empty file");
    }
    const std::vector<std::string> header = split_comma(line);
    if (header.size() < 2) {
        throw ParseError(origin + ": header needs at least one feature column and a decision column");
    }
    Dataset ds;
    ds.provenance = origin;
    ds.attribute_names.assign(header.begin(), header.end() - 1);
    const std::size_t m = ds.attribute_names.size();
    std::size_t row_no = 1;
    while (std::getline(in, line)) {
        ++row_no;
        if (trim(line).empty()) continue;
        const std::vector<std::string> cells = split_comma(line);
        if (cells.size() != m + 1) {
            throw ParseError(origin + ": row " + std::to_string(row_no) + " has " +
                             std::to_string(cells.size()) + " cells, expected " +
                             std::to_string(m + 1));
        }
        for (std::size_t c = 0; c < m; ++c) {
            double v = 0.0;
            const std::string& tok = cells[c];
            auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
            if (ec != std::errc{} || ptr != tok.data() + tok.size()) {
                throw ParseError(origin + ": row " + std::to_string(row_no) + ", column '" +
                                 ds.attribute_names[c] + "': cannot parse '" + tok + "' as a number");
            }
            if (std::isnan(v) || std::isinf(v)) {
                throw ParseError(origin + ": row " + std::to_string(row_no) + ", column '" +
                                 ds.attribute_names[c] + "': non-finite value");
            }
            ds.values.push_back(v);
        }
        ds.labels.push_back(cells[m]);
    }
    if (ds.labels.empty()) {
        throw ParseError(origin + ": no data rows");
    }
    return ds;
}

Dataset load_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'");
    return load_csv(in, path);
}

void save_csv(std::ostream& out, const Dataset& dataset) {
    for (const auto& name : dataset.attribute_names) out << name << ",";
    out << "class\n";
    const std::size_t m = dataset.n_attributes();
    for (std::size_t i = 0; i < dataset.n_instances(); ++i) {
        for (std::size_t a = 0; a < m; ++a) out << format_double(dataset.value(i, a)) << ",";
        out << dataset.labels[i] << "\n";
    }
}

void save_csv_file(const std::string& path, const Dataset& dataset) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot open '" + path + "' for writing");
    save_csv(out, dataset);
}

// --- Normalizer ---------------------------------------------------------------

Normalizer Normalizer::fit(const Dataset& train) {
    if (train.n_instances() == 0) throw InsufficientDataError("cannot fit normalizer on empty data");
    const std::size_t m = train.n_attributes();
    Normalizer nz;
    nz.min_.assign(m, std::numeric_limits<double>::infinity());
    nz.max_.assign(m, -std::numeric_limits<double>::infinity());
    for (std::size_t i = 0; i < train.n_instances(); ++i) {
        for (std::size_t a = 0; a < m; ++a) {
            nz.min_[a] = std::min(nz.min_[a], train.value(i, a));
            nz.max_[a] = std::max(nz.max_[a], train.value(i, a));
        }
    }
    return nz;
}

Dataset Normalizer::apply(const Dataset& dataset) const {
    if (dataset.n_attributes() != min_.size()) {
        throw DimensionError("normalizer fitted on a different attribute count");
    }
    Dataset out = dataset;
    const std::size_t m = min_.size();
    for (std::size_t i = 0; i < out.n_instances(); ++i) {
        for (std::size_t a = 0; a < m; ++a) {
            const double range = max_[a] - min_[a];
            double v = range > 0.0 ? (out.value(i, a) - min_[a]) / range : 0.0;
            v = std::clamp(v, 0.0, 1.0);
            out.values[i * m + a] = v;
        }
    }
    return out;
}

// --- Synthetic generators -------------------------------------------------------

namespace {

Dataset synthetic_base(std::size_t n, std::size_t m_extra, bool exact_duplicates, double sigma,
                       std::uint64_t seed, const std::string& provenance) {
    Rng rng(seed);
    Dataset ds;
    ds.provenance = provenance;
    ds.attribute_names = {"a1", "a2"};
    for (std::size_t j = 0; j < m_extra; ++j) {
        ds.attribute_names.push_back("a" + std::to_string(j + 3));
    }
    const std::size_t m = ds.attribute_names.size();
    ds.values.reserve(n * m);
    ds.labels.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double a1 = rng.uniform01();
        const double a2 = rng.uniform01();
        ds.values.push_back(a1);
        ds.values.push_back(a2);
        for (std::size_t j = 0; j < m_extra; ++j) {
            ds.values.push_back(exact_duplicates ? a2 : a2 + sigma * rng.normal());
        }
        ds.labels.push_back(a1 >= a2 ? "1" : "0");
    }
    return ds;
}

}  // namespace

Dataset synthetic_duplicates(std::size_t n_train, std::size_t m_dup, std::uint64_t seed) {
    return synthetic_base(n_train, m_dup, true, 0.0, seed,
                          "synthetic-duplicates(m=" + std::to_string(m_dup) + ")");
}

Dataset synthetic_correlated(std::size_t n_train, std::size_t m_corr, double sigma,
                             std::uint64_t seed) {
    if (sigma == 0.0) return synthetic_duplicates(n_train, m_corr, seed);
    return synthetic_base(n_train, m_corr, false, sigma, seed,
                          "synthetic-correlated(m=" + std::to_string(m_corr) + ")");
}

Dataset boundary_test_set(std::size_t n, std::uint64_t seed, std::size_t m_extra,
                          ExtraColumns kind, double sigma) {
    Rng rng(seed);
    Dataset ds;
    ds.provenance = "boundary-test-set";
    ds.attribute_names = {"a1", "a2"};
    for (std::size_t j = 0; j < m_extra; ++j) {
        ds.attribute_names.push_back("a" + std::to_string(j + 3));
    }
    for (std::size_t i = 0; i < n; ++i) {
        const double y = rng.uniform01();
        const double a1 = y + rng.uniform(-0.1, 0.1);
        const double a2 = y + rng.uniform(-0.1, 0.1);
        ds.values.push_back(a1);
        ds.values.push_back(a2);
        for (std::size_t j = 0; j < m_extra; ++j) {
            const bool dup = kind == ExtraColumns::Duplicates;
            ds.values.push_back(dup ? a2 : a2 + sigma * rng.normal());
        }
        ds.labels.push_back(a1 >= a2 ? "1" : "0");
    }
    return ds;
}

}  // namespace choquet
