// Command-line surface for the Choquet distance library: the built-in worked
// example with self-verification, pairwise distance matrices, the synthetic
// duplicate/correlated-feature experiments, and the KNN benchmark harness.

#include <CLI11.hpp>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "choquet/baselines.hpp"
#include "choquet/dataset.hpp"
#include "choquet/fuzzy_rough.hpp"
#include "choquet/integral.hpp"
#include "choquet/knn.hpp"
#include "choquet/measure.hpp"

using namespace choquet;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;

std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot open '" + path + "' for writing");
    out << content;
}

std::string matrix_csv(const std::vector<std::vector<double>>& m,
                       const std::vector<std::string>& row_names) {
    std::string out = "instance";
    for (const auto& name : row_names) out += "," + name;
    out += "\n";
    for (std::size_t i = 0; i < m.size(); ++i) {
        out += row_names[i];
        for (double v : m[i]) out += "," + format_double(v);
        out += "\n";
    }
    return out;
}

void print_matrix(const std::string& title, const std::vector<std::vector<double>>& m,
                  const std::vector<std::string>& names) {
    std::printf("%s\n", title.c_str());
    std::printf("%8s", "");
    for (const auto& n : names) std::printf(" %8s", n.c_str());
    std::printf("\n");
    for (std::size_t i = 0; i < m.size(); ++i) {
        std::printf("%8s", names[i].c_str());
        for (double v : m[i]) std::printf(" %8.3f", v);
        std::printf("\n");
    }
    std::printf("\n");
}

// --- example ------------------------------------------------------------------

// The four-patient decision system and its hand-picked measure, with every
// printed table checked against embedded expected values.
struct WorkedExample {
    Dataset data;
    std::shared_ptr<ExplicitMeasure> mu;
    std::vector<double> weights{0.2, 0.4, 0.4};

    WorkedExample() {
        data.attribute_names = {"a1", "a2", "a3"};
        data.values = {0.0, 0.9, 0.9, 0.9, 0.95, 0.95, 0.0, 1.0, 0.0, 0.9, 0.0, 0.0};
        data.labels = {"1", "1", "0", "0"};
        data.provenance = "worked-example";
        mu = std::make_shared<ExplicitMeasure>(
            3, std::vector<double>{0.0, 0.1, 0.2, 0.2, 0.2, 0.2, 0.5, 1.0});
    }
};

struct CellCheck {
    std::string cell;
    double computed;
    double expected;
};

class ExampleReport {
public:
    void add_matrix(const std::string& name, const std::vector<std::vector<double>>& computed,
                    const std::vector<std::vector<double>>& expected) {
        matrices_.emplace_back(name, computed);
        for (std::size_t i = 0; i < computed.size(); ++i) {
            for (std::size_t j = 0; j < computed[i].size(); ++j) {
                checks_.push_back({name + "[x" + std::to_string(i + 1) + ",x" +
                                       std::to_string(j + 1) + "]",
                                   computed[i][j], expected[i][j]});
            }
        }
    }

    void add_listing(const std::string& name, const std::vector<std::string>& labels,
                     const std::vector<double>& computed, const std::vector<double>& expected) {
        listings_.emplace_back(name, std::make_pair(labels, computed));
        for (std::size_t i = 0; i < computed.size(); ++i) {
            checks_.push_back({name + "(" + labels[i] + ")", computed[i], expected[i]});
        }
    }

    // 5e-3 covers the display rounding of the reference values.
    std::vector<CellCheck> failures(double tol = 5e-3 + 1e-12) const {
        std::vector<CellCheck> out;
        for (const auto& c : checks_) {
            if (std::abs(c.computed - c.expected) > tol) out.push_back(c);
        }
        return out;
    }

    void print_text() const {
        for (const auto& [name, labels_values] : listings_) {
            std::printf("%s:\n", name.c_str());
            const auto& [labels, values] = labels_values;
            for (std::size_t i = 0; i < labels.size(); ++i) {
                std::printf("  %-12s %8.4f\n", labels[i].c_str(), values[i]);
            }
            std::printf("\n");
        }
        const std::vector<std::string> xs{"x1", "x2", "x3", "x4"};
        for (const auto& [name, m] : matrices_) print_matrix(name, m, xs);
    }

    std::string to_json() const {
        nlohmann::ordered_json j;
        for (const auto& [name, labels_values] : listings_) {
            nlohmann::ordered_json entry;
            const auto& [labels, values] = labels_values;
            for (std::size_t i = 0; i < labels.size(); ++i) entry[labels[i]] = values[i];
            j["listings"][name] = entry;
        }
        for (const auto& [name, m] : matrices_) j["matrices"][name] = m;
        return j.dump(2);
    }

private:
    std::vector<CellCheck> checks_;
    std::vector<std::pair<std::string, std::vector<std::vector<double>>>> matrices_;
    std::vector<std::pair<std::string, std::pair<std::vector<std::string>, std::vector<double>>>>
        listings_;
};

int cmd_example(bool as_json, const std::string& out_path, bool inject_error) {
    const WorkedExample ex;
    const std::size_t n = ex.data.n_instances();

    const std::vector<std::string> subset_labels{"{}",      "{a1}",    "{a2}",    "{a1,a2}",
                                                 "{a3}",    "{a1,a3}", "{a2,a3}", "{a1,a2,a3}"};

    auto matrix_for = [&](const Measure& m) {
        std::vector<std::vector<double>> out(n, std::vector<double>(n, 0.0));
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                out[i][j] = out[j][i] = choquet_distance(ex.data.row(i), ex.data.row(j), m);
            }
        }
        return out;
    };

    ExampleReport report;

    // distances under the hand-picked measure and under the additive weights
    report.add_matrix("choquet distance (non-additive measure)", matrix_for(*ex.mu),
                      {{0.0, 0.135, 0.21, 0.9},
                       {0.135, 0.0, 0.23, 0.475},
                       {0.21, 0.23, 0.0, 0.2},
                       {0.9, 0.475, 0.2, 0.0}});
    report.add_matrix("weighted manhattan distance", matrix_for(AdditiveMeasure(ex.weights)),
                      {{0.0, 0.22, 0.4, 0.9},
                       {0.22, 0.0, 0.58, 0.76},
                       {0.4, 0.58, 0.0, 0.58},
                       {0.9, 0.76, 0.58, 0.0}});

    // Shapley attribution of the hand-picked measure
    std::vector<double> shapley(3);
    for (std::size_t a = 0; a < 3; ++a) shapley[a] = shapley_value(*ex.mu, a);
    report.add_listing("shapley", {"a1", "a2", "a3"}, shapley, {0.2, 0.4, 0.4});

    // gamma dependency measure, its dual and its symmetrization
    auto gamma_lazy = make_dependency_measure(std::make_shared<Dataset>(ex.data));
    auto gamma = std::make_shared<ExplicitMeasure>(materialize(*gamma_lazy));
    const MeasurePtr gamma_dual = dual(gamma);
    const MeasurePtr gamma_sym = mixture(gamma, 0.5);

    auto listing_for = [&](const Measure& m) {
        std::vector<double> out(8);
        for (std::uint64_t mask = 0; mask < 8; ++mask) out[mask] = m.evaluate(SubsetKey{mask});
        return out;
    };
    double injected = inject_error ? 0.1 : 0.0;
    report.add_listing("gamma", subset_labels, listing_for(*gamma),
                       {0.0, 0.0 + injected, 1.1, 2.0, 3.65, 3.65, 3.65, 3.65});
    report.add_listing("gamma dual", subset_labels, listing_for(*gamma_dual),
                       {0.0, 0.0, 0.0, 0.0, 1.65, 2.55, 3.65, 3.65});
    report.add_listing("gamma symmetrized", subset_labels, listing_for(*gamma_sym),
                       {0.0, 0.0, 0.55, 1.0, 2.65, 3.1, 3.65, 3.65});

    // alpha-Choquet distances under gamma for alpha = 0, 0.5, 1
    report.add_matrix("alpha-choquet distance (gamma, alpha=0)", matrix_for(*gamma),
                      {{0.0, 0.18, 3.28, 3.29},
                       {0.18, 0.0, 3.47, 3.47},
                       {3.28, 3.47, 0.0, 1.91},
                       {3.29, 3.47, 1.91, 0.0}});
    report.add_matrix("alpha-choquet distance (gamma, alpha=0.5)", matrix_for(*gamma_sym),
                      {{0.0, 0.18, 2.48, 3.29},
                       {0.18, 0.0, 2.95, 3.47},
                       {2.48, 2.95, 0.0, 0.96},
                       {3.29, 3.47, 0.96, 0.0}});
    report.add_matrix("alpha-choquet distance (gamma, alpha=1)", matrix_for(*gamma_dual),
                      {{0.0, 0.18, 1.69, 3.29},
                       {0.18, 0.0, 2.43, 3.47},
                       {1.69, 2.43, 0.0, 0.0},
                       {3.29, 3.47, 0.0, 0.0}});

    if (as_json) {
        const std::string j = report.to_json();
        if (out_path.empty()) {
            std::printf("%s\n", j.c_str());
        } else {
            write_file(out_path, j + "\n");
        }
    } else {
        report.print_text();
        if (!out_path.empty()) write_file(out_path, report.to_json() + "\n");
    }

    const std::vector<CellCheck> failures = report.failures();
    for (const auto& f : failures) {
        std::fprintf(stderr, "MISMATCH %s: computed %.6f, expected %.6f\n", f.cell.c_str(),
                     f.computed, f.expected);
    }
    if (!failures.empty()) return kExitValidation;
    std::printf("all embedded reference values reproduced\n");
    return kExitOk;
}

// --- distances ------------------------------------------------------------------

// Explicit measure loaded from a file, re-indexed to the dataset's attribute
// order.
ExplicitMeasure remap_measure(const NamedMeasure& named, const Dataset& ds) {
    const std::size_t m = ds.n_attributes();
    if (named.attribute_names.size() != m) {
        throw DimensionError("measure file has " + std::to_string(named.attribute_names.size()) +
                             " attributes, dataset has " + std::to_string(m));
    }
    std::vector<std::size_t> file_index(m);
    for (std::size_t a = 0; a < m; ++a) {
        const auto it = std::find(named.attribute_names.begin(), named.attribute_names.end(),
                                  ds.attribute_names[a]);
        if (it == named.attribute_names.end()) {
            throw ParseError("measure file misses dataset attribute '" + ds.attribute_names[a] +
                             "'");
        }
        file_index[a] = it - named.attribute_names.begin();
    }
    const std::size_t size = std::size_t{1} << m;
    std::vector<double> table(size);
    for (std::uint64_t mask = 0; mask < size; ++mask) {
        std::uint64_t file_mask = 0;
        for (std::size_t a = 0; a < m; ++a) {
            if (mask & (std::uint64_t{1} << a)) file_mask |= std::uint64_t{1} << file_index[a];
        }
        table[mask] = named.measure.value(file_mask);
    }
    return {m, std::move(table)};
}

struct DistancesOptions {
    std::string data_path;
    std::string measure_file;
    std::string measure_kind;  // gamma | delta | counting
    std::vector<double> weights;
    double alpha = 0.0;
    std::string out_path;
    std::string format = "csv";
};

int cmd_distances(const DistancesOptions& opt) {
    const auto data = std::make_shared<Dataset>(load_csv_file(opt.data_path));

    MeasurePtr measure;
    if (!opt.measure_file.empty()) {
        const NamedMeasure named = load_measure_file(opt.measure_file);
        auto explicit_m = std::make_shared<ExplicitMeasure>(remap_measure(named, *data));
        const MonotonicityReport mono = check_monotone(*explicit_m);
        if (!mono.monotone) {
            std::fprintf(stderr, "measure file is not monotone\n");
            return kExitValidation;
        }
        measure = explicit_m;
    } else if (!opt.weights.empty()) {
        if (opt.weights.size() != data->n_attributes()) {
            throw DimensionError("need one weight per attribute");
        }
        measure = std::make_shared<AdditiveMeasure>(opt.weights);
    } else if (opt.measure_kind == "counting") {
        measure = std::make_shared<CountingMeasure>(data->n_attributes());
    } else if (opt.measure_kind == "gamma") {
        measure = make_dependency_measure(data);
    } else if (opt.measure_kind == "delta") {
        measure = make_dependency_measure(data, {}, DependencyMode::Delta);
    } else {
        std::fprintf(stderr, "select a measure: --measure-file, --weights or --measure\n");
        return kExitUsage;
    }
    if (opt.alpha != 0.0) measure = mixture(measure, opt.alpha);

    std::vector<std::string> names;
    for (std::size_t i = 0; i < data->n_instances(); ++i) {
        names.push_back("x" + std::to_string(i + 1));
    }
    const std::size_t n = data->n_instances();
    std::vector<std::vector<double>> m(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            m[i][j] = m[j][i] = choquet_distance(data->row(i), data->row(j), *measure);
        }
    }

    std::string content;
    if (opt.format == "json") {
        nlohmann::ordered_json j;
        j["instances"] = names;
        j["matrix"] = m;
        content = j.dump(2) + "\n";
    } else {
        content = matrix_csv(m, names);
    }
    if (opt.out_path.empty()) {
        std::fputs(content.c_str(), stdout);
    } else {
        write_file(opt.out_path, content);
    }
    return kExitOk;
}

// --- measure export --------------------------------------------------------------

struct MeasureOptions {
    std::string data_path;
    std::string kind = "gamma";
    double alpha = 0.0;
    std::string out_path;
};

// Fits the dependency measure on a dataset, materializes it and writes the
// measure file format.
int cmd_measure(const MeasureOptions& opt) {
    const auto data = std::make_shared<Dataset>(load_csv_file(opt.data_path));
    MeasurePtr measure;
    if (opt.kind == "gamma") {
        measure = make_dependency_measure(data);
    } else if (opt.kind == "delta") {
        measure = make_dependency_measure(data, {}, DependencyMode::Delta);
    } else {
        measure = std::make_shared<CountingMeasure>(data->n_attributes());
    }
    if (opt.alpha != 0.0) measure = mixture(measure, opt.alpha);
    const ExplicitMeasure table = materialize(*measure);
    if (opt.out_path.empty()) {
        std::stringstream ss;
        save_measure(ss, table, data->attribute_names);
        std::fputs(ss.str().c_str(), stdout);
    } else {
        std::ofstream out(opt.out_path);
        if (!out) throw ParseError("cannot open '" + opt.out_path + "' for writing");
        save_measure(out, table, data->attribute_names);
    }
    return kExitOk;
}

// --- synthetic ---------------------------------------------------------------------

struct SyntheticOptions {
    std::string kind = "duplicates";
    int m_min = 0;
    int m_max = 15;
    double sigma = 0.1;
    std::size_t n_train = 500;
    std::size_t n_test = 5000;
    std::size_t k = 5;
    std::uint64_t seed = 42;
    std::string distances = "MAN,MI,MAH1,CFR:0.5";
    std::string out_path;
};

int cmd_synthetic(const SyntheticOptions& opt) {
    const bool duplicates = opt.kind == "duplicates";
    const std::vector<DistanceSpec> specs = DistanceSpec::parse_roster(opt.distances);

    std::string csv = "kind,m,distance,accuracy\n";
    for (int m = opt.m_min; m <= opt.m_max; ++m) {
        const auto train = std::make_shared<const Dataset>(
            duplicates ? synthetic_duplicates(opt.n_train, m, opt.seed)
                       : synthetic_correlated(opt.n_train, m, opt.sigma, opt.seed));
        const Dataset test = boundary_test_set(
            opt.n_test, opt.seed + 1, m,
            duplicates ? ExtraColumns::Duplicates : ExtraColumns::Correlated, opt.sigma);
        for (const DistanceSpec& spec : specs) {
            const FittedDistancePtr dist = fit_distance(spec, train);
            const std::vector<std::string> preds = knn_predict_all(train, test, opt.k, *dist);
            const double acc = accuracy(preds, test.labels);
            csv += opt.kind + "," + std::to_string(m) + "," + spec.name() + "," +
                   format_double(acc) + "\n";
            std::printf("%-11s m=%-3d %-8s accuracy %.4f\n", opt.kind.c_str(), m,
                        spec.name().c_str(), acc);
        }
    }
    if (!opt.out_path.empty()) write_file(opt.out_path, csv);
    return kExitOk;
}

// --- bench ---------------------------------------------------------------------------

struct BenchOptions {
    std::vector<std::string> data_paths;
    std::string distances = "MAN,CHI,MI,MAH1,MAH,MAMI,WFR,CFR:0,CFR:0.5,CFR:1";
    std::size_t k = 5;
    std::size_t folds = 5;
    std::uint64_t seed = 42;
    double shrinkage = 0.1;
    int mi_k = 3;
    std::string out_dir;
    std::string format = "json";
};

int cmd_bench(const BenchOptions& opt) {
    std::vector<DistanceSpec> specs = DistanceSpec::parse_roster(opt.distances);
    for (DistanceSpec& s : specs) {
        s.shrinkage = opt.shrinkage;
        s.mi_k = opt.mi_k;
    }
    if (!opt.out_dir.empty()) std::filesystem::create_directories(opt.out_dir);

    std::vector<EvalReport> reports;
    for (const std::string& path : opt.data_paths) {
        Dataset ds = load_csv_file(path);
        ds.provenance = std::filesystem::path(path).stem().string();
        EvalReport rep = cross_validate(ds, specs, opt.k, opt.folds, opt.seed);
        std::printf("%-16s", rep.dataset_name.c_str());
        for (double mean : rep.mean_accuracies) std::printf(" %6.3f", mean);
        std::printf("\n");
        if (!opt.out_dir.empty()) {
            const std::string stem = opt.out_dir + "/" + rep.dataset_name;
            write_file(stem + ".json", rep.to_json() + "\n");
            write_file(stem + ".csv", rep.to_csv());
        }
        reports.push_back(std::move(rep));
    }

    // aggregate rows: mean over datasets and the share of datasets at or above
    // the plain Manhattan baseline
    const std::size_t s_count = specs.size();
    std::vector<double> mean_row(s_count, 0.0);
    std::vector<double> ge_man(s_count, 0.0);
    std::size_t man_idx = 0;
    for (std::size_t s = 0; s < s_count; ++s) {
        if (specs[s].name() == "MAN") man_idx = s;
    }
    for (const EvalReport& rep : reports) {
        for (std::size_t s = 0; s < s_count; ++s) {
            mean_row[s] += rep.mean_accuracies[s];
            if (rep.mean_accuracies[s] >= rep.mean_accuracies[man_idx]) ge_man[s] += 1.0;
        }
    }
    for (std::size_t s = 0; s < s_count; ++s) {
        mean_row[s] /= static_cast<double>(reports.size());
        ge_man[s] /= static_cast<double>(reports.size());
    }
    std::printf("%-16s", "average");
    for (double v : mean_row) std::printf(" %6.3f", v);
    std::printf("\n%-16s", ">=MAN");
    for (double v : ge_man) std::printf(" %6.2f", v);
    std::printf("\n");

    // pairwise Wilcoxon over per-dataset means
    std::vector<std::vector<double>> pmat(s_count, std::vector<double>(s_count, 1.0));
    for (std::size_t i = 0; i < s_count; ++i) {
        for (std::size_t j = 0; j < s_count; ++j) {
            if (i == j) continue;
            std::vector<double> a, b;
            for (const EvalReport& rep : reports) {
                a.push_back(rep.mean_accuracies[i]);
                b.push_back(rep.mean_accuracies[j]);
            }
            pmat[i][j] = wilcoxon_signed_rank(a, b).p_value;
        }
    }

    if (!opt.out_dir.empty()) {
        std::string summary = "dataset";
        for (const auto& s : specs) summary += "," + s.name();
        summary += "\n";
        for (const EvalReport& rep : reports) {
            summary += rep.dataset_name;
            for (double mean : rep.mean_accuracies) summary += "," + format_double(mean);
            summary += "\n";
        }
        summary += "average";
        for (double v : mean_row) summary += "," + format_double(v);
        summary += "\nge_man";
        for (double v : ge_man) summary += "," + format_double(v);
        summary += "\n";
        write_file(opt.out_dir + "/summary.csv", summary);

        std::string pcsv = "distance";
        for (const auto& s : specs) pcsv += "," + s.name();
        pcsv += "\n";
        for (std::size_t i = 0; i < s_count; ++i) {
            pcsv += specs[i].name();
            for (double v : pmat[i]) pcsv += "," + format_double(v);
            pcsv += "\n";
        }
        write_file(opt.out_dir + "/pvalues.csv", pcsv);

        nlohmann::ordered_json j;
        j["seed"] = opt.seed;
        j["k"] = opt.k;
        j["folds"] = opt.folds;
        j["distances"] = nlohmann::json::array();
        for (const auto& s : specs) j["distances"].push_back(s.name());
        j["mean_over_datasets"] = mean_row;
        j["fraction_ge_man"] = ge_man;
        j["wilcoxon_p_values"] = pmat;
        write_file(opt.out_dir + "/aggregate.json", j.dump(2) + "\n");
    }
    return kExitOk;
}

// --- gen ------------------------------------------------------------------------------

struct GenOptions {
    std::string kind = "duplicates";
    std::size_t n = 500;
    std::size_t m = 5;
    double sigma = 0.1;
    std::uint64_t seed = 42;
    std::string out_path;
};

int cmd_gen(const GenOptions& opt) {
    Dataset ds;
    if (opt.kind == "duplicates") {
        ds = synthetic_duplicates(opt.n, opt.m, opt.seed);
    } else if (opt.kind == "correlated") {
        ds = synthetic_correlated(opt.n, opt.m, opt.sigma, opt.seed);
    } else {
        ds = boundary_test_set(opt.n, opt.seed);
    }
    if (opt.out_path.empty()) {
        std::stringstream ss;
        save_csv(ss, ds);
        std::fputs(ss.str().c_str(), stdout);
    } else {
        save_csv_file(opt.out_path, ds);
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Choquet-integral distances over monotone measures"};
    app.require_subcommand(1);

    // example
    bool ex_json = false;
    bool ex_inject = false;
    std::string ex_out;
    CLI::App* example = app.add_subcommand(
        "example", "recompute the built-in worked example and verify embedded values");
    example->add_flag("--json", ex_json, "emit machine-readable matrices");
    example->add_option("--out", ex_out, "write the JSON report to a file");
    example->add_flag("--inject-error", ex_inject, "perturb one embedded value (self-test)")
        ->group("");  // hidden

    // distances
    DistancesOptions dopt;
    CLI::App* distances = app.add_subcommand("distances", "pairwise distance matrix");
    distances->add_option("--data", dopt.data_path, "dataset CSV")->required();
    CLI::Option* opt_mfile =
        distances->add_option("--measure-file", dopt.measure_file, "explicit measure file");
    CLI::Option* opt_mkind = distances->add_option("--measure", dopt.measure_kind,
                                                   "gamma | delta | counting")
                                 ->check(CLI::IsMember({"gamma", "delta", "counting"}));
    CLI::Option* opt_weights =
        distances->add_option("--weights", dopt.weights, "additive measure weights");
    opt_mfile->excludes(opt_mkind)->excludes(opt_weights);
    opt_mkind->excludes(opt_weights);
    distances->add_option("--alpha", dopt.alpha, "mix the measure with its dual");
    distances->add_option("--out", dopt.out_path, "output file (default stdout)");
    distances->add_option("--format", dopt.format, "csv | json")
        ->check(CLI::IsMember({"csv", "json"}));

    // measure export
    MeasureOptions mopt;
    CLI::App* measure_cmd =
        app.add_subcommand("measure", "fit a dependency measure and write its table");
    measure_cmd->add_option("--data", mopt.data_path, "dataset CSV")->required();
    measure_cmd->add_option("--kind", mopt.kind, "gamma | delta | counting")
        ->check(CLI::IsMember({"gamma", "delta", "counting"}));
    measure_cmd->add_option("--alpha", mopt.alpha, "mix the measure with its dual");
    measure_cmd->add_option("--out", mopt.out_path, "measure file (default stdout)");

    // synthetic
    SyntheticOptions sopt;
    CLI::App* synthetic =
        app.add_subcommand("synthetic", "duplicate/correlated-feature experiment");
    synthetic->add_option("--kind", sopt.kind, "duplicates | correlated");
    synthetic->add_option("--m-min", sopt.m_min, "smallest number of extra columns");
    synthetic->add_option("--m-max", sopt.m_max, "largest number of extra columns");
    synthetic->add_option("--sigma", sopt.sigma, "noise level for correlated columns");
    synthetic->add_option("--n-train", sopt.n_train, "training instances");
    synthetic->add_option("--n-test", sopt.n_test, "boundary test instances");
    synthetic->add_option("--k", sopt.k, "neighbors");
    synthetic->add_option("--seed", sopt.seed, "RNG seed");
    synthetic->add_option("--distances", sopt.distances, "distance roster");
    synthetic->add_option("--out", sopt.out_path, "CSV output file");

    // bench
    BenchOptions bopt;
    CLI::App* bench = app.add_subcommand("bench", "cross-validated KNN benchmark");
    bench->add_option("--data", bopt.data_paths, "dataset CSV files")->required();
    bench->add_option("--distances", bopt.distances, "distance roster");
    bench->add_option("--k", bopt.k, "neighbors");
    bench->add_option("--folds", bopt.folds, "cross-validation folds");
    bench->add_option("--seed", bopt.seed, "RNG seed");
    bench->add_option("--shrinkage", bopt.shrinkage, "covariance shrinkage");
    bench->add_option("--mi-k", bopt.mi_k, "neighbors for MI estimation");
    bench->add_option("--out", bopt.out_dir, "output directory for report files");
    bench->add_option("--format", bopt.format, "csv | json")
        ->check(CLI::IsMember({"csv", "json"}));

    // gen
    GenOptions gopt;
    CLI::App* gen = app.add_subcommand("gen", "write a synthetic dataset as CSV");
    gen->add_option("--kind", gopt.kind, "duplicates | correlated | boundary");
    gen->add_option("--n", gopt.n, "instances");
    gen->add_option("--m", gopt.m, "extra columns");
    gen->add_option("--sigma", gopt.sigma, "noise level");
    gen->add_option("--seed", gopt.seed, "RNG seed");
    gen->add_option("--out", gopt.out_path, "output file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (example->parsed()) return cmd_example(ex_json, ex_out, ex_inject);
        if (distances->parsed()) return cmd_distances(dopt);
        if (synthetic->parsed()) return cmd_synthetic(sopt);
        if (bench->parsed()) return cmd_bench(bopt);
        if (gen->parsed()) return cmd_gen(gopt);
    } catch (const ParseError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitIo;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitValidation;
    }
    return kExitUsage;
}
