#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include <json.hpp>

#include "choquet/knn.hpp"
#include "test_support.hpp"

using namespace choquet;
using testsupport::random_dataset;
using testsupport::table1;

TEST_CASE("distance spec parsing") {
    CHECK(DistanceSpec::parse("MAN").kind == DistanceKind::Manhattan);
    CHECK(DistanceSpec::parse("MAH1").kind == DistanceKind::MahalanobisManhattan);
    const DistanceSpec cfr = DistanceSpec::parse("CFR:0.5");
    CHECK(cfr.kind == DistanceKind::FuzzyRoughChoquet);
    CHECK(cfr.alpha == 0.5);
    CHECK(DistanceSpec::parse("CFR").alpha == 0.0);
    CHECK(cfr.name() == "CFR:0.5");
    CHECK_THROWS_AS(DistanceSpec::parse("NOPE"), ParseError);
    CHECK_THROWS_AS(DistanceSpec::parse("CFR:1.5"), DomainError);
    CHECK_THROWS_AS(DistanceSpec::parse("MAN:3"), ParseError);

    const auto roster = DistanceSpec::parse_roster("CFR:0.5,MAN");
    CHECK(roster.size() == 2);
    CHECK(roster[0].alpha == 0.5);
    CHECK(roster[1].kind == DistanceKind::Manhattan);
}

TEST_CASE("knn on the worked example") {
    auto t1 = std::make_shared<Dataset>(table1());
    const FittedDistancePtr cfr0 = fit_distance(DistanceSpec::parse("CFR"), t1);

    // x3's nearest neighbour under the gamma Choquet distance is same-class
    CHECK(knn_predict(*t1, t1->row(2), 1, *cfr0) == "0");

    // distances reproduce the gamma distance table
    CHECK(cfr0->distance(t1->row(2), t1->row(3)) == doctest::Approx(1.91).epsilon(1e-12));
    CHECK(cfr0->distance(t1->row(0), t1->row(2)) == doctest::Approx(3.28500).epsilon(1e-9));

    // k = n: majority class of the whole set (tie 2-2 resolved by distance sum)
    const FittedDistancePtr man = fit_distance(DistanceSpec::parse("MAN"), t1);
    const std::string all = knn_predict(*t1, t1->row(0), 4, *man);
    CHECK((all == "0" || all == "1"));

    // query equal to a training instance, k=1: that instance's class
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(knn_predict(*t1, t1->row(i), 1, *man) == t1->labels[i]);
    }

    CHECK_THROWS_AS(knn_predict(*t1, t1->row(0), 0, *man), DomainError);
    CHECK_THROWS_AS(knn_predict(*t1, t1->row(0), 5, *man), DomainError);
}

TEST_CASE("knn is invariant under monotone distance transforms") {
    // rank dependence only: squaring a nonnegative distance cannot change
    // any prediction
    class Squared final : public FittedDistance {
    public:
        explicit Squared(FittedDistancePtr inner)
            : FittedDistance("squared"), inner_(std::move(inner)) {}
        double distance(std::span<const double> x, std::span<const double> y) const override {
            const double d = inner_->distance(x, y);
            return d * d;
        }

    private:
        FittedDistancePtr inner_;
    };

    // two classes and odd k: the majority is strict, so only ranks matter
    Rng rng(81);
    auto train = std::make_shared<Dataset>(random_dataset(rng, 40, 3, 2));
    const Dataset queries = random_dataset(rng, 25, 3, 2);
    const FittedDistancePtr man = fit_distance(DistanceSpec::parse("MAN"), train);
    const Squared sq(man);
    for (std::size_t q = 0; q < queries.n_instances(); ++q) {
        CHECK(knn_predict(*train, queries.row(q), 5, *man) ==
              knn_predict(*train, queries.row(q), 5, sq));
    }
}

TEST_CASE("training order does not change predictions") {
    Rng rng(82);
    auto train = std::make_shared<Dataset>(random_dataset(rng, 50, 4, 3));
    std::vector<std::size_t> perm(train->n_instances());
    std::iota(perm.begin(), perm.end(), 0);
    rng.shuffle(perm);
    auto shuffled = std::make_shared<Dataset>(train->subset(perm));
    const Dataset queries = random_dataset(rng, 30, 4, 2);
    for (const char* token : {"MAN", "CHI", "CFR:0.5"}) {
        const FittedDistancePtr a = fit_distance(DistanceSpec::parse(token), train);
        const FittedDistancePtr b = fit_distance(DistanceSpec::parse(token), shuffled);
        for (std::size_t q = 0; q < queries.n_instances(); ++q) {
            CHECK(knn_predict(*train, queries.row(q), 5, *a) ==
                  knn_predict(*shuffled, queries.row(q), 5, *b));
        }
    }
}

TEST_CASE("balanced accuracy") {
    CHECK(balanced_accuracy({"a", "b", "a"}, {"a", "b", "a"}) == 1.0);
    // constant predictor on a balanced 2-class set
    CHECK(balanced_accuracy({"a", "a", "a", "a"}, {"a", "a", "b", "b"}) == doctest::Approx(0.5));
    // three classes with recalls 1.0, 0.5, 0.0
    const std::vector<std::string> labels{"a", "a", "b", "b", "c", "c"};
    const std::vector<std::string> preds{"a", "a", "b", "c", "a", "b"};
    CHECK(balanced_accuracy(preds, labels) == doctest::Approx(0.5));
    // classes absent from the fold do not enter the mean
    CHECK(balanced_accuracy({"a", "a"}, {"a", "a"}) == 1.0);
    CHECK_THROWS_AS(balanced_accuracy({"a"}, {"a", "b"}), DimensionError);
}

TEST_CASE("stratified k-fold") {
    Rng rng(83);
    Dataset ds;
    ds.attribute_names = {"a"};
    for (int i = 0; i < 10; ++i) {
        ds.values.push_back(rng.uniform01());
        ds.labels.push_back(i % 2 ? "x" : "y");
    }
    const std::vector<int> folds = stratified_kfold(ds, 5, 42);
    REQUIRE(folds.size() == 10);
    std::vector<std::vector<int>> per_fold(5, std::vector<int>(2, 0));
    for (std::size_t i = 0; i < 10; ++i) {
        REQUIRE(folds[i] >= 0);
        REQUIRE(folds[i] < 5);
        ++per_fold[folds[i]][i % 2];
    }
    for (const auto& f : per_fold) {
        CHECK(f[0] == 1);  // one of each class per fold
        CHECK(f[1] == 1);
    }
    CHECK(stratified_kfold(ds, 5, 42) == folds);
    CHECK(stratified_kfold(ds, 5, 43) != folds);

    SUBCASE("per-class fold sizes differ by at most one") {
        const Dataset big = random_dataset(rng, 83, 2, 3);
        const std::vector<int> f = stratified_kfold(big, 5, 7);
        const auto ids = big.label_ids();
        for (std::size_t c = 0; c < 3; ++c) {
            std::vector<int> sizes(5, 0);
            for (std::size_t i = 0; i < big.n_instances(); ++i) {
                if (ids[i] == c) ++sizes[f[i]];
            }
            const auto [lo, hi] = std::minmax_element(sizes.begin(), sizes.end());
            CHECK(*hi - *lo <= 1);
        }
    }
}

TEST_CASE("wilcoxon signed-rank") {
    SUBCASE("identical samples are degenerate") {
        const std::vector<double> a{1.0, 2.0, 3.0};
        const WilcoxonResult r = wilcoxon_signed_rank(a, a);
        CHECK(r.degenerate);
        CHECK(r.p_value == 1.0);
        CHECK(r.n_nonzero == 0);
    }
    SUBCASE("constant positive shift, n = 10") {
        std::vector<double> a(10), b(10);
        for (int i = 0; i < 10; ++i) {
            b[i] = i * 0.37;
            a[i] = b[i] + 0.5;
        }
        const WilcoxonResult r = wilcoxon_signed_rank(a, b);
        CHECK(r.used == WilcoxonMethod::Exact);
        CHECK(r.statistic == doctest::Approx(55.0));
        CHECK(r.p_value == doctest::Approx(0.001953125).epsilon(1e-12));
    }
    SUBCASE("antisymmetric differences sit near the centre") {
        std::vector<double> a, b;
        for (int i = 1; i <= 5; ++i) {
            a.push_back(i);
            b.push_back(i + 0.1 * i);
            a.push_back(-i);
            b.push_back(-i - 0.1 * i);
        }
        const WilcoxonResult r = wilcoxon_signed_rank(a, b);
        CHECK(r.p_value > 0.8);
    }
    SUBCASE("matches an independent enumeration oracle for n <= 10") {
        Rng rng(84);
        const std::vector<double> grid{-2.0, -1.0, -0.5, 0.5, 1.0, 2.0, 0.0};
        for (int rep = 0; rep < 200; ++rep) {
            const std::size_t n = 1 + rng.below(10);
            std::vector<double> a(n), b(n);
            for (std::size_t i = 0; i < n; ++i) {
                a[i] = grid[rng.below(grid.size())];
                b[i] = 0.0;
            }
            const WilcoxonResult r = wilcoxon_signed_rank(a, b, WilcoxonMethod::Exact);

            // oracle: enumerate all sign assignments of the nonzero |d| ranks
            std::vector<double> d;
            for (std::size_t i = 0; i < n; ++i) {
                if (a[i] != 0.0) d.push_back(a[i]);
            }
            if (d.empty()) {
                CHECK(r.degenerate);
                continue;
            }
            const std::size_t nn = d.size();
            std::vector<double> ranks(nn);
            {
                std::vector<std::size_t> idx(nn);
                std::iota(idx.begin(), idx.end(), 0);
                std::sort(idx.begin(), idx.end(), [&](std::size_t i, std::size_t j) {
                    return std::abs(d[i]) < std::abs(d[j]);
                });
                std::size_t i = 0;
                while (i < nn) {
                    std::size_t j = i;
                    while (j < nn && std::abs(d[idx[j]]) == std::abs(d[idx[i]])) ++j;
                    const double avg = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
                    for (std::size_t t = i; t < j; ++t) ranks[idx[t]] = avg;
                    i = j;
                }
            }
            double w_obs = 0.0;
            for (std::size_t i = 0; i < nn; ++i) {
                if (d[i] > 0) w_obs += ranks[i];
            }
            std::size_t le = 0, ge = 0;
            for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << nn); ++mask) {
                double w = 0.0;
                for (std::size_t i = 0; i < nn; ++i) {
                    if (mask & (std::uint64_t{1} << i)) w += ranks[i];
                }
                if (w <= w_obs + 1e-12) ++le;
                if (w >= w_obs - 1e-12) ++ge;
            }
            const double denom = std::pow(2.0, static_cast<double>(nn));
            const double p_oracle = std::min(1.0, 2.0 * std::min(le / denom, ge / denom));
            CHECK(r.statistic == doctest::Approx(w_obs).epsilon(1e-12));
            CHECK(r.p_value == doctest::Approx(p_oracle).epsilon(1e-12));
        }
    }
    SUBCASE("approximation tracks the exact distribution for n in [15, 25]") {
        Rng rng(85);
        for (int rep = 0; rep < 40; ++rep) {
            const std::size_t n = 15 + rng.below(11);
            std::vector<double> a(n), b(n);
            for (std::size_t i = 0; i < n; ++i) {
                a[i] = rng.uniform(-1.0, 1.0);
                b[i] = rng.uniform(-1.0, 1.0);
            }
            const double pe = wilcoxon_signed_rank(a, b, WilcoxonMethod::Exact).p_value;
            const double pa = wilcoxon_signed_rank(a, b, WilcoxonMethod::NormalApprox).p_value;
            CHECK(std::abs(pe - pa) < 0.02);
        }
    }
}

TEST_CASE("cross validation") {
    SUBCASE("single-attribute data: weighted and Choquet variants coincide") {
        Rng rng(86);
        const Dataset ds = random_dataset(rng, 40, 1, 2);
        const std::vector<DistanceSpec> specs = DistanceSpec::parse_roster("WFR,CFR:0,CFR:0.5,CFR:1");
        const EvalReport rep = cross_validate(ds, specs, 5, 5, 42);
        for (std::size_t f = 0; f < 5; ++f) {
            for (std::size_t s = 1; s < specs.size(); ++s) {
                CHECK(rep.fold_accuracies[s][f] == rep.fold_accuracies[0][f]);
            }
        }
    }
    SUBCASE("duplicated columns leave the Choquet accuracies unchanged") {
        Rng rng(87);
        const Dataset ds = random_dataset(rng, 40, 3, 2);
        Dataset dup = ds;
        dup.attribute_names.push_back("copy");
        dup.values.clear();
        for (std::size_t i = 0; i < ds.n_instances(); ++i) {
            for (std::size_t a = 0; a < 3; ++a) dup.values.push_back(ds.value(i, a));
            dup.values.push_back(ds.value(i, 2));
        }
        const std::vector<DistanceSpec> specs = DistanceSpec::parse_roster("CFR:0.5");
        const EvalReport r1 = cross_validate(ds, specs, 5, 5, 42);
        const EvalReport r2 = cross_validate(dup, specs, 5, 5, 42);
        for (std::size_t f = 0; f < 5; ++f) {
            CHECK(r2.fold_accuracies[0][f] ==
                  doctest::Approx(r1.fold_accuracies[0][f]).epsilon(1e-12));
        }
    }
    SUBCASE("report structure and determinism") {
        Rng rng(88);
        const Dataset ds = random_dataset(rng, 30, 2, 2);
        const std::vector<DistanceSpec> specs = DistanceSpec::parse_roster("MAN,CHI");
        const EvalReport rep = cross_validate(ds, specs, 3, 5, 7);
        CHECK(rep.distance_names == std::vector<std::string>{"MAN", "CHI"});
        CHECK(rep.mean_accuracies.size() == 2);
        CHECK(rep.p_values.size() == 2);
        CHECK(rep.seed == 7);
        for (double m : rep.mean_accuracies) {
            CHECK(m >= 0.0);
            CHECK(m <= 1.0);
        }
        const EvalReport again = cross_validate(ds, specs, 3, 5, 7);
        CHECK(again.to_json() == rep.to_json());
        CHECK(again.to_csv() == rep.to_csv());
        CHECK(again.fold_digest == rep.fold_digest);

        const auto parsed = nlohmann::json::parse(rep.to_json());
        CHECK(parsed["folds"] == 5);
        CHECK(parsed["mean_balanced_accuracies"].size() == 2);
        CHECK(parsed["wilcoxon_p_values"].size() == 2);
    }
}

TEST_CASE("manhattan equals the counting-measure Choquet KNN fold-for-fold") {
    class CountingChoquet final : public FittedDistance {
    public:
        explicit CountingChoquet(std::size_t m)
            : FittedDistance("counting"), counting_(m) {}
        double distance(std::span<const double> x, std::span<const double> y) const override {
            return choquet_distance(x, y, counting_);
        }

    private:
        CountingMeasure counting_;
    };

    Rng rng(89);
    auto train = std::make_shared<Dataset>(random_dataset(rng, 60, 4, 2));
    const Dataset queries = random_dataset(rng, 40, 4, 2);
    const FittedDistancePtr man = fit_distance(DistanceSpec::parse("MAN"), train);
    const CountingChoquet cc(4);
    const auto a = knn_predict_all(train, queries, 5, *man);
    const auto b = knn_predict_all(train, queries, 5, cc);
    CHECK(a == b);
}
