#include <doctest.h>

#include <cmath>
#include <sstream>

#include "choquet/dataset.hpp"
#include "test_support.hpp"

using namespace choquet;

#ifndef CHOQUET_DATA_DIR
#define CHOQUET_DATA_DIR "data"
#endif

TEST_CASE("load_csv reads the worked-example file") {
    const Dataset ds = load_csv_file(std::string(CHOQUET_DATA_DIR) + "/table1.csv");
    CHECK(ds.n_attributes() == 3);
    CHECK(ds.n_instances() == 4);
    CHECK(ds.attribute_names == std::vector<std::string>{"fever", "fatigue", "cough"});
    CHECK(ds.classes() == std::vector<std::string>{"0", "1"});
    CHECK(ds.value(1, 0) == 0.9);
    CHECK(ds.labels[3] == "0");
}

TEST_CASE("load_csv error reporting") {
    SUBCASE("non-numeric cell names row and column") {
        std::stringstream ss("a,b,class\n1,oops,x\n");
        try {
            load_csv(ss, "test.csv");
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            const std::string msg = e.what();
            CHECK(msg.find("row 2") != std::string::npos);
            CHECK(msg.find("'b'") != std::string::npos);
        }
    }
    SUBCASE("header-only file") {
        std::stringstream ss("a,b,class\n");
        CHECK_THROWS_AS(load_csv(ss), ParseError);
    }
    SUBCASE("empty file") {
        std::stringstream ss("");
        CHECK_THROWS_AS(load_csv(ss), ParseError);
    }
    SUBCASE("ragged row") {
        std::stringstream ss("a,b,class\n1,2,x\n1,x\n");
        CHECK_THROWS_AS(load_csv(ss), ParseError);
    }
}

TEST_CASE("csv round-trip is the identity") {
    const Dataset ds = testsupport::table1();
    std::stringstream ss;
    save_csv(ss, ds);
    const Dataset back = load_csv(ss);
    CHECK(back.values == ds.values);
    CHECK(back.labels == ds.labels);

    Rng rng(51);
    const Dataset rnd = testsupport::random_dataset(rng, 30, 5, 3);
    std::stringstream ss2;
    save_csv(ss2, rnd);
    const Dataset back2 = load_csv(ss2);
    CHECK(back2.values == rnd.values);  // shortest-round-trip formatting is exact
}

TEST_CASE("normalizer") {
    Dataset train;
    train.attribute_names = {"a", "b"};
    train.values = {0.0, 5.0, 0.9, 5.0};
    train.labels = {"x", "y"};
    const Normalizer nz = Normalizer::fit(train);
    const Dataset norm = nz.apply(train);
    CHECK(norm.value(0, 0) == 0.0);
    CHECK(norm.value(1, 0) == 1.0);  // 0.9 maps to the top of the range
    CHECK(norm.value(0, 1) == 0.0);  // constant column maps to 0
    CHECK(norm.value(1, 1) == 0.0);

    Dataset test = train;
    test.values = {-1.0, 7.0, 2.0, 4.0};
    const Dataset tnorm = nz.apply(test);
    CHECK(tnorm.value(0, 0) == 0.0);  // clamped below
    CHECK(tnorm.value(1, 0) == 1.0);  // clamped above
    for (double v : tnorm.values) {
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
    }
}

TEST_CASE("duplicate generator") {
    const Dataset ds = synthetic_duplicates(100, 4, 7);
    CHECK(ds.n_attributes() == 6);
    CHECK(ds.n_instances() == 100);
    for (std::size_t i = 0; i < ds.n_instances(); ++i) {
        for (std::size_t j = 2; j < 6; ++j) {
            CHECK(ds.value(i, j) == ds.value(i, 1));  // bit-exact copies
        }
        CHECK(ds.labels[i] == (ds.value(i, 0) >= ds.value(i, 1) ? "1" : "0"));
    }
    CHECK(synthetic_duplicates(50, 0, 7).n_attributes() == 2);

    const Dataset again = synthetic_duplicates(100, 4, 7);
    CHECK(again.values == ds.values);
    CHECK(again.labels == ds.labels);
    const Dataset other = synthetic_duplicates(100, 4, 8);
    CHECK(other.values != ds.values);
}

TEST_CASE("correlated generator") {
    const Dataset ds = synthetic_correlated(4000, 3, 0.1, 11);
    CHECK(ds.n_attributes() == 5);

    SUBCASE("sigma zero reduces to duplicates") {
        const Dataset z = synthetic_correlated(60, 2, 0.0, 3);
        const Dataset d = synthetic_duplicates(60, 2, 3);
        CHECK(z.values == d.values);
    }
    SUBCASE("noise is centred") {
        double mean = 0.0;
        for (std::size_t i = 0; i < ds.n_instances(); ++i) {
            mean += ds.value(i, 2) - ds.value(i, 1);
        }
        mean /= static_cast<double>(ds.n_instances());
        CHECK(std::abs(mean) < 3.0 * 0.1 / std::sqrt(4000.0));
    }
    SUBCASE("columns stay strongly correlated with their source") {
        // corr = sigma_U / sqrt(sigma_U^2 + sigma^2) with sigma_U^2 = 1/12,
        // about 0.945 for sigma = 0.1
        double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
        const double n = static_cast<double>(ds.n_instances());
        for (std::size_t i = 0; i < ds.n_instances(); ++i) {
            const double x = ds.value(i, 1), y = ds.value(i, 2);
            sx += x; sy += y; sxx += x * x; syy += y * y; sxy += x * y;
        }
        const double corr = (n * sxy - sx * sy) /
                            std::sqrt((n * sxx - sx * sx) * (n * syy - sy * sy));
        CHECK(corr > 0.9);
    }
}

TEST_CASE("boundary test set") {
    const Dataset ds = boundary_test_set(2000, 5);
    CHECK(ds.n_instances() == 2000);
    CHECK(ds.n_attributes() == 2);
    for (std::size_t i = 0; i < ds.n_instances(); ++i) {
        CHECK(std::abs(ds.value(i, 0) - ds.value(i, 1)) <= 0.2);
        CHECK(ds.labels[i] == (ds.value(i, 0) >= ds.value(i, 1) ? "1" : "0"));
    }
    const Dataset again = boundary_test_set(2000, 5);
    CHECK(again.values == ds.values);

    SUBCASE("appended duplicate columns match the training layout") {
        const Dataset dup = boundary_test_set(100, 5, 3, ExtraColumns::Duplicates);
        CHECK(dup.n_attributes() == 5);
        for (std::size_t i = 0; i < dup.n_instances(); ++i) {
            for (std::size_t j = 2; j < 5; ++j) CHECK(dup.value(i, j) == dup.value(i, 1));
        }
    }
    SUBCASE("appended correlated columns carry noise") {
        const Dataset cor = boundary_test_set(100, 5, 3, ExtraColumns::Correlated, 0.1);
        CHECK(cor.n_attributes() == 5);
        bool any_different = false;
        for (std::size_t i = 0; i < cor.n_instances(); ++i) {
            if (cor.value(i, 2) != cor.value(i, 1)) any_different = true;
        }
        CHECK(any_different);
    }
}
