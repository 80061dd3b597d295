#include <doctest.h>

#include <atomic>
#include <sstream>
#include <thread>

#include "choquet/measure.hpp"
#include "test_support.hpp"

using namespace choquet;
using testsupport::example_measure;
using testsupport::gamma_table1_measure;
using testsupport::random_monotone_measure;

namespace {
const SubsetKey kA1 = SubsetKey{}.with(0);
const SubsetKey kA2 = SubsetKey{}.with(1);
const SubsetKey kA3 = SubsetKey{}.with(2);
}  // namespace

TEST_CASE("subset key canonical form") {
    SubsetKey k = SubsetKey::from_indices({2, 0, 5});
    CHECK(k.count() == 3);
    CHECK(k.contains(0));
    CHECK(k.contains(2));
    CHECK(k.contains(5));
    CHECK_FALSE(k.contains(1));
    CHECK(k.indices() == std::vector<std::size_t>{0, 2, 5});
    CHECK(k == SubsetKey::from_indices({5, 2, 0}));
    CHECK(k.without(5) == SubsetKey::from_indices({0, 2}));
    CHECK(k.complement(6) == SubsetKey::from_indices({1, 3, 4}));
    CHECK(SubsetKey{}.empty());
    CHECK(SubsetKey::full(3).mask() == 0b111);
    CHECK(k.is_subset_of(SubsetKey::full(6)));
    CHECK_FALSE(SubsetKey::full(6).is_subset_of(k));
}

TEST_CASE("subset key beyond 64 attributes") {
    SubsetKey k;
    k.add(3);
    k.add(70);
    k.add(129);
    CHECK(k.count() == 3);
    CHECK(k.contains(70));
    CHECK_FALSE(k.contains(71));
    CHECK(k.indices() == std::vector<std::size_t>{3, 70, 129});
    CHECK(k == SubsetKey::from_indices({129, 3, 70}));
    CHECK(k.is_subset_of(SubsetKey::full(130)));
    const SubsetKey comp = k.complement(130);
    CHECK(comp.count() == 127);
    CHECK_FALSE(comp.contains(70));
    CHECK(comp.contains(71));
    CHECK(k.hash() != SubsetKey::from_indices({3, 70}).hash());
}

TEST_CASE("evaluate on the worked-example measure") {
    const ExplicitMeasure mu = example_measure();
    CHECK(mu.evaluate(SubsetKey::from_indices({1, 2})) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(mu.evaluate(SubsetKey{}) == 0.0);
    CHECK(mu.total() == doctest::Approx(1.0));

    const AdditiveMeasure w({0.2, 0.4, 0.4});
    CHECK(w.evaluate(SubsetKey::from_indices({0, 2})) == doctest::Approx(0.6).epsilon(1e-12));
    CHECK(w.evaluate(SubsetKey{}) == 0.0);

    CHECK_THROWS_AS(mu.evaluate(SubsetKey{}.with(3)), InvalidSubsetError);
}

TEST_CASE("explicit measure validation") {
    CHECK_THROWS_AS(ExplicitMeasure(2, {0.0, 0.1, 0.2}), DimensionError);
    CHECK_THROWS_AS(ExplicitMeasure(1, {0.5, 1.0}), DomainError);
    CHECK_THROWS_AS(ExplicitMeasure(1, {0.0, -1.0}), DomainError);
    CHECK_THROWS_AS(ExplicitMeasure(21, std::vector<double>(std::size_t{1} << 21, 0.0)),
                    CapacityError);
}

TEST_CASE("check_monotone") {
    CHECK(check_monotone(example_measure()).monotone);
    CHECK(check_monotone(materialize(CountingMeasure(4))).monotone);

    // mu({a1}) = 0.5 > mu({a1,a2}) = 0.3
    const ExplicitMeasure bad(2, {0.0, 0.5, 0.1, 0.3});
    const MonotonicityReport rep = check_monotone(bad);
    REQUIRE_FALSE(rep.monotone);
    REQUIRE(rep.violation.has_value());
    CHECK(rep.violation->first == SubsetKey{0b01});
    CHECK(rep.violation->second == SubsetKey{0b11});
}

TEST_CASE("dual measure values from the worked example") {
    auto gamma = std::make_shared<ExplicitMeasure>(gamma_table1_measure());
    const MeasurePtr d = dual(gamma);
    CHECK(d->evaluate(kA3) == doctest::Approx(1.65).epsilon(1e-12));
    CHECK(d->evaluate(SubsetKey::from_indices({0, 2})) == doctest::Approx(2.55).epsilon(1e-12));
    CHECK(d->evaluate(kA1) == doctest::Approx(0.0));
    CHECK(d->evaluate(SubsetKey::from_indices({0, 1})) == doctest::Approx(0.0));
    CHECK(d->evaluate(SubsetKey{}) == doctest::Approx(0.0));
    CHECK(d->total() == doctest::Approx(3.65));
}

TEST_CASE("dual involution and complement identity") {
    Rng rng(7);
    for (int rep = 0; rep < 50; ++rep) {
        auto mu = std::make_shared<ExplicitMeasure>(random_monotone_measure(rng, 5));
        const MeasurePtr d = dual(mu);
        const MeasurePtr dd = dual(d);
        CHECK(dd.get() == mu.get());  // collapses to the base object
        const double total = mu->total();
        for (std::uint64_t mask = 0; mask < 32; ++mask) {
            const SubsetKey a{mask};
            CHECK(d->evaluate(a) + mu->evaluate(a.complement(5)) ==
                  doctest::Approx(total).epsilon(1e-12));
        }
        // nested wrappers (no collapse) still invert pointwise
        const DualMeasure nested{std::make_shared<DualMeasure>(mu)};
        for (std::uint64_t mask = 0; mask < 32; ++mask) {
            CHECK(nested.evaluate(SubsetKey{mask}) ==
                  doctest::Approx(mu->evaluate(SubsetKey{mask})).epsilon(1e-12));
        }
    }
}

TEST_CASE("additive measures are self-dual") {
    Rng rng(8);
    for (int rep = 0; rep < 20; ++rep) {
        auto w = std::make_shared<AdditiveMeasure>(testsupport::random_vector(rng, 6));
        const MeasurePtr d = dual(w);
        for (std::uint64_t mask = 0; mask < 64; ++mask) {
            CHECK(d->evaluate(SubsetKey{mask}) ==
                  doctest::Approx(w->evaluate(SubsetKey{mask})).epsilon(1e-12));
        }
    }
}

TEST_CASE("mixture values from the worked example") {
    auto gamma = std::make_shared<ExplicitMeasure>(gamma_table1_measure());
    const MeasurePtr sym = mixture(gamma, 0.5);
    CHECK(sym->evaluate(kA3) == doctest::Approx(2.65).epsilon(1e-12));
    CHECK(sym->evaluate(SubsetKey::from_indices({0, 1})) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(sym->evaluate(kA2) == doctest::Approx(0.55).epsilon(1e-12));
    CHECK(sym->evaluate(SubsetKey::from_indices({0, 2})) == doctest::Approx(3.1).epsilon(1e-12));

    CHECK_THROWS_AS(mixture(gamma, -0.1), DomainError);
    CHECK_THROWS_AS(mixture(gamma, 1.5), DomainError);
}

TEST_CASE("mixture endpoints and self-duality") {
    Rng rng(9);
    auto mu = std::make_shared<ExplicitMeasure>(random_monotone_measure(rng, 5));
    const MeasurePtr zero = mixture(mu, 0.0);
    const MeasurePtr one = mixture(mu, 1.0);
    const MeasurePtr half = mixture(mu, 0.5);
    const MeasurePtr d = dual(mu);
    const MeasurePtr half_dual = dual(half);
    for (std::uint64_t mask = 0; mask < 32; ++mask) {
        const SubsetKey a{mask};
        CHECK(zero->evaluate(a) == mu->evaluate(a));  // exact endpoint
        CHECK(one->evaluate(a) == doctest::Approx(d->evaluate(a)).epsilon(1e-12));
        CHECK(half_dual->evaluate(a) == doctest::Approx(half->evaluate(a)).epsilon(1e-12));
    }
}

TEST_CASE("mobius transform") {
    SUBCASE("additive measures keep only singletons") {
        const AdditiveMeasure w({0.2, 0.4, 0.4});
        const MobiusRepresentation mob = mobius_transform(materialize(w));
        CHECK(mob.coeff(kA1) == doctest::Approx(0.2).epsilon(1e-12));
        CHECK(mob.coeff(kA2) == doctest::Approx(0.4).epsilon(1e-12));
        CHECK(mob.coeff(kA3) == doctest::Approx(0.4).epsilon(1e-12));
        for (std::uint64_t mask : {0b011u, 0b101u, 0b110u, 0b111u}) {
            CHECK(std::abs(mob.coeff(SubsetKey{mask})) < 1e-12);
        }
    }
    SUBCASE("worked example pair coefficient") {
        const MobiusRepresentation mob = mobius_transform(example_measure());
        CHECK(mob.coeff(SubsetKey::from_indices({1, 2})) == doctest::Approx(0.1).epsilon(1e-12));
    }
    SUBCASE("counting measure on two attributes") {
        const MobiusRepresentation mob = mobius_transform(materialize(CountingMeasure(2)));
        CHECK(mob.coeff(SubsetKey{0b01}) == doctest::Approx(1.0));
        CHECK(mob.coeff(SubsetKey{0b10}) == doctest::Approx(1.0));
        CHECK(mob.coeff(SubsetKey{0b11}) == doctest::Approx(0.0));
    }
    SUBCASE("matches the alternating-sum oracle") {
        Rng rng(10);
        for (int rep = 0; rep < 20; ++rep) {
            const ExplicitMeasure mu = random_monotone_measure(rng, 5);
            const MobiusRepresentation mob = mobius_transform(mu);
            for (std::uint64_t mask = 0; mask < 32; ++mask) {
                CHECK(mob.coeff(SubsetKey{mask}) ==
                      doctest::Approx(testsupport::mobius_coeff_bruteforce(mu, mask))
                          .epsilon(1e-9));
            }
        }
    }
}

TEST_CASE("zeta reconstruction") {
    SUBCASE("round-trips the worked example") {
        const ExplicitMeasure mu = example_measure();
        const MobiusRepresentation mob = mobius_transform(mu);
        for (std::uint64_t mask = 0; mask < 8; ++mask) {
            CHECK(zeta_reconstruct(mob, SubsetKey{mask}) ==
                  doctest::Approx(mu.value(mask)).epsilon(1e-12));
        }
    }
    SUBCASE("round-trips random monotone tables") {
        Rng rng(11);
        for (int rep = 0; rep < 30; ++rep) {
            const ExplicitMeasure mu = random_monotone_measure(rng, 6);
            const MobiusRepresentation mob = mobius_transform(mu);
            for (std::uint64_t mask = 0; mask < 64; ++mask) {
                CHECK(zeta_reconstruct(mob, SubsetKey{mask}) ==
                      doctest::Approx(mu.value(mask)).epsilon(1e-12));
            }
        }
    }
    SUBCASE("edge cases") {
        const MobiusRepresentation empty(2, {});
        CHECK(zeta_reconstruct(empty, SubsetKey{0b11}) == 0.0);
        MobiusRepresentation::CoeffMap coeffs;
        coeffs.emplace(SubsetKey{0b01}, 1.0);
        const MobiusRepresentation single(2, std::move(coeffs));
        CHECK(zeta_reconstruct(single, SubsetKey{0b11}) == 1.0);
    }
}

TEST_CASE("shapley values") {
    const ExplicitMeasure mu = example_measure();
    CHECK(shapley_value(mu, 0) == doctest::Approx(0.2).epsilon(1e-12));
    CHECK(shapley_value(mu, 1) == doctest::Approx(0.4).epsilon(1e-12));
    CHECK(shapley_value(mu, 2) == doctest::Approx(0.4).epsilon(1e-12));
    CHECK_THROWS_AS(shapley_value(mu, 3), InvalidSubsetError);

    SUBCASE("additive measure recovers its weights") {
        const AdditiveMeasure w({0.3, 0.1, 0.6});
        const ExplicitMeasure mat = materialize(w);
        for (std::size_t a = 0; a < 3; ++a) {
            CHECK(shapley_value(mat, a) == doctest::Approx(w.weights()[a]).epsilon(1e-12));
        }
    }
    SUBCASE("efficiency: values sum to the total") {
        Rng rng(12);
        for (int rep = 0; rep < 30; ++rep) {
            const ExplicitMeasure m = random_monotone_measure(rng, 6);
            double sum = 0.0;
            for (std::size_t a = 0; a < 6; ++a) sum += shapley_value(m, a);
            CHECK(sum == doctest::Approx(m.total()).epsilon(1e-12));
        }
    }
}

TEST_CASE("lazy measure memoizes") {
    std::atomic<int> evals{0};
    LazyMeasure lm(10, [&](const SubsetKey& s) {
        evals.fetch_add(1);
        return static_cast<double>(s.count());
    });
    const SubsetKey s = SubsetKey::from_indices({1, 4, 7});
    CHECK(lm.evaluate(s) == 3.0);
    CHECK(lm.evaluate(s) == 3.0);
    CHECK(evals.load() == 1);
    CHECK(lm.cache_entries() == 1);
    lm.evaluate(SubsetKey{}.with(2));
    CHECK(evals.load() == 2);
    CHECK(lm.cache_entries() == 2);
    CHECK_THROWS_AS(lm.evaluate(SubsetKey{}.with(10)), InvalidSubsetError);
}

TEST_CASE("lazy measure concurrent evaluation matches single-threaded") {
    for (std::size_t m : {std::size_t{10}, std::size_t{24}}) {  // dense and sparse storage
        auto evaluator = [m](const SubsetKey& s) {
            double v = 0.0;
            s.for_each([&](std::size_t i) { v += std::sqrt(static_cast<double>(i + 1)); });
            return v * static_cast<double>(m);
        };
        LazyMeasure reference(m, evaluator);
        LazyMeasure shared(m, evaluator);
        Rng rng(13);
        std::vector<SubsetKey> keys;
        for (int i = 0; i < 400; ++i) {
            keys.push_back(SubsetKey{rng.next() & ((std::uint64_t{1} << m) - 1)});
        }
        std::vector<double> expected;
        for (const auto& k : keys) expected.push_back(reference.evaluate(k));

        std::vector<std::thread> pool;
        std::atomic<bool> ok{true};
        for (int t = 0; t < 8; ++t) {
            pool.emplace_back([&, t] {
                for (std::size_t i = t % 4; i < keys.size(); ++i) {
                    if (shared.evaluate(keys[i]) != expected[i]) ok = false;
                }
            });
        }
        for (auto& th : pool) th.join();
        CHECK(ok.load());
        CHECK(shared.cache_entries() <= keys.size());
    }
}

TEST_CASE("instrumented measure counts calls") {
    auto mu = std::make_shared<ExplicitMeasure>(example_measure());
    InstrumentedMeasure probe(mu);
    probe.evaluate(kA1);
    probe.evaluate(kA1);
    probe.evaluate(kA2);
    CHECK(probe.calls() == 3);
    CHECK(probe.distinct_subsets() == 2);
    probe.reset();
    CHECK(probe.calls() == 0);
}

TEST_CASE("measure file round-trip and errors") {
    const ExplicitMeasure mu = example_measure();
    const std::vector<std::string> names = {"fever", "fatigue", "cough"};
    std::stringstream ss;
    save_measure(ss, mu, names);

    const NamedMeasure loaded = load_measure(ss);
    CHECK(loaded.attribute_names == names);
    for (std::uint64_t mask = 0; mask < 8; ++mask) {
        CHECK(loaded.measure.value(mask) == mu.value(mask));
    }

    SUBCASE("rejects unknown attributes") {
        std::stringstream bad("attrs: a,b\n=0\na=1\nb=1\na,c=2\n");
        CHECK_THROWS_AS(load_measure(bad), ParseError);
    }
    SUBCASE("rejects missing subsets") {
        std::stringstream bad("attrs: a,b\n=0\na=1\nb=1\n");
        CHECK_THROWS_AS(load_measure(bad), ParseError);
    }
    SUBCASE("rejects duplicate subsets") {
        std::stringstream bad("attrs: a,b\n=0\na=1\na=2\nb=1\na,b=2\n");
        CHECK_THROWS_AS(load_measure(bad), ParseError);
    }
    SUBCASE("rejects bad numbers") {
        std::stringstream bad("attrs: a\n=0\na=zzz\n");
        CHECK_THROWS_AS(load_measure(bad), ParseError);
    }
    SUBCASE("rejects a nonzero empty set") {
        std::stringstream bad("attrs: a\n=0.5\na=1\n");
        CHECK_THROWS_AS(load_measure(bad), DomainError);
    }
}

TEST_CASE("materialize reproduces a lazy measure") {
    LazyMeasure lm(4, [](const SubsetKey& s) { return 2.0 * static_cast<double>(s.count()); });
    const ExplicitMeasure mat = materialize(lm);
    for (std::uint64_t mask = 0; mask < 16; ++mask) {
        CHECK(mat.value(mask) == lm.evaluate(SubsetKey{mask}));
    }
}
