#include "fuzzyboost/dataset.hpp"

#include "support.hpp"

#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

using namespace fuzzyboost;
using test_support::TempDir;
using test_support::write_file;

TEST_SUITE_BEGIN("dataset");

TEST_CASE("load_csv parses a small file with the last column as target") {
    TempDir dir;
    const auto path = dir.file("small.csv");
    write_file(path, "a,b,y\n1,2,3\n4,5,6\n7,8,9\n");

    const Dataset dataset = load_csv(path);
    CHECK(dataset.row_count() == 3);
    CHECK(dataset.feature_count() == 2);
    CHECK(dataset.targets[0] == 3.0);
    CHECK(dataset.targets[1] == 6.0);
    CHECK(dataset.targets[2] == 9.0);
    CHECK(dataset.features(2, 0) == 7.0);
    CHECK(dataset.feature_names == std::vector<std::string>{"a", "b"});
    CHECK(dataset.target_name == "y");
}

TEST_CASE("load_csv selects the target column by name") {
    TempDir dir;
    const auto path = dir.file("named.csv");
    write_file(path, "a,y,b\n1,10,2\n3,20,4\n");

    const Dataset dataset = load_csv(path, "y");
    CHECK(dataset.targets[0] == 10.0);
    CHECK(dataset.targets[1] == 20.0);
    CHECK(dataset.feature_names == std::vector<std::string>{"a", "b"});
    CHECK(dataset.features(1, 1) == 4.0);
}

TEST_CASE("load_csv error reporting") {
    TempDir dir;

    SUBCASE("missing file") {
        CHECK_THROWS_AS(load_csv(dir.file("nope.csv")), std::invalid_argument);
    }
    SUBCASE("unparseable cell names line and column") {
        const auto path = dir.file("bad.csv");
        write_file(path, "a,b,y\n1,2,3\n4,abc,6\n");
        try {
            load_csv(path);
            FAIL("expected a parse error");
        } catch (const std::invalid_argument& error) {
            const std::string message = error.what();
            CHECK(message.find("line 3") != std::string::npos);
            CHECK(message.find("column 'b'") != std::string::npos);
        }
    }
    SUBCASE("header only is an empty dataset") {
        const auto path = dir.file("empty.csv");
        write_file(path, "a,b,y\n");
        CHECK_THROWS_AS(load_csv(path), std::invalid_argument);
    }
    SUBCASE("unknown target column") {
        const auto path = dir.file("target.csv");
        write_file(path, "a,y\n1,2\n");
        CHECK_THROWS_WITH_AS(load_csv(path, "zzz"), doctest::Contains("zzz"),
                             std::invalid_argument);
    }
    SUBCASE("duplicate column names") {
        const auto path = dir.file("dup.csv");
        write_file(path, "a,a,y\n1,2,3\n");
        CHECK_THROWS_AS(load_csv(path), std::invalid_argument);
    }
    SUBCASE("non-finite cells rejected") {
        const auto path = dir.file("inf.csv");
        write_file(path, "a,y\ninf,2\n");
        CHECK_THROWS_AS(load_csv(path), std::invalid_argument);
    }
}

TEST_CASE("generate_synthetic evaluates the curve exactly") {
    // expected values computed independently from the closed form
    const Dataset at_two = generate_synthetic(3, 0.0, 4.0);  // x = 0, 2, 4
    CHECK(at_two.features(1, 0) == 2.0);
    CHECK(at_two.targets[1] == doctest::Approx(3.0519282386214046).epsilon(1e-13));
    CHECK(at_two.targets[0] == 1.0);  // sin(0) + sqrt(0) + exp(0)

    const Dataset paper_sized = generate_synthetic(4000, 1.0, 4000.0);
    CHECK(paper_sized.row_count() == 4000);
    CHECK(paper_sized.feature_count() == 1);
    CHECK(paper_sized.features(0, 0) == 1.0);
    CHECK(paper_sized.features(3999, 0) == 4000.0);
}

TEST_CASE("generate_synthetic matches the closed form at random points") {
    const Dataset dataset = generate_synthetic(257, 0.5, 123.0);
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<Eigen::Index> pick(0, dataset.row_count() - 1);
    for (int i = 0; i < 100; ++i) {
        const Eigen::Index r = pick(rng);
        const double x = dataset.features(r, 0);
        const double expected = std::sin(x) + std::sqrt(x / 2.0) + std::exp(x / 15.0);
        CHECK(dataset.targets[r] == doctest::Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("generate_synthetic input validation") {
    CHECK_THROWS_AS(generate_synthetic(1, 0.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(generate_synthetic(10, -1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(generate_synthetic(10, 2.0, 1.0), std::invalid_argument);
}

TEST_CASE("split follows the 2:1 train:validation rule") {
    std::mt19937_64 rng(3);
    const Dataset dataset = test_support::toy_dataset(rng, 9);
    const SplitIndices indices = split(dataset, 1.0 / 3.0, 99);
    CHECK(indices.test.size() == 3);
    CHECK(indices.validation.size() == 2);
    CHECK(indices.train.size() == 4);
    indices.validate(9);
}

TEST_CASE("split is deterministic and seed-sensitive") {
    std::mt19937_64 rng(4);
    const Dataset dataset = test_support::toy_dataset(rng, 120);
    const SplitIndices a = split(dataset, 0.3, 7);
    const SplitIndices b = split(dataset, 0.3, 7);
    CHECK(a.train == b.train);
    CHECK(a.validation == b.validation);
    CHECK(a.test == b.test);

    const SplitIndices c = split(dataset, 0.3, 8);
    CHECK(a.test != c.test);
}

TEST_CASE("split partitions cover every row exactly once") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        const Eigen::Index n = 20 + static_cast<Eigen::Index>(rng() % 200);
        const Dataset dataset = test_support::toy_dataset(rng, n);
        const double fraction = 0.15 + 0.5 * (static_cast<double>(rng() % 100) / 100.0);
        const SplitIndices indices = split(dataset, fraction, rng());
        CHECK_NOTHROW(indices.validate(n));
        std::set<Eigen::Index> all(indices.train.begin(), indices.train.end());
        all.insert(indices.validation.begin(), indices.validation.end());
        all.insert(indices.test.begin(), indices.test.end());
        CHECK(all.size() == static_cast<std::size_t>(n));
    }
}

TEST_CASE("split rejects fractions that starve the train set") {
    std::mt19937_64 rng(6);
    const Dataset dataset = test_support::toy_dataset(rng, 12);
    CHECK_THROWS_AS(split(dataset, 0.95, 1), std::invalid_argument);
    CHECK_THROWS_AS(split(dataset, 0.5, 1, /*required_train_rows=*/10), std::invalid_argument);
    CHECK_THROWS_AS(split(dataset, 0.0, 1), std::invalid_argument);
    CHECK_THROWS_AS(split(dataset, 1.0, 1), std::invalid_argument);
}

TEST_CASE("fit_scaler computes population statistics") {
    Dataset dataset;
    dataset.features.resize(3, 2);
    dataset.features << 1.0, 5.0, 2.0, 5.0, 3.0, 5.0;
    dataset.targets.resize(3);
    dataset.targets << 10.0, 20.0, 30.0;
    dataset.feature_names = {"a", "const"};

    const StandardScaler scaler = fit_scaler(dataset, {0, 1, 2});
    CHECK(scaler.feature_means[0] == doctest::Approx(2.0));
    CHECK(scaler.feature_stds[0] == doctest::Approx(0.816496580927726).epsilon(1e-12));
    CHECK_FALSE(scaler.feature_constant[0]);

    const Eigen::MatrixXd transformed = scaler.transform_features(dataset.features);
    CHECK(transformed(0, 0) == doctest::Approx(-1.224744871391589).epsilon(1e-12));
    CHECK(transformed(1, 0) == doctest::Approx(0.0));
    CHECK(transformed(2, 0) == doctest::Approx(1.224744871391589).epsilon(1e-12));

    // constant column: identity transform around the mean, flag set
    CHECK(scaler.feature_constant[1]);
    CHECK(scaler.feature_stds[1] == 1.0);
    CHECK(transformed(0, 1) == 0.0);
    CHECK(transformed(2, 1) == 0.0);
}

TEST_CASE("scaler round trip is exact to 1e-12 relative") {
    std::mt19937_64 rng(7);
    const Dataset dataset = test_support::toy_dataset(rng, 50, 3);
    std::vector<Eigen::Index> rows(50);
    for (Eigen::Index i = 0; i < 50; ++i) rows[static_cast<std::size_t>(i)] = i;
    const StandardScaler scaler = fit_scaler(dataset, rows);

    const Eigen::MatrixXd round_tripped =
        scaler.invert_features(scaler.transform_features(dataset.features));
    for (Eigen::Index r = 0; r < dataset.features.rows(); ++r) {
        for (Eigen::Index c = 0; c < dataset.features.cols(); ++c) {
            const double original = dataset.features(r, c);
            const double scale = std::max(1.0, std::abs(original));
            CHECK(std::abs(round_tripped(r, c) - original) <= 1e-12 * scale);
        }
    }

    const Eigen::VectorXd targets_round =
        scaler.invert_targets(scaler.transform_targets(dataset.targets));
    for (Eigen::Index i = 0; i < dataset.targets.size(); ++i) {
        const double scale = std::max(1.0, std::abs(dataset.targets[i]));
        CHECK(std::abs(targets_round[i] - dataset.targets[i]) <= 1e-12 * scale);
    }
}

TEST_CASE("scaler statistics come from training rows only") {
    // skewed fixture: train rows centred near zero, validation rows offset
    Dataset dataset;
    dataset.features.resize(6, 1);
    dataset.features << -1.0, 0.0, 1.0, 9.0, 10.0, 11.0;
    dataset.targets.resize(6);
    dataset.targets << -1.0, 0.0, 1.0, 9.0, 10.0, 11.0;
    dataset.feature_names = {"x"};

    const std::vector<Eigen::Index> train_rows{0, 1, 2};
    const std::vector<Eigen::Index> validation_rows{3, 4, 5};
    const StandardScaler scaler = fit_scaler(dataset, train_rows);

    const Eigen::MatrixXd train_std =
        scaler.transform_features(select_rows(dataset.features, train_rows));
    CHECK(train_std.col(0).mean() == doctest::Approx(0.0).epsilon(1e-12));

    // leakage would drag this mean toward zero
    const Eigen::MatrixXd val_std =
        scaler.transform_features(select_rows(dataset.features, validation_rows));
    CHECK(std::abs(val_std.col(0).mean()) > 1.0);
}

TEST_CASE("fit_scaler requires rows") {
    std::mt19937_64 rng(8);
    const Dataset dataset = test_support::toy_dataset(rng, 5);
    CHECK_THROWS_AS(fit_scaler(dataset, {}), std::invalid_argument);
}

TEST_SUITE_END();
