#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "hdlasso/csv.hpp"
#include "hdlasso/experiments.hpp"
#include "hdlasso/rng.hpp"
#include "hdlasso/simulate.hpp"

using namespace hdlasso;

namespace {

struct TempFile {
    std::string path;
    explicit TempFile(const std::string& name) {
        path = (std::filesystem::temp_directory_path() / name).string();
    }
    ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("csv round trip is exact") {
    TempFile tmp("hdlasso_test_roundtrip.csv");
    write_csv_matrix(tmp.path, Eigen::MatrixXd::Identity(2, 2));
    const CsvMatrix small = load_csv_matrix(tmp.path, false);
    CHECK(small.values == Eigen::MatrixXd::Identity(2, 2));

    Rng rng(321);
    Eigen::MatrixXd M(1000, 50);
    for (int i = 0; i < 1000; ++i)
        for (int j = 0; j < 50; ++j) M(i, j) = rng.gaussian() * std::pow(10.0, (int)(rng.below(9)) - 4);
    write_csv_matrix(tmp.path, M);
    const CsvMatrix back = load_csv_matrix(tmp.path, false);
    CHECK(back.values == M);  // bit-exact through %.17g
}

TEST_CASE("csv parse errors carry line numbers") {
    TempFile tmp("hdlasso_test_ragged.csv");
    {
        std::ofstream out(tmp.path);
        out << "1,2,3\n4,5\n";
    }
    try {
        load_csv_matrix(tmp.path, false);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line == 2);
    }

    TempFile bad("hdlasso_test_nonnum.csv");
    {
        std::ofstream out(bad.path);
        out << "1,2\n3,abc\n";
    }
    CHECK_THROWS_AS(load_csv_matrix(bad.path, false), ParseError);
}

TEST_CASE("csv response column selection") {
    TempFile tmp("hdlasso_test_resp.csv");
    {
        std::ofstream out(tmp.path);
        out << "x1,y,x2\n1,10,2\n3,20,4\n";
    }
    CsvOptions opts;
    opts.has_header = true;
    opts.response_column = "y";
    const DesignData named = load_csv(tmp.path, opts);
    CHECK(named.Y == Eigen::Vector2d(10, 20));
    CHECK(named.X(0, 0) == 1.0);
    CHECK(named.X(0, 1) == 2.0);

    CsvOptions last;
    last.has_header = true;
    const DesignData by_last = load_csv(tmp.path, last);
    CHECK(by_last.Y == Eigen::Vector2d(2, 4));

    opts.response_column = "missing";
    CHECK_THROWS_AS(load_csv(tmp.path, opts), ParseError);
}

TEST_CASE("config json round trip and validation") {
    ExperimentConfig cfg;
    cfg.mode = Mode::Simulate;
    cfg.seed = 99;
    cfg.seed_set = true;
    cfg.n = 30;
    cfg.p = 12;
    cfg.reps = 4;
    const nlohmann::ordered_json j = config_to_json(cfg);
    const ExperimentConfig back = config_from_json(j);
    CHECK(back.n == 30);
    CHECK(back.p == 12);
    CHECK(back.seed == 99);
    CHECK(back.seed_set);
    CHECK(back.mode == Mode::Simulate);

    CHECK_THROWS_AS(mode_from_name("bogus"), DomainError);

    ExperimentConfig unseeded;
    unseeded.mode = Mode::Simulate;
    CHECK_THROWS_AS(unseeded.validate(), DomainError);

    ExperimentConfig bad_rho;
    bad_rho.mode = Mode::Fit;
    bad_rho.rho = 1.5;
    CHECK_THROWS_AS(bad_rho.validate(), DomainError);
}

TEST_CASE("generated data contracts") {
    const SimulatedDataset a = generate_dataset(20, 10, 3, 0.3, 1.0, 42, 7);
    const SimulatedDataset b = generate_dataset(20, 10, 3, 0.3, 1.0, 42, 7);
    CHECK(a.X == b.X);
    CHECK(a.Y == b.Y);
    CHECK(a.eps == b.eps);

    const SimulatedDataset noiseless = generate_dataset(15, 6, 2, 0.0, 0.0, 43);
    CHECK(noiseless.eps.isZero(0.0));
    CHECK((noiseless.Y - noiseless.X * noiseless.beta0).isZero(0.0));
    CHECK(noiseless.beta0[0] == 1.0);
    CHECK(noiseless.beta0[1] == -1.0);
    CHECK(noiseless.beta0[2] == 0.0);

    // ρ = 0: the sample Gram matrix concentrates around the identity
    const SimulatedDataset big = generate_dataset(10000, 10, 0, 0.0, 1.0, 44);
    const double gap =
        sup_norm(gram(big.X).matrix() - Eigen::MatrixXd::Identity(10, 10));
    CHECK(gap <= 4.0 * std::sqrt(std::log(10.0) / 10000.0));

    CHECK_THROWS_AS(generate_dataset(10, 5, 9, 0.0, 1.0, 1), DomainError);
    CHECK_THROWS_AS(generate_dataset(10, 5, 2, 1.0, 1.0, 1), DomainError);
}

TEST_CASE("simulate mode: empty run and determinism") {
    ExperimentConfig cfg;
    cfg.mode = Mode::Simulate;
    cfg.seed = 5;
    cfg.seed_set = true;
    cfg.n = 25;
    cfg.p = 15;
    cfg.s0 = 2;
    cfg.reps = 0;
    const Report empty = run_experiment(cfg);
    CHECK(empty.pass);
    CHECK(empty.doc["reps"].empty());
    CHECK(empty.doc["aggregates"].is_null());

    cfg.reps = 3;
    const Report r1 = run_experiment(cfg);
    const Report r2 = run_experiment(cfg);
    CHECK(r1.serialize() == r2.serialize());
    CHECK(r1.pass);
}

TEST_CASE("report aggregates recomputable from per-rep records") {
    ExperimentConfig cfg;
    cfg.mode = Mode::Simulate;
    cfg.seed = 6;
    cfg.seed_set = true;
    cfg.n = 30;
    cfg.p = 20;
    cfg.s0 = 2;
    cfg.reps = 5;
    cfg.delta = {0.1};
    const Report rep = run_experiment(cfg);

    long applicable = 0, holds = 0;
    for (const auto& rec : rep.doc["reps"]) {
        for (const auto& b : rec["bounds"]) {
            if (b["applicable"].get<bool>()) {
                ++applicable;
                if (b["holds"].get<bool>()) ++holds;
            }
        }
    }
    CHECK(applicable == rep.doc["aggregates"]["applicable"].get<long>());
    CHECK(holds == rep.doc["aggregates"]["holds"].get<long>());
    const double freq = static_cast<double>(holds) / applicable;
    CHECK(freq == doctest::Approx(
                      rep.doc["aggregates"]["holds_frequency"].get<double>()));
}

TEST_CASE("preset registry") {
    const std::vector<std::string> names = preset_names();
    CHECK(names.size() == 14);
    CHECK_THROWS_AS(run_preset("not-a-preset", ExperimentConfig{}), DomainError);
}

TEST_CASE("report writing") {
    ExperimentConfig cfg;
    cfg.mode = Mode::Fit;
    cfg.n = 20;
    cfg.p = 8;
    cfg.s0 = 2;
    cfg.seed = 9;
    cfg.seed_set = true;
    const Report rep = run_experiment(cfg);
    TempFile tmp("hdlasso_test_report.json");
    write_report(rep, tmp.path);
    std::ifstream in(tmp.path);
    nlohmann::json parsed;
    in >> parsed;
    CHECK(parsed["generator"] == "hdlasso 0.1.0");
    CHECK(parsed.contains("checks"));
}
