#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "malc/prox.hpp"
#include "oracles.hpp"

#include <random>

using namespace malc;

TEST_CASE("soft-threshold examples") {
    Eigen::MatrixXd v(1, 4);
    v << 3.0, -0.5, 0.7, -2.0;
    const Eigen::MatrixXd out = prox_w(v, 1.0, 1.0);
    CHECK(out(0, 0) == 2.0);
    CHECK(out(0, 1) == 0.0);
    CHECK(out(0, 2) == 0.0);
    CHECK(out(0, 3) == -1.0);
}

TEST_CASE("theta prox examples") {
    Eigen::VectorXd v(2);
    v << 0.7, -0.3;
    const Eigen::VectorXd out = prox_theta(v, 1.0, 0.2);
    CHECK(out(0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(out(1) == 0.0);
}

TEST_CASE("bias column is passed through unless penalized") {
    Eigen::MatrixXd v(2, 3);
    v << 0.1, -0.2, 0.3, 5.0, -5.0, -0.05;
    const Eigen::MatrixXd kept = prox_w(v, 0.5, 1.0, false, Index{2});
    CHECK(kept.col(2) == v.col(2));
    CHECK(kept(1, 0) == 4.5);
    CHECK(kept(0, 1) == 0.0);
    const Eigen::MatrixXd shrunk = prox_w(v, 0.5, 1.0, true, Index{2});
    CHECK(shrunk.col(2).isZero());
}

TEST_CASE("prox matches a scalar minimisation oracle (property)") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> value(-5.0, 5.0), positive(0.01, 2.0);
    for (int t = 0; t < 500; ++t) {
        const double v = value(rng), step = positive(rng), c = positive(rng);
        Eigen::MatrixXd vm(1, 1);
        vm(0, 0) = v;
        const double w_star = oracle::golden_min(
            [&](double u) { return 0.5 * (u - v) * (u - v) + step * c * std::abs(u); }, -10.0, 10.0);
        REQUIRE(std::abs(prox_w(vm, step, c)(0, 0) - w_star) <= 1e-6);

        Eigen::VectorXd tv(1);
        tv(0) = v;
        const double t_star =
            oracle::golden_min([&](double u) { return 0.5 * (u - v) * (u - v) + step * c * u; }, 0.0, 10.0);
        REQUIRE(std::abs(prox_theta(tv, step, c)(0) - t_star) <= 1e-6);
    }
}

TEST_CASE("prox output is feasible and nonexpansive (property)") {
    std::mt19937_64 rng(37);
    std::normal_distribution<double> normal(0.0, 3.0);
    for (int t = 0; t < 100; ++t) {
        Eigen::MatrixXd a(3, 4), b(3, 4);
        for (Index i = 0; i < a.size(); ++i) {
            a(i) = normal(rng);
            b(i) = normal(rng);
        }
        const Eigen::MatrixXd pa = prox_w(a, 0.3, 0.7), pb = prox_w(b, 0.3, 0.7);
        REQUIRE((pa - pb).norm() <= (a - b).norm() + 1e-12);
        const Eigen::VectorXd th = prox_theta(Eigen::VectorXd(a.col(0)), 0.3, 0.7);
        REQUIRE(th.minCoeff() >= 0.0);
    }
}

TEST_CASE("float instantiation") {
    Eigen::MatrixXf v(1, 2);
    v << 1.5f, -1.5f;
    const Eigen::MatrixXf out = prox_w(v, 1.0f, 1.0f);
    CHECK(out(0, 0) == 0.5f);
    CHECK(out(0, 1) == -0.5f);
}
