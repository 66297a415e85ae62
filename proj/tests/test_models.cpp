#include <doctest/doctest.h>

#include <boost/math/special_functions/lambert_w.hpp>
#include <cmath>
#include <random>

#include "aoicache/error.hpp"
#include "aoicache/lambert_w.hpp"
#include "aoicache/models.hpp"
#include "oracles.hpp"

using namespace aoicache;
using oracle::relative_error;

namespace {

const UpdateModel kSlowExp = UpdateModel::exponential(1.0, 0.02, 0.015);
const UpdateModel kFastExp = UpdateModel::exponential(1.0, 0.02, 10.0);
const UpdateModel kRational = UpdateModel::rational(1.0, 0.02);

std::vector<UpdateModel> sample_models() {
  std::vector<UpdateModel> models = {UpdateModel::constant(1.0), UpdateModel::constant(5.0), kSlowExp, kFastExp,
                                     kRational,                  UpdateModel::exponential(3.0, 0.5, 0.7)};
  std::mt19937_64 rng(7);
  for (int i = 0; i < 24; ++i) models.push_back(oracle::random_model(rng));
  return models;
}

}  // namespace

TEST_SUITE("models") {
  TEST_CASE("f matches each closed form") {
    CHECK(UpdateModel::constant(1.0).f(7.0) == 1.0);
    CHECK(kSlowExp.f(0.0) == doctest::Approx(0.02).epsilon(1e-15));
    CHECK(kSlowExp.f(1e6) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(kRational.f(0.0) == doctest::Approx(0.02).epsilon(1e-15));
    CHECK(kRational.f(1.0) == doctest::Approx(1.0 - 0.98 / 2.0).epsilon(1e-15));
  }

  TEST_CASE("invalid parameters are rejected at construction") {
    CHECK_THROWS_AS(UpdateModel::constant(0.0), ArgumentError);
    CHECK_THROWS_AS(UpdateModel::constant(-1.0), ArgumentError);
    CHECK_THROWS_AS(UpdateModel::exponential(1.0, 1.0, 0.1), ArgumentError);
    CHECK_THROWS_AS(UpdateModel::exponential(1.0, 0.0, 0.1), ArgumentError);
    CHECK_THROWS_AS(UpdateModel::exponential(1.0, 0.5, 0.0), ArgumentError);
    CHECK_THROWS_AS(UpdateModel::rational(1.0, 2.0), ArgumentError);
    CHECK_THROWS_AS(kSlowExp.f(-1.0), DomainError);
  }

  TEST_CASE("f' at the origin and against finite differences") {
    CHECK(UpdateModel::constant(5.0).f_prime(3.0) == 0.0);
    CHECK(kSlowExp.f_prime(0.0) == doctest::Approx(0.015 * 0.98).epsilon(1e-15));
    CHECK(kRational.f_prime(0.0) == doctest::Approx(0.98).epsilon(1e-15));
    for (const auto& model : sample_models()) {
      for (const double t : log_grid(0.01, 100.0, 25)) {
        const double step = 1e-5 * t;
        const double fd = oracle::central_difference([&](double x) { return model.f(x); }, t, step);
        const double exact = model.f_prime(t);
        // 1e-6 relative, plus the roundoff floor of a central difference of f.
        CHECK(std::abs(exact - fd) <= 1e-6 * std::abs(exact) + 8e-16 * model.f(t) / step);
      }
    }
  }

  TEST_CASE("g examples and domain") {
    CHECK(UpdateModel::constant(1.0).g(2.0) == 0.5);
    CHECK(UpdateModel::constant(5.0).g(5.0) == 1.0);
    // Evaluated independently at 30 digits: 0.500132351839...
    CHECK(kSlowExp.g(0.0412) == doctest::Approx(0.500132351839452745).epsilon(1e-12));
    CHECK_THROWS_AS(kSlowExp.g(0.0), DomainError);
    CHECK_THROWS_AS(kSlowExp.g(-1.0), DomainError);
  }

  TEST_CASE("g inverse examples") {
    CHECK(UpdateModel::constant(1.0).g_inverse(0.5) == 2.0);
    // Frozen from a 30-digit root solve of 1 - 0.98 exp(-0.015 t) = 0.5 t.
    constexpr double kExpected = 0.0412112359236126226;
    CHECK(relative_error(kSlowExp.g_inverse(0.5), kExpected) < 1e-12);
    CHECK(relative_error(oracle::g_inverse_bisection(kSlowExp, 0.5), kExpected) < 1e-12);
    CHECK(relative_error(kFastExp.g_inverse(0.5), 1.99999999596013873681) < 1e-12);
    CHECK_THROWS_AS(kSlowExp.g_inverse(0.0), DomainError);
    CHECK_THROWS_AS(kSlowExp.g_inverse(-2.0), DomainError);
  }

  TEST_CASE("inverse identity and agreement with the bisection oracle") {
    for (const auto& model : sample_models()) {
      CAPTURE(model.describe());
      for (const double lambda : log_grid(1e-3, 1e3, 37)) {
        CAPTURE(lambda);
        const double tau = model.g_inverse(lambda);
        CHECK(relative_error(model.g(tau), lambda) < 1e-8);
        CHECK(relative_error(tau, oracle::g_inverse_bisection(model, lambda)) < 1e-8);
        CHECK(relative_error(model.g_inverse_bracketed(lambda), tau) < 1e-8);
      }
    }
  }

  TEST_CASE("rational inverse matches its quadratic closed form") {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 50; ++i) {
      const double size = oracle::log_uniform(rng, 0.1, 10.0);
      const double offset = size * oracle::log_uniform(rng, 1e-3, 0.9);
      const auto model = UpdateModel::rational(size, offset);
      for (const double lambda : log_grid(1e-3, 1e3, 13)) {
        CHECK(relative_error(model.g_inverse(lambda), oracle::rational_inverse_quadratic(size, offset, lambda)) <
              1e-10);
      }
    }
  }

  TEST_CASE("exponential models pick the principal Lambert branch") {
    std::mt19937_64 rng(3);
    for (int i = 0; i < 40; ++i) {
      const double size = oracle::log_uniform(rng, 0.1, 10.0);
      const auto model = UpdateModel::exponential(size, size * oracle::log_uniform(rng, 1e-3, 0.9),
                                                  oracle::log_uniform(rng, 1e-3, 50.0));
      CHECK(model.lambert_branch() == LambertBranch::Principal);
    }
  }

  TEST_CASE("g strictly decreasing on a log-uniform sample") {
    std::mt19937_64 rng(5);
    for (const auto& model : sample_models()) {
      for (int i = 0; i < 200; ++i) {
        double t1 = oracle::log_uniform(rng, 1e-3, 1e4);
        double t2 = oracle::log_uniform(rng, 1e-3, 1e4);
        if (t1 == t2) continue;
        if (t1 > t2) std::swap(t1, t2);
        CHECK(model.g(t1) > model.g(t2));
      }
    }
  }

  TEST_CASE("h and h' examples") {
    const auto unit = UpdateModel::constant(1.0);
    const auto five = UpdateModel::constant(5.0);
    CHECK(unit.h(0.5) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(five.h(1.0) == doctest::Approx(7.5).epsilon(1e-15));
    CHECK(unit.h_prime(0.5) == doctest::Approx(-2.0).epsilon(1e-14));
    CHECK(five.h_prime(1.0) == doctest::Approx(-2.5).epsilon(1e-14));
    CHECK(relative_error(kSlowExp.h(0.5), 0.0412112359236126226) < 1e-12);
    // 30-digit numerical derivative of h at 0.5.
    CHECK(relative_error(kSlowExp.h_prime(0.5), -0.0437062677032791961) < 1e-10);
    const double fd =
        oracle::central_difference([&](double l) { return kSlowExp.h(l); }, 0.5, 1e-6);
    CHECK(relative_error(kSlowExp.h_prime(0.5), fd) < 1e-5);
  }

  TEST_CASE("h' matches finite differences and is negative") {
    for (const auto& model : sample_models()) {
      CAPTURE(model.describe());
      for (const double lambda : log_grid(1e-2, 1e2, 21)) {
        const double exact = model.h_prime(lambda);
        const double fd =
            oracle::central_difference([&](double l) { return model.h(l); }, lambda, 1e-5 * lambda);
        CHECK(exact < 0.0);
        CHECK(relative_error(exact, fd) < 1e-5);
      }
    }
  }

  TEST_CASE("h strictly decreasing") {
    std::mt19937_64 rng(9);
    for (const auto& model : sample_models()) {
      for (int i = 0; i < 100; ++i) {
        double l1 = oracle::log_uniform(rng, 1e-3, 1e2);
        double l2 = oracle::log_uniform(rng, 1e-3, 1e2);
        if (l1 == l2) continue;
        if (l1 > l2) std::swap(l1, l2);
        CHECK(model.h(l1) > model.h(l2));
      }
    }
  }
}

TEST_SUITE("lambert_w") {
  TEST_CASE("fixed points") {
    CHECK(lambert_w0(0.0) == 0.0);
    CHECK(lambert_w0(std::exp(1.0)) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(lambert_w0(-std::exp(-1.0)) == -1.0);
    CHECK(lambert_wm1(-std::exp(-1.0)) == -1.0);
    CHECK(lambert_wm1(-std::exp(-1.0) * 2.0 / std::exp(1.0)) == doctest::Approx(-2.0).epsilon(1e-13));
  }

  TEST_CASE("domain errors") {
    CHECK_THROWS_AS(lambert_w0(-0.5), DomainError);
    CHECK_THROWS_AS(lambert_wm1(-0.5), DomainError);
    CHECK_THROWS_AS(lambert_wm1(0.0), DomainError);
    CHECK_THROWS_AS(lambert_wm1(1.0), DomainError);
  }

  TEST_CASE("residual bound across the domain and agreement with Boost") {
    const auto residual_ok = [](double w, double z) {
      return std::abs(w * std::exp(w) - z) <= 1e-12 + 1e-10 * std::abs(z);
    };
    std::vector<double> zs;
    for (const double m : log_grid(1e-300, 1e300, 601)) zs.push_back(m);
    for (const double m : log_grid(1e-15, -kLambertBranchPoint, 400)) zs.push_back(-m);
    for (const double z : zs) {
      CAPTURE(z);
      const double w0 = lambert_w0(z);
      CHECK(residual_ok(w0, z));
      CHECK(w0 >= -1.0);
      CHECK(relative_error(w0, boost::math::lambert_w0(z)) < 1e-12);
      if (z < 0.0) {
        const double wm1 = lambert_wm1(z);
        CHECK(residual_ok(wm1, z));
        CHECK(wm1 <= -1.0);
        // Near the branch point both branches are ill-conditioned in w.
        if (z > kLambertBranchPoint + 1e-6) CHECK(relative_error(wm1, boost::math::lambert_wm1(z)) < 1e-10);
      }
    }
    for (const double m : log_grid(1e-300, 1e-16, 50)) {
      CHECK(residual_ok(lambert_wm1(-m), -m));
    }
  }
}

TEST_SUITE("popularity") {
  TEST_CASE("zipf") {
    const auto uniform = zipf_popularity(2, 0.0);
    CHECK(uniform[0] == 0.5);
    CHECK(uniform[1] == 0.5);
    const auto harmonic = zipf_popularity(2, 1.0);
    CHECK(harmonic[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK(harmonic[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK(relative_error(zipf_popularity(5, 1.8)[0], 0.639693942383123333) < 1e-14);
    CHECK_THROWS_AS(zipf_popularity(0, 1.0), ArgumentError);
    CHECK_THROWS_AS(zipf_popularity(3, -1.0), ArgumentError);
  }

  TEST_CASE("two categories") {
    const auto two = two_category_popularity(2, 1.8);
    CHECK(two.popularity == std::vector<double>{0.5, 0.5});
    CHECK(two.size == std::vector<double>{1.0, 5.0});
    const auto four = two_category_popularity(4, 0.0);
    CHECK(four.popularity == std::vector<double>{0.25, 0.25, 0.25, 0.25});
    CHECK(four.size == std::vector<double>{1.0, 1.0, 5.0, 5.0});
    const auto skewed = two_category_popularity(4, 1.8);
    CHECK(relative_error(skewed.popularity[0], 0.388447693397868857) < 1e-14);
    CHECK(relative_error(skewed.popularity[1], 0.111552306602131143) < 1e-14);
    CHECK(skewed.popularity[2] == skewed.popularity[0]);
    CHECK(skewed.popularity[3] == skewed.popularity[1]);
    CHECK_THROWS_AS(two_category_popularity(3, 1.8), ArgumentError);
  }

  TEST_CASE("catalog validation") {
    const auto model = UpdateModel::constant(1.0);
    CHECK_NOTHROW(Catalog({{0.5, model}, {0.5, model}}));
    CHECK_THROWS_AS(Catalog({}), ArgumentError);
    CHECK_THROWS_AS(Catalog({{0.5, model}, {0.4, model}}), ArgumentError);
    CHECK_THROWS_AS(Catalog({{1.5, model}, {-0.5, model}}), ArgumentError);
    const auto p = zipf_popularity(37, 1.8);
    std::vector<FileSpec> files;
    for (const double x : p) files.push_back({x, model});
    CHECK_NOTHROW(Catalog(std::move(files)));
  }
}
