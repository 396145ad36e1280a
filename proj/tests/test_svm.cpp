#include <cmath>
#include <random>

#include "doctest.h"
#include "imst/svm.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace imst;

namespace {

SvmParams gaussian(double gamma, std::size_t budget = kUnboundedBudget, double C = 10.0) {
  SvmParams p;
  p.kernel = {KernelType::kGaussian, gamma};
  p.budget = budget;
  p.C = C;
  return p;
}

std::vector<LabeledExample> random_examples(std::size_t n, std::size_t dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<LabeledExample> out;
  for (std::size_t i = 0; i < n; ++i) {
    auto x = test::random_unit_vector(dim, rng);
    const int y = x[0] + 0.3 * x[1] > 0 ? 1 : -1;
    out.push_back({std::move(x), y});
  }
  return out;
}

}  // namespace

TEST_CASE("kernels") {
  const std::vector<double> a{1, 2, 3};
  const std::vector<double> b{0, 2, 5};
  CHECK(Kernel{KernelType::kLinear, 0}(a, b) == 19.0);
  CHECK(Kernel{KernelType::kGaussian, 0.5}(a, b) == doctest::Approx(std::exp(-2.5)));
  CHECK(Kernel{KernelType::kGaussian, 0.5}(a, a) == 1.0);
}

TEST_CASE("params validation") {
  CHECK_THROWS_AS(BudgetedSvm(gaussian(1.0, 0)), std::invalid_argument);
  CHECK_THROWS_AS(BudgetedSvm(gaussian(0.0)), std::invalid_argument);
  CHECK_THROWS_AS(BudgetedSvm(gaussian(1.0, 10, 0.0)), std::invalid_argument);
}

TEST_CASE("score and classify") {
  BudgetedSvm m(gaussian(0.2));
  const std::vector<double> x{0.6, 0.8};
  CHECK(m.score(x) == 0.0);
  CHECK(m.classify(x, 0.0) == -1);

  m.add_support_vector(x, 1, 1.0);
  CHECK(m.score(x) == 1.0);

  BudgetedSvm lin({{KernelType::kLinear, 0}, 10, 10.0, 0.0});
  lin.add_support_vector(std::vector<double>{0.7}, 1, 1.0);
  CHECK(lin.classify(std::vector<double>{1.0}, 0.0) == 1);
  CHECK(lin.classify(std::vector<double>{1.0}, 0.7) == -1);
  CHECK(lin.classify(std::vector<double>{1.0}, 0.8) == -1);
}

TEST_CASE("score matches a direct kernel sum") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-2, 2);
  for (int trial = 0; trial < 20; ++trial) {
    SvmParams p = gaussian(0.7, 10, 2.0);
    p.bias = u(rng) * 0.1;
    BudgetedSvm m(p);
    std::vector<std::vector<double>> xs;
    std::vector<double> betas;
    for (int i = 0; i < 10; ++i) {
      xs.push_back(test::random_unit_vector(6, rng));
      const double beta = u(rng);
      betas.push_back(beta);
      m.add_support_vector(xs.back(), beta >= 0 ? 1 : -1, beta);
    }
    const auto q = test::random_unit_vector(6, rng);
    double want = p.bias;
    for (int i = 0; i < 10; ++i) {
      double d = 0;
      for (int k = 0; k < 6; ++k) d += (xs[i][k] - q[k]) * (xs[i][k] - q[k]);
      want += betas[i] * std::exp(-0.7 * d);
    }
    CHECK(m.score(q) == doctest::Approx(want).epsilon(1e-12));
  }
}

TEST_CASE("a single PA step on an empty model") {
  BudgetedSvm m(gaussian(0.2));
  const std::vector<double> x{0.0, 1.0, 0.0};
  CHECK(m.update({x, 1}));
  REQUIRE(m.size() == 1);
  CHECK(m.support_vector(0).beta == doctest::Approx(1.0));
  CHECK(m.score(x) >= 1.0);

  SUBCASE("an example with margin is ignored") {
    const std::string before = m.serialize();
    CHECK_FALSE(m.update({x, 1}));
    CHECK(m.serialize() == before);
  }
  SUBCASE("C caps the step") {
    BudgetedSvm small(gaussian(0.2, kUnboundedBudget, 0.25));
    small.update({x, -1});
    CHECK(small.support_vector(0).beta == -0.25);
  }
}

TEST_CASE("unbounded model agrees with the PA oracle") {
  const auto data = random_examples(60, 8, 17);
  BudgetedSvm m(gaussian(1.5, kUnboundedBudget, 1.0));
  oracle::PaLearner ref{1.5, 1.0};
  for (const auto& ex : data) {
    m.update(ex);
    ref.learn(ex.features, ex.label);
    CHECK(m.size() == ref.xs.size());
  }
  for (const auto& ex : random_examples(30, 8, 99)) {
    CHECK(m.score(ex.features) == doctest::Approx(ref.score(ex.features)).epsilon(1e-12));
  }
}

TEST_CASE("budget holds") {
  BudgetedSvm m(gaussian(5.0, 5));
  std::mt19937_64 rng(1);
  for (int i = 0; i < 8; ++i) {
    auto x = test::random_unit_vector(4, rng);
    x[0] += 10.0 * i;  // far apart: every step adds a vector
    CHECK(m.update({x, i % 2 == 0 ? 1 : -1}));
  }
  CHECK(m.size() == 5);

  const std::size_t added = m.update(random_examples(200, 4, 5));
  CHECK(added > 0);
  CHECK(m.size() <= 5);
}

TEST_CASE("eviction removes the smallest beta^2 K") {
  BudgetedSvm m(gaussian(1.0, 3));
  m.add_support_vector(std::vector<double>{1, 0}, 1, 0.9);
  m.add_support_vector(std::vector<double>{0, 1}, -1, -0.1);
  m.add_support_vector(std::vector<double>{1, 1}, 1, 0.5);
  m.evict();
  REQUIRE(m.size() == 2);
  CHECK(m.support_vector(0).beta == 0.9);
  CHECK(m.support_vector(1).beta == 0.5);

  SUBCASE("ties go to the oldest") {
    BudgetedSvm t(gaussian(1.0, 2));
    t.add_support_vector(std::vector<double>{1, 0}, 1, 0.5);
    t.add_support_vector(std::vector<double>{0, 1}, -1, -0.5);
    t.add_support_vector(std::vector<double>{1, 1}, 1, 0.5);
    REQUIRE(t.size() == 2);
    CHECK(t.support_vector(0).serial == 1);
    CHECK(t.support_vector(1).serial == 2);
  }
  SUBCASE("insertion over budget evicts immediately") {
    m.add_support_vector(std::vector<double>{2, 2}, 1, 0.05);
    CHECK(m.size() == 3);
    m.add_support_vector(std::vector<double>{3, 3}, -1, -0.04);
    REQUIRE(m.size() == 3);
    CHECK(m.support_vector(2).beta == 0.05);
  }

  BudgetedSvm empty(gaussian(1.0));
  CHECK_THROWS_AS(empty.evict(), std::logic_error);
}

TEST_CASE("add_support_vector checks the coefficient") {
  BudgetedSvm m(gaussian(1.0, 10, 1.0));
  CHECK_THROWS_AS(m.add_support_vector(std::vector<double>{1.0}, 1, 1.5), std::invalid_argument);
  CHECK_THROWS_AS(m.add_support_vector(std::vector<double>{1.0}, 1, -0.5), std::invalid_argument);
  CHECK_THROWS_AS(m.add_support_vector(std::vector<double>{1.0}, 0, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(m.update({std::vector<double>{1.0}, 2}), std::invalid_argument);
}

TEST_CASE("feature length is fixed by the first vector") {
  BudgetedSvm m(gaussian(1.0));
  m.update({std::vector<double>{1, 0, 0}, 1});
  CHECK(m.dimension() == 3);
  CHECK_THROWS_AS(m.score(std::vector<double>{1, 0}), DimensionMismatch);
  CHECK_THROWS_AS(m.update({std::vector<double>{1, 0}, 1}), DimensionMismatch);
}

TEST_CASE("snapshot round trip is exact") {
  SvmParams p = gaussian(0.37, 7, 3.3);
  p.bias = -0.125;
  BudgetedSvm m(p);
  m.update(random_examples(40, 5, 8));
  const std::string text = m.serialize();
  const BudgetedSvm back = BudgetedSvm::deserialize(text);
  CHECK(back == m);
  CHECK(back.serialize() == text);
  const auto probe = random_examples(1, 5, 2)[0].features;
  CHECK(back.score(probe) == m.score(probe));

  SUBCASE("continued training stays in lockstep") {
    BudgetedSvm a = m;
    BudgetedSvm b = back;
    const auto more = random_examples(30, 5, 12);
    a.update(more);
    b.update(more);
    CHECK(a == b);
  }
  SUBCASE("unbounded and empty models") {
    BudgetedSvm u(gaussian(1.0));
    CHECK(BudgetedSvm::deserialize(u.serialize()) == u);
    CHECK(u.serialize().find("budget unbounded") != std::string::npos);
  }
  SUBCASE("malformed snapshots are rejected") {
    CHECK_THROWS_AS(BudgetedSvm::deserialize("imst-svm 2\n"), std::runtime_error);
    CHECK_THROWS_AS(BudgetedSvm::deserialize(text.substr(0, text.size() / 2)), std::runtime_error);
    std::string wrong = text;
    wrong.replace(wrong.find("kernel gaussian"), 15, "kernel cubic   ");
    CHECK_THROWS_AS(BudgetedSvm::deserialize(wrong), std::runtime_error);
  }
}
