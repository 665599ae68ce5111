#include <doctest.h>

#include <algorithm>
#include <random>

#include "profiler/aggregation.hpp"

using namespace profiler;

TEST_CASE("compute_dimensions examples") {
  {
    const std::vector<FeatureScores> one = {FeatureScores(3, 3, 3, 3, 3)};
    const auto d = compute_dimensions(one);
    CHECK(d == DimensionScores(Rational(3), Rational(3), Rational(3)));
  }
  {
    const std::vector<FeatureScores> two = {FeatureScores(2, 1, 2, 2, 1), FeatureScores(3, 2, 2, 3, 2)};
    const auto d = compute_dimensions(two);
    CHECK(d.relevancy() == Rational(9, 4));
    CHECK(d.recency() == Rational(2));
    CHECK(d.consistency() == Rational(2));
    CHECK(final_score(d) == Rational(17, 8));
  }
  {
    const std::vector<FeatureScores> zero = {FeatureScores(0, 0, 0, 0, 0)};
    CHECK(compute_dimensions(zero) == DimensionScores(Rational(0), Rational(0), Rational(0)));
  }
  CHECK_THROWS_AS(compute_dimensions(std::span<const FeatureScores>{}), InsufficientInputError);
}

TEST_CASE("final_score examples") {
  CHECK(final_score(DimensionScores(Rational(3), Rational(3), Rational(3))) == Rational(3));
  CHECK(final_score(DimensionScores(Rational(9, 4), Rational(2), Rational(2))) == Rational(17, 8));
  CHECK(final_score(DimensionScores(Rational(0), Rational(0), Rational(0))) == Rational(0));
  CHECK(final_score(DimensionScores(Rational(1), Rational(2), Rational(3)), Weights(Rational(0), Rational(0), Rational(1))) ==
        Rational(3));
}

TEST_CASE("final score law on random triples") {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> hundredths(0, 300);
  for (int i = 0; i < 1000; ++i) {
    const int r = hundredths(rng), rc = hundredths(rng), c = hundredths(rng);
    const DimensionScores d(Rational(r, 100), Rational(rc, 100), Rational(c, 100));
    const double want = 0.5 * r / 100.0 + 0.3 * rc / 100.0 + 0.2 * c / 100.0;
    const Rational got = final_score(d);
    CHECK(std::abs(got.to_double() - want) < 1e-9);
    CHECK(got >= Rational(0));
    CHECK(got <= Rational(3));
  }
}

TEST_CASE("aggregation properties") {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> score(0, 3), count(1, 12);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<FeatureScores> fs;
    const int n = count(rng);
    for (int i = 0; i < n; ++i) fs.emplace_back(score(rng), score(rng), score(rng), score(rng), score(rng));
    const auto d = compute_dimensions(fs);

    // linearity: mean of pair averages equals pair average of feature means
    double mt = 0, md = 0, ma = 0, mr = 0, mu = 0;
    for (const auto& f : fs) {
      mt += f.terminology();
      md += f.depth();
      ma += f.application();
      mr += f.rigor();
      mu += f.uncertainty();
    }
    mt /= n, md /= n, ma /= n, mr /= n, mu /= n;
    CHECK(std::abs(d.relevancy().to_double() - (mt + ma) / 2) < 1e-9);
    CHECK(std::abs(d.recency().to_double() - (mt + md) / 2) < 1e-9);
    CHECK(std::abs(d.consistency().to_double() - (mr + mu) / 2) < 1e-9);

    // order invariance
    auto shuffled = fs;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    CHECK(compute_dimensions(shuffled) == d);

    // convexity: each dimension lies between the min and max of its per-response pair averages
    Rational lo(3), hi(0);
    for (const auto& f : fs) {
      const Rational pair(f.terminology() + f.application(), 2);
      lo = min(lo, pair);
      hi = max(hi, pair);
    }
    CHECK(d.relevancy() >= lo);
    CHECK(d.relevancy() <= hi);
  }
}
