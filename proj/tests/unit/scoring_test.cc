#include <gtest/gtest.h>

#include <cmath>

#include "embaudit/errors.h"
#include "embaudit/scoring.h"
#include "gen.h"
#include "reference.h"

using namespace embaudit;

namespace {

using F = std::vector<float>;

oracle::Vec d(const F& v) { return oracle::Vec(v.begin(), v.end()); }

const F e1{1, 0, 0, 0}, e2{0, 1, 0, 0}, e3{0, 0, 1, 0}, e4{0, 0, 0, 1};

}  // namespace

TEST(Cosine, Basics) {
  EXPECT_DOUBLE_EQ(cosine(e1, e1), 1.0);
  EXPECT_DOUBLE_EQ(cosine(e1, e2), 0.0);
  EXPECT_THROW(cosine(e1, F{1, 0}), InvalidArgument);
  EXPECT_THROW(cosine(e1, F{0, 0, 0, 0}), InvalidArgument);
}

TEST(CosAdd, HandValues) {
  // a = c: the first two terms cancel.
  EXPECT_NEAR(score_cosadd(e1, e2, e1, e2), 1.0, 1e-15);
  EXPECT_NEAR(score_cosadd(e1, e2, e3, e2), 1.0, 1e-15);
  EXPECT_NEAR(score_cosadd(e1, e2, e3, e4), 0.0, 1e-15);
}

TEST(CosMul, HandValues) {
  // d = b = c and a orthogonal: (1 * 1) / (0.5 + 0.001)
  EXPECT_NEAR(score_cosmul(e1, e2, e2, e2, 0.001), 1.0 / 0.501, 1e-12);
  EXPECT_NEAR(score_cosmul(e1, e2, e2, e2, 0.001), 1.996, 1e-3);
  // d orthogonal to everything: (0.5 * 0.5) / (0.5 + 0.001)
  EXPECT_NEAR(score_cosmul(e1, e2, e3, e4, 0.001), 0.25 / 0.501, 1e-12);
  EXPECT_NEAR(score_cosmul(e1, e2, e3, e4, 0.001), 0.4995, 1e-3);
  // Raw cosines: 1 * 1 / (0 + eps)
  EXPECT_NEAR(score_cosmul(e1, e2, e2, e2, 0.001, false), 1000.0, 1e-9);
}

TEST(Bolukbasi, HandValues) {
  EXPECT_EQ(score_bolukbasi(e1, e2, e3, e3, 1.0), 0.0);
  EXPECT_EQ(score_bolukbasi(e1, e1, e3, e4, 2.0), 0.0);
  // b - d = 0.5 (a - c) / ||a - c||, inside the threshold.
  const F a{1, 0, 0, 0}, c{0, 1, 0, 0};
  const float h = static_cast<float>(0.5 / std::sqrt(2.0));
  const F b{0, 0, 1, 0}, dd{-h, h, 1, 0};
  EXPECT_NEAR(score_bolukbasi(a, c, b, dd, 1.0), 1.0, 1e-7);
  // Same pair pushed beyond the threshold.
  EXPECT_EQ(score_bolukbasi(a, c, b, dd, 0.4), 0.0);
  const auto s = OffsetDirection(a, c).score(b, dd, 0.4);
  EXPECT_EQ(s.outcome, DirectionOutcome::kBeyondThreshold);
  EXPECT_EQ(OffsetDirection(a, c).score(b, b, 1.0).outcome,
            DirectionOutcome::kZeroDifference);
}

TEST(ShiftedCosine, Range) {
  EXPECT_EQ(shifted_cosine(-1.0), 0.0);
  EXPECT_EQ(shifted_cosine(0.0), 0.5);
  EXPECT_EQ(shifted_cosine(1.0), 1.0);
}

TEST(ScoringProperty, AgreesWithReferenceLoop) {
  gen::Rng rng(31);
  for (int trial = 0; trial < 2000; ++trial) {
    const std::size_t dim = 2 + rng.index(30);
    const F a = rng.unit(dim), b = rng.unit(dim), c = rng.unit(dim),
            dd = rng.unit(dim);
    EXPECT_NEAR(cosine(a, b), oracle::cos(d(a), d(b)), 1e-12);
    EXPECT_NEAR(l2_distance(a, b), oracle::norm(oracle::sub(d(a), d(b))), 1e-12);

    oracle::Settings s;
    s.algo = oracle::Algo::kCosAdd;
    EXPECT_NEAR(score_cosadd(a, b, c, dd), oracle::score(d(a), d(b), d(c), d(dd), s),
                1e-6);
    s.algo = oracle::Algo::kCosMul;
    s.shifted = rng.coin();
    EXPECT_NEAR(score_cosmul(a, b, c, dd, 0.001, s.shifted),
                oracle::score(d(a), d(b), d(c), d(dd), s), 1e-6);
    s.algo = oracle::Algo::kBolukbasi;
    for (double delta : {0.8, 1.0, 1.2}) {
      s.delta = delta;
      EXPECT_NEAR(score_bolukbasi(a, c, b, dd, delta),
                  oracle::score(d(a), d(b), d(c), d(dd), s), 1e-6);
    }
  }
}

TEST(ScoringProperty, CosMulIsPositiveWhenShifted) {
  gen::Rng rng(32);
  for (int trial = 0; trial < 2000; ++trial) {
    const std::size_t dim = 2 + rng.index(8);
    const F a = rng.unit(dim), b = rng.unit(dim), c = rng.unit(dim),
            dd = rng.unit(dim);
    EXPECT_GE(score_cosmul(a, b, c, dd, 0.001), 0.0);
  }
}

TEST(ScoringProperty, ThresholdMatchesAngle) {
  gen::Rng rng(33);
  for (int trial = 0; trial < 5000; ++trial) {
    const std::size_t dim = 2 + rng.index(6);
    const F b = rng.unit(dim), dd = rng.unit(dim);
    const double dist = l2_distance(b, dd);
    const double cs = cosine(b, dd);
    // ||b - d||^2 = 2 - 2 cos for unit vectors.
    EXPECT_NEAR(dist * dist, 2.0 - 2.0 * cs, 1e-6);
  }
}
