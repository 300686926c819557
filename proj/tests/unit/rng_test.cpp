// Copyright 2026 The ppsyn Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ppsyn/rng.hpp"

#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "oracles.hpp"

namespace ppsyn {
namespace {

TEST(RngTest, StreamsAreKeyedBySeedRoundAndTag) {
  EXPECT_EQ(derive_seed(1, 2, "measure"), derive_seed(1, 2, "measure"));
  EXPECT_NE(derive_seed(1, 2, "measure"), derive_seed(1, 3, "measure"));
  EXPECT_NE(derive_seed(1, 2, "measure"), derive_seed(1, 2, "select"));
  EXPECT_NE(derive_seed(1, 2, "measure"), derive_seed(2, 2, "measure"));
  Engine a = make_stream(9, 0, "x");
  Engine b = make_stream(9, 0, "x");
  for (int i = 0; i < 10; ++i) EXPECT_EQ(a(), b());
}

TEST(RngTest, Uniform01InRange) {
  Engine rng = make_stream(3, 0, "u");
  double sum = 0.0;
  for (int i = 0; i < 100000; ++i) {
    const double u = uniform01(rng);
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    sum += u;
  }
  EXPECT_NEAR(sum / 1e5, 0.5, 5.0 * std::sqrt(1.0 / 12.0 / 1e5));
}

TEST(RngTest, UniformIndexIsUniform) {
  Engine rng = make_stream(4, 0, "i");
  std::vector<double> counts(7, 0.0);
  for (int i = 0; i < 70000; ++i) counts[uniform_index(rng, 7)] += 1;
  EXPECT_GT(oracle::chi_square_pvalue(counts, std::vector<double>(7, 1.0 / 7)), 0.001);
}

TEST(RngTest, NormalMoments) {
  Engine rng = make_stream(5, 0, "n");
  const int n = 1000000;
  double s = 0.0, s2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double z = standard_normal(rng);
    s += z;
    s2 += z * z;
  }
  EXPECT_NEAR(s / n, 0.0, 5.0 / std::sqrt(n));
  EXPECT_NEAR(std::sqrt(s2 / n), 1.0, 0.01);
}

TEST(RngTest, ExponentialMean) {
  Engine rng = make_stream(6, 0, "e");
  const int n = 200000;
  double s = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = standard_exponential(rng);
    ASSERT_GE(x, 0.0);
    s += x;
  }
  EXPECT_NEAR(s / n, 1.0, 5.0 / std::sqrt(n));
}

}  // namespace
}  // namespace ppsyn
