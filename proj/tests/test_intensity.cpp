#include "tracelens/intensity.hpp"

#include "doctest.h"
#include "helpers.hpp"
#include "tracelens/error.hpp"

using namespace tracelens;
namespace tt = tracelens::testing;
using tt::rand_int;

namespace {

// Exact 128-bit reference for the bound I <= (2/b) * min(m,k,n):
// m*k*n <= min * (mk + kn + mn).
bool bound_holds(const GemmDims& d) {
  const int128_t mkn = static_cast<int128_t>(d.m) * d.k * d.n;
  const int128_t q = static_cast<int128_t>(d.m) * d.k + static_cast<int128_t>(d.k) * d.n +
                     static_cast<int128_t>(d.m) * d.n;
  const std::int64_t lo = std::min({d.m, d.k, d.n});
  return mkn <= static_cast<int128_t>(lo) * q;
}

OpRecord shaped_record(const char* category, std::vector<Shape> shapes) {
  OpRecord r;
  r.name = "op";
  r.category = CategoryId{"ml8", category};
  r.shapes = std::move(shapes);
  return r;
}

}  // namespace

TEST_CASE("gemm work follows the 2mkn convention") {
  CHECK(gemm_work({2, 2, 2}) == 16);
  CHECK(gemm_work({1, 1, 1}) == 2);
  CHECK(gemm_work({1024, 1024, 1}) == 2097152);
  // 128-bit oracle on a larger case
  const GemmDims d{4096, 4096, 4096};
  CHECK(static_cast<int128_t>(gemm_work(d)) ==
        2 * static_cast<int128_t>(4096) * 4096 * 4096);
}

TEST_CASE("gemm work overflow is reported, not saturated") {
  const std::int64_t big = std::int64_t{1} << 21;
  try {
    gemm_work({big, big, big});  // 2 * 2^63 does not fit
    FAIL("expected Overflow");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Overflow);
  }
}

TEST_CASE("gemm traffic is b*(mk + kn + mn)") {
  CHECK(gemm_traffic({2, 2, 2}, 4) == 48);
  CHECK(gemm_traffic({1, 1, 1}, 4) == 12);
  CHECK(gemm_traffic({1024, 1024, 1}, 4) == 4202496);
  CHECK_THROWS_AS(gemm_traffic({2, 2, 2}, 3), Error);  // b must be 1/2/4/8
}

TEST_CASE("gemm intensity is an exact rational") {
  const IntensityEstimate square = gemm_intensity({2, 2, 2}, 4);
  CHECK(square.intensity == Rational::make(1, 3));
  CHECK(square.intensity == Rational::make(16, 48));

  const IntensityEstimate mv = gemm_intensity({1024, 1024, 1}, 4);
  CHECK(mv.work_flops == 2097152);
  CHECK(mv.traffic_bytes == 4202496);
  CHECK(mv.intensity == Rational::make(2097152, 4202496));
  CHECK(mv.intensity.value() == doctest::Approx(0.4990).epsilon(1e-3));
  CHECK(mv.tall_skinny);

  const IntensityEstimate big = gemm_intensity({4096, 4096, 4096}, 4);
  CHECK(big.intensity == Rational::make(2048, 3));  // = 682.67 FLOPs/byte
  CHECK(big.intensity.value() == doctest::Approx(682.7).epsilon(1e-3));
  CHECK_FALSE(big.tall_skinny);
}

TEST_CASE("tall-and-skinny detection uses the max/min ratio") {
  CHECK(is_tall_skinny({1024, 1024, 1}));      // ratio 1024
  CHECK_FALSE(is_tall_skinny({64, 64, 64}));   // ratio 1
  CHECK(is_tall_skinny({2048, 1, 2048}));      // tiny shared dimension
  CHECK(is_tall_skinny({64, 1, 64}));          // ratio exactly the threshold
  CHECK_FALSE(is_tall_skinny({63, 1, 63}));
  CHECK(is_tall_skinny({63, 1, 63}, 32.0));    // configurable threshold
}

TEST_CASE("boundedness compares intensity against machine balance") {
  const MachineModel balance10 = MachineModel::from_balance(10.0);
  IntensityEstimate est;
  est.intensity = Rational::make(1, 3);
  CHECK(boundedness(est, balance10) == Boundedness::MemoryBound);
  est.intensity = Rational::make(2048, 3);
  CHECK(boundedness(est, balance10) == Boundedness::ComputeBound);
  est.intensity = Rational::make(10, 1);  // exactly the balance
  CHECK(boundedness(est, balance10) == Boundedness::Balanced);
  est.intensity = Rational::make(1, 3);
  CHECK(boundedness(est, MachineModel{1.0, 3.0}) == Boundedness::Balanced);
}

TEST_CASE("estimate_record dispatches on category") {
  const auto dense = estimate_record(shaped_record("DenseMM", {{8, 4}, {4, 2}}), 4);
  REQUIRE(dense.has_value());
  CHECK(dense->work_flops == gemm_work({8, 4, 2}));
  CHECK(dense->traffic_bytes == gemm_traffic({8, 4, 2}, 4));

  // matrix-vector: an n-element vector reads as n x 1
  const auto mv = estimate_record(shaped_record("DenseMM", {{1024, 1024}, {1024}}), 4);
  REQUIRE(mv.has_value());
  CHECK(mv->intensity == Rational::make(2097152, 4202496));
  CHECK(mv->tall_skinny);

  const auto ew = estimate_record(shaped_record("ElementWise", {{10, 10}}), 4, 1);
  REQUIRE(ew.has_value());
  CHECK(ew->work_flops == 100);
  CHECK(ew->traffic_bytes == 800);
  CHECK(ew->intensity == Rational::make(1, 8));

  CHECK_FALSE(estimate_record(shaped_record("Regional", {{10, 10}}), 4).has_value());
  CHECK_FALSE(estimate_record(shaped_record("DenseMM", {{8, 22, 64}, {8, 64, 22}}), 4)
                  .has_value());  // batched shapes: no 2-D reading

  OpRecord unshaped;
  unshaped.name = "aten::mm";
  unshaped.category = CategoryId{"ml8", "DenseMM"};
  CHECK_FALSE(estimate_record(unshaped, 4).has_value());
}

TEST_CASE("estimate_record rejects non-conformable DenseMM shapes") {
  try {
    estimate_record(shaped_record("DenseMM", {{8, 4}, {5, 2}}), 4);
    FAIL("expected ShapeMismatch");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ShapeMismatch);
  }
}

TEST_CASE("property: intensity never exceeds (2/b)*min(m,k,n)") {
  tt::Rng rng(1000003);
  for (int trial = 0; trial < 2000; ++trial) {
    const GemmDims d{rand_int(rng, 1, 1 << 16), rand_int(rng, 1, 1 << 16),
                     rand_int(rng, 1, 1 << 16)};
    CHECK(bound_holds(d));
    for (std::int64_t b : {1, 2, 4, 8}) {
      const IntensityEstimate est = gemm_intensity(d, b);
      // I <= (2/b)*min  <=>  I.num * b * den_rhs <= 2*min * I.den
      const std::int64_t lo = std::min({d.m, d.k, d.n});
      const int128_t lhs = static_cast<int128_t>(est.intensity.num) * b;
      const int128_t rhs = static_cast<int128_t>(2) * lo * est.intensity.den;
      CHECK(lhs <= rhs);
    }
  }
}

TEST_CASE("property: intensity is strictly increasing in n with m, k fixed") {
  tt::Rng rng(77);
  for (int trial = 0; trial < 500; ++trial) {
    const std::int64_t m = rand_int(rng, 1, 4096);
    const std::int64_t k = rand_int(rng, 1, 4096);
    const std::int64_t n = rand_int(rng, 1, 4095);
    const Rational a = gemm_intensity({m, k, n}, 4).intensity;
    const Rational b = gemm_intensity({m, k, n + 1}, 4).intensity;
    CHECK(rational_less(a, b));
  }
}

TEST_CASE("scale degeneracy: one tiny dimension pins intensity near 2/b") {
  // k = 1 with m, n large: I = 2mn / (4(m + n + mn)) < 1/2, approaching it.
  const IntensityEstimate est = gemm_intensity({1 << 15, 1, 1 << 15}, 4);
  CHECK(rational_less(est.intensity, Rational::make(1, 2)));
  CHECK(est.intensity.value() > 0.49);
  CHECK(est.tall_skinny);
}
