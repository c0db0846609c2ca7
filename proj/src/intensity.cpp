#include "tracelens/intensity.hpp"

#include <algorithm>

#include "tracelens/error.hpp"

namespace tracelens {

namespace {

void check_dims(const GemmDims& d) {
  if (d.m < 1 || d.k < 1 || d.n < 1)
    fail(ErrorKind::BadArgument, "GEMM dimensions must be >= 1, got (" + std::to_string(d.m) +
                                     ", " + std::to_string(d.k) + ", " + std::to_string(d.n) + ")");
}

void check_bytes(std::int64_t b) {
  if (b != 1 && b != 2 && b != 4 && b != 8)
    fail(ErrorKind::BadArgument,
         "bytes per element must be 1, 2, 4, or 8, got " + std::to_string(b));
}

}  // namespace

std::int64_t gemm_work(const GemmDims& d) {
  check_dims(d);
  return checked_mul(checked_mul(checked_mul(2, d.m, "GEMM work"), d.k, "GEMM work"), d.n,
                     "GEMM work");
}

std::int64_t gemm_traffic(const GemmDims& d, std::int64_t bytes_per_element) {
  check_dims(d);
  check_bytes(bytes_per_element);
  const std::int64_t mk = checked_mul(d.m, d.k, "GEMM traffic");
  const std::int64_t kn = checked_mul(d.k, d.n, "GEMM traffic");
  const std::int64_t mn = checked_mul(d.m, d.n, "GEMM traffic");
  return checked_mul(bytes_per_element,
                     checked_add(checked_add(mk, kn, "GEMM traffic"), mn, "GEMM traffic"),
                     "GEMM traffic");
}

bool is_tall_skinny(const GemmDims& d, double ratio_threshold) {
  check_dims(d);
  if (ratio_threshold < 1.0)
    fail(ErrorKind::BadArgument, "tall-skinny ratio threshold must be >= 1");
  const std::int64_t lo = std::min({d.m, d.k, d.n});
  const std::int64_t hi = std::max({d.m, d.k, d.n});
  return static_cast<long double>(hi) >=
         static_cast<long double>(ratio_threshold) * static_cast<long double>(lo);
}

IntensityEstimate gemm_intensity(const GemmDims& d, std::int64_t bytes_per_element,
                                 double tall_skinny_ratio) {
  IntensityEstimate est;
  est.work_flops = gemm_work(d);
  est.traffic_bytes = gemm_traffic(d, bytes_per_element);
  est.intensity = Rational::make(est.work_flops, est.traffic_bytes);
  est.tall_skinny = is_tall_skinny(d, tall_skinny_ratio);
  return est;
}

Boundedness boundedness(const IntensityEstimate& estimate, const MachineModel& machine,
                        double epsilon) {
  const double balance = machine.balance();
  if (!(balance > 0)) fail(ErrorKind::BadArgument, "machine balance must be positive");
  const long double i = static_cast<long double>(estimate.intensity.num) /
                        static_cast<long double>(estimate.intensity.den);
  const long double lo = static_cast<long double>(balance) * (1.0L - epsilon);
  const long double hi = static_cast<long double>(balance) * (1.0L + epsilon);
  if (i < lo) return Boundedness::MemoryBound;
  if (i > hi) return Boundedness::ComputeBound;
  return Boundedness::Balanced;
}

std::optional<IntensityEstimate> estimate_record(const OpRecord& record,
                                                 std::int64_t bytes_per_element,
                                                 std::int64_t ops_per_element) {
  check_bytes(bytes_per_element);
  if (!record.category || !record.shapes) return std::nullopt;
  const std::string& category = record.category->name;
  const std::vector<Shape>& shapes = *record.shapes;

  if (category == "DenseMM") {
    if (shapes.size() != 2) return std::nullopt;
    const Shape& a = shapes[0];
    const Shape& b = shapes[1];
    if (a.size() != 2 || (b.size() != 2 && b.size() != 1)) return std::nullopt;
    GemmDims dims;
    dims.m = a[0];
    dims.k = a[1];
    dims.n = b.size() == 2 ? b[1] : 1;  // a vector is a k x 1 matrix
    const std::int64_t b_rows = b[0];
    if (b_rows != dims.k)
      fail(ErrorKind::ShapeMismatch,
           "'" + record.name + "': cannot multiply [" + std::to_string(dims.m) + ", " +
               std::to_string(dims.k) + "] by an operand with " + std::to_string(b_rows) +
               " rows");
    return gemm_intensity(dims, bytes_per_element);
  }

  if (category == "ElementWise") {
    if (shapes.empty() || shapes[0].empty()) return std::nullopt;
    if (ops_per_element < 1)
      fail(ErrorKind::BadArgument, "ops per element must be >= 1");
    std::int64_t elements = 1;
    for (std::int64_t dim : shapes[0]) elements = checked_mul(elements, dim, "element count");
    IntensityEstimate est;
    est.work_flops = checked_mul(ops_per_element, elements, "element-wise work");
    // Each element is read once and written once.
    est.traffic_bytes =
        checked_mul(2 * bytes_per_element, elements, "element-wise traffic");
    est.intensity = Rational::make(est.work_flops, est.traffic_bytes);
    est.tall_skinny = false;
    return est;
  }

  return std::nullopt;
}

}  // namespace tracelens
