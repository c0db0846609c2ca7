#pragma once

#include <cstdint>
#include <optional>

#include "tracelens/calltree.hpp"
#include "tracelens/rational.hpp"

namespace tracelens {

// Dimensions of one GEMM: an m x k matrix multiplied by a k x n matrix,
// producing m x n.
struct GemmDims {
  std::int64_t m = 1;
  std::int64_t k = 1;
  std::int64_t n = 1;

  friend bool operator==(const GemmDims&, const GemmDims&) = default;
};

// Work, compulsory traffic, and their exact ratio for one operation.
// No floating point in the core formulas: W and Q are integers and I is an
// exact rational, so I <= (2/b)*min(m,k,n) can be asserted with equality.
struct IntensityEstimate {
  std::int64_t work_flops = 0;
  std::int64_t traffic_bytes = 0;
  Rational intensity;  // work / traffic
  bool tall_skinny = false;

  friend bool operator==(const IntensityEstimate&, const IntensityEstimate&) = default;
};

// Peak rates of the machine the trace came from; balance = flops per byte.
struct MachineModel {
  double peak_flops_per_s = 1.0;
  double peak_bytes_per_s = 1.0;

  double balance() const { return peak_flops_per_s / peak_bytes_per_s; }

  static MachineModel from_balance(double flops_per_byte) {
    return MachineModel{flops_per_byte, 1.0};
  }
};

enum class Boundedness { MemoryBound, ComputeBound, Balanced };

inline const char* to_string(Boundedness b) {
  switch (b) {
    case Boundedness::MemoryBound: return "memory-bound";
    case Boundedness::ComputeBound: return "compute-bound";
    case Boundedness::Balanced: return "balanced";
  }
  return "?";
}

inline constexpr double kDefaultTallSkinnyRatio = 64.0;
inline constexpr std::int64_t kDefaultBytesPerElement = 4;  // 32-bit floats

// W = 2*m*k*n (multiply-add counted as 2 FLOPs). Errors: Overflow.
std::int64_t gemm_work(const GemmDims& dims);

// Q = b*(mk + kn + mn): compulsory traffic of both inputs plus the output.
std::int64_t gemm_traffic(const GemmDims& dims, std::int64_t bytes_per_element);

// I = W/Q as an exact rational, with tall-and-skinny detection.
IntensityEstimate gemm_intensity(const GemmDims& dims, std::int64_t bytes_per_element,
                                 double tall_skinny_ratio = kDefaultTallSkinnyRatio);

// max(m,k,n) / min(m,k,n) >= ratio_threshold.
bool is_tall_skinny(const GemmDims& dims, double ratio_threshold = kDefaultTallSkinnyRatio);

// Intensity against machine balance with a +/-5% balanced band.
Boundedness boundedness(const IntensityEstimate& estimate, const MachineModel& machine,
                        double epsilon = 0.05);

// Category dispatch: DenseMM with two conformable 2-D shapes uses the GEMM
// formulas (a 1-D second operand is read as k x 1); ElementWise uses
// W = c*elements, Q = 2*b*elements over the first input. Other categories
// have no estimate. Errors: ShapeMismatch for non-conformable DenseMM shapes.
std::optional<IntensityEstimate> estimate_record(const OpRecord& record,
                                                 std::int64_t bytes_per_element = kDefaultBytesPerElement,
                                                 std::int64_t ops_per_element = 1);

}  // namespace tracelens
