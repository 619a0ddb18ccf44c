#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "photonstat/operators.hpp"

namespace photonstat {

/// Matrix exponential by scaling and squaring with the degree-13 Pade
/// approximant (Higham 2005). Suitable for the small dense matrices used
/// here (2x2 pure-state generators, 4x4 Liouvillians).
template <typename Matrix>
Matrix expm(const Matrix& a) {
  static constexpr double b[] = {64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
                                 1187353796428800.0,  129060195264000.0,   10559470521600.0,
                                 670442572800.0,      33522128640.0,       1323241920.0,
                                 40840800.0,          960960.0,            16380.0,
                                 182.0,               1.0};
  static constexpr double theta13 = 5.371920351148152;

  const double norm1 = a.cwiseAbs().colwise().sum().maxCoeff();
  if (norm1 == 0.0) return Matrix::Identity(a.rows(), a.cols());
  int squarings = 0;
  if (norm1 > theta13) squarings = static_cast<int>(std::ceil(std::log2(norm1 / theta13)));
  const Matrix x = a / std::ldexp(1.0, squarings);

  const Matrix id = Matrix::Identity(a.rows(), a.cols());
  const Matrix x2 = x * x;
  const Matrix x4 = x2 * x2;
  const Matrix x6 = x4 * x2;
  const Matrix u_inner = b[13] * x6 + b[11] * x4 + b[9] * x2;
  const Matrix u = x * (x6 * u_inner + b[7] * x6 + b[5] * x4 + b[3] * x2 + b[1] * id);
  const Matrix v_inner = b[12] * x6 + b[10] * x4 + b[8] * x2;
  const Matrix v = x6 * v_inner + b[6] * x6 + b[4] * x4 + b[2] * x2 + b[0] * id;

  Matrix r = (v - u).partialPivLu().solve(v + u);
  for (int s = 0; s < squarings; ++s) r = r * r;
  return r;
}

/// Lower-triangular block-Toeplitz matrix with 4x4 blocks, stored by its
/// first block column: blocks[j] sits on the j-th block subdiagonal.
///
/// The counting hierarchies are linear systems of exactly this shape: the
/// generator has a diagonal block D and a first-subdiagonal block S, and
/// its exponential keeps the structure, so only k + 1 blocks are needed.
class BlockToeplitz {
 public:
  BlockToeplitz() = default;
  explicit BlockToeplitz(std::size_t levels) : blocks_(levels, SuperOp::Zero()) {}

  static BlockToeplitz identity(std::size_t levels) {
    BlockToeplitz t(levels);
    t.blocks_[0] = SuperOp::Identity();
    return t;
  }

  std::size_t levels() const { return blocks_.size(); }
  const SuperOp& block(std::size_t j) const { return blocks_[j]; }
  SuperOp& block(std::size_t j) { return blocks_[j]; }

  BlockToeplitz operator*(const BlockToeplitz& rhs) const {
    BlockToeplitz out(levels());
    for (std::size_t j = 0; j < levels(); ++j)
      for (std::size_t i = 0; i <= j; ++i) out.blocks_[j].noalias() += blocks_[i] * rhs.blocks_[j - i];
    return out;
  }

  /// out[m] = sum_{j <= m} blocks[j] * in[m - j]
  std::vector<OpVector> apply(const std::vector<OpVector>& in) const {
    std::vector<OpVector> out(in.size(), OpVector::Zero());
    const std::size_t n = std::min(in.size(), levels());
    for (std::size_t m = 0; m < n; ++m)
      for (std::size_t j = 0; j <= m; ++j) out[m].noalias() += blocks_[j] * in[m - j];
    return out;
  }

 private:
  std::vector<SuperOp> blocks_;
};

/// exp(h * G) where G has diagonal block `diag` and subdiagonal block `sub`
/// on `levels` block rows. Taylor series on the scaled generator followed by
/// repeated squaring, all in the block-Toeplitz representation.
BlockToeplitz hierarchy_exponential(const SuperOp& diag, const SuperOp& sub, double h,
                                    std::size_t levels);

}  // namespace photonstat
