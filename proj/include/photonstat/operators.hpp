#pragma once

#include <complex>

#include <Eigen/Dense>

namespace photonstat {

using Complex = std::complex<double>;

/// 2x2 operator in the basis {|g>, |e>} (index 0 = ground, 1 = excited).
using Operator2 = Eigen::Matrix2cd;
/// Column-stacked vectorization of a 2x2 operator.
using OpVector = Eigen::Vector4cd;
/// Superoperator acting on column-stacked vectors.
using SuperOp = Eigen::Matrix4cd;

namespace ops {

Operator2 identity();
Operator2 sigma_minus();  // |g><e|
Operator2 sigma_plus();   // |e><g|
Operator2 sigma_x();
Operator2 sigma_z();      // diag(-1, +1)
Operator2 ground_projector();
Operator2 excited_projector();

}  // namespace ops

/// vec(m) stacks columns: index = row + 2 * col.
OpVector vectorize(const Operator2& m);
Operator2 devectorize(const OpVector& v);

/// Row functional returning the trace of a vectorized operator.
Eigen::RowVector4cd trace_functional();
Complex trace(const OpVector& v);

/// Superoperators for rho -> a rho and rho -> rho b.
SuperOp left_multiply(const Operator2& a);
SuperOp right_multiply(const Operator2& b);
/// rho -> a rho b
SuperOp sandwich(const Operator2& a, const Operator2& b);
/// rho -> -i [h, rho]
SuperOp hamiltonian_generator(const Operator2& h);

/// Hermitian, unit-trace, positive-semidefinite 2x2 state.
class DensityMatrix {
 public:
  static constexpr double kHermitianTol = 1e-12;
  static constexpr double kTraceTol = 1e-10;
  static constexpr double kEigenTol = -1e-9;

  /// Throws ConfigError if the invariants do not hold.
  explicit DensityMatrix(const Operator2& m);

  static DensityMatrix ground();
  static DensityMatrix excited();

  /// Symmetrize (m + m^dagger)/2 and renormalize the trace to 1 before
  /// checking the invariants. Used after numerical propagation.
  static DensityMatrix restored(const Operator2& m);

  const Operator2& matrix() const { return m_; }
  OpVector vec() const { return vectorize(m_); }
  double population_excited() const { return m_(1, 1).real(); }
  double population_ground() const { return m_(0, 0).real(); }
  double min_eigenvalue() const;

 private:
  struct Unchecked {};
  DensityMatrix(const Operator2& m, Unchecked) : m_(m) {}
  Operator2 m_;
};

}  // namespace photonstat
