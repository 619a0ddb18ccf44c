#include "photonstat/operators.hpp"

#include <cmath>
#include <sstream>

#include "photonstat/errors.hpp"

namespace photonstat {

namespace ops {

Operator2 identity() { return Operator2::Identity(); }

Operator2 sigma_minus() {
  Operator2 m = Operator2::Zero();
  m(0, 1) = 1.0;
  return m;
}

Operator2 sigma_plus() {
  Operator2 m = Operator2::Zero();
  m(1, 0) = 1.0;
  return m;
}

Operator2 sigma_x() { return sigma_plus() + sigma_minus(); }

Operator2 sigma_z() {
  Operator2 m = Operator2::Zero();
  m(0, 0) = -1.0;
  m(1, 1) = 1.0;
  return m;
}

Operator2 ground_projector() {
  Operator2 m = Operator2::Zero();
  m(0, 0) = 1.0;
  return m;
}

Operator2 excited_projector() {
  Operator2 m = Operator2::Zero();
  m(1, 1) = 1.0;
  return m;
}

}  // namespace ops

OpVector vectorize(const Operator2& m) {
  OpVector v;
  v << m(0, 0), m(1, 0), m(0, 1), m(1, 1);
  return v;
}

Operator2 devectorize(const OpVector& v) {
  Operator2 m;
  m << v(0), v(2), v(1), v(3);
  return m;
}

Eigen::RowVector4cd trace_functional() {
  Eigen::RowVector4cd r;
  r << 1.0, 0.0, 0.0, 1.0;
  return r;
}

Complex trace(const OpVector& v) { return v(0) + v(3); }

// vec(A X B) = (B^T kron A) vec(X) for column stacking.
SuperOp sandwich(const Operator2& a, const Operator2& b) {
  const Operator2 bt = b.transpose();
  SuperOp s;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) s.block<2, 2>(2 * i, 2 * j) = bt(i, j) * a;
  return s;
}

SuperOp left_multiply(const Operator2& a) { return sandwich(a, ops::identity()); }

SuperOp right_multiply(const Operator2& b) { return sandwich(ops::identity(), b); }

SuperOp hamiltonian_generator(const Operator2& h) {
  const Complex i{0.0, 1.0};
  return -i * (left_multiply(h) - right_multiply(h));
}

DensityMatrix::DensityMatrix(const Operator2& m) : m_(m) {
  const double herm = (m - m.adjoint()).cwiseAbs().maxCoeff();
  if (herm > kHermitianTol) {
    std::ostringstream os;
    os << "density matrix is not Hermitian (deviation " << herm << ")";
    throw ConfigError(os.str());
  }
  const Complex tr = m.trace();
  if (std::abs(tr - 1.0) > kTraceTol) {
    std::ostringstream os;
    os << "density matrix trace " << tr.real() << " differs from 1";
    throw ConfigError(os.str());
  }
  if (min_eigenvalue() < kEigenTol) {
    throw ConfigError("density matrix has a negative eigenvalue");
  }
}

DensityMatrix DensityMatrix::ground() { return DensityMatrix(ops::ground_projector(), Unchecked{}); }

DensityMatrix DensityMatrix::excited() {
  return DensityMatrix(ops::excited_projector(), Unchecked{});
}

DensityMatrix DensityMatrix::restored(const Operator2& m) {
  Operator2 h = 0.5 * (m + m.adjoint());
  const double tr = h.trace().real();
  if (!(tr > 0.0)) throw NumericalError("propagated state has non-positive trace");
  if (std::abs(tr - 1.0) > 1e-12) h /= tr;
  DensityMatrix out(h, Unchecked{});
  if (out.min_eigenvalue() < kEigenTol) {
    throw NumericalError("propagated state lost positivity");
  }
  return out;
}

double DensityMatrix::min_eigenvalue() const {
  // Closed form for a 2x2 Hermitian matrix.
  const double a = m_(0, 0).real();
  const double d = m_(1, 1).real();
  const double off = std::abs(m_(0, 1));
  const double mean = 0.5 * (a + d);
  const double half_gap = std::sqrt(0.25 * (a - d) * (a - d) + off * off);
  return mean - half_gap;
}

}  // namespace photonstat
