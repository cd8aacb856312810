#include "semiframe/random.hpp"

namespace semiframe {

CMatrix Rng::gaussian(Index rows, Index cols) {
  CMatrix m(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) m(i, j) = Complex(normal(), normal());
  return m;
}

CVector Rng::unit_vector(Index n) {
  CVector v = gaussian(n);
  return v / v.norm();
}

CMatrix Rng::unitary(Index n) {
  Eigen::HouseholderQR<CMatrix> qr(gaussian(n, n));
  CMatrix q = qr.householderQ();
  const CMatrix& r = qr.matrixQR();
  for (Index j = 0; j < n; ++j) {
    const double mag = std::abs(r(j, j));
    if (mag > 0.0) q.col(j) *= r(j, j) / mag;
  }
  return q;
}

CMatrix Rng::conditioned(Index n, double lo, double hi) {
  RVector s(n);
  for (Index i = 0; i < n; ++i) s(i) = uniform(lo, hi);
  // extremes pinned so the condition number is exactly hi / lo
  s(0) = hi;
  if (n > 1) s(n - 1) = lo;
  return unitary(n) * s.cast<Complex>().asDiagonal() * unitary(n).adjoint();
}

VectorSystem random_system(Rng& rng, Index dim, Index count) {
  return VectorSystem(rng.gaussian(dim, count), RVector(), "random");
}

}  // namespace semiframe
