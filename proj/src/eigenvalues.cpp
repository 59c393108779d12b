#include "leafsight/eigenvalues.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace leafsight {

namespace {

// In-place Householder reduction to upper Hessenberg form.
void hessenberg(MatX& a) {
  const Index n = a.rows();
  for (Index k = 0; k + 2 < n; ++k) {
    VecX x = a.col(k).segment(k + 1, n - k - 1);
    const Scalar norm = x.norm();
    if (norm == Scalar(0)) continue;
    Scalar alpha = x(0) >= 0 ? -norm : norm;
    VecX v = x;
    v(0) -= alpha;
    const Scalar vnorm = v.norm();
    if (vnorm == Scalar(0)) continue;
    v /= vnorm;
    // A <- (I - 2vv^T) A (I - 2vv^T) restricted to the trailing block
    auto rows = a.block(k + 1, 0, n - k - 1, n);
    rows -= Scalar(2) * v * (v.transpose() * rows);
    auto cols = a.block(0, k + 1, n, n - k - 1);
    cols -= Scalar(2) * (cols * v) * v.transpose();
  }
}

// Eigenvalues of a trailing 2x2 block; real parts only for complex pairs.
void solve_2x2(Scalar a, Scalar b, Scalar c, Scalar d, Scalar& l1, Scalar& l2) {
  const Scalar tr = a + d;
  const Scalar det = a * d - b * c;
  const Scalar disc = tr * tr / 4 - det;
  if (disc >= 0) {
    const Scalar root = std::sqrt(disc);
    l1 = tr / 2 + root;
    l2 = tr / 2 - root;
  } else {
    l1 = l2 = tr / 2;
  }
}

}  // namespace

std::vector<Scalar> real_eigenvalues_qr(MatX a, Scalar tol, int max_sweeps) {
  const Index n = a.rows();
  if (a.cols() != n) throw ParamError("real_eigenvalues_qr: matrix must be square");
  std::vector<Scalar> eig;
  if (n == 0) return eig;
  if (n == 1) return {a(0, 0)};

  hessenberg(a);
  const Scalar scale = std::max(a.cwiseAbs().maxCoeff(), Scalar(1));

  Index hi = n - 1;  // active block is 0..hi
  int sweeps = 0;
  while (true) {
    if (hi == 0) {
      eig.push_back(a(0, 0));
      break;
    }
    if (std::abs(a(hi, hi - 1)) <= tol * scale) {
      eig.push_back(a(hi, hi));
      --hi;
      continue;
    }
    if (hi == 1 || std::abs(a(hi - 1, hi - 2)) <= tol * scale) {
      // Converged 2x2 block at the bottom: take its eigenvalues directly.
      Scalar l1, l2;
      solve_2x2(a(hi - 1, hi - 1), a(hi - 1, hi), a(hi, hi - 1), a(hi, hi),
                l1, l2);
      eig.push_back(l1);
      eig.push_back(l2);
      if (hi == 1) break;
      hi -= 2;
      continue;
    }

    if (++sweeps > max_sweeps)
      throw ConvergenceError("real_eigenvalues_qr: QR iteration did not converge",
                             std::abs(a(hi, hi - 1)) / scale);

    // Wilkinson shift: eigenvalue of the trailing 2x2 nearest a(hi, hi).
    Scalar l1, l2;
    solve_2x2(a(hi - 1, hi - 1), a(hi - 1, hi), a(hi, hi - 1), a(hi, hi), l1, l2);
    const Scalar shift =
        std::abs(l1 - a(hi, hi)) < std::abs(l2 - a(hi, hi)) ? l1 : l2;

    // One shifted QR step on the active block via Givens rotations.
    const Index m = hi + 1;
    std::vector<std::array<Scalar, 2>> rot(static_cast<std::size_t>(m) - 1);
    for (Index i = 0; i < m; ++i) a(i, i) -= shift;
    for (Index k = 0; k + 1 < m; ++k) {
      const Scalar x = a(k, k);
      const Scalar z = a(k + 1, k);
      const Scalar r = std::hypot(x, z);
      const Scalar cs = r == 0 ? 1 : x / r;
      const Scalar sn = r == 0 ? 0 : z / r;
      rot[k] = {cs, sn};
      for (Index j = k; j < m; ++j) {
        const Scalar t1 = a(k, j);
        const Scalar t2 = a(k + 1, j);
        a(k, j) = cs * t1 + sn * t2;
        a(k + 1, j) = -sn * t1 + cs * t2;
      }
    }
    for (Index k = 0; k + 1 < m; ++k) {
      const Scalar cs = rot[k][0];
      const Scalar sn = rot[k][1];
      for (Index i = 0; i <= std::min(k + 2, m - 1); ++i) {
        const Scalar t1 = a(i, k);
        const Scalar t2 = a(i, k + 1);
        a(i, k) = cs * t1 + sn * t2;
        a(i, k + 1) = -sn * t1 + cs * t2;
      }
    }
    for (Index i = 0; i < m; ++i) a(i, i) += shift;
  }

  std::sort(eig.begin(), eig.end(), std::greater<Scalar>());
  return eig;
}

}  // namespace leafsight
