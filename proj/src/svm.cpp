#include "leafsight/svm.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

namespace leafsight {

namespace {

// Steps below this relative size do not count as progress; smaller values
// let near-converged multiplier pairs oscillate indefinitely.
constexpr Scalar kStepEps = 1e-3;
// Round-off snap onto the box bounds.
constexpr Scalar kSnapEps = 1e-10;

struct SmoState {
  const MatX& x;
  const VecX& y;
  MatX k;      // precomputed kernel matrix
  VecX alpha;
  VecX f;      // current decision values over training rows
  Scalar b = 0;
  Scalar c;
  Scalar tol;
  std::mt19937_64 rng;

  SmoState(const MatX& x_, const VecX& y_, const KernelSpec& spec,
           const SmoParams& params)
      : x(x_), y(y_), c(params.c), tol(params.tol), rng(params.rng_seed) {
    const Index n = x.rows();
    k.resize(n, n);
    for (Index i = 0; i < n; ++i) {
      for (Index j = i; j < n; ++j) {
        const Scalar v = kernel_eval(spec, x.row(i).transpose(), x.row(j).transpose());
        k(i, j) = v;
        k(j, i) = v;
      }
    }
    alpha = VecX::Zero(n);
    f = VecX::Zero(n);
  }

  bool take_step(Index i1, Index i2) {
    if (i1 == i2) return false;
    const Scalar a1_old = alpha(i1);
    const Scalar a2_old = alpha(i2);
    const Scalar y1 = y(i1);
    const Scalar y2 = y(i2);
    const Scalar e1 = f(i1) - y1;
    const Scalar e2 = f(i2) - y2;
    const Scalar s = y1 * y2;

    Scalar lo, hi;
    if (y1 != y2) {
      lo = std::max(Scalar(0), a2_old - a1_old);
      hi = std::min(c, c + a2_old - a1_old);
    } else {
      lo = std::max(Scalar(0), a1_old + a2_old - c);
      hi = std::min(c, a1_old + a2_old);
    }
    if (lo >= hi) return false;

    const Scalar eta = k(i1, i1) + k(i2, i2) - 2 * k(i1, i2);
    if (eta <= 0) return false;  // degenerate pair; another partner will do

    Scalar a2 = a2_old + y2 * (e1 - e2) / eta;
    a2 = std::clamp(a2, lo, hi);
    if (std::abs(a2 - a2_old) < kStepEps * (a2 + a2_old + kStepEps)) return false;
    Scalar a1 = a1_old + s * (a2_old - a2);
    // snap round-off residue onto the box bounds
    if (a1 < kSnapEps) a1 = 0;
    if (a1 > c - kSnapEps) a1 = c;

    const Scalar d1 = y1 * (a1 - a1_old);
    const Scalar d2 = y2 * (a2 - a2_old);
    const Scalar b1 = b - e1 - d1 * k(i1, i1) - d2 * k(i1, i2);
    const Scalar b2 = b - e2 - d1 * k(i1, i2) - d2 * k(i2, i2);
    Scalar b_new;
    if (a1 > 0 && a1 < c)
      b_new = b1;
    else if (a2 > 0 && a2 < c)
      b_new = b2;
    else
      b_new = (b1 + b2) / 2;

    f += d1 * k.col(i1) + d2 * k.col(i2);
    f.array() += b_new - b;
    b = b_new;
    alpha(i1) = a1;
    alpha(i2) = a2;
    return true;
  }

  bool violates_kkt(Index i) const {
    const Scalar r = (f(i) - y(i)) * y(i);  // y f - 1
    return (r < -tol && alpha(i) < c) || (r > tol && alpha(i) > 0);
  }

  // The incremental f updates accumulate round-off over long runs with
  // large kernel magnitudes; refresh against the exact dual sum.
  void refresh_cache() {
    f = k * alpha.cwiseProduct(y);
    f.array() += b;
  }

  // Partner hierarchy: one seeded random draw, then the largest |E1 - E2|
  // partner among the non-bound set, then the non-bound set and all rows
  // from random offsets.
  bool examine(Index i2) {
    if (!violates_kkt(i2)) return false;
    const Index n = x.rows();
    std::uniform_int_distribution<Index> pick(0, n - 1);

    Index j = pick(rng);
    if (j != i2 && take_step(j, i2)) return true;

    const Scalar e2 = f(i2) - y(i2);
    Index best = -1;
    Scalar best_gap = -1;
    for (Index cand = 0; cand < n; ++cand) {
      if (cand == i2 || alpha(cand) <= 0 || alpha(cand) >= c) continue;
      const Scalar gap = std::abs(f(cand) - y(cand) - e2);
      if (gap > best_gap) {
        best_gap = gap;
        best = cand;
      }
    }
    if (best >= 0 && take_step(best, i2)) return true;

    const Index start1 = pick(rng);
    for (Index off = 0; off < n; ++off) {
      const Index cand = (start1 + off) % n;
      if (cand == i2 || cand == best || alpha(cand) <= 0 || alpha(cand) >= c)
        continue;
      if (take_step(cand, i2)) return true;
    }
    const Index start2 = pick(rng);
    for (Index off = 0; off < n; ++off) {
      const Index cand = (start2 + off) % n;
      if (cand == i2) continue;
      if (take_step(cand, i2)) return true;
    }
    return false;
  }

  Scalar worst_violation() const {
    Scalar worst = 0;
    for (Index i = 0; i < x.rows(); ++i) {
      const Scalar yf = y(i) * f(i);
      Scalar v = 0;
      if (alpha(i) <= 0)
        v = std::max(Scalar(0), 1 - yf);
      else if (alpha(i) >= c)
        v = std::max(Scalar(0), yf - 1);
      else
        v = std::abs(yf - 1);
      worst = std::max(worst, v);
    }
    return worst;
  }
};

}  // namespace

BinarySvmModel smo_train(const MatX& x, const VecX& y, const KernelSpec& spec,
                         const SmoParams& params) {
  return smo_train_detailed(x, y, spec, params).model;
}

SmoDetail smo_train_detailed(const MatX& x, const VecX& y, const KernelSpec& spec,
                             const SmoParams& params) {
  spec.validate();
  const Index n = x.rows();
  if (n < 2) throw ParamError("smo_train: need at least two rows");
  bool pos = false, neg = false;
  for (Index i = 0; i < n; ++i) {
    if (y(i) == 1)
      pos = true;
    else if (y(i) == -1)
      neg = true;
    else
      throw ParamError("smo_train: labels must be -1 or +1");
  }
  if (!pos || !neg) throw ParamError("smo_train: both labels must be present");

  SmoState st(x, y, spec, params);
  int quiet = 0;
  int sweeps = 0;
  while (quiet < params.max_passes) {
    if (++sweeps > params.max_sweeps) {
      st.refresh_cache();
      throw ConvergenceError("smo_train: sweep cap exceeded, worst KKT violation " +
                                 std::to_string(st.worst_violation()),
                             st.worst_violation());
    }
    if (sweeps % 16 == 0) st.refresh_cache();
    int changed = 0;
    for (Index i = 0; i < n; ++i) changed += st.examine(i) ? 1 : 0;
    quiet = changed == 0 ? quiet + 1 : 0;
  }
  st.refresh_cache();

  SmoDetail out;
  out.model.kernel = spec;
  out.model.c = params.c;
  out.model.bias = st.b;
  std::vector<Index> sv;
  for (Index i = 0; i < n; ++i)
    if (st.alpha(i) > 0) sv.push_back(i);
  out.model.support_vectors.resize(static_cast<Index>(sv.size()), x.cols());
  out.model.dual_coefs.resize(static_cast<Index>(sv.size()));
  for (std::size_t i = 0; i < sv.size(); ++i) {
    out.model.support_vectors.row(static_cast<Index>(i)) = x.row(sv[i]);
    out.model.dual_coefs(static_cast<Index>(i)) = st.alpha(sv[i]) * y(sv[i]);
  }
  out.alphas = st.alpha;
  out.decision_values = st.f;
  out.sweeps = sweeps;
  return out;
}

Scalar svm_decision(const BinarySvmModel& model, const VecX& x) {
  if (x.size() != model.support_vectors.cols())
    throw ParamError("svm_decision: width mismatch with training data");
  Scalar f = model.bias;
  for (Index i = 0; i < model.support_vectors.rows(); ++i)
    f += model.dual_coefs(i) *
         kernel_eval(model.kernel, model.support_vectors.row(i).transpose(), x);
  return f;
}

}  // namespace leafsight
