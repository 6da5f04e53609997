#include "anumrad/harness/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "anumrad/error.hpp"
#include "anumrad/generators.hpp"

namespace anumrad::harness {

namespace {

constexpr double kMinSeminorm = 1e-6;

// Objective evaluated straight from the definitions on a vector x, plus its
// Wirtinger gradient d f / d conj(x).
struct Objective {
  std::function<double(const CVector& x, const CVector& ax)> value;
  std::function<CVector(const CVector& x, const CVector& ax, double f)> gradient;
};

// Samples x, keeps the best, and refines them by preconditioned gradient
// ascent on the A-unit sphere with step halving.
//
// Search directions use the map y -> W y with W = (A^{1/2})^+ + (I - P) G for a
// random G: it spreads samples evenly over the A-unit sphere. The null-space
// part only takes part in the ||x||_A >= 1e-6 admission test.
double maximize(const SemiHilbertContext& ctx, const Objective& obj, const OracleOptions& opts) {
  if (opts.samples == 0) throw Error(ErrorCode::invalid_input, "oracle: samples must be >= 1");
  const std::size_t n = ctx.dim();
  const ComplexMatrix& a = ctx.weight();
  Rng rng(opts.seed);
  const ComplexMatrix null_mix =
      (ComplexMatrix::identity(n) - ctx.range_projector()) * rand_ginibre(n, n, rng);
  const ComplexMatrix w = ctx.pinv_sqrt_weight() + null_mix;
  const ComplexMatrix step_map = ctx.range_projector() * w * w.adjoint();

  struct Candidate {
    double f;
    CVector x;
  };
  std::vector<Candidate> best;
  const std::size_t keep = std::max<std::size_t>(1, opts.refine_top);

  const ComplexMatrix& p = ctx.range_projector();

  // Normalizes x to ||x||_A = 1; false when x is (numerically) in N(A).
  // For T in B_A both objectives only see x modulo N(A), so x is replaced by
  // P x: a sample near the 1e-6 floor would otherwise be rescaled to ||x|| ~ 1e6
  // and its value would be mostly rounding noise.
  auto normalize = [&](CVector& x, CVector& ax) {
    ax = a * x;
    double q = inner(ax, x).real();
    if (!(q > 0.0) || std::sqrt(q) < kMinSeminorm) return false;
    x = p * x;
    ax = a * x;
    q = inner(ax, x).real();
    if (!(q > 0.0)) return false;
    const double s = 1.0 / std::sqrt(q);
    for (auto& z : x) z *= s;
    for (auto& z : ax) z *= s;
    return true;
  };

  CVector y(n), x, ax;
  std::size_t accepted = 0;
  for (std::size_t k = 0; k < opts.samples; ++k) {
    for (auto& z : y) z = rng.complex_normal();
    const double yn = vector_norm(y);
    for (auto& z : y) z /= yn;
    // Alternate plain Gaussian directions with whitened ones.
    x = (k % 2 == 0) ? w * y : y;
    if (!normalize(x, ax)) continue;
    ++accepted;
    const double f = obj.value(x, ax);
    if (best.size() < keep || f > best.back().f) {
      best.push_back({f, x});
      std::sort(best.begin(), best.end(), [](const auto& l, const auto& r) { return l.f > r.f; });
      if (best.size() > keep) best.pop_back();
    }
  }
  if (accepted == 0) {
    throw Error(ErrorCode::context, "oracle: every sample had ||x||_A below 1e-6");
  }

  double result = best.front().f;
  for (auto& cand : best) {
    CVector xc = cand.x;
    CVector axc = a * xc;
    double f = cand.f;
    double eta = 0.5;
    for (int step = 0; step < opts.ascent_steps; ++step) {
      const CVector g = obj.gradient(xc, axc, f);
      // Steps inside N(A) leave f unchanged but inflate ||x||, and the rounding
      // in x*Ax grows like eps ||x||^2. Drop that part of the step.
      const CVector d = step_map * g;
      CVector trial(n);
      for (std::size_t i = 0; i < n; ++i) trial[i] = xc[i] + eta * d[i];
      CVector atrial;
      double ft = -1.0;
      if (normalize(trial, atrial)) ft = obj.value(trial, atrial);
      if (ft > f) {
        xc = std::move(trial);
        axc = std::move(atrial);
        f = ft;
        eta *= 1.5;
      } else {
        eta *= 0.5;
      }
    }
    result = std::max(result, f);
  }
  return result;
}

}  // namespace

double mc_omega_oracle(const SemiHilbertContext& ctx, const ComplexMatrix& t,
                       const OracleOptions& opts) {
  if (!in_B_A_half(ctx, t).holds) throw Error(ErrorCode::not_bounded, "oracle: T not A-bounded");
  const ComplexMatrix at = ctx.weight() * t;
  const ComplexMatrix ta = t.adjoint() * ctx.weight();
  Objective obj;
  // |<Tx, x>_A| = |x* A T x| on the A-unit sphere.
  obj.value = [&](const CVector& x, const CVector&) { return std::abs(inner(at * x, x)); };
  obj.gradient = [&](const CVector& x, const CVector& ax, double f) {
    const CVector atx = at * x;
    const CVector tax = ta * x;
    const cplx z = inner(atx, x);
    CVector g(x.size());
    if (f == 0.0) return g;
    const cplx zc = std::conj(z);
    for (std::size_t i = 0; i < g.size(); ++i) {
      g[i] = (zc * atx[i] + z * tax[i]) / (2.0 * f) - f * ax[i];
    }
    return g;
  };
  return maximize(ctx, obj, opts);
}

double mc_norm_oracle(const SemiHilbertContext& ctx, const ComplexMatrix& t,
                      const OracleOptions& opts) {
  if (!in_B_A_half(ctx, t).holds) throw Error(ErrorCode::not_bounded, "oracle: T not A-bounded");
  const ComplexMatrix& a = ctx.weight();
  Objective obj;
  // ||Tx||_A^2 = <A T x, T x> on the A-unit sphere.
  obj.value = [&](const CVector& x, const CVector&) {
    const CVector tx = t * x;
    return inner(a * tx, tx).real();
  };
  const ComplexMatrix gram = t.adjoint() * a * t;
  obj.gradient = [&](const CVector& x, const CVector& ax, double f) {
    const CVector gx = gram * x;
    CVector g(x.size());
    for (std::size_t i = 0; i < g.size(); ++i) g[i] = gx[i] - f * ax[i];
    return g;
  };
  return std::sqrt(std::max(maximize(ctx, obj, opts), 0.0));
}

}  // namespace anumrad::harness
