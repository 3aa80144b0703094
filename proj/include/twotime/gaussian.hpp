#pragma once

// Free particle in a Gaussian state, solved through second moments
// (hbar = 1; restore units by multiplying the uncertainty bounds by hbar).
// Heisenberg positions X_k = X + P t_k / m, displacement
// delta_12 = X_2 - X_1 = P (t2 - t1) / m.

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace twotime {

/// Gaussian preparation: means (x0, p0), spreads (dx, dp) and symmetrized
/// covariance xp_corr = <{dX, dP}>/2. Requires
/// dx^2 dp^2 - xp_corr^2 >= 1/4.
template <typename Real>
class GaussianPrep {
 public:
  GaussianPrep(Real x0, Real p0, Real dx, Real dp, Real xp_corr = Real(0))
      : x0_(x0), p0_(p0), dx_(dx), dp_(dp), xp_corr_(xp_corr) {
    if (!(dx > Real(0) && dp > Real(0)))
      throw std::invalid_argument("GaussianPrep: spreads must be positive");
    const Real det = dx * dx * dp * dp - xp_corr * xp_corr;
    if (det < Real(0.25) * (Real(1) - Real(1e-12))) {
      std::ostringstream msg;
      msg << "GaussianPrep: covariance determinant " << det << " below 1/4";
      throw std::invalid_argument(msg.str());
    }
  }

  Real x0() const { return x0_; }
  Real p0() const { return p0_; }
  Real dx() const { return dx_; }
  Real dp() const { return dp_; }
  Real xp_corr() const { return xp_corr_; }

 private:
  Real x0_, p0_, dx_, dp_, xp_corr_;
};

template <typename Real>
class FreeParticle {
 public:
  explicit FreeParticle(Real mass) : mass_(mass) {
    if (!(mass > Real(0))) throw std::invalid_argument("FreeParticle: mass must be positive");
  }
  Real mass() const { return mass_; }

 private:
  Real mass_;
};

template <typename Real>
struct DisplacementStats {
  Real mean;
  Real spread;
};

/// Mean p0 (t2 - t1) / m and spread dp (t2 - t1) / m of the displacement.
template <typename Real>
DisplacementStats<Real> displacement_stats(const GaussianPrep<Real>& g, const FreeParticle<Real>& fp,
                                           Real t1, Real t2) {
  if (t2 < t1) throw std::invalid_argument("displacement_stats: requires t2 >= t1");
  const Real scale = (t2 - t1) / fp.mass();
  return {g.p0() * scale, g.dp() * scale};
}

/// Cov(X_s, X_t) = dx^2 + (s + t) xp_corr / m + s t dp^2 / m^2
template <typename Real>
Real position_covariance(const GaussianPrep<Real>& g, const FreeParticle<Real>& fp, Real s, Real t) {
  const Real m = fp.mass();
  return g.dx() * g.dx() + (s + t) * g.xp_corr() / m + s * t * g.dp() * g.dp() / (m * m);
}

/// Delta X_t = sqrt(dx^2 + (dp t / m)^2 + 2 xp_corr t / m)
template <typename Real>
Real position_spread(const GaussianPrep<Real>& g, const FreeParticle<Real>& fp, Real t) {
  if (t < Real(0)) throw std::invalid_argument("position_spread: requires t >= 0");
  const Real variance = position_covariance(g, fp, t, t);
  if (variance < Real(0)) {
    std::ostringstream msg;
    msg << "position_spread: negative variance " << variance << " (inconsistent covariance)";
    throw std::logic_error(msg.str());
  }
  return std::sqrt(variance);
}

template <typename Real>
struct UncertaintyReport {
  Real spread_x1;
  Real spread_x2;
  Real displacement_spread;
  Real product;        // Delta X_1 Delta X_2
  Real product_bound;  // (t2 - t1) / (2 m)
  Real product_slack;
  Real sum_product;    // Delta delta_12 (Delta X_1 + Delta X_2)
  Real sum_bound;      // (t2 - t1) / m
  Real sum_slack;
};

template <typename Real>
UncertaintyReport<Real> uncertainty_report(const GaussianPrep<Real>& g, const FreeParticle<Real>& fp,
                                           Real t1, Real t2) {
  if (!(t2 > t1)) throw std::invalid_argument("uncertainty_report: requires t2 > t1");
  UncertaintyReport<Real> r;
  r.spread_x1 = position_spread(g, fp, t1);
  r.spread_x2 = position_spread(g, fp, t2);
  r.displacement_spread = displacement_stats(g, fp, t1, t2).spread;
  r.product = r.spread_x1 * r.spread_x2;
  r.product_bound = (t2 - t1) / (Real(2) * fp.mass());
  r.product_slack = r.product - r.product_bound;
  r.sum_product = r.displacement_spread * (r.spread_x1 + r.spread_x2);
  r.sum_bound = (t2 - t1) / fp.mass();
  r.sum_slack = r.sum_product - r.sum_bound;
  return r;
}

}  // namespace twotime
