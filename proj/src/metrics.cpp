#include "sig/metrics.hpp"

#include <cmath>

namespace sig {

namespace {

void check_dims(const Gaussian& p, const Gaussian& q, const char* who) {
    if (p.dim() != q.dim()) {
        throw DimensionMismatch(std::string(who) + ": operand dimension mismatch");
    }
}

bool covs_equal(const SpdMatrix& a, const SpdMatrix& b) {
    const double scale = std::max({1.0, a.mat().norm(), b.mat().norm()});
    return (a.mat() - b.mat()).norm() <= kSliceTol * scale;
}

bool means_equal(const Vec& a, const Vec& b) {
    const double scale = std::max({1.0, a.norm(), b.norm()});
    return (a - b).norm() <= kSliceTol * scale;
}

/// Total order on Gaussians (means, then covariance entries row-major),
/// used to make the transport distance exactly symmetric.
bool lex_less(const Gaussian& p, const Gaussian& q) {
    for (int i = 0; i < p.dim(); ++i) {
        if (p.mean[i] != q.mean[i]) return p.mean[i] < q.mean[i];
    }
    for (int i = 0; i < p.dim(); ++i) {
        for (int j = 0; j < p.dim(); ++j) {
            if (p.cov(i, j) != q.cov(i, j)) return p.cov(i, j) < q.cov(i, j);
        }
    }
    return false;
}

bool lex_less(const SpdMatrix& a, const SpdMatrix& b) {
    for (int i = 0; i < a.dim(); ++i) {
        for (int j = 0; j < a.dim(); ++j) {
            if (a(i, j) != b(i, j)) return a(i, j) < b(i, j);
        }
    }
    return false;
}

} // namespace

double fisher_rao_distance_sq(const Gaussian& p, const Gaussian& q) {
    check_dims(p, q, "fisher_rao_distance_sq");
    if (covs_equal(p.cov, q.cov)) {
        return mahalanobis_sq(p.mean - q.mean, p.cov);
    }
    if (means_equal(p.mean, q.mean)) {
        // 1/2 * sum log^2 of the eigenvalues of S1^{-1/2} S2 S1^{-1/2};
        // those are the generalized eigenvalues of (S2, S1).
        const Mat w = spd_inv_sqrt(p.cov).mat();
        Eigen::SelfAdjointEigenSolver<Mat> es(w * q.cov.mat() * w);
        const Vec lam = es.eigenvalues();
        if (lam.minCoeff() < kEigenvalueFloor) {
            throw NearSingular("fisher_rao_distance_sq: whitened eigenvalue below floor");
        }
        return 0.5 * lam.array().log().square().sum();
    }
    throw UnsupportedGeodesic(
        "fisher_rao_distance_sq: no closed form when both mean and covariance differ");
}

double wasserstein2_distance_sq(const Gaussian& p, const Gaussian& q) {
    check_dims(p, q, "wasserstein2_distance_sq");
    if (p.mean.size() == 1) {
        // Scalar case in closed form: the matrix path's eigenvalue clamp
        // would distort covariances below its floor.
        const double ds = std::sqrt(p.cov(0, 0)) - std::sqrt(q.cov(0, 0));
        return (p.mean - q.mean).squaredNorm() + ds * ds;
    }
    const Gaussian& inner = lex_less(q, p) ? q : p;
    const Gaussian& outer = lex_less(q, p) ? p : q;
    const Mat s = detail::sym_sqrt(inner.cov.mat());
    const Mat cross = detail::sym_sqrt(s * outer.cov.mat() * s);
    double residual = inner.cov.trace() + outer.cov.trace() - 2.0 * cross.trace();
    if (residual < 0.0) {
        if (residual < -1e-10) {
            throw NumericalBreakdown("wasserstein2_distance_sq: negative trace residual");
        }
        residual = 0.0;
    }
    return (p.mean - q.mean).squaredNorm() + residual;
}

double affine_invariant_distance(const SpdMatrix& a, const SpdMatrix& b) {
    if (a.dim() != b.dim()) {
        throw DimensionMismatch("affine_invariant_distance: operand dimension mismatch");
    }
    const SpdMatrix& lo = lex_less(b, a) ? b : a;
    const SpdMatrix& hi = lex_less(b, a) ? a : b;
    const Mat w = spd_inv_sqrt(lo).mat();
    return detail::sym_log(w * hi.mat() * w).norm();
}

double distance_sq(const Gaussian& p, const Gaussian& q, MetricKind metric) {
    switch (metric) {
        case MetricKind::FisherRao:
            return fisher_rao_distance_sq(p, q);
        case MetricKind::Wasserstein2:
            return wasserstein2_distance_sq(p, q);
        case MetricKind::AffineInvariant: {
            check_dims(p, q, "distance_sq");
            if (!means_equal(p.mean, q.mean)) {
                throw Unsupported("distance_sq: affine-invariant metric compares "
                                  "covariances; means must coincide");
            }
            const double d = affine_invariant_distance(p.cov, q.cov);
            return d * d;
        }
    }
    throw Unsupported("distance_sq: unknown metric");
}

} // namespace sig
