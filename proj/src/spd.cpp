#include "sig/spd.hpp"

#include <cmath>

namespace sig {

namespace detail {

bool is_symmetric(const Mat& m) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = i + 1; j < m.cols(); ++j) {
            const double tol = kSymmetryTol * std::max(1.0, std::abs(m(i, j)));
            if (std::abs(m(i, j) - m(j, i)) > tol) return false;
        }
    }
    return true;
}

Mat sym_sqrt(const Mat& m) {
    Eigen::SelfAdjointEigenSolver<Mat> es(m);
    const Vec lam = es.eigenvalues().cwiseMax(kEigenvalueFloor);
    return es.eigenvectors() * lam.cwiseSqrt().asDiagonal() * es.eigenvectors().transpose();
}

Mat sym_log(const Mat& m) {
    Eigen::SelfAdjointEigenSolver<Mat> es(m);
    const Vec lam = es.eigenvalues();
    if (lam.minCoeff() < kEigenvalueFloor) {
        throw NearSingular("matrix logarithm: eigenvalue below clamp floor");
    }
    return es.eigenvectors() * lam.array().log().matrix().asDiagonal() *
           es.eigenvectors().transpose();
}

} // namespace detail

SpdMatrix::SpdMatrix(Mat m) {
    if (m.rows() == 0 || m.rows() != m.cols()) {
        throw InvalidMatrix("SpdMatrix: matrix must be square and non-empty");
    }
    if (!m.allFinite()) {
        throw InvalidMatrix("SpdMatrix: non-finite entry");
    }
    if (!detail::is_symmetric(m)) {
        throw InvalidMatrix("SpdMatrix: asymmetric beyond tolerance");
    }
    m_ = 0.5 * (m + m.transpose());
    Eigen::SelfAdjointEigenSolver<Mat> es(m_, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() <= 0.0) {
        throw InvalidMatrix("SpdMatrix: not positive definite");
    }
}

SpdMatrix SpdMatrix::identity(int dim) {
    return SpdMatrix(Mat::Identity(dim, dim));
}

SpdMatrix spd_sqrt(const SpdMatrix& a) {
    return SpdMatrix(detail::sym_sqrt(a.mat()));
}

SpdMatrix spd_inv_sqrt(const SpdMatrix& a) {
    Eigen::SelfAdjointEigenSolver<Mat> es(a.mat());
    const Vec lam = es.eigenvalues();
    if (lam.minCoeff() < kEigenvalueFloor) {
        throw NearSingular("spd_inv_sqrt: eigenvalue below clamp floor");
    }
    const Mat r = es.eigenvectors() * lam.cwiseSqrt().cwiseInverse().asDiagonal() *
                  es.eigenvectors().transpose();
    return SpdMatrix(r);
}

Mat spd_log(const SpdMatrix& a) {
    return detail::sym_log(a.mat());
}

SpdMatrix spd_exp(const Mat& s) {
    if (!s.allFinite()) throw InvalidMatrix("spd_exp: non-finite entry");
    if (!detail::is_symmetric(s)) throw InvalidMatrix("spd_exp: asymmetric argument");
    Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (s + s.transpose()));
    const Mat r = es.eigenvectors() * es.eigenvalues().array().exp().matrix().asDiagonal() *
                  es.eigenvectors().transpose();
    return SpdMatrix(r);
}

double mahalanobis_sq(const Vec& v, const SpdMatrix& a) {
    if (v.size() != a.dim()) {
        throw DimensionMismatch("mahalanobis_sq: vector/matrix dimension mismatch");
    }
    const Vec x = a.mat().ldlt().solve(v);
    return v.dot(x);
}

} // namespace sig
