#include "sig/barycenter.hpp"

#include <cmath>

namespace sig {

void WeightedGaussianSet::validate() const {
    if (components.empty()) {
        throw DomainError("WeightedGaussianSet: empty component list");
    }
    if (components.size() != weights.size()) {
        throw DimensionMismatch("WeightedGaussianSet: component/weight count mismatch");
    }
    const int d = components.front().dim();
    for (const auto& g : components) {
        if (g.dim() != d) {
            throw DimensionMismatch("WeightedGaussianSet: mixed component dimensions");
        }
    }
    for (const double w : weights) {
        if (!(w > 0.0) || !std::isfinite(w)) {
            throw DomainError("WeightedGaussianSet: weights must be positive and finite");
        }
    }
}

std::vector<double> WeightedGaussianSet::normalized_weights() const {
    double total = 0.0;
    for (const double w : weights) total += w;
    std::vector<double> out(weights.size());
    for (std::size_t i = 0; i < weights.size(); ++i) out[i] = weights[i] / total;
    return out;
}

Vec mean_component(const WeightedGaussianSet& set) {
    set.validate();
    const auto w = set.normalized_weights();
    Vec m = Vec::Zero(set.components.front().dim());
    for (std::size_t i = 0; i < set.components.size(); ++i) {
        m += w[i] * set.components[i].mean;
    }
    return m;
}

BarycenterResult wasserstein_barycenter(const WeightedGaussianSet& set,
                                        const SolverOptions& opts) {
    set.validate();
    const auto w = set.normalized_weights();
    const int d = set.components.front().dim();

    Mat s = Mat::Zero(d, d);
    for (std::size_t i = 0; i < set.components.size(); ++i) {
        s += w[i] * set.components[i].cov.mat();
    }

    std::vector<double> history;
    double residual = 0.0;
    int iter = 0;
    for (; iter < opts.max_iter; ++iter) {
        const Mat root = detail::sym_sqrt(s);
        Eigen::SelfAdjointEigenSolver<Mat> es(s);
        if (es.eigenvalues().minCoeff() < kEigenvalueFloor) {
            throw NearSingular("wasserstein_barycenter: iterate lost definiteness");
        }
        const Mat inv_root = es.eigenvectors() *
                             es.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
                             es.eigenvectors().transpose();
        Mat mixed = Mat::Zero(d, d);
        for (std::size_t i = 0; i < set.components.size(); ++i) {
            mixed += w[i] * detail::sym_sqrt(root * set.components[i].cov.mat() * root);
        }
        const Mat next = inv_root * (mixed * mixed) * inv_root;
        residual = (next - s).norm();
        history.push_back(residual);
        s = 0.5 * (next + next.transpose()); // restore exact symmetry
        if (residual <= opts.tol) {
            ++iter;
            break;
        }
    }
    if (residual > opts.tol) {
        throw NoConvergence("wasserstein_barycenter: iteration budget exhausted");
    }
    return BarycenterResult{Gaussian(mean_component(set), SpdMatrix(s)), iter, residual,
                            std::move(history)};
}

SpdMeanResult karcher_mean_spd(const std::vector<SpdMatrix>& mats,
                               const std::vector<double>& weights,
                               const SolverOptions& opts) {
    if (mats.empty()) throw DomainError("karcher_mean_spd: empty matrix list");
    if (mats.size() != weights.size()) {
        throw DimensionMismatch("karcher_mean_spd: matrix/weight count mismatch");
    }
    const int d = mats.front().dim();
    double total = 0.0;
    for (std::size_t i = 0; i < mats.size(); ++i) {
        if (mats[i].dim() != d) throw DimensionMismatch("karcher_mean_spd: mixed dimensions");
        if (!(weights[i] > 0.0) || !std::isfinite(weights[i])) {
            throw DomainError("karcher_mean_spd: weights must be positive and finite");
        }
        total += weights[i];
    }

    Mat s = Mat::Zero(d, d);
    for (std::size_t i = 0; i < mats.size(); ++i) s += (weights[i] / total) * mats[i].mat();

    const auto tangent_mean = [&](const Mat& at) {
        Eigen::SelfAdjointEigenSolver<Mat> es(at);
        if (es.eigenvalues().minCoeff() < kEigenvalueFloor) {
            throw NearSingular("karcher_mean_spd: iterate lost definiteness");
        }
        const Mat inv_root = es.eigenvectors() *
                             es.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
                             es.eigenvectors().transpose();
        Mat g = Mat::Zero(at.rows(), at.cols());
        for (std::size_t i = 0; i < mats.size(); ++i) {
            g += (weights[i] / total) * detail::sym_log(inv_root * mats[i].mat() * inv_root);
        }
        return std::pair<Mat, Mat>{g, inv_root};
    };

    std::vector<double> history;
    auto [grad, inv_root] = tangent_mean(s);
    double residual = grad.norm();
    int iter = 0;
    for (; iter < opts.max_iter && residual > opts.tol; ++iter) {
        const Mat root = detail::sym_sqrt(s);
        double eta = 1.0;
        Mat next;
        Mat next_grad;
        Mat next_inv_root;
        double next_residual = residual;
        for (int halving = 0; halving < 60; ++halving) {
            Eigen::SelfAdjointEigenSolver<Mat> es(eta * grad);
            const Mat step = es.eigenvectors() *
                             es.eigenvalues().array().exp().matrix().asDiagonal() *
                             es.eigenvectors().transpose();
            next = root * step * root;
            next = 0.5 * (next + next.transpose());
            std::tie(next_grad, next_inv_root) = tangent_mean(next);
            next_residual = next_grad.norm();
            if (next_residual <= residual || next_residual <= opts.tol) break;
            eta *= 0.5;
            if (halving == 59) {
                throw NumericalBreakdown("karcher_mean_spd: step halving stalled");
            }
        }
        s = next;
        grad = next_grad;
        residual = next_residual;
        history.push_back(residual);
    }
    if (residual > opts.tol) {
        throw NoConvergence("karcher_mean_spd: iteration budget exhausted");
    }
    return SpdMeanResult{SpdMatrix(s), iter, residual, std::move(history)};
}

Gaussian precision_weighted_mean(const std::vector<Vec>& means,
                                 const std::vector<SpdMatrix>& covs) {
    if (means.empty()) throw DomainError("precision_weighted_mean: no observations");
    if (means.size() != covs.size()) {
        throw DimensionMismatch("precision_weighted_mean: mean/cov count mismatch");
    }
    const int d = static_cast<int>(means.front().size());
    Mat info = Mat::Zero(d, d);
    Vec rhs = Vec::Zero(d);
    for (std::size_t i = 0; i < means.size(); ++i) {
        if (means[i].size() != d || covs[i].dim() != d) {
            throw DimensionMismatch("precision_weighted_mean: mixed dimensions");
        }
        const Mat prec = covs[i].mat().ldlt().solve(Mat::Identity(d, d));
        info += prec;
        rhs += prec * means[i];
    }
    const Mat combined = info.ldlt().solve(Mat::Identity(d, d));
    const Vec theta = combined * rhs;
    return Gaussian(theta, SpdMatrix(0.5 * (combined + combined.transpose())));
}

} // namespace sig
