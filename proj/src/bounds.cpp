#include "sig/bounds.hpp"

#include "sig/errors.hpp"

#include <cmath>

namespace sig {

namespace {

Mat whitened_dispersion(const SpdMatrix& sigma, const SpdMatrix& gamma) {
  if (sigma.dim() != gamma.dim()) {
    throw DimensionMismatch("dispersion and mark covariance dimensions differ");
  }
  return sigma.mat().ldlt().solve(gamma.mat());
}

} // namespace

double expected_fr_sq(const SpdMatrix& sigma, const SpdMatrix& gamma) {
  return whitened_dispersion(sigma, gamma).trace();
}

double expected_w2_sq(const SpdMatrix& gamma) { return gamma.trace(); }

double fr_deviation_scale(const SpdMatrix& sigma, const SpdMatrix& gamma) {
  const Mat m = whitened_dispersion(sigma, gamma);
  return std::sqrt(2.0 * (m * m).trace());
}

double w2_deviation_scale(const SpdMatrix& gamma) {
  const Mat& g = gamma.mat();
  return std::sqrt(2.0 * (g * g).trace());
}

double fr_tail_bound(const SpdMatrix& sigma, const SpdMatrix& gamma, double t) {
  if (!(t >= 0.0)) {
    throw DomainError("tail offset t must be nonnegative");
  }
  const Mat m = whitened_dispersion(sigma, gamma);
  const double chaos = (m * m).trace();
  return std::exp(-t * t / (8.0 * chaos));
}

double w2_tail_bound(const SpdMatrix& gamma, double t) {
  if (!(t >= 0.0)) {
    throw DomainError("tail offset t must be nonnegative");
  }
  const Mat& g = gamma.mat();
  const double chaos = (g * g).trace();
  return std::exp(-t * t / (8.0 * chaos));
}

double cantelli_bound(double alpha) {
  if (!(alpha >= 0.0)) {
    throw DomainError("deviation multiple alpha must be nonnegative");
  }
  return 1.0 / (1.0 + alpha * alpha);
}

double mse_bound(const SpdMatrix& gamma, double lambda, const Window& window) {
  if (!(lambda > 0.0)) {
    throw DomainError("intensity must be positive");
  }
  const double area = window.area();
  if (!(area > 0.0)) {
    throw DomainError("window area must be positive");
  }
  return gamma.trace() / (lambda * area);
}

double conditional_cantelli(const SpdMatrix& gamma, std::uint64_t n, double t) {
  if (n == 0) {
    throw DomainError("conditional bound needs at least one point");
  }
  const double nd = static_cast<double>(n);
  const double mean = gamma.trace() / nd;
  const Mat& g = gamma.mat();
  const double var = 2.0 * (g * g).trace() / (nd * nd);
  if (!(t >= mean)) {
    throw DomainError("threshold must not be below the conditional mean");
  }
  const double gap = t - mean;
  return var / (gap * gap + var);
}

double meta_cantelli(const SpdMatrix& gamma, double lambda, const Window& window,
                     double t) {
  if (!(lambda > 0.0)) {
    throw DomainError("intensity must be positive");
  }
  const double m = lambda * window.area();
  if (!(m > 0.0)) {
    throw DomainError("mean point count must be positive");
  }
  const double mean = gamma.trace() / m;
  const Mat& g = gamma.mat();
  const double var = 2.0 * (g * g).trace() / (m * m);
  if (!(t >= mean)) {
    throw DomainError("threshold must not be below the substituted mean");
  }
  const double gap = t - mean;
  return var / (gap * gap + var);
}

double expected_inv_count(double lambda, const Window& window) {
  if (!(lambda > 0.0)) {
    throw DomainError("intensity must be positive");
  }
  const double m = lambda * window.area();
  if (!(m > 1.0)) {
    throw DomainError("approximation requires mean point count above one");
  }
  return 1.0 / (m - 1.0);
}

} // namespace sig
