#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "sig/barycenter.hpp"
#include "sig/gaussian.hpp"
#include "sig/rng.hpp"

namespace sig {

struct Point2 {
    double x = 0.0;
    double y = 0.0;
};

/// Square observation window B_R = [-R, R]^2.
struct Window {
    double half_width = 1.0;

    [[nodiscard]] double area() const { return 4.0 * half_width * half_width; }
    [[nodiscard]] bool contains(const Point2& p) const {
        return p.x >= -half_width && p.x <= half_width && p.y >= -half_width &&
               p.y <= half_width;
    }
};

/// Planar Poisson process configuration. A constant intensity samples the
/// homogeneous process directly; supplying intensity_fn (with a finite upper
/// bound intensity_max >= sup intensity_fn) switches to thinning.
struct PppConfig {
    Window window;
    double intensity = 1.0;
    std::function<double(const Point2&)> intensity_fn; ///< optional, for thinning
    double intensity_max = 0.0; ///< required dominating bound when intensity_fn is set

    [[nodiscard]] bool inhomogeneous() const { return static_cast<bool>(intensity_fn); }
};

/// Conditionally independent Gaussian marking: each point receives
/// N(mu_x, common_cov) with mu_x ~ N(mean_of_means, mean_dispersion) i.i.d.
/// cov_rule, when set, replaces common_cov by a location-dependent matrix.
struct MarkModel {
    Vec mean_of_means;
    SpdMatrix mean_dispersion;
    SpdMatrix common_cov;
    std::function<SpdMatrix(const Point2&)> cov_rule; ///< optional

    MarkModel(Vec mu, SpdMatrix gamma, SpdMatrix sigma);

    [[nodiscard]] int dim() const { return static_cast<int>(mean_of_means.size()); }
};

/// A point pattern with one Gaussian mark per point. Points are stored in
/// lexicographic (x, y) order and marks are drawn in that order, so the
/// field is reproducible independently of sampling order.
struct MarkedField {
    Window window;
    std::vector<Point2> points;
    std::vector<Gaussian> marks;

    [[nodiscard]] std::size_t size() const { return points.size(); }
    [[nodiscard]] bool empty() const { return points.empty(); }
};

/// Slivnyak sample: an ordinary marked field plus an independently marked
/// point at the origin. The background field *excludes* the origin (reduced
/// Palm view); with_origin() gives the full Palm field.
struct PalmSample {
    MarkedField background;
    Gaussian typical_mark;

    [[nodiscard]] MarkedField with_origin() const;
};

/// Streams drawn from (seed, experiment, trial, role) used by the samplers.
struct FieldStreams {
    std::uint64_t seed = 0;
    std::uint64_t experiment = 0;
    std::uint64_t trial = 0;
};

/// Samples point locations (unsorted, generation order). Homogeneous: count
/// ~ Poisson(intensity * area), locations uniform. Inhomogeneous: candidates
/// at intensity_max are thinned by intensity_fn(x)/intensity_max; every
/// candidate consumes its acceptance draw whether kept or not. Raises
/// DomainError on a negative intensity, a nonpositive dominating bound, or a
/// local intensity above the bound.
[[nodiscard]] std::vector<Point2> sample_ppp(const PppConfig& config, const FieldStreams& id);

/// Sorts the points lexicographically and draws one mark per point.
[[nodiscard]] MarkedField attach_marks(std::vector<Point2> points, const Window& window,
                                       const MarkModel& model, const FieldStreams& id);

/// Convenience: sample_ppp + attach_marks.
[[nodiscard]] MarkedField sample_marked_field(const PppConfig& config, const MarkModel& model,
                                              const FieldStreams& id);

/// Slivnyak Palm sample for a homogeneous process: background field plus an
/// independent typical mark at the origin. Raises Unsupported for an
/// inhomogeneous configuration.
[[nodiscard]] PalmSample palm_field(const PppConfig& config, const MarkModel& model,
                                    const FieldStreams& id);

/// Fréchet mean of the marks under the chosen metric, uniform weights.
/// Fields whose marks share one covariance collapse to N(mean of mu_x, cov)
/// under both FisherRao and Wasserstein2; heterogeneous covariances run the
/// transport fixed point (Wasserstein2), the Karcher mean when all means
/// coincide (FisherRao / AffineInvariant), and raise UnsupportedGeodesic
/// otherwise. An empty field raises EmptyWindow.
[[nodiscard]] Gaussian empirical_frechet_mean(const MarkedField& field, MetricKind metric,
                                              const SolverOptions& opts = {});

/// Writes "x,y,mu_1..mu_d,cov_11..cov_dd" (covariance row-major), one row
/// per point, 17 significant digits.
void dump_field_csv(const MarkedField& field, const std::string& path);

} // namespace sig
