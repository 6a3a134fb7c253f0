#include <algorithm>

#include "sig/field.hpp"
#include "sig/io.hpp"
#include "sig/metrics.hpp"

namespace sig {

MarkModel::MarkModel(Vec mu, SpdMatrix gamma, SpdMatrix sigma)
    : mean_of_means(std::move(mu)),
      mean_dispersion(std::move(gamma)),
      common_cov(std::move(sigma)) {
    if (mean_of_means.size() != mean_dispersion.dim() ||
        mean_of_means.size() != common_cov.dim()) {
        throw DimensionMismatch("MarkModel: mean/dispersion/covariance dimension mismatch");
    }
}

MarkedField attach_marks(std::vector<Point2> points, const Window& window,
                         const MarkModel& model, const FieldStreams& id) {
    for (const auto& p : points) {
        if (!window.contains(p)) {
            throw DomainError("attach_marks: point outside the window");
        }
    }
    std::sort(points.begin(), points.end(), [](const Point2& a, const Point2& b) {
        return a.x != b.x ? a.x < b.x : a.y < b.y;
    });

    const int d = model.dim();
    const Mat disp_root = detail::sym_sqrt(model.mean_dispersion.mat());
    RngStream marks(id.seed, id.experiment, id.trial, role::kMarkMeans);
    std::vector<double> z(points.size() * static_cast<std::size_t>(d));
    marks.fill_normals(z.data(), z.size());

    MarkedField field;
    field.window = window;
    field.points = std::move(points);
    field.marks.reserve(field.points.size());
    for (std::size_t i = 0; i < field.points.size(); ++i) {
        const Eigen::Map<const Vec> zi(z.data() + i * static_cast<std::size_t>(d), d);
        Vec mu = model.mean_of_means + disp_root * zi;
        SpdMatrix cov = model.cov_rule ? model.cov_rule(field.points[i]) : model.common_cov;
        field.marks.emplace_back(std::move(mu), std::move(cov));
    }
    return field;
}

MarkedField sample_marked_field(const PppConfig& config, const MarkModel& model,
                                const FieldStreams& id) {
    return attach_marks(sample_ppp(config, id), config.window, model, id);
}

PalmSample palm_field(const PppConfig& config, const MarkModel& model,
                      const FieldStreams& id) {
    if (config.inhomogeneous()) {
        throw Unsupported("palm_field: Slivnyak construction requires a homogeneous process");
    }
    PalmSample out{sample_marked_field(config, model, id),
                   [&] {
                       const int d = model.dim();
                       RngStream typical(id.seed, id.experiment, id.trial, role::kTypicalMark);
                       Vec z(d);
                       typical.fill_normals(z.data(), static_cast<std::size_t>(d));
                       const Point2 origin{0.0, 0.0};
                       Vec mu = model.mean_of_means +
                                detail::sym_sqrt(model.mean_dispersion.mat()) * z;
                       SpdMatrix cov =
                           model.cov_rule ? model.cov_rule(origin) : model.common_cov;
                       return Gaussian(std::move(mu), std::move(cov));
                   }()};
    return out;
}

MarkedField PalmSample::with_origin() const {
    MarkedField full = background;
    const Point2 origin{0.0, 0.0};
    auto pos = std::lower_bound(full.points.begin(), full.points.end(), origin,
                                [](const Point2& a, const Point2& b) {
                                    return a.x != b.x ? a.x < b.x : a.y < b.y;
                                });
    const auto idx = static_cast<std::size_t>(pos - full.points.begin());
    full.points.insert(pos, origin);
    full.marks.insert(full.marks.begin() + static_cast<std::ptrdiff_t>(idx), typical_mark);
    return full;
}

Gaussian empirical_frechet_mean(const MarkedField& field, MetricKind metric,
                                const SolverOptions& opts) {
    if (field.empty()) {
        throw EmptyWindow("empirical_frechet_mean: field has no points");
    }
    const int d = field.marks.front().dim();
    bool covs_common = true;
    bool means_common = true;
    const Mat& cov0 = field.marks.front().cov.mat();
    const Vec& mean0 = field.marks.front().mean;
    for (const auto& g : field.marks) {
        if ((g.cov.mat() - cov0).norm() > kSliceTol * std::max(1.0, cov0.norm())) {
            covs_common = false;
        }
        if ((g.mean - mean0).norm() > kSliceTol * std::max(1.0, mean0.norm())) {
            means_common = false;
        }
        if (!covs_common && !means_common) break;
    }

    Vec mean_avg = Vec::Zero(d);
    for (const auto& g : field.marks) mean_avg += g.mean;
    mean_avg /= static_cast<double>(field.marks.size());

    if (covs_common) {
        // Shared covariance: both geometries reduce to averaging the means.
        return Gaussian(mean_avg, field.marks.front().cov);
    }

    switch (metric) {
        case MetricKind::Wasserstein2: {
            WeightedGaussianSet set;
            set.components = field.marks;
            set.weights.assign(field.marks.size(), 1.0);
            return wasserstein_barycenter(set, opts).barycenter;
        }
        case MetricKind::FisherRao:
        case MetricKind::AffineInvariant: {
            if (!means_common) {
                if (metric == MetricKind::FisherRao) {
                    throw UnsupportedGeodesic(
                        "empirical_frechet_mean: Fisher-Rao mean needs a shared "
                        "covariance or shared means");
                }
                throw Unsupported(
                    "empirical_frechet_mean: affine-invariant mean needs shared means");
            }
            std::vector<SpdMatrix> covs;
            covs.reserve(field.marks.size());
            for (const auto& g : field.marks) covs.push_back(g.cov);
            const std::vector<double> w(covs.size(), 1.0);
            return Gaussian(mean0, karcher_mean_spd(covs, w, opts).mean);
        }
    }
    throw Unsupported("empirical_frechet_mean: unknown metric");
}

void dump_field_csv(const MarkedField& field, const std::string& path) {
    auto out = open_out(path);
    const int d = field.marks.empty() ? 0 : field.marks.front().dim();
    out << "x,y";
    for (int i = 1; i <= d; ++i) out << ",mu_" << i;
    for (int i = 1; i <= d; ++i) {
        for (int j = 1; j <= d; ++j) out << ",cov_" << i << j;
    }
    out << "\n";
    for (std::size_t k = 0; k < field.size(); ++k) {
        out << fmt_g17(field.points[k].x) << ',' << fmt_g17(field.points[k].y);
        const auto& g = field.marks[k];
        for (int i = 0; i < d; ++i) out << ',' << fmt_g17(g.mean[i]);
        for (int i = 0; i < d; ++i) {
            for (int j = 0; j < d; ++j) out << ',' << fmt_g17(g.cov(i, j));
        }
        out << "\n";
    }
    if (!out) throw IoError("failed writing " + path);
}

} // namespace sig
