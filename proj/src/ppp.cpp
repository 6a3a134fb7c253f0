#include <cmath>

#include "sig/field.hpp"

namespace sig {

std::vector<Point2> sample_ppp(const PppConfig& config, const FieldStreams& id) {
    const double area = config.window.area();
    if (!config.inhomogeneous()) {
        if (!(config.intensity >= 0.0) || !std::isfinite(config.intensity)) {
            throw DomainError("sample_ppp: intensity must be finite and nonnegative");
        }
        RngStream count(id.seed, id.experiment, id.trial, role::kPointCount);
        const std::uint64_t n = count.poisson(config.intensity * area);
        RngStream loc(id.seed, id.experiment, id.trial, role::kPointLocations);
        std::vector<Point2> pts(n);
        const double r = config.window.half_width;
        for (auto& p : pts) {
            p.x = (2.0 * loc.uniform() - 1.0) * r;
            p.y = (2.0 * loc.uniform() - 1.0) * r;
        }
        return pts;
    }

    if (!(config.intensity_max > 0.0) || !std::isfinite(config.intensity_max)) {
        throw DomainError("sample_ppp: dominating intensity must be finite and positive");
    }
    RngStream count(id.seed, id.experiment, id.trial, role::kPointCount);
    const std::uint64_t n = count.poisson(config.intensity_max * area);
    RngStream loc(id.seed, id.experiment, id.trial, role::kPointLocations);
    RngStream thin(id.seed, id.experiment, id.trial, role::kThinning);
    std::vector<Point2> pts;
    pts.reserve(n);
    const double r = config.window.half_width;
    for (std::uint64_t i = 0; i < n; ++i) {
        Point2 p;
        p.x = (2.0 * loc.uniform() - 1.0) * r;
        p.y = (2.0 * loc.uniform() - 1.0) * r;
        const double local = config.intensity_fn(p);
        if (!(local >= 0.0) || local > config.intensity_max) {
            throw DomainError("sample_ppp: intensity_fn outside [0, intensity_max]");
        }
        // Every candidate consumes exactly one acceptance draw, kept or not,
        // so the stream layout does not depend on the acceptance pattern.
        const double u = thin.uniform();
        if (u < local / config.intensity_max) pts.push_back(p);
    }
    return pts;
}

} // namespace sig
