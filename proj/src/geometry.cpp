#include "udnmf/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "udnmf/errors.hpp"

namespace udnmf {

namespace {

double dist_sq(const Point2D& a, const Point2D& b) {
    double dx = a.x - b.x;
    double dy = a.y - b.y;
    return dx * dx + dy * dy;
}

}  // namespace

std::vector<Point2D> sample_ppp(double density, double radius, rng_t& rng) {
    if (density < 0.0) throw parameter_error("sample_ppp: density must be >= 0");
    if (radius <= 0.0) throw parameter_error("sample_ppp: radius must be > 0");
    double mean = density * M_PI * radius * radius;
    std::vector<Point2D> pts;
    if (mean == 0.0) return pts;
    std::poisson_distribution<long long> count_dist(mean);
    long long n = count_dist(rng);
    pts.reserve(static_cast<std::size_t>(n));
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (long long i = 0; i < n; ++i) {
        double r = radius * std::sqrt(unif(rng));
        double th = 2.0 * M_PI * unif(rng);
        pts.push_back({r * std::cos(th), r * std::sin(th)});
    }
    return pts;
}

NearestResult nearest_bs(const Point2D& target, const std::vector<Point2D>& bs_points) {
    if (bs_points.empty())
        throw insufficient_data_error("nearest_bs: no BS in window");
    std::size_t best = 0;
    double best_d2 = dist_sq(target, bs_points[0]);
    for (std::size_t i = 1; i < bs_points.size(); ++i) {
        double d2 = dist_sq(target, bs_points[i]);
        if (d2 < best_d2) {  // strict: ties keep the lowest index
            best_d2 = d2;
            best = i;
        }
    }
    return {best, std::sqrt(best_d2)};
}

PointGrid::PointGrid(const std::vector<Point2D>& pts) : pts_(&pts), n_(pts.size()) {
    if (n_ == 0) {
        x0_ = y0_ = 0.0;
        cell_ = 1.0;
        nx_ = ny_ = 1;
        return;
    }
    double xmin = pts[0].x, xmax = pts[0].x, ymin = pts[0].y, ymax = pts[0].y;
    for (const auto& p : pts) {
        xmin = std::min(xmin, p.x);
        xmax = std::max(xmax, p.x);
        ymin = std::min(ymin, p.y);
        ymax = std::max(ymax, p.y);
    }
    double w = std::max(xmax - xmin, 1e-12);
    double h = std::max(ymax - ymin, 1e-12);
    // aim for ~2 points per cell
    double target_cells = std::max(1.0, static_cast<double>(n_) / 2.0);
    cell_ = std::sqrt(w * h / target_cells);
    if (cell_ <= 0.0 || !std::isfinite(cell_)) cell_ = std::max(w, h);
    nx_ = std::max(1, static_cast<int>(w / cell_) + 1);
    ny_ = std::max(1, static_cast<int>(h / cell_) + 1);
    x0_ = xmin;
    y0_ = ymin;
    cells_.assign(static_cast<std::size_t>(nx_) * ny_, {});
    for (std::size_t i = 0; i < n_; ++i) {
        int cx = std::min(nx_ - 1, std::max(0, static_cast<int>((pts[i].x - x0_) / cell_)));
        int cy = std::min(ny_ - 1, std::max(0, static_cast<int>((pts[i].y - y0_) / cell_)));
        cells_[static_cast<std::size_t>(cy) * nx_ + cx].push_back(static_cast<std::uint32_t>(i));
    }
}

NearestResult PointGrid::nearest(const Point2D& q) const {
    if (n_ == 0) throw insufficient_data_error("PointGrid::nearest: empty point set");
    const auto& pts = *pts_;
    int qx = std::min(nx_ - 1, std::max(0, static_cast<int>((q.x - x0_) / cell_)));
    int qy = std::min(ny_ - 1, std::max(0, static_cast<int>((q.y - y0_) / cell_)));
    double best_d2 = std::numeric_limits<double>::infinity();
    std::uint32_t best = std::numeric_limits<std::uint32_t>::max();
    int max_ring = nx_ + ny_;
    for (int ring = 0; ring <= max_ring; ++ring) {
        if (best_d2 < std::numeric_limits<double>::infinity() && ring >= 2) {
            // any point in this ring is at least (ring-1) cells away; exact
            // ties at the bound are still examined (strict compare)
            double ring_min = (ring - 1) * cell_;
            if (ring_min * ring_min > best_d2) break;
        }
        for (int cy = qy - ring; cy <= qy + ring; ++cy) {
            if (cy < 0 || cy >= ny_) continue;
            for (int cx = qx - ring; cx <= qx + ring; ++cx) {
                if (cx < 0 || cx >= nx_) continue;
                if (std::max(std::abs(cx - qx), std::abs(cy - qy)) != ring) continue;
                for (std::uint32_t idx : cells_[static_cast<std::size_t>(cy) * nx_ + cx]) {
                    double d2 = dist_sq(q, pts[idx]);
                    if (d2 < best_d2 || (d2 == best_d2 && idx < best)) {
                        best_d2 = d2;
                        best = idx;
                    }
                }
            }
        }
    }
    return {best, std::sqrt(best_d2)};
}

std::vector<char> compute_active_flags(const std::vector<Point2D>& bs_points,
                                       const std::vector<Point2D>& user_points) {
    std::vector<char> flags(bs_points.size(), 0);
    if (bs_points.empty() || user_points.empty()) return flags;
    // grid pays off only when both sets are sizable
    if (user_points.size() >= 8 && bs_points.size() >= 64) {
        PointGrid grid(bs_points);
        for (const auto& u : user_points) flags[grid.nearest(u).index] = 1;
    } else {
        for (const auto& u : user_points) flags[nearest_bs(u, bs_points).index] = 1;
    }
    return flags;
}

double coverage_probability(const DensityConfig& cfg) {
    if (cfg.lambda_b < 0.0) throw parameter_error("coverage_probability: lambda_b must be >= 0");
    if (cfg.radius <= 0.0) throw parameter_error("coverage_probability: radius must be > 0");
    return -std::expm1(-M_PI * cfg.lambda_b * cfg.radius * cfg.radius);
}

double active_probability(double lambda_b, double lambda_u) {
    if (lambda_b <= 0.0) throw parameter_error("active_probability: lambda_b must be > 0");
    if (lambda_u < 0.0) throw parameter_error("active_probability: lambda_u must be >= 0");
    if (lambda_u == 0.0) return 0.0;
    return 1.0 - std::pow(1.0 + lambda_u / (3.5 * lambda_b), -3.5);
}

double truncation_radius(double alpha, double tail_fraction) {
    if (alpha <= 2.0) throw parameter_error("truncation_radius: alpha must be > 2");
    if (tail_fraction <= 0.0 || tail_fraction >= 1.0)
        throw parameter_error("truncation_radius: tail_fraction must be in (0,1)");
    // tail share of the plane integral of min(1, r^-alpha): 2 R^(2-alpha) / alpha
    double r = std::pow(tail_fraction * alpha / 2.0, 1.0 / (2.0 - alpha));
    return std::max(r, 1.0);
}

NetworkSnapshot make_snapshot(const DensityConfig& cfg, ActivityMode mode, rng_t& rng) {
    NetworkSnapshot snap;
    snap.window_radius = cfg.radius;
    snap.bs_points = sample_ppp(cfg.lambda_b, cfg.radius, rng);
    snap.user_points = sample_ppp(cfg.lambda_u, cfg.radius, rng);
    if (!snap.bs_points.empty())
        snap.serving_index = static_cast<std::ptrdiff_t>(nearest_bs({0.0, 0.0}, snap.bs_points).index);
    if (mode == ActivityMode::voronoi) {
        snap.active = compute_active_flags(snap.bs_points, snap.user_points);
    } else {
        snap.active.assign(snap.bs_points.size(), 0);
        if (!snap.bs_points.empty()) {
            double pa = active_probability(cfg.lambda_b, cfg.lambda_u);
            std::bernoulli_distribution keep(pa);
            for (auto& f : snap.active) f = keep(rng) ? 1 : 0;
        }
    }
    if (snap.serving_index >= 0) snap.active[static_cast<std::size_t>(snap.serving_index)] = 1;
    return snap;
}

}  // namespace udnmf
