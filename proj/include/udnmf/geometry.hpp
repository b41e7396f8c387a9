#pragma once

#include <cstddef>
#include <vector>

#include "udnmf/rng.hpp"

namespace udnmf {

struct Point2D {
    double x = 0.0;
    double y = 0.0;
};

struct DensityConfig {
    double lambda_b = 0.0;  // BS density, points per unit area
    double lambda_u = 0.0;  // user density
    double radius = 1.0;    // reception radius
};

// One spatial realization. The typical user sits at the origin; serving_index
// is its nearest BS (-1 when the window is empty, an outage).
struct NetworkSnapshot {
    std::vector<Point2D> bs_points;
    std::vector<Point2D> user_points;
    std::vector<char> active;  // per BS
    std::ptrdiff_t serving_index = -1;
    double window_radius = 0.0;
};

enum class ActivityMode { voronoi, thinning };

// Homogeneous PPP on the disk of given radius: Poisson count, uniform points.
std::vector<Point2D> sample_ppp(double density, double radius, rng_t& rng);

struct NearestResult {
    std::size_t index = 0;
    double distance = 0.0;
};

// Nearest point by Euclidean distance, ties broken by lowest index.
NearestResult nearest_bs(const Point2D& target, const std::vector<Point2D>& bs_points);

// Uniform-grid index over a point set for fast nearest queries. Matches
// nearest_bs exactly, including the lowest-index tie rule.
class PointGrid {
public:
    explicit PointGrid(const std::vector<Point2D>& pts);
    NearestResult nearest(const Point2D& q) const;
    bool empty() const { return n_ == 0; }

private:
    const std::vector<Point2D>* pts_;
    std::size_t n_;
    double x0_, y0_, cell_;
    int nx_, ny_;
    std::vector<std::vector<std::uint32_t>> cells_;
};

// flag[i] is true iff some user's nearest BS is i (its Voronoi cell is occupied)
std::vector<char> compute_active_flags(const std::vector<Point2D>& bs_points,
                                       const std::vector<Point2D>& user_points);

// probability that at least one BS lies within the reception ball
double coverage_probability(const DensityConfig& cfg);

// BS active probability under the gamma-distributed Voronoi cell-area model
double active_probability(double lambda_b, double lambda_u);

// Window radius standing in for the infinite plane: the interference mass of
// min(1, r^-alpha) truncated beyond it is below tail_fraction of the total.
double truncation_radius(double alpha, double tail_fraction = 1e-3);

// Sample a full snapshot: BSs, users, activity flags, typical-user link.
// The serving BS is always active (it serves the origin user).
NetworkSnapshot make_snapshot(const DensityConfig& cfg, ActivityMode mode, rng_t& rng);

}  // namespace udnmf
