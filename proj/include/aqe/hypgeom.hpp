#ifndef AQE_HYPGEOM_HPP
#define AQE_HYPGEOM_HPP

#include <complex>
#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "aqe/error.hpp"

namespace aqe::hypgeom {

// Point z = x + iy in the upper half-plane (y > 0).
struct Point {
    double x = 0.0;
    double y = 1.0;
    std::complex<double> z() const { return {x, y}; }
};

// Element of SL2(Z) acting by Mobius transformations.
struct GroupWord {
    std::int64_t a = 1, b = 0, c = 0, d = 1;
    Point apply(const Point& p) const;
    GroupWord mul(const GroupWord& o) const;
    bool is_identity() const {
        return (a == 1 && b == 0 && c == 0 && d == 1) ||
               (a == -1 && b == 0 && c == 0 && d == -1);
    }
};

struct GeodesicBall {
    Point center;
    double radius = 0.0;
    bool injective = false;
};

// Hyperbolic distance d(z,w) = log((|z-wbar|+|z-w|)/(|z-wbar|-|z-w|)).
double hyp_distance(const Point& z, const Point& w);

// Reduce z into the standard fundamental domain |Re| <= 1/2, |z| >= 1.
// Returns the reduced point and gamma in SL2(Z) with gamma z = z'.
std::pair<Point, GroupWord> reduce(const Point& z);

// mu(B) = 4 pi sinh^2(r/2) for an injective geodesic ball.
double ball_measure(const GeodesicBall& ball);

// Convenience constructor: computes the injectivity flag.
GeodesicBall make_ball(const Point& center, double radius);

// Half the minimal displacement over gamma != +-1; exact on the
// fundamental domain (finite coprime-pair enumeration with a rigorous cap).
double injectivity_radius(const Point& z);

// Minimal displacement inf_{gamma != +-1} d(z, gamma z).
double min_displacement(const Point& z);

struct GridResolution {
    int nx = 64;        // x subdivisions at the finest level (power of two)
    int ny = 64;        // log-y subdivisions per column (power of two)
    long max_nodes = 40'000'000;
};

// Romberg-combined tensor quadrature over the truncated fundamental domain
// {|Re z| <= 1/2, |z| >= 1, Im z <= Y} against d mu = y^{-2} dx dy.
class QuadratureGrid {
public:
    QuadratureGrid(double cusp_height, const GridResolution& res);

    double cusp_height() const { return Y_; }
    // Sum of the combined weights; equals mu(truncated domain) to ~1e-9.
    double total_mass() const { return total_mass_; }
    std::size_t node_count() const { return nodes_.size(); }

    // integral of f dmu over the truncated domain, with an internal
    // error estimate from the embedded coarser rule.
    double integrate(const std::function<double(const Point&)>& f,
                     double* err_estimate = nullptr) const;

    // Same region further clipped to y >= y_min (columns rebuilt on the fly).
    double integrate_region(const std::function<double(const Point&)>& f,
                            double y_min) const;

    const std::vector<std::pair<Point, double>>& nodes() const {
        return nodes_;
    }

private:
    double Y_;
    GridResolution res_;
    double total_mass_ = 0.0;
    std::vector<std::pair<Point, double>> nodes_; // combined Romberg weights
    std::vector<double> coarse_w_;                // embedded coarser rule
};

// Geodesic-polar quadrature of f over the disc of hyperbolic radius r
// around w (covering with multiplicity when the projection overlaps):
//   int_0^r int_0^{2pi} f(z(rho,theta)) sinh(rho) dtheta drho
double integrate_ball(const std::function<double(const Point&)>& f,
                      const Point& center, double radius, int n_rho = 48,
                      int n_theta = 64);

} // namespace aqe::hypgeom

#endif
