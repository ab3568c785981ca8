#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <vector>

#include "zerocell/geometry.hpp"
#include "zerocell/hyperplane_law.hpp"
#include "zerocell/stats.hpp"

using namespace zerocell;

namespace {

Polytope cube(int n, double half_width = 1.0) {
    Polytope p;
    p.dim = n;
    for (int k = 0; k < n; ++k) {
        Vec up(n, 0.0);
        up[k] = 1.0;
        p.faces.push_back({up, half_width});
        Vec dn(n, 0.0);
        dn[k] = -1.0;
        p.faces.push_back({dn, half_width});
    }
    return p;
}

double min_slack(const Polytope& poly, const Vec& x) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& f : poly.faces) best = std::min(best, poly.slack(f, x));
    return best;
}

// LP-free oracle for the inradius: x -> min_i slack_i(x) is concave, so a
// coarse grid pass followed by ternary line searches along random directions
// converges to its maximum.
double grid_inradius_oracle(const Polytope& poly, double half_width) {
    Vec center(poly.dim, 0.0);
    double width = half_width;
    double best = -1.0;
    Vec best_x = center;
    for (int level = 0; level < 4; ++level) {
        const int g = 10;
        Vec x(poly.dim);
        for (int a = -g; a <= g; ++a) {
            for (int b = -g; b <= g; ++b) {
                for (int c = -g; c <= g; ++c) {
                    x[0] = center[0] + width * a / g;
                    x[1] = center[1] + width * b / g;
                    x[2] = center[2] + width * c / g;
                    const double v = min_slack(poly, x);
                    if (v > best) {
                        best = v;
                        best_x = x;
                    }
                }
            }
        }
        center = best_x;
        width /= 4.0;
    }
    RandomStream prng(99u);
    double range = 0.05;
    for (int iter = 0; iter < 1200; ++iter) {
        const Vec dir = sample_sphere(poly.dim, prng);
        double lo = -range;
        double hi = range;
        for (int step = 0; step < 60; ++step) {
            const double t1 = lo + (hi - lo) / 3.0;
            const double t2 = hi - (hi - lo) / 3.0;
            Vec x1 = best_x;
            Vec x2 = best_x;
            for (int k = 0; k < poly.dim; ++k) {
                x1[k] += t1 * dir[k];
                x2[k] += t2 * dir[k];
            }
            if (min_slack(poly, x1) < min_slack(poly, x2)) {
                lo = t1;
            } else {
                hi = t2;
            }
        }
        Vec cand = best_x;
        for (int k = 0; k < poly.dim; ++k) cand[k] += 0.5 * (lo + hi) * dir[k];
        const double v = min_slack(poly, cand);
        if (v > best) {
            best = v;
            best_x = cand;
        }
        if (iter % 300 == 299) range *= 0.5;
    }
    return best;
}

} // namespace

TEST_CASE("sphere samples have unit norm and match the cap law") {
    RandomStream rng(521u);
    for (int n : {1, 2, 5, 9}) {
        for (int i = 0; i < 50; ++i) {
            CHECK(norm(sample_sphere(n, rng)) == Catch::Approx(1.0).margin(1e-12));
        }
    }
    // First-coordinate law: P(u_1 <= t) = 1 - cap_fraction(n, t) for t >= 0,
    // cap_fraction(n, -t) below zero.
    const int n = 3;
    std::vector<double> first(100000);
    for (auto& v : first) v = sample_sphere(n, rng)[0];
    auto cdf = [n](double t) {
        return t >= 0.0 ? 1.0 - cap_fraction(n, std::min(1.0, t))
                        : cap_fraction(n, std::min(1.0, -t));
    };
    CHECK(ks_statistic(first, cdf) < ks_critical_value(first.size(), 0.01));
}

TEST_CASE("sphere sample mean collapses to the origin") {
    RandomStream rng(522u);
    const int n = 5;
    Vec mean(n, 0.0);
    const int trials = 100000;
    for (int i = 0; i < trials; ++i) {
        const Vec u = sample_sphere(n, rng);
        for (int k = 0; k < n; ++k) mean[k] += u[k];
    }
    for (auto& v : mean) v /= trials;
    CHECK(norm(mean) < 0.02);
}

TEST_CASE("ball samples stay inside and have the right radial law") {
    RandomStream rng(523u);
    {
        const int n = 4;
        const double R = 2.0;
        std::vector<double> pulled(20000);
        for (auto& v : pulled) {
            const Vec x = uniform_in_ball(n, R, rng);
            REQUIRE(norm(x) <= R + 1e-12);
            v = std::pow(norm(x) / R, n); // should be uniform on [0,1]
        }
        CHECK(ks_statistic(pulled, [](double t) { return std::clamp(t, 0.0, 1.0); }) <
              ks_critical_value(pulled.size(), 0.01));
    }
    {
        // n = 1 degenerates to uniform on [-R, R].
        std::vector<double> line(20000);
        for (auto& v : line) v = uniform_in_ball(1, 1.5, rng)[0];
        CHECK(ks_statistic(line, [](double t) {
                  return std::clamp((t + 1.5) / 3.0, 0.0, 1.0);
              }) < ks_critical_value(line.size(), 0.01));
    }
}

TEST_CASE("chebyshev center of a cube and translation equivariance") {
    for (int n : {2, 3, 6}) {
        const auto res = chebyshev_center(cube(n));
        REQUIRE(res.status == InballStatus::optimal);
        CHECK(res.inradius == Catch::Approx(1.0).margin(1e-9));
        for (double c : res.center) CHECK(c == Catch::Approx(0.0).margin(1e-9));
    }
    // Shift the cube by v: offsets go to 1 + <v, normal>.
    const Vec v = {0.3, -0.2, 0.5};
    Polytope shifted = cube(3);
    for (auto& f : shifted.faces) f.offset += dot(v, f.normal);
    const auto res = chebyshev_center(shifted);
    REQUIRE(res.status == InballStatus::optimal);
    CHECK(res.inradius == Catch::Approx(1.0).margin(1e-9));
    for (int k = 0; k < 3; ++k) CHECK(res.center[k] == Catch::Approx(v[k]).margin(1e-9));
}

TEST_CASE("chebyshev center matches a refined grid oracle on random polytopes") {
    RandomStream rng(524u);
    for (int rep = 0; rep < 5; ++rep) {
        Polytope poly;
        poly.dim = 3;
        for (int i = 0; i < 12; ++i) {
            poly.faces.push_back({sample_sphere(3, rng), rng.uniform(0.5, 1.5)});
        }
        const auto res = chebyshev_center(poly);
        REQUIRE(res.status == InballStatus::optimal);
        CHECK(res.inradius == Catch::Approx(grid_inradius_oracle(poly, 2.0)).margin(1e-3));
    }
}

TEST_CASE("chebyshev center flags unbounded and rank-deficient cells") {
    Polytope half;
    half.dim = 3;
    half.faces.push_back({Vec{1.0, 0.0, 0.0}, 1.0});
    CHECK(chebyshev_center(half).status == InballStatus::unbounded);

    Polytope slab;
    slab.dim = 3;
    slab.faces.push_back({Vec{1.0, 0.0, 0.0}, 1.0});
    slab.faces.push_back({Vec{-1.0, 0.0, 0.0}, 1.0});
    const auto res = chebyshev_center(slab);
    CHECK(res.status == InballStatus::degenerate);
    CHECK(res.inradius == Catch::Approx(1.0).margin(1e-9));
    CHECK(slab.contains(res.center));
}

TEST_CASE("tangent halfspaces drive the inradius down to the ball radius") {
    RandomStream rng(525u);
    Polytope poly;
    poly.dim = 3;
    std::vector<double> inradii;
    for (int count : {8, 32, 128}) {
        while (static_cast<int>(poly.faces.size()) < count) {
            poly.faces.push_back({sample_sphere(3, rng), 1.0});
        }
        inradii.push_back(chebyshev_center(poly).inradius);
    }
    CHECK(inradii[1] <= inradii[0] + 1e-12);
    CHECK(inradii[2] <= inradii[1] + 1e-12);
    CHECK(inradii[2] < 1.1);
    CHECK(inradii[2] >= 1.0 - 1e-9);
}

TEST_CASE("hit-and-run stays inside and is uniform on the cube") {
    RandomStream rng(526u);
    const Polytope box = cube(3);
    const Vec start(3, 0.0);
    std::vector<std::vector<double>> coords(3);
    for (int i = 0; i < 10000; ++i) {
        const Vec x = uniform_in_polytope(box, start, rng, 500);
        REQUIRE(box.contains(x));
        for (int k = 0; k < 3; ++k) coords[k].push_back(x[k]);
    }
    for (int k = 0; k < 3; ++k) {
        const double D = ks_statistic(coords[k], [](double t) {
            return std::clamp(0.5 * (t + 1.0), 0.0, 1.0);
        });
        CHECK(D < ks_critical_value(coords[k].size(), 0.01));
    }
}

TEST_CASE("hit-and-run mean on the standard simplex hits the centroid") {
    RandomStream rng(527u);
    Polytope simplex;
    simplex.dim = 3;
    for (int k = 0; k < 3; ++k) {
        Vec dn(3, 0.0);
        dn[k] = -1.0;
        simplex.faces.push_back({dn, 0.0});
    }
    const double inv_sqrt3 = 1.0 / std::sqrt(3.0);
    simplex.faces.push_back({Vec{inv_sqrt3, inv_sqrt3, inv_sqrt3}, inv_sqrt3});

    const Vec start(3, 0.1);
    const int trials = 4000;
    Vec mean(3, 0.0);
    for (int i = 0; i < trials; ++i) {
        const Vec x = uniform_in_polytope(simplex, start, rng, 900);
        for (int k = 0; k < 3; ++k) mean[k] += x[k];
    }
    for (auto& v : mean) v /= trials;
    // Coordinates of a uniform simplex point are Beta(1, 3): sd = sqrt(3/80).
    const double se = std::sqrt(3.0 / 80.0 / trials);
    for (int k = 0; k < 3; ++k) CHECK(std::fabs(mean[k] - 0.25) < 3.0 * se);
}

TEST_CASE("hit-and-run output does not depend on the face ordering") {
    RandomStream rng_a(528u);
    RandomStream rng_b(529u);
    Polytope a = cube(3);
    Polytope b = a;
    std::reverse(b.faces.begin(), b.faces.end());
    std::vector<double> xa(3000);
    std::vector<double> xb(3000);
    const Vec start(3, 0.0);
    for (auto& v : xa) v = uniform_in_polytope(a, start, rng_a, 300)[0];
    for (auto& v : xb) v = uniform_in_polytope(b, start, rng_b, 300)[0];
    CHECK(two_sample_ks(xa, xb) < two_sample_ks_critical_value(xa.size(), xb.size(), 0.01));
}

TEST_CASE("hit-and-run rejects bad starts and unbounded bodies") {
    const Polytope box = cube(2);
    RandomStream rng(530u);
    CHECK_THROWS_AS(uniform_in_polytope(box, Vec{1.0, 0.0}, rng, 10), std::invalid_argument);

    Polytope orthant;
    orthant.dim = 2;
    orthant.faces.push_back({Vec{-1.0, 0.0}, 0.0});
    orthant.faces.push_back({Vec{0.0, -1.0}, 0.0});
    CHECK_THROWS_AS(uniform_in_polytope(orthant, Vec{1.0, 1.0}, rng, 200),
                    UnboundedDirectionError);
}

TEST_CASE("rejection sampler agrees with hit-and-run on the cube") {
    RandomStream rng(531u);
    const Polytope box = cube(3);
    const Vec center(3, 0.0);
    std::vector<double> rej(4000);
    std::vector<double> har(4000);
    for (auto& v : rej) {
        const auto x = uniform_in_polytope_rejection(box, center, std::sqrt(3.0), rng, 100000);
        REQUIRE(x.has_value());
        REQUIRE(box.contains(*x));
        v = (*x)[0];
    }
    for (auto& v : har) v = uniform_in_polytope(box, center, rng, 300)[0];
    CHECK(two_sample_ks(rej, har) < two_sample_ks_critical_value(rej.size(), har.size(), 0.01));
}

TEST_CASE("bounding box certifies the cube and detects open cells") {
    const auto box = bounding_box(cube(3, 0.75));
    REQUIRE(box.bounded);
    for (int k = 0; k < 3; ++k) {
        CHECK(box.lo[k] == Catch::Approx(-0.75).margin(1e-9));
        CHECK(box.hi[k] == Catch::Approx(0.75).margin(1e-9));
    }
    CHECK(box.corner_norm() == Catch::Approx(0.75 * std::sqrt(3.0)).margin(1e-9));

    Polytope slab;
    slab.dim = 2;
    slab.faces.push_back({Vec{1.0, 0.0}, 1.0});
    slab.faces.push_back({Vec{-1.0, 0.0}, 1.0});
    CHECK_FALSE(bounding_box(slab).bounded);
}

TEST_CASE("origin-in-hull test and simplex volume") {
    // Equilateral triangle on the unit circle contains the origin.
    const double s3 = std::sqrt(3.0) / 2.0;
    std::vector<Vec> tri = {{1.0, 0.0}, {-0.5, s3}, {-0.5, -s3}};
    const auto in = origin_in_simplex_hull(tri);
    CHECK(in.contains_origin);
    CHECK(in.volume == Catch::Approx(3.0 * std::sqrt(3.0) / 4.0).epsilon(1e-12));

    // All vertices in one halfplane: origin outside.
    std::vector<Vec> off = {{1.0, 0.1}, {0.2, 0.9}, {0.6, 0.6}};
    CHECK_FALSE(origin_in_simplex_hull(off).contains_origin);

    // Degenerate simplex has zero volume.
    std::vector<Vec> flat = {{1.0, 0.0}, {0.5, 0.0}, {-1.0, 0.0}};
    CHECK(origin_in_simplex_hull(flat).volume == 0.0);
}

TEST_CASE("halfspace normalization") {
    const auto h = Halfspace::from_direction(Vec{3.0, 4.0}, 10.0);
    CHECK(norm(h.normal) == Catch::Approx(1.0).margin(1e-15));
    CHECK(h.offset == Catch::Approx(2.0).epsilon(1e-15));
    CHECK_THROWS_AS(Halfspace::from_direction(Vec{0.0, 0.0}, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(Halfspace::from_direction(Vec{1.0, 0.0}, -1.0), std::invalid_argument);
}
