#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "zerocell/random.hpp"
#include "zerocell/simplex_lp.hpp"

namespace zerocell {

using Vec = std::vector<double>;

inline double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

// Halfspace {x : <x, normal> <= offset} with unit normal and offset >= 0,
// so the origin always belongs to it.
struct Halfspace {
    Vec normal;
    double offset = 0.0;

    static Halfspace from_direction(Vec direction, double offset) {
        const double len = norm(direction);
        if (!(len > 0.0)) throw std::invalid_argument("Halfspace: zero direction");
        if (offset < 0.0) throw std::invalid_argument("Halfspace: negative offset");
        for (double& v : direction) v /= len;
        return {std::move(direction), offset / len};
    }
};

struct Polytope {
    int dim = 0;
    std::vector<Halfspace> faces;

    double slack(const Halfspace& f, std::span<const double> x) const {
        return f.offset - dot(f.normal, x);
    }

    bool contains(std::span<const double> x, double tol = 1e-9) const {
        for (const auto& f : faces) {
            if (slack(f, x) < -tol) return false;
        }
        return true;
    }
};

// Uniform direction on the unit sphere.
inline Vec sample_sphere(int n, RandomStream& rng) {
    if (n < 1) throw std::domain_error("sample_sphere: requires n >= 1");
    Vec u(n);
    while (true) {
        for (auto& v : u) v = rng.normal();
        const double len = norm(u);
        if (len > 0.0) {
            for (auto& v : u) v /= len;
            return u;
        }
    }
}

// Uniform point in the centered ball of the given radius; the radial pull
// u^{1/n} is taken in log scale so large n cannot underflow.
inline Vec uniform_in_ball(int n, double radius, RandomStream& rng) {
    if (!(radius > 0.0)) throw std::domain_error("uniform_in_ball: requires radius > 0");
    Vec x = sample_sphere(n, rng);
    const double u = rng.uniform();
    const double r = u == 0.0 ? 0.0 : radius * std::exp(std::log(u) / n);
    for (auto& v : x) v *= r;
    return x;
}

enum class InballStatus { optimal, unbounded, degenerate };

struct InballResult {
    Vec center;
    double inradius = 0.0;
    InballStatus status = InballStatus::optimal;
};

namespace detail {

// Rank of the active rows [normal_i, 1] by modified Gram-Schmidt.
inline std::size_t active_set_rank(const Polytope& poly, const InballResult& res, double tol) {
    std::vector<Vec> basis;
    const std::size_t dim = poly.faces.empty() ? 0 : poly.faces[0].normal.size() + 1;
    for (const auto& f : poly.faces) {
        if (poly.slack(f, res.center) - res.inradius > 1e-7 * (1.0 + std::fabs(f.offset))) {
            continue;
        }
        Vec row(f.normal.begin(), f.normal.end());
        row.push_back(1.0);
        for (const auto& q : basis) {
            const double proj = dot(row, q);
            for (std::size_t k = 0; k < row.size(); ++k) row[k] -= proj * q[k];
        }
        const double len = norm(row);
        if (len > tol) {
            for (auto& v : row) v /= len;
            basis.push_back(std::move(row));
            if (basis.size() == dim) break;
        }
    }
    return basis.size();
}

} // namespace detail

// Center and radius of the largest inscribed ball:
// maximize r subject to <c, normal_i> + r <= offset_i.
inline InballResult chebyshev_center(const Polytope& poly) {
    if (poly.faces.empty()) throw std::invalid_argument("chebyshev_center: empty polytope");
    const int n = poly.dim;
    std::vector<std::vector<double>> A;
    std::vector<double> b;
    A.reserve(poly.faces.size());
    for (const auto& f : poly.faces) {
        std::vector<double> row(f.normal.begin(), f.normal.end());
        row.push_back(1.0);
        A.push_back(std::move(row));
        b.push_back(f.offset);
    }
    std::vector<double> c(n + 1, 0.0);
    c[n] = 1.0;
    const LpResult lp = simplex_maximize(A, b, c);
    InballResult res;
    if (lp.status == LpResult::Status::unbounded) {
        res.status = InballStatus::unbounded;
        return res;
    }
    res.center.assign(lp.x.begin(), lp.x.begin() + n);
    res.inradius = lp.x[n];
    res.status = detail::active_set_rank(poly, res, 1e-8) < static_cast<std::size_t>(n + 1)
                     ? InballStatus::degenerate
                     : InballStatus::optimal;
    return res;
}

struct SupportValue {
    bool bounded = false;
    double value = 0.0;
};

// Support function h(d) = max <d, x> over the polytope.
inline SupportValue support(const Polytope& poly, std::span<const double> direction) {
    std::vector<std::vector<double>> A;
    std::vector<double> b;
    A.reserve(poly.faces.size());
    for (const auto& f : poly.faces) {
        A.emplace_back(f.normal.begin(), f.normal.end());
        b.push_back(f.offset);
    }
    const std::vector<double> c(direction.begin(), direction.end());
    const LpResult lp = simplex_maximize(A, b, c);
    if (lp.status == LpResult::Status::unbounded) return {false, 0.0};
    return {true, lp.objective};
}

struct BoundingBox {
    bool bounded = false;
    Vec lo;
    Vec hi;

    double corner_norm() const {
        double s = 0.0;
        for (std::size_t k = 0; k < lo.size(); ++k) {
            const double v = std::max(std::fabs(lo[k]), std::fabs(hi[k]));
            s += v * v;
        }
        return std::sqrt(s);
    }
};

// Axis-aligned box certified to contain the polytope (2n support problems).
inline BoundingBox bounding_box(const Polytope& poly) {
    const int n = poly.dim;
    BoundingBox box;
    box.lo.assign(n, 0.0);
    box.hi.assign(n, 0.0);
    Vec dir(n, 0.0);
    for (int k = 0; k < n; ++k) {
        dir[k] = 1.0;
        const SupportValue up = support(poly, dir);
        if (!up.bounded) return box;
        dir[k] = -1.0;
        const SupportValue dn = support(poly, dir);
        if (!dn.bounded) return box;
        dir[k] = 0.0;
        box.hi[k] = up.value;
        box.lo[k] = -dn.value;
    }
    box.bounded = true;
    return box;
}

// Bounding box computed from the tightest-offset faces only. Dropping faces
// enlarges the polytope, so the result still contains the original body; the
// face budget keeps the support problems small when the face list is long.
inline BoundingBox bounding_box_subset(const Polytope& poly, std::size_t face_budget) {
    if (poly.faces.size() <= face_budget) return bounding_box(poly);
    std::vector<std::size_t> order(poly.faces.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return poly.faces[a].offset < poly.faces[b].offset;
    });
    Polytope sub;
    sub.dim = poly.dim;
    for (std::size_t count = face_budget; count <= 4 * face_budget; count *= 2) {
        const std::size_t take = std::min(count, poly.faces.size());
        sub.faces.clear();
        sub.faces.reserve(take);
        for (std::size_t i = 0; i < take; ++i) sub.faces.push_back(poly.faces[order[i]]);
        const BoundingBox box = bounding_box(sub);
        if (box.bounded || take == poly.faces.size()) return box;
    }
    // The nearest faces do not close up the body; only worth the full support
    // problems while the face list stays moderate.
    if (poly.faces.size() <= 32 * face_budget) return bounding_box(poly);
    return BoundingBox{};
}

// Support of the box in one direction; closed form.
inline double box_support(const BoundingBox& box, std::span<const double> dir) {
    double s = 0.0;
    for (std::size_t k = 0; k < dir.size(); ++k) {
        s += std::max(dir[k] * box.hi[k], dir[k] * box.lo[k]);
    }
    return s;
}

// Equivalent polytope with fewer faces: faces that cannot bind inside the box
// are dropped and the box walls are added, so the intersection is unchanged
// whenever the body lies inside the box.
inline Polytope prune_with_box(const Polytope& poly, const BoundingBox& box) {
    Polytope pruned;
    pruned.dim = poly.dim;
    for (const auto& f : poly.faces) {
        if (box_support(box, f.normal) > f.offset) pruned.faces.push_back(f);
    }
    for (int k = 0; k < poly.dim; ++k) {
        Vec up(poly.dim, 0.0);
        up[k] = 1.0;
        pruned.faces.push_back({up, std::max(0.0, box.hi[k])});
        Vec dn(poly.dim, 0.0);
        dn[k] = -1.0;
        pruned.faces.push_back({dn, std::max(0.0, -box.lo[k])});
    }
    return pruned;
}

struct UnboundedDirectionError : std::runtime_error {
    UnboundedDirectionError() : std::runtime_error("hit-and-run chord is unbounded") {}
};

// Hit-and-run chain from a strictly interior start; returns the state after
// `steps` moves. The chain mixes toward the uniform law on the polytope.
inline Vec uniform_in_polytope(const Polytope& poly, std::span<const double> start,
                               RandomStream& rng, int steps) {
    if (steps < 1) throw std::invalid_argument("uniform_in_polytope: requires steps >= 1");
    for (const auto& f : poly.faces) {
        if (poly.slack(f, start) <= 0.0) {
            throw std::invalid_argument("uniform_in_polytope: start not strictly interior");
        }
    }
    const int n = poly.dim;
    Vec x(start.begin(), start.end());
    constexpr double dir_tol = 1e-13;
    for (int s = 0; s < steps; ++s) {
        const Vec dir = sample_sphere(n, rng);
        double lo = -std::numeric_limits<double>::infinity();
        double hi = std::numeric_limits<double>::infinity();
        for (const auto& f : poly.faces) {
            const double du = dot(dir, f.normal);
            const double sl = poly.slack(f, x);
            if (du > dir_tol) {
                hi = std::min(hi, sl / du);
            } else if (du < -dir_tol) {
                lo = std::max(lo, sl / du);
            }
        }
        if (!std::isfinite(lo) || !std::isfinite(hi)) throw UnboundedDirectionError{};
        if (lo > 0.0) lo = 0.0; // the current point stays on the chord
        if (hi < 0.0) hi = 0.0;
        const double step = rng.uniform(lo, hi);
        for (int k = 0; k < n; ++k) x[k] += step * dir[k];
    }
    return x;
}

// Exact rejection sampler from a bounding ball around `center`; empty when the
// proposal budget runs out (acceptance too small for this dimension).
inline std::optional<Vec> uniform_in_polytope_rejection(const Polytope& poly,
                                                        std::span<const double> center,
                                                        double ball_radius, RandomStream& rng,
                                                        std::uint64_t max_proposals) {
    const int n = poly.dim;
    for (std::uint64_t i = 0; i < max_proposals; ++i) {
        Vec y = uniform_in_ball(n, ball_radius, rng);
        for (int k = 0; k < n; ++k) y[k] += center[k];
        if (poly.contains(y, 0.0)) return y;
    }
    return std::nullopt;
}

struct SimplexHullCheck {
    double volume = 0.0;          // n-volume of the hull of the n+1 vertices
    bool contains_origin = false; // all barycentric coordinates of 0 nonnegative
};

// Volume of the simplex spanned by n+1 points in R^n and the test whether the
// origin lies in their convex hull, from one LU factorization.
inline SimplexHullCheck origin_in_simplex_hull(const std::vector<Vec>& vertices) {
    const std::size_t n = vertices.size() - 1;
    if (n < 1) throw std::invalid_argument("origin_in_simplex_hull: needs n+1 >= 2 vertices");
    std::vector<Vec> M(n, Vec(n));
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < n; ++i) M[i][j] = vertices[j + 1][i] - vertices[0][i];
    }
    Vec rhs(n);
    for (std::size_t i = 0; i < n; ++i) rhs[i] = -vertices[0][i];

    // Gaussian elimination with partial pivoting; tracks the determinant.
    double det = 1.0;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r) {
            if (std::fabs(M[r][col]) > std::fabs(M[piv][col])) piv = r;
        }
        if (std::fabs(M[piv][col]) < 1e-14) return {0.0, false}; // flat simplex
        if (piv != col) {
            std::swap(M[piv], M[col]);
            std::swap(rhs[piv], rhs[col]);
            det = -det;
        }
        det *= M[col][col];
        for (std::size_t r = col + 1; r < n; ++r) {
            const double f = M[r][col] / M[col][col];
            for (std::size_t k = col; k < n; ++k) M[r][k] -= f * M[col][k];
            rhs[r] -= f * rhs[col];
        }
    }
    Vec beta(n);
    for (std::size_t i = n; i-- > 0;) {
        double s = rhs[i];
        for (std::size_t k = i + 1; k < n; ++k) s -= M[i][k] * beta[k];
        beta[i] = s / M[i][i];
    }
    double lg = 0.0;
    for (std::size_t k = 2; k <= n; ++k) lg += std::log(static_cast<double>(k));
    SimplexHullCheck out;
    out.volume = std::fabs(det) * std::exp(-lg);
    double sum = 0.0;
    bool inside = true;
    for (double bi : beta) {
        if (bi < 0.0) inside = false;
        sum += bi;
    }
    out.contains_origin = inside && sum <= 1.0;
    return out;
}

} // namespace zerocell
