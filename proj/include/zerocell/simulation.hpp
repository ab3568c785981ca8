#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "zerocell/geometry.hpp"
#include "zerocell/hyperplane_law.hpp"
#include "zerocell/log_space.hpp"
#include "zerocell/random.hpp"
#include "zerocell/stats.hpp"
#include "zerocell/voronoi_law.hpp"

namespace zerocell {

struct WindowError : std::runtime_error {
    double rejection_rate;
    explicit WindowError(double rate)
        : std::runtime_error("simulation window too small: rejection rate " +
                             std::to_string(rate)),
          rejection_rate(rate) {}
};

struct RejectionStallError : std::runtime_error {
    RejectionStallError()
        : std::runtime_error("direction rejection stalled; dimension too large for this sampler") {}
};

// ---------------------------------------------------------------------------
// Deterministic chunked execution. Trials are split into fixed-size chunks,
// each chunk gets its own stream derived from the master seed, and chunk
// results merge in index order. The outcome is identical for any worker count.
// ---------------------------------------------------------------------------

inline constexpr std::uint64_t kChunkTrials = 1024;

template <class Acc, class Body>
std::vector<Acc> run_chunked(std::uint64_t master_seed, std::uint64_t trials, int workers,
                             Body&& body) {
    const std::uint64_t n_chunks = (trials + kChunkTrials - 1) / kChunkTrials;
    std::vector<Acc> results(n_chunks);
    auto run_one = [&](std::uint64_t idx) {
        RandomStream rng = RandomStream::child(master_seed, idx);
        const std::uint64_t count =
            std::min(kChunkTrials, trials - idx * kChunkTrials);
        results[idx] = body(rng, count);
    };
    if (workers <= 1 || n_chunks <= 1) {
        for (std::uint64_t i = 0; i < n_chunks; ++i) run_one(i);
        return results;
    }
    std::atomic<std::uint64_t> next{0};
    std::vector<std::thread> pool;
    const int n_threads = static_cast<int>(std::min<std::uint64_t>(workers, n_chunks));
    pool.reserve(n_threads);
    for (int t = 0; t < n_threads; ++t) {
        pool.emplace_back([&] {
            while (true) {
                const std::uint64_t idx = next.fetch_add(1);
                if (idx >= n_chunks) return;
                run_one(idx);
            }
        });
    }
    for (auto& th : pool) th.join();
    return results;
}

// Wilson-interval estimate of P(event) from a deterministic chunked run.
template <class Sampler>
EstimateCI estimate_probability(Sampler&& sampler, std::uint64_t trials, double level,
                                std::uint64_t seed, int workers = 1) {
    if (trials == 0) throw std::invalid_argument("estimate_probability: requires trials >= 1");
    const auto counts = run_chunked<std::uint64_t>(
        seed, trials, workers, [&](RandomStream& rng, std::uint64_t count) {
            std::uint64_t hits = 0;
            for (std::uint64_t i = 0; i < count; ++i) {
                if (sampler(rng)) ++hits;
            }
            return hits;
        });
    std::uint64_t successes = 0;
    for (std::uint64_t c : counts) successes += c;
    return wilson_interval(successes, trials, level);
}

// ---------------------------------------------------------------------------
// Poisson hyperplane process in a ball window.
// ---------------------------------------------------------------------------

struct HyperplaneRealization {
    struct Plane {
        Vec normal;    // unit
        double offset; // signed distance tau, |tau| <= window_radius
    };
    double window_radius = 0.0;
    std::vector<Plane> planes;
};

// Hyperplanes hitting B(W): Poisson(2 gamma W) many, offset uniform on
// [-W, W], direction uniform on the sphere.
inline HyperplaneRealization sample_hyperplane_process(const HyperplaneModel& model, double window,
                                                       RandomStream& rng) {
    if (!(window > 0.0)) throw std::domain_error("sample_hyperplane_process: window > 0");
    HyperplaneRealization real;
    real.window_radius = window;
    const std::uint64_t count = rng.poisson(2.0 * model.hyperplane_intensity * window);
    real.planes.reserve(count);
    for (std::uint64_t i = 0; i < count; ++i) {
        Vec u = sample_sphere(model.dim, rng);
        const double tau = rng.uniform(-window, window);
        real.planes.push_back({std::move(u), tau});
    }
    return real;
}

// Consistent extension: adds the independent hyperplanes with |tau| in
// (old window, new window]; the union is a realization on the larger window.
inline void extend_hyperplane_process(const HyperplaneModel& model, HyperplaneRealization& real,
                                      double new_window, RandomStream& rng) {
    if (!(new_window > real.window_radius)) return;
    const double width = new_window - real.window_radius;
    const std::uint64_t count = rng.poisson(2.0 * model.hyperplane_intensity * width);
    for (std::uint64_t i = 0; i < count; ++i) {
        Vec u = sample_sphere(model.dim, rng);
        const double mag = rng.uniform(real.window_radius, new_window);
        const double tau = rng.uniform() < 0.5 ? -mag : mag;
        real.planes.push_back({std::move(u), tau});
    }
    real.window_radius = new_window;
}

inline bool plane_hits_segment(const HyperplaneRealization::Plane& plane,
                               std::span<const double> endpoint) {
    const double proj = dot(plane.normal, endpoint);
    return plane.offset >= std::min(0.0, proj) && plane.offset <= std::max(0.0, proj);
}

inline bool plane_hits_ball(const HyperplaneRealization::Plane& plane, double radius) {
    return std::fabs(plane.offset) < radius;
}

// Zero cell of the induced mosaic: for each hyperplane keep the closed
// halfspace containing the origin. A zero offset gets the positive sign.
inline Polytope zero_cell(const HyperplaneRealization& real, int dim) {
    Polytope cell;
    cell.dim = dim;
    cell.faces.reserve(real.planes.size());
    for (const auto& p : real.planes) {
        const double sign = p.offset < 0.0 ? -1.0 : 1.0;
        Vec u(p.normal.size());
        for (std::size_t k = 0; k < u.size(); ++k) u[k] = sign * p.normal[k];
        cell.faces.push_back({std::move(u), std::fabs(p.offset)});
    }
    return cell;
}

// ---------------------------------------------------------------------------
// Pipeline configuration shared by the mosaic samplers.
// ---------------------------------------------------------------------------

struct PipelineOptions {
    double window_radius = 0.0; // 0: model-driven default
    int steps_per_dim = 200;    // hit-and-run steps per dimension after burn-in
    int burnin_per_dim = 100;
    int max_extensions = 16;
    std::uint64_t max_points = 4000;    // cap on Voronoi realization growth
    std::uint64_t max_resamples = 1000; // per requested draw
    double max_rejection_rate = 0.05;   // window contract for batch estimators
    std::uint64_t ball_proposal_cap = 3000;       // before falling back to hit-and-run
    std::uint64_t max_hull_proposals = 2000000;   // typical-cell direction rejection
    std::size_t box_face_budget = 64;             // support-problem size cap

    enum class Path { automatic, rejection, hit_and_run };
    Path path = Path::automatic;

    int chain_steps(int dim) const { return (steps_per_dim + burnin_per_dim) * dim; }
};

// Window defaults: Voronoi window carries exponent mass 20 (miss probability
// e^{-20}); hyperplane window is 10x the inverse of the tail decay rate
// gamma f_n(0).
inline double default_window(const VoronoiModel& model) {
    return std::exp((std::log(20.0) - model.log_cell_intensity -
                     log_unit_ball_volume(model.dim).log()) /
                    model.dim);
}

inline double default_window(const HyperplaneModel& model) {
    return 10.0 * std::exp(std::log(double(model.dim)) + log_unit_ball_volume(model.dim).log() -
                           std::log(2.0) - std::log(model.hyperplane_intensity) -
                           log_unit_ball_volume(model.dim - 1).log());
}

struct NormDraw {
    double norm = 0.0;
    std::uint64_t resamples = 0;
    bool certified = true;
};

// ---------------------------------------------------------------------------
// Hyperplane mosaic: uniform point in the inball-centered zero cell.
// ---------------------------------------------------------------------------

inline NormDraw sample_norm_in_zero_cell(const HyperplaneModel& model, const PipelineOptions& opt,
                                         RandomStream& rng) {
    const double base_window = opt.window_radius > 0.0 ? opt.window_radius : default_window(model);
    NormDraw out;
    for (std::uint64_t attempt = 0; attempt <= opt.max_resamples; ++attempt) {
        HyperplaneRealization real = sample_hyperplane_process(model, base_window, rng);
        Polytope cell = zero_cell(real, model.dim);
        // Grow the window until every point of the cell is certified closer to
        // the origin than any hyperplane left outside it.
        bool inside_window = false;
        BoundingBox box;
        for (int ext = 0;; ++ext) {
            box = bounding_box_subset(cell, opt.box_face_budget);
            if (box.bounded && box.corner_norm() <= real.window_radius) {
                inside_window = true;
                break;
            }
            if (ext >= opt.max_extensions) break;
            extend_hyperplane_process(model, real, 1.5 * real.window_radius, rng);
            cell = zero_cell(real, model.dim);
        }
        if (!inside_window) {
            ++out.resamples;
            continue;
        }
        cell = prune_with_box(cell, box);
        const InballResult inball = chebyshev_center(cell);
        if (inball.status != InballStatus::optimal || !(inball.inradius > 0.0)) {
            ++out.resamples;
            continue;
        }
        const Vec point = uniform_in_polytope(cell, inball.center, rng,
                                              opt.chain_steps(model.dim));
        double sq = 0.0;
        for (int k = 0; k < model.dim; ++k) {
            const double d = point[k] - inball.center[k];
            sq += d * d;
        }
        out.norm = std::sqrt(sq);
        return out;
    }
    throw WindowError(1.0);
}

// ---------------------------------------------------------------------------
// Poisson points in a ball window, with consistent annulus extension.
// ---------------------------------------------------------------------------

struct PointRealization {
    double window_radius = 0.0;
    std::vector<Vec> points;
};

inline PointRealization sample_poisson_points(const VoronoiModel& model, double window,
                                              RandomStream& rng) {
    if (!(window > 0.0)) throw std::domain_error("sample_poisson_points: window > 0");
    PointRealization real;
    real.window_radius = window;
    const double mean = std::exp(model.log_cell_intensity + log_unit_ball_volume(model.dim).log() +
                                 model.dim * std::log(window));
    const std::uint64_t count = rng.poisson(mean);
    real.points.reserve(count);
    for (std::uint64_t i = 0; i < count; ++i) {
        real.points.push_back(uniform_in_ball(model.dim, window, rng));
    }
    return real;
}

inline void extend_poisson_points(const VoronoiModel& model, PointRealization& real,
                                  double new_window, RandomStream& rng) {
    if (!(new_window > real.window_radius)) return;
    const int n = model.dim;
    const double log_kappa = log_unit_ball_volume(n).log();
    const double a = n * std::log(real.window_radius);
    const double b = n * std::log(new_window);
    const double mean = std::exp(model.log_cell_intensity + log_kappa + log_diff(b, a));
    const std::uint64_t count = rng.poisson(mean);
    for (std::uint64_t i = 0; i < count; ++i) {
        Vec x = sample_sphere(n, rng);
        const double u = rng.uniform();
        // radius with r^n uniform between the old and new window powers
        const double log_rn = u == 0.0 ? a : log_add(a, std::log(u) + log_diff(b, a));
        const double r = std::exp(log_rn / n);
        for (auto& v : x) v *= r;
        real.points.push_back(std::move(x));
    }
    real.window_radius = new_window;
}

// ---------------------------------------------------------------------------
// Voronoi zero cell: nucleus plus exact membership test.
// ---------------------------------------------------------------------------

class VoronoiZeroCell {
  public:
    explicit VoronoiZeroCell(std::vector<Vec> points) : points_(std::move(points)) {
        if (points_.empty()) throw std::invalid_argument("VoronoiZeroCell: empty point set");
        nucleus_ = 0;
        double best = norm(points_[0]);
        for (std::size_t i = 1; i < points_.size(); ++i) {
            const double d = norm(points_[i]);
            if (d < best) {
                best = d;
                nucleus_ = i;
            }
        }
    }

    const Vec& nucleus() const { return points_[nucleus_]; }
    std::size_t nucleus_index() const { return nucleus_; }
    const std::vector<Vec>& points() const { return points_; }

    // y belongs to the cell iff the nucleus is (weakly) its nearest point.
    bool contains(std::span<const double> y) const {
        double dn = 0.0;
        const Vec& x0 = points_[nucleus_];
        for (std::size_t k = 0; k < x0.size(); ++k) {
            const double d = y[k] - x0[k];
            dn += d * d;
        }
        for (const auto& p : points_) {
            double dj = 0.0;
            for (std::size_t k = 0; k < p.size(); ++k) {
                const double d = y[k] - p[k];
                dj += d * d;
            }
            if (dj < dn - 1e-12) return false;
        }
        return true;
    }

  private:
    std::vector<Vec> points_;
    std::size_t nucleus_ = 0;
};

inline VoronoiZeroCell voronoi_zero_cell(std::vector<Vec> points) {
    return VoronoiZeroCell(std::move(points));
}

namespace detail {

inline std::size_t nearest_to_origin(const std::vector<Vec>& points) {
    std::size_t best = 0;
    double best_d = norm(points[0]);
    for (std::size_t i = 1; i < points.size(); ++i) {
        const double d = norm(points[i]);
        if (d < best_d) {
            best_d = d;
            best = i;
        }
    }
    return best;
}

// Bisector halfspaces of the nucleus against every other point, in
// nucleus-centered coordinates. This is the centered Voronoi cell.
inline Polytope voronoi_centered_cell(const std::vector<Vec>& points, std::size_t nucleus) {
    const std::size_t n = points[nucleus].size();
    Polytope cell;
    cell.dim = static_cast<int>(n);
    cell.faces.reserve(points.size() - 1);
    const Vec& x0 = points[nucleus];
    for (std::size_t j = 0; j < points.size(); ++j) {
        if (j == nucleus) continue;
        Vec u(n);
        double len = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            u[k] = points[j][k] - x0[k];
            len += u[k] * u[k];
        }
        len = std::sqrt(len);
        if (!(len > 0.0)) continue; // coincident point, no constraint
        for (auto& v : u) v /= len;
        cell.faces.push_back({std::move(u), 0.5 * len});
    }
    return cell;
}

// Certificate that the windowed cell equals the cell of the full process:
// max over the certified box of |x0 + y| + |y| must not exceed the window.
// The map is convex, so checking the box corners is enough.
inline bool cell_inside_window(const Vec& nucleus, const BoundingBox& box, double window, int dim) {
    if (dim > 20) return false; // 2^dim corners; certification is a low-n tool
    const std::uint64_t corners = 1ull << dim;
    for (std::uint64_t mask = 0; mask < corners; ++mask) {
        double norm_y = 0.0;
        double norm_zy = 0.0;
        for (int k = 0; k < dim; ++k) {
            const double y = (mask >> k) & 1 ? box.hi[k] : box.lo[k];
            norm_y += y * y;
            const double z = nucleus[k] + y;
            norm_zy += z * z;
        }
        if (std::sqrt(norm_y) + std::sqrt(norm_zy) > window) return false;
    }
    return true;
}

} // namespace detail

// ---------------------------------------------------------------------------
// Voronoi mosaic: uniform point in the nucleus-centered zero cell.
//
// The realization is extended annulus by annulus (a consistent refinement of
// the same process) until the cell is certified independent of the window or
// the growth budget runs out; past the budget the draw proceeds on the
// windowed cell and is flagged uncertified. Sampling inside the cell routes
// between exact ball rejection and hit-and-run from the nucleus.
// ---------------------------------------------------------------------------

inline NormDraw sample_norm_in_zero_cell(const VoronoiModel& model, const PipelineOptions& opt,
                                         RandomStream& rng) {
    const int n = model.dim;
    const double base_window = opt.window_radius > 0.0 ? opt.window_radius : default_window(model);
    const double growth = std::exp(std::log(2.0) / n); // volume doubles per extension
    NormDraw out;
    for (std::uint64_t attempt = 0; attempt <= opt.max_resamples; ++attempt) {
        PointRealization real = sample_poisson_points(model, base_window, rng);
        std::size_t nucleus = 0;
        Polytope cell;
        BoundingBox box;
        bool certified = false;
        for (int ext = 0; ext <= opt.max_extensions; ++ext) {
            if (ext > 0) {
                extend_poisson_points(model, real, growth * real.window_radius, rng);
            }
            if (real.points.size() < static_cast<std::size_t>(n) + 2) continue;
            nucleus = detail::nearest_to_origin(real.points);
            cell = detail::voronoi_centered_cell(real.points, nucleus);
            box = bounding_box_subset(cell, opt.box_face_budget);
            if (!box.bounded) continue;
            if (detail::cell_inside_window(real.points[nucleus], box, real.window_radius, n)) {
                certified = true;
                break;
            }
            // Window radius that would certify the current box; give up on
            // certification when reaching it needs far more points than the
            // budget allows and take the windowed cell as is.
            const double need = norm(real.points[nucleus]) + 2.0 * box.corner_norm();
            const double projected = model.log_cell_intensity + log_unit_ball_volume(n).log() +
                                     n * std::log(need);
            if (projected > std::log(10.0 * static_cast<double>(opt.max_points))) break;
            if (real.points.size() >= opt.max_points) break;
        }
        if (!box.bounded) {
            ++out.resamples; // window artifact: open cell in the windowed view
            continue;
        }
        out.certified = certified;

        cell = prune_with_box(cell, box);
        const Vec origin(n, 0.0);
        Vec point;
        const double ball_radius = box.corner_norm();
        // Expected acceptance when proposing from the cover ball, with the
        // mean cell volume 1/lambda as the cell-size proxy.
        const double log_acceptance = -(model.log_cell_intensity +
                                        log_unit_ball_volume(n).log() +
                                        n * std::log(ball_radius));
        const bool try_rejection =
            opt.path == PipelineOptions::Path::rejection ||
            (opt.path == PipelineOptions::Path::automatic && log_acceptance > std::log(1e-3));
        if (try_rejection) {
            auto y = uniform_in_polytope_rejection(cell, origin, ball_radius, rng,
                                                   opt.ball_proposal_cap);
            if (y.has_value()) point = std::move(*y);
        }
        if (point.empty()) {
            point = uniform_in_polytope(cell, origin, rng, opt.chain_steps(n));
        }
        out.norm = norm(point);
        return out;
    }
    throw WindowError(1.0);
}

// ---------------------------------------------------------------------------
// Batch norm sampling through the deterministic chunked runner.
// ---------------------------------------------------------------------------

struct NormBatch {
    std::vector<double> norms;
    std::uint64_t n_rejected = 0;
    std::uint64_t n_uncertified = 0;
};

template <class Model>
NormBatch sample_norm_batch(const Model& model, const PipelineOptions& opt, std::uint64_t trials,
                            std::uint64_t seed, int workers = 1) {
    auto chunks = run_chunked<NormBatch>(
        seed, trials, workers, [&](RandomStream& rng, std::uint64_t count) {
            NormBatch acc;
            acc.norms.reserve(count);
            for (std::uint64_t i = 0; i < count; ++i) {
                const NormDraw draw = sample_norm_in_zero_cell(model, opt, rng);
                acc.norms.push_back(draw.norm);
                acc.n_rejected += draw.resamples;
                if (!draw.certified) ++acc.n_uncertified;
            }
            return acc;
        });
    NormBatch out;
    out.norms.reserve(trials);
    for (auto& c : chunks) {
        out.norms.insert(out.norms.end(), c.norms.begin(), c.norms.end());
        out.n_rejected += c.n_rejected;
        out.n_uncertified += c.n_uncertified;
    }
    const double rate = static_cast<double>(out.n_rejected) /
                        static_cast<double>(out.n_rejected + trials);
    if (rate > opt.max_rejection_rate) throw WindowError(rate);
    return out;
}

// ---------------------------------------------------------------------------
// Slivnyak check: empirical probability that the ball B(x, |x|) is void.
// ---------------------------------------------------------------------------

inline EstimateCI slivnyak_void_fraction(const VoronoiModel& model, std::span<const double> x,
                                         std::uint64_t trials, double level, RandomStream& rng) {
    if (trials == 0) throw std::invalid_argument("slivnyak_void_fraction: trials >= 1");
    const int n = model.dim;
    const double r = norm(x);
    std::uint64_t voids = 0;
    if (r == 0.0) {
        voids = trials; // empty ball is always void
    } else {
        const double window = 2.0 * r;
        const double mean = std::exp(model.log_cell_intensity +
                                     log_unit_ball_volume(n).log() + n * std::log(window));
        for (std::uint64_t t = 0; t < trials; ++t) {
            const std::uint64_t count = rng.poisson(mean);
            bool void_ball = true;
            for (std::uint64_t i = 0; i < count; ++i) {
                const Vec p = uniform_in_ball(n, window, rng);
                double d2 = 0.0;
                for (int k = 0; k < n; ++k) {
                    const double d = p[k] - x[k];
                    d2 += d * d;
                }
                if (d2 < r * r) {
                    void_ball = false;
                    break;
                }
            }
            if (void_ball) ++voids;
        }
    }
    return wilson_interval(voids, trials, level);
}

// ---------------------------------------------------------------------------
// Typical cell of the hyperplane mosaic: exponential inradius, tangent
// directions with density proportional to the hull volume and the
// origin-in-hull indicator, and the zero cell of the process outside B(R).
// ---------------------------------------------------------------------------

struct TypicalCellDraw {
    Polytope cell;
    double inradius = 0.0;
    std::uint64_t hull_proposals = 0;
};

// ln of the regular-simplex volume envelope for the direction rejection:
// sqrt(n+1)/n! ((n+1)/n)^{n/2}, the largest simplex inscribed in the sphere.
inline double log_simplex_envelope(int dim) {
    return 0.5 * std::log(dim + 1.0) - log_gamma(dim + 1.0) +
           0.5 * dim * (std::log(dim + 1.0) - std::log(static_cast<double>(dim)));
}

inline TypicalCellDraw sample_typical_cell(const HyperplaneModel& model,
                                           const PipelineOptions& opt, RandomStream& rng) {
    const int n = model.dim;
    const double gamma = model.hyperplane_intensity;
    TypicalCellDraw out;
    out.inradius = rng.exponential(2.0 * gamma);

    const double envelope = std::exp(log_simplex_envelope(n));
    std::vector<Vec> dirs(n + 1);
    while (true) {
        if (++out.hull_proposals > opt.max_hull_proposals) throw RejectionStallError{};
        for (auto& d : dirs) d = sample_sphere(n, rng);
        const SimplexHullCheck chk = origin_in_simplex_hull(dirs);
        if (chk.contains_origin && rng.uniform() < chk.volume / envelope) break;
    }

    const double window =
        std::max(opt.window_radius > 0.0 ? opt.window_radius : default_window(model),
                 2.0 * out.inradius);
    out.cell.dim = n;
    for (const auto& d : dirs) out.cell.faces.push_back({d, out.inradius});
    const std::uint64_t count = rng.poisson(2.0 * gamma * (window - out.inradius));
    for (std::uint64_t i = 0; i < count; ++i) {
        Vec u = sample_sphere(n, rng);
        const double mag = rng.uniform(out.inradius, window);
        if (rng.uniform() < 0.5) {
            for (auto& v : u) v = -v;
        }
        out.cell.faces.push_back({std::move(u), mag});
    }
    return out;
}

} // namespace zerocell
