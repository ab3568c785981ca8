#pragma once

// Adaptive Gauss-Kronrod (G7, K15) quadrature used as an independent oracle
// in tests. Deliberately shares no code with the library's series and
// continued-fraction evaluators.

#include <cmath>
#include <cstddef>
#include <queue>
#include <stdexcept>
#include <vector>

namespace testsupport {

namespace gk {

// K15 nodes on [0,1] side (symmetric) and weights; G7 weights on the shared nodes.
inline constexpr double nodes[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769, 0.741531185599394,
    0.586087235467691, 0.405845151377397, 0.207784955007898, 0.000000000000000};
inline constexpr double wk[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728};
inline constexpr double wg[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119, 0.417959183673469};

struct Panel {
    double a;
    double b;
    double integral;
    double error;
    bool operator<(const Panel& o) const { return error < o.error; }
};

template <class F>
Panel eval(F&& f, double a, double b) {
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    double result_k = 0.0;
    double result_g = 0.0;
    for (int i = 0; i < 8; ++i) {
        const double dx = half * nodes[i];
        const double f1 = f(mid - dx);
        const double f2 = f(mid + dx);
        const double both = (i == 7) ? f1 : f1 + f2;
        result_k += wk[i] * both;
        if (i % 2 == 1) result_g += wg[i / 2] * both;
    }
    result_k *= half;
    result_g *= half;
    return {a, b, result_k, std::fabs(result_k - result_g)};
}

} // namespace gk

// Integrates f over [a, b], splitting the worst panel first until the summed
// error estimate drops below max(abs_tol, 1e-14 * |integral|) or the panel
// budget runs out.
template <class F>
double integrate(F&& f, double a, double b, double abs_tol = 1e-10,
                 std::size_t max_panels = 20000) {
    if (!(b >= a)) throw std::invalid_argument("integrate: requires b >= a");
    std::priority_queue<gk::Panel> queue;
    queue.push(gk::eval(f, a, b));
    double total = queue.top().integral;
    double total_err = queue.top().error;
    std::size_t panels = 1;
    while (panels < max_panels) {
        const double tol = std::max(abs_tol, 1e-14 * std::fabs(total));
        if (total_err <= tol) break;
        const gk::Panel worst = queue.top();
        queue.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        const gk::Panel left = gk::eval(f, worst.a, mid);
        const gk::Panel right = gk::eval(f, mid, worst.b);
        total += left.integral + right.integral - worst.integral;
        total_err += left.error + right.error - worst.error;
        queue.push(left);
        queue.push(right);
        ++panels;
    }
    return total;
}

} // namespace testsupport
