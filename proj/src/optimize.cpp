#include "pusurv/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

namespace pusurv {

namespace {

constexpr double kArmijo = 1e-4;
constexpr double kCurvature = 0.9;
constexpr int kMaxLineSearchEvals = 60;
// Near a minimum, changes in f drown in rounding; trial points whose value is
// within this relative band of f0 are then judged by their slope alone.
constexpr double kValueNoise = 1e-10;

struct Trial {
    double alpha = 0.0;
    double f = 0.0;
    double slope = 0.0;  // directional derivative
    Vector x;
    Vector g;
    bool finite = false;
};

class LineSearch {
public:
    LineSearch(const ValueAndGradient& fg, const Vector& x0, double f0, const Vector& g0, const Vector& dir)
        : fg_(fg), x0_(x0), f0_(f0), dir_(dir), slope0_(g0.dot(dir)) {}

    // Strong Wolfe search; falls back to the best Armijo point found.
    std::optional<Trial> run(double alpha_init) {
        Trial prev{0.0, f0_, slope0_, x0_, {}, true};
        double alpha = alpha_init;
        for (int i = 0; i < kMaxLineSearchEvals; ++i) {
            Trial cur = eval(alpha);
            if (!cur.finite) {
                alpha = prev.alpha + 0.5 * (alpha - prev.alpha);
                if (alpha - prev.alpha <= 0.0) break;
                continue;
            }
            if (approximate_wolfe(cur)) return cur;
            if (cur.f > f0_ + kArmijo * cur.alpha * slope0_ || (i > 0 && cur.f >= prev.f)) {
                return zoom(prev, cur);
            }
            if (std::abs(cur.slope) <= -kCurvature * slope0_) return cur;
            if (cur.slope >= 0.0) return zoom(cur, prev);
            prev = std::move(cur);
            alpha *= 2.0;
        }
        if (prev.alpha > 0.0) return prev;
        return std::nullopt;
    }

    int evaluations() const { return evals_; }
    bool saw_non_finite() const { return saw_non_finite_; }
    const Vector& last_point() const { return last_point_; }

private:
    Trial eval(double alpha) {
        ++evals_;
        Trial t;
        t.alpha = alpha;
        t.x = x0_ + alpha * dir_;
        t.g.resize(x0_.size());
        t.f = fg_(t.x, t.g);
        t.finite = std::isfinite(t.f) && t.g.allFinite();
        if (t.finite) {
            t.slope = t.g.dot(dir_);
        } else {
            saw_non_finite_ = true;
            last_point_ = t.x;
        }
        return t;
    }

    bool approximate_wolfe(const Trial& t) const {
        return t.finite && t.f <= f0_ + kValueNoise * (1.0 + std::abs(f0_)) && t.slope >= kCurvature * slope0_ &&
               t.slope <= (2.0 * kArmijo - 1.0) * slope0_;
    }

    // Cubic interpolation on [lo, hi], safeguarded to the middle 80%.
    static double interpolate(const Trial& lo, const Trial& hi) {
        const double d1 = lo.slope + hi.slope - 3.0 * (lo.f - hi.f) / (lo.alpha - hi.alpha);
        const double disc = d1 * d1 - lo.slope * hi.slope;
        double a = 0.5 * (lo.alpha + hi.alpha);
        if (disc >= 0.0) {
            const double d2 = std::copysign(std::sqrt(disc), hi.alpha - lo.alpha);
            const double denom = hi.slope - lo.slope + 2.0 * d2;
            if (denom != 0.0) a = hi.alpha - (hi.alpha - lo.alpha) * (hi.slope + d2 - d1) / denom;
        }
        const double left = std::min(lo.alpha, hi.alpha);
        const double right = std::max(lo.alpha, hi.alpha);
        const double margin = 0.1 * (right - left);
        if (!std::isfinite(a) || a < left + margin || a > right - margin) a = 0.5 * (left + right);
        return a;
    }

    std::optional<Trial> zoom(Trial lo, Trial hi) {
        for (int i = 0; i < kMaxLineSearchEvals; ++i) {
            if (std::abs(hi.alpha - lo.alpha) <= 1e-16 * std::max(1.0, std::abs(lo.alpha))) break;
            const double alpha = hi.finite ? interpolate(lo, hi) : 0.5 * (lo.alpha + hi.alpha);
            Trial cur = eval(alpha);
            if (approximate_wolfe(cur)) return cur;
            if (!cur.finite || cur.f > f0_ + kArmijo * alpha * slope0_ || cur.f >= lo.f) {
                hi = std::move(cur);
                continue;
            }
            if (std::abs(cur.slope) <= -kCurvature * slope0_) return cur;
            if (cur.slope * (hi.alpha - lo.alpha) >= 0.0) hi = lo;
            lo = std::move(cur);
        }
        if (lo.alpha > 0.0 && lo.f < f0_) return lo;
        return std::nullopt;
    }

    const ValueAndGradient& fg_;
    const Vector& x0_;
    double f0_;
    const Vector& dir_;
    double slope0_;
    int evals_ = 0;
    bool saw_non_finite_ = false;
    Vector last_point_;
};

// One backtracking steepest-descent step; nullopt if no decrease is found.
std::optional<Trial> steepest_descent_step(const ValueAndGradient& fg, const Vector& x, double f, const Vector& g) {
    const double gnorm = g.norm();
    if (gnorm == 0.0) return std::nullopt;
    const Vector dir = -g / gnorm;
    double alpha = std::max(1.0, x.norm());
    for (int i = 0; i < 80; ++i, alpha *= 0.5) {
        Trial t;
        t.alpha = alpha;
        t.x = x + alpha * dir;
        t.g.resize(x.size());
        t.f = fg(t.x, t.g);
        if (std::isfinite(t.f) && t.g.allFinite() && t.f < f - kArmijo * alpha * gnorm) {
            t.finite = true;
            return t;
        }
    }
    return std::nullopt;
}

}  // namespace

MinimizeResult minimize(const ValueAndGradient& fg, const Vector& init, const MinimizeOptions& opts) {
    const Eigen::Index n = init.size();
    MinimizeResult res;
    res.argmin = init;
    res.gradient.resize(n);
    res.value = fg(res.argmin, res.gradient);
    if (!std::isfinite(res.value) || !res.gradient.allFinite()) {
        throw MinimizerError("objective not finite at the initial point", init);
    }

    Matrix inv_hessian = Matrix::Identity(n, n);
    bool scaled = false;
    auto converged = [&] { return res.gradient.size() == 0 || res.gradient.lpNorm<Eigen::Infinity>() <= opts.gradient_tolerance; };

    if (converged()) {
        res.status = MinimizeStatus::Converged;
        return res;
    }

    for (res.iterations = 0; res.iterations < opts.max_iterations;) {
        Vector dir = -inv_hessian * res.gradient;
        if (!(res.gradient.dot(dir) < 0.0)) {
            inv_hessian.setIdentity();
            scaled = false;
            dir = -res.gradient;
        }
        const double alpha0 = scaled ? 1.0 : std::min(1.0, 1.0 / res.gradient.lpNorm<Eigen::Infinity>());

        LineSearch search(fg, res.argmin, res.value, res.gradient, dir);
        std::optional<Trial> step = search.run(alpha0);
        bool rescued = false;
        if (!step) {
            step = steepest_descent_step(fg, res.argmin, res.value, res.gradient);
            if (!step) {
                if (search.saw_non_finite()) {
                    throw MinimizerError("objective not finite along the search direction", search.last_point());
                }
                res.status = MinimizeStatus::Stalled;
                return res;
            }
            rescued = true;
            ++res.fallback_steps;
        }
        ++res.iterations;

        const Vector s = step->x - res.argmin;
        const Vector y = step->g - res.gradient;
        res.argmin = std::move(step->x);
        res.gradient = std::move(step->g);
        res.value = step->f;

        if (converged()) {
            res.status = MinimizeStatus::Converged;
            return res;
        }

        if (rescued) {
            inv_hessian.setIdentity();
            scaled = false;
            continue;
        }
        const double sy = s.dot(y);
        if (sy > 1e-12 * s.norm() * y.norm()) {
            if (!scaled) {
                inv_hessian = Matrix::Identity(n, n) * (sy / y.squaredNorm());
                scaled = true;
            }
            const double rho = 1.0 / sy;
            const Vector hy = inv_hessian * y;
            const double yhy = y.dot(hy);
            inv_hessian += (rho * rho * yhy + rho) * (s * s.transpose()) - rho * (hy * s.transpose() + s * hy.transpose());
        }
    }
    res.status = MinimizeStatus::IterationLimit;
    return res;
}

MinimizeResult minimize(const ObjectiveFn& objective, const GradientFn& gradient, const Vector& init,
                        const MinimizeOptions& opts) {
    ValueAndGradient fg = [&](const Vector& x, Vector& g) {
        const double f = objective(x);
        if (std::isfinite(f)) {
            g = gradient(x);
        } else {
            g.setConstant(x.size(), std::numeric_limits<double>::quiet_NaN());
        }
        return f;
    };
    return minimize(fg, init, opts);
}

}  // namespace pusurv
