#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "padic/context.hpp"
#include "padic/exp_sum.hpp"
#include "padic/rational.hpp"

namespace padic {

// Raised when a divergent sum would otherwise be consumed as a number.
class DivergenceError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Result of a possibly infinite sum. When !converged, value is meaningless.
struct TailSum {
    double value = 0.0;
    bool converged = true;
    double error_bound = 0.0;
    std::string diagnostic;

    static TailSum exact(double v) { return {v, true, 0.0, {}}; }
    static TailSum divergent(std::string why) { return {0.0, false, 0.0, std::move(why)}; }

    // value, or DivergenceError when the sum diverged.
    double checked() const;

    TailSum& operator+=(const TailSum& o);
    friend TailSum operator+(TailSum a, const TailSum& b) { return a += b; }
    TailSum scaled(double c) const;
};

// Exponent of p in x; nullopt for x = 0 (valuation +inf).
std::optional<std::int64_t> padic_valuation(const Rational& x, std::int64_t p);
// |x|_p = p^{-v(x)}, 0 for x = 0.
double padic_norm(const Rational& x, std::int64_t p);

// p^{gamma n}(1 - p^{-n}); throws std::overflow_error outside the double range.
double shell_measure(ShellIndex gamma, const PadicContext& ctx);
// p^{gamma n}.
double ball_measure(ShellIndex gamma, const PadicContext& ctx);

// sum_{k in range} p^{k expo} in closed form.
TailSum geom_sum(const Rational& expo, const ShellRange& range, const PadicContext& ctx);

struct Segment {
    ShellRange range;
    ExpSum sum;
};

// Nonnegative radial function on Q_p^n: value sum.value(k) on shell k inside each segment, 0 elsewhere.
// Segments are sorted, disjoint and nonempty.
class ShellFunction {
public:
    explicit ShellFunction(const PadicContext& ctx) : ctx_(ctx) {}
    ShellFunction(const PadicContext& ctx, std::vector<Segment> segments);

    // Value values[i] on shell first + i.
    static ShellFunction from_shell_values(const PadicContext& ctx, ShellIndex first, const std::vector<double>& values);
    // c * p^{k e} on r.
    static ShellFunction power(const PadicContext& ctx, double c, const Rational& e, const ShellRange& r);

    const PadicContext& context() const { return ctx_; }
    const std::vector<Segment>& segments() const { return segments_; }
    bool is_zero() const { return segments_.empty(); }
    // Convex hull of the segments; empty range for the zero function.
    ShellRange support() const;

    // Rounding below zero at cancellation points is clamped.
    double operator()(ShellIndex k) const;

    ShellFunction scaled(double c) const;
    // k -> f(k) p^{k e}
    ShellFunction times_power(const Rational& e) const;
    // k -> f(k + s)
    ShellFunction shifted(ShellIndex s) const;

    std::string to_string() const;

private:
    PadicContext ctx_;
    std::vector<Segment> segments_;
};

// (1 - p^{-n}) sum_k f(k) p^{k(n + w)}, the integral of f(x)|x|^w.
TailSum integrate_radial(const ShellFunction& f, const Rational& w);

// Shell ranges where f > level (or >= level), sorted and disjoint.
std::vector<ShellRange> superlevel_shells(const ShellFunction& f, double level, Inclusion inclusion);

// Measure of {f > level} (or {f >= level}) under the weight |x|^gamma_weight.
TailSum superlevel_measure(const ShellFunction& f, double level, const Rational& gamma_weight,
                           Inclusion inclusion = Inclusion::strict);

// Weighted measure of a union of shell ranges.
TailSum shells_measure(const std::vector<ShellRange>& shells, const Rational& gamma_weight, const PadicContext& ctx);

// Natural log of shells_measure for sets whose measure leaves the double range.
// nullopt when the measure is infinite, -inf for an empty set.
std::optional<double> log_shells_measure(const std::vector<ShellRange>& shells, const Rational& gamma_weight,
                                         const PadicContext& ctx);

}  // namespace padic
