#include "padic/norms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

namespace padic {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Scans stay where every p^{k e} involved is comfortably inside the double range.
constexpr double kSafeLog2 = 900.0;
constexpr ShellIndex kMaxFiniteScan = ShellIndex{1} << 20;

// Largest |k| at which p^{k e} stays representable for every exponent in es.
ShellIndex safe_radius(const PadicContext& ctx, const std::vector<double>& es) {
    double top = 0.0;
    for (double e : es) top = std::max(top, std::abs(e));
    if (top == 0.0) return kPosInf / 4;
    return static_cast<ShellIndex>(kSafeLog2 / (top * ctx.log_p() / std::log(2.0)));
}

// Shells of segment s scanned explicitly: all of a finite segment, or `window` shells from its finite end.
ShellRange scan_range(const Segment& s, ShellIndex window, ShellIndex radius) {
    const ShellRange& r = s.range;
    ShellRange out;
    if (r.bounded()) {
        if (r.hi - r.lo >= kMaxFiniteScan)
            throw std::length_error("segment " + r.to_string() + " is too long to scan shell by shell");
        return r;
    }
    if (r.lower_unbounded() && r.upper_unbounded())
        out = {-window, window};
    else if (r.lower_unbounded())
        out = {r.hi - window, r.hi};
    else
        out = {r.lo, r.lo + window};
    return intersect(out, {-radius, radius});
}

std::vector<double> exponents_of(const ExpSum& sum, double extra) {
    std::vector<double> es{extra};
    for (const Term& t : sum.terms()) es.push_back(t.expo.to_double());
    return es;
}

}  // namespace

double LebesgueParams::conjugate() const {
    if (p1 == Rational(1)) return kInf;
    return (p1 / (p1 - Rational(1))).to_double();
}

void LebesgueParams::validate() const {
    if (p1 < Rational(1)) throw std::invalid_argument("p1 >= 1 violated: p1 = " + p1.to_string());
}

void WeakParams::validate(const PadicContext& ctx) const {
    if (q < Rational(1)) throw std::invalid_argument("q >= 1 violated: q = " + q.to_string());
    if ((Rational(ctx.n()) + gamma).sign() <= 0)
        throw std::invalid_argument("n + gamma > 0 violated: gamma = " + gamma.to_string());
}

TailSum lp_norm(const ShellFunction& f, const LebesgueParams& params, ShellIndex window) {
    params.validate();
    const PadicContext& ctx = f.context();
    const Rational weight = Rational(ctx.n()) + params.beta;
    const double sf = ctx.shell_factor();
    TailSum total;
    for (const Segment& s : f.segments()) {
        if (s.sum.single_term() || params.p1 == Rational(1)) {
            ExpSum powered = params.p1 == Rational(1) ? s.sum : s.sum.raised(params.p1);
            for (const Term& t : powered.terms()) {
                TailSum g = geom_sum(t.expo + weight, s.range, ctx);
                if (!g.converged)
                    return TailSum::divergent("L^p integral of " + s.sum.to_string() + " on " + s.range.to_string() +
                                              " diverges: " + g.diagnostic);
                total += g.scaled(sf * t.coeff);
            }
            continue;
        }
        // Multi-term segment, p1 > 1: exact shells inside the window, closed-form majorants outside.
        const double p1 = params.p1.to_double();
        std::vector<double> es = exponents_of(s.sum, weight.to_double());
        for (double& e : es) e *= std::max(1.0, p1);
        ShellIndex radius = safe_radius(ctx, es);
        ShellRange inner = s.range.bounded() && s.range.hi - s.range.lo < kMaxFiniteScan
                               ? s.range
                               : intersect(s.range, {-std::min(window, radius), std::min(window, radius)});
        for (ShellIndex k = inner.lo; k <= inner.hi && !inner.empty(); ++k)
            total += TailSum::exact(sf * std::pow(std::max(0.0, s.sum.value(ctx, k)), p1) *
                                    shell_power(ctx, weight, k));
        double abs_sum = 0.0;
        for (const Term& t : s.sum.terms()) abs_sum += std::abs(t.coeff);
        // |sum c_i p^{k e_i}| <= (sum |c_i|) p^{k e_lead} once the leading exponent dominates every p^{k e_i}.
        auto outer = [&](const ShellRange& part, const Term& lead) {
            if (part.empty()) return;
            TailSum g = geom_sum(lead.expo * params.p1 + weight, part, ctx);
            if (!g.converged) {
                total += TailSum::divergent("L^p integral of " + s.sum.to_string() + " diverges on " +
                                            part.to_string() + ": " + g.diagnostic);
                return;
            }
            total.error_bound += sf * std::pow(abs_sum, p1) * g.value;
        };
        if (!inner.empty()) {
            outer(intersect(s.range, {inner.hi + 1, kPosInf}), s.sum.leading_up());
            outer(intersect(s.range, {kNegInf, inner.lo - 1}), s.sum.leading_down());
        } else {
            outer(intersect(s.range, {1, kPosInf}), s.sum.leading_up());
            outer(intersect(s.range, {kNegInf, 0}), s.sum.leading_down());
        }
        if (!total.converged) return total;
    }
    const double inv = 1.0 / params.p1.to_double();
    double norm = std::pow(total.value, inv);
    double err = total.error_bound > 0.0 ? std::pow(total.value + total.error_bound, inv) - norm : 0.0;
    return {norm, true, err, {}};
}

namespace {

struct LevelCandidates {
    std::vector<double> levels;
    // Objective limits as lambda -> 0 and lambda -> +inf.
    std::optional<double> zero_limit;
    std::optional<double> inf_limit;
    std::optional<std::string> divergence;
};

LevelCandidates collect_levels(const ShellFunction& f, const WeakParams& params, ShellIndex window) {
    const PadicContext& ctx = f.context();
    const Rational growth = Rational(ctx.n()) + params.gamma;
    // Tail measure of {k <= K} or {k >= K} scales like K_factor * p^{K(n + gamma)}.
    const double tail_factor = ctx.shell_factor() / -std::expm1(-growth.to_double() * ctx.log_p());
    const double inv_q = 1.0 / params.q.to_double();
    LevelCandidates out;

    for (const Segment& s : f.segments()) {
        const ExpSum& sum = s.sum;
        if (sum.single_term() && sum.leading_up().expo.is_zero()) {
            out.levels.push_back(sum.leading_up().coeff);
        } else {
            ShellRange scan = scan_range(s, window, safe_radius(ctx, exponents_of(sum, growth.to_double())));
            for (ShellIndex k = scan.lo; k <= scan.hi && !scan.empty(); ++k) {
                double v = f(k);
                if (v > 0.0) out.levels.push_back(v);
            }
        }
        if (s.range.upper_unbounded()) {
            const Term& lead = sum.leading_up();
            Rational t = lead.expo + growth / params.q;
            if (lead.expo.sign() >= 0)
                out.divergence = "values on " + s.range.to_string() + " do not decay while the weighted measure grows";
            else if (t.sign() > 0)
                out.divergence = "tail " + sum.to_string() + " on " + s.range.to_string() + " decays too slowly";
            else if (t.is_zero())
                out.zero_limit = lead.coeff * std::pow(tail_factor, inv_q);
        }
        if (s.range.lower_unbounded()) {
            const Term& lead = sum.leading_down();
            Rational t = lead.expo + growth / params.q;
            if (lead.expo.is_zero()) {
                out.levels.push_back(lead.coeff);
            } else if (lead.expo.sign() < 0) {
                if (t.sign() < 0)
                    out.divergence = "values on " + s.range.to_string() + " blow up faster than the measure shrinks";
                else if (t.is_zero())
                    out.inf_limit = lead.coeff * std::pow(tail_factor, inv_q);
            }
        }
    }
    std::sort(out.levels.begin(), out.levels.end());
    out.levels.erase(std::unique(out.levels.begin(), out.levels.end()), out.levels.end());
    return out;
}

class WeakObjective {
public:
    WeakObjective(const ShellFunction& f, const WeakParams& params) : f_(f), params_(params) {}

    // lambda * mu({f >= lambda})^{1/q}: the objective as lambda' -> lambda from below.
    std::optional<double> left(double level) { return eval(level, Inclusion::inclusive); }
    // lambda * mu({f > lambda})^{1/q}.
    std::optional<double> at(double level) { return eval(level, Inclusion::strict); }

    const std::string& failure() const { return failure_; }

private:
    std::optional<double> eval(double level, Inclusion inclusion) {
        TailSum mu;
        try {
            mu = superlevel_measure(f_, level, params_.gamma, inclusion);
        } catch (const std::overflow_error&) {
            // Tiny levels of a critically decaying tail: the set is huge but level * mu^{1/q} is not.
            std::vector<ShellRange> shells = superlevel_shells(f_, level, inclusion);
            std::optional<double> log_mu = log_shells_measure(shells, params_.gamma, f_.context());
            if (!log_mu) {
                failure_ = "superlevel set at " + std::to_string(level) + " has infinite measure";
                return std::nullopt;
            }
            return std::exp(std::log(level) + *log_mu / params_.q.to_double());
        }
        if (!mu.converged) {
            failure_ = "superlevel set at " + std::to_string(level) + " has infinite measure: " + mu.diagnostic;
            return std::nullopt;
        }
        return level * std::pow(mu.value, 1.0 / params_.q.to_double());
    }

    const ShellFunction& f_;
    const WeakParams& params_;
    std::string failure_;
};

}  // namespace

WeakNormSplit weak_norm_split(const ShellFunction& f, const WeakParams& params, double threshold, ShellIndex window) {
    params.validate(f.context());
    if (!(threshold > 0.0)) throw std::invalid_argument("weak-norm split needs a positive threshold");
    LevelCandidates c = collect_levels(f, params, window);
    if (c.divergence) return {TailSum::divergent(*c.divergence), TailSum::divergent(*c.divergence)};

    WeakObjective obj(f, params);
    double below = 0.0;
    double above = 0.0;
    auto take = [&](double& best, std::optional<double> v) {
        if (!v) return false;
        best = std::max(best, *v);
        return true;
    };
    bool ok = take(below, obj.left(threshold)) && take(above, obj.at(threshold));
    // left(threshold) is the limit from below, so a level equal to the threshold belongs to `below` only.
    for (double v : c.levels) {
        if (!ok) break;
        if (v != threshold) ok = take(v < threshold ? below : above, obj.left(v));
    }
    if (!ok) return {TailSum::divergent(obj.failure()), TailSum::divergent(obj.failure())};
    if (c.zero_limit) below = std::max(below, *c.zero_limit);
    if (c.inf_limit) above = std::max(above, *c.inf_limit);
    return {TailSum::exact(below), TailSum::exact(above)};
}

TailSum weak_norm(const ShellFunction& f, const WeakParams& params, ShellIndex window) {
    params.validate(f.context());
    LevelCandidates c = collect_levels(f, params, window);
    if (c.divergence) return TailSum::divergent(*c.divergence);
    WeakObjective obj(f, params);
    double best = 0.0;
    for (double v : c.levels) {
        auto o = obj.left(v);
        if (!o) return TailSum::divergent(obj.failure());
        best = std::max(best, *o);
    }
    if (c.zero_limit) best = std::max(best, *c.zero_limit);
    if (c.inf_limit) best = std::max(best, *c.inf_limit);
    return TailSum::exact(best);
}

TailSum weak_norm(const NumericImage& img, const PadicContext& ctx, const WeakParams& params) {
    auto build = [&](double sign) {
        std::vector<double> v(img.values.size());
        for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::max(0.0, img.values[i] + sign * img.errors[i]);
        return ShellFunction::from_shell_values(ctx, img.first, v);
    };
    TailSum mid = weak_norm(build(0.0), params);
    TailSum hi = weak_norm(build(1.0), params);
    TailSum lo = weak_norm(build(-1.0), params);
    if (!mid.converged) return mid;
    mid.error_bound = std::max(hi.value - mid.value, mid.value - lo.value);
    return mid;
}

TailSum sup_norm(const ShellFunction& f, const SupParams& params) {
    double best = 0.0;
    for (const Segment& s : f.segments()) {
        double v = s.sum.times_power(params.alpha).sup(f.context(), s.range);
        if (!std::isfinite(v))
            return TailSum::divergent("|x|^" + params.alpha.to_string() + " f(x) is unbounded on " +
                                      s.range.to_string());
        best = std::max(best, v);
    }
    return TailSum::exact(best);
}

TailSum sup_norm(const NumericImage& img, const PadicContext& ctx, const SupParams& params) {
    TailSum out;
    for (ShellIndex k = img.range().lo; k <= img.range().hi; ++k) {
        double w = shell_power(ctx, params.alpha, k);
        out.value = std::max(out.value, w * img.value(k));
        out.error_bound = std::max(out.error_bound, w * img.error(k));
    }
    return out;
}

}  // namespace padic
