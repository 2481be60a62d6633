#include "padic/shell_calculus.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace padic {

double TailSum::checked() const {
    if (!converged) throw DivergenceError(diagnostic.empty() ? "divergent sum" : diagnostic);
    return value;
}

TailSum& TailSum::operator+=(const TailSum& o) {
    if (!o.converged && converged) diagnostic = o.diagnostic;
    converged = converged && o.converged;
    value += o.value;
    error_bound += o.error_bound;
    return *this;
}

TailSum TailSum::scaled(double c) const {
    TailSum t = *this;
    t.value *= c;
    t.error_bound *= std::abs(c);
    return t;
}

std::optional<std::int64_t> padic_valuation(const Rational& x, std::int64_t p) {
    if (x.is_zero()) return std::nullopt;
    auto count = [p](std::int64_t v) {
        std::int64_t c = 0;
        while (v % p == 0) {
            v /= p;
            ++c;
        }
        return c;
    };
    return count(x.num()) - count(x.den());
}

double padic_norm(const Rational& x, std::int64_t p) {
    auto v = padic_valuation(x, p);
    if (!v) return 0.0;
    return std::pow(static_cast<double>(p), static_cast<double>(-*v));
}

double ball_measure(ShellIndex gamma, const PadicContext& ctx) {
    double v = ctx.power(static_cast<double>(gamma) * ctx.n());
    if (!std::isfinite(v) || v == 0.0)
        throw std::overflow_error("ball measure p^(" + std::to_string(gamma) + "n) outside double range");
    return v;
}

double shell_measure(ShellIndex gamma, const PadicContext& ctx) { return ball_measure(gamma, ctx) * ctx.shell_factor(); }

TailSum geom_sum(const Rational& expo, const ShellRange& range, const PadicContext& ctx) {
    if (range.empty()) return TailSum::exact(0.0);
    auto diverges = [&](const char* why) {
        return TailSum::divergent(std::string("sum of p^(") + expo.to_string() + "k) over " + range.to_string() + " " +
                                  why);
    };
    if (range.lower_unbounded() && range.upper_unbounded()) return diverges("is doubly infinite");

    const double L = ctx.log_p();
    const double e = expo.to_double();
    double v;
    if (expo.is_zero()) {
        if (!range.bounded()) return diverges("has constant terms on an infinite range");
        v = static_cast<double>(range.hi - range.lo) + 1.0;
    } else if (range.lower_unbounded()) {
        if (expo.sign() < 0) return diverges("grows toward -inf");
        v = shell_power(ctx, expo, range.hi) / -std::expm1(-e * L);
    } else if (range.upper_unbounded()) {
        if (expo.sign() > 0) return diverges("grows toward +inf");
        v = shell_power(ctx, expo, range.lo) / -std::expm1(e * L);
    } else {
        const double count = static_cast<double>(range.hi - range.lo) + 1.0;
        // Factor out the largest term so the remaining ratio sum is a decaying series.
        if (expo.sign() > 0)
            v = shell_power(ctx, expo, range.hi) * std::expm1(-count * e * L) / std::expm1(-e * L);
        else
            v = shell_power(ctx, expo, range.lo) * std::expm1(count * e * L) / std::expm1(e * L);
    }
    if (!std::isfinite(v)) throw std::overflow_error("geometric sum over " + range.to_string() + " overflows");
    return TailSum::exact(v);
}

ShellFunction::ShellFunction(const PadicContext& ctx, std::vector<Segment> segments) : ctx_(ctx) {
    for (std::size_t i = 0; i < segments.size(); ++i) {
        Segment& s = segments[i];
        if (s.range.empty()) throw std::invalid_argument("segment " + std::to_string(i) + " has an empty range");
        if (!segments_.empty() && segments_.back().range.hi >= s.range.lo)
            throw std::invalid_argument("segment " + s.range.to_string() + " overlaps or precedes " +
                                        segments_.back().range.to_string());
        if (!s.sum.nonnegative_on(ctx_, s.range))
            throw std::invalid_argument("segment " + s.range.to_string() + " with value " + s.sum.to_string() +
                                        " takes negative values");
        if (!s.sum.empty()) segments_.push_back(std::move(s));
    }
}

ShellFunction ShellFunction::from_shell_values(const PadicContext& ctx, ShellIndex first,
                                               const std::vector<double>& values) {
    std::vector<Segment> segs;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!(values[i] >= 0.0) || !std::isfinite(values[i]))
            throw std::invalid_argument("shell values must be finite and nonnegative");
        if (values[i] == 0.0) continue;
        ShellIndex k = first + static_cast<ShellIndex>(i);
        if (!segs.empty() && segs.back().range.hi + 1 == k && segs.back().sum.terms().front().coeff == values[i]) {
            segs.back().range.hi = k;
            continue;
        }
        segs.push_back({{k, k}, ExpSum::constant(values[i])});
    }
    return ShellFunction(ctx, std::move(segs));
}

ShellFunction ShellFunction::power(const PadicContext& ctx, double c, const Rational& e, const ShellRange& r) {
    return ShellFunction(ctx, {{r, ExpSum::power(c, e)}});
}

ShellRange ShellFunction::support() const {
    if (segments_.empty()) return {0, -1};
    return {segments_.front().range.lo, segments_.back().range.hi};
}

double ShellFunction::operator()(ShellIndex k) const {
    auto it = std::upper_bound(segments_.begin(), segments_.end(), k,
                               [](ShellIndex key, const Segment& s) { return key < s.range.lo; });
    if (it == segments_.begin()) return 0.0;
    --it;
    if (!it->range.contains(k)) return 0.0;
    return std::max(0.0, it->sum.value(ctx_, k));
}

ShellFunction ShellFunction::scaled(double c) const {
    if (!(c >= 0.0)) throw std::invalid_argument("radial functions can only be scaled by c >= 0");
    std::vector<Segment> segs = segments_;
    for (Segment& s : segs) s.sum = s.sum.scaled(c);
    return ShellFunction(ctx_, std::move(segs));
}

ShellFunction ShellFunction::times_power(const Rational& e) const {
    std::vector<Segment> segs = segments_;
    for (Segment& s : segs) s.sum = s.sum.times_power(e);
    return ShellFunction(ctx_, std::move(segs));
}

ShellFunction ShellFunction::shifted(ShellIndex s) const {
    std::vector<Segment> segs = segments_;
    for (Segment& seg : segs) {
        if (!seg.range.lower_unbounded()) seg.range.lo -= s;
        if (!seg.range.upper_unbounded()) seg.range.hi -= s;
        seg.sum = seg.sum.shifted(ctx_, s);
    }
    return ShellFunction(ctx_, std::move(segs));
}

std::string ShellFunction::to_string() const {
    if (segments_.empty()) return "0";
    std::ostringstream os;
    for (std::size_t i = 0; i < segments_.size(); ++i) {
        if (i) os << "; ";
        os << segments_[i].range.to_string() << ": " << segments_[i].sum.to_string();
    }
    return os.str();
}

TailSum integrate_radial(const ShellFunction& f, const Rational& w) {
    const PadicContext& ctx = f.context();
    TailSum total;
    for (const Segment& s : f.segments()) {
        for (const Term& t : s.sum.terms()) {
            TailSum part = geom_sum(t.expo + Rational(ctx.n()) + w, s.range, ctx);
            if (!part.converged)
                return TailSum::divergent("integral of " + s.sum.to_string() + " on " + s.range.to_string() +
                                          " diverges: " + part.diagnostic);
            total += part.scaled(t.coeff);
        }
    }
    return total.scaled(ctx.shell_factor());
}

std::vector<ShellRange> superlevel_shells(const ShellFunction& f, double level, Inclusion inclusion) {
    if (!(level > 0.0)) throw std::invalid_argument("superlevel sets need a positive level");
    std::vector<ShellRange> out;
    for (const Segment& s : f.segments()) {
        for (const ShellRange& r : s.sum.superlevel(f.context(), s.range, level, inclusion)) {
            if (!out.empty() && out.back().hi != kPosInf && out.back().hi + 1 == r.lo)
                out.back().hi = r.hi;
            else
                out.push_back(r);
        }
    }
    return out;
}

TailSum shells_measure(const std::vector<ShellRange>& shells, const Rational& gamma_weight, const PadicContext& ctx) {
    TailSum total;
    Rational expo = Rational(ctx.n()) + gamma_weight;
    for (const ShellRange& r : shells) total += geom_sum(expo, r, ctx);
    return total.scaled(ctx.shell_factor());
}

namespace {

std::optional<double> log_geom_sum(const Rational& expo, const ShellRange& range, const PadicContext& ctx) {
    if (range.empty()) return -std::numeric_limits<double>::infinity();
    if (range.lower_unbounded() && range.upper_unbounded()) return std::nullopt;
    const double L = ctx.log_p();
    const double e = expo.to_double();
    if (expo.is_zero()) {
        if (!range.bounded()) return std::nullopt;
        return std::log(static_cast<double>(range.hi - range.lo) + 1.0);
    }
    if (range.lower_unbounded()) {
        if (expo.sign() < 0) return std::nullopt;
        return e * static_cast<double>(range.hi) * L - std::log(-std::expm1(-e * L));
    }
    if (range.upper_unbounded()) {
        if (expo.sign() > 0) return std::nullopt;
        return e * static_cast<double>(range.lo) * L - std::log(-std::expm1(e * L));
    }
    const double count = static_cast<double>(range.hi - range.lo) + 1.0;
    if (expo.sign() > 0)
        return e * static_cast<double>(range.hi) * L + std::log(std::expm1(-count * e * L) / std::expm1(-e * L));
    return e * static_cast<double>(range.lo) * L + std::log(std::expm1(count * e * L) / std::expm1(e * L));
}

}  // namespace

std::optional<double> log_shells_measure(const std::vector<ShellRange>& shells, const Rational& gamma_weight,
                                         const PadicContext& ctx) {
    const Rational expo = Rational(ctx.n()) + gamma_weight;
    std::vector<double> logs;
    for (const ShellRange& r : shells) {
        std::optional<double> l = log_geom_sum(expo, r, ctx);
        if (!l) return std::nullopt;
        logs.push_back(*l);
    }
    double top = -std::numeric_limits<double>::infinity();
    for (double l : logs) top = std::max(top, l);
    if (top == -std::numeric_limits<double>::infinity()) return top;
    double acc = 0.0;
    for (double l : logs) acc += std::exp(l - top);
    return top + std::log(acc) + std::log(ctx.shell_factor());
}

TailSum superlevel_measure(const ShellFunction& f, double level, const Rational& gamma_weight, Inclusion inclusion) {
    return shells_measure(superlevel_shells(f, level, inclusion), gamma_weight, f.context());
}

}  // namespace padic
