#include <algorithm>
#include <atomic>
#include <cmath>
#include <iomanip>
#include <iostream>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include "padic/kernel.hpp"

namespace padic {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Below this many kernel evaluations the box is summed on the calling thread.
constexpr double kParallelThreshold = 2e5;

std::vector<Rational> default_weights(int m, std::vector<Rational> weights) {
    if (weights.empty()) return std::vector<Rational>(static_cast<std::size_t>(m), Rational(1));
    if (weights.size() != static_cast<std::size_t>(m))
        throw std::invalid_argument("kernel weights must have one entry per axis");
    Rational total;
    for (const Rational& w : weights) {
        if (w.sign() < 0) throw std::invalid_argument("kernel weights must be nonnegative");
        total += w;
    }
    if (total != Rational(m)) throw std::invalid_argument("kernel weights must sum to m = " + std::to_string(m));
    return weights;
}

KernelMajorant hilbert_majorant(const PadicContext& ctx, int m, const std::vector<Rational>& weights) {
    KernelMajorant maj;
    for (int j = 0; j < m; ++j) {
        maj.up.push_back(-Rational(ctx.n()) * weights[static_cast<std::size_t>(j)]);
        maj.down.push_back(Rational(0));
    }
    return maj;
}

double kappa(const PadicContext& ctx, const KernelMajorant& maj, std::size_t j, ShellIndex l) {
    if (l == 0) return 1.0;
    const auto& rate = l > 0 ? maj.up[j] : maj.down[j];
    if (!rate) return 0.0;
    return shell_power(ctx, *rate, l);
}

void warn_large_arity(int m) {
    static std::once_flag once;
    std::call_once(once, [m] {
        std::clog << "warning: m = " << m << " shell sums cost window^m kernel evaluations\n";
    });
}

}  // namespace

void Truncation::validate() const {
    if (window < 1 || initial_window < 1) throw std::invalid_argument("truncation window must be >= 1");
    if (!(tolerance > 0.0)) throw std::invalid_argument("truncation tolerance must be > 0");
    if (max_arity < 1) throw std::invalid_argument("max_arity must be >= 1");
}

void KernelSpec::validate(const PadicContext& ctx, ShellIndex radius) const {
    if (m < 1) throw std::invalid_argument("kernel arity m must be >= 1");
    if (!eval) throw std::invalid_argument("kernel '" + name + "' has no evaluator");
    if (majorant.up.size() != static_cast<std::size_t>(m) || majorant.down.size() != static_cast<std::size_t>(m))
        throw std::invalid_argument("kernel '" + name + "' majorant needs one rate pair per axis");
    truncation.validate();
    std::vector<ShellIndex> l(static_cast<std::size_t>(m), -radius);
    while (true) {
        double v = eval(l);
        double bound = majorant.scale;
        for (std::size_t j = 0; j < l.size(); ++j) bound *= kappa(ctx, majorant, j, l[j]);
        if (!(v >= 0.0) || !std::isfinite(v))
            throw std::invalid_argument("kernel '" + name + "' is negative or non-finite on the sample grid");
        if (v > bound * (1.0 + 1e-12))
            throw std::invalid_argument("kernel '" + name + "' exceeds its declared majorant on the sample grid");
        std::size_t j = 0;
        while (j < l.size() && l[j] == radius) l[j++] = -radius;
        if (j == l.size()) break;
        ++l[j];
    }
}

KernelSpec unit_ball_kernel(const PadicContext&, int m) {
    KernelSpec k;
    k.m = m;
    k.name = "unit max-ball indicator";
    k.eval = [](std::span<const ShellIndex> l) {
        return std::all_of(l.begin(), l.end(), [](ShellIndex x) { return x <= 0; }) ? 1.0 : 0.0;
    };
    k.majorant.up.assign(static_cast<std::size_t>(m), std::nullopt);
    k.majorant.down.assign(static_cast<std::size_t>(m), Rational(0));
    return k;
}

KernelSpec weighted_ball_kernel(const PadicContext& ctx, int m, const Rational& power) {
    KernelSpec k;
    k.m = m;
    k.name = "unit-ball indicator times |y|^" + power.to_string();
    k.eval = [ctx, power](std::span<const ShellIndex> l) {
        double v = 1.0;
        for (ShellIndex x : l) {
            if (x > 0) return 0.0;
            v *= shell_power(ctx, power, x);
        }
        return v;
    };
    k.majorant.up.assign(static_cast<std::size_t>(m), std::nullopt);
    k.majorant.down.assign(static_cast<std::size_t>(m), power);
    return k;
}

KernelSpec hilbert_kernel(const PadicContext& ctx, int m, std::vector<Rational> weights) {
    weights = default_weights(m, std::move(weights));
    KernelSpec k;
    k.m = m;
    k.name = "Hilbert kernel (1 + sum |y_j|^n)^-m";
    k.eval = [ctx, m](std::span<const ShellIndex> l) {
        double s = 1.0;
        for (ShellIndex x : l) s += ctx.power(static_cast<double>(x) * ctx.n());
        return std::pow(s, -m);
    };
    k.majorant = hilbert_majorant(ctx, m, weights);
    return k;
}

KernelSpec max_power_kernel(const PadicContext& ctx, int m, std::vector<Rational> weights) {
    weights = default_weights(m, std::move(weights));
    KernelSpec k;
    k.m = m;
    k.name = "max(1, |y_j|^n)^-m";
    k.eval = [ctx, m](std::span<const ShellIndex> l) {
        ShellIndex top = std::max<ShellIndex>(0, *std::max_element(l.begin(), l.end()));
        return ctx.power(-static_cast<double>(top) * ctx.n() * m);
    };
    k.majorant = hilbert_majorant(ctx, m, weights);
    return k;
}

KernelSpec zero_kernel(int m) {
    KernelSpec k;
    k.m = m;
    k.name = "zero";
    k.eval = [](std::span<const ShellIndex>) { return 0.0; };
    k.majorant.scale = 0.0;
    k.majorant.up.assign(static_cast<std::size_t>(m), std::nullopt);
    k.majorant.down.assign(static_cast<std::size_t>(m), std::nullopt);
    return k;
}

std::vector<Rational> balanced_hilbert_weights(const AlphaVector& alphas, const PadicContext& ctx) {
    const Rational n(ctx.n());
    const Rational m(static_cast<std::int64_t>(alphas.m()));
    const Rational share = alphas.sum() / (n * m);
    std::vector<Rational> w;
    for (const Rational& a : alphas.values()) w.push_back(Rational(1) - a / n + share);
    return w;
}

namespace {

// sum over l in r of kappa_j(l) h(l), in closed form.
TailSum weighted_axis_sum(const ShellFunction& h, const KernelMajorant& maj, std::size_t j, const ShellRange& r) {
    const PadicContext& ctx = h.context();
    TailSum total;
    auto side = [&](const ShellRange& part, const std::optional<Rational>& rate) {
        if (part.empty() || !rate) return;
        for (const Segment& s : h.segments()) {
            ShellRange q = intersect(s.range, part);
            if (q.empty()) continue;
            for (const Term& t : s.sum.terms()) {
                TailSum g = geom_sum(t.expo + *rate, q, ctx);
                if (!g.converged) {
                    total += TailSum::divergent(g.diagnostic);
                    return;
                }
                total += g.scaled(t.coeff);
            }
        }
    };
    side(intersect(r, {kNegInf, -1}), maj.down[j]);
    if (r.contains(0)) total += TailSum::exact(h(0));
    side(intersect(r, {1, kPosInf}), maj.up[j]);
    return total;
}

struct AxisSample {
    ShellIndex l;
    double h;
};

double pairwise_sum(const std::vector<double>& v, std::size_t lo, std::size_t hi) {
    if (hi - lo == 0) return 0.0;
    if (hi - lo == 1) return v[lo];
    std::size_t mid = lo + (hi - lo) / 2;
    return pairwise_sum(v, lo, mid) + pairwise_sum(v, mid, hi);
}

double slice_sum(const KernelSpec& kernel, const std::vector<std::vector<AxisSample>>& axes, std::size_t i0) {
    const std::size_t m = axes.size();
    std::vector<ShellIndex> l(m);
    std::vector<std::size_t> idx(m, 0);
    l[0] = axes[0][i0].l;
    const double h0 = axes[0][i0].h;
    for (std::size_t j = 1; j < m; ++j) l[j] = axes[j][0].l;
    double s = 0.0;
    while (true) {
        double prod = h0;
        for (std::size_t j = 1; j < m; ++j) prod *= axes[j][idx[j]].h;
        s += kernel.eval(l) * prod;
        std::size_t j = 1;
        while (j < m && idx[j] + 1 == axes[j].size()) {
            idx[j] = 0;
            l[j] = axes[j][0].l;
            ++j;
        }
        if (j >= m) break;
        ++idx[j];
        l[j] = axes[j][idx[j]].l;
    }
    return s;
}

double box_sum(const KernelSpec& kernel, const std::vector<std::vector<AxisSample>>& axes) {
    for (const auto& a : axes)
        if (a.empty()) return 0.0;
    const std::size_t slices = axes[0].size();
    double work = 1.0;
    for (const auto& a : axes) work *= static_cast<double>(a.size());
    std::vector<double> partial(slices, 0.0);

    unsigned workers = std::max(1u, std::thread::hardware_concurrency());
    if (work < kParallelThreshold || workers == 1 || slices == 1) {
        for (std::size_t i = 0; i < slices; ++i) partial[i] = slice_sum(kernel, axes, i);
    } else {
        workers = static_cast<unsigned>(std::min<std::size_t>(workers, slices));
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < slices; i = next++) partial[i] = slice_sum(kernel, axes, i);
            });
        for (auto& t : pool) t.join();
    }
    return pairwise_sum(partial, 0, slices);
}

void check_arity(const KernelSpec& kernel, std::size_t axes) {
    if (kernel.m < 1 || axes != static_cast<std::size_t>(kernel.m))
        throw std::invalid_argument("kernel '" + kernel.name + "' has arity " + std::to_string(kernel.m) + " but " +
                                    std::to_string(axes) + " functions were given");
    kernel.truncation.validate();
    if (kernel.m > kernel.truncation.max_arity)
        throw std::invalid_argument("m = " + std::to_string(kernel.m) + " exceeds max_arity = " +
                                    std::to_string(kernel.truncation.max_arity));
    if (kernel.m > 3) warn_large_arity(kernel.m);
}

}  // namespace

TailSum shell_sum_at_window(const KernelSpec& kernel, const std::vector<ShellFunction>& axes, ShellIndex window) {
    check_arity(kernel, axes.size());
    const std::size_t m = axes.size();
    const ShellRange box{-window, window};

    std::vector<std::vector<AxisSample>> samples(m);
    for (std::size_t j = 0; j < m; ++j) {
        ShellRange r = intersect(box, axes[j].support());
        for (ShellIndex l = r.lo; l <= r.hi && !r.empty(); ++l) {
            double h = axes[j](l);
            if (h > 0.0) samples[j].push_back({l, h});
        }
    }
    TailSum out = TailSum::exact(box_sum(kernel, samples));

    if (kernel.majorant.scale == 0.0) return out;
    std::vector<TailSum> outside(m), all(m);
    for (std::size_t j = 0; j < m; ++j) {
        outside[j] = weighted_axis_sum(axes[j], kernel.majorant, j, {kNegInf, -window - 1});
        outside[j] += weighted_axis_sum(axes[j], kernel.majorant, j, {window + 1, kPosInf});
        all[j] = weighted_axis_sum(axes[j], kernel.majorant, j, ShellRange::all());
    }
    double tail = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
        if (outside[j].converged && outside[j].value == 0.0) continue;
        double term = outside[j].converged ? kernel.majorant.scale * outside[j].value : kInf;
        for (std::size_t i = 0; i < m; ++i)
            if (i != j) term *= all[i].converged ? all[i].value : kInf;
        tail += term;
    }
    out.error_bound = std::isnan(tail) ? kInf : tail;
    return out;
}

TailSum shell_sum(const KernelSpec& kernel, const std::vector<ShellFunction>& axes) {
    const Truncation& t = kernel.truncation;
    t.validate();
    ShellIndex w = std::min(t.initial_window, t.window);
    while (true) {
        TailSum s = shell_sum_at_window(kernel, axes, w);
        if (s.error_bound <= t.tolerance * std::max(1.0, std::abs(s.value))) return s;
        if (w >= t.window)
        {
            std::ostringstream msg;
            msg << "shell sum for kernel '" << kernel.name << "' not certified: tail bound " << std::setprecision(3)
                << s.error_bound << " exceeds tolerance " << t.tolerance << " at window " << w
                << "; a larger window may help";
            throw DivergenceError(msg.str());
        }
        w = std::min(2 * w, t.window);
    }
}

namespace {

const PadicContext& common_context(const std::vector<ShellFunction>& fs) {
    if (fs.empty()) throw std::invalid_argument("operator needs at least one function");
    for (const ShellFunction& f : fs)
        if (!(f.context() == fs.front().context())) throw std::invalid_argument("functions live in different contexts");
    return fs.front().context();
}

template <class Axis>
NumericImage sample_image(const KernelSpec& kernel, const std::vector<ShellFunction>& fs, const ShellRange& shells,
                          Axis axis) {
    if (!shells.bounded() || shells.empty()) throw std::invalid_argument("image range must be a bounded shell range");
    NumericImage img;
    img.first = shells.lo;
    for (ShellIndex g = shells.lo; g <= shells.hi; ++g) {
        std::vector<ShellFunction> axes;
        for (const ShellFunction& f : fs) axes.push_back(axis(f, g));
        TailSum s = shell_sum(kernel, axes);
        img.values.push_back(s.value);
        img.errors.push_back(s.error_bound);
    }
    return img;
}

}  // namespace

NumericImage kernel_operator(const KernelSpec& kernel, const std::vector<ShellFunction>& fs, const ShellRange& shells) {
    const PadicContext& ctx = common_context(fs);
    return sample_image(kernel, fs, shells, [&](const ShellFunction& f, ShellIndex g) {
        return f.shifted(g).times_power(Rational(ctx.n())).scaled(ctx.shell_factor());
    });
}

TailSum kernel_constant(const KernelSpec& kernel, const AlphaVector& alphas, const PadicContext& ctx) {
    std::vector<ShellFunction> axes;
    for (const Rational& a : alphas.values())
        axes.push_back(ShellFunction::power(ctx, ctx.shell_factor(), Rational(ctx.n()) - a, ShellRange::all()));
    return shell_sum(kernel, axes);
}

NumericImage multilinear_hilbert(const std::vector<ShellFunction>& fs, const ShellRange& shells,
                                 const Truncation& truncation, std::vector<Rational> weights) {
    const PadicContext& ctx = common_context(fs);
    KernelSpec k = hilbert_kernel(ctx, static_cast<int>(fs.size()), std::move(weights));
    k.truncation = truncation;
    return kernel_operator(k, fs, shells);
}

NumericImage hausdorff_operator(const KernelSpec& phi, const std::vector<ShellFunction>& fs, const ShellRange& shells) {
    const PadicContext& ctx = common_context(fs);
    return sample_image(phi, fs, shells,
                        [&](const ShellFunction& f, ShellIndex g) { return f.shifted(g).scaled(ctx.shell_factor()); });
}

TailSum hausdorff_constant(const KernelSpec& phi, const AlphaVector& alphas, const PadicContext& ctx) {
    std::vector<ShellFunction> axes;
    for (const Rational& a : alphas.values())
        axes.push_back(ShellFunction::power(ctx, ctx.shell_factor(), -a, ShellRange::all()));
    return shell_sum(phi, axes);
}

}  // namespace padic
