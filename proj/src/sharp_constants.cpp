#include "padic/sharp_constants.hpp"

#include <cmath>

namespace padic {

namespace {

constexpr double kScalingTolerance = 1e-12;

// 1 - p^x, accurate near x = 0.
double one_minus_power(const PadicContext& ctx, double x) { return -std::expm1(x * ctx.log_p()); }

void require(bool ok, const std::string& relation, const std::string& detail) {
    if (!ok) throw PreconditionError(relation + " violated: " + detail);
}

double finite_or_throw(double v, Checking checking, const std::string& what) {
    if (checking == Checking::strict && !(std::isfinite(v) && v > 0.0))
        throw std::domain_error(what + " is not a finite positive number (" + std::to_string(v) + ")");
    return v;
}

}  // namespace

Thm21Params Thm21Params::with_scaling(const PadicContext& ctx, const Rational& p1, const Rational& beta,
                                      const Rational& gamma, const Rational& alpha) {
    const Rational n(ctx.n());
    Rational rhs = (beta + n) / p1 - alpha;
    if (rhs.sign() <= 0)
        throw PreconditionError("(β+n)/p₁ − α > 0 violated: no q solves the scaling relation for " +
                                Thm21Params{ctx, p1, Rational(1), beta, gamma, alpha}.to_string());
    return {ctx, p1, (gamma + n) / rhs, beta, gamma, alpha};
}

Rational Thm21Params::decay() const { return beta / (p1 - Rational(1)); }

void Thm21Params::validate() const {
    const Rational n(ctx.n());
    const std::string at = to_string();
    require(p1 > Rational(1), "p₁ > 1", at);
    require(q >= Rational(1), "q ≥ 1", at);
    require(beta < n * (p1 - Rational(1)), "β < n(p₁−1)", at);
    require((n + gamma).sign() > 0, "n+γ > 0", at);
    require(alpha.sign() >= 0 && alpha < decay(), "0 ≤ α < β/(p₁−1)", at);
    double lhs = ((gamma + n) / q + alpha).to_double();
    double rhs = ((beta + n) / p1).to_double();
    require(std::abs(lhs - rhs) <= kScalingTolerance, "(γ+n)/q + α = (β+n)/p₁", at);
}

std::string Thm21Params::to_string() const {
    return "p=" + std::to_string(ctx.p()) + " n=" + std::to_string(ctx.n()) + " p1=" + p1.to_string() +
           " q=" + q.to_string() + " beta=" + beta.to_string() + " gamma=" + gamma.to_string() +
           " alpha=" + alpha.to_string();
}

void Thm22Params::validate() const {
    const Rational n(ctx.n());
    const std::string at = to_string();
    require(alpha.sign() > 0 && alpha < n, "0 < α < n", at);
    require((n + gamma).sign() > 0, "n+γ > 0", at);
}

Rational Thm22Params::q() const {
    const Rational n(ctx.n());
    return (n + gamma) / (n - alpha);
}

std::string Thm22Params::to_string() const {
    return "p=" + std::to_string(ctx.p()) + " n=" + std::to_string(ctx.n()) + " gamma=" + gamma.to_string() +
           " alpha=" + alpha.to_string();
}

double thm21_weak_prefactor(const Thm21Params& prm) {
    const double n = prm.ctx.n();
    const double g = prm.gamma.to_double();
    double base = prm.ctx.shell_factor() * prm.ctx.power(-n - g) / one_minus_power(prm.ctx, -n - g);
    return std::pow(base, 1.0 / prm.q.to_double());
}

namespace {

// ||f0||^{p1} for f0 = extremal_thm21.
double thm21_strong_base(const Thm21Params& prm) {
    const double e = prm.decay().to_double() - prm.ctx.n();
    return prm.ctx.shell_factor() * prm.ctx.power(e) / one_minus_power(prm.ctx, e);
}

double inverse_conjugate(const Thm21Params& prm) { return 1.0 - 1.0 / prm.p1.to_double(); }

}  // namespace

double thm21_strong_factor(const Thm21Params& prm) {
    return std::pow(thm21_strong_base(prm), inverse_conjugate(prm));
}

double thm21_constant(const Thm21Params& prm, Checking checking) {
    if (checking == Checking::strict) prm.validate();
    return finite_or_throw(thm21_weak_prefactor(prm) * thm21_strong_factor(prm), checking,
                           "weighted-Lebesgue Hardy constant at " + prm.to_string());
}

double thm21_exact_norm(const Thm21Params& prm) {
    prm.validate();
    const double ng = prm.ctx.n() + prm.gamma.to_double();
    double k = prm.ctx.shell_factor() / one_minus_power(prm.ctx, -ng);
    return finite_or_throw(std::pow(k, 1.0 / prm.q.to_double()) * thm21_strong_factor(prm), Checking::strict,
                           "exact weighted-Lebesgue Hardy norm at " + prm.to_string());
}

double thm22_constant(const Thm22Params& prm, Checking checking) {
    if (checking == Checking::strict) prm.validate();
    const double n = prm.ctx.n();
    const double ng = n + prm.gamma.to_double();
    double base = prm.ctx.shell_factor() / (one_minus_power(prm.ctx, -ng) * prm.ctx.power(ng));
    return finite_or_throw(std::pow(base, (n - prm.alpha.to_double()) / ng), checking,
                           "L^1 Hardy constant at " + prm.to_string());
}

double thm22_exact_norm(const Thm22Params& prm) {
    prm.validate();
    const double n = prm.ctx.n();
    const double ng = n + prm.gamma.to_double();
    double k = prm.ctx.shell_factor() / one_minus_power(prm.ctx, -ng);
    return finite_or_throw(std::pow(k, (n - prm.alpha.to_double()) / ng), Checking::strict,
                           "exact L^1 Hardy norm at " + prm.to_string());
}

namespace {

void require_below_n(const AlphaVector& alphas, const PadicContext& ctx) {
    for (std::size_t j = 0; j < alphas.m(); ++j)
        require(alphas[j] < Rational(ctx.n()), "α_j < n",
                "alpha_" + std::to_string(j + 1) + " = " + alphas[j].to_string() + ", n = " + std::to_string(ctx.n()));
}

void require_positive_total(const AlphaVector& alphas) {
    require(alphas.sum().sign() > 0, "α > 0", "alpha = " + alphas.sum().to_string());
}

// (1-p^-n)^m / prod_j (1 - p^{alpha_j - n}).
double product_head(const AlphaVector& alphas, const PadicContext& ctx) {
    double v = std::pow(ctx.shell_factor(), static_cast<double>(alphas.m()));
    for (const Rational& a : alphas.values()) v /= one_minus_power(ctx, a.to_double() - ctx.n());
    return v;
}

// sum_i (p^{d_{i-1}-(i-1)n} - p^{d_i-in}), summed piece by piece.
double telescoping_pieces(const AlphaVector& alphas, const PadicContext& ctx) {
    const double n = ctx.n();
    double total = 0.0;
    double d = 0.0;
    for (std::size_t i = 1; i <= alphas.m(); ++i) {
        double prev = ctx.power(d - static_cast<double>(i - 1) * n);
        d += alphas[i - 1].to_double();
        total += prev - ctx.power(d - static_cast<double>(i) * n);
    }
    return total;
}

}  // namespace

double cor31_constant(const AlphaVector& alphas, const PadicContext& ctx, Checking checking) {
    if (checking == Checking::strict) require_below_n(alphas, ctx);
    return finite_or_throw(product_head(alphas, ctx), checking, "Hardy sup-norm constant for alpha = " + alphas.to_string());
}

double cor31_telescoped(const AlphaVector& alphas, const PadicContext& ctx) {
    require_below_n(alphas, ctx);
    const double mn = static_cast<double>(alphas.m()) * ctx.n();
    double a_m = product_head(alphas, ctx) / one_minus_power(ctx, alphas.sum().to_double() - mn);
    return a_m * telescoping_pieces(alphas, ctx);
}

double cor32_bound(const AlphaVector& alphas, const PadicContext& ctx, Checking checking) {
    if (checking == Checking::strict) {
        require_below_n(alphas, ctx);
        require_positive_total(alphas);
    }
    const double mn = static_cast<double>(alphas.m()) * ctx.n();
    double v = product_head(alphas, ctx) * one_minus_power(ctx, -mn) / one_minus_power(ctx, -alphas.sum().to_double());
    return finite_or_throw(v, checking, "Hilbert sup-norm bound for alpha = " + alphas.to_string());
}

double cor32_telescoped(const AlphaVector& alphas, const PadicContext& ctx) {
    require_below_n(alphas, ctx);
    require_positive_total(alphas);
    const double a = alphas.sum().to_double();
    double b_m = ctx.power(-a) * product_head(alphas, ctx) / one_minus_power(ctx, -a);
    return b_m * (std::expm1(a * ctx.log_p()) + telescoping_pieces(alphas, ctx));
}

std::vector<double> hilbert_majorant_region_terms(const AlphaVector& alphas, const PadicContext& ctx) {
    require_below_n(alphas, ctx);
    require_positive_total(alphas);
    const double n = ctx.n();
    const double a = alphas.sum().to_double();
    const std::size_t m = alphas.m();
    const double head = std::pow(ctx.shell_factor(), static_cast<double>(m));
    std::vector<double> terms{product_head(alphas, ctx)};
    for (std::size_t i = 0; i < m; ++i) {
        double v = head * ctx.power(-a) / one_minus_power(ctx, -a);
        for (std::size_t j = 0; j < i; ++j) v *= ctx.power(alphas[j].to_double() - n);
        for (std::size_t k = 0; k < m; ++k)
            if (k != i) v /= one_minus_power(ctx, alphas[k].to_double() - n);
        terms.push_back(v);
    }
    return terms;
}

TailSum cor32_series(const AlphaVector& alphas, const PadicContext& ctx, const Truncation& truncation) {
    require_below_n(alphas, ctx);
    require_positive_total(alphas);
    KernelSpec k = hilbert_kernel(ctx, static_cast<int>(alphas.m()), balanced_hilbert_weights(alphas, ctx));
    k.truncation = truncation;
    return kernel_constant(k, alphas, ctx);
}

double cor41_product_constant(const AlphaVector& alphas, const PadicContext& ctx) {
    double v = 1.0;
    for (std::size_t j = 0; j < alphas.m(); ++j) {
        require(alphas[j].sign() < 0, "α_j < 0", "alpha_" + std::to_string(j + 1) + " = " + alphas[j].to_string());
        v *= ctx.shell_factor() / one_minus_power(ctx, alphas[j].to_double());
    }
    return v;
}

ShellFunction extremal_thm21(const Rational& beta, const Rational& p1, const PadicContext& ctx) {
    require(p1 > Rational(1), "p₁ > 1", "p1 = " + p1.to_string());
    require(beta < Rational(ctx.n()) * (p1 - Rational(1)), "β < n(p₁−1)",
            "beta = " + beta.to_string() + ", p1 = " + p1.to_string() + ", n = " + std::to_string(ctx.n()));
    return ShellFunction::power(ctx, 1.0, -(beta / (p1 - Rational(1))), ShellRange::at_most(-1));
}

ShellFunction extremal_thm22(const PadicContext& ctx) {
    return ShellFunction::power(ctx, 1.0, Rational(0), ShellRange::at_most(-1));
}

ShellFunction extremal_weighted(const Rational& alpha, const PadicContext& ctx) {
    return ShellFunction::power(ctx, 1.0, -alpha, ShellRange::all());
}

}  // namespace padic
