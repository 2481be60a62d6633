#include "padic/operators.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace padic {

AlphaVector::AlphaVector(std::vector<Rational> alphas) : alphas_(std::move(alphas)) {
    if (alphas_.empty()) throw std::invalid_argument("alpha vector must have at least one entry");
}

AlphaVector AlphaVector::parse(std::string_view csv) {
    std::vector<Rational> out;
    std::size_t start = 0;
    while (start <= csv.size()) {
        std::size_t comma = csv.find(',', start);
        if (comma == std::string_view::npos) comma = csv.size();
        out.push_back(Rational::parse(csv.substr(start, comma - start)));
        start = comma + 1;
    }
    return AlphaVector(std::move(out));
}

Rational AlphaVector::sum() const {
    Rational s;
    for (const Rational& a : alphas_) s += a;
    return s;
}

std::string AlphaVector::to_string() const {
    std::string s;
    for (std::size_t j = 0; j < alphas_.size(); ++j) s += (j ? "," : "") + alphas_[j].to_string();
    return s;
}

namespace {

// 1 / (1 - p^r) for r != 0.
double inverse_one_minus_power(const PadicContext& ctx, const Rational& r) {
    return -1.0 / std::expm1(r.to_double() * ctx.log_p());
}

// Longest finite segment expanded shell by shell when a term's partial sums grow linearly.
constexpr ShellIndex kMaxExpandedShells = ShellIndex{1} << 20;

// Pieces of I(g) = (1 - p^{-n}) sum_{k <= g - 1} f(k) p^{kn}; zero wherever no piece applies.
std::vector<Segment> strict_ball_integral(const ShellFunction& f) {
    const PadicContext& ctx = f.context();
    const Rational n(ctx.n());
    const double sf = ctx.shell_factor();
    std::vector<Segment> out;
    double before = 0.0;
    const auto& segs = f.segments();

    for (std::size_t i = 0; i < segs.size(); ++i) {
        const ShellRange& r = segs[i].range;
        const ExpSum& sum = segs[i].sum;
        auto where = [&] { return "segment " + std::to_string(i) + " " + r.to_string() + " (" + sum.to_string() + ")"; };

        if (i > 0 && before > 0.0) {
            ShellRange gap{segs[i - 1].range.hi + 2, r.lo};
            if (!gap.empty()) out.push_back({gap, ExpSum::constant(before)});
        }

        bool expand = false;
        for (const Term& t : sum.terms()) {
            Rational rate = t.expo + n;
            if (r.lower_unbounded() && rate.sign() <= 0)
                throw DivergenceError("ball integral diverges at the origin on " + where());
            if (rate.is_zero()) {
                if (r.upper_unbounded())
                    throw std::domain_error("ball integral grows logarithmically on " + where() +
                                            "; not representable as an exponential sum");
                expand = true;
            }
        }

        ShellRange image{r.lower_unbounded() ? kNegInf : r.lo + 1, r.upper_unbounded() ? kPosInf : r.hi + 1};
        if (expand) {
            if (r.hi - r.lo >= kMaxExpandedShells) throw std::length_error("segment too long to expand: " + where());
            double acc = before;
            for (ShellIndex k = r.lo; k <= r.hi; ++k) {
                acc += sf * sum.value(ctx, k) * shell_power(ctx, n, k);
                out.push_back({{k + 1, k + 1}, ExpSum::constant(acc)});
            }
            before = acc;
            continue;
        }

        std::vector<Term> terms;
        double constant = before;
        for (const Term& t : sum.terms()) {
            Rational rate = t.expo + n;
            double a = sf * t.coeff;
            double inv = inverse_one_minus_power(ctx, rate);
            // sum_{k=lo}^{g-1} p^{k rate} = (p^{lo rate} - p^{g rate}) / (1 - p^rate)
            if (!r.lower_unbounded()) constant += a * shell_power(ctx, rate, r.lo) * inv;
            terms.push_back({-a * inv, rate});
        }
        terms.push_back({constant, Rational(0)});
        out.push_back({image, ExpSum(std::move(terms))});

        if (!r.upper_unbounded()) {
            for (const Term& t : sum.terms()) before += sf * t.coeff * geom_sum(t.expo + n, r, ctx).checked();
        }
    }
    if (!segs.empty() && !segs.back().range.upper_unbounded() && before > 0.0)
        out.push_back({ShellRange::at_least(segs.back().range.hi + 2), ExpSum::constant(before)});
    return out;
}

}  // namespace

ShellFunction fractional_hardy(const ShellFunction& f, const Rational& alpha) {
    const Rational n(f.context().n());
    if (alpha.sign() < 0 || alpha >= n)
        throw std::invalid_argument("fractional Hardy operator needs 0 <= alpha < n, got alpha = " + alpha.to_string());
    std::vector<Segment> pieces = strict_ball_integral(f);
    for (Segment& s : pieces) s.sum = s.sum.times_power(alpha - n);
    return ShellFunction(f.context(), std::move(pieces));
}

std::vector<Segment> ball_integral(const ShellFunction& f) {
    std::vector<Segment> pieces = strict_ball_integral(f);
    for (Segment& s : pieces) {
        if (!s.range.lower_unbounded()) --s.range.lo;
        if (!s.range.upper_unbounded()) --s.range.hi;
        s.sum = s.sum.shifted(f.context(), 1);
    }
    return pieces;
}

namespace {

std::vector<Segment> piecewise_product(const std::vector<Segment>& a, const std::vector<Segment>& b) {
    std::vector<Segment> out;
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        ShellRange r = intersect(a[i].range, b[j].range);
        if (!r.empty()) out.push_back({r, a[i].sum * b[j].sum});
        if (a[i].range.hi < b[j].range.hi)
            ++i;
        else
            ++j;
    }
    return out;
}

}  // namespace

ShellFunction multilinear_hardy(const std::vector<ShellFunction>& fs) {
    if (fs.empty()) throw std::invalid_argument("multilinear Hardy operator needs m >= 1 functions");
    const PadicContext& ctx = fs.front().context();
    for (const ShellFunction& f : fs)
        if (!(f.context() == ctx)) throw std::invalid_argument("functions live in different contexts");

    std::vector<Segment> product = ball_integral(fs.front());
    for (std::size_t j = 1; j < fs.size(); ++j) product = piecewise_product(product, ball_integral(fs[j]));
    const Rational decay(-static_cast<std::int64_t>(fs.size()) * ctx.n());
    for (Segment& s : product) s.sum = s.sum.times_power(decay);
    return ShellFunction(ctx, std::move(product));
}

namespace {

void require_below_dimension(const AlphaVector& alphas, const PadicContext& ctx) {
    for (std::size_t j = 0; j < alphas.m(); ++j)
        if (alphas[j] >= Rational(ctx.n()))
            throw std::invalid_argument("alpha_j < n violated: alpha_" + std::to_string(j + 1) + " = " +
                                        alphas[j].to_string() + ", n = " + std::to_string(ctx.n()));
}

}  // namespace

std::vector<double> hardy_region_terms(const AlphaVector& alphas, const PadicContext& ctx) {
    require_below_dimension(alphas, ctx);
    const std::size_t m = alphas.m();
    const double n = ctx.n();
    const double alpha = alphas.sum().to_double();
    const double head = std::pow(ctx.shell_factor(), static_cast<double>(m)) /
                        -std::expm1((alpha - static_cast<double>(m) * n) * ctx.log_p());
    std::vector<double> terms(m);
    for (std::size_t i = 0; i < m; ++i) {
        double v = head;
        for (std::size_t j = 0; j < i; ++j) v *= ctx.power(alphas[j].to_double() - n);
        for (std::size_t k = 0; k < m; ++k)
            if (k != i) v /= -std::expm1((alphas[k].to_double() - n) * ctx.log_p());
        terms[i] = v;
    }
    return terms;
}

double hardy_region_sum(const AlphaVector& alphas, const PadicContext& ctx) {
    double s = 0.0;
    for (double t : hardy_region_terms(alphas, ctx)) s += t;
    return s;
}

std::size_t leading_axis(std::span<const ShellIndex> shells) {
    if (shells.empty()) throw std::invalid_argument("leading_axis of an empty tuple");
    return static_cast<std::size_t>(std::max_element(shells.begin(), shells.end()) - shells.begin());
}

}  // namespace padic
