#include "padic/exp_sum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>

namespace padic {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Largest |k * e * log2 p| evaluated directly before switching to the factored form.
constexpr double kDirectLog2Limit = 1000.0;
// Exponential bracket searches give up beyond this many shells.
constexpr ShellIndex kSearchLimit = ShellIndex{1} << 52;
// Critical regions wider than this are rejected instead of scanned.
constexpr ShellIndex kMaxCriticalWidth = ShellIndex{1} << 22;

double exponent_of(const Rational& e, ShellIndex k) {
    return static_cast<double>(static_cast<long double>(k) * e.num() / e.den());
}

int sign_of(double x) { return (x > 0) - (x < 0); }

}  // namespace

double shell_power(const PadicContext& ctx, const Rational& e, ShellIndex k) {
    return ctx.power(exponent_of(e, k));
}

ExpSum::ExpSum(std::vector<Term> terms) {
    std::stable_sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) { return a.expo < b.expo; });
    for (std::size_t i = 0; i < terms.size();) {
        std::size_t j = i;
        double sum = 0.0;
        double scale = 0.0;
        while (j < terms.size() && terms[j].expo == terms[i].expo) {
            sum += terms[j].coeff;
            scale += std::abs(terms[j].coeff);
            ++j;
        }
        if (!std::isfinite(sum)) throw std::domain_error("non-finite coefficient in exponential sum");
        // A merged coefficient at rounding level of its parts is an exact cancellation.
        if (j - i > 1 && std::abs(sum) <= 8 * std::numeric_limits<double>::epsilon() * scale) sum = 0.0;
        if (sum != 0.0) terms_.push_back({sum, terms[i].expo});
        i = j;
    }
}

double ExpSum::value(const PadicContext& ctx, ShellIndex k) const {
    if (terms_.empty()) return 0.0;
    double lo = exponent_of(terms_.front().expo, k);
    double hi = exponent_of(terms_.back().expo, k);
    double top = std::max(lo, hi);
    double log2p = ctx.log_p() / std::log(2.0);
    if (std::abs(lo) * log2p < kDirectLog2Limit && std::abs(hi) * log2p < kDirectLog2Limit) {
        double s = 0.0;
        for (const Term& t : terms_) s += t.coeff * ctx.power(exponent_of(t.expo, k));
        return s;
    }
    double s = 0.0;
    for (const Term& t : terms_) s += t.coeff * ctx.power(exponent_of(t.expo, k) - top);
    if (s == 0.0) return 0.0;
    return s * ctx.power(top);
}

double ExpSum::magnitude(const PadicContext& ctx, ShellIndex k) const {
    double s = 0.0;
    for (const Term& t : terms_) s += std::abs(t.coeff) * shell_power(ctx, t.expo, k);
    return s;
}

double ExpSum::limit_up() const {
    if (terms_.empty()) return 0.0;
    const Term& t = terms_.back();
    if (t.expo.sign() > 0) return sign_of(t.coeff) * kInf;
    if (t.expo.sign() == 0) return t.coeff;
    return 0.0;
}

double ExpSum::limit_down() const {
    if (terms_.empty()) return 0.0;
    const Term& t = terms_.front();
    if (t.expo.sign() < 0) return sign_of(t.coeff) * kInf;
    if (t.expo.sign() == 0) return t.coeff;
    return 0.0;
}

int ExpSum::monotone_up_direction() const {
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it)
        if (!it->expo.is_zero()) return sign_of(it->coeff) * it->expo.sign();
    return 0;
}

int ExpSum::monotone_down_direction() const {
    for (const Term& t : terms_)
        if (!t.expo.is_zero()) return sign_of(t.coeff) * t.expo.sign();
    return 0;
}

ShellRange ExpSum::critical_region(const PadicContext& ctx) const {
    // Derivative in k is log(p) * sum d_i p^{k e_i} with d_i = c_i e_i; beyond the bounds below the
    // extreme-exponent term outweighs all others combined, so the derivative keeps its sign.
    struct D {
        double d;
        double e;
    };
    std::vector<D> ds;
    for (const Term& t : terms_)
        if (!t.expo.is_zero()) ds.push_back({t.coeff * t.expo.to_double(), t.expo.to_double()});
    if (ds.size() <= 1) return {0, -1};

    const double others = static_cast<double>(ds.size() - 1);
    const D& top = ds.back();
    const D& bottom = ds.front();
    double hi = -kInf;
    double lo = kInf;
    for (std::size_t i = 0; i + 1 < ds.size(); ++i)
        hi = std::max(hi, std::log(others * std::abs(ds[i].d) / std::abs(top.d)) / ctx.log_p() / (top.e - ds[i].e));
    for (std::size_t i = 1; i < ds.size(); ++i)
        lo = std::min(lo, std::log(others * std::abs(ds[i].d) / std::abs(bottom.d)) / ctx.log_p() / (bottom.e - ds[i].e));

    double bound = static_cast<double>(kMaxCriticalWidth);
    if (!(std::abs(hi) < bound && std::abs(lo) < bound))
        throw std::length_error("exponential sum " + to_string() + " has an unmanageably wide non-monotone region");
    ShellIndex k_hi = static_cast<ShellIndex>(std::ceil(hi)) + 1;
    ShellIndex k_lo = static_cast<ShellIndex>(std::floor(lo)) - 1;
    return {std::min(k_lo, k_hi), std::max(k_lo, k_hi)};
}

namespace {

// Visits the finitely many shells (and limits) among which the extrema over r are found.
template <class Visit>
void visit_extremal_candidates(const ExpSum& f, const PadicContext& ctx, const ShellRange& r, Visit visit) {
    if (r.empty()) return;
    if (!r.lower_unbounded()) visit(f.value(ctx, r.lo), r.lo);
    if (!r.upper_unbounded()) visit(f.value(ctx, r.hi), r.hi);
    if (r.lower_unbounded()) visit(f.limit_down(), kNegInf);
    if (r.upper_unbounded()) visit(f.limit_up(), kPosInf);
    ShellRange crit = f.critical_region(ctx);
    if (crit.empty()) return;
    ShellRange scan = intersect(r, {crit.lo - 1, crit.hi + 1});
    for (ShellIndex k = scan.lo; k <= scan.hi && !scan.empty(); ++k) visit(f.value(ctx, k), k);
}

}  // namespace

double ExpSum::sup(const PadicContext& ctx, const ShellRange& r) const {
    double best = -kInf;
    visit_extremal_candidates(*this, ctx, r, [&](double v, ShellIndex) { best = std::max(best, v); });
    return best;
}

double ExpSum::inf(const PadicContext& ctx, const ShellRange& r) const {
    double best = kInf;
    visit_extremal_candidates(*this, ctx, r, [&](double v, ShellIndex) { best = std::min(best, v); });
    return best;
}

bool ExpSum::nonnegative_on(const PadicContext& ctx, const ShellRange& r, double rel_tol) const {
    if (terms_.empty() || r.empty()) return true;
    if (r.upper_unbounded() && leading_up().coeff < 0) return false;
    if (r.lower_unbounded() && leading_down().coeff < 0) return false;
    bool ok = true;
    visit_extremal_candidates(*this, ctx, r, [&](double v, ShellIndex k) {
        if (k == kNegInf || k == kPosInf) return;
        if (v < -rel_tol * magnitude(ctx, k)) ok = false;
    });
    return ok;
}

namespace {

class LevelSolver {
public:
    LevelSolver(const ExpSum& f, const PadicContext& ctx, double level, Inclusion inclusion)
        : f_(f), ctx_(ctx), level_(level), strict_(inclusion == Inclusion::strict) {}

    bool pred(ShellIndex k) const { return above(f_.value(ctx_, k)); }
    bool above(double v) const { return strict_ ? v > level_ : v >= level_; }

    void add(std::vector<ShellRange>& out, ShellRange r) const {
        if (r.empty()) return;
        if (!out.empty() && out.back().hi != kPosInf && out.back().hi + 1 >= r.lo) {
            out.back().hi = std::max(out.back().hi, r.hi);
            return;
        }
        out.push_back(r);
    }

    // Strictly monotone piece F with direction dir (+1, -1) or constant (0).
    void flank(std::vector<ShellRange>& out, const ShellRange& F, int dir) const {
        if (F.empty()) return;
        if (dir == 0) {
            ShellIndex anchor = F.lower_unbounded() ? (F.upper_unbounded() ? 0 : F.hi) : F.lo;
            if (pred(anchor)) add(out, F);
            return;
        }
        if (dir > 0) {
            auto first = first_true(F);
            if (first) add(out, {*first, F.hi});
        } else {
            auto last = last_true(F);
            if (last) add(out, {F.lo, *last});
        }
    }

private:
    static ShellIndex anchor_of(const ShellRange& F) {
        if (!F.lower_unbounded()) return F.lo;
        if (!F.upper_unbounded()) return F.hi;
        return 0;
    }

    // First k of an increasing flank where pred holds.
    std::optional<ShellIndex> first_true(const ShellRange& F) const {
        if (!F.lower_unbounded()) {
            if (pred(F.lo)) return F.lo;
        } else if (f_.limit_down() >= level_) {
            return kNegInf;
        }
        ShellIndex yes;
        if (!F.upper_unbounded()) {
            if (!pred(F.hi)) return std::nullopt;
            yes = F.hi;
        } else {
            if (!(f_.limit_up() > level_)) return std::nullopt;
            yes = search(anchor_of(F), +1, true);
        }
        ShellIndex no = F.lower_unbounded() ? search(yes, -1, false) : F.lo;
        return bisect(no, yes);
    }

    // Last k of a decreasing flank where pred holds.
    std::optional<ShellIndex> last_true(const ShellRange& F) const {
        if (!F.upper_unbounded()) {
            if (pred(F.hi)) return F.hi;
        } else if (f_.limit_up() >= level_) {
            return kPosInf;
        }
        ShellIndex yes;
        if (!F.lower_unbounded()) {
            if (!pred(F.lo)) return std::nullopt;
            yes = F.lo;
        } else {
            if (!(f_.limit_down() > level_)) return std::nullopt;
            yes = search(anchor_of(F), -1, true);
        }
        ShellIndex no = F.upper_unbounded() ? search(yes, +1, false) : F.hi;
        return bisect(no, yes);
    }

    // Walks from `from` in direction `step` with doubling strides until pred == want.
    ShellIndex search(ShellIndex from, int step, bool want) const {
        if (pred(from) == want) return from;
        for (ShellIndex stride = 1; stride <= kSearchLimit; stride *= 2) {
            ShellIndex k = from + step * stride;
            if (pred(k) == want) return k;
        }
        throw std::range_error("superlevel boundary of " + f_.to_string() + " lies beyond representable shells");
    }

    // pred(no) is false, pred(yes) is true; returns the crossing shell on the `yes` side.
    ShellIndex bisect(ShellIndex no, ShellIndex yes) const {
        while (no - yes > 1 || yes - no > 1) {
            ShellIndex mid = no + (yes - no) / 2;
            (pred(mid) ? yes : no) = mid;
        }
        return yes;
    }

    const ExpSum& f_;
    const PadicContext& ctx_;
    double level_;
    bool strict_;
};

}  // namespace

std::vector<ShellRange> ExpSum::superlevel(const PadicContext& ctx, const ShellRange& r, double level,
                                           Inclusion inclusion) const {
    std::vector<ShellRange> out;
    if (r.empty()) return out;
    LevelSolver solver(*this, ctx, level, inclusion);
    if (terms_.empty()) {
        if (solver.above(0.0)) out.push_back(r);
        return out;
    }
    ShellRange crit = critical_region(ctx);
    if (crit.empty()) {
        solver.flank(out, r, monotone_up_direction());
        return out;
    }
    solver.flank(out, intersect(r, {kNegInf, crit.lo - 1}), monotone_down_direction());
    ShellRange mid = intersect(r, crit);
    for (ShellIndex k = mid.lo; k <= mid.hi && !mid.empty(); ++k)
        if (solver.pred(k)) solver.add(out, {k, k});
    solver.flank(out, intersect(r, {crit.hi + 1, kPosInf}), monotone_up_direction());
    return out;
}

ExpSum ExpSum::scaled(double c) const {
    std::vector<Term> t = terms_;
    for (Term& x : t) x.coeff *= c;
    return ExpSum(std::move(t));
}

ExpSum ExpSum::times_power(const Rational& e) const {
    std::vector<Term> t = terms_;
    for (Term& x : t) x.expo += e;
    return ExpSum(std::move(t));
}

ExpSum ExpSum::shifted(const PadicContext& ctx, ShellIndex s) const {
    std::vector<Term> t = terms_;
    for (Term& x : t) x.coeff *= shell_power(ctx, x.expo, s);
    return ExpSum(std::move(t));
}

ExpSum ExpSum::raised(const Rational& r) const {
    if (terms_.empty()) return {};
    if (terms_.size() != 1) throw std::logic_error("only single-term exponential sums can be raised to a power");
    const Term& t = terms_.front();
    if (t.coeff < 0) throw std::domain_error("negative base raised to a rational power");
    return ExpSum({{std::pow(t.coeff, r.to_double()), t.expo * r}});
}

ExpSum operator+(const ExpSum& a, const ExpSum& b) {
    std::vector<Term> t = a.terms_;
    t.insert(t.end(), b.terms_.begin(), b.terms_.end());
    return ExpSum(std::move(t));
}

ExpSum operator*(const ExpSum& a, const ExpSum& b) {
    std::vector<Term> t;
    t.reserve(a.terms_.size() * b.terms_.size());
    for (const Term& x : a.terms_)
        for (const Term& y : b.terms_) t.push_back({x.coeff * y.coeff, x.expo + y.expo});
    return ExpSum(std::move(t));
}

std::string ExpSum::to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    os.precision(17);
    for (std::size_t i = 0; i < terms_.size(); ++i) {
        if (i) os << " + ";
        os << terms_[i].coeff << "*p^(" << terms_[i].expo.to_string() << "k)";
    }
    return os.str();
}

}  // namespace padic
