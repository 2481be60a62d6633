#pragma once

#include "padic/kernel.hpp"
#include "padic/rational.hpp"
#include "padic/shell_calculus.hpp"

namespace padic {

// L^{p1}(|x|^beta).
struct LebesgueParams {
    Rational p1{1};
    Rational beta{0};

    // p1 / (p1 - 1); +inf for p1 = 1.
    double conjugate() const;
    void validate() const;
};

// L^{q,inf}(|x|^gamma).
struct WeakParams {
    Rational q{1};
    Rational gamma{0};

    void validate(const PadicContext& ctx) const;
};

// H^inf_alpha: ess sup |x|^alpha |f(x)|.
struct SupParams {
    Rational alpha{0};
};

// Half-width of the explicit shell scans used where no closed form applies.
inline constexpr ShellIndex kDefaultScanWindow = 256;

TailSum lp_norm(const ShellFunction& f, const LebesgueParams& params, ShellIndex window = kDefaultScanWindow);

// sup_lambda lambda * mu_gamma({f > lambda})^{1/q}.
TailSum weak_norm(const ShellFunction& f, const WeakParams& params, ShellIndex window = kDefaultScanWindow);
// Weak norm of an image sampled on img.range(), taken as zero elsewhere; error_bound covers the sample errors.
TailSum weak_norm(const NumericImage& img, const PadicContext& ctx, const WeakParams& params);

// The weak-norm supremum split at a level t: over 0 < lambda < t and over lambda >= t.
struct WeakNormSplit {
    TailSum below;
    TailSum at_or_above;
};
WeakNormSplit weak_norm_split(const ShellFunction& f, const WeakParams& params, double threshold,
                              ShellIndex window = kDefaultScanWindow);

TailSum sup_norm(const ShellFunction& f, const SupParams& params);
// Supremum over img.range() only; error_bound covers the sample errors.
TailSum sup_norm(const NumericImage& img, const PadicContext& ctx, const SupParams& params);

}  // namespace padic
