#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "padic/kernel.hpp"
#include "padic/operators.hpp"
#include "padic/rational.hpp"
#include "padic/shell_calculus.hpp"

namespace padic {

// A violated hypothesis; what() starts with the violated relation, e.g. "β < n(p₁−1) violated".
class PreconditionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// strict validates hypotheses and rejects non-finite results; unchecked evaluates the formula as written.
enum class Checking { strict, unchecked };

// H_alpha: L^{p1}(|x|^beta) -> L^{q,inf}(|x|^gamma).
struct Thm21Params {
    PadicContext ctx;
    Rational p1;
    Rational q;
    Rational beta;
    Rational gamma;
    Rational alpha;

    // q solved from (gamma + n)/q + alpha = (beta + n)/p1.
    static Thm21Params with_scaling(const PadicContext& ctx, const Rational& p1, const Rational& beta,
                                    const Rational& gamma, const Rational& alpha);
    void validate() const;
    // beta / (p1 - 1), the decay rate of the extremal function.
    Rational decay() const;
    std::string to_string() const;
};

// H_alpha: L^1 -> L^{q,inf}(|x|^gamma) with q = (n + gamma)/(n - alpha).
struct Thm22Params {
    PadicContext ctx;
    Rational alpha;
    Rational gamma;

    void validate() const;
    Rational q() const;
    std::string to_string() const;
};

// ((1-p^-n) p^{-n-gamma} / (1-p^{-n-gamma}))^{1/q} C^{1/p1'}, C = (1-p^-n) p^{s-n} / (1-p^{s-n}), s = beta/(p1-1).
double thm21_constant(const Thm21Params& params, Checking checking = Checking::strict);
// First factor of thm21_constant.
double thm21_weak_prefactor(const Thm21Params& params);
// C^{1/p1'}, the second factor of thm21_constant.
double thm21_strong_factor(const Thm21Params& params);
// The extremal ratio on shells: K^{1/q} C^{1/p1'} with K = (1-p^-n)/(1-p^{-n-gamma}).
double thm21_exact_norm(const Thm21Params& params);

// ((1-p^-n) / ((1-p^{-n-gamma}) p^{n+gamma}))^{(n-alpha)/(n+gamma)}.
double thm22_constant(const Thm22Params& params, Checking checking = Checking::strict);
// The extremal ratio on shells: K^{(n-alpha)/(n+gamma)}.
double thm22_exact_norm(const Thm22Params& params);

// (1-p^-n)^m / prod_j (1-p^{alpha_j-n}). Requires alpha_j < n.
double cor31_constant(const AlphaVector& alphas, const PadicContext& ctx, Checking checking = Checking::strict);
// A_m times the explicit sum of the telescoping pieces p^{d_{i-1}-(i-1)n} - p^{d_i-in}, d_i = alpha_1+..+alpha_i.
double cor31_telescoped(const AlphaVector& alphas, const PadicContext& ctx);

// (1-p^-n)^m (1-p^{-mn}) / ((1-p^{-alpha}) prod_j (1-p^{alpha_j-n})). Requires alpha_j < n, alpha > 0.
double cor32_bound(const AlphaVector& alphas, const PadicContext& ctx, Checking checking = Checking::strict);
// B_m times the explicit sum (p^alpha - 1) + the same telescoping pieces as cor31_telescoped.
double cor32_telescoped(const AlphaVector& alphas, const PadicContext& ctx);
// Integrals J_0..J_m of the max-power majorant over E_0 (unit max-ball) and E_1..E_m (|y_j| > 1 leading).
std::vector<double> hilbert_majorant_region_terms(const AlphaVector& alphas, const PadicContext& ctx);
// The m-fold Hilbert series (1-p^-n)^m sum_k (1 + sum_j p^{k_j n})^{-m} prod_j p^{k_j(n-alpha_j)}, with tail bound.
TailSum cor32_series(const AlphaVector& alphas, const PadicContext& ctx, const Truncation& truncation = {});

// prod_j (1-p^-n) / (1-p^{alpha_j}), the Hausdorff constant of prod_j chi(|y_j| <= 1). Requires alpha_j < 0.
double cor41_product_constant(const AlphaVector& alphas, const PadicContext& ctx);

// |x|^{-beta/(p1-1)} on |x| < 1.
ShellFunction extremal_thm21(const Rational& beta, const Rational& p1, const PadicContext& ctx);
// chi(|x| < 1).
ShellFunction extremal_thm22(const PadicContext& ctx);
// |x|^{-alpha} on every shell.
ShellFunction extremal_weighted(const Rational& alpha, const PadicContext& ctx);

}  // namespace padic
