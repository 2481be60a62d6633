#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "padic/rational.hpp"
#include "padic/shell_calculus.hpp"

namespace padic {

// Exponents (alpha_1, ..., alpha_m); the total is always recomputed from the entries.
class AlphaVector {
public:
    explicit AlphaVector(std::vector<Rational> alphas);

    static AlphaVector parse(std::string_view csv);

    std::size_t m() const { return alphas_.size(); }
    const std::vector<Rational>& values() const { return alphas_; }
    const Rational& operator[](std::size_t j) const { return alphas_[j]; }
    Rational sum() const;

    std::string to_string() const;

private:
    std::vector<Rational> alphas_;
};

// H_alpha f on shell g: p^{-g(n - alpha)} (1 - p^{-n}) sum_{k <= g - 1} f(k) p^{kn}. Requires 0 <= alpha < n.
// Throws DivergenceError naming the segment whose inner integral diverges.
ShellFunction fractional_hardy(const ShellFunction& f, const Rational& alpha);

// F(g) = integral of f over the ball |y| <= p^g, as a piecewise exponential sum.
std::vector<Segment> ball_integral(const ShellFunction& f);

// T_1(f_1, ..., f_m) on shell g: p^{-gmn} prod_j F_j(g).
ShellFunction multilinear_hardy(const std::vector<ShellFunction>& fs);

// Integrals I_1..I_m of prod |y_k|^{-alpha_k} over the regions D_j of the unit max-ball where j is the
// first index with the largest norm. Requires alpha_j < n.
std::vector<double> hardy_region_terms(const AlphaVector& alphas, const PadicContext& ctx);
double hardy_region_sum(const AlphaVector& alphas, const PadicContext& ctx);

// Index (0-based) of the first shell attaining the maximum, which selects the region D_j (inside the unit
// max-ball) or E_j (outside it) containing a point with |y_j| = p^{k_j}.
std::size_t leading_axis(std::span<const ShellIndex> shells);

}  // namespace padic
