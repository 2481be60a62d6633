#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "padic/operators.hpp"
#include "padic/shell_calculus.hpp"

namespace padic {

struct Truncation {
    // Largest per-axis half-width |l| <= window summed explicitly.
    ShellIndex window = 64;
    // First half-width tried; doubled until the tail bound meets the tolerance.
    ShellIndex initial_window = 8;
    // Required: tail bound <= tolerance * max(1, |value|).
    double tolerance = 1e-10;
    // Largest multilinearity accepted.
    int max_arity = 3;

    void validate() const;
};

// K(l) <= scale * prod_j kappa_j(l_j), kappa_j(l) = p^{l * up_j} for l > 0, p^{l * down_j} for l < 0, 1 at l = 0.
// A missing rate means the kernel vanishes on that side of the axis.
struct KernelMajorant {
    double scale = 1.0;
    std::vector<std::optional<Rational>> up;
    std::vector<std::optional<Rational>> down;
};

// Radial m-argument kernel evaluated on shell offsets l = (l_1, ..., l_m), |y_j| = p^{l_j}.
struct KernelSpec {
    int m = 1;
    std::function<double(std::span<const ShellIndex>)> eval;
    KernelMajorant majorant;
    Truncation truncation;
    std::string name;

    // Checks nonnegativity and the majorant on the grid [-radius, radius]^m.
    void validate(const PadicContext& ctx, ShellIndex radius = 6) const;
};

// chi(max_j l_j <= 0): the unit max-ball, equal to the product of unit balls.
KernelSpec unit_ball_kernel(const PadicContext& ctx, int m);
// prod_j chi(l_j <= 0) p^{l_j * power}.
KernelSpec weighted_ball_kernel(const PadicContext& ctx, int m, const Rational& power);
// (1 + sum_j p^{l_j n})^{-m}. weights w_j >= 0 with sum m split the decay between axes (default all 1).
KernelSpec hilbert_kernel(const PadicContext& ctx, int m, std::vector<Rational> weights = {});
// max(1, p^{l_1 n}, ..., p^{l_m n})^{-m}, dominating the Hilbert kernel.
KernelSpec max_power_kernel(const PadicContext& ctx, int m, std::vector<Rational> weights = {});
KernelSpec zero_kernel(int m);

// Weights w_j = 1 - alpha_j/n + alpha/(nm) under which every axis of the Hilbert series decays at rate alpha/m.
std::vector<Rational> balanced_hilbert_weights(const AlphaVector& alphas, const PadicContext& ctx);

// sum_l K(l) prod_j h_j(l_j) restricted to |l_j| <= window, with a rigorous bound on the rest
// (error_bound, +inf when no finite bound exists).
TailSum shell_sum_at_window(const KernelSpec& kernel, const std::vector<ShellFunction>& axes, ShellIndex window);
// Doubles the window from truncation.initial_window until the tolerance is met; throws DivergenceError
// when it is not met at truncation.window.
TailSum shell_sum(const KernelSpec& kernel, const std::vector<ShellFunction>& axes);

// Operator image sampled on a shell range; error[i] bounds |true - value[i]|.
struct NumericImage {
    ShellIndex first = 0;
    std::vector<double> values;
    std::vector<double> errors;

    ShellRange range() const { return {first, first + static_cast<ShellIndex>(values.size()) - 1}; }
    double value(ShellIndex k) const { return values.at(static_cast<std::size_t>(k - first)); }
    double error(ShellIndex k) const { return errors.at(static_cast<std::size_t>(k - first)); }
};

// T^p(f_1..f_m)(g) = sum_l K(l) prod_j f_j(g + l_j) |S_{l_j}|.
NumericImage kernel_operator(const KernelSpec& kernel, const std::vector<ShellFunction>& fs, const ShellRange& shells);
// C^p = sum_l K(l) prod_j p^{-l_j alpha_j} |S_{l_j}|.
TailSum kernel_constant(const KernelSpec& kernel, const AlphaVector& alphas, const PadicContext& ctx);

// T_2(f_1..f_m)(g) = integral of prod f_j(y_j) / (|x|^n + sum |y_j|^n)^m, |x| = p^g.
NumericImage multilinear_hilbert(const std::vector<ShellFunction>& fs, const ShellRange& shells,
                                 const Truncation& truncation = {}, std::vector<Rational> weights = {});

// T_Phi(f_1..f_m)(g) = (1 - p^{-n})^m sum_l Phi(l) prod_j f_j(g + l_j), the shell form of the integral of
// Phi(y) / prod |y_j|^n * prod f_j(x |y_j|^{-1}).
NumericImage hausdorff_operator(const KernelSpec& phi, const std::vector<ShellFunction>& fs, const ShellRange& shells);
// C_Phi = (1 - p^{-n})^m sum_l Phi(l) prod_j p^{-l_j alpha_j}.
TailSum hausdorff_constant(const KernelSpec& phi, const AlphaVector& alphas, const PadicContext& ctx);

}  // namespace padic
