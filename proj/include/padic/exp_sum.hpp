#pragma once

#include <vector>

#include "padic/context.hpp"
#include "padic/rational.hpp"

namespace padic {

struct Term {
    double coeff;
    Rational expo;
};

enum class Inclusion { strict, inclusive };

// Finite exponential sum k -> sum_i coeff_i * p^{k * expo_i} over integer k.
// Terms are kept sorted by strictly increasing exponent with nonzero coefficients.
class ExpSum {
public:
    ExpSum() = default;
    explicit ExpSum(std::vector<Term> terms);

    static ExpSum constant(double c) { return ExpSum({{c, Rational(0)}}); }
    static ExpSum power(double c, Rational e) { return ExpSum({{c, e}}); }

    const std::vector<Term>& terms() const { return terms_; }
    bool empty() const { return terms_.empty(); }
    bool single_term() const { return terms_.size() == 1; }

    double value(const PadicContext& ctx, ShellIndex k) const;
    // sum_i |coeff_i| p^{k expo_i}; the scale against which rounding is judged.
    double magnitude(const PadicContext& ctx, ShellIndex k) const;

    // Limits as k -> +inf and k -> -inf (may be +-inf).
    double limit_up() const;
    double limit_down() const;
    // Exponent dominating as k -> +inf (largest) and k -> -inf (smallest). Requires !empty().
    const Term& leading_up() const { return terms_.back(); }
    const Term& leading_down() const { return terms_.front(); }

    // Smallest interval outside of which the sequence is monotone; empty when it is monotone
    // everywhere. Below lo the direction is monotone_down_direction(), above hi it is
    // monotone_up_direction(): +1 increasing, -1 decreasing, 0 constant.
    ShellRange critical_region(const PadicContext& ctx) const;
    int monotone_up_direction() const;
    int monotone_down_direction() const;

    // Supremum / infimum over r (limits included for unbounded ends, so they may be +-inf).
    double sup(const PadicContext& ctx, const ShellRange& r) const;
    double inf(const PadicContext& ctx, const ShellRange& r) const;
    // True when every value on r is >= -rel_tol * magnitude and no unbounded end approaches
    // from below zero.
    bool nonnegative_on(const PadicContext& ctx, const ShellRange& r, double rel_tol = 1e-12) const;

    // Sorted, disjoint, non-adjacent subranges of r where value > level (or >= level).
    std::vector<ShellRange> superlevel(const PadicContext& ctx, const ShellRange& r, double level,
                                       Inclusion inclusion) const;

    ExpSum scaled(double c) const;
    // k -> value(k) * p^{k e}
    ExpSum times_power(const Rational& e) const;
    // k -> value(k + s)
    ExpSum shifted(const PadicContext& ctx, ShellIndex s) const;
    // k -> value(k)^r; requires a single term or an empty sum.
    ExpSum raised(const Rational& r) const;

    friend ExpSum operator+(const ExpSum& a, const ExpSum& b);
    friend ExpSum operator*(const ExpSum& a, const ExpSum& b);

    std::string to_string() const;

private:
    std::vector<Term> terms_;
};

// p^{k * e} for integer k and rational e, computed from the exact product k * e.
double shell_power(const PadicContext& ctx, const Rational& e, ShellIndex k);

}  // namespace padic
