#pragma once

#include <cstdint>
#include <limits>
#include <string>

namespace padic {

using ShellIndex = std::int64_t;

inline constexpr ShellIndex kNegInf = std::numeric_limits<ShellIndex>::min();
inline constexpr ShellIndex kPosInf = std::numeric_limits<ShellIndex>::max();

// Closed interval of shell indices; lo == kNegInf / hi == kPosInf mark unbounded ends.
struct ShellRange {
    ShellIndex lo = 0;
    ShellIndex hi = -1;

    static ShellRange all() { return {kNegInf, kPosInf}; }
    static ShellRange at_most(ShellIndex hi) { return {kNegInf, hi}; }
    static ShellRange at_least(ShellIndex lo) { return {lo, kPosInf}; }

    bool empty() const { return lo > hi; }
    bool lower_unbounded() const { return lo == kNegInf; }
    bool upper_unbounded() const { return hi == kPosInf; }
    bool bounded() const { return !lower_unbounded() && !upper_unbounded(); }
    bool contains(ShellIndex k) const { return lo <= k && k <= hi; }

    std::string to_string() const;

    friend bool operator==(const ShellRange&, const ShellRange&) = default;
};

ShellRange intersect(const ShellRange& a, const ShellRange& b);

// Prime p and dimension n of the ambient space Q_p^n.
class PadicContext {
public:
    PadicContext(std::int64_t p, int n);

    std::int64_t p() const { return p_; }
    int n() const { return n_; }
    double log_p() const { return log_p_; }

    // p^x.
    double power(double x) const;
    // 1 - p^{-n}, the measure of the unit shell.
    double shell_factor() const { return shell_factor_; }

    friend bool operator==(const PadicContext& a, const PadicContext& b) { return a.p_ == b.p_ && a.n_ == b.n_; }

private:
    std::int64_t p_;
    int n_;
    double log_p_;
    double shell_factor_;
};

bool is_prime(std::int64_t p);

}  // namespace padic
