#include "padic/context.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace padic {

std::string ShellRange::to_string() const {
    std::string l = lower_unbounded() ? "(-inf" : "[" + std::to_string(lo);
    std::string h = upper_unbounded() ? "+inf)" : std::to_string(hi) + "]";
    return l + ", " + h;
}

ShellRange intersect(const ShellRange& a, const ShellRange& b) {
    return {std::max(a.lo, b.lo), std::min(a.hi, b.hi)};
}

bool is_prime(std::int64_t p) {
    if (p < 2) return false;
    if (p < 4) return true;
    if (p % 2 == 0) return false;
    for (std::int64_t d = 3; d <= p / d; d += 2)
        if (p % d == 0) return false;
    return true;
}

PadicContext::PadicContext(std::int64_t p, int n) : p_(p), n_(n) {
    if (!is_prime(p)) throw std::invalid_argument("p = " + std::to_string(p) + " is not prime");
    if (n < 1) throw std::invalid_argument("dimension n must be >= 1, got " + std::to_string(n));
    log_p_ = std::log(static_cast<double>(p));
    shell_factor_ = -std::expm1(-n * log_p_);
}

double PadicContext::power(double x) const { return std::pow(static_cast<double>(p_), x); }

}  // namespace padic
