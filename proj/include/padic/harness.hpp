#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "padic/kernel.hpp"
#include "padic/rational.hpp"
#include "padic/shell_calculus.hpp"

namespace padic {

enum class Claim { thm21, thm22, cor31, cor32, cor41 };

std::string to_string(Claim claim);
// Throws std::invalid_argument for an unknown id.
Claim parse_claim(const std::string& id);
const std::vector<Claim>& all_claims();

// Raw parameters; anything unset takes the claim's default when resolved.
struct ClaimParams {
    std::int64_t p = 2;
    int n = 1;
    std::optional<Rational> p1;
    std::optional<Rational> q;
    std::optional<Rational> beta;
    std::optional<Rational> gamma;
    std::optional<Rational> alpha;
    // Per-axis exponents; otherwise m copies of alpha.
    std::optional<std::vector<Rational>> alphas;
    std::optional<int> m;
    ShellIndex window = 64;
    std::optional<double> tolerance;
};

// 1e-9 for closed-form claims, 1e-6 for the truncated m-fold sums.
double default_tolerance(Claim claim);

using ParamList = std::vector<std::pair<std::string, std::string>>;

struct VerificationReport {
    Claim claim = Claim::thm22;
    ParamList params;
    double ratio = 0.0;
    double constant = 0.0;
    double rel_error = 0.0;
    double tail_bound = 0.0;
    // rel_error <= tolerance + tail_bound, and false for any error.
    bool pass = false;
    // Inadmissible sweep point; not counted as a failure.
    bool skipped = false;
    std::int64_t runtime_ms = 0;
    double tolerance = 0.0;
    std::string note;
    // Claim-specific diagnostics in a fixed order.
    std::vector<std::pair<std::string, double>> details;
};

// Builds the claim's extremal input, applies the operator, and compares the norm ratio with the closed form.
// Hypothesis violations and divergences come back as failing reports.
VerificationReport verify_claim(Claim claim, const ClaimParams& params);

// Random finite-support radial function: log-uniform values in [1e-3, 1e3] on shells [-12, 12], about a quarter
// of them zero. Built from raw engine bits only, so a seed gives the same function on every platform.
ShellFunction random_shell_function(const PadicContext& ctx, std::mt19937_64& rng);

// count random inputs; each ratio must stay <= constant (1 + 1e-9) and <= the extremal ratio (1 + 1e-9).
// Throws std::invalid_argument for count < 1.
VerificationReport random_upper_bound_test(Claim claim, const ClaimParams& params, std::uint64_t seed, int count);

struct SweepSpec {
    Claim claim = Claim::thm22;
    // Parameter name -> grid. Names: p, n, p1, q, beta, gamma, alpha, alphas, m, window, and the relative forms
    // alpha_frac (alpha = frac n), beta_frac (beta = frac n (p1 - 1)), alpha_beta_frac (alpha = frac beta/(p1-1)).
    std::map<std::string, std::vector<std::string>> grids;
    std::optional<double> tolerance;
    // When set, each point also runs random_upper_bound_test with this seed and random_count inputs.
    std::optional<std::uint64_t> seed;
    int random_count = 0;

    // Throws std::invalid_argument when a grid is empty, a name unknown, or the tolerance nonpositive.
    void validate() const;
    static SweepSpec from_json(const std::string& text);
};

// One report per grid point, sorted by parameter tuple; inadmissible points are skipped with a reason.
std::vector<VerificationReport> sweep(const SweepSpec& spec);

struct EmitOptions {
    bool timing = true;
};
void write_json(std::ostream& out, const std::vector<VerificationReport>& reports, const EmitOptions& opts = {});
void write_csv(std::ostream& out, const std::vector<VerificationReport>& reports, const EmitOptions& opts = {});

// True iff every report that was not skipped passed.
bool all_passed(const std::vector<VerificationReport>& reports);

}  // namespace padic
