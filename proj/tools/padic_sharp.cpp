// padic-sharp: closed-form constants, verification runs, sweeps and randomized upper-bound tests.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "padic/harness.hpp"
#include "padic/norms.hpp"
#include "padic/operators.hpp"
#include "padic/sharp_constants.hpp"

namespace {

using namespace padic;

constexpr const char* kEnvPrefix = "PADIC_";

// Raw flag text; parsed after CLI11 so rationals like "1/2" are accepted everywhere.
struct Flags {
    std::int64_t p = 2;
    int n = 1;
    std::string p1, q, beta, gamma, alpha, alphas;
    int m = 0;
    std::int64_t window = 64;
    double tol = 0.0;
    std::string format = "json";
    std::string out;
    bool no_timing = false;
};

std::string env_name(const std::string& flag) {
    std::string s = kEnvPrefix;
    for (char c : flag) s += c == '-' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    return s;
}

void add_param_flags(CLI::App* app, Flags& f) {
    app->add_option("--p", f.p, "prime p")->envname(env_name("p"));
    app->add_option("--n", f.n, "dimension n")->envname(env_name("n"));
    app->add_option("--p1", f.p1, "Lebesgue exponent p1")->envname(env_name("p1"));
    app->add_option("--q", f.q, "weak exponent q (default: from the scaling relation)")->envname(env_name("q"));
    app->add_option("--beta", f.beta, "source weight exponent beta")->envname(env_name("beta"));
    app->add_option("--gamma", f.gamma, "target weight exponent gamma")->envname(env_name("gamma"));
    app->add_option("--alpha", f.alpha, "order alpha (or every alpha_j when --alphas is absent)")
        ->envname(env_name("alpha"));
    app->add_option("--alphas", f.alphas, "comma-separated alpha_1,...,alpha_m")->envname(env_name("alphas"));
    app->add_option("--m", f.m, "multilinearity m")->envname(env_name("m"));
    app->add_option("--window", f.window, "largest per-axis truncation half-width")->envname(env_name("window"));
    app->add_option("--tol", f.tol, "tolerance (default: claim-specific)")->envname(env_name("tol"));
}

void add_output_flags(CLI::App* app, Flags& f) {
    app->add_option("--format", f.format, "report format")
        ->check(CLI::IsMember({"json", "csv"}))
        ->envname(env_name("format"));
    app->add_option("--out", f.out, "write the report here instead of stdout")->envname(env_name("out"));
    app->add_flag("--no-timing", f.no_timing, "emit runtime_ms = 0 for byte-identical reruns")
        ->envname(env_name("no-timing"));
}

ClaimParams to_params(const Flags& f) {
    ClaimParams prm;
    prm.p = f.p;
    prm.n = f.n;
    auto opt = [](const std::string& s) { return s.empty() ? std::nullopt : std::optional<Rational>(Rational::parse(s)); };
    prm.p1 = opt(f.p1);
    prm.q = opt(f.q);
    prm.beta = opt(f.beta);
    prm.gamma = opt(f.gamma);
    prm.alpha = opt(f.alpha);
    if (!f.alphas.empty()) prm.alphas = AlphaVector::parse(f.alphas).values();
    if (f.m > 0) prm.m = f.m;
    prm.window = f.window;
    if (f.tol > 0.0) prm.tolerance = f.tol;
    return prm;
}

int emit(const Flags& f, const std::vector<VerificationReport>& reports) {
    std::ostringstream buf;
    EmitOptions opts{!f.no_timing};
    if (f.format == "csv")
        write_csv(buf, reports, opts);
    else
        write_json(buf, reports, opts);
    if (f.out.empty()) {
        std::cout << buf.str();
    } else {
        std::ofstream file(f.out);
        if (!file) throw std::runtime_error("cannot write " + f.out);
        file << buf.str();
    }
    return all_passed(reports) ? 0 : 1;
}

// Prints the closed form, plus the exact shell norm where it differs from the literal formula.
int print_constant(Claim claim, const ClaimParams& prm) {
    PadicContext ctx(prm.p, prm.n);
    const Rational n(prm.n);
    auto alphas = [&](Rational fallback) {
        if (prm.alphas) return AlphaVector(*prm.alphas);
        return AlphaVector(std::vector<Rational>(static_cast<std::size_t>(prm.m.value_or(2)), prm.alpha.value_or(fallback)));
    };
    auto show = [](const char* label, double v) { std::printf("%s %.17g\n", label, v); };
    switch (claim) {
        case Claim::thm21: {
            Rational p1 = prm.p1.value_or(Rational(2));
            Rational beta = prm.beta.value_or(n * (p1 - Rational(1)) / Rational(2));
            Rational gamma = prm.gamma.value_or(Rational(0));
            Rational alpha = prm.alpha.value_or(Rational(0));
            Thm21Params t = prm.q ? Thm21Params{ctx, p1, *prm.q, beta, gamma, alpha}
                                  : Thm21Params::with_scaling(ctx, p1, beta, gamma, alpha);
            show("constant", thm21_constant(t));
            show("exact_norm", thm21_exact_norm(t));
            break;
        }
        case Claim::thm22: {
            Thm22Params t{ctx, prm.alpha.value_or(n / Rational(2)), prm.gamma.value_or(Rational(0))};
            show("constant", thm22_constant(t));
            show("exact_norm", thm22_exact_norm(t));
            break;
        }
        case Claim::cor31:
            show("constant", cor31_constant(alphas(n / Rational(2)), ctx));
            break;
        case Claim::cor32: {
            AlphaVector a = alphas(n / Rational(2));
            Truncation t;
            t.window = prm.window;
            t.tolerance = prm.tolerance.value_or(default_tolerance(claim)) / 10.0;
            show("bound", cor32_bound(a, ctx));
            TailSum s = cor32_series(a, ctx, t);
            show("series", s.value);
            show("series_tail", s.error_bound);
            break;
        }
        case Claim::cor41:
            show("constant", cor41_product_constant(alphas(Rational(-1, 2)), ctx));
            break;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sharp constants of p-adic Hardy and Hilbert type operators"};
    app.require_subcommand(1);
    Flags f;
    std::string claim_id;
    std::string spec_path;
    std::uint64_t seed = 1;
    int count = 100;

    CLI::App* constant = app.add_subcommand("constant", "print the closed-form constant of a claim");
    constant->add_option("claim", claim_id, "thm21 | thm22 | cor31 | cor32 | cor41")->required();
    add_param_flags(constant, f);

    CLI::App* verify = app.add_subcommand("verify", "run the extremal-function check of a claim (or all)");
    verify->add_option("claim", claim_id, "thm21 | thm22 | cor31 | cor32 | cor41 | all")->required();
    add_param_flags(verify, f);
    add_output_flags(verify, f);

    CLI::App* sweep_cmd = app.add_subcommand("sweep", "run a parameter sweep described by a JSON file");
    sweep_cmd->add_option("--spec", spec_path, "sweep spec file")->required()->check(CLI::ExistingFile)
        ->envname(env_name("spec"));
    add_output_flags(sweep_cmd, f);

    CLI::App* random = app.add_subcommand("random-test", "randomized upper-bound test of a claim");
    random->add_option("claim", claim_id, "thm21 | thm22 | cor31 | cor32 | cor41")->required();
    random->add_option("--seed", seed, "RNG seed")->envname(env_name("seed"));
    random->add_option("--count", count, "number of random inputs")->envname(env_name("count"));
    add_param_flags(random, f);
    add_output_flags(random, f);

    CLI11_PARSE(app, argc, argv);

    try {
        if (constant->parsed()) return print_constant(parse_claim(claim_id), to_params(f));
        if (verify->parsed()) {
            std::vector<VerificationReport> reports;
            ClaimParams prm = to_params(f);
            if (claim_id == "all")
                for (Claim c : all_claims()) reports.push_back(verify_claim(c, prm));
            else
                reports.push_back(verify_claim(parse_claim(claim_id), prm));
            return emit(f, reports);
        }
        if (sweep_cmd->parsed()) {
            std::ifstream in(spec_path);
            std::stringstream text;
            text << in.rdbuf();
            return emit(f, sweep(SweepSpec::from_json(text.str())));
        }
        if (random->parsed())
            return emit(f, {random_upper_bound_test(parse_claim(claim_id), to_params(f), seed, count)});
    } catch (const std::exception& e) {
        std::cerr << "padic-sharp: " << e.what() << '\n';
        return 2;
    }
    return 2;
}
