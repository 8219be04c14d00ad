#ifndef MHD_VERIFY_HPP
#define MHD_VERIFY_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace mhd {

// One measured invariant: pass iff measured <= bound (every check is phrased
// as an upper bound on a residual, deviation, or normalized statistic).
struct CheckResult {
    std::string name;
    double measured = 0.0;
    double bound = 0.0;
    bool pass = false;
    std::string detail;
};

CheckResult make_check(const std::string& name, double measured, double bound,
                       const std::string& detail = "");

// Property suites shared by the CLI `verify` subcommand and the test
// drivers. Each returns one CheckResult per invariant; div_out, when given,
// accumulates the worst relative divergence seen by the suite's evolved
// fields.
std::vector<CheckResult> verify_semigroup(std::uint64_t seed, double* div_out = nullptr);
std::vector<CheckResult> verify_interpolation(std::uint64_t seed, double* div_out = nullptr);
std::vector<CheckResult> verify_bilinear(std::uint64_t seed, double* div_out = nullptr);
std::vector<CheckResult> verify_kernel();
std::vector<CheckResult> verify_noise(std::uint64_t seed, double* div_out = nullptr);
std::vector<CheckResult> verify_suite(const std::string& name, std::uint64_t seed,
                                      double* div_out = nullptr);  // includes "all"

bool all_pass(const std::vector<CheckResult>& checks);
std::string format_checks(const std::vector<CheckResult>& checks);  // one line per check

}  // namespace mhd

#endif
