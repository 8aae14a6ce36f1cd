#ifndef LOTOP_SUITE_HPP
#define LOTOP_SUITE_HPP

#include "lotop/report.hpp"

#include <functional>
#include <string>
#include <vector>

namespace lotop {

struct CheckResult {
    int id = 0;
    std::string name;
    std::string statement;
    Verdict verdict;
    bool exact = false;        // Verified required; VerifiedUpTo is not enough
    double seconds = 0;
    double time_limit = 0;     // seconds
    std::string bounds;
    std::optional<json> certificate;

    bool passed() const
    {
        bool ok = exact ? verdict.is_verified() : verdict.passed();
        return ok && seconds <= time_limit;
    }
};

struct SuiteOptions {
    std::uint64_t seed = 20240601;
    std::vector<int> only;  // empty: every check
};

struct SuiteCheck {
    int id;
    std::string name;
    std::string statement;
    bool exact;
    double time_limit;
};

const std::vector<SuiteCheck>& chapter3_checks();

// Runs the checks in order; on_result sees each result as it completes.
std::vector<CheckResult> run_suite(const std::string& suite, const SuiteOptions& opts,
                                   const std::function<void(const CheckResult&)>& on_result = {});

json to_json(const CheckResult& r);

} // namespace lotop

#endif
