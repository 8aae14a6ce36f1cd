#include "lotop/suite.hpp"

#include <fmt/format.h>

#include <cstdlib>
#include <string>

// One line per criterion; exit status 1 if any fails.
int main(int argc, char** argv)
{
    lotop::SuiteOptions opts;
    for (int i = 1; i < argc; ++i) opts.only.push_back(std::atoi(argv[i]));
    int failed = 0;
    lotop::run_suite("chapter3", opts, [&](const lotop::CheckResult& r) {
        failed += !r.passed();
        fmt::print("[{}] {:2} {:<28} {:>7.2f}s/{:.0f}s  {}: {}\n", r.passed() ? "PASS" : "FAIL", r.id, r.name,
                   r.seconds, r.time_limit, lotop::kind_name(r.verdict.kind), r.verdict.note);
        std::fflush(stdout);
    });
    fmt::print("{}\n", failed ? fmt::format("{} criteria failed", failed) : std::string("all criteria passed"));
    return failed ? 1 : 0;
}
