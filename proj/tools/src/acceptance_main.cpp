// Runs the acceptance criteria and prints one PASS/FAIL line per criterion.
#include "relscatter_app/checks.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <set>

using namespace relscatter::app;

int main(int argc, char** argv) {
    CLI::App app{"relscatter acceptance criteria"};
    std::vector<int> expect_fail, only;
    bool verbose = false;
    app.add_option("--expect-fail", expect_fail, "criteria known to fail; exit 0 only if exactly these fail")
        ->delimiter(',');
    app.add_option("--only", only, "run only these criteria")->delimiter(',');
    app.add_flag("-v,--verbose", verbose, "print every check");
    CLI11_PARSE(app, argc, argv);

    CheckContext ctx;
    std::set<int> wanted(only.begin(), only.end());
    std::set<int> expected(expect_fail.begin(), expect_fail.end());
    std::set<int> failed, ran;
    for (const Criterion& c : criteria()) {
        if (!wanted.empty() && !wanted.count(c.id)) continue;
        CriterionOutcome o = run_criterion(c, ctx);
        ran.insert(c.id);
        if (!o.pass) failed.insert(c.id);
        const char* tag = o.pass ? "PASS" : (expected.count(c.id) ? "FAIL (expected)" : "FAIL");
        std::printf("criterion %2d  %-48s %-16s %7.2f s\n", c.id, c.title.c_str(), tag, o.seconds);
        for (const Check& ch : o.checks) {
            if (!verbose && ch.pass) continue;
            std::printf("      %-26s %-12.5g %s %-10.3g %s%s\n", ch.name.c_str(), ch.value, ch.relation.c_str(),
                        ch.bound, ch.pass ? "ok" : "violated", ch.note.empty() ? "" : ("  " + ch.note).c_str());
        }
        std::fflush(stdout);
    }
    std::set<int> expected_ran;
    for (int id : expected)
        if (ran.count(id)) expected_ran.insert(id);
    bool ok = failed == expected_ran;
    std::printf("%zu of %zu criteria passed%s\n", ran.size() - failed.size(), ran.size(),
                ok ? "" : "; failures differ from the expected set");
    return ok ? 0 : 1;
}
