#pragma once

#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

namespace zsm::test {

struct Harness {
    int failures = 0;
    int checks = 0;

    void record(const std::string& name, bool ok, const std::string& detail = "") {
        ++checks;
        if (!ok)
            ++failures;
        std::printf("[%s] %s%s%s\n", ok ? "PASS" : "FAIL", name.c_str(),
                    detail.empty() ? "" : " -- ", detail.c_str());
        std::fflush(stdout);
    }

    void close(const std::string& name, double got, double want, double tol) {
        char buf[160];
        std::snprintf(buf, sizeof(buf), "got %.12g want %.12g tol %.3g", got, want, tol);
        record(name, std::isfinite(got) && std::abs(got - want) <= tol, buf);
    }

    void close_rel(const std::string& name, double got, double want, double rel_tol) {
        const double denom = std::max(std::abs(want), 1e-300);
        char buf[160];
        std::snprintf(buf, sizeof(buf), "got %.12g want %.12g rel %.3g", got, want,
                      std::abs(got - want) / denom);
        record(name, std::isfinite(got) && std::abs(got - want) / denom <= rel_tol, buf);
    }

    void less(const std::string& name, double got, double bound) {
        char buf[160];
        std::snprintf(buf, sizeof(buf), "got %.6g bound %.6g", got, bound);
        record(name, std::isfinite(got) && got < bound, buf);
    }

    void expect_throw(const std::string& name, const std::function<void()>& fn) {
        bool threw = false;
        std::string msg;
        try {
            fn();
        } catch (const std::exception& e) {
            threw = true;
            msg = e.what();
        }
        record(name, threw, msg);
    }

    int summary(const char* suite) {
        std::printf("%s: %d checks, %d failures\n", suite, checks, failures);
        return failures == 0 ? 0 : 1;
    }
};

} // namespace zsm::test
