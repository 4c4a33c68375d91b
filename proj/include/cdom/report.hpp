#pragma once

#include <string>
#include <vector>

namespace cdom {

enum class CheckStatus { pass, fail, documented_discrepancy };

inline const char* to_string(CheckStatus s) {
    switch (s) {
        case CheckStatus::pass: return "pass";
        case CheckStatus::fail: return "fail";
        case CheckStatus::documented_discrepancy: return "documented-discrepancy";
    }
    return "?";
}

struct CheckRecord {
    std::string id;      // unique within a suite
    std::string rule;    // the inequality or property being checked
    CheckStatus status = CheckStatus::pass;
    std::string detail;  // values involved, human-readable
};

struct VerificationReport {
    std::string suite;
    std::vector<CheckRecord> checks;

    void add(std::string id, std::string rule, bool ok, std::string detail = {}) {
        checks.push_back({std::move(id), std::move(rule),
                          ok ? CheckStatus::pass : CheckStatus::fail, std::move(detail)});
    }
    void add_status(std::string id, std::string rule, CheckStatus st, std::string detail = {}) {
        checks.push_back({std::move(id), std::move(rule), st, std::move(detail)});
    }
    bool all_ok() const {
        for (const auto& c : checks)
            if (c.status == CheckStatus::fail) return false;
        return true;
    }
    std::size_t fail_count() const {
        std::size_t n = 0;
        for (const auto& c : checks)
            if (c.status == CheckStatus::fail) ++n;
        return n;
    }
};

}  // namespace cdom
