#pragma once

#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

namespace hcont {

enum class Status { Pass, Fail, Unmet, Info };

const char* to_string(Status s);

/// One checked inequality `lhs <= rhs` (or a flag). Unmet marks a
/// hypothesis that did not hold, so the dependent assertion was skipped.
struct CheckLine {
    std::string subject;
    std::string check;
    Status status = Status::Info;
    double lhs = 0;
    double rhs = 0;
    std::string note;
};

class Report {
public:
    void add(CheckLine line) { lines_.push_back(std::move(line)); }

    /// Passes iff lhs <= rhs, compared exactly.
    bool check_le(const std::string& subject, const std::string& check, double lhs, double rhs,
                  const std::string& note = {});
    bool check_true(const std::string& subject, const std::string& check, bool ok, const std::string& note = {});
    void unmet(const std::string& subject, const std::string& check, double lhs, double rhs,
               const std::string& note = {});
    void info(const std::string& subject, const std::string& check, double lhs, double rhs,
              const std::string& note = {});

    /// Appends `other`, prefixing each subject with `prefix` when non-empty.
    void append(const Report& other, const std::string& prefix = {});

    const std::vector<CheckLine>& lines() const { return lines_; }
    std::size_t failures() const;
    std::size_t count(Status s) const;
    bool ok() const { return failures() == 0; }

    /// One line per record: subject, check, status, lhs, rhs, note (tab separated).
    void write_records(std::ostream& out) const;
    /// Totals per status plus every failing line.
    void write_summary(std::ostream& out) const;

private:
    std::vector<CheckLine> lines_;
};

/// Shortest round-trip decimal form of a double.
std::string fmt_double(double x);

}  // namespace hcont
