#include "hcont/report.hpp"

#include <cmath>

namespace hcont {

const char* to_string(Status s) {
    switch (s) {
        case Status::Pass: return "PASS";
        case Status::Fail: return "FAIL";
        case Status::Unmet: return "UNMET";
        case Status::Info: return "INFO";
    }
    return "?";
}

std::string fmt_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

bool Report::check_le(const std::string& subject, const std::string& check, double lhs, double rhs,
                      const std::string& note) {
    const bool ok = lhs <= rhs;
    lines_.push_back({subject, check, ok ? Status::Pass : Status::Fail, lhs, rhs, note});
    return ok;
}

bool Report::check_true(const std::string& subject, const std::string& check, bool ok, const std::string& note) {
    lines_.push_back({subject, check, ok ? Status::Pass : Status::Fail, ok ? 1.0 : 0.0, 1.0, note});
    return ok;
}

void Report::unmet(const std::string& subject, const std::string& check, double lhs, double rhs,
                   const std::string& note) {
    lines_.push_back({subject, check, Status::Unmet, lhs, rhs, note});
}

void Report::info(const std::string& subject, const std::string& check, double lhs, double rhs,
                  const std::string& note) {
    lines_.push_back({subject, check, Status::Info, lhs, rhs, note});
}

void Report::append(const Report& other, const std::string& prefix) {
    for (const auto& l : other.lines_) {
        lines_.push_back(l);
        if (!prefix.empty()) lines_.back().subject = prefix + (l.subject.empty() ? "" : " ") + l.subject;
    }
}

std::size_t Report::count(Status s) const {
    std::size_t n = 0;
    for (const auto& l : lines_) n += l.status == s;
    return n;
}

std::size_t Report::failures() const { return count(Status::Fail); }

void Report::write_records(std::ostream& out) const {
    for (const auto& l : lines_) {
        out << l.subject << '\t' << l.check << '\t' << to_string(l.status) << '\t' << fmt_double(l.lhs) << '\t'
            << fmt_double(l.rhs);
        if (!l.note.empty()) out << '\t' << l.note;
        out << '\n';
    }
}

void Report::write_summary(std::ostream& out) const {
    out << "checks " << lines_.size() << " pass " << count(Status::Pass) << " fail " << count(Status::Fail)
        << " unmet " << count(Status::Unmet) << " info " << count(Status::Info) << '\n';
    for (const auto& l : lines_) {
        if (l.status != Status::Fail) continue;
        out << "FAIL " << l.subject << ' ' << l.check << " lhs=" << fmt_double(l.lhs) << " rhs=" << fmt_double(l.rhs);
        if (!l.note.empty()) out << ' ' << l.note;
        out << '\n';
    }
}

}  // namespace hcont
