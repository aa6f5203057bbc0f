#pragma once

#include <string>
#include <vector>

#include "mgs/io.hpp"

namespace mgs::cli {

class Fixtures {
public:
    explicit Fixtures(io::Json values) : values_(std::move(values)) {}
    static Fixtures load(const std::string& path);

    const io::Json& entry(const std::string& key) const;
    double number(const std::string& key) const;
    Rational rational(const std::string& key) const;
    double tolerance(const std::string& key) const;
    std::string source(const std::string& key) const;

private:
    io::Json values_;
};

struct Check {
    std::string name;
    std::string status;  // pass, fail, skip
    std::string observed;
    std::string expected;
};

struct CaseReport {
    std::string name;
    std::vector<Check> checks;
    double seconds = 0.0;

    bool ok() const;
    io::Json to_json() const;
};

struct ReproduceOptions {
    const GroupVertexLibrary* library = nullptr;
    MembershipOptions membership;
};

const std::vector<std::string>& case_names();
/// Throws std::invalid_argument for an unknown case.
CaseReport run_case(const std::string& name, const Fixtures& fixtures, const ReproduceOptions& opts);

}  // namespace mgs::cli
