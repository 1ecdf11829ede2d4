#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace exm {

// Precondition violations (bad argument values, failed side conditions).
class domain_error : public std::runtime_error {
public:
    explicit domain_error(const std::string& what) : std::runtime_error(what) {}
};

// Instance exceeds the exhaustive-computation caps.
class resource_error : public std::runtime_error {
public:
    explicit resource_error(const std::string& what) : std::runtime_error(what) {}
};

// An integral whose positive and negative parts are both infinite.
class non_integrable_error : public std::runtime_error {
public:
    explicit non_integrable_error(const std::string& what) : std::runtime_error(what) {}
};

struct ParseDiagnostic {
    std::size_t offset = 0;   // byte offset into the input
    std::string expected;     // token set the parser would have accepted
    std::string found;        // lexeme actually seen
    std::string message;
};

class parse_error : public std::runtime_error {
public:
    explicit parse_error(ParseDiagnostic diag)
        : std::runtime_error(diag.message), diag_(std::move(diag)) {}

    const ParseDiagnostic& diagnostic() const { return diag_; }

private:
    ParseDiagnostic diag_;
};

} // namespace exm
