#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace rtnep {

// A single validation finding. Warnings do not block case ingestion.
struct Violation {
    enum class Severity { Error, Warning };
    Severity severity = Severity::Error;
    std::string element;  // "bus", "line", "generator", "load", "case"
    long long id = -1;    // external id of the offending element, -1 for case-level
    std::string message;
};

std::string format_violations(const std::vector<Violation>& violations);

class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(std::vector<Violation> v)
        : std::runtime_error(format_violations(v)), violations(std::move(v)) {}
    std::vector<Violation> violations;
};

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& path, const std::string& location, const std::string& what)
        : std::runtime_error(path + ": " + location + ": " + what), path(path), location(location) {}
    std::string path;
    std::string location;
};

class BudgetViolationError : public std::runtime_error {
public:
    BudgetViolationError(const std::string& budget, const std::string& what)
        : std::runtime_error(what), budget(budget) {}
    std::string budget;  // "gamma_d" or "gamma_g"
};

class CapExceededError : public std::runtime_error {
public:
    CapExceededError(std::string count, const std::string& what)
        : std::runtime_error(what), exact_count(std::move(count)) {}
    std::string exact_count;  // decimal string; may exceed 64-bit range
};

class InfeasibleDispatchError : public std::runtime_error {
public:
    InfeasibleDispatchError(std::vector<long long> buses, const std::string& what)
        : std::runtime_error(what), buses(std::move(buses)) {}
    std::vector<long long> buses;  // external ids of buses implicated by the infeasibility certificate
};

class NumericalError : public std::runtime_error {
public:
    NumericalError(long iterations, double residual, const std::string& what)
        : std::runtime_error(what), iterations(iterations), residual(residual) {}
    long iterations;
    double residual;
};

class BigMOverflowError : public std::runtime_error {
public:
    BigMOverflowError(long long line_id, double value, const std::string& what)
        : std::runtime_error(what), line_id(line_id), value(value) {}
    long long line_id;
    double value;
};

}  // namespace rtnep
