#ifndef HTMP_ERRORS_HPP
#define HTMP_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <vector>

namespace htmp {

// Violated precondition on an argument or parameter combination.
class contract_error : public std::invalid_argument {
public:
    explicit contract_error(const std::string& msg) : std::invalid_argument(msg) {}
};

// A numeric routine could not reach the requested accuracy. Carries the
// best value obtained so far.
class precision_error : public std::runtime_error {
public:
    precision_error(const std::string& msg, double partial)
        : std::runtime_error(msg), partial_value(partial) {}
    double partial_value;
};

// An iterative estimator failed to converge. Carries the iterate trace.
class estimation_error : public std::runtime_error {
public:
    estimation_error(const std::string& msg, std::vector<double> trace_in)
        : std::runtime_error(msg), trace(std::move(trace_in)) {}
    std::vector<double> trace;
};

} // namespace htmp

#endif
