#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace polycomb {

// Root of every error raised by the library. Callers that only need a
// message can catch this; the CLI maps the concrete subclasses to exit codes.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class UnknownLabelError : public Error {
public:
    explicit UnknownLabelError(std::string label)
        : Error("unknown security label '" + label + "'"), label_(std::move(label)) {}
    const std::string& label() const noexcept { return label_; }

private:
    std::string label_;
};

class CycleError : public Error {
public:
    CycleError(const std::string& a, const std::string& b)
        : Error("order relation is cyclic: '" + a + "' <= '" + b + "' and '" + b + "' <= '" + a +
                "'") {}
};

class NoSupError : public Error {
public:
    NoSupError(std::string a, std::string b, const std::string& why)
        : Error("labels '" + a + "' and '" + b + "' have no unique least upper bound (" + why + ")"),
          first_(std::move(a)), second_(std::move(b)) {}
    const std::string& first() const noexcept { return first_; }
    const std::string& second() const noexcept { return second_; }

private:
    std::string first_;
    std::string second_;
};

class NotComparableError : public Error {
public:
    NotComparableError(const std::string& lower, const std::string& upper)
        : Error("'" + lower + "' is not below '" + upper + "' in the lattice") {}
};

class OutOfRangeError : public Error {
public:
    using Error::Error;
};

class DomainError : public Error {
public:
    using Error::Error;
};

class UnknownAccessTypeError : public Error {
public:
    explicit UnknownAccessTypeError(const std::string& type)
        : Error("unknown access type '" + type + "'") {}
};

class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line, std::size_t column)
        : Error("parse error at line " + std::to_string(line) + ", column " +
                std::to_string(column) + ": " + what),
          line_(line), column_(column) {}
    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

class ValidationError : public Error {
public:
    using Error::Error;
};

class ModeMismatchError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class UnknownSubjectError : public Error {
public:
    explicit UnknownSubjectError(const std::string& subject, const std::string& policy)
        : Error("subject '" + subject + "' has no label in the " + policy + " policy") {}
};

class UnknownObjectError : public Error {
public:
    explicit UnknownObjectError(const std::string& object, const std::string& policy)
        : Error("object '" + object + "' has no label in the " + policy + " policy") {}
};

class UnknownParameterError : public Error {
public:
    UnknownParameterError(const std::string& name, const std::string& mode)
        : Error("parameter '" + name + "' is not a combiner parameter of mode '" + mode + "'") {}
};

class SinkError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

} // namespace polycomb
