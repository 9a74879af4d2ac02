#pragma once
#include <stdexcept>
#include <string>

namespace cohom {

enum class ErrorKind { validation, solver, io, evaluation };

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

class ValidationError : public Error {
public:
    explicit ValidationError(const std::string& what) : Error(ErrorKind::validation, what) {}
};

class SolverError : public Error {
public:
    explicit SolverError(const std::string& what) : Error(ErrorKind::solver, what) {}
};

class IoError : public Error {
public:
    explicit IoError(const std::string& what) : Error(ErrorKind::io, what) {}
};

// Syntax or name errors while parsing; offset is a 0-based byte index.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t offset)
        : Error(ErrorKind::validation, what + " at offset " + std::to_string(offset)),
          offset_(offset) {}
    std::size_t offset() const { return offset_; }

private:
    std::size_t offset_;
};

// Domain violations during evaluation (sqrt of a negative, log of a nonpositive, x/0).
class EvalError : public Error {
public:
    EvalError(const std::string& what, double r)
        : Error(ErrorKind::evaluation, what), r_(r) {}
    double r() const { return r_; }

private:
    double r_;
};

// Integration failure; last_r is the last abscissa with a finite accepted state.
class BlowUpError : public SolverError {
public:
    BlowUpError(const std::string& what, double last_r)
        : SolverError(what + " (last good r = " + std::to_string(last_r) + ")"), last_r_(last_r) {}
    double last_r() const { return last_r_; }

private:
    double last_r_;
};

class DegenerateProfileError : public Error {
public:
    DegenerateProfileError(const std::string& what, double r)
        : Error(ErrorKind::validation, what), r_(r) {}
    double r() const { return r_; }

private:
    double r_;
};

}  // namespace cohom
