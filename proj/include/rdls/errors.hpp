#pragma once

#include <stdexcept>
#include <string>

namespace rdls {

// Common base so the CLI can map any library failure to one exit path.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Malformed values, dimension mismatches, out-of-range parameters.
class InvalidInputError : public Error {
public:
    explicit InvalidInputError(const std::string& what) : Error(what) {}
};

// Fewer neighbors than the (d+1)*beta+1 the filter needs.
class InsufficientNeighborsError : public Error {
public:
    explicit InsufficientNeighborsError(const std::string& what) : Error(what) {}
};

// An enumeration (reduced graphs, neighbor subsets) would exceed its cap.
class CapExceededError : public Error {
public:
    explicit CapExceededError(const std::string& what) : Error(what) {}
};

class NotRootedError : public Error {
public:
    explicit NotRootedError(const std::string& what) : Error(what) {}
};

class NotResilientError : public Error {
public:
    explicit NotResilientError(const std::string& what) : Error(what) {}
};

// The hull-intersection program has no feasible point; the Byzantine bound
// was violated or the existence hypothesis failed.
class NoIntersectionError : public Error {
public:
    explicit NoIntersectionError(const std::string& what) : Error(what) {}
};

// A linear system handed to the affine-set builder is not consistent, i.e.
// it was not a normal-equation system.
class InconsistentSystemError : public Error {
public:
    explicit InconsistentSystemError(const std::string& what) : Error(what) {}
};

class UnboundedError : public Error {
public:
    explicit UnboundedError(const std::string& what) : Error(what) {}
};

class SolverFailureError : public Error {
public:
    explicit SolverFailureError(const std::string& what) : Error(what) {}
};

class ParseError : public Error {
public:
    explicit ParseError(const std::string& what) : Error(what) {}
};

// A scenario failed its pre-run validation gate and --force was not given.
class ValidationError : public Error {
public:
    explicit ValidationError(const std::string& what) : Error(what) {}
};

}  // namespace rdls
