#pragma once

#include <stdexcept>
#include <string>

namespace mulfs {

// Root of every error thrown by the library. kind() is a stable identifier
// used by the command-line front end when reporting failures as JSON.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& what) : std::runtime_error(what), kind_(std::move(kind)) {}
    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

class DescriptorMismatch : public Error {
public:
    explicit DescriptorMismatch(const std::string& what) : Error("DescriptorMismatch", what) {}
};

class ArityMismatch : public Error {
public:
    explicit ArityMismatch(const std::string& what) : Error("ArityMismatch", what) {}
};

class SingularError : public Error {
public:
    explicit SingularError(const std::string& what) : Error("SingularError", what) {}
};

class NonzeroConstantTerm : public Error {
public:
    explicit NonzeroConstantTerm(const std::string& what) : Error("NonzeroConstantTerm", what) {}
};

class NotCompInvertible : public Error {
public:
    explicit NotCompInvertible(const std::string& what) : Error("NotCompInvertible", what) {}
};

// A computation needed a component beyond the truncation order of its input.
class TruncationError : public Error {
public:
    explicit TruncationError(const std::string& what) : Error("TruncationError", what) {}
};

class SizeGuardExceeded : public Error {
public:
    explicit SizeGuardExceeded(const std::string& what) : Error("SizeGuardExceeded", what) {}
};

class CapExceeded : public Error {
public:
    explicit CapExceeded(const std::string& what) : Error("CapExceeded", what) {}
};

class InvalidPartition : public Error {
public:
    enum class Reason { malformed, coverage_gap, triple_cover, crossing, not_nearly_disjoint, shared_element, not_interval };

    InvalidPartition(Reason reason, const std::string& what) : Error("InvalidPartition", what), reason_(reason) {}
    Reason reason() const noexcept { return reason_; }

private:
    Reason reason_;
};

class NoPreimage : public Error {
public:
    explicit NoPreimage(const std::string& what) : Error("NoPreimage", what) {}
};

class PreconditionViolation : public Error {
public:
    explicit PreconditionViolation(const std::string& what) : Error("PreconditionViolation", what) {}
};

class SchemaError : public Error {
public:
    SchemaError(std::string path, const std::string& what)
        : Error("SchemaError", path + ": " + what), path_(std::move(path)) {}
    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

} // namespace mulfs
