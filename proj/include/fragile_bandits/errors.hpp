#pragma once

#include <stdexcept>
#include <string>

namespace fragile_bandits {

struct DomainError : std::runtime_error {
    explicit DomainError(const std::string& msg) : std::runtime_error(msg) {}
};

struct AmbiguousOptimum : std::runtime_error {
    explicit AmbiguousOptimum(const std::string& msg) : std::runtime_error(msg) {}
};

struct NonBijective : std::runtime_error {
    explicit NonBijective(const std::string& msg) : std::runtime_error(msg) {}
};

struct ConvergenceError : std::runtime_error {
    explicit ConvergenceError(const std::string& msg) : std::runtime_error(msg) {}
};

struct SizeCapExceeded : std::runtime_error {
    explicit SizeCapExceeded(const std::string& msg) : std::runtime_error(msg) {}
};

struct PreconditionFailed : std::runtime_error {
    explicit PreconditionFailed(const std::string& msg) : std::runtime_error(msg) {}
};

struct DegeneratePosterior : std::runtime_error {
    explicit DegeneratePosterior(const std::string& msg) : std::runtime_error(msg) {}
};

struct GenerationFailed : std::runtime_error {
    explicit GenerationFailed(const std::string& msg) : std::runtime_error(msg) {}
};

struct Infeasible : std::runtime_error {
    explicit Infeasible(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace fragile_bandits
