#pragma once

#include <stdexcept>
#include <string>

namespace parasplit {

/// Invalid or inconsistent user configuration (CLI exit status 2).
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Diffusion tensor not symmetric positive definite at a sampled point.
class EllipticityError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Mesh shape outside what the discretization supports (non-square meshes).
class UnsupportedMeshError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Requested operator splitting cannot represent the operator (e.g. mixed
/// derivatives under dimensional splitting).
class SplittingError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A stage matrix could not be factored.
class SingularMatrixError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Non-finite values appeared during time integration (CLI exit status 3).
class DivergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace parasplit
