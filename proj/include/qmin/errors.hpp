#pragma once

#include <stdexcept>
#include <string>

namespace qmin {

/// Malformed or out-of-domain user input (empty datasets, bad files, K > |S|).
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// The requested simulation does not fit the host (statevector too wide).
class ResourceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A file could not be read or written.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A caller broke a documented precondition (bad qubit index, width mismatch).
class ContractViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

namespace detail {

inline void require(bool cond, const std::string& what) {
    if (!cond) throw ContractViolation(what);
}

}  // namespace detail

}  // namespace qmin
